use num_bigint::BigInt;

use super::{KError, KLocalData, PairingData, SupportedElement};
use crate::space::{Dim, SpaceError, SpectralSpace};
use crate::zlinalg::{AbHom, FinAbGroup};

/// Extends a model's data downward by zero groups in every negative degree
/// below its window. Tabulated groups are left alone.
#[derive(Debug, Clone)]
pub struct DefaultNegativeK<D> {
    inner: D,
}

pub fn default_negative_k<D: KLocalData>(data: D) -> DefaultNegativeK<D> {
    DefaultNegativeK { inner: data }
}

impl<D> DefaultNegativeK<D> {
    pub fn inner(&self) -> &D {
        &self.inner
    }

    pub fn into_inner(self) -> D {
        self.inner
    }
}

impl<D: KLocalData> DefaultNegativeK<D> {
    fn defaulted(&self, p: i64) -> bool {
        p <= -1 && p < self.inner.window().0
    }
}

impl<D: SpectralSpace> SpectralSpace for DefaultNegativeK<D> {
    type Point = D::Point;

    fn points_of_dim(&self, l: i64, bound: Option<u32>) -> Result<Vec<D::Point>, SpaceError> {
        self.inner.points_of_dim(l, bound)
    }

    fn specializes(&self, a: &D::Point, b: &D::Point) -> bool {
        self.inner.specializes(a, b)
    }

    fn dim(&self, p: &D::Point) -> Dim {
        self.inner.dim(p)
    }

    fn label(&self, p: &D::Point) -> String {
        self.inner.label(p)
    }

    fn dim_range(&self) -> Option<(i64, i64)> {
        self.inner.dim_range()
    }

    fn is_finite(&self) -> bool {
        self.inner.is_finite()
    }

    fn generizations_of_dim(&self, q: &D::Point, l: i64, bound: Option<u32>) -> Result<Vec<D::Point>, SpaceError> {
        self.inner.generizations_of_dim(q, l, bound)
    }

    fn all_points(&self, bound: Option<u32>) -> Result<Vec<D::Point>, SpaceError> {
        self.inner.all_points(bound)
    }

    fn common_specialization_dim(
        &self,
        a: &D::Point,
        b: &D::Point,
        bound: Option<u32>,
    ) -> Result<Option<Dim>, SpaceError> {
        self.inner.common_specialization_dim(a, b, bound)
    }
}

impl<D: KLocalData> KLocalData for DefaultNegativeK<D> {
    fn window(&self) -> (i64, i64) {
        (i64::MIN, self.inner.window().1)
    }

    fn group_at(&self, x: &D::Point, p: i64) -> Result<FinAbGroup, KError> {
        if self.defaulted(p) {
            Ok(FinAbGroup::trivial())
        } else {
            self.inner.group_at(x, p)
        }
    }

    fn boundary(&self, from: &D::Point, to: &D::Point, p: i64) -> Result<AbHom, KError> {
        if self.defaulted(p) || self.defaulted(p - 1) {
            let src = self.group_at(from, p)?;
            let dst = self.group_at(to, p - 1)?;
            Ok(AbHom::zero(src, dst))
        } else {
            self.inner.boundary(from, to, p)
        }
    }

    fn enumeration_bound(&self) -> Option<u32> {
        self.inner.enumeration_bound()
    }

    fn gersten_asserted(&self) -> bool {
        self.inner.gersten_asserted()
    }

    fn rational_equivalence(&self, l: i64) -> Option<Vec<SupportedElement<D::Point>>> {
        self.inner.rational_equivalence(l)
    }

    fn model_name(&self) -> String {
        self.inner.model_name()
    }
}

impl<D: PairingData> PairingData for DefaultNegativeK<D> {
    fn unit(&self) -> SupportedElement<D::Point> {
        self.inner.unit()
    }

    fn pair(
        &self,
        x: &D::Point,
        a: &[BigInt],
        y: &D::Point,
        b: &[BigInt],
    ) -> Result<SupportedElement<D::Point>, KError> {
        self.inner.pair(x, a, y, b)
    }
}
