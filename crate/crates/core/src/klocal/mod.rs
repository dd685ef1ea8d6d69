//! Per-point K-groups and the boundary maps between them.
//!
//! K-groups enter as data: a backend states `K_p` at every point for `p`
//! in its window, and the connecting homomorphisms `K_p(x) -> K_{p-1}(y)`
//! for `y` a codimension-one specialization of `x`.

mod negative;
mod validate;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::space::{SpaceError, SpectralSpace};
use crate::zlinalg::{AbHom, FinAbGroup, ZLinAlgError};

pub use negative::{default_negative_k, DefaultNegativeK};
pub use validate::{validate, validate_pairing, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KError {
    #[error("K_{p} is outside the data window [{lo}, {hi}]")]
    Window { p: i64, lo: i64, hi: i64 },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Algebra(#[from] ZLinAlgError),
    #[error("{0}")]
    Backend(String),
}

/// A finitely supported family of local group elements, keyed by point.
/// Each value is a coordinate vector on the generators of the local group.
pub type SupportedElement<P> = BTreeMap<P, Vec<BigInt>>;

/// Drops zero entries (as elements of the given local groups).
pub fn prune<P: Ord + Clone>(
    e: &SupportedElement<P>,
    group: impl Fn(&P) -> FinAbGroup,
) -> SupportedElement<P> {
    e.iter()
        .filter(|(p, v)| !group(p).is_zero_element(v))
        .map(|(p, v)| (p.clone(), v.clone()))
        .collect()
}

/// Adds `b` into `a` coordinatewise.
pub fn add_into<P: Ord + Clone>(a: &mut SupportedElement<P>, b: &SupportedElement<P>) {
    for (p, v) in b {
        let slot = a.entry(p.clone()).or_insert_with(|| vec![BigInt::zero(); v.len()]);
        for (x, y) in slot.iter_mut().zip(v) {
            *x += y;
        }
    }
}

pub trait KLocalData: SpectralSpace {
    /// Inclusive range of `p` for which groups are tabulated.
    fn window(&self) -> (i64, i64);

    fn group_at(&self, x: &Self::Point, p: i64) -> Result<FinAbGroup, KError>;

    /// `K_p(from) -> K_{p-1}(to)`; zero unless `to` specializes `from`.
    fn boundary(&self, from: &Self::Point, to: &Self::Point, p: i64) -> Result<AbHom, KError>;

    /// Enumeration bound the data was truncated at, for infinite backends.
    fn enumeration_bound(&self) -> Option<u32> {
        None
    }

    /// The backend asserts the Gersten condition everywhere (varieties,
    /// where it is a theorem), so `im δ₁` may stand in for rational
    /// equivalence even where the data window is too small to check it.
    fn gersten_asserted(&self) -> bool {
        false
    }

    /// Explicit generators of rational equivalence in `Cyc_l`, when the
    /// backend supplies them.
    fn rational_equivalence(&self, _l: i64) -> Option<Vec<SupportedElement<Self::Point>>> {
        None
    }

    fn model_name(&self) -> String;

    fn check_window(&self, p: i64) -> Result<(), KError> {
        let (lo, hi) = self.window();
        if p < lo || p > hi {
            Err(KError::Window { p, lo, hi })
        } else {
            Ok(())
        }
    }
}

/// Multiplicative structure on `K_0`: a unit cycle and products of
/// generators at pairs of points.
pub trait PairingData: KLocalData {
    /// The class of the unit, a cycle on the dimension-0 points.
    fn unit(&self) -> SupportedElement<Self::Point>;

    /// Product of the `K_0` elements `a` at `x` and `b` at `y`, as a cycle
    /// in dimension `dim x + dim y`. Only called on proper pairs.
    fn pair(
        &self,
        x: &Self::Point,
        a: &[BigInt],
        y: &Self::Point,
        b: &[BigInt],
    ) -> Result<SupportedElement<Self::Point>, KError>;
}
