use num_bigint::BigInt;
use num_traits::Zero;

use crate::klocal::{KError, KLocalData, SupportedElement};
use crate::zlinalg::{AbHom, FinAbGroup, IntMatrix};

/// `⊕ K_p(x)` over a finite list of points, presented on the concatenated
/// generators.
#[derive(Debug, Clone)]
pub struct Term<P> {
    pub l: i64,
    pub p: i64,
    pub points: Vec<P>,
    pub local: Vec<FinAbGroup>,
    offsets: Vec<usize>,
    pub group: FinAbGroup,
}

impl<P: Clone + Ord> Term<P> {
    pub fn new<D: KLocalData<Point = P>>(data: &D, l: i64, p: i64, points: Vec<P>) -> Result<Self, KError> {
        let local = points
            .iter()
            .map(|x| data.group_at(x, p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_parts(l, p, points, local))
    }

    /// A term with no points; needs no data.
    pub fn empty(l: i64, p: i64) -> Self {
        Self::from_parts(l, p, Vec::new(), Vec::new())
    }

    fn from_parts(l: i64, p: i64, points: Vec<P>, local: Vec<FinAbGroup>) -> Self {
        let mut offsets = Vec::with_capacity(local.len() + 1);
        let mut n = 0;
        for g in &local {
            offsets.push(n);
            n += g.generator_count();
        }
        offsets.push(n);
        let group = FinAbGroup::direct_sum_all(&local);
        Term {
            l,
            p,
            points,
            local,
            offsets,
            group,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.offsets[self.points.len()]
    }

    pub fn index_of(&self, x: &P) -> Option<usize> {
        self.points.iter().position(|y| y == x)
    }

    /// Generator range belonging to the `i`-th point.
    pub fn block(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// Flattens a supported element. Points outside the term are an error.
    pub fn flatten(&self, e: &SupportedElement<P>) -> Option<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.rank()];
        for (x, coords) in e {
            let i = self.index_of(x)?;
            let r = self.block(i);
            if coords.len() != r.len() {
                return None;
            }
            for (slot, c) in v[r].iter_mut().zip(coords) {
                *slot += c;
            }
        }
        Some(v)
    }

    /// Splits a flat vector back into per-point entries, dropping zeros.
    pub fn unflatten(&self, v: &[BigInt]) -> SupportedElement<P> {
        let mut out = SupportedElement::new();
        for (i, x) in self.points.iter().enumerate() {
            let coords = v[self.block(i)].to_vec();
            if !self.local[i].is_zero_element(&coords) {
                out.insert(x.clone(), coords);
            }
        }
        out
    }
}

/// The differential `⊕ K_p(dim l) -> ⊕ K_{p-1}(dim l-1)` assembled from
/// boundary blocks on specialization pairs.
pub fn differential<D: KLocalData>(data: &D, src: &Term<D::Point>, dst: &Term<D::Point>) -> Result<AbHom, KError> {
    assert_eq!(src.l - 1, dst.l);
    assert_eq!(src.p - 1, dst.p);
    let mut m = IntMatrix::zeros(dst.rank(), src.rank());
    if src.rank() > 0 && dst.rank() > 0 {
        for (i, x) in src.points.iter().enumerate() {
            for (j, y) in dst.points.iter().enumerate() {
                if !data.specializes(x, y) {
                    continue;
                }
                let b = data.boundary(x, y, src.p)?;
                let (rs, rd) = (src.block(i), dst.block(j));
                for (a, r) in rd.clone().enumerate() {
                    for (c, s) in rs.clone().enumerate() {
                        m[(r, s)] = b.matrix()[(a, c)].clone();
                    }
                }
            }
        }
    }
    Ok(AbHom::new(src.group.clone(), dst.group.clone(), m)?)
}
