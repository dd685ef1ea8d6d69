//! Sections of the sheaves `K^(l/l-1)_p`: finitely supported families over
//! the dimension-`l` points of an open. Restriction is projection.

use crate::klocal::{KError, KLocalData, SupportedElement};
use crate::space::{points_of_dim_within, Open, SpectralSpace};

use super::Term;

/// The group of sections over `u`.
pub fn sections_over<D: KLocalData>(data: &D, l: i64, p: i64, u: &Open<D::Point>) -> Result<Term<D::Point>, KError> {
    let pts = points_of_dim_within(data, l, Some(u), data.enumeration_bound())?;
    Term::new(data, l, p, pts)
}

pub fn restrict_section<S: SpectralSpace>(
    space: &S,
    s: &SupportedElement<S::Point>,
    v: &Open<S::Point>,
) -> SupportedElement<S::Point> {
    s.iter()
        .filter(|(x, _)| v.contains(space, x))
        .map(|(x, e)| (x.clone(), e.clone()))
        .collect()
}

/// Extends a section over `v` to `u ⊇ v` by zero. Returns `None` if the
/// section is not supported in `v`.
pub fn lift_section<S: SpectralSpace>(
    space: &S,
    s: &SupportedElement<S::Point>,
    v: &Open<S::Point>,
) -> Option<SupportedElement<S::Point>> {
    s.keys().all(|x| v.contains(space, x)).then(|| s.clone())
}
