//! Gersten rows, the Gersten condition, cycle and Chow groups, and the
//! cohomology computed by the Bloch formula.
//!
//! Dimensions `l` follow the model's dimension function (`l <= 0` on the
//! variety backends); the row for target degree `p` has terms
//! `C^k = ⊕_{dim x = -k} K_{p-k}(x)` for `k = 0..=p+1`.

mod sheaf;
mod term;

use serde::Serialize;

use crate::klocal::{KError, KLocalData, SupportedElement};
use crate::space::SpaceError;
use crate::zlinalg::{
    image, kernel, quotient_of_subgroups, subquotient, AbHom, FinAbGroup, GroupInvariants, IntMatrix, Subgroup,
    ZLinAlgError,
};

pub use sheaf::{lift_section, restrict_section, sections_over};
pub use term::{differential, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GerstenError {
    #[error(transparent)]
    K(#[from] KError),
    #[error("no rational equivalence data for dimension {l}: {reason}")]
    MissingData { l: i64, reason: String },
    #[error("Gersten condition fails: {0}")]
    Violation(String),
    #[error("Gersten condition cannot be checked: {0}")]
    Unverifiable(String),
    #[error("infinite dimension values cannot enter a Gersten row")]
    InfiniteDimension,
}

impl From<SpaceError> for GerstenError {
    fn from(e: SpaceError) -> Self {
        GerstenError::K(e.into())
    }
}

impl From<ZLinAlgError> for GerstenError {
    fn from(e: ZLinAlgError) -> Self {
        GerstenError::K(e.into())
    }
}

/// The stratum `⊕_{dim x = l} K_p(x)` over all (bounded) points.
pub fn stratum<D: KLocalData>(data: &D, l: i64, p: i64) -> Result<Term<D::Point>, GerstenError> {
    let pts = data.points_of_dim(l, data.enumeration_bound())?;
    Ok(Term::new(data, l, p, pts)?)
}

/// `Cyc_l = ⊕_{dim x = l} K_0(x)`.
pub fn cycle_group<D: KLocalData>(data: &D, l: i64) -> Result<Term<D::Point>, GerstenError> {
    stratum(data, l, 0)
}

/// `δ₁ : ⊕_{dim l+1} K_1 -> ⊕_{dim l} K_0`.
pub fn delta1<D: KLocalData>(data: &D, l: i64) -> Result<AbHom, GerstenError> {
    Ok(differential(data, &stratum(data, l + 1, 1)?, &stratum(data, l, 0)?)?)
}

/// `δ₀ : ⊕_{dim l} K_0 -> ⊕_{dim l-1} K_{-1}`.
pub fn delta0<D: KLocalData>(data: &D, l: i64) -> Result<AbHom, GerstenError> {
    Ok(differential(data, &stratum(data, l, 0)?, &stratum(data, l - 1, -1)?)?)
}

/// The row computing the cohomology of `K^(0)_p`.
#[derive(Debug, Clone)]
pub struct GerstenRow<P> {
    pub target_p: i64,
    pub terms: Vec<Term<P>>,
    /// `differentials[k] : C^k -> C^{k+1}`
    pub differentials: Vec<AbHom>,
}

impl<P: Clone + Ord> GerstenRow<P> {
    pub fn build<D: KLocalData<Point = P>>(data: &D, p: i64) -> Result<Self, GerstenError> {
        assert!(p >= 0, "rows are indexed by p >= 0");
        let mut terms = Vec::new();
        for k in 0..=p + 1 {
            terms.push(stratum(data, -k, p - k)?);
        }
        let mut differentials = Vec::new();
        for k in 0..terms.len() - 1 {
            differentials.push(differential(data, &terms[k], &terms[k + 1])?);
        }
        Ok(GerstenRow {
            target_p: p,
            terms,
            differentials,
        })
    }

    /// `H^i` of the row, `0 <= i <= p`.
    pub fn cohomology(&self, i: usize) -> Result<FinAbGroup, GerstenError> {
        let out = &self.differentials[i];
        let inc = if i == 0 {
            AbHom::zero(FinAbGroup::trivial(), self.terms[0].group.clone())
        } else {
            self.differentials[i - 1].clone()
        };
        Ok(subquotient(&inc, out)?.group)
    }

    /// Checks `d∘d = 0` on the whole row.
    pub fn is_complex(&self) -> bool {
        self.differentials
            .windows(2)
            .all(|w| w[0].then(&w[1]).map(|h| h.is_zero()).unwrap_or(false))
    }
}

/// Outcome of a Gersten check at one bidegree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "detail", rename_all = "snake_case")]
pub enum GerstenOutcome {
    Holds,
    Fails(String),
    Unverifiable(String),
}

impl GerstenOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, GerstenOutcome::Holds)
    }
}

/// Decides the Gersten condition in bidegree `(l, p)`: the map
/// `K^(l-1)_p -> K^(l)_p` vanishes on every stalk, i.e. the local sequence
/// `⊕_{dim l} K_{p+1} -> ⊕_{dim l-1} K_p -> ⊕_{dim l-2} K_{p-1}` over the
/// generizations of each point is exact in the middle.
pub fn gersten_holds<D: KLocalData>(data: &D, l: i64, p: i64) -> Result<bool, GerstenError> {
    match gersten_check(data, l, p)? {
        GerstenOutcome::Holds => Ok(true),
        GerstenOutcome::Fails(_) => Ok(false),
        GerstenOutcome::Unverifiable(why) => Err(GerstenError::Unverifiable(why)),
    }
}

pub fn gersten_check<D: KLocalData>(data: &D, l: i64, p: i64) -> Result<GerstenOutcome, GerstenError> {
    let bound = data.enumeration_bound();
    let Some((lo, _)) = data.dim_range() else {
        return Ok(GerstenOutcome::Holds);
    };
    for m in lo..=l - 1 {
        for q in data.points_of_dim(m, bound)? {
            let mid = data.generizations_of_dim(&q, l - 1, bound)?;
            if mid.is_empty() {
                continue;
            }
            let top = data.generizations_of_dim(&q, l, bound)?;
            let low = data.generizations_of_dim(&q, l - 2, bound)?;
            let terms = (|| -> Result<_, KError> {
                Ok((
                    Term::new(data, l, p + 1, top)?,
                    Term::new(data, l - 1, p, mid)?,
                    Term::new(data, l - 2, p - 1, low)?,
                ))
            })();
            let (a, b, c) = match terms {
                Ok(t) => t,
                Err(KError::Window { p: k, lo, hi }) => {
                    return Ok(GerstenOutcome::Unverifiable(format!(
                        "bidegree ({l}, {p}) needs K_{k}, outside the data window [{lo}, {hi}]"
                    )))
                }
                Err(e) => return Err(e.into()),
            };
            let d_in = differential(data, &a, &b)?;
            let d_out = differential(data, &b, &c)?;
            match subquotient(&d_in, &d_out) {
                Ok(h) if h.group.is_trivial() => {}
                Ok(h) => {
                    return Ok(GerstenOutcome::Fails(format!(
                        "bidegree ({l}, {p}): local sequence at {} has homology {}",
                        data.label(&q),
                        h.group
                    )))
                }
                Err(ZLinAlgError::NotAComplex) => {
                    return Ok(GerstenOutcome::Fails(format!(
                        "bidegree ({l}, {p}): boundaries at {} do not compose to zero",
                        data.label(&q)
                    )))
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(GerstenOutcome::Holds)
}

/// One entry of the bidegree rectangle check.
#[derive(Debug, Clone, Serialize)]
pub struct BidegreeCheck {
    pub l: i64,
    pub p: i64,
    #[serde(flatten)]
    pub outcome: GerstenOutcome,
}

/// The rectangle `-p-2 <= i <= 0`, `-1 <= j <= p` required by the Bloch
/// formula in degree `p`.
pub fn gersten_rectangle<D: KLocalData>(data: &D, p: i64) -> Result<Vec<BidegreeCheck>, GerstenError> {
    let mut out = Vec::new();
    for i in (-p - 2)..=0 {
        for j in -1..=p {
            out.push(BidegreeCheck {
                l: i,
                p: j,
                outcome: gersten_check(data, i, j)?,
            });
        }
    }
    Ok(out)
}

/// Summarizes a rectangle: the first failure if any, else the first
/// unverifiable entry, else `Holds`.
pub fn rectangle_verdict(checks: &[BidegreeCheck]) -> GerstenOutcome {
    if let Some(c) = checks.iter().find(|c| matches!(c.outcome, GerstenOutcome::Fails(_))) {
        return c.outcome.clone();
    }
    if let Some(c) = checks.iter().find(|c| matches!(c.outcome, GerstenOutcome::Unverifiable(_))) {
        return c.outcome.clone();
    }
    GerstenOutcome::Holds
}

/// Where the rational-equivalence subgroup came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationSource {
    /// Supplied by the model.
    Explicit,
    /// `im δ₁`, with the Gersten rectangle verified on the data.
    ImageVerified,
    /// `im δ₁`, with the Gersten condition asserted by the backend.
    ImageAsserted,
}

/// Rational equivalence inside `Cyc_l`.
pub fn rational_equivalence<D: KLocalData>(
    data: &D,
    cycles: &Term<D::Point>,
) -> Result<(Subgroup, RelationSource), GerstenError> {
    let l = cycles.l;
    if let Some(gens) = data.rational_equivalence(l) {
        let cols = gens
            .iter()
            .map(|g| {
                cycles.flatten(g).ok_or_else(|| GerstenError::MissingData {
                    l,
                    reason: "explicit relation is supported off the stratum".to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let m = IntMatrix::from_columns(cycles.rank(), &cols);
        return Ok((Subgroup::generated_by(&cycles.group, &m), RelationSource::Explicit));
    }
    let src = stratum(data, l + 1, 1);
    let image_of_delta1 = || -> Result<Subgroup, GerstenError> {
        let d = differential(data, &src.clone()?, cycles)?;
        Ok(image(&d))
    };
    if data.gersten_asserted() {
        return Ok((image_of_delta1()?, RelationSource::ImageAsserted));
    }
    if l > 0 {
        return Err(GerstenError::MissingData {
            l,
            reason: "rows exist only for l <= 0".to_string(),
        });
    }
    match rectangle_verdict(&gersten_rectangle(data, -l)?) {
        GerstenOutcome::Holds => Ok((image_of_delta1()?, RelationSource::ImageVerified)),
        GerstenOutcome::Fails(why) | GerstenOutcome::Unverifiable(why) => Err(GerstenError::MissingData {
            l,
            reason: format!("model gives no relations and im δ₁ is not justified ({why})"),
        }),
    }
}

/// A Chow group with its presentation data.
#[derive(Debug, Clone)]
pub struct ChowGroup<P> {
    pub cycles: Term<P>,
    /// `∩Cyc_l` as a subgroup of `Cyc_l`.
    pub cap_cycles: Subgroup,
    pub relations: Subgroup,
    pub source: RelationSource,
    pub chow: FinAbGroup,
    pub cap_chow: FinAbGroup,
}

impl<P: Clone + Ord> ChowGroup<P> {
    /// Whether two cycles are rationally equivalent.
    pub fn equivalent(&self, a: &SupportedElement<P>, b: &SupportedElement<P>) -> Option<bool> {
        let va = self.cycles.flatten(a)?;
        let vb = self.cycles.flatten(b)?;
        let diff: Vec<_> = va.iter().zip(&vb).map(|(x, y)| x - y).collect();
        Some(self.relations.contains(&diff))
    }
}

/// `CH_l` and `∩CH_l`.
pub fn chow_group<D: KLocalData>(data: &D, l: i64) -> Result<ChowGroup<D::Point>, GerstenError> {
    let cycles = cycle_group(data, l)?;
    let d0 = differential(data, &cycles, &stratum(data, l - 1, -1)?)?;
    let cap_cycles = kernel(&d0);
    let (relations, source) = rational_equivalence(data, &cycles)?;
    let whole = Subgroup::whole(&cycles.group);
    let chow = quotient_of_subgroups(&whole, &relations)?;
    let cap_chow = quotient_of_subgroups(&cap_cycles, &relations).map_err(|_| GerstenError::MissingData {
        l,
        reason: "rational equivalence is not contained in the ∩-cycles".to_string(),
    })?;
    Ok(ChowGroup {
        cycles,
        cap_cycles,
        relations,
        source,
        chow,
        cap_chow,
    })
}

pub fn cap_chow_group<D: KLocalData>(data: &D, l: i64) -> Result<FinAbGroup, GerstenError> {
    Ok(chow_group(data, l)?.cap_chow)
}

/// `H^p` of the row for `p`, after checking the Gersten rectangle. A failed
/// or unverifiable rectangle is an error, never silently skipped.
pub fn bloch_cohomology<D: KLocalData>(data: &D, p: i64) -> Result<FinAbGroup, GerstenError> {
    match rectangle_verdict(&gersten_rectangle(data, p)?) {
        GerstenOutcome::Holds => {}
        GerstenOutcome::Fails(why) => return Err(GerstenError::Violation(why)),
        GerstenOutcome::Unverifiable(why) => return Err(GerstenError::Unverifiable(why)),
    }
    raw_cohomology(data, p, p as usize)
}

/// `H^i` of the row for `p`, without any precondition. For `i != p` this
/// group has no name attached.
pub fn raw_cohomology<D: KLocalData>(data: &D, p: i64, i: usize) -> Result<FinAbGroup, GerstenError> {
    GerstenRow::build(data, p)?.cohomology(i)
}

/// Serializable summary of a group.
#[derive(Debug, Clone, Serialize)]
pub struct GroupReport {
    pub invariants: GroupInvariants,
    pub display: String,
}

impl From<&FinAbGroup> for GroupReport {
    fn from(g: &FinAbGroup) -> Self {
        GroupReport {
            invariants: g.invariants(),
            display: g.to_string(),
        }
    }
}
