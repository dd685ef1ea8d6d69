use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{add_into, KError, KLocalData, PairingData, SupportedElement};
use crate::space::Dim;
use crate::zlinalg::IntMatrix;

/// Collected invariant violations. Validation never stops at the first one.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub points_checked: usize,
    pub boundaries_checked: usize,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that groups exist on the window, boundaries live on
/// specialization pairs, and consecutive boundaries compose to zero.
pub fn validate<D: KLocalData>(data: &D) -> Result<ValidationReport, KError> {
    let mut report = ValidationReport::default();
    let bound = data.enumeration_bound();
    let Some((dlo, dhi)) = data.dim_range() else {
        return Ok(report);
    };
    let (wlo, whi) = data.window();
    let wlo = wlo.max(-2);
    let mut strata = Vec::new();
    for l in dlo..=dhi {
        strata.push((l, data.points_of_dim(l, bound)?));
    }
    let stratum = |l: i64| {
        strata
            .iter()
            .find(|(k, _)| *k == l)
            .map(|(_, v)| v.as_slice())
            .unwrap_or(&[])
    };

    for (_, pts) in &strata {
        for x in pts {
            report.points_checked += 1;
            for p in wlo..=whi {
                if let Err(e) = data.group_at(x, p) {
                    report.violations.push(format!("K_{p}({}): {e}", data.label(x)));
                }
            }
        }
    }

    for l in dlo..=dhi {
        for x in stratum(l) {
            for y in stratum(l - 1) {
                for p in wlo + 1..=whi {
                    report.boundaries_checked += 1;
                    match data.boundary(x, y, p) {
                        Ok(h) => {
                            if !data.specializes(x, y) && !h.is_zero() {
                                report.violations.push(format!(
                                    "boundary {} -> {} in degree {p} is nonzero but {} is not a specialization",
                                    data.label(x),
                                    data.label(y),
                                    data.label(y)
                                ));
                            }
                        }
                        Err(e) => report.violations.push(format!(
                            "boundary {} -> {} in degree {p}: {e}",
                            data.label(x),
                            data.label(y)
                        )),
                    }
                }
            }
        }
    }

    for l in dlo..=dhi {
        for x in stratum(l) {
            for z in stratum(l - 2) {
                if !data.specializes(x, z) {
                    continue;
                }
                for p in wlo + 2..=whi {
                    let src = data.group_at(x, p)?;
                    let dst = data.group_at(z, p - 2)?;
                    let mut total = IntMatrix::zeros(dst.generator_count(), src.generator_count());
                    for y in stratum(l - 1) {
                        let first = data.boundary(x, y, p)?;
                        let second = data.boundary(y, z, p - 1)?;
                        let m = second.matrix() * first.matrix();
                        total = add_matrices(&total, &m);
                    }
                    let nonzero = total
                        .columns()
                        .iter()
                        .any(|c| !dst.is_zero_element(c));
                    if nonzero {
                        report.violations.push(format!(
                            "d∘d ≠ 0 from {} to {} in degree {p}",
                            data.label(x),
                            data.label(z)
                        ));
                    }
                }
            }
        }
    }
    Ok(report)
}

fn add_matrices(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out[(i, j)] += &b[(i, j)];
        }
    }
    out
}

/// Checks that the pairing respects the relations of `K_0` on both sides
/// (bilinearity on generators), is symmetric, and has its unit on the
/// dimension-0 stratum. Only the given points are paired.
pub fn validate_pairing<D: PairingData>(data: &D, points: &[D::Point]) -> Result<ValidationReport, KError> {
    let mut report = ValidationReport::default();
    for (x, _) in data.unit() {
        if data.dim(&x) != Dim::Finite(0) {
            report
                .violations
                .push(format!("unit is supported at {} of dimension {}", data.label(&x), data.dim(&x)));
        }
    }
    let basis = |n: usize, i: usize| {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::one();
        v
    };
    let bound = data.enumeration_bound();
    for x in points {
        report.points_checked += 1;
        for y in points {
            let (Some(dx), Some(dy)) = (data.dim(x).finite(), data.dim(y).finite()) else {
                continue;
            };
            let common = data.common_specialization_dim(x, y, bound)?;
            if common.is_some_and(|c| c > Dim::Finite(dx + dy)) {
                continue;
            }
            let gx = data.group_at(x, 0)?;
            let gy = data.group_at(y, 0)?;
            report.boundaries_checked += 1;
            // products of generators
            let mut table = Vec::new();
            for i in 0..gx.generator_count() {
                let mut row = Vec::new();
                for j in 0..gy.generator_count() {
                    let ab = data.pair(x, &basis(gx.generator_count(), i), y, &basis(gy.generator_count(), j))?;
                    let ba = data.pair(y, &basis(gy.generator_count(), j), x, &basis(gx.generator_count(), i))?;
                    if !cycles_equal(data, &ab, &ba)? {
                        report.violations.push(format!(
                            "pairing of {} and {} is not symmetric",
                            data.label(x),
                            data.label(y)
                        ));
                    }
                    row.push(ab);
                }
                table.push(row);
            }
            // relations of K_0(x) paired with each generator of K_0(y), and vice versa
            let rel_x = gx.relations();
            for r in 0..rel_x.cols() {
                for j in 0..gy.generator_count() {
                    let mut acc = SupportedElement::new();
                    for i in 0..gx.generator_count() {
                        add_into(&mut acc, &scale(&table[i][j], &rel_x[(i, r)]));
                    }
                    if !cycle_is_zero(data, &acc)? {
                        report.violations.push(format!(
                            "pairing of {} and {} does not respect relation {r} of K_0({})",
                            data.label(x),
                            data.label(y),
                            data.label(x)
                        ));
                    }
                }
            }
            let rel_y = gy.relations();
            for r in 0..rel_y.cols() {
                for (i, row) in table.iter().enumerate() {
                    let mut acc = SupportedElement::new();
                    for (j, cell) in row.iter().enumerate() {
                        add_into(&mut acc, &scale(cell, &rel_y[(j, r)]));
                    }
                    if !cycle_is_zero(data, &acc)? {
                        report.violations.push(format!(
                            "pairing of generator {i} at {} with {} does not respect relation {r} of K_0({})",
                            data.label(x),
                            data.label(y),
                            data.label(y)
                        ));
                    }
                }
            }
        }
    }
    Ok(report)
}

fn scale<P: Ord + Clone>(e: &SupportedElement<P>, k: &BigInt) -> SupportedElement<P> {
    e.iter()
        .map(|(p, v)| (p.clone(), v.iter().map(|x| x * k).collect()))
        .collect()
}

fn cycle_is_zero<D: KLocalData>(data: &D, e: &SupportedElement<D::Point>) -> Result<bool, KError> {
    for (p, v) in e {
        if !data.group_at(p, 0)?.is_zero_element(v) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cycles_equal<D: KLocalData>(
    data: &D,
    a: &SupportedElement<D::Point>,
    b: &SupportedElement<D::Point>,
) -> Result<bool, KError> {
    let mut diff = a.clone();
    add_into(&mut diff, &scale(b, &BigInt::from(-1)));
    cycle_is_zero(data, &diff)
}
