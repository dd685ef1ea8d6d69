//! The projective plane over `F_q` as K-local data.
//!
//! Points: the generic point (dimension 0), irreducible curves of degree at
//! most the bound (dimension -1), closed points of degree at most the bound
//! (dimension -2).
//!
//! * `K_0 = Z` everywhere; `K_1(x) = Z/(q^n - 1)` at a closed point.
//! * `K_1(η)`: `F_q^*` and one free generator `F / z^{deg F}` per curve
//!   `F ≠ z`, with divisor `[F] - deg F [z]`.
//! * `K_1(W)` for a line `W`: `F_q^*` and one free generator per closed
//!   point `x ≠ ∞_W` on `W`, with divisor `[x] - deg x [∞_W]`, where `∞_W`
//!   is the smallest rational point of `W`. On a line every such divisor is
//!   principal (`k(W)` is a rational function field). Other curves carry
//!   only the constants.
//! * `K_2` lies outside the window, so the Gersten condition cannot be
//!   checked here; the backend asserts it.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use super::field::Gf;
use super::forms::{irreducible_forms, Form};
use super::plane::{intersection_cycle, share_component};
use super::points::{closed_points, count_closed_points, PlanePoint};
use super::VarietyError;
use crate::klocal::{KError, KLocalData, PairingData, SupportedElement};
use crate::space::{Dim, SpaceError, SpectralSpace};
use crate::zlinalg::{AbHom, FinAbGroup, IntMatrix};

/// Largest total number of enumerated curves and points.
pub const MAX_ENUMERATED: u128 = 3000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum P2Point {
    Generic,
    Curve(Form),
    Closed(PlanePoint),
}

impl P2Point {
    fn tag(&self) -> u8 {
        match self {
            P2Point::Generic => 0,
            P2Point::Curve(_) => 1,
            P2Point::Closed(_) => 2,
        }
    }

    /// Degree of a curve or residue degree of a closed point.
    pub fn degree(&self) -> usize {
        match self {
            P2Point::Generic => 0,
            P2Point::Curve(f) => f.degree() as usize,
            P2Point::Closed(z) => z.degree(),
        }
    }
}

impl Ord for P2Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tag().cmp(&other.tag()).then_with(|| match (self, other) {
            (P2Point::Curve(a), P2Point::Curve(b)) => a.cmp(b),
            (P2Point::Closed(a), P2Point::Closed(b)) => a.cmp(b),
            _ => Ordering::Equal,
        })
    }
}

impl PartialOrd for P2Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for P2Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P2Point::Generic => write!(f, "Generic"),
            P2Point::Curve(c) => write!(f, "Curve({c})"),
            P2Point::Closed(z) => write!(f, "Closed{z}"),
        }
    }
}

struct LineData {
    infinity: PlanePoint,
    others: Vec<PlanePoint>,
}

struct Enumeration {
    curves: Vec<Form>,
    points: Vec<PlanePoint>,
    lines: BTreeMap<Form, LineData>,
}

pub struct P2 {
    p: u32,
    bound: u32,
    z: Form,
    estimate: u128,
    enumeration: OnceLock<Enumeration>,
}

pub fn on_curve(f: &Form, x: &PlanePoint) -> bool {
    let k = x.field();
    k.is_zero(f.eval(&k, &x.coords()))
}

impl P2 {
    /// `P²` over `F_q` with curves and closed points of degree at most
    /// `bound` (1 or 2).
    pub fn new(q: u64, bound: u32) -> Result<P2, VarietyError> {
        if q > 97 {
            return Err(VarietyError::FieldTooLarge(q));
        }
        Gf::prime(q)?;
        if bound == 0 || bound > 2 {
            return Err(VarietyError::BadBound(bound));
        }
        let p = q as u32;
        let q128 = q as u128;
        // closed points, plus roughly twice the number of normalized forms
        let estimate: u128 = (1..=bound as usize).map(|n| count_closed_points(q128, n)).sum::<u128>()
            + (1..=bound).map(|d| q128.pow((d + 1) * (d + 2) / 2 - 1) * 2).sum::<u128>();
        Ok(P2 {
            p,
            bound,
            z: Form::var(p, 2),
            estimate,
            enumeration: OnceLock::new(),
        })
    }

    /// Curves and closed points within the bound, computed on first use.
    fn enumeration(&self) -> Result<&Enumeration, SpaceError> {
        if let Some(e) = self.enumeration.get() {
            return Ok(e);
        }
        if self.estimate > MAX_ENUMERATED {
            return Err(SpaceError::EnumerationTooLarge {
                count: self.estimate,
                limit: MAX_ENUMERATED,
            });
        }
        let (p, bound) = (self.p, self.bound);
        let mut curves = Vec::new();
        for d in 1..=bound {
            curves.extend(irreducible_forms(p, d));
        }
        curves.sort();
        let mut points = Vec::new();
        for n in 1..=bound as usize {
            points.extend(closed_points(p, n).expect("degree within the field limit"));
        }
        points.sort();
        let mut lines = BTreeMap::new();
        for w in curves.iter().filter(|f| f.degree() == 1) {
            let on: Vec<PlanePoint> = points.iter().filter(|x| on_curve(w, x)).cloned().collect();
            let infinity = on.iter().find(|x| x.degree() == 1).expect("lines have rational points").clone();
            let others = on.into_iter().filter(|x| *x != infinity).collect();
            lines.insert(w.clone(), LineData { infinity, others });
        }
        Ok(self.enumeration.get_or_init(|| Enumeration { curves, points, lines }))
    }

    pub fn q(&self) -> u64 {
        self.p as u64
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn curves(&self) -> Result<&[Form], SpaceError> {
        Ok(&self.enumeration()?.curves)
    }

    pub fn closed_points(&self) -> Result<&[PlanePoint], SpaceError> {
        Ok(&self.enumeration()?.points)
    }

    /// An irreducible curve, normalized.
    pub fn parse_curve(&self, text: &str) -> Result<Form, VarietyError> {
        let f = Form::parse(text, self.p)?;
        if f.degree() == 0 || !f.is_irreducible()? {
            return Err(VarietyError::NotACurve(text.to_string()));
        }
        Ok(f.normalized())
    }

    pub fn parse_point(&self, text: &str) -> Result<PlanePoint, VarietyError> {
        Ok(PlanePoint::parse(text, self.p)?)
    }

    /// The smallest rational point of a line, used as its base point.
    pub fn line_infinity(&self, w: &Form) -> Result<Option<&PlanePoint>, SpaceError> {
        Ok(self.enumeration()?.lines.get(w).map(|d| &d.infinity))
    }

    fn k1_generic_gens(&self) -> Result<impl Iterator<Item = &Form>, SpaceError> {
        Ok(self.enumeration()?.curves.iter().filter(|f| **f != self.z))
    }

    /// Zeros minus poles of `num / den` restricted to `w`.
    pub fn divisor_on_curve(&self, w: &Form, num: &Form, den: &Form) -> Result<Vec<(PlanePoint, i64)>, VarietyError> {
        if num.degree() != den.degree() {
            return Err(VarietyError::Form(super::FormError::NotHomogeneous));
        }
        if share_component(w, num) || share_component(w, den) {
            return Err(VarietyError::NotAUnitOnCurve);
        }
        let mut acc: BTreeMap<PlanePoint, i64> = BTreeMap::new();
        if num.degree() > 0 {
            for (z, m) in intersection_cycle(w, num)? {
                *acc.entry(z).or_insert(0) += m as i64;
            }
            for (z, m) in intersection_cycle(w, den)? {
                *acc.entry(z).or_insert(0) -= m as i64;
            }
        }
        Ok(acc.into_iter().filter(|(_, m)| *m != 0).collect())
    }

    /// Applies `F ↦ F ∘ M` to curves and `x ↦ M⁻¹ x` to points, so that
    /// incidence is preserved.
    pub fn transform(&self, x: &P2Point, m: &Pgl3) -> P2Point {
        match x {
            P2Point::Generic => P2Point::Generic,
            P2Point::Curve(f) => P2Point::Curve(f.compose(&m.m).normalized()),
            P2Point::Closed(z) => {
                let k = z.field();
                let c = z.coords();
                let mut out = [k.zero(); 3];
                for (i, slot) in out.iter_mut().enumerate() {
                    for (j, &cj) in c.iter().enumerate() {
                        *slot = k.add(*slot, k.mul(k.from_int(m.inv[i][j] as i64), cj));
                    }
                }
                P2Point::Closed(PlanePoint::from_coords(&k, out).expect("linear maps preserve orbits"))
            }
        }
    }

    fn known(&self, x: &P2Point) -> Result<(), KError> {
        match x {
            P2Point::Curve(f) if f.characteristic() != self.p || f.is_irreducible() != Ok(true) => Err(
                KError::Space(SpaceError::UnknownPoint(format!("{f} is not an irreducible curve"))),
            ),
            P2Point::Closed(z) if z.characteristic() != self.p => {
                Err(KError::Space(SpaceError::UnknownPoint(z.to_string())))
            }
            _ => Ok(()),
        }
    }

    fn within(&self, x: &P2Point, bound: Option<u32>) -> bool {
        x.degree() as u32 <= bound.unwrap_or(self.bound).min(self.bound)
    }
}

/// An invertible 3×3 matrix over `F_p` with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pgl3 {
    pub m: [[u32; 3]; 3],
    pub inv: [[u32; 3]; 3],
}

impl Pgl3 {
    pub fn random<R: Rng>(p: u32, rng: &mut R) -> Pgl3 {
        loop {
            let mut m = [[0u32; 3]; 3];
            for row in m.iter_mut() {
                for e in row.iter_mut() {
                    *e = rng.gen_range(0..p);
                }
            }
            if let Some(inv) = invert3(&m, p) {
                return Pgl3 { m, inv };
            }
        }
    }
}

fn invert3(m: &[[u32; 3]; 3], p: u32) -> Option<[[u32; 3]; 3]> {
    let p = p as i64;
    let a = |i: usize, j: usize| m[i][j] as i64;
    let cof = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0)
    };
    let det = (0..3).map(|j| a(0, j) * cof(0, j)).sum::<i64>().rem_euclid(p);
    if det == 0 {
        return None;
    }
    let mut dinv = 1i64;
    let mut e = p - 2;
    let mut b = det;
    while e > 0 {
        if e & 1 == 1 {
            dinv = dinv * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    let mut out = [[0u32; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = (cof(j, i) * dinv).rem_euclid(p) as u32;
        }
    }
    Some(out)
}

/// `Σ m_z deg z` over the closed points of a cycle.
pub fn zero_cycle_degree(z: &SupportedElement<P2Point>) -> BigInt {
    z.iter()
        .filter(|(x, _)| matches!(x, P2Point::Closed(_)))
        .map(|(x, c)| &c[0] * BigInt::from(x.degree()))
        .sum()
}

/// `Σ m_W deg W` over the curves of a cycle.
pub fn divisor_degree(z: &SupportedElement<P2Point>) -> BigInt {
    z.iter()
        .filter(|(x, _)| matches!(x, P2Point::Curve(_)))
        .map(|(x, c)| &c[0] * BigInt::from(x.degree()))
        .sum()
}

impl SpectralSpace for P2 {
    type Point = P2Point;

    fn points_of_dim(&self, l: i64, bound: Option<u32>) -> Result<Vec<P2Point>, SpaceError> {
        let all: Vec<P2Point> = match l {
            0 => vec![P2Point::Generic],
            -1 => self.curves()?.iter().cloned().map(P2Point::Curve).collect(),
            -2 => self.closed_points()?.iter().cloned().map(P2Point::Closed).collect(),
            _ => Vec::new(),
        };
        Ok(all.into_iter().filter(|x| self.within(x, bound)).collect())
    }

    fn specializes(&self, a: &P2Point, b: &P2Point) -> bool {
        match (a, b) {
            _ if a == b => true,
            (P2Point::Generic, _) => true,
            (P2Point::Curve(f), P2Point::Closed(z)) => on_curve(f, z),
            _ => false,
        }
    }

    fn dim(&self, p: &P2Point) -> Dim {
        Dim::Finite(-(p.tag() as i64))
    }

    fn label(&self, p: &P2Point) -> String {
        match p {
            P2Point::Generic => "X".into(),
            P2Point::Curve(f) => f.to_string(),
            P2Point::Closed(z) => z.to_string(),
        }
    }

    fn dim_range(&self) -> Option<(i64, i64)> {
        Some((-2, 0))
    }

    fn is_finite(&self) -> bool {
        false
    }

    fn common_specialization_dim(
        &self,
        a: &P2Point,
        b: &P2Point,
        _bound: Option<u32>,
    ) -> Result<Option<Dim>, SpaceError> {
        Ok(match (a, b) {
            (P2Point::Generic, x) | (x, P2Point::Generic) => Some(self.dim(x)),
            (P2Point::Curve(f), P2Point::Curve(g)) => Some(Dim::Finite(if share_component(f, g) { -1 } else { -2 })),
            (P2Point::Curve(f), P2Point::Closed(z)) | (P2Point::Closed(z), P2Point::Curve(f)) => {
                on_curve(f, z).then_some(Dim::Finite(-2))
            }
            (P2Point::Closed(x), P2Point::Closed(y)) => (x == y).then_some(Dim::Finite(-2)),
        })
    }
}

impl KLocalData for P2 {
    fn window(&self) -> (i64, i64) {
        (-1, 1)
    }

    fn group_at(&self, x: &P2Point, p: i64) -> Result<FinAbGroup, KError> {
        self.check_window(p)?;
        self.known(x)?;
        let units = BigInt::from(self.p - 1);
        Ok(match (x, p) {
            (_, 0) => FinAbGroup::free(1),
            (P2Point::Generic, 1) => {
                let mut orders = vec![units];
                orders.extend(self.k1_generic_gens()?.map(|_| BigInt::zero()));
                FinAbGroup::from_invariants(&orders)
            }
            (P2Point::Curve(w), 1) => {
                let mut orders = vec![units];
                if let Some(d) = self.enumeration()?.lines.get(w) {
                    orders.extend(d.others.iter().map(|_| BigInt::zero()));
                }
                FinAbGroup::from_invariants(&orders)
            }
            (P2Point::Closed(z), 1) => FinAbGroup::cyclic(BigInt::from(self.p).pow(z.degree() as u32) - 1),
            _ => FinAbGroup::trivial(),
        })
    }

    fn boundary(&self, from: &P2Point, to: &P2Point, p: i64) -> Result<AbHom, KError> {
        let src = self.group_at(from, p)?;
        let dst = self.group_at(to, p - 1)?;
        if p != 1 || from.tag() + 1 != to.tag() || !self.specializes(from, to) {
            return Ok(AbHom::zero(src, dst));
        }
        let row: Vec<BigInt> = match (from, to) {
            (P2Point::Generic, P2Point::Curve(w)) => std::iter::once(BigInt::zero())
                .chain(self.k1_generic_gens()?.map(|f| {
                    let mut v = BigInt::from((f == w) as i64);
                    if *w == self.z {
                        v -= f.degree() as i64;
                    }
                    v
                }))
                .collect(),
            (P2Point::Curve(w), P2Point::Closed(x)) => {
                let mut row = vec![BigInt::zero()];
                if let Some(d) = self.enumeration()?.lines.get(w) {
                    row.extend(d.others.iter().map(|y| {
                        let mut v = BigInt::from((y == x) as i64);
                        if *x == d.infinity {
                            v -= y.degree() as i64;
                        }
                        v
                    }));
                }
                row
            }
            _ => return Ok(AbHom::zero(src, dst)),
        };
        let m = IntMatrix::from_vec(1, row.len(), row);
        Ok(AbHom::new(src, dst, m)?)
    }

    fn enumeration_bound(&self) -> Option<u32> {
        Some(self.bound)
    }

    fn gersten_asserted(&self) -> bool {
        true
    }

    fn model_name(&self) -> String {
        format!("P2 over F_{} (curves and points of degree <= {})", self.p, self.bound)
    }
}

impl PairingData for P2 {
    fn unit(&self) -> SupportedElement<P2Point> {
        SupportedElement::from([(P2Point::Generic, vec![BigInt::from(1)])])
    }

    fn pair(&self, x: &P2Point, a: &[BigInt], y: &P2Point, b: &[BigInt]) -> Result<SupportedElement<P2Point>, KError> {
        let c = &a[0] * &b[0];
        let mut out = SupportedElement::new();
        if c.is_zero() {
            return Ok(out);
        }
        let improper = || KError::Backend(format!("{} and {} do not meet properly", self.label(x), self.label(y)));
        match (x, y) {
            (P2Point::Generic, other) | (other, P2Point::Generic) => {
                out.insert(other.clone(), vec![c]);
            }
            (P2Point::Curve(f), P2Point::Curve(g)) => {
                let cycle = intersection_cycle(f, g).map_err(|_| improper())?;
                for (z, m) in cycle {
                    out.insert(P2Point::Closed(z), vec![&c * BigInt::from(m)]);
                }
            }
            _ => {
                if self.common_specialization_dim(x, y, None)?.is_some() {
                    return Err(improper());
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::klocal::validate;
    use rand::SeedableRng;

    #[test]
    fn strata() {
        let x = P2::new(3, 1).unwrap();
        assert_eq!(x.dim_range(), Some((-2, 0)));
        assert_eq!(x.points_of_dim(-1, None).unwrap().len(), 13);
        assert_eq!(x.points_of_dim(-2, None).unwrap().len(), 13);
        assert!(validate(&x).unwrap().is_clean());
        let big = P2::new(97, 1).unwrap();
        assert!(matches!(big.points_of_dim(-1, None), Err(SpaceError::EnumerationTooLarge { .. })));
    }

    #[test]
    fn divisor_on_a_line() {
        let x = P2::new(3, 1).unwrap();
        let w = x.parse_curve("x + y + z").unwrap();
        let d = x.divisor_on_curve(&w, &Form::parse("x", 3).unwrap(), &Form::parse("y", 3).unwrap()).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.iter().map(|(z, m)| m * z.degree() as i64).sum::<i64>(), 0);
        let one = Form::constant(3, 1);
        assert!(x.divisor_on_curve(&w, &one, &one).unwrap().is_empty());
        assert_eq!(
            x.divisor_on_curve(&w, &Form::parse("x+y+z", 3).unwrap(), &Form::parse("y", 3).unwrap()),
            Err(VarietyError::NotAUnitOnCurve)
        );
    }

    #[test]
    fn transform_preserves_incidence() {
        let x = P2::new(3, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let m = Pgl3::random(3, &mut rng);
        for w in x.curves().unwrap() {
            for z in x.closed_points().unwrap() {
                let (cw, cz) = (P2Point::Curve(w.clone()), P2Point::Closed(z.clone()));
                assert_eq!(
                    x.specializes(&cw, &cz),
                    x.specializes(&x.transform(&cw, &m), &x.transform(&cz, &m))
                );
            }
        }
    }
}
