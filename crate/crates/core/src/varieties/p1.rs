//! The projective line over `F_q` as K-local data.
//!
//! Points are the generic point (dimension 0) and the closed points
//! (dimension -1): monic irreducibles `π` in `F_q[t]` and `∞`.
//!
//! * `K_0 = Z` everywhere, `K_1(x) = k(x)^* ≅ Z/(q^d - 1)` at closed points.
//! * `K_1(η)` is `F_q^*` times the free group on the places of degree at
//!   most the bound; a rational function `c ∏ π^{n_π}` has coordinates
//!   `(log_g c, n_π ...)`.
//! * `K_2(η)` is presented by one free symbol `{g_π, π}` per finite place,
//!   with `g_π` the canonical generator of `k(π)^*` lifted to a polynomial
//!   of degree `< deg π`. Their tame symbols reach every `K_1(x)`, which is
//!   all that the boundary computations see.
//! * Boundaries are valuations (`K_1 → K_0`) and tame symbols
//!   `{a, b} ↦ (-1)^{v(a)v(b)} a^{v(b)} b^{-v(a)}` (`K_2 → K_1`).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::field::{Fe, Gf};
use super::parse::parse_poly;
use super::poly::{count_irreducibles, factor, monic_irreducibles, Poly};
use super::VarietyError;
use crate::klocal::{KError, KLocalData, PairingData, SupportedElement};
use crate::space::{Dim, SpaceError, SpectralSpace};
use crate::zlinalg::{AbHom, FinAbGroup, IntMatrix};

/// Largest number of enumerated places accepted.
pub const MAX_PLACES: u128 = 5000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum P1Point {
    Generic,
    Finite(Poly),
    Infinity,
}

impl P1Point {
    pub fn residue_degree(&self) -> usize {
        match self {
            P1Point::Generic => 0,
            P1Point::Finite(f) => f.deg(),
            P1Point::Infinity => 1,
        }
    }

    fn rank(&self) -> (u8, usize, u8) {
        match self {
            P1Point::Generic => (0, 0, 0),
            P1Point::Finite(f) => (1, f.deg(), 0),
            P1Point::Infinity => (1, 1, 1),
        }
    }
}

/// Generic point first, then closed points by degree; `∞` follows the
/// finite places of degree 1.
impl Ord for P1Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank()).then_with(|| match (self, other) {
            (P1Point::Finite(a), P1Point::Finite(b)) => a.cmp(b),
            _ => Ordering::Equal,
        })
    }
}

impl PartialOrd for P1Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Generic => write!(f, "Generic"),
            P1Point::Finite(p) => write!(f, "Finite({p:?})"),
            P1Point::Infinity => write!(f, "Infinity"),
        }
    }
}

/// A nonzero rational function `num / den` on `P¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

struct PlaceData {
    field: Gf,
    generator: Fe,
    /// The generator as a polynomial in `t` of degree `< deg π`.
    lift: Poly,
}

pub struct P1 {
    k: Gf,
    bound: u32,
    g: Fe,
    places: Vec<Poly>,
    data: BTreeMap<Poly, PlaceData>,
    index: BTreeMap<Poly, usize>,
}

impl P1 {
    /// `P¹` over `F_q`, with places enumerated up to degree `bound`.
    pub fn new(q: u64, bound: u32) -> Result<P1, VarietyError> {
        if q > 97 {
            return Err(VarietyError::FieldTooLarge(q));
        }
        let k = Gf::prime(q)?;
        if bound == 0 {
            return Err(VarietyError::BadBound(bound));
        }
        let total: u128 = (1..=bound as usize)
            .map(|d| count_irreducibles(q as u128, d))
            .sum();
        if total > MAX_PLACES {
            return Err(VarietyError::TooManyPoints {
                count: total,
                limit: MAX_PLACES,
            });
        }
        let mut places = Vec::new();
        let mut data = BTreeMap::new();
        for d in 1..=bound as usize {
            for f in monic_irreducibles(&k, d) {
                let modulus: Vec<u32> = f
                    .coeffs()
                    .iter()
                    .map(|&c| k.prime_value(c).expect("prime field"))
                    .collect();
                let field = Gf::with_modulus(q, &modulus)?;
                let generator = field.primitive_element();
                let lift = Poly::from_prime_coeffs(&k, &field.coeffs(generator));
                data.insert(f.clone(), PlaceData { field, generator, lift });
                places.push(f);
            }
        }
        let index = places.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        let g = k.primitive_element();
        Ok(P1 {
            k,
            bound,
            g,
            places,
            data,
            index,
        })
    }

    pub fn field(&self) -> &Gf {
        &self.k
    }

    pub fn q(&self) -> u64 {
        self.k.order() as u64
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// Finite places within the bound, in canonical order.
    pub fn finite_places(&self) -> &[Poly] {
        &self.places
    }

    pub fn closed_points(&self) -> Vec<P1Point> {
        let mut out: Vec<P1Point> = self.places.iter().cloned().map(P1Point::Finite).collect();
        out.push(P1Point::Infinity);
        out.sort();
        out
    }

    /// Parses a monic irreducible in `t`, or `inf`.
    pub fn parse_place(&self, text: &str) -> Result<P1Point, VarietyError> {
        let text = text.trim();
        if matches!(text, "inf" | "∞" | "infinity") {
            return Ok(P1Point::Infinity);
        }
        let f = self.parse_poly(text)?;
        if !f.is_monic(&self.k) || !super::poly::is_irreducible(&self.k, &f) {
            return Err(VarietyError::NotAPlace(text.to_string()));
        }
        Ok(P1Point::Finite(f))
    }

    pub fn parse_poly(&self, text: &str) -> Result<Poly, VarietyError> {
        let sparse = parse_poly(text, &['t'], self.q())?;
        let deg = sparse.keys().map(|e| e[0] as usize).max().unwrap_or(0);
        let mut c = vec![0u32; deg + 1];
        for (e, v) in sparse {
            c[e[0] as usize] = v as u32;
        }
        Ok(Poly::from_prime_coeffs(&self.k, &c))
    }

    fn log(&self, a: Fe) -> BigInt {
        BigInt::from(self.k.dlog(self.g, a).expect("nonzero"))
    }

    /// Valuation of a nonzero polynomial at a closed point.
    pub fn valuation(&self, x: &P1Point, f: &Poly) -> i64 {
        match x {
            P1Point::Generic => 0,
            P1Point::Infinity => -(f.deg() as i64),
            P1Point::Finite(pi) => {
                let mut f = f.clone();
                let mut v = 0;
                while let Some(q) = f.div_exact(&self.k, pi) {
                    f = q;
                    v += 1;
                }
                v
            }
        }
    }

    /// Principal divisor of `f`, as a cycle with `K_0 = Z` coefficients.
    pub fn divisor_of(&self, f: &RationalFunction) -> Result<SupportedElement<P1Point>, VarietyError> {
        if f.num.is_zero() || f.den.is_zero() {
            return Err(VarietyError::ZeroFunction);
        }
        let mut div: BTreeMap<P1Point, i64> = BTreeMap::new();
        for (poly, sign) in [(&f.num, 1i64), (&f.den, -1)] {
            let fac = factor(&self.k, poly).expect("nonzero");
            for (irr, m) in fac.factors {
                *div.entry(P1Point::Finite(irr)).or_insert(0) += sign * m as i64;
            }
        }
        let at_inf = f.den.deg() as i64 - f.num.deg() as i64;
        *div.entry(P1Point::Infinity).or_insert(0) += at_inf;
        Ok(div
            .into_iter()
            .filter(|(_, n)| *n != 0)
            .map(|(x, n)| (x, vec![BigInt::from(n)]))
            .collect())
    }

    /// Coordinates of `f` in `K_1(η)`; every finite zero or pole must lie
    /// within the bound.
    pub fn k1_coordinates(&self, f: &RationalFunction) -> Result<Vec<BigInt>, VarietyError> {
        if f.num.is_zero() || f.den.is_zero() {
            return Err(VarietyError::ZeroFunction);
        }
        let mut v = vec![BigInt::zero(); self.places.len() + 1];
        let unit = self
            .k
            .div(f.num.lc().expect("nonzero"), f.den.lc().expect("nonzero"))
            .expect("nonzero");
        v[0] = self.log(unit);
        for (poly, sign) in [(&f.num, 1i64), (&f.den, -1)] {
            for (irr, m) in factor(&self.k, poly).expect("nonzero").factors {
                let i = *self
                    .index
                    .get(&irr)
                    .ok_or_else(|| VarietyError::OutsideBound(irr.display(&self.k, 't')))?;
                v[i + 1] += sign * m as i64;
            }
        }
        Ok(v)
    }

    /// A rational function whose divisor is the given degree-0 cycle:
    /// `∏ π^{n_π}` over the finite places.
    pub fn principal_witness(&self, d: &SupportedElement<P1Point>) -> Result<RationalFunction, VarietyError> {
        if !degree(d).is_zero() {
            return Err(VarietyError::NonzeroDegree(degree(d)));
        }
        let mut num = Poly::one(&self.k);
        let mut den = Poly::one(&self.k);
        for (x, c) in d {
            let P1Point::Finite(pi) = x else { continue };
            let n = i64::try_from(&c[0]).map_err(|_| VarietyError::CoefficientTooLarge)?;
            let part = pi.pow(&self.k, n.unsigned_abs());
            if n > 0 {
                num = num.mul(&self.k, &part);
            } else {
                den = den.mul(&self.k, &part);
            }
        }
        Ok(RationalFunction { num, den })
    }

    /// Unit part of `f` at `x` as an element of `k(x)`: `f / π^v` reduced.
    fn residue_unit(&self, x: &P1Point, f: &Poly) -> (i64, Fe, &Gf) {
        let v = self.valuation(x, f);
        match x {
            P1Point::Finite(pi) => {
                let pd = &self.data[pi];
                let mut u = f.clone();
                for _ in 0..v {
                    u = u.div_exact(&self.k, pi).expect("valuation");
                }
                let alpha = pd.field.alpha();
                let val = u.coeffs().iter().rev().fold(pd.field.zero(), |acc, &c| {
                    let c = pd.field.from_int(self.k.prime_value(c).expect("prime") as i64);
                    pd.field.add(pd.field.mul(acc, alpha), c)
                });
                (v, val, &pd.field)
            }
            _ => (v, f.lc().expect("nonzero"), &self.k),
        }
    }

    /// Tame symbol of `{a, b}` at a closed point within the bound, as a
    /// coordinate in `K_1(x) ≅ Z/(q^d - 1)`.
    pub fn tame_symbol(&self, x: &P1Point, a: &Poly, b: &Poly) -> BigInt {
        let (va, ua, field) = self.residue_unit(x, a);
        let (vb, ub, _) = self.residue_unit(x, b);
        let powi = |u: Fe, e: i64| -> Fe {
            let base = if e < 0 { field.inv(u).expect("unit") } else { u };
            field.pow(base, e.unsigned_abs() as u128)
        };
        let mut c = field.mul(powi(ua, vb), powi(ub, -va));
        if (va * vb) % 2 != 0 {
            c = field.neg(c);
        }
        let gen = match x {
            P1Point::Finite(pi) => self.data[pi].generator,
            _ => self.g,
        };
        BigInt::from(field.dlog(gen, c).expect("unit"))
    }

    fn k1_order(&self, x: &P1Point) -> BigInt {
        BigInt::from(self.q()).pow(x.residue_degree() as u32) - 1
    }

    fn in_bound(&self, x: &P1Point, bound: Option<u32>) -> bool {
        match x {
            P1Point::Generic | P1Point::Infinity => true,
            P1Point::Finite(f) => f.deg() as u32 <= bound.unwrap_or(self.bound).min(self.bound),
        }
    }

    fn known(&self, x: &P1Point) -> Result<(), KError> {
        match x {
            P1Point::Finite(f) if !self.index.contains_key(f) => Err(KError::Space(SpaceError::UnknownPoint(
                format!("place {} beyond the enumeration bound {}", f.display(&self.k, 't'), self.bound),
            ))),
            _ => Ok(()),
        }
    }
}

/// `Σ n_x deg(x)` over the closed points of a cycle.
pub fn degree(z: &SupportedElement<P1Point>) -> BigInt {
    z.iter()
        .map(|(x, c)| &c[0] * BigInt::from(x.residue_degree()))
        .sum()
}

impl SpectralSpace for P1 {
    type Point = P1Point;

    fn points_of_dim(&self, l: i64, bound: Option<u32>) -> Result<Vec<P1Point>, SpaceError> {
        Ok(match l {
            0 => vec![P1Point::Generic],
            -1 => self
                .closed_points()
                .into_iter()
                .filter(|x| self.in_bound(x, bound))
                .collect(),
            _ => Vec::new(),
        })
    }

    fn specializes(&self, a: &P1Point, b: &P1Point) -> bool {
        a == b || *a == P1Point::Generic
    }

    fn dim(&self, p: &P1Point) -> Dim {
        match p {
            P1Point::Generic => Dim::Finite(0),
            _ => Dim::Finite(-1),
        }
    }

    fn label(&self, p: &P1Point) -> String {
        match p {
            P1Point::Generic => "X".into(),
            P1Point::Finite(f) => f.display(&self.k, 't'),
            P1Point::Infinity => "inf".into(),
        }
    }

    fn dim_range(&self) -> Option<(i64, i64)> {
        Some((-1, 0))
    }

    fn is_finite(&self) -> bool {
        false
    }
}

impl KLocalData for P1 {
    fn window(&self) -> (i64, i64) {
        (-1, 2)
    }

    fn group_at(&self, x: &P1Point, p: i64) -> Result<FinAbGroup, KError> {
        self.check_window(p)?;
        self.known(x)?;
        Ok(match (x, p) {
            (_, 0) => FinAbGroup::free(1),
            (P1Point::Generic, 1) => {
                let mut orders = vec![BigInt::from(self.q() - 1)];
                orders.extend(std::iter::repeat_n(BigInt::zero(), self.places.len()));
                FinAbGroup::from_invariants(&orders)
            }
            (P1Point::Generic, 2) => FinAbGroup::free(self.places.len()),
            (_, 1) => FinAbGroup::cyclic(self.k1_order(x)),
            _ => FinAbGroup::trivial(),
        })
    }

    fn boundary(&self, from: &P1Point, to: &P1Point, p: i64) -> Result<AbHom, KError> {
        let src = self.group_at(from, p)?;
        let dst = self.group_at(to, p - 1)?;
        if *from != P1Point::Generic || *to == P1Point::Generic {
            return Ok(AbHom::zero(src, dst));
        }
        let row: Vec<BigInt> = match p {
            1 => std::iter::once(BigInt::zero())
                .chain(self.places.iter().map(|pi| BigInt::from(self.valuation(to, pi))))
                .collect(),
            2 => self
                .places
                .iter()
                .map(|pi| self.tame_symbol(to, &self.data[pi].lift, pi))
                .collect(),
            _ => return Ok(AbHom::zero(src, dst)),
        };
        let m = IntMatrix::from_vec(1, row.len(), row);
        Ok(AbHom::new(src, dst, m)?)
    }

    fn enumeration_bound(&self) -> Option<u32> {
        Some(self.bound)
    }

    fn model_name(&self) -> String {
        format!("P1 over F_{} (places of degree <= {})", self.q(), self.bound)
    }
}

impl PairingData for P1 {
    fn unit(&self) -> SupportedElement<P1Point> {
        SupportedElement::from([(P1Point::Generic, vec![BigInt::from(1)])])
    }

    fn pair(&self, x: &P1Point, a: &[BigInt], y: &P1Point, b: &[BigInt]) -> Result<SupportedElement<P1Point>, KError> {
        let prod = vec![&a[0] * &b[0]];
        let at = match (x, y) {
            (P1Point::Generic, other) | (other, P1Point::Generic) => other.clone(),
            _ if x == y => {
                return Err(KError::Backend(format!(
                    "self-intersection of {} is not proper",
                    self.label(x)
                )))
            }
            // distinct closed points meet nowhere
            _ => return Ok(SupportedElement::new()),
        };
        let mut out = SupportedElement::new();
        if !prod[0].is_zero() {
            out.insert(at, prod);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::klocal::validate;

    #[test]
    fn place_counts() {
        // t, t+1, t^2+t+1 and ∞
        let x = P1::new(2, 2).unwrap();
        assert_eq!(x.points_of_dim(-1, None).unwrap().len(), 4);
        assert!(P1::new(4, 2).is_err());
    }

    #[test]
    fn divisors() {
        let x = P1::new(3, 2).unwrap();
        let t = x.parse_poly("t").unwrap();
        let one = Poly::one(x.field());
        let d = x.divisor_of(&RationalFunction { num: t.clone(), den: one.clone() }).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[&P1Point::Finite(t.clone())], vec![BigInt::from(1)]);
        assert_eq!(d[&P1Point::Infinity], vec![BigInt::from(-1)]);

        let f = RationalFunction {
            num: x.parse_poly("t^2+1").unwrap(),
            den: t.clone(),
        };
        let d = x.divisor_of(&f).unwrap();
        assert_eq!(d[&x.parse_place("t^2+1").unwrap()], vec![BigInt::from(1)]);
        assert_eq!(d[&P1Point::Finite(t)], vec![BigInt::from(-1)]);
        assert_eq!(d[&P1Point::Infinity], vec![BigInt::from(-1)]);
        assert_eq!(degree(&d), BigInt::zero());

        let c = RationalFunction {
            num: x.parse_poly("2").unwrap(),
            den: one,
        };
        assert!(x.divisor_of(&c).unwrap().is_empty());
    }

    #[test]
    fn boundary_matches_divisor() {
        let x = P1::new(3, 2).unwrap();
        let f = RationalFunction {
            num: x.parse_poly("2*(t^2+1)*(t+2)^2").unwrap(),
            den: x.parse_poly("t^3").unwrap(),
        };
        let coords = x.k1_coordinates(&f).unwrap();
        let div = x.divisor_of(&f).unwrap();
        for pt in x.closed_points() {
            let image = x.boundary(&P1Point::Generic, &pt, 1).unwrap().apply(&coords);
            let expected = div.get(&pt).cloned().unwrap_or(vec![BigInt::zero()]);
            assert_eq!(image, expected, "at {}", x.label(&pt));
        }
    }

    #[test]
    fn validates() {
        for (q, b) in [(2, 3), (3, 2), (5, 1)] {
            let x = P1::new(q, b).unwrap();
            let report = validate(&x).unwrap();
            assert!(report.is_clean(), "{:?}", report.violations);
        }
    }

    #[test]
    fn tame_symbol_at_own_place_is_generator() {
        let x = P1::new(3, 2).unwrap();
        for pi in x.finite_places() {
            let s = x.tame_symbol(&P1Point::Finite(pi.clone()), &x.data[pi].lift, pi);
            assert_eq!(s, BigInt::from(1));
        }
    }
}
