//! Univariate polynomials over a [`Gf`], with factorization by squarefree
//! decomposition, distinct-degree and equal-degree splitting.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{prime_factors, Fe, Gf};

/// Coefficients from the constant term up, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Fe>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.c)
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn new(k: &Gf, mut c: Vec<Fe>) -> Poly {
        while c.last().is_some_and(|&x| k.is_zero(x)) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_prime_coeffs(k: &Gf, c: &[u32]) -> Poly {
        Poly::new(k, c.iter().map(|&x| k.from_int(x as i64)).collect())
    }

    pub fn from_ints(k: &Gf, c: &[i64]) -> Poly {
        Poly::new(k, c.iter().map(|&x| k.from_int(x)).collect())
    }

    pub fn zero() -> Poly {
        Poly { c: Vec::new() }
    }

    pub fn constant(k: &Gf, a: Fe) -> Poly {
        Poly::new(k, vec![a])
    }

    pub fn one(k: &Gf) -> Poly {
        Poly::constant(k, k.one())
    }

    pub fn x(k: &Gf) -> Poly {
        Poly::new(k, vec![k.zero(), k.one()])
    }

    /// `x - a`
    pub fn linear(k: &Gf, a: Fe) -> Poly {
        Poly::new(k, vec![k.neg(a), k.one()])
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Option<Fe> {
        self.c.get(i).copied()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree, with the zero polynomial at 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Option<Fe> {
        self.c.last().copied()
    }

    pub fn is_monic(&self, k: &Gf) -> bool {
        self.lc().is_some_and(|a| k.is_one(a))
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn monic(&self, k: &Gf) -> Poly {
        match self.lc() {
            None => Poly::zero(),
            Some(a) => self.scale(k, k.inv(a).expect("leading coefficient is nonzero")),
        }
    }

    pub fn scale(&self, k: &Gf, a: Fe) -> Poly {
        Poly::new(k, self.c.iter().map(|&x| k.mul(x, a)).collect())
    }

    pub fn add(&self, k: &Gf, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or_default();
                let b = o.c.get(i).copied().unwrap_or_default();
                k.add(a, b)
            })
            .collect();
        Poly::new(k, c)
    }

    pub fn neg(&self, k: &Gf) -> Poly {
        Poly::new(k, self.c.iter().map(|&x| k.neg(x)).collect())
    }

    pub fn sub(&self, k: &Gf, o: &Poly) -> Poly {
        self.add(k, &o.neg(k))
    }

    pub fn mul(&self, k: &Gf, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![k.zero(); self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = k.add(c[i + j], k.mul(a, b));
            }
        }
        Poly::new(k, c)
    }

    pub fn pow(&self, k: &Gf, mut e: u64) -> Poly {
        let mut acc = Poly::one(k);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(k, &b);
            }
            b = b.mul(k, &b);
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, k: &Gf, d: &Poly) -> (Poly, Poly) {
        let dl = d.lc().expect("division by the zero polynomial");
        let inv = k.inv(dl).expect("nonzero");
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![k.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let coef = k.mul(r[i], inv);
            if k.is_zero(coef) {
                continue;
            }
            q[i - dd] = coef;
            for j in 0..=dd {
                r[i - dd + j] = k.sub(r[i - dd + j], k.mul(coef, d.c[j]));
            }
        }
        (Poly::new(k, q), Poly::new(k, r))
    }

    pub fn rem(&self, k: &Gf, d: &Poly) -> Poly {
        self.divrem(k, d).1
    }

    /// Exact quotient, or `None` if `d` does not divide.
    pub fn div_exact(&self, k: &Gf, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(k, d);
        r.is_zero().then_some(q)
    }

    pub fn derivative(&self, k: &Gf) -> Poly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| k.mul(a, k.from_int(i as i64)))
            .collect();
        Poly::new(k, c)
    }

    pub fn eval(&self, k: &Gf, x: Fe) -> Fe {
        self.c.iter().rev().fold(k.zero(), |acc, &a| k.add(k.mul(acc, x), a))
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, k: &Gf, a: Fe) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let lin = Poly::linear(k, a);
        let mut f = self.clone();
        let mut m = 0;
        while let Some(q) = f.div_exact(k, &lin) {
            f = q;
            m += 1;
        }
        m
    }

    /// Coefficient images under a field map, e.g. an embedding.
    pub fn map(&self, k: &Gf, f: impl Fn(Fe) -> Fe) -> Poly {
        Poly::new(k, self.c.iter().map(|&a| f(a)).collect())
    }
}

impl Poly {
    /// Human-readable form in the variable `var`; coefficients of
    /// extension fields are written as polynomials in `a`.
    pub fn display(&self, k: &Gf, var: char) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let coef = |a: Fe| -> String {
            match k.prime_value(a) {
                Some(v) => v.to_string(),
                None => {
                    let c = k.coeffs(a);
                    let parts: Vec<String> = c
                        .iter()
                        .enumerate()
                        .rev()
                        .filter(|(_, &x)| x != 0)
                        .map(|(i, &x)| match i {
                            0 => x.to_string(),
                            1 => format!("{x}a"),
                            _ => format!("{x}a^{i}"),
                        })
                        .collect();
                    format!("({})", parts.join("+"))
                }
            }
        };
        let mut parts = Vec::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if k.is_zero(a) {
                continue;
            }
            let c = coef(a);
            let c = if c == "1" && i > 0 { String::new() } else { c };
            parts.push(match i {
                0 => c,
                1 => format!("{c}{var}"),
                _ => format!("{c}{var}^{i}"),
            });
        }
        parts.join("+")
    }
}

pub fn gcd(k: &Gf, a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(k, &b);
        a = b;
        b = r;
    }
    a.monic(k)
}

pub fn mulmod(k: &Gf, a: &Poly, b: &Poly, m: &Poly) -> Poly {
    a.mul(k, b).rem(k, m)
}

pub fn powmod(k: &Gf, a: &Poly, mut e: u128, m: &Poly) -> Poly {
    let mut acc = Poly::one(k).rem(k, m);
    let mut b = a.rem(k, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(k, &acc, &b, m);
        }
        b = mulmod(k, &b, &b, m);
        e >>= 1;
    }
    acc
}

/// `p`-th root of a polynomial whose derivative vanishes.
fn pth_root(k: &Gf, f: &Poly) -> Poly {
    let p = k.characteristic() as usize;
    let e = k.order() / k.characteristic() as u128;
    let c = f.c.iter().step_by(p).map(|&a| k.pow(a, e)).collect();
    Poly::new(k, c)
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, m)` with `g`
/// squarefree, pairwise coprime, and `f = ∏ g^m`.
pub fn squarefree_decomposition(k: &Gf, f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    sqf_rec(k, &f.monic(k), 1, &mut out);
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    out
}

fn sqf_rec(k: &Gf, f: &Poly, mult: u32, out: &mut Vec<(Poly, u32)>) {
    if f.deg() == 0 {
        return;
    }
    let p = k.characteristic();
    let d = f.derivative(k);
    if d.is_zero() {
        sqf_rec(k, &pth_root(k, f), mult * p, out);
        return;
    }
    let mut c = gcd(k, f, &d);
    let mut w = f.div_exact(k, &c).expect("gcd divides");
    let mut i = 1;
    while w.deg() > 0 {
        let y = gcd(k, &w, &c);
        let z = w.div_exact(k, &y).expect("gcd divides");
        if z.deg() > 0 {
            out.push((z, i * mult));
        }
        w = y;
        c = c.div_exact(k, &w).expect("gcd divides");
        i += 1;
    }
    if c.deg() > 0 {
        sqf_rec(k, &pth_root(k, &c), mult * p, out);
    }
}

/// Distinct-degree factorization of a squarefree monic polynomial: pairs
/// `(g, d)` where `g` is the product of all irreducible factors of degree `d`.
pub fn distinct_degree(k: &Gf, f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut f = f.monic(k);
    let x = Poly::x(k);
    let mut h = x.clone();
    let mut d = 0;
    while f.deg() > 0 {
        d += 1;
        if 2 * d > f.deg() {
            out.push((f.clone(), f.deg()));
            break;
        }
        h = powmod(k, &h, k.order(), &f);
        let g = gcd(k, &f, &h.sub(k, &x));
        if g.deg() > 0 {
            f = f.div_exact(k, &g).expect("gcd divides");
            h = h.rem(k, &f);
            out.push((g, d));
        }
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree `d`.
pub fn equal_degree<R: Rng>(k: &Gf, f: &Poly, d: usize, rng: &mut R) -> Vec<Poly> {
    let n = f.deg();
    if n == d {
        return vec![f.monic(k)];
    }
    loop {
        let a = Poly::new(k, (0..n).map(|_| k.element(rng.gen_range(0..k.order()))).collect());
        if a.deg() == 0 {
            continue;
        }
        let b = if k.characteristic() == 2 {
            // trace to F_2
            let steps = k.degree() * d;
            let mut t = a.rem(k, f);
            let mut acc = t.clone();
            for _ in 1..steps {
                t = mulmod(k, &t, &t, f);
                acc = acc.add(k, &t);
            }
            acc
        } else {
            let e = (k.order().pow(d as u32) - 1) / 2;
            powmod(k, &a, e, f).sub(k, &Poly::one(k))
        };
        let g = gcd(k, f, &b);
        if g.deg() > 0 && g.deg() < n {
            let h = f.div_exact(k, &g).expect("gcd divides");
            let mut out = equal_degree(k, &g, d, rng);
            out.extend(equal_degree(k, &h, d, rng));
            return out;
        }
    }
}

/// Complete factorization: `f = unit * ∏ g^m` with monic irreducible `g`,
/// sorted by (degree, coefficients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fe,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, k: &Gf) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(k, self.unit), |acc, (g, m)| acc.mul(k, &g.pow(k, *m as u64)))
    }
}

pub fn factor(k: &Gf, f: &Poly) -> Option<Factorization> {
    let unit = f.lc()?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut factors = Vec::new();
    for (g, m) in squarefree_decomposition(k, f) {
        for (h, d) in distinct_degree(k, &g) {
            for irr in equal_degree(k, &h, d, &mut rng) {
                factors.push((irr, m));
            }
        }
    }
    factors.sort();
    Some(Factorization { unit, factors })
}

/// Rabin's test.
pub fn is_irreducible(k: &Gf, f: &Poly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let f = f.monic(k);
    let x = Poly::x(k);
    let q = k.order();
    let frob_iter = |times: usize| {
        let mut h = x.clone();
        for _ in 0..times {
            h = powmod(k, &h, q, &f);
        }
        h
    };
    if frob_iter(n) != x.rem(k, &f) {
        return false;
    }
    prime_factors(n as u128).into_iter().all(|r| {
        let h = frob_iter(n / r as usize);
        gcd(k, &f, &h.sub(k, &x)).deg() == 0
    })
}

/// Distinct roots in `k`, sorted.
pub fn roots(k: &Gf, f: &Poly) -> Vec<Fe> {
    if f.is_zero() {
        panic!("every element is a root of the zero polynomial");
    }
    let f = f.monic(k);
    if f.deg() == 0 {
        return Vec::new();
    }
    let x = Poly::x(k);
    let g = gcd(k, &f, &powmod(k, &x, k.order(), &f).sub(k, &x));
    if g.deg() == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x700f);
    let mut out: Vec<Fe> = equal_degree(k, &g, 1, &mut rng)
        .into_iter()
        .map(|l| k.neg(l.coeffs()[0]))
        .collect();
    out.sort();
    out
}

/// All monic irreducible polynomials of degree `d`, ascending.
pub fn monic_irreducibles(k: &Gf, d: usize) -> Vec<Poly> {
    let q = k.order();
    let total = q.pow(d as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut c = Vec::with_capacity(d + 1);
        let mut r = idx;
        for _ in 0..d {
            c.push(k.element(r % q));
            r /= q;
        }
        c.push(k.one());
        let f = Poly::new(k, c);
        if is_irreducible(k, &f) {
            out.push(f);
        }
    }
    out.sort();
    out
}

/// Number of monic irreducibles of degree `d` over a field with `q`
/// elements, by Möbius inversion.
pub fn count_irreducibles(q: u128, d: usize) -> u128 {
    let mut total: i128 = 0;
    for e in 1..=d {
        if d % e == 0 {
            total += mobius(d / e) as i128 * (q.pow(e as u32) as i128);
        }
    }
    (total / d as i128) as u128
}

fn mobius(n: usize) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_examples() {
        let f2 = Gf::prime(2).unwrap();
        let x2p1 = Poly::from_ints(&f2, &[1, 0, 1]);
        let fac = factor(&f2, &x2p1).unwrap();
        assert_eq!(fac.factors, vec![(Poly::from_ints(&f2, &[1, 1]), 2)]);

        let f3 = Gf::prime(3).unwrap();
        let x2p1 = Poly::from_ints(&f3, &[1, 0, 1]);
        // no roots among 0, 1, 2, so irreducible in degree 2
        assert!((0..3).all(|a| !f3.is_zero(x2p1.eval(&f3, f3.from_int(a)))));
        assert!(is_irreducible(&f3, &x2p1));
        assert_eq!(factor(&f3, &x2p1).unwrap().factors, vec![(x2p1, 1)]);

        let x = Poly::x(&f3);
        assert_eq!(factor(&f3, &x).unwrap().factors, vec![(x, 1)]);
    }

    #[test]
    fn inseparable_input() {
        // x^6 + 1 = (x^2 + 1)^3 over F_3
        let f3 = Gf::prime(3).unwrap();
        let f = Poly::from_ints(&f3, &[1, 0, 0, 0, 0, 0, 1]);
        let fac = factor(&f3, &f).unwrap();
        assert_eq!(fac.factors, vec![(Poly::from_ints(&f3, &[1, 0, 1]), 3)]);
        assert_eq!(fac.expand(&f3), f);
    }

    #[test]
    fn irreducible_counts() {
        for (q, d, n) in [(2u64, 1usize, 2u128), (2, 2, 1), (2, 3, 2), (2, 4, 3), (3, 2, 3), (3, 3, 8)] {
            let k = Gf::prime(q).unwrap();
            assert_eq!(monic_irreducibles(&k, d).len() as u128, n);
            assert_eq!(count_irreducibles(q as u128, d), n);
        }
    }

    #[test]
    fn roots_in_extension() {
        let k = Gf::canonical_extension(2, 2).unwrap();
        // x^2 + x + 1 splits over F_4
        let f = Poly::new(&k, vec![k.one(), k.one(), k.one()]);
        let r = roots(&k, &f);
        assert_eq!(r.len(), 2);
        for a in r {
            assert!(k.is_zero(f.eval(&k, a)));
        }
    }

    #[test]
    fn char_two_splitting() {
        let f2 = Gf::prime(2).unwrap();
        // product of the two irreducible cubics over F_2
        let a = Poly::from_ints(&f2, &[1, 1, 0, 1]);
        let b = Poly::from_ints(&f2, &[1, 0, 1, 1]);
        let fac = factor(&f2, &a.mul(&f2, &b)).unwrap();
        assert_eq!(fac.factors.len(), 2);
    }
}
