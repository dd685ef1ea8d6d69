//! Finite fields `F_p[α]/(m)` with `m` monic irreducible.
//!
//! Elements are fixed-size coefficient arrays so they are `Copy`; the field
//! object carries the modulus and does all arithmetic.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// Largest supported extension degree.
pub const MAX_EXT: usize = 12;

/// An element `c0 + c1 α + ... + c_{n-1} α^{n-1}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub [u16; MAX_EXT]);

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.0[..last.max(1)])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic {0} is too large")]
    TooLarge(u64),
    #[error("extension degree {0} is not supported (max {MAX_EXT})")]
    Degree(usize),
    #[error("modulus is not irreducible")]
    Reducible,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors, ascending.
pub fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf {
    p: u32,
    n: usize,
    /// `modulus[i]` is the coefficient of `α^i`; `modulus[n] = 1`.
    modulus: Vec<u32>,
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.p, self.n, self.modulus)
        }
    }
}

impl Gf {
    pub fn prime(p: u64) -> Result<Gf, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p >= 1 << 15 {
            return Err(FieldError::TooLarge(p));
        }
        Ok(Gf {
            p: p as u32,
            n: 1,
            modulus: vec![0, 1],
        })
    }

    /// `F_p[α]/(m)`; `modulus` lists coefficients from the constant term up
    /// and must be monic and irreducible.
    pub fn with_modulus(p: u64, modulus: &[u32]) -> Result<Gf, FieldError> {
        let base = Gf::prime(p)?;
        let n = modulus.len() - 1;
        if n == 0 || n > MAX_EXT {
            return Err(FieldError::Degree(n));
        }
        assert_eq!(modulus[n] % base.p, 1, "modulus must be monic");
        let m: Vec<u32> = modulus.iter().map(|c| c % base.p).collect();
        let poly = super::poly::Poly::from_prime_coeffs(&base, &m);
        if !super::poly::is_irreducible(&base, &poly) {
            return Err(FieldError::Reducible);
        }
        Ok(Gf { p: base.p, n, modulus: m })
    }

    /// `K_n`: the extension of degree `n` cut out by the first monic
    /// irreducible polynomial of degree `n`, ordering candidates by the
    /// base-`p` number with digits `c_0, c_1, ...` (least significant first).
    pub fn canonical_extension(p: u64, n: usize) -> Result<Gf, FieldError> {
        let base = Gf::prime(p)?;
        if n == 0 || n > MAX_EXT {
            return Err(FieldError::Degree(n));
        }
        if n == 1 {
            return Ok(base);
        }
        let total = (p as u128).pow(n as u32);
        for k in 0..total {
            let mut m = Vec::with_capacity(n + 1);
            let mut r = k;
            for _ in 0..n {
                m.push((r % p as u128) as u32);
                r /= p as u128;
            }
            m.push(1);
            let poly = super::poly::Poly::from_prime_coeffs(&base, &m);
            if super::poly::is_irreducible(&base, &poly) {
                return Ok(Gf {
                    p: base.p,
                    n,
                    modulus: m,
                });
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// Memoized [`Gf::canonical_extension`].
    pub fn extension(p: u64, n: usize) -> Result<Gf, FieldError> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Gf>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(k) = cache.lock().expect("field cache").get(&(p, n)) {
            return Ok(k.clone());
        }
        let k = Gf::canonical_extension(p, n)?;
        cache.lock().expect("field cache").insert((p, n), k.clone());
        Ok(k)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.n as u32)
    }

    pub fn zero(&self) -> Fe {
        Fe::default()
    }

    pub fn one(&self) -> Fe {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> Fe {
        let mut e = Fe::default();
        e.0[0] = k.rem_euclid(self.p as i64) as u16;
        e
    }

    /// Generator `α` (equal to the constant `-m_0` when `n = 1`).
    pub fn alpha(&self) -> Fe {
        if self.n == 1 {
            return self.from_int(-(self.modulus[0] as i64));
        }
        let mut e = Fe::default();
        e.0[1] = 1;
        e
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Fe {
        let mut e = Fe::default();
        for (i, &x) in c.iter().enumerate().take(self.n) {
            e.0[i] = (x % self.p) as u16;
        }
        e
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        a.0[..self.n].iter().map(|&x| x as u32).collect()
    }

    pub fn is_zero(&self, a: Fe) -> bool {
        a == Fe::default()
    }

    pub fn is_one(&self, a: Fe) -> bool {
        a == self.one()
    }

    /// Whether the element lies in the prime field.
    pub fn is_prime_field_element(&self, a: Fe) -> bool {
        a.0[1..].iter().all(|&c| c == 0)
    }

    /// Integer value of a prime-field element.
    pub fn prime_value(&self, a: Fe) -> Option<u32> {
        self.is_prime_field_element(a).then_some(a.0[0] as u32)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let mut e = Fe::default();
        for i in 0..self.n {
            e.0[i] = ((a.0[i] as u32 + b.0[i] as u32) % self.p) as u16;
        }
        e
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let mut e = Fe::default();
        for i in 0..self.n {
            e.0[i] = ((self.p - a.0[i] as u32) % self.p) as u16;
        }
        e
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let n = self.n;
        let p = self.p as u64;
        if n == 1 {
            return self.from_int(((a.0[0] as u64 * b.0[0] as u64) % p) as i64);
        }
        let mut t = [0u64; 2 * MAX_EXT];
        for i in 0..n {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                t[i + j] += a.0[i] as u64 * b.0[j] as u64;
            }
        }
        for i in (n..2 * n - 1).rev() {
            let c = t[i] % p;
            if c == 0 {
                continue;
            }
            t[i] = 0;
            for j in 0..n {
                t[i - n + j] += c * (p - self.modulus[j] as u64);
            }
        }
        let mut e = Fe::default();
        for i in 0..n {
            e.0[i] = (t[i] % p) as u16;
        }
        e
    }

    pub fn pow(&self, a: Fe, mut e: u128) -> Fe {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        (!self.is_zero(a)).then(|| self.pow(a, self.order() - 2))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        Some(self.mul(a, self.inv(b)?))
    }

    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p as u128)
    }

    /// Element with index `k` in `0..order()`: base-`p` digits of `k` as
    /// coefficients, least significant first.
    pub fn element(&self, mut k: u128) -> Fe {
        let mut e = Fe::default();
        for i in 0..self.n {
            e.0[i] = (k % self.p as u128) as u16;
            k /= self.p as u128;
        }
        e
    }

    pub fn index(&self, a: Fe) -> u128 {
        (0..self.n).rev().fold(0u128, |acc, i| acc * self.p as u128 + a.0[i] as u128)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.order()).map(|k| self.element(k))
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Fe) -> u128 {
        let mut ord = self.order() - 1;
        for r in prime_factors(ord) {
            while ord % r == 0 && self.is_one(self.pow(a, ord / r)) {
                ord /= r;
            }
        }
        ord
    }

    /// The first generator of the multiplicative group in element order.
    pub fn primitive_element(&self) -> Fe {
        let m = self.order() - 1;
        let ps = prime_factors(m);
        (1..self.order())
            .map(|k| self.element(k))
            .find(|&a| ps.iter().all(|r| !self.is_one(self.pow(a, m / r))))
            .expect("the multiplicative group is cyclic")
    }

    /// `log_g(a)` by baby-step giant-step, for `g` primitive.
    pub fn dlog(&self, g: Fe, a: Fe) -> Option<u128> {
        if self.is_zero(a) {
            return None;
        }
        let m = self.order() - 1;
        let step = ((m as f64).sqrt().ceil() as u128).max(1);
        let mut table = HashMap::with_capacity(step as usize);
        let mut cur = self.one();
        for j in 0..step {
            table.entry(cur).or_insert(j);
            cur = self.mul(cur, g);
        }
        let giant = self.inv(self.pow(g, step))?;
        let mut y = a;
        for i in 0..=step {
            if let Some(&j) = table.get(&y) {
                return Some((i * step + j) % m);
            }
            y = self.mul(y, giant);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Gf::prime(7).unwrap();
        let a = f.from_int(3);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        assert_eq!(f.add(a, f.from_int(5)), f.from_int(1));
        assert_eq!(f.pow(a, 6), f.one());
        assert!(Gf::prime(9).is_err());
    }

    #[test]
    fn extension_fields() {
        let k = Gf::canonical_extension(2, 2).unwrap();
        assert_eq!(k.modulus(), &[1, 1, 1]);
        assert_eq!(k.order(), 4);
        for a in k.elements().skip(1) {
            assert_eq!(k.mul(a, k.inv(a).unwrap()), k.one());
            assert_eq!(k.pow(a, 3), k.one());
        }
        let k = Gf::canonical_extension(3, 3).unwrap();
        let g = k.primitive_element();
        assert_eq!(k.mult_order(g), 26);
        for e in [0u128, 1, 7, 25] {
            assert_eq!(k.dlog(g, k.pow(g, e)), Some(e));
        }
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        let k = Gf::canonical_extension(5, 2).unwrap();
        let fixed = k.elements().filter(|&a| k.frobenius(a) == a).count();
        assert_eq!(fixed, 5);
    }
}
