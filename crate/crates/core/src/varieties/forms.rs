//! Homogeneous forms in `x, y, z` over a prime field.

use std::collections::BTreeMap;
use std::fmt;

use super::field::{Fe, Gf};
use super::parse::{parse_poly, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("the zero polynomial does not define a curve")]
    Zero,
    #[error("constant polynomial does not define a curve")]
    Constant,
    #[error("factoring forms of degree {0} without linear factors is not supported (limit 3)")]
    DegreeTooLarge(u32),
}

/// A homogeneous form; coefficients are residues mod `p`, zero terms are
/// never stored. The zero form has degree 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    p: u32,
    deg: u32,
    terms: BTreeMap<[u32; 3], u32>,
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

impl Form {
    pub fn from_terms(p: u32, terms: impl IntoIterator<Item = ([u32; 3], i64)>) -> Result<Form, FormError> {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            let v = map.entry(e).or_insert(0u32);
            *v = ((*v as i64 + c).rem_euclid(p as i64)) as u32;
        }
        map.retain(|_, c| *c != 0);
        let mut degs = map.keys().map(|e| e.iter().sum::<u32>());
        let deg = degs.next().unwrap_or(0);
        if degs.any(|d| d != deg) {
            return Err(FormError::NotHomogeneous);
        }
        Ok(Form { p, deg, terms: map })
    }

    pub fn parse(text: &str, p: u32) -> Result<Form, FormError> {
        let sparse = parse_poly(text, &['x', 'y', 'z'], p as u64)?;
        Form::from_terms(p, sparse.into_iter().map(|(e, c)| ([e[0], e[1], e[2]], c as i64)))
    }

    /// The coordinate form `x`, `y` or `z`.
    pub fn var(p: u32, i: usize) -> Form {
        let mut e = [0; 3];
        e[i] = 1;
        Form::from_terms(p, [(e, 1)]).expect("monomial")
    }

    /// `a x + b y + c z`.
    pub fn linear(p: u32, [a, b, c]: [u32; 3]) -> Form {
        Form::from_terms(p, [([1, 0, 0], a as i64), ([0, 1, 0], b as i64), ([0, 0, 1], c as i64)])
            .expect("linear form")
    }

    pub fn constant(p: u32, c: i64) -> Form {
        Form::from_terms(p, [([0, 0, 0], c)]).expect("constant")
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &u32)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: [u32; 3]) -> u32 {
        self.terms.get(&e).copied().unwrap_or(0)
    }

    /// Lexicographically largest monomial with its coefficient.
    pub fn lead(&self) -> Option<([u32; 3], u32)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, *c))
    }

    /// Scalar multiple with leading coefficient 1.
    pub fn normalized(&self) -> Form {
        match self.lead() {
            None => self.clone(),
            Some((_, c)) => self.scale(inv_mod(c, self.p)),
        }
    }

    pub fn scale(&self, a: u32) -> Form {
        let p = self.p as u64;
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| (*e, ((c as u64 * a as u64) % p) as i64));
        Form::from_terms(self.p, terms).expect("homogeneous")
    }

    pub fn add(&self, o: &Form) -> Result<Form, FormError> {
        let terms = self
            .terms
            .iter()
            .chain(&o.terms)
            .map(|(e, &c)| (*e, c as i64));
        Form::from_terms(self.p, terms)
    }

    pub fn sub(&self, o: &Form) -> Result<Form, FormError> {
        self.add(&o.scale(self.p - 1))
    }

    pub fn mul(&self, o: &Form) -> Form {
        let p = self.p as u64;
        let mut terms = Vec::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &o.terms {
                let e = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
                terms.push((e, ((ca as u64 * cb as u64) % p) as i64));
            }
        }
        Form::from_terms(self.p, terms).expect("product of forms is homogeneous")
    }

    pub fn pow(&self, e: u32) -> Form {
        (0..e).fold(Form::constant(self.p, 1), |acc, _| acc.mul(self))
    }

    /// `F(M v)`: each variable `x_i` is replaced by `Σ_j m[i][j] x_j`.
    pub fn compose(&self, m: &[[u32; 3]; 3]) -> Form {
        let images: Vec<Form> = (0..3).map(|i| Form::linear(self.p, m[i])).collect();
        let mut acc = Form::from_terms(self.p, []).expect("zero");
        for (e, &c) in &self.terms {
            let t = images[0].pow(e[0]).mul(&images[1].pow(e[1])).mul(&images[2].pow(e[2])).scale(c);
            acc = if acc.is_zero() { t } else { acc.add(&t).expect("same degree") };
        }
        acc
    }

    /// Value at a point with coordinates in an extension of the prime field.
    pub fn eval(&self, k: &Gf, pt: &[Fe; 3]) -> Fe {
        let mut acc = k.zero();
        for (e, &c) in &self.terms {
            let mut t = k.from_int(c as i64);
            for i in 0..3 {
                t = k.mul(t, k.pow(pt[i], e[i] as u128));
            }
            acc = k.add(acc, t);
        }
        acc
    }

    /// Exact quotient by a nonzero form, or `None` if it does not divide.
    pub fn div_exact(&self, d: &Form) -> Option<Form> {
        let (de, dc) = d.lead()?;
        let dinv = inv_mod(dc, self.p);
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some((e, c)) = r.lead() {
            if (0..3).any(|i| e[i] < de[i]) {
                return None;
            }
            let m = [e[0] - de[0], e[1] - de[1], e[2] - de[2]];
            let coef = ((c as u64 * dinv as u64) % self.p as u64) as u32;
            q.push((m, coef as i64));
            let t = Form::from_terms(self.p, [(m, coef as i64)]).expect("monomial");
            r = r.sub(&d.mul(&t)).ok()?;
        }
        Some(Form::from_terms(self.p, q).expect("quotient is homogeneous"))
    }

    /// All normalized lines over the prime field.
    pub fn all_lines(p: u32) -> Vec<Form> {
        let mut out = Vec::new();
        for a in 0..p {
            for b in 0..p {
                out.push(Form::linear(p, [a, b, 1]));
            }
        }
        for a in 0..p {
            out.push(Form::linear(p, [a, 1, 0]));
        }
        out.push(Form::linear(p, [1, 0, 0]));
        out.into_iter().map(|f| f.normalized()).collect()
    }

    /// A linear factor defined over the prime field, if any.
    pub fn linear_factor(&self) -> Option<Form> {
        if self.deg == 0 {
            return None;
        }
        Form::all_lines(self.p)
            .into_iter()
            .find(|l| self.div_exact(l).is_some())
    }

    /// Factorization into normalized irreducible forms with multiplicities,
    /// sorted. Supported as long as the part without linear factors has
    /// degree at most 3.
    pub fn factor(&self) -> Result<Vec<(Form, u32)>, FormError> {
        if self.is_zero() {
            return Err(FormError::Zero);
        }
        let mut rest = self.normalized();
        let mut out: BTreeMap<Form, u32> = BTreeMap::new();
        while let Some(l) = rest.linear_factor() {
            rest = rest.div_exact(&l).expect("linear factor divides");
            *out.entry(l).or_insert(0) += 1;
        }
        match rest.deg {
            0 => {}
            d if d <= 3 => *out.entry(rest.normalized()).or_insert(0) += 1,
            d => return Err(FormError::DegreeTooLarge(d)),
        }
        Ok(out.into_iter().collect())
    }

    pub fn is_irreducible(&self) -> Result<bool, FormError> {
        if self.is_zero() {
            return Err(FormError::Zero);
        }
        if self.deg == 0 {
            return Ok(false);
        }
        let f = self.factor()?;
        Ok(f.len() == 1 && f[0].1 == 1)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, &c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            if c != 1 || e.iter().all(|&x| x == 0) {
                factors.push(c.to_string());
            }
            for (i, v) in ['x', 'y', 'z'].iter().enumerate() {
                match e[i] {
                    0 => {}
                    1 => factors.push(v.to_string()),
                    n => factors.push(format!("{v}^{n}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form({self} mod {})", self.p)
    }
}

/// Enumerates normalized irreducible forms of the given degree, sorted.
pub fn irreducible_forms(p: u32, deg: u32) -> Vec<Form> {
    let monos: Vec<[u32; 3]> = (0..=deg)
        .rev()
        .flat_map(|a| (0..=deg - a).rev().map(move |b| [a, b, deg - a - b]))
        .collect();
    let total = (p as u64).pow(monos.len() as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut r = idx;
        let mut terms = Vec::with_capacity(monos.len());
        for m in &monos {
            terms.push((*m, (r % p as u64) as i64));
            r /= p as u64;
        }
        let f = Form::from_terms(p, terms).expect("homogeneous");
        if f.is_zero() || f.lead().map(|(_, c)| c) != Some(1) {
            continue;
        }
        if f.is_irreducible().unwrap_or(false) {
            out.push(f);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let f = Form::parse("x*y - z^2", 3).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.to_string(), "x*y + 2*z^2");
        assert_eq!(Form::parse("x + y^2", 3), Err(FormError::NotHomogeneous));
    }

    #[test]
    fn division_and_factoring() {
        let x = Form::var(5, 0);
        let y = Form::var(5, 1);
        let f = x.mul(&y).mul(&x);
        assert_eq!(f.div_exact(&x), Some(x.mul(&y)));
        assert_eq!(f.div_exact(&Form::var(5, 2)), None);
        let fac = f.factor().unwrap();
        let mut expected = vec![(x, 2), (y, 1)];
        expected.sort();
        assert_eq!(fac, expected);
        assert!(!f.is_irreducible().unwrap());
    }

    #[test]
    fn conics() {
        // x^2 + y^2 + z^2 over F_3 has points but no linear factor
        let c = Form::parse("x^2+y^2+z^2", 3).unwrap();
        assert!(c.is_irreducible().unwrap());
        // x^2 + y^2 = (x + i y)(x - i y) over F_5 with i = 2
        let d = Form::parse("x^2+y^2", 5).unwrap();
        assert!(!d.is_irreducible().unwrap());
        // but irreducible over F_3, where -1 is not a square
        assert!(Form::parse("x^2+y^2", 3).unwrap().is_irreducible().unwrap());
    }

    #[test]
    fn line_counts() {
        assert_eq!(Form::all_lines(2).len(), 7);
        assert_eq!(irreducible_forms(3, 1).len(), 13);
        // oracle: the 364 normalized quadrics minus products of two lines
        let brute = {
            let lines = Form::all_lines(3);
            let mut reducible = std::collections::BTreeSet::new();
            for a in &lines {
                for b in &lines {
                    reducible.insert(a.mul(b).normalized());
                }
            }
            364 - reducible.len()
        };
        assert_eq!(irreducible_forms(3, 2).len(), brute);
    }

    #[test]
    fn compose_with_permutation() {
        let f = Form::parse("x^2 + y*z", 3).unwrap();
        let swap = [[0, 1, 0], [1, 0, 0], [0, 0, 1]];
        assert_eq!(f.compose(&swap), Form::parse("y^2 + x*z", 3).unwrap());
    }
}
