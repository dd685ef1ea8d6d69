//! Closed points of the projective plane over a prime field.
//!
//! A closed point of degree `n` is a Frobenius orbit of size `n` in
//! `P²(K_n)`. It is stored by the smallest normalized member of its orbit,
//! where normalized means the first nonzero coordinate is 1.

use std::fmt;

use super::field::{Fe, FieldError, Gf};
use super::parse::{parse_poly, ParseError};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanePoint {
    degree: usize,
    coords: [Fe; 3],
    p: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PointError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("malformed point '{0}': expected (a:b:c) or (a:b:c)@n")]
    Syntax(String),
    #[error("all coordinates are zero")]
    Zero,
    #[error("coordinates generate a field of degree {actual}, not {claimed}")]
    WrongDegree { claimed: usize, actual: usize },
}

pub fn normalize(k: &Gf, c: [Fe; 3]) -> Option<[Fe; 3]> {
    let lead = c.iter().copied().find(|&a| !k.is_zero(a))?;
    let inv = k.inv(lead)?;
    Some(c.map(|a| k.mul(a, inv)))
}

fn frobenius(k: &Gf, c: [Fe; 3]) -> [Fe; 3] {
    c.map(|a| k.frobenius(a))
}

/// Size of the Frobenius orbit of a normalized point.
pub fn orbit_size(k: &Gf, c: [Fe; 3]) -> usize {
    let mut cur = frobenius(k, c);
    let mut n = 1;
    while cur != c {
        cur = frobenius(k, cur);
        n += 1;
    }
    n
}

fn orbit_min(k: &Gf, c: [Fe; 3]) -> [Fe; 3] {
    let mut best = c;
    let mut cur = frobenius(k, c);
    while cur != c {
        best = best.min(cur);
        cur = frobenius(k, cur);
    }
    best
}

impl PlanePoint {
    /// The closed point through `c`, a point of `P²(K_n)` whose orbit has
    /// size exactly `n = k.degree()`.
    pub fn from_coords(k: &Gf, c: [Fe; 3]) -> Result<PlanePoint, PointError> {
        let c = normalize(k, c).ok_or(PointError::Zero)?;
        let actual = orbit_size(k, c);
        if actual != k.degree() {
            return Err(PointError::WrongDegree {
                claimed: k.degree(),
                actual,
            });
        }
        Ok(PlanePoint {
            degree: actual,
            coords: orbit_min(k, c),
            p: k.characteristic(),
        })
    }

    pub fn rational(p: u32, c: [i64; 3]) -> Result<PlanePoint, PointError> {
        let k = Gf::prime(p as u64)?;
        PlanePoint::from_coords(&k, c.map(|a| k.from_int(a)))
    }

    /// Parses `(a:b:c)` or `(a:b:c)@n`, where coordinates are polynomials
    /// in the generator `a` of `K_n`.
    pub fn parse(text: &str, p: u32) -> Result<PlanePoint, PointError> {
        let bad = || PointError::Syntax(text.to_string());
        let text = text.trim();
        let (body, n) = match text.rsplit_once('@') {
            Some((b, n)) => (b.trim(), n.trim().parse::<usize>().map_err(|_| bad())?),
            None => (text, 1),
        };
        let inner = body
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let k = Gf::extension(p as u64, n)?;
        let alpha = k.alpha();
        let mut c = [k.zero(); 3];
        for (slot, part) in c.iter_mut().zip(parts) {
            let sparse = parse_poly(part, &['a'], p as u64)?;
            for (e, v) in sparse {
                let term = k.mul(k.from_int(v as i64), k.pow(alpha, e[0] as u128));
                *slot = k.add(*slot, term);
            }
        }
        PlanePoint::from_coords(&k, c)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// The residue field `K_n`.
    pub fn field(&self) -> Gf {
        Gf::extension(self.p as u64, self.degree).expect("valid point field")
    }

    /// Canonical coordinates in [`PlanePoint::field`].
    pub fn coords(&self) -> [Fe; 3] {
        self.coords
    }

    /// All conjugates, starting from the canonical representative.
    pub fn conjugates(&self) -> Vec<[Fe; 3]> {
        let k = self.field();
        let mut out = vec![self.coords];
        for _ in 1..self.degree {
            let next = frobenius(&k, *out.last().expect("nonempty"));
            out.push(next);
        }
        out
    }
}

fn fmt_elem(k: &Gf, a: Fe) -> String {
    let c = k.coeffs(a);
    let mut parts = Vec::new();
    for (i, &x) in c.iter().enumerate().rev() {
        if x == 0 {
            continue;
        }
        let coef = if x == 1 && i > 0 { String::new() } else { x.to_string() };
        parts.push(match i {
            0 => coef,
            1 => format!("{coef}a"),
            _ => format!("{coef}a^{i}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.field();
        let c: Vec<String> = self.coords.iter().map(|&a| fmt_elem(&k, a)).collect();
        write!(f, "({})", c.join(":"))?;
        if self.degree > 1 {
            write!(f, "@{}", self.degree)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Closed points of degree exactly `n`, sorted.
pub fn closed_points(p: u32, n: usize) -> Result<Vec<PlanePoint>, FieldError> {
    let k = Gf::extension(p as u64, n)?;
    let q = k.order();
    let mut out = Vec::new();
    let mut consider = |c: [Fe; 3]| {
        if orbit_size(&k, c) == n && orbit_min(&k, c) == c {
            out.push(PlanePoint {
                degree: n,
                coords: c,
                p,
            });
        }
    };
    consider([k.zero(), k.zero(), k.one()]);
    for a in 0..q {
        consider([k.zero(), k.one(), k.element(a)]);
    }
    for a in 0..q {
        for b in 0..q {
            consider([k.one(), k.element(a), k.element(b)]);
        }
    }
    out.sort();
    Ok(out)
}

/// Number of closed points of degree `n`, by Möbius inversion of
/// `|P²(F_{q^d})| = q^{2d} + q^d + 1`.
pub fn count_closed_points(q: u128, n: usize) -> u128 {
    let mu = |m: usize| -> i128 {
        let mut m = m;
        let mut s = 1;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                m /= d;
                if m % d == 0 {
                    return 0;
                }
                s = -s;
            }
            d += 1;
        }
        if m > 1 {
            -s
        } else {
            s
        }
    };
    let mut total: i128 = 0;
    for d in 1..=n {
        if n % d == 0 {
            let qd = q.pow(d as u32) as i128;
            total += mu(n / d) * (qd * qd + qd + 1);
        }
    }
    (total / n as i128) as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_formula() {
        for (p, n) in [(2, 1), (2, 2), (3, 1), (3, 2), (2, 3)] {
            assert_eq!(
                closed_points(p, n).unwrap().len() as u128,
                count_closed_points(p as u128, n),
                "p = {p}, n = {n}"
            );
        }
        assert_eq!(count_closed_points(3, 1), 13);
    }

    #[test]
    fn parse_round_trip() {
        let pt = PlanePoint::parse("(0:0:1)", 3).unwrap();
        assert_eq!(pt, PlanePoint::rational(3, [0, 0, 5]).unwrap());
        assert_eq!(pt.to_string(), "(0:0:1)");
        for q in closed_points(3, 2).unwrap().into_iter().take(10) {
            assert_eq!(PlanePoint::parse(&q.to_string(), 3).unwrap(), q);
        }
        assert!(matches!(
            PlanePoint::parse("(1:a:0)@2", 2),
            Ok(ref q) if q.degree() == 2
        ));
        assert!(matches!(
            PlanePoint::parse("(1:1:0)@2", 2),
            Err(PointError::WrongDegree { .. })
        ));
    }
}
