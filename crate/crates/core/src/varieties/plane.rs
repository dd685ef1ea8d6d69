//! Intersections of plane curves: intersection points via resultants in
//! each affine chart, local multiplicities by Fulton's algorithm.

use super::field::{Fe, FieldError, Gf, MAX_EXT};
use super::forms::Form;
use super::points::{normalize, orbit_size, PlanePoint};
use super::poly::{factor, gcd, roots, Poly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntersectionError {
    #[error("curves share a component")]
    Improper,
    #[error("intersection needs a residue field of degree above {0}")]
    ExtensionTooLarge(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("curves are not defined over the same prime field")]
    FieldMismatch,
}

/// Polynomial in two affine coordinates `u, v`: `rows[j]` is the
/// coefficient of `v^j`, a polynomial in `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Biv {
    rows: Vec<Poly>,
}

/// The two coordinates other than `chart`, in index order.
fn chart_vars(chart: usize) -> (usize, usize) {
    match chart {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

impl Biv {
    fn trimmed(mut rows: Vec<Poly>) -> Biv {
        while rows.last().is_some_and(Poly::is_zero) {
            rows.pop();
        }
        Biv { rows }
    }

    /// Dehomogenization of `f` at `chart = 1`, coefficients in `k`.
    pub fn from_form(k: &Gf, f: &Form, chart: usize) -> Biv {
        let (u, v) = chart_vars(chart);
        let mut rows: Vec<Vec<Fe>> = Vec::new();
        for (e, &c) in f.terms() {
            let (i, j) = (e[u] as usize, e[v] as usize);
            if rows.len() <= j {
                rows.resize(j + 1, Vec::new());
            }
            if rows[j].len() <= i {
                rows[j].resize(i + 1, k.zero());
            }
            rows[j][i] = k.add(rows[j][i], k.from_int(c as i64));
        }
        Biv::trimmed(rows.into_iter().map(|r| Poly::new(k, r)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Poly] {
        &self.rows
    }

    /// `f(u, 0)`.
    pub fn axis(&self) -> Poly {
        self.rows.first().cloned().unwrap_or_default()
    }

    pub fn at_origin(&self, k: &Gf) -> Fe {
        self.axis().coeff(0).unwrap_or(k.zero())
    }

    /// `f(u + u0, v + v0)`.
    pub fn translate(&self, k: &Gf, u0: Fe, v0: Fe) -> Biv {
        let shift = Poly::new(k, vec![u0, k.one()]);
        let rows: Vec<Poly> = self
            .rows
            .iter()
            .map(|r| {
                r.coeffs()
                    .iter()
                    .rev()
                    .fold(Poly::zero(), |acc, &a| acc.mul(k, &shift).add(k, &Poly::constant(k, a)))
            })
            .collect();
        let mut acc: Vec<Poly> = Vec::new();
        for r in rows.iter().rev() {
            // acc = acc * (v + v0) + r
            let mut next = vec![Poly::zero(); acc.len() + 1];
            for (j, a) in acc.iter().enumerate() {
                next[j + 1] = next[j + 1].add(k, a);
                next[j] = next[j].add(k, &a.scale(k, v0));
            }
            next[0] = next[0].add(k, r);
            acc = next;
        }
        Biv::trimmed(acc)
    }

    fn sub(&self, k: &Gf, o: &Biv) -> Biv {
        let n = self.rows.len().max(o.rows.len());
        let rows = (0..n)
            .map(|j| {
                let a = self.rows.get(j).cloned().unwrap_or_default();
                let b = o.rows.get(j).cloned().unwrap_or_default();
                a.sub(k, &b)
            })
            .collect();
        Biv::trimmed(rows)
    }

    fn mul_poly(&self, k: &Gf, p: &Poly) -> Biv {
        Biv::trimmed(self.rows.iter().map(|r| r.mul(k, p)).collect())
    }

    /// Divides by `v`; the caller guarantees `f(u, 0) = 0`.
    fn div_v(&self) -> Biv {
        Biv::trimmed(self.rows[1..].to_vec())
    }

    /// Content in `u`: the gcd of all rows.
    fn content(&self, k: &Gf) -> Poly {
        self.rows.iter().fold(Poly::zero(), |acc, r| gcd(k, &acc, r))
    }

    /// Substitutes `u = a`, giving a polynomial in `v`.
    fn at_u(&self, k: &Gf, a: Fe) -> Poly {
        Poly::new(k, self.rows.iter().map(|r| r.eval(k, a)).collect())
    }
}

/// Determinant over `k[u]` by fraction-free elimination.
fn poly_det(k: &Gf, mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(k);
    }
    let mut negate = false;
    let mut prev = Poly::one(k);
    for c in 0..n {
        if m[c][c].is_zero() {
            match (c + 1..n).find(|&i| !m[i][c].is_zero()) {
                Some(i) => {
                    m.swap(c, i);
                    negate = !negate;
                }
                None => return Poly::zero(),
            }
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let t = m[i][j].mul(k, &m[c][c]).sub(k, &m[i][c].mul(k, &m[c][j]));
                m[i][j] = t.div_exact(k, &prev).expect("Bareiss division is exact");
            }
        }
        prev = m[c][c].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg(k)
    } else {
        d
    }
}

/// `Res_v(f, g)` as a polynomial in `u`.
pub fn resultant_v(k: &Gf, f: &Biv, g: &Biv) -> Poly {
    let (a, b) = (f.rows.len(), g.rows.len());
    if a == 0 || b == 0 {
        return Poly::zero();
    }
    let (m, n) = (a - 1, b - 1);
    let size = m + n;
    if size == 0 {
        return Poly::one(k);
    }
    let mut mat = vec![vec![Poly::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.rows.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.rows.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    poly_det(k, mat)
}

fn check_fields(f: &Form, g: &Form) -> Result<Gf, IntersectionError> {
    if f.characteristic() != g.characteristic() {
        return Err(IntersectionError::FieldMismatch);
    }
    Ok(Gf::prime(f.characteristic() as u64)?)
}

/// Whether `f` and `g` have a common irreducible component.
pub fn share_component(f: &Form, g: &Form) -> bool {
    let Ok(k) = check_fields(f, g) else {
        return false;
    };
    if f.is_zero() || g.is_zero() {
        return true;
    }
    let z = Form::var(f.characteristic(), 2);
    if f.div_exact(&z).is_some() && g.div_exact(&z).is_some() {
        return true;
    }
    let (bf, bg) = (Biv::from_form(&k, f, 2), Biv::from_form(&k, g, 2));
    if resultant_v(&k, &bf, &bg).is_zero() {
        return true;
    }
    gcd(&k, &bf.content(&k), &bg.content(&k)).deg() > 0
}

/// Fulton's algorithm for the intersection number at the origin.
fn fulton(k: &Gf, f: &Biv, g: &Biv) -> Result<u32, IntersectionError> {
    let (mut f, mut g) = (f.clone(), g.clone());
    let mut acc = 0u32;
    loop {
        if f.is_zero() || g.is_zero() {
            return Err(IntersectionError::Improper);
        }
        if !k.is_zero(f.at_origin(k)) || !k.is_zero(g.at_origin(k)) {
            return Ok(acc);
        }
        let (mut fa, mut ga) = (f.axis(), g.axis());
        if fa.is_zero() && ga.is_zero() {
            // both divisible by v
            return Err(IntersectionError::Improper);
        }
        let deg = |p: &Poly| p.degree().unwrap_or(usize::MAX);
        if deg(&fa) > deg(&ga) {
            std::mem::swap(&mut f, &mut g);
            std::mem::swap(&mut fa, &mut ga);
        }
        if ga.is_zero() {
            // g = v h, and I(f, v) is the order of f(u, 0) at 0
            acc += fa.coeffs().iter().take_while(|&&c| k.is_zero(c)).count() as u32;
            g = g.div_v();
            continue;
        }
        let (r, s) = (fa.deg(), ga.deg());
        let shift = Poly::new(k, {
            let mut c = vec![k.zero(); s - r];
            c.push(ga.lc().expect("nonzero"));
            c
        });
        let lf = Poly::constant(k, fa.lc().expect("nonzero"));
        g = g.mul_poly(k, &lf).sub(k, &f.mul_poly(k, &shift));
    }
}

/// Local intersection multiplicity of `f` and `g` at `pt`.
pub fn intersection_multiplicity(f: &Form, g: &Form, pt: &PlanePoint) -> Result<u32, IntersectionError> {
    check_fields(f, g)?;
    if share_component(f, g) {
        return Err(IntersectionError::Improper);
    }
    local_multiplicity(f, g, pt)
}

fn local_multiplicity(f: &Form, g: &Form, pt: &PlanePoint) -> Result<u32, IntersectionError> {
    let k = pt.field();
    let c = pt.coords();
    let chart = (0..3).find(|&i| !k.is_zero(c[i])).expect("nonzero point");
    let inv = k.inv(c[chart]).expect("nonzero");
    let (u, v) = chart_vars(chart);
    let (u0, v0) = (k.mul(c[u], inv), k.mul(c[v], inv));
    let bf = Biv::from_form(&k, f, chart).translate(&k, u0, v0);
    let bg = Biv::from_form(&k, g, chart).translate(&k, u0, v0);
    fulton(&k, &bf, &bg)
}

fn embed(k0: &Gf, k: &Gf, f: &Poly) -> Poly {
    f.map(k, |a| k.from_int(k0.prime_value(a).expect("prime field element") as i64))
}

/// The intersection cycle `Σ mult_z [z]` of two curves without common
/// component, sorted by point. Bezout: `Σ mult_z deg z = deg f deg g`.
pub fn intersection_cycle(f: &Form, g: &Form) -> Result<Vec<(PlanePoint, u32)>, IntersectionError> {
    let k0 = check_fields(f, g)?;
    if share_component(f, g) {
        return Err(IntersectionError::Improper);
    }
    let p = f.characteristic();
    let mut points: Vec<PlanePoint> = Vec::new();

    // points on z = 0 other than (1:0:0): (u:1:0) in the chart y = 1
    let (fy, gy) = (Biv::from_form(&k0, f, 1), Biv::from_form(&k0, g, 1));
    let h = gcd(&k0, &fy.axis(), &gy.axis());
    if let Some(fac) = factor(&k0, &h) {
        for (irr, _) in fac.factors {
            let kk = Gf::extension(p as u64, irr.deg()).map_err(|_| IntersectionError::ExtensionTooLarge(MAX_EXT))?;
            let r = roots(&kk, &embed(&k0, &kk, &irr))[0];
            points.push(PlanePoint::from_coords(&kk, [r, kk.one(), kk.zero()]).expect("orbit of full size"));
        }
    }
    let x_pt = [k0.one(), k0.zero(), k0.zero()];
    if k0.is_zero(f.eval(&k0, &x_pt)) && k0.is_zero(g.eval(&k0, &x_pt)) {
        points.push(PlanePoint::from_coords(&k0, x_pt).expect("rational point"));
    }
    let mut out = Vec::new();
    let mut found = 0usize;
    for pt in points {
        let m = local_multiplicity(f, g, &pt)?;
        found += m as usize * pt.degree();
        out.push((pt, m));
    }

    // points with z != 0
    let bezout = (f.degree() * g.degree()) as usize;
    let res = resultant_v(&k0, &Biv::from_form(&k0, f, 2), &Biv::from_form(&k0, g, 2));
    let mut n = 0;
    while found < bezout {
        n += 1;
        if n > MAX_EXT {
            return Err(IntersectionError::ExtensionTooLarge(MAX_EXT));
        }
        let k = Gf::extension(p as u64, n)?;
        let (bf, bg) = (Biv::from_form(&k, f, 2), Biv::from_form(&k, g, 2));
        for x0 in roots(&k, &embed(&k0, &k, &res)) {
            let (a, b) = (bf.at_u(&k, x0), bg.at_u(&k, x0));
            let h = gcd(&k, &a, &b);
            if h.is_zero() {
                return Err(IntersectionError::Improper);
            }
            for y0 in roots(&k, &h) {
                let c = normalize(&k, [x0, y0, k.one()]).expect("nonzero");
                if orbit_size(&k, c) != n {
                    continue;
                }
                let pt = PlanePoint::from_coords(&k, c).expect("orbit of full size");
                if pt.coords() != c {
                    continue;
                }
                let m = local_multiplicity(f, g, &pt)?;
                found += m as usize * n;
                out.push((pt, m));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Degree of a zero-cycle `Σ m_z [z]`.
pub fn cycle_degree(cycle: &[(PlanePoint, i64)]) -> i64 {
    cycle.iter().map(|(z, m)| m * z.degree() as i64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(s: &str, p: u32) -> Form {
        Form::parse(s, p).unwrap()
    }

    #[test]
    fn transverse_lines() {
        let cyc = intersection_cycle(&form("x", 3), &form("y", 3)).unwrap();
        assert_eq!(cyc, vec![(PlanePoint::rational(3, [0, 0, 1]).unwrap(), 1)]);
    }

    #[test]
    fn tangent_line_to_conic() {
        let (l, c) = (form("x", 3), form("y^2 - x*z", 3));
        let origin = PlanePoint::rational(3, [0, 0, 1]).unwrap();
        assert_eq!(intersection_multiplicity(&l, &c, &origin).unwrap(), 2);
        // oracle: Res_y(x, y^2 - x) = x^2 has valuation 2 at x = 0
        let k = Gf::prime(3).unwrap();
        let r = resultant_v(&k, &Biv::from_form(&k, &l, 2), &Biv::from_form(&k, &c, 2));
        assert_eq!(r.root_multiplicity(&k, k.zero()), 2);
    }

    #[test]
    fn meeting_over_an_extension() {
        // x^2 + y^2 + z^2 = 0 meets z = 0 in a single degree-2 point over F_3
        let cyc = intersection_cycle(&form("x^2+y^2+z^2", 3), &form("z", 3)).unwrap();
        assert_eq!(cyc.len(), 1);
        assert_eq!(cyc[0].0.degree(), 2);
        assert_eq!(cyc[0].1, 1);
    }

    #[test]
    fn common_component_rejected() {
        let f = form("x*y", 5);
        let g = form("x*z", 5);
        assert_eq!(intersection_cycle(&f, &g), Err(IntersectionError::Improper));
        assert!(share_component(&form("z^2", 5), &form("z*x", 5)));
        assert!(share_component(&form("(x-z)*y", 5), &form("(x-z)*(y+z)", 5)));
        assert!(!share_component(&form("x", 5), &form("y", 5)));
    }

    #[test]
    fn bezout_examples() {
        for (a, b) in [
            ("x^3 + y^2*z + z^3", "x*y + z^2"),
            ("x^2 - y*z", "x^2 - 2*y*z + z^2"),
            ("y^2*z - x^3", "y"),
            ("x*y*z", "x^3+y^3+z^3"),
        ] {
            let (f, g) = (form(a, 5), form(b, 5));
            let cyc = intersection_cycle(&f, &g).unwrap();
            let total: usize = cyc.iter().map(|(z, m)| z.degree() * *m as usize).sum();
            assert_eq!(total as u32, f.degree() * g.degree(), "{a} . {b}");
        }
    }

    #[test]
    fn cusp_multiplicity() {
        // y^2 z = x^3 against the tangent cone y = 0 at the cusp: multiplicity 3
        let pt = PlanePoint::rational(7, [0, 0, 1]).unwrap();
        let m = intersection_multiplicity(&form("y^2*z - x^3", 7), &form("y", 7), &pt).unwrap();
        assert_eq!(m, 3);
    }
}
