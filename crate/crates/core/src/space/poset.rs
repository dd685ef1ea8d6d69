use rand::Rng;

use super::{Dim, Open, SpaceError, SpectralSpace};

/// Which dimension function a [`FinitePoset`] carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DimChoice {
    /// Length of the longest specialization chain starting at the point.
    Krull,
    /// Minus the length of the longest generization chain ending at it.
    NegCodim,
    Explicit(Vec<Dim>),
}

/// A finite spectral space given as a poset. Points are indices.
#[derive(Debug, Clone)]
pub struct FinitePoset {
    ids: Vec<String>,
    displays: Vec<String>,
    // spec[a][b]: b in closure{a}; reflexive and transitive
    spec: Vec<Vec<bool>>,
    dims: Vec<Dim>,
}

impl FinitePoset {
    /// Builds the poset generated by `pairs` of `(general, special)` indices.
    pub fn new(
        ids: Vec<String>,
        displays: Vec<String>,
        pairs: &[(usize, usize)],
        dims: DimChoice,
    ) -> Result<Self, SpaceError> {
        let n = ids.len();
        assert_eq!(displays.len(), n);
        let mut spec = vec![vec![false; n]; n];
        for (i, row) in spec.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(SpaceError::UnknownPoint(format!("index {}", a.max(b))));
            }
            spec[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if spec[i][k] {
                    for j in 0..n {
                        if spec[k][j] {
                            spec[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if spec[i][j] && spec[j][i] {
                    return Err(SpaceError::NotAPartialOrder(format!(
                        "{} and {} specialize to each other",
                        ids[i], ids[j]
                    )));
                }
            }
        }
        let mut poset = FinitePoset {
            ids,
            displays,
            spec,
            dims: Vec::new(),
        };
        poset.dims = match dims {
            DimChoice::Krull => (0..n).map(|p| Dim::Finite(poset.krull_dim(p))).collect(),
            DimChoice::NegCodim => (0..n).map(|p| Dim::Finite(poset.neg_codim(p))).collect(),
            DimChoice::Explicit(d) => {
                assert_eq!(d.len(), n);
                d
            }
        };
        Ok(poset)
    }

    /// A chain `x0 < x1 < ... ` with `x_{n-1}` generic and `x0` closed.
    pub fn chain(n: usize, dims: DimChoice) -> Self {
        let ids: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i, i - 1)).collect();
        Self::new(ids.clone(), ids, &pairs, dims).expect("a chain is a partial order")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, p: usize) -> &str {
        &self.ids[p]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn dims(&self) -> &[Dim] {
        &self.dims
    }

    /// Longest proper specialization chain starting at `p`.
    pub fn krull_dim(&self, p: usize) -> i64 {
        let mut memo = vec![None; self.len()];
        self.chain_len(p, true, &mut memo)
    }

    /// Minus the longest proper generization chain ending at `p`.
    pub fn neg_codim(&self, p: usize) -> i64 {
        let mut memo = vec![None; self.len()];
        -self.chain_len(p, false, &mut memo)
    }

    fn chain_len(&self, p: usize, down: bool, memo: &mut Vec<Option<i64>>) -> i64 {
        if let Some(v) = memo[p] {
            return v;
        }
        let mut best = 0;
        for q in 0..self.len() {
            let rel = if down { self.spec[p][q] } else { self.spec[q][p] };
            if q != p && rel {
                best = best.max(1 + self.chain_len(q, down, memo));
            }
        }
        memo[p] = Some(best);
        best
    }

    /// Whether the index set is generization-closed.
    pub fn is_open_set(&self, members: &[usize]) -> bool {
        members
            .iter()
            .all(|&b| (0..self.len()).all(|a| !self.spec[a][b] || members.contains(&a)))
    }

    pub fn open_from_members(&self, members: &[usize]) -> Result<Open<usize>, SpaceError> {
        if !self.is_open_set(members) {
            return Err(SpaceError::NotOpen(self.describe(members)));
        }
        let gens = (0..self.len()).filter(|p| !members.contains(p)).collect();
        Ok(Open::complement_of_closure(gens))
    }

    fn describe(&self, members: &[usize]) -> String {
        let names: Vec<&str> = members.iter().map(|&i| self.ids[i].as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// Restriction of the dimension function to an open: the subposet on
    /// `U` with the ambient values kept. Returns the new poset and the map
    /// from its indices to ambient indices.
    pub fn restrict(&self, u: &Open<usize>) -> (FinitePoset, Vec<usize>) {
        let keep: Vec<usize> = (0..self.len()).filter(|p| u.contains(self, p)).collect();
        let sub = FinitePoset {
            ids: keep.iter().map(|&i| self.ids[i].clone()).collect(),
            displays: keep.iter().map(|&i| self.displays[i].clone()).collect(),
            spec: keep
                .iter()
                .map(|&i| keep.iter().map(|&j| self.spec[i][j]).collect())
                .collect(),
            dims: keep.iter().map(|&i| self.dims[i]).collect(),
        };
        (sub, keep)
    }

    /// Restriction to the subset given by member indices, checking openness.
    pub fn restrict_to(&self, members: &[usize]) -> Result<(FinitePoset, Vec<usize>), SpaceError> {
        let u = self.open_from_members(members)?;
        Ok(self.restrict(&u))
    }

    /// Same underlying poset with a different dimension function.
    pub fn with_dims(&self, dims: DimChoice) -> FinitePoset {
        let pairs: Vec<(usize, usize)> = (0..self.len())
            .flat_map(|a| (0..self.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && self.spec[a][b])
            .collect();
        FinitePoset::new(self.ids.clone(), self.displays.clone(), &pairs, dims)
            .expect("already a partial order")
    }

    /// Proper specialization pairs `(general, special)`.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && self.spec[a][b])
            .collect()
    }
}

impl SpectralSpace for FinitePoset {
    type Point = usize;

    fn points_of_dim(&self, l: i64, _bound: Option<u32>) -> Result<Vec<usize>, SpaceError> {
        Ok((0..self.len()).filter(|&p| self.dims[p] == Dim::Finite(l)).collect())
    }

    fn specializes(&self, a: &usize, b: &usize) -> bool {
        self.spec[*a][*b]
    }

    fn dim(&self, p: &usize) -> Dim {
        self.dims[*p]
    }

    fn label(&self, p: &usize) -> String {
        self.displays[*p].clone()
    }

    fn dim_range(&self) -> Option<(i64, i64)> {
        let finite: Vec<i64> = self.dims.iter().filter_map(|d| d.finite()).collect();
        Some((*finite.iter().min()?, *finite.iter().max()?))
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn all_points(&self, _bound: Option<u32>) -> Result<Vec<usize>, SpaceError> {
        let mut pts: Vec<usize> = (0..self.len()).collect();
        pts.sort_by_key(|&p| (self.dims[p], p));
        Ok(pts)
    }
}

/// Random poset on `n` points: each pair `i > j` is related with
/// probability `density`, then closed transitively. Larger index is more
/// generic, so the result is always a partial order.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, density: f64, dims: DimChoice) -> FinitePoset {
    let ids: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..i {
            if rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    FinitePoset::new(ids.clone(), ids, &pairs, dims).expect("edges point downward")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::is_dimension_function;

    #[test]
    fn chain_dimensions() {
        let c = FinitePoset::chain(3, DimChoice::Krull);
        assert_eq!(c.krull_dim(2), 2);
        assert_eq!(c.neg_codim(0), -2);
        assert_eq!(c.points_of_dim(2, None).unwrap(), vec![2]);
    }

    #[test]
    fn antichain_dimensions() {
        let ids: Vec<String> = vec!["a".into(), "b".into(), "c".into()];
        let p = FinitePoset::new(ids.clone(), ids, &[], DimChoice::Krull).unwrap();
        for i in 0..3 {
            assert_eq!(p.krull_dim(i), 0);
            assert_eq!(p.neg_codim(i), 0);
        }
    }

    #[test]
    fn constant_function_is_not_a_dimension_function() {
        let c = FinitePoset::chain(2, DimChoice::Explicit(vec![Dim::Finite(0); 2]));
        assert!(!is_dimension_function(&c, None).unwrap());
        assert!(is_dimension_function(&c.with_dims(DimChoice::Krull), None).unwrap());
    }

    #[test]
    fn cycles_rejected() {
        let ids: Vec<String> = vec!["a".into(), "b".into()];
        let r = FinitePoset::new(ids.clone(), ids, &[(0, 1), (1, 0)], DimChoice::Krull);
        assert!(matches!(r, Err(SpaceError::NotAPartialOrder(_))));
    }

    #[test]
    fn restriction_examples() {
        let c = FinitePoset::chain(3, DimChoice::NegCodim);
        let (whole, _) = c.restrict(&Open::whole());
        assert_eq!(whole.dims(), c.dims());

        // {x1, x2} is generization-closed; neg_codim survives restriction.
        let (sub, map) = c.restrict_to(&[1, 2]).unwrap();
        let x1 = map.iter().position(|&i| i == 1).unwrap();
        assert_eq!(sub.dim(&x1), Dim::Finite(-1));
        assert_eq!(sub.neg_codim(x1), -1);

        // Krull dimension does not: x1 keeps 1 but has nothing below it in U.
        let k = c.with_dims(DimChoice::Krull);
        let (sub, _) = k.restrict_to(&[1, 2]).unwrap();
        assert_eq!(sub.dim(&0), Dim::Finite(1));
        assert_eq!(sub.krull_dim(0), 0);

        assert!(matches!(c.restrict_to(&[0, 1]), Err(SpaceError::NotOpen(_))));
    }
}
