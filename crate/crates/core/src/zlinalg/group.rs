use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::snf::{integer_kernel, smith_normal_form, IntegerSolver};
use super::{IntMatrix, ZLinAlgError};

/// A finitely generated abelian group `Z^n / im(R)`, where the columns of
/// `R` are relations among the `n` generators.
///
/// The invariant factors are computed once at construction; `to_normal`
/// records the change of basis from the original generators to the
/// invariant-factor coordinates.
#[derive(Clone)]
pub struct FinAbGroup {
    generators: usize,
    relations: IntMatrix,
    torsion: Vec<BigInt>,
    free_rank: usize,
    to_normal: IntMatrix,
}

/// Invariant-factor summary of a group, suitable for reports.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupInvariants {
    pub free_rank: usize,
    #[serde(with = "crate::json_int::vec")]
    pub torsion: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn new(generators: usize, relations: IntMatrix) -> Self {
        assert_eq!(relations.rows(), generators, "relation matrix has wrong row count");
        let snf = smith_normal_form(&relations);
        let mut torsion = Vec::new();
        let mut keep = Vec::new();
        for i in 0..generators {
            if i < snf.rank {
                let d = &snf.s[(i, i)];
                if !d.is_one() {
                    torsion.push(d.clone());
                    keep.push(i);
                }
            } else {
                keep.push(i);
            }
        }
        let mut to_normal = IntMatrix::zeros(keep.len(), generators);
        for (r, &i) in keep.iter().enumerate() {
            for j in 0..generators {
                to_normal[(r, j)] = snf.u[(i, j)].clone();
            }
        }
        let free_rank = generators - snf.rank;
        FinAbGroup {
            generators,
            relations,
            torsion,
            free_rank,
            to_normal,
        }
    }

    pub fn trivial() -> Self {
        Self::new(0, IntMatrix::zeros(0, 0))
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, IntMatrix::zeros(rank, 0))
    }

    /// `Z/d`; `d = 0` gives `Z`.
    pub fn cyclic(d: impl Into<BigInt>) -> Self {
        Self::from_invariants(&[d.into()])
    }

    /// One generator per entry, the entry being its order (`0` for a free
    /// generator, `1` for a trivial one).
    pub fn from_invariants(orders: &[BigInt]) -> Self {
        let n = orders.len();
        let nonzero: Vec<usize> = (0..n).filter(|&i| !orders[i].is_zero()).collect();
        let mut rel = IntMatrix::zeros(n, nonzero.len());
        for (c, &i) in nonzero.iter().enumerate() {
            rel[(i, c)] = orders[i].clone();
        }
        Self::new(n, rel)
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariants(&self) -> GroupInvariants {
        GroupInvariants {
            free_rank: self.free_rank,
            torsion: self.torsion.clone(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group, or `None` if it is infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Coordinates of an element in invariant-factor form: torsion
    /// coordinates reduced into `[0, d_i)`, followed by free coordinates.
    pub fn normal_form(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.generators, "element has wrong length");
        let mut y = self.to_normal.mul_vec(x);
        for (yi, d) in y.iter_mut().zip(&self.torsion) {
            *yi = yi.mod_floor(d);
        }
        y
    }

    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        self.normal_form(x).iter().all(Zero::is_zero)
    }

    pub fn elements_equal(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        let diff: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.is_zero_element(&diff)
    }

    pub fn zero_element(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.generators]
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        FinAbGroup::new(
            self.generators + other.generators,
            self.relations.block_diag(&other.relations),
        )
    }

    pub fn direct_sum_all<'a>(parts: impl IntoIterator<Item = &'a FinAbGroup>) -> FinAbGroup {
        let mut gens = 0;
        let mut rel = IntMatrix::zeros(0, 0);
        for g in parts {
            gens += g.generators;
            rel = rel.block_diag(&g.relations);
        }
        FinAbGroup::new(gens, rel)
    }

    /// Identity homomorphism.
    pub fn identity(&self) -> AbHom {
        AbHom {
            source: self.clone(),
            target: self.clone(),
            matrix: IntMatrix::identity(self.generators),
        }
    }
}

impl PartialEq for FinAbGroup {
    /// Isomorphism of abstract groups.
    fn eq(&self, other: &Self) -> bool {
        groups_isomorphic(self, other)
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.invariants())
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAbGroup({}; {} gens)", self, self.generators)
    }
}

impl fmt::Display for GroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

pub fn groups_isomorphic(a: &FinAbGroup, b: &FinAbGroup) -> bool {
    a.free_rank == b.free_rank && a.torsion == b.torsion
}

/// A homomorphism given by an integer matrix on the chosen generators.
#[derive(Clone, Debug)]
pub struct AbHom {
    source: FinAbGroup,
    target: FinAbGroup,
    matrix: IntMatrix,
}

impl AbHom {
    /// Checks that every relation of the source maps into the relations of
    /// the target.
    pub fn new(source: FinAbGroup, target: FinAbGroup, matrix: IntMatrix) -> Result<Self, ZLinAlgError> {
        if matrix.rows() != target.generators || matrix.cols() != source.generators {
            return Err(ZLinAlgError::ShapeMismatch {
                expected: (target.generators, source.generators),
                found: (matrix.rows(), matrix.cols()),
            });
        }
        let images = &matrix * &source.relations;
        for j in 0..images.cols() {
            if !target.is_zero_element(&images.column(j)) {
                return Err(ZLinAlgError::WellDefinedness { relation: j });
            }
        }
        Ok(AbHom { source, target, matrix })
    }

    pub fn zero(source: FinAbGroup, target: FinAbGroup) -> Self {
        let matrix = IntMatrix::zeros(target.generators, source.generators);
        AbHom { source, target, matrix }
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(x)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AbHom) -> Result<AbHom, ZLinAlgError> {
        if self.target.generators != other.source.generators {
            return Err(ZLinAlgError::ShapeMismatch {
                expected: (other.source.generators, 0),
                found: (self.target.generators, 0),
            });
        }
        Ok(AbHom {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: &other.matrix * &self.matrix,
        })
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_zero_element(&self.matrix.column(j)))
    }
}

/// A group together with an injective map into an ambient group.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: FinAbGroup,
    pub inclusion: AbHom,
}

impl Subgroup {
    /// The whole group as a subgroup of itself.
    pub fn whole(g: &FinAbGroup) -> Self {
        Subgroup {
            group: g.clone(),
            inclusion: g.identity(),
        }
    }

    /// Subgroup generated by the given elements (columns of `gens`).
    pub fn generated_by(ambient: &FinAbGroup, gens: &IntMatrix) -> Self {
        let hom = AbHom {
            source: FinAbGroup::free(gens.cols()),
            target: ambient.clone(),
            matrix: gens.clone(),
        };
        image(&hom)
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.inclusion.matrix
    }

    /// Whether `x` (an element of the ambient group) lies in the subgroup.
    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.membership().solve(x).is_some()
    }

    /// Whether every generator of `other` lies in `self`.
    pub fn contains_subgroup(&self, other: &Subgroup) -> bool {
        let solver = self.membership();
        other.generators().columns().iter().all(|c| solver.solve(c).is_some())
    }

    /// Solver for `[generators | ambient relations] x = b`.
    fn membership(&self) -> IntegerSolver {
        let ambient = &self.inclusion.target;
        IntegerSolver::new(&self.inclusion.matrix.hcat(&ambient.relations))
    }
}

/// Result of a cokernel computation: the quotient and the projection onto it.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FinAbGroup,
    pub projection: AbHom,
}

/// Subgroup of `ambient` generated by the columns `gens`, presented on
/// those generators.
fn subgroup_on(ambient: &FinAbGroup, gens: IntMatrix) -> Subgroup {
    let k = gens.cols();
    let null = integer_kernel(&gens.hcat(&ambient.relations));
    let rel = null.slice(0..k, 0..null.cols());
    let group = FinAbGroup::new(k, rel);
    Subgroup {
        inclusion: AbHom {
            source: group.clone(),
            target: ambient.clone(),
            matrix: gens,
        },
        group,
    }
}

pub fn kernel(h: &AbHom) -> Subgroup {
    let ns = h.source.generators;
    let null = integer_kernel(&h.matrix.hcat(&h.target.relations));
    let gens = null.slice(0..ns, 0..null.cols());
    subgroup_on(&h.source, gens)
}

pub fn image(h: &AbHom) -> Subgroup {
    subgroup_on(&h.target, h.matrix.clone())
}

pub fn cokernel(h: &AbHom) -> Quotient {
    let t = &h.target;
    let group = FinAbGroup::new(t.generators, t.relations.hcat(&h.matrix));
    let projection = AbHom {
        source: t.clone(),
        target: group.clone(),
        matrix: IntMatrix::identity(t.generators),
    };
    Quotient { group, projection }
}

/// `h⁻¹(sub)` as a subgroup of the source of `h`.
pub fn preimage_subgroup(h: &AbHom, sub: &Subgroup) -> Result<Subgroup, ZLinAlgError> {
    if sub.inclusion.target.generators != h.target.generators {
        return Err(ZLinAlgError::ShapeMismatch {
            expected: (h.target.generators, 0),
            found: (sub.inclusion.target.generators, 0),
        });
    }
    let ns = h.source.generators;
    let system = h
        .matrix
        .hcat(&sub.inclusion.matrix.neg())
        .hcat(&h.target.relations.neg());
    let null = integer_kernel(&system);
    let gens = null.slice(0..ns, 0..null.cols());
    Ok(subgroup_on(&h.source, gens))
}

/// Quotient `Q / S` for subgroups `S ⊆ Q` of a common ambient group.
pub fn quotient_of_subgroups(q: &Subgroup, s: &Subgroup) -> Result<FinAbGroup, ZLinAlgError> {
    let k = q.group.generators;
    let mut extra = Vec::new();
    if *q.generators() == IntMatrix::identity(k) {
        // Q is the whole ambient group on its own generators
        extra = s.generators().columns();
    } else {
        let solver = q.membership();
        for c in s.generators().columns() {
            let sol = solver.solve(&c).ok_or(ZLinAlgError::NotASubgroup)?;
            extra.push(sol[..k].to_vec());
        }
    }
    let extra = IntMatrix::from_columns(k, &extra);
    Ok(FinAbGroup::new(k, q.group.relations.hcat(&extra)))
}

/// Homology `ker(h_out) / im(h_in)` of `A → B → C`.
pub fn subquotient(h_in: &AbHom, h_out: &AbHom) -> Result<Homology, ZLinAlgError> {
    let comp = h_in.then(h_out)?;
    if !comp.is_zero() {
        return Err(ZLinAlgError::NotAComplex);
    }
    let ker = kernel(h_out);
    let img = image(h_in);
    let group = quotient_of_subgroups(&ker, &img)?;
    Ok(Homology {
        group,
        cycles: ker,
        boundaries: img,
    })
}

/// A homology group with the cycle and boundary subgroups it came from.
#[derive(Clone, Debug)]
pub struct Homology {
    pub group: FinAbGroup,
    pub cycles: Subgroup,
    pub boundaries: Subgroup,
}

/// `a ⊗_Z b`, computed from invariant factors.
pub fn tensor_groups(a: &FinAbGroup, b: &FinAbGroup) -> FinAbGroup {
    let mut orders: Vec<BigInt> = Vec::new();
    for _ in 0..a.free_rank * b.free_rank {
        orders.push(BigInt::zero());
    }
    for d in &a.torsion {
        for _ in 0..b.free_rank {
            orders.push(d.clone());
        }
    }
    for e in &b.torsion {
        for _ in 0..a.free_rank {
            orders.push(e.clone());
        }
    }
    for d in &a.torsion {
        for e in &b.torsion {
            orders.push(d.gcd(e));
        }
    }
    FinAbGroup::from_invariants(&orders)
}
