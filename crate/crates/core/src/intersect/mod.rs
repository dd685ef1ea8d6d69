//! Intersection products of cycle classes.
//!
//! A product is evaluated on representatives that meet properly, where it
//! is the pointwise `K_0` pairing summed over pairs of support points. When
//! the representatives do not meet properly a [`Mover`] may replace the
//! right-hand one by a rationally equivalent cycle, with a seeded RNG and a
//! bounded number of attempts.
//!
//! The product carries no extra sign. Comparisons with the classical
//! intersection product multiply by `(-1)^{pq}`, see [`comparison_sign`].

use std::cell::RefCell;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gersten::{chow_group, ChowGroup, GerstenError};
use crate::klocal::{add_into, KError, KLocalData, PairingData, SupportedElement};
use crate::space::{Dim, SpaceError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntersectError {
    #[error("representatives do not meet properly ({left} and {right})")]
    ImproperIntersection { left: String, right: String },
    #[error("no properly meeting representative found after {attempts} attempts")]
    MovingFailed { attempts: usize },
    #[error("codimension must be non-negative, got {0}")]
    Grading(i64),
    #[error("{point} does not lie in codimension {codim}")]
    WrongStratum { point: String, codim: i64 },
    #[error("cycle is supported outside the enumerated stratum")]
    OutsideStratum,
    #[error(transparent)]
    K(#[from] KError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Gersten(#[from] GerstenError),
}

/// A cycle in codimension `codim`, standing for its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowClass<P> {
    pub codim: i64,
    pub rep: SupportedElement<P>,
}

impl<P: Ord + Clone> ChowClass<P> {
    pub fn new(codim: i64, rep: SupportedElement<P>) -> Self {
        ChowClass { codim, rep }
    }

    pub fn zero(codim: i64) -> Self {
        ChowClass {
            codim,
            rep: SupportedElement::new(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.codim, other.codim, "adding classes of different codimension");
        let mut rep = self.rep.clone();
        add_into(&mut rep, &other.rep);
        ChowClass { codim: self.codim, rep }
    }
}

/// Replaces a cycle by a rationally equivalent one.
pub trait Mover<P> {
    /// `None` if no candidate could be produced.
    fn move_cycle(
        &self,
        codim: i64,
        z: &SupportedElement<P>,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<SupportedElement<P>>, IntersectError>;
}

/// Degree of a cycle, the normal form on backends where it classifies
/// classes.
pub trait DegreeMap<P> {
    fn cycle_degree(&self, codim: i64, z: &SupportedElement<P>) -> BigInt;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductOptions {
    pub seed: u64,
    pub allow_move: bool,
    pub max_attempts: usize,
}

impl Default for ProductOptions {
    fn default() -> Self {
        ProductOptions {
            seed: 0,
            allow_move: false,
            max_attempts: 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProductReport<P> {
    pub left: ChowClass<P>,
    pub right: ChowClass<P>,
    /// The right-hand representative actually used.
    pub right_used: SupportedElement<P>,
    pub moved: bool,
    pub attempts: usize,
    pub seed: u64,
    pub result: ChowClass<P>,
}

/// `(-1)^{pq}`: the artifact product equals the classical one times this.
pub fn comparison_sign(p: i64, q: i64) -> i64 {
    if (p * q) % 2 == 0 {
        1
    } else {
        -1
    }
}

fn check_stratum<D: KLocalData>(data: &D, c: &ChowClass<D::Point>) -> Result<(), IntersectError> {
    if c.codim < 0 {
        return Err(IntersectError::Grading(c.codim));
    }
    for x in c.rep.keys() {
        if data.dim(x) != Dim::Finite(-c.codim) {
            return Err(IntersectError::WrongStratum {
                point: data.label(x),
                codim: c.codim,
            });
        }
    }
    Ok(())
}

/// First pair of support points whose common specializations are too big.
fn improper_pair<D: KLocalData>(
    data: &D,
    left: &SupportedElement<D::Point>,
    right: &SupportedElement<D::Point>,
) -> Result<Option<(D::Point, D::Point)>, IntersectError> {
    let bound = data.enumeration_bound();
    for x in left.keys() {
        for y in right.keys() {
            let expected = match (data.dim(x), data.dim(y)) {
                (Dim::Finite(a), Dim::Finite(b)) => a + b,
                _ => return Ok(Some((x.clone(), y.clone()))),
            };
            match data.common_specialization_dim(x, y, bound)? {
                None => {}
                Some(Dim::Finite(d)) if d <= expected => {}
                Some(_) => return Ok(Some((x.clone(), y.clone()))),
            }
        }
    }
    Ok(None)
}

/// Every common specialization `z` of support points `x`, `y` has
/// `dim z <= dim x + dim y`.
pub fn proper<D: KLocalData>(
    data: &D,
    left: &SupportedElement<D::Point>,
    right: &SupportedElement<D::Point>,
) -> Result<bool, IntersectError> {
    Ok(improper_pair(data, left, right)?.is_none())
}

fn evaluate<D: PairingData>(
    data: &D,
    left: &SupportedElement<D::Point>,
    right: &SupportedElement<D::Point>,
) -> Result<SupportedElement<D::Point>, IntersectError> {
    let mut acc = SupportedElement::new();
    for (x, a) in left {
        for (y, b) in right {
            add_into(&mut acc, &data.pair(x, a, y, b)?);
        }
    }
    let mut out = SupportedElement::new();
    for (z, v) in acc {
        if !data.group_at(&z, 0)?.is_zero_element(&v) {
            out.insert(z, v);
        }
    }
    Ok(out)
}

pub fn unit_class<D: PairingData>(data: &D) -> ChowClass<D::Point> {
    ChowClass::new(0, data.unit())
}

/// The product of two classes, moving the right-hand representative if
/// the options allow it and a mover is supplied.
pub fn product<D: PairingData>(
    data: &D,
    left: &ChowClass<D::Point>,
    right: &ChowClass<D::Point>,
    mover: Option<&dyn Mover<D::Point>>,
    opts: ProductOptions,
) -> Result<ProductReport<D::Point>, IntersectError> {
    check_stratum(data, left)?;
    check_stratum(data, right)?;
    let codim = left.codim + right.codim;
    let report = |right_used, moved, attempts, result| ProductReport {
        left: left.clone(),
        right: right.clone(),
        right_used,
        moved,
        attempts,
        seed: opts.seed,
        result: ChowClass::new(codim, result),
    };
    // nothing lives in this codimension
    if data.dim_range().is_none_or(|(lo, _)| -codim < lo) {
        return Ok(report(right.rep.clone(), false, 0, SupportedElement::new()));
    }
    let Some((x, y)) = improper_pair(data, &left.rep, &right.rep)? else {
        let result = evaluate(data, &left.rep, &right.rep)?;
        return Ok(report(right.rep.clone(), false, 0, result));
    };
    let mover = match mover {
        Some(m) if opts.allow_move => m,
        _ => {
            return Err(IntersectError::ImproperIntersection {
                left: data.label(&x),
                right: data.label(&y),
            })
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for attempt in 1..=opts.max_attempts {
        let Some(candidate) = mover.move_cycle(right.codim, &right.rep, &mut rng)? else {
            continue;
        };
        if proper(data, &left.rep, &candidate)? {
            let result = evaluate(data, &left.rep, &candidate)?;
            return Ok(report(candidate, true, attempt, result));
        }
    }
    Err(IntersectError::MovingFailed {
        attempts: opts.max_attempts,
    })
}

/// Moves a cycle by adding random rational-equivalence relations. Works on
/// any backend whose Chow groups are computable.
pub struct RelationMover<'a, D: KLocalData> {
    data: &'a D,
    relations: RefCell<BTreeMap<i64, ChowGroup<D::Point>>>,
}

impl<'a, D: KLocalData> RelationMover<'a, D> {
    pub fn new(data: &'a D) -> Self {
        RelationMover {
            data,
            relations: RefCell::new(BTreeMap::new()),
        }
    }
}

impl<D: KLocalData> Mover<D::Point> for RelationMover<'_, D> {
    fn move_cycle(
        &self,
        codim: i64,
        z: &SupportedElement<D::Point>,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<SupportedElement<D::Point>>, IntersectError> {
        let mut cache = self.relations.borrow_mut();
        if let Entry::Vacant(e) = cache.entry(codim) {
            e.insert(chow_group(self.data, -codim)?);
        }
        let ch = &cache[&codim];
        let gens = ch.relations.generators().columns();
        let Some(mut v) = ch.cycles.flatten(z) else {
            return Ok(None);
        };
        if gens.is_empty() {
            return Ok(None);
        }
        for _ in 0..rng.gen_range(1..=2) {
            let g = &gens[rng.gen_range(0..gens.len())];
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            for (a, b) in v.iter_mut().zip(g) {
                *a += b * sign;
            }
        }
        Ok(Some(ch.cycles.unflatten(&v)))
    }
}

/// Normal forms of classes in the computed Chow groups.
pub struct ChowNormalForm<'a, D: KLocalData> {
    data: &'a D,
    groups: RefCell<BTreeMap<i64, ChowGroup<D::Point>>>,
}

impl<'a, D: KLocalData> ChowNormalForm<'a, D> {
    pub fn new(data: &'a D) -> Self {
        ChowNormalForm {
            data,
            groups: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn normal_form(&self, codim: i64, z: &SupportedElement<D::Point>) -> Result<Vec<BigInt>, IntersectError> {
        if self.data.dim_range().is_none_or(|(lo, hi)| -codim < lo || -codim > hi) {
            // empty stratum, the group is zero
            return if z.is_empty() {
                Ok(Vec::new())
            } else {
                Err(IntersectError::OutsideStratum)
            };
        }
        let mut cache = self.groups.borrow_mut();
        if let Entry::Vacant(e) = cache.entry(codim) {
            e.insert(chow_group(self.data, -codim)?);
        }
        let ch = &cache[&codim];
        let v = ch.cycles.flatten(z).ok_or(IntersectError::OutsideStratum)?;
        Ok(ch.chow.normal_form(&v))
    }
}

/// One product in a ring table.
#[derive(Debug, Clone)]
pub struct TableEntry<P> {
    pub codim: i64,
    pub rep: SupportedElement<P>,
    pub normal_form: Vec<BigInt>,
}

#[derive(Debug, Clone)]
pub struct RingTable<P> {
    pub products: Vec<Vec<TableEntry<P>>>,
    pub unit_law: bool,
    pub commutative: bool,
    pub associative: bool,
    pub failures: Vec<String>,
}

impl<P> RingTable<P> {
    pub fn axioms_hold(&self) -> bool {
        self.unit_law && self.commutative && self.associative
    }
}

pub type NormalFormFn<'a, P> = dyn Fn(i64, &SupportedElement<P>) -> Result<Vec<BigInt>, IntersectError> + 'a;

/// Multiplication table of the given classes, with unit, commutativity and
/// associativity checked through `nf`. Cycles sit in `K_0`, so graded
/// commutativity carries no Koszul sign and is plain commutativity.
pub fn ring_table<D: PairingData>(
    data: &D,
    classes: &[ChowClass<D::Point>],
    mover: Option<&dyn Mover<D::Point>>,
    opts: ProductOptions,
    nf: &NormalFormFn<'_, D::Point>,
) -> Result<RingTable<D::Point>, IntersectError> {
    let mul = |a: &ChowClass<D::Point>, b: &ChowClass<D::Point>| -> Result<ChowClass<D::Point>, IntersectError> {
        Ok(product(data, a, b, mover, opts)?.result)
    };
    let nf_of = |c: &ChowClass<D::Point>| nf(c.codim, &c.rep);
    let mut failures = Vec::new();
    let mut products = Vec::new();
    let mut table = Vec::new();
    for a in classes {
        let mut row = Vec::new();
        let mut raw = Vec::new();
        for b in classes {
            let c = mul(a, b)?;
            row.push(TableEntry {
                codim: c.codim,
                normal_form: nf_of(&c)?,
                rep: c.rep.clone(),
            });
            raw.push(c);
        }
        products.push(row);
        table.push(raw);
    }
    let unit = unit_class(data);
    let mut unit_law = true;
    for (i, a) in classes.iter().enumerate() {
        let (l, r) = (mul(&unit, a)?, mul(a, &unit)?);
        let target = nf_of(a)?;
        if nf_of(&l)? != target || nf_of(&r)? != target {
            unit_law = false;
            failures.push(format!("unit law fails for class {i}"));
        }
    }
    let mut commutative = true;
    for i in 0..classes.len() {
        for j in 0..i {
            if products[i][j].normal_form != products[j][i].normal_form {
                commutative = false;
                failures.push(format!("classes {i} and {j} do not commute"));
            }
        }
    }
    let mut associative = true;
    for (i, a) in classes.iter().enumerate() {
        for (j, _) in classes.iter().enumerate() {
            for (k, c) in classes.iter().enumerate() {
                let left = mul(&table[i][j], c)?;
                let right = mul(a, &table[j][k])?;
                let (nl, nr) = (nf_of(&left)?, nf_of(&right)?);
                if left.codim != right.codim || nl != nr {
                    associative = false;
                    failures.push(format!("associativity fails for ({i}, {j}, {k})"));
                }
            }
        }
    }
    Ok(RingTable {
        products,
        unit_law,
        commutative,
        associative,
        failures,
    })
}

/// Sum of a cycle's coefficients on a `K_0 = Z` stratum, used by tests and
/// reports as a coarse invariant.
pub fn total_coefficient<P>(z: &SupportedElement<P>) -> BigInt {
    z.values().map(|v| v.first().cloned().unwrap_or_else(BigInt::zero)).sum()
}
