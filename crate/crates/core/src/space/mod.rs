//! Spectral spaces: points, specialization, dimension functions and opens.
//!
//! Specialization is written `specializes(a, b)`, meaning `b` lies in the
//! closure of `a`. Opens are generization-closed and are stored through the
//! generators of their closed (Thomason) complement.

mod poset;

use std::fmt::{self, Debug};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

pub use poset::{random_poset, DimChoice, FinitePoset};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("enumeration of dimension {dim} points needs a bound on this backend")]
    UnboundedEnumeration { dim: i64 },
    #[error("subset is not open: {0}")]
    NotOpen(String),
    #[error("specialization relation is not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("enumeration would produce about {count} points, above the limit {limit}")]
    EnumerationTooLarge { count: u128, limit: u128 },
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
}

/// Value of a dimension function; the infinite values are sentinels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dim {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Dim {
    pub fn finite(self) -> Option<i64> {
        match self {
            Dim::Finite(d) => Some(d),
            _ => None,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::NegInf => write!(f, "-inf"),
            Dim::Finite(d) => write!(f, "{d}"),
            Dim::PosInf => write!(f, "+inf"),
        }
    }
}

pub trait SpectralSpace {
    type Point: Clone + Eq + Ord + Hash + Debug;

    /// Points of dimension `l`, in the backend's canonical order. Infinite
    /// backends need `bound` (a residue or curve degree cap).
    fn points_of_dim(&self, l: i64, bound: Option<u32>) -> Result<Vec<Self::Point>, SpaceError>;

    /// `b` lies in the closure of `a`.
    fn specializes(&self, a: &Self::Point, b: &Self::Point) -> bool;

    fn dim(&self, p: &Self::Point) -> Dim;

    fn label(&self, p: &Self::Point) -> String;

    /// Smallest and largest finite dimension carried by some point, or
    /// `None` for the empty space.
    fn dim_range(&self) -> Option<(i64, i64)>;

    fn is_finite(&self) -> bool;

    /// Points `x` with `specializes(x, q)` and `dim(x) = l`.
    fn generizations_of_dim(
        &self,
        q: &Self::Point,
        l: i64,
        bound: Option<u32>,
    ) -> Result<Vec<Self::Point>, SpaceError> {
        Ok(self
            .points_of_dim(l, bound)?
            .into_iter()
            .filter(|x| self.specializes(x, q))
            .collect())
    }

    /// All points, grouped by increasing dimension.
    fn all_points(&self, bound: Option<u32>) -> Result<Vec<Self::Point>, SpaceError> {
        let mut out = Vec::new();
        if let Some((lo, hi)) = self.dim_range() {
            for l in lo..=hi {
                out.extend(self.points_of_dim(l, bound)?);
            }
        }
        Ok(out)
    }

    /// Largest dimension of a common specialization of `a` and `b`, if any.
    /// The default scans a bounded enumeration.
    fn common_specialization_dim(
        &self,
        a: &Self::Point,
        b: &Self::Point,
        bound: Option<u32>,
    ) -> Result<Option<Dim>, SpaceError> {
        Ok(self
            .all_points(bound)?
            .iter()
            .filter(|z| self.specializes(a, z) && self.specializes(b, z))
            .map(|z| self.dim(z))
            .max())
    }
}

/// An open subset, stored as the complement of the closure of finitely many
/// generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Open<P> {
    pub thomason_generators: Vec<P>,
}

impl<P: Clone + Eq + Ord + Hash + Debug> Open<P> {
    pub fn whole() -> Self {
        Open {
            thomason_generators: Vec::new(),
        }
    }

    pub fn complement_of_closure(generators: Vec<P>) -> Self {
        Open {
            thomason_generators: generators,
        }
    }

    pub fn contains<S: SpectralSpace<Point = P> + ?Sized>(&self, space: &S, p: &P) -> bool {
        !self.thomason_generators.iter().any(|g| space.specializes(g, p))
    }

    /// Intersection of two opens.
    pub fn meet(&self, other: &Open<P>) -> Open<P> {
        let mut g = self.thomason_generators.clone();
        g.extend(other.thomason_generators.iter().cloned());
        g.sort();
        g.dedup();
        Open {
            thomason_generators: g,
        }
    }
}

/// Points of dimension `l` inside an open (all points if `within` is `None`).
pub fn points_of_dim_within<S: SpectralSpace + ?Sized>(
    space: &S,
    l: i64,
    within: Option<&Open<S::Point>>,
    bound: Option<u32>,
) -> Result<Vec<S::Point>, SpaceError> {
    let pts = space.points_of_dim(l, bound)?;
    Ok(match within {
        None => pts,
        Some(u) => pts.into_iter().filter(|p| u.contains(space, p)).collect(),
    })
}

/// Checks both axioms of a dimension function on every comparable pair:
/// monotone along specialization, strictly so when both values are finite
/// and the specialization is proper.
pub fn is_dimension_function<S: SpectralSpace + ?Sized>(space: &S, bound: Option<u32>) -> Result<bool, SpaceError> {
    let pts = space.all_points(bound)?;
    for a in &pts {
        for b in &pts {
            if a == b || !space.specializes(a, b) {
                continue;
            }
            let (da, db) = (space.dim(a), space.dim(b));
            if db > da {
                return Ok(false);
            }
            if db == da && da.finite().is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
