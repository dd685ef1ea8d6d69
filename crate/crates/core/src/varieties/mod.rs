//! Finite fields, polynomials, and the projective line and plane over them.

pub mod field;
pub mod forms;
mod movers;
pub mod p1;
pub mod p2;
pub mod parse;
pub mod plane;
pub mod points;
pub mod poly;

pub use field::{Fe, FieldError, Gf, MAX_EXT};
pub use forms::{Form, FormError};
pub use plane::{intersection_cycle, intersection_multiplicity, IntersectionError};
pub use points::PlanePoint;
pub use poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VarietyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Parse(#[from] parse::ParseError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Point(#[from] points::PointError),
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
    #[error("field size {0} exceeds the supported maximum 97")]
    FieldTooLarge(u64),
    #[error("enumeration bound must be positive, got {0}")]
    BadBound(u32),
    #[error("enumeration would produce {count} points, above the limit {limit}")]
    TooManyPoints { count: u128, limit: u128 },
    #[error("'{0}' is not a monic irreducible polynomial or inf")]
    NotAPlace(String),
    #[error("the zero function has no divisor")]
    ZeroFunction,
    #[error("place {0} lies beyond the enumeration bound")]
    OutsideBound(String),
    #[error("cycle has degree {0}, not 0")]
    NonzeroDegree(num_bigint::BigInt),
    #[error("coefficient too large for an explicit witness")]
    CoefficientTooLarge,
    #[error("function is not a unit on the curve")]
    NotAUnitOnCurve,
    #[error("{0} is not an irreducible curve")]
    NotACurve(String),
}
