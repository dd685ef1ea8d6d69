//! Exact linear algebra over the integers and finitely generated abelian groups.

mod group;
mod matrix;
mod snf;

pub use group::{
    cokernel, groups_isomorphic, image, kernel, preimage_subgroup, quotient_of_subgroups,
    subquotient, tensor_groups, AbHom, FinAbGroup, GroupInvariants, Homology, Quotient, Subgroup,
};
pub use matrix::IntMatrix;
pub use snf::{integer_kernel, smith_normal_form, solve_integer, IntegerSolver, Smith};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZLinAlgError {
    #[error("matrix does not define a homomorphism: relation {relation} is not sent to zero")]
    WellDefinedness { relation: usize },
    #[error("composite of the two maps is not zero")]
    NotAComplex,
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("second subgroup is not contained in the first")]
    NotASubgroup,
}
