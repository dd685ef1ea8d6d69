//! Chow groups of spectral spaces with K-local data.

pub mod gersten;
pub mod intersect;
pub mod json_int;
pub mod klocal;
pub mod space;
pub mod toymodels;
pub mod varieties;
pub mod zlinalg;

pub use zlinalg::{AbHom, FinAbGroup, IntMatrix};
