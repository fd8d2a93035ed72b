//! Exact integer linear algebra: matrices, Smith normal form, finitely
//! presented abelian groups, and exterior powers.

pub mod exterior;
pub mod group;
pub mod matrix;
pub mod snf;

pub use exterior::{binomial, subset_rank, subset_unrank, subsets, ExteriorElement, Subset};
pub use group::PresentedGroup;
pub use matrix::IntMatrix;
pub use snf::{in_column_lattice, rank, rank_and_divisors, smith_normal_form, solve_integer, SmithDecomposition};
