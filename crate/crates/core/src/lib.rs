//! Exact linear-system solving through signed permutation sums, and an
//! exhaustive checker for the sign-reversing involution that proves
//! `Σ_j a[i,j] X_j = b[i] X_0`.

pub mod algebra;
pub mod cli;
pub mod cramer;
pub mod error;
pub mod involution;
pub mod oracle;
pub mod perm;

pub use algebra::{Monomial, Polynomial, Rational, Scalar, Symbol, SymbolKind};
pub use cramer::{big_x, solve, verify_identity, LinearSystem, Solution};
pub use error::{Error, Result};
pub use perm::{enumerate_permutations, Permutation};
