//! Computational kernel for the algebra of Bruhat cells: Coxeter
//! combinatorics of the symmetric group, exact arithmetic in the lifted
//! signed permutation group inside the spin group, totally positive
//! cells in the nilpotent lower-triangular group, signed Bruhat
//! decomposition of orthogonal matrices, and analysis of locally convex
//! curves (minor multiplicities and itineraries).
//!
//! Conventions used throughout, fixed once:
//! - Permutations act on the right: `k^{s1 s2} = (k^{s1})^{s2}`, so
//!   `s1.compose(&s2)` applies `s1` first. This is the opposite of many
//!   libraries.
//! - All public combinatorial indices (positions, generator subscripts,
//!   index sets) are 1-based; raw matrix indexing is 0-based.

pub mod bruhat;
pub mod charts;
pub mod clifford;
pub mod coxeter;
pub mod curves;
pub mod error;
pub mod matrix;
pub mod scalar;
pub mod spin;
pub mod tiling;
pub mod totpos;

pub use error::{Error, Result};
pub use matrix::{IndexSet, Matrix};
pub use scalar::{rat, Poly, Rat, Real, Root2, Scalar};

/// Dense matrices over the concrete scalars in use.
pub type MatF64 = Matrix<f64>;
pub type MatF32 = Matrix<f32>;
pub type MatRat = Matrix<Rat>;
pub type MatPoly = Matrix<Poly>;
pub type MatRoot2 = Matrix<Root2>;

/// Default relative tolerance for numeric predicates; every numeric
/// entry point takes an explicit tolerance, this is the conventional
/// value (relative to the largest entry involved).
pub const DEFAULT_TOL: f64 = 1e-9;
