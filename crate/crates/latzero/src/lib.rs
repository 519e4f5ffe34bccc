//! Exact-arithmetic toolkit for small integer zeros of quadratic
//! polynomials avoiding finite-index sublattices.
//!
//! The crate covers the full pipeline at desk scale:
//!
//! - exact big-integer matrix arithmetic, triangular normal forms and
//!   integer kernels ([`intmat`]);
//! - lattices in `Z^n`, finite-index sublattice systems, intersections,
//!   coset enumeration, certified short bases and first minima
//!   ([`lattice`]);
//! - integral quadratic polynomials, their height and restriction to
//!   cosets ([`quadratic`]);
//! - exhaustive minimal-zero searches, the avoiding-zero pipeline and its
//!   brute-force oracle ([`solver`]);
//! - exact evaluators for the explicit norm bounds, with implied constants
//!   exposed as a parameter ([`bounds`]);
//! - rational lattice angles: the associated quadratic form, its
//!   determinant identity and angle-constrained searches ([`angles`]).
//!
//! All comparisons involving square roots of integers are carried out on
//! squares or with directed rounding, so every certified inequality is an
//! exact integer or rational statement. No floating point enters any
//! result.

// indexed loops are the house style for the matrix code here
#![allow(clippy::needless_range_loop)]

pub mod angles;
pub mod bench;
pub mod bounds;
pub mod solver;
pub mod cli;
pub mod gen;
pub mod intmat;
pub mod lattice;
pub mod quadratic;
pub mod verify;

pub use intmat::{ExactInt, ExactRat, IntMatrix};
pub use lattice::{CosetDecomposition, Lattice, SublatticeSystem};
pub use quadratic::QuadraticPolynomial;
pub use solver::{AvoidReport, Instance, SearchResult};
