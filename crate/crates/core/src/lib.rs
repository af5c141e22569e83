//! Exact-arithmetic engine for genus-zero vortex invariants of toric
//! quotients and the quantum cohomology of monotone toric manifolds.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point anywhere in this crate. The two independent evaluation
//! routes (monomial rewriting and wall-crossing recursion) can be run
//! against each other, see [`invariants::invariant`].

pub mod error;
pub mod lattice;
pub mod poly;
pub mod residue;
pub mod toric;
pub mod invariants;
pub mod rings;
pub mod input;

pub use error::Error;
pub use lattice::{Int, Rat};
