//! Numerical laboratory for subsets of `[N]` whose differences avoid
//! shifted primes `p - 1`.
//!
//! The crate evaluates the objects of the circle-method argument directly:
//! von Mangoldt sieves, Dirichlet character tables, truncated explicit
//! formulas over tabulated L-function zeros, exponential sums over primes in
//! progressions, major-arc bounds and the density-increment step. It also
//! contains exact and heuristic solvers for the extremal set problem itself.

pub mod arith;
pub mod characters;
pub mod diffsets;
pub mod error;
pub mod expsums;
pub mod increment;
pub mod majorarcs;
pub mod zerodata;

pub use error::{Error, Result};
