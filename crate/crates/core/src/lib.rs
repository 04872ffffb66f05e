//! Combinatorics of Coxeter complexes and exact divergence functions of
//! Cayley graphs.
//!
//! * [`coxeter`]: exact geometric representation, small roots, the ShortLex
//!   automaton and normal-form arithmetic.
//! * [`walls`]: separating walls, parallelism, maximal parallel pencils and
//!   the empirical wall-shielding scans.
//! * [`divergence`]: the divergence function `Div_lambda(n; delta)` computed
//!   by breadth-first search with forbidden balls.
//! * [`oracles`]: Cayley graphs for Coxeter groups, grids, free groups and
//!   `SL_2` over Laurent polynomials in characteristic 2 and 3.

pub mod coxeter;
pub mod divergence;
pub mod error;
pub mod oracles;
pub mod scalar;
pub mod walls;

pub use error::{Error, Result};
pub use scalar::QuadExtScalar;
