//! Numerical laboratory for the value distribution of the Riemann
//! zeta-function on vertical lines sigma in (1/2, 1].
//!
//! The crate models zeta by a random Euler product over independent
//! unit-circle phases, computes its exact moments, characteristic function
//! and saddle-point tails, and compares them against directly sampled values
//! of zeta(sigma + it): rectangle discrepancy, integral identities, and an
//! a-point census by argument-principle winding counts.

pub mod cache;
pub mod error;
pub mod model;
pub mod primes;
pub mod quad;
pub mod rng;
pub mod special;
pub mod zeta;

pub use error::{Error, ErrorKind, Result};
