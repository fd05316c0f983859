//! Exact-arithmetic certification kernels for the genericity conditions of
//! Fano complete intersections: threshold and invariant evaluation, slope
//! products, tuple ranks of quadratic forms, singularity classification,
//! regular-sequence checks over prime fields, parameter-space codimension
//! bounds, and the descent bookkeeping that ties them together.
//!
//! Everything is computed over arbitrary-precision rationals or prime
//! fields; there is no floating point in any verdict path.

pub mod binom;
pub mod codim;
pub mod constants;
pub mod error;
pub mod groebner;
pub mod io;
pub mod matrix;
pub mod poly;
pub mod quad;
pub mod regularity;
pub mod scalar;
pub mod singularity;
pub mod slopes;
pub mod tracer;

pub mod acceptance;

pub use error::{Error, Result};
