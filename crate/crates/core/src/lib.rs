//! Spectral counting for the p-Laplacian on fractal strings and
//! eigenvalue-count brackets for planar horns.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dimension;
pub mod error;
pub mod horn;
pub mod minkowski;
pub mod numeric;
pub mod string_spectrum;
pub mod summation;

pub use dimension::{DimensionFunction, Family, Regime};
pub use error::{Error, Result};
pub use string_spectrum::{CountBreakdown, FractalString, TailLaw, TailMode};
