//! Forward-curve models in the weighted Sobolev space of absolutely
//! continuous curves with norm `f(0)^2 + int w f'^2`, `w(x) = exp(alpha x)`.
//!
//! - [`space`]: curves, evaluation representers, shift semigroup, products.
//! - [`operators`]: kernel, Hilbert-Schmidt, trace-class and multiplication operators.
//! - [`noise`]: factor covariances, Wiener and NIG drivers.
//! - [`dynamics`]: mild-solution simulator, spot/forward extraction, volatilities.
//! - [`riesz`]: exponential Riesz basis and OU-series reconstruction.
//! - [`analytics`]: spatial correlation and its lower bound.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod noise;
pub mod operators;
pub mod riesz;
pub mod sample;
pub mod space;

pub use error::{Error, Result};
pub use space::{Curve, GridSpec, Space, WeightSpec};
