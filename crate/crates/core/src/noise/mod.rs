//! Curve-valued Levy drivers with finite factor covariance.

mod covariance;
mod driver;
mod ig;
mod reduce;
mod rng;

pub use covariance::FactorCovariance;
pub use driver::{assemble as assemble_increments, nig_increment_excess_kurtosis, sample_increments, DriverKind, DriverSpec, NoiseIncrements};
pub use ig::{sample_ig, sample_ig_one};
pub use reduce::{evaluation_gram, reduce_to_ndim};
pub use rng::{stream, Domain};
