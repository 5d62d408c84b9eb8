//! Mild-solution simulation, spot and forward extraction, volatility
//! quadratic forms, exponential-factor and CARMA representations.

mod carma;
mod model;
mod ou;
mod simulate;
mod vol;

pub use carma::{carma_kernel, companion, expm};
pub use model::{CurveFn, Drift, ModelSpec, ScalarFn, Volatility};
pub use ou::{ou_factor_simulate, ExpFactor, OuFactorModel, OuPath};
pub use simulate::{forward_path, simulate_mild, spot_path, ForwardSurface, Simulator};
pub use vol::{bivariate_sigma, spot_vol_sigma, VolatilityProfile};
