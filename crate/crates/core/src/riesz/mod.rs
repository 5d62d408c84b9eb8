//! Exponential Riesz basis of curves on `[0, x0]`, its biorthogonal
//! functionals and the Ornstein-Uhlenbeck series of a forward curve.

mod basis;
mod embedding;
mod series;

pub use basis::{BiorthogonalSystem, ComplexCurve, RieszBasisSpec};
pub use embedding::{embedding_bounds_check, EmbeddingBounds};
pub use series::ou_series_reconstruct;
