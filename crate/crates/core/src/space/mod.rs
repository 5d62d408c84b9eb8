//! The weighted space of forward curves on a uniform grid.
//!
//! A curve is stored as its value at zero plus derivative samples at cell
//! midpoints. The norm is `f(0)^2 + sum w(x_mid) f'^2 dx`.

mod curve;
mod grid;
mod io;

pub use curve::{h_curve, inner_product, point_eval, pointwise_multiply, shift, Curve};
pub use grid::{GridSpec, WeightSpec};
pub use io::{read_curve_csv, write_curve_csv, CsvLayout};

use std::sync::Arc;

/// Grid, weight and the weight tables shared by all curves on them.
#[derive(Debug)]
pub struct Space {
    grid: GridSpec,
    weight: WeightSpec,
    w_mid: Vec<f64>,
    inv_w_mid: Vec<f64>,
    sqrt_w_dx: Vec<f64>,
}

impl Space {
    pub fn new(grid: GridSpec, weight: WeightSpec) -> Arc<Self> {
        let n = grid.cells();
        let w_mid: Vec<f64> = (0..n).map(|i| weight.value(grid.mid(i))).collect();
        let inv_w_mid = w_mid.iter().map(|w| 1.0 / w).collect();
        let sqrt_w_dx = w_mid.iter().map(|w| (w * grid.dx()).sqrt()).collect();
        Arc::new(Self { grid, weight, w_mid, inv_w_mid, sqrt_w_dx })
    }

    /// `alpha = 1`, `x_max = 5`, `dx = 1/250`.
    pub fn standard() -> Arc<Self> {
        Self::new(GridSpec::default(), WeightSpec { alpha: 1.0 })
    }

    pub fn with(alpha: f64, x_max: f64, dx: f64) -> crate::Result<Arc<Self>> {
        Ok(Self::new(GridSpec::new(x_max, dx)?, WeightSpec::new(alpha)?))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn alpha(&self) -> f64 {
        self.weight.alpha
    }

    pub fn dx(&self) -> f64 {
        self.grid.dx()
    }

    pub fn cells(&self) -> usize {
        self.grid.cells()
    }

    pub fn x_max(&self) -> f64 {
        self.grid.x_max()
    }

    /// Weight at the cell midpoints.
    pub fn w_mid(&self) -> &[f64] {
        &self.w_mid
    }

    pub fn inv_w_mid(&self) -> &[f64] {
        &self.inv_w_mid
    }

    /// `sqrt(w_mid dx)`, the scaling between derivative samples and
    /// orthonormal coordinates.
    pub fn sqrt_w_dx(&self) -> &[f64] {
        &self.sqrt_w_dx
    }

    pub fn same_as(&self, other: &Space) -> bool {
        std::ptr::eq(self, other) || (self.grid == other.grid && self.weight == other.weight)
    }

    pub fn check(&self, other: &Space) -> crate::Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(crate::Error::Shape(format!(
                "grid/weight mismatch: {:?}/{:?} vs {:?}/{:?}",
                self.grid, self.weight, other.grid, other.weight
            )))
        }
    }
}
