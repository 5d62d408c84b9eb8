use crate::error::{Error, Result};

/// Exponential weight `w(x) = exp(alpha x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    pub alpha: f64,
}

impl WeightSpec {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "weight rate alpha must be positive, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        (self.alpha * x).exp()
    }

    /// `k^2 = int_0^inf 1/w`.
    pub fn k_squared(&self) -> f64 {
        1.0 / self.alpha
    }
}

/// Uniform grid on `[0, x_max]` with `n` cells of width `dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    x_max: f64,
    dx: f64,
    n: usize,
}

const ALIGN_TOL: f64 = 1e-9;

impl GridSpec {
    pub fn new(x_max: f64, dx: f64) -> Result<Self> {
        if !(x_max.is_finite() && x_max > 0.0 && dx.is_finite() && dx > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "grid needs positive x_max and dx, got x_max={x_max}, dx={dx}"
            )));
        }
        let r = x_max / dx;
        let n = r.round();
        if n < 1.0 || (r - n).abs() > ALIGN_TOL * r.max(1.0) {
            return Err(Error::Alignment(format!(
                "x_max={x_max} is not an integer multiple of dx={dx}"
            )));
        }
        Ok(Self { x_max, dx, n: n as usize })
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Number of cells.
    pub fn cells(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> usize {
        self.n + 1
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    #[inline]
    pub fn mid(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx
    }

    /// Number of whole cells in `t`, failing unless `t` is a grid multiple.
    pub fn steps_for(&self, t: f64) -> Result<usize> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain(format!("shift length must be >= 0, got {t}")));
        }
        let r = t / self.dx;
        let m = r.round();
        if (r - m).abs() > ALIGN_TOL * r.max(1.0) {
            return Err(Error::Alignment(format!(
                "t={t} is not an integer multiple of dx={}",
                self.dx
            )));
        }
        Ok(m as usize)
    }

    /// Splits `x` into whole cells and the remaining fraction of the next
    /// cell. Points within rounding of a node snap to it. `x >= x_max` maps
    /// to `(n, 0)`.
    pub fn locate(&self, x: f64) -> Result<(usize, f64)> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::Domain(format!("evaluation point must be >= 0, got {x}")));
        }
        if x >= self.x_max {
            return Ok((self.n, 0.0));
        }
        let r = x / self.dx;
        let near = r.round();
        if (r - near).abs() <= ALIGN_TOL * r.max(1.0) {
            return Ok(((near as usize).min(self.n), 0.0));
        }
        let i = (r.floor() as usize).min(self.n - 1);
        let frac = (r - i as f64).clamp(0.0, 1.0);
        Ok((i, frac))
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { x_max: 5.0, dx: 1.0 / 250.0, n: 1250 }
    }
}
