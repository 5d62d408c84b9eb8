use std::sync::Arc;

use nalgebra::DMatrix;

use super::{KernelOperator, LinearOperator};
use crate::error::{Error, Result};
use crate::space::{Curve, Space};

/// Data of a Hilbert-Schmidt operator
/// `Cf(x) = c f(0) + <g,f> + f(0) h(x) + int q(x,z) f'(z) dz`
/// with `b` sampled on midpoints x midpoints.
#[derive(Debug, Clone)]
pub struct HsRepresentation {
    pub c: f64,
    pub g: Curve,
    pub h: Curve,
    pub b: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct HsOperator {
    rep: HsRepresentation,
    kernel: KernelOperator,
}

impl HsRepresentation {
    fn validate(&self) -> Result<()> {
        let sp = self.g.space();
        sp.check(self.h.space())?;
        let n = sp.cells();
        if self.b.nrows() != n || self.b.ncols() != n {
            return Err(Error::Shape(format!(
                "b must be {n}x{n}, got {}x{}",
                self.b.nrows(),
                self.b.ncols()
            )));
        }
        if self.g.f0() != 0.0 || self.h.f0() != 0.0 {
            return Err(Error::Representation(format!(
                "g(0) and h(0) must vanish, got g(0) = {}, h(0) = {}",
                self.g.f0(),
                self.h.f0()
            )));
        }
        if !self.b.iter().all(|v| v.is_finite()) {
            return Err(Error::Representation("b is not square-summable".into()));
        }
        Ok(())
    }

    /// `q(x_k, z_j) = sum_{i<k} sqrt(w(z_j)/w(y_i)) b(y_i, z_j) dx`.
    pub fn kernel(&self) -> Result<KernelOperator> {
        self.validate()?;
        let sp = self.g.space();
        let n = sp.cells();
        let dx = sp.dx();
        let w = sp.w_mid();
        let mut rows = vec![vec![0.0; n]; n + 1];
        for k in 0..n {
            let (head, tail) = rows.split_at_mut(k + 1);
            let prev = &head[k];
            let next = &mut tail[0];
            for j in 0..n {
                next[j] = prev[j] + (w[j] / w[k]).sqrt() * self.b[(k, j)] * dx;
            }
        }
        KernelOperator::from_dense_rows(sp, &rows)
    }

    /// Inverse of [`Self::kernel`]: differentiate in x and rescale.
    pub fn recover_b(kernel: &KernelOperator) -> DMatrix<f64> {
        let sp = kernel.space();
        let n = sp.cells();
        let dx = sp.dx();
        let w = sp.w_mid();
        DMatrix::from_fn(n, n, |k, j| {
            (kernel.entry(k + 1, j) - kernel.entry(k, j)) / dx * (w[k] / w[j]).sqrt()
        })
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let scale = self.b.amax().max(1.0);
        let g_eq = self.g.distance(&self.h).map(|d| d <= tol).unwrap_or(false);
        g_eq && (&self.b - self.b.transpose()).amax() <= tol * scale
    }
}

impl HsOperator {
    pub fn build(rep: HsRepresentation) -> Result<Self> {
        let kernel = rep.kernel()?;
        Ok(Self { rep, kernel })
    }

    pub fn representation(&self) -> &HsRepresentation {
        &self.rep
    }

    pub fn kernel(&self) -> &KernelOperator {
        &self.kernel
    }

    /// `(c^2 + ||g||^2 + ||h||^2 + ||b||^2)^(1/2)`.
    pub fn hs_norm(&self) -> f64 {
        let dx = self.kernel.space().dx();
        let b2: f64 = self.rep.b.iter().map(|v| v * v).sum::<f64>() * dx * dx;
        (self.rep.c * self.rep.c + self.rep.g.norm_sq() + self.rep.h.norm_sq() + b2).sqrt()
    }
}

impl LinearOperator for HsOperator {
    fn space(&self) -> &Arc<Space> {
        self.kernel.space()
    }

    fn apply(&self, f: &Curve) -> Result<Curve> {
        let mut out = self.kernel.apply(f)?;
        let level = self.rep.c * f.f0() + self.rep.g.inner(f)?;
        out.set_f0(out.f0() + level);
        out.axpy(f.f0(), &self.rep.h)?;
        Ok(out)
    }
}
