use std::sync::Arc;

use nalgebra::DMatrix;

use super::{HsRepresentation, KernelOperator, LinearOperator};
use crate::error::{Error, Result};
use crate::space::{Curve, Space};

/// Positive trace-class covariance given by a constant `c >= 0` and a kernel
/// `l(x, z)` sampled at nodes x midpoints.
#[derive(Debug, Clone)]
pub struct TraceClassSpec {
    pub c: f64,
    pub ell: KernelOperator,
}

#[derive(Debug, Clone)]
pub struct TraceClassOperator {
    c: f64,
    ell: KernelOperator,
    /// `h' = l(0, .)/w`
    h: Curve,
    /// `b(x,z) = sqrt(w(x)/w(z)) d/dx l(x,z)` at midpoints.
    b: DMatrix<f64>,
}

impl TraceClassSpec {
    /// `l(x, z) = w(z) h'(z) + q(x, z)` from a symmetric HS representation;
    /// the resulting operator is `C^2`.
    pub fn from_symmetric_hs(rep: &HsRepresentation) -> Result<Self> {
        if !rep.is_symmetric(1e-12) {
            return Err(Error::SpecViolation(
                "HS representation is not symmetric (need g = h, b = b^T)".into(),
            ));
        }
        let q = rep.kernel()?;
        let sp = q.space().clone();
        let w = sp.w_mid();
        let hp = rep.h.deriv();
        let rows: Vec<Vec<f64>> = q
            .dense_rows()
            .into_iter()
            .map(|r| r.iter().enumerate().map(|(j, v)| w[j] * hp[j] + v).collect())
            .collect();
        Ok(Self { c: rep.c, ell: KernelOperator::from_dense_rows(&sp, &rows)? })
    }
}

impl TraceClassOperator {
    pub fn build(spec: TraceClassSpec) -> Result<Self> {
        if !(spec.c.is_finite() && spec.c >= 0.0) {
            return Err(Error::SpecViolation(format!("c must be >= 0, got {}", spec.c)));
        }
        let sp = spec.ell.space().clone();
        let n = sp.cells();
        let dx = sp.dx();
        let w = sp.w_mid();
        let ell = spec.ell;
        let hp: Vec<f64> = (0..n).map(|j| ell.entry(0, j) / w[j]).collect();
        let h = Curve::new(&sp, 0.0, hp)?;
        if !h.norm_sq().is_finite() {
            return Err(Error::SpecViolation("l(0, .)/sqrt(w) is not square-summable".into()));
        }
        let b = DMatrix::from_fn(n, n, |m, j| {
            (ell.entry(m + 1, j) - ell.entry(m, j)) / dx * (w[m] / w[j]).sqrt()
        });
        let scale = b.amax().max(1e-300);
        let asym = (&b - b.transpose()).amax();
        if !b.iter().all(|v| v.is_finite()) || asym > 1e-8 * scale.max(1.0) {
            return Err(Error::SpecViolation(format!(
                "weighted x-derivative of l is not symmetric (defect {asym:e})"
            )));
        }
        Ok(Self { c: spec.c, ell, h, b })
    }

    /// `Cf(0) = c f(0) + int l(0,z) f'(z) dz` and `(Cf)'` at midpoints.
    fn half(&self, f: &Curve) -> Result<(f64, Vec<f64>)> {
        let sp = self.ell.space();
        sp.check(f.space())?;
        let n = sp.cells();
        let dx = sp.dx();
        let w = sp.w_mid();
        let fp = f.deriv();
        let a = self.c * f.f0() + (0..n).map(|j| self.ell.entry(0, j) * fp[j]).sum::<f64>() * dx;
        let hp = self.h.deriv();
        let cfp = (0..n)
            .map(|m| {
                let s: f64 = (0..n).map(|j| self.b[(m, j)] * (w[j] / w[m]).sqrt() * fp[j]).sum();
                f.f0() * hp[m] + s * dx
            })
            .collect();
        Ok((a, cfp))
    }

    /// Quadratic form `<Qf, f> = Cf(0)^2 + int (f(0) l(0,x) + w(x) int
    /// d/dx l(x,z) f'(z) dz)^2 / w(x) dx`.
    pub fn quadratic_form(&self, f: &Curve) -> Result<f64> {
        let (a, cfp) = self.half(f)?;
        let sp = self.ell.space();
        let w = sp.w_mid();
        let s: f64 = cfp.iter().zip(w).map(|(d, wm)| (wm * d).powi(2) / wm).sum();
        Ok(a * a + s * sp.dx())
    }

    /// `c^2 + 2 int l(0,z)^2/w(z) dz + int int (w(x)/w(z)) (d/dx l)^2`.
    pub fn trace(&self) -> f64 {
        let dx = self.ell.space().dx();
        let b2: f64 = self.b.iter().map(|v| v * v).sum::<f64>() * dx * dx;
        self.c * self.c + 2.0 * self.h.norm_sq() + b2
    }
}

impl LinearOperator for TraceClassOperator {
    fn space(&self) -> &Arc<Space> {
        self.ell.space()
    }

    /// `Qf(x) = Cf(0) (c + h(x)) + int l(x,z) (Cf)'(z) dz`.
    fn apply(&self, f: &Curve) -> Result<Curve> {
        let (a, cfp) = self.half(f)?;
        let sp = self.ell.space();
        let inner = Curve::new(sp, 0.0, cfp)?;
        let mut out = self.ell.apply(&inner)?;
        let mut level = self.h.scale(a);
        level.set_f0(a * self.c);
        out.axpy(1.0, &level)?;
        Ok(out)
    }
}
