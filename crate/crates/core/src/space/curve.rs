use std::sync::Arc;

use super::Space;
use crate::error::{Error, Result};

/// A member of the space: value at zero plus midpoint derivative samples.
/// Flat beyond `x_max`.
#[derive(Debug, Clone)]
pub struct Curve {
    space: Arc<Space>,
    f0: f64,
    deriv: Vec<f64>,
}

impl Curve {
    pub fn new(space: &Arc<Space>, f0: f64, deriv: Vec<f64>) -> Result<Self> {
        if deriv.len() != space.cells() {
            return Err(Error::Shape(format!(
                "expected {} derivative samples, got {}",
                space.cells(),
                deriv.len()
            )));
        }
        Ok(Self { space: space.clone(), f0, deriv })
    }

    pub fn zero(space: &Arc<Space>) -> Self {
        Self::constant(space, 0.0)
    }

    pub fn constant(space: &Arc<Space>, c: f64) -> Self {
        Self { space: space.clone(), f0: c, deriv: vec![0.0; space.cells()] }
    }

    /// Samples `f'` at midpoints; `f0` is the value at zero.
    pub fn from_derivative(space: &Arc<Space>, f0: f64, fprime: impl Fn(f64) -> f64) -> Self {
        let g = space.grid();
        let deriv = (0..g.cells()).map(|i| fprime(g.mid(i))).collect();
        Self { space: space.clone(), f0, deriv }
    }

    /// Piecewise-linear curve through the given node values.
    pub fn from_node_values(space: &Arc<Space>, values: &[f64]) -> Result<Self> {
        if values.len() != space.grid().nodes() {
            return Err(Error::Shape(format!(
                "expected {} node values, got {}",
                space.grid().nodes(),
                values.len()
            )));
        }
        let dx = space.dx();
        let deriv = values.windows(2).map(|p| (p[1] - p[0]) / dx).collect();
        Ok(Self { space: space.clone(), f0: values[0], deriv })
    }

    /// `lambda * exp(-gamma x)` with exact derivative samples.
    pub fn exponential(space: &Arc<Space>, lambda: f64, gamma: f64) -> Self {
        Self::from_derivative(space, lambda, |x| -lambda * gamma * (-gamma * x).exp())
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn deriv(&self) -> &[f64] {
        &self.deriv
    }

    pub fn deriv_mut(&mut self) -> &mut [f64] {
        &mut self.deriv
    }

    pub fn set_f0(&mut self, v: f64) {
        self.f0 = v;
    }

    pub fn into_parts(self) -> (f64, Vec<f64>) {
        (self.f0, self.deriv)
    }

    pub fn is_finite(&self) -> bool {
        self.f0.is_finite() && self.deriv.iter().all(|d| d.is_finite())
    }

    /// Values at the grid nodes, accumulated left to right.
    pub fn node_values(&self) -> Vec<f64> {
        let dx = self.space.dx();
        let mut out = Vec::with_capacity(self.deriv.len() + 1);
        let mut acc = self.f0;
        out.push(acc);
        for d in &self.deriv {
            acc += d * dx;
            out.push(acc);
        }
        out
    }

    /// Values at the cell midpoints.
    pub fn mid_values(&self) -> Vec<f64> {
        let dx = self.space.dx();
        let mut acc = self.f0;
        self.deriv
            .iter()
            .map(|d| {
                let m = acc + 0.5 * d * dx;
                acc += d * dx;
                m
            })
            .collect()
    }

    /// `f(x)`; `x = f64::INFINITY` gives the far-end limit.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (i, frac) = self.space.grid().locate(x)?;
        let dx = self.space.dx();
        let mut acc = self.f0;
        for d in &self.deriv[..i] {
            acc += d * dx;
        }
        if frac > 0.0 {
            acc += self.deriv[i] * frac * dx;
        }
        Ok(acc)
    }

    pub fn sup_norm(&self) -> f64 {
        self.node_values().into_iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn inner(&self, other: &Curve) -> Result<f64> {
        self.space.check(&other.space)?;
        let dx = self.space.dx();
        let s: f64 = self
            .deriv
            .iter()
            .zip(&other.deriv)
            .zip(self.space.w_mid())
            .map(|((a, b), w)| w * a * b)
            .sum();
        Ok(self.f0 * other.f0 + s * dx)
    }

    pub fn norm_sq(&self) -> f64 {
        let dx = self.space.dx();
        let s: f64 = self.deriv.iter().zip(self.space.w_mid()).map(|(a, w)| w * a * a).sum();
        self.f0 * self.f0 + s * dx
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `||self - other||` without allocating.
    pub fn distance(&self, other: &Curve) -> Result<f64> {
        self.space.check(&other.space)?;
        let dx = self.space.dx();
        let s: f64 = self
            .deriv
            .iter()
            .zip(&other.deriv)
            .zip(self.space.w_mid())
            .map(|((a, b), w)| w * (a - b) * (a - b))
            .sum();
        let d0 = self.f0 - other.f0;
        Ok((d0 * d0 + s * dx).sqrt())
    }

    /// `sqrt(w) f'` at midpoints: the square-integrable half of the
    /// isometry `f -> (f(0), sqrt(w) f')`.
    pub fn weighted_derivative(&self) -> Vec<f64> {
        self.deriv.iter().zip(self.space.w_mid()).map(|(d, w)| w.sqrt() * d).collect()
    }

    /// Coordinates in the discrete orthonormal basis:
    /// `[f0, sqrt(w_i dx) f'_i]`.
    pub fn coords(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.deriv.len() + 1);
        v.push(self.f0);
        v.extend(self.deriv.iter().zip(self.space.sqrt_w_dx()).map(|(d, s)| d * s));
        v
    }

    pub fn from_coords(space: &Arc<Space>, v: &[f64]) -> Result<Self> {
        if v.len() != space.cells() + 1 {
            return Err(Error::Shape(format!(
                "expected {} coordinates, got {}",
                space.cells() + 1,
                v.len()
            )));
        }
        let deriv = v[1..].iter().zip(space.sqrt_w_dx()).map(|(c, s)| c / s).collect();
        Ok(Self { space: space.clone(), f0: v[0], deriv })
    }

    /// Basis curve with coordinate vector `e_j`.
    pub fn basis_vector(space: &Arc<Space>, j: usize) -> Self {
        let mut c = Self::zero(space);
        if j == 0 {
            c.f0 = 1.0;
        } else {
            c.deriv[j - 1] = 1.0 / space.sqrt_w_dx()[j - 1];
        }
        c
    }

    pub fn scale(&self, a: f64) -> Curve {
        Curve {
            space: self.space.clone(),
            f0: a * self.f0,
            deriv: self.deriv.iter().map(|d| a * d).collect(),
        }
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &Curve) -> Result<()> {
        self.space.check(&other.space)?;
        self.f0 += a * other.f0;
        for (s, o) in self.deriv.iter_mut().zip(&other.deriv) {
            *s += a * o;
        }
        Ok(())
    }

    pub fn add(&self, other: &Curve) -> Result<Curve> {
        let mut out = self.clone();
        out.axpy(1.0, other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Curve) -> Result<Curve> {
        let mut out = self.clone();
        out.axpy(-1.0, other)?;
        Ok(out)
    }

    /// Shift by a whole number of cells.
    pub fn shift_cells(&self, m: usize) -> Curve {
        let n = self.deriv.len();
        let dx = self.space.dx();
        let m = m.min(n);
        let mut acc = self.f0;
        for d in &self.deriv[..m] {
            acc += d * dx;
        }
        let mut deriv = Vec::with_capacity(n);
        deriv.extend_from_slice(&self.deriv[m..]);
        deriv.resize(n, 0.0);
        Curve { space: self.space.clone(), f0: acc, deriv }
    }

    /// `U_t f = f(t + .)`; `t` must be a grid multiple.
    pub fn shift(&self, t: f64) -> Result<Curve> {
        let m = self.space.grid().steps_for(t)?;
        Ok(self.shift_cells(m))
    }

    /// Pointwise product. Midpoint values come from accumulation, so the
    /// product rule is applied cell by cell and the map is bilinear.
    pub fn multiply(&self, other: &Curve) -> Result<Curve> {
        self.space.check(&other.space)?;
        let fm = self.mid_values();
        let gm = other.mid_values();
        let deriv = (0..self.deriv.len())
            .map(|i| self.deriv[i] * gm[i] + fm[i] * other.deriv[i])
            .collect();
        Ok(Curve { space: self.space.clone(), f0: self.f0 * other.f0, deriv })
    }
}

/// Representer of evaluation at `x`: `h_x(0) = 1`, `h_x' = 1/w` below `x`.
/// A partial cell carries the covered fraction so that `<h_x, f> = f(x)`
/// for the piecewise-linear representative.
pub fn h_curve(space: &Arc<Space>, x: f64) -> Result<Curve> {
    let (i, frac) = space.grid().locate(x)?;
    let inv = space.inv_w_mid();
    let mut deriv = vec![0.0; space.cells()];
    deriv[..i].copy_from_slice(&inv[..i]);
    if frac > 0.0 {
        deriv[i] = frac * inv[i];
    }
    Curve::new(space, 1.0, deriv)
}

pub fn inner_product(f: &Curve, g: &Curve) -> Result<f64> {
    f.inner(g)
}

pub fn point_eval(f: &Curve, x: f64) -> Result<f64> {
    f.eval(x)
}

pub fn shift(f: &Curve, t: f64) -> Result<Curve> {
    f.shift(t)
}

pub fn pointwise_multiply(f: &Curve, g: &Curve) -> Result<Curve> {
    f.multiply(g)
}
