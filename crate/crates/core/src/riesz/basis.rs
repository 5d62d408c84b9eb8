use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::space::{Curve, Space};

/// Complex curve as a pair of real curves.
#[derive(Debug, Clone)]
pub struct ComplexCurve {
    pub re: Curve,
    pub im: Curve,
}

impl ComplexCurve {
    pub fn conj(&self) -> ComplexCurve {
        ComplexCurve { re: self.re.clone(), im: self.im.scale(-1.0) }
    }

    pub fn eval(&self, x: f64) -> Result<Complex64> {
        Ok(Complex64::new(self.re.eval(x)?, self.im.eval(x)?))
    }

    pub fn shift_cells(&self, m: usize) -> ComplexCurve {
        ComplexCurve { re: self.re.shift_cells(m), im: self.im.shift_cells(m) }
    }

    /// Complex derivative sample at cell `j`.
    fn d(&self, j: usize) -> Complex64 {
        Complex64::new(self.re.deriv()[j], self.im.deriv()[j])
    }

    fn v0(&self) -> Complex64 {
        Complex64::new(self.re.f0(), self.im.f0())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszBasisSpec {
    pub x0: f64,
    /// Damping shift `lambda > 0`; defaults to `alpha / 2`.
    pub lambda: f64,
    pub n_max: usize,
}

impl RieszBasisSpec {
    pub fn new(x0: f64, lambda: f64, n_max: usize) -> Self {
        Self { x0, lambda, n_max }
    }

    pub fn with_default_lambda(x0: f64, alpha: f64, n_max: usize) -> Self {
        Self { x0, lambda: alpha / 2.0, n_max }
    }
}

/// Basis `g_n`, `|n| <= n_max`, and duals from the Gram system of the
/// inner product restricted to `[0, x0]`.
#[derive(Debug, Clone)]
pub struct BiorthogonalSystem {
    space: Arc<Space>,
    spec: RieszBasisSpec,
    cells_x0: usize,
    basis: Vec<ComplexCurve>,
    duals: Vec<ComplexCurve>,
    gram: DMatrix<Complex64>,
    condition: f64,
    residual: f64,
}

impl BiorthogonalSystem {
    pub fn build(space: &Arc<Space>, spec: RieszBasisSpec) -> Result<Self> {
        if !(spec.x0 > 0.0 && spec.x0 <= space.x_max()) {
            return Err(Error::Domain(format!(
                "x0 must lie in (0, x_max = {}], got {}",
                space.x_max(),
                spec.x0
            )));
        }
        if !(spec.lambda > 0.0) || spec.n_max < 1 {
            return Err(Error::InvalidParameter(format!(
                "need lambda > 0 and n_max >= 1, got lambda = {}, n_max = {}",
                spec.lambda, spec.n_max
            )));
        }
        let cells_x0 = space.grid().steps_for(spec.x0)?;
        let nm = spec.n_max as i64;
        let dim = 2 * spec.n_max + 1;
        let mut basis: Vec<Option<ComplexCurve>> = vec![None; dim];
        basis[spec.n_max] = Some(ComplexCurve {
            re: Curve::constant(space, 1.0),
            im: Curve::zero(space),
        });
        let sq = spec.x0.sqrt();
        for n in 1..=nm {
            let lam = Self::eigenvalue_of(&spec, space.alpha(), n);
            let re = Curve::from_derivative(space, 0.0, |x| -(lam * x).exp().re / sq);
            let im = Curve::from_derivative(space, 0.0, |x| -(lam * x).exp().im / sq);
            let g = ComplexCurve { re, im };
            basis[(nm - n) as usize] = Some(g.conj());
            basis[(nm + n) as usize] = Some(g);
        }
        let basis: Vec<ComplexCurve> = basis.into_iter().map(|g| g.expect("filled")).collect();

        let gram = DMatrix::from_fn(dim, dim, |k, m| restricted_inner(&basis[k], &basis[m], cells_x0));
        let sv = gram.clone().svd(false, false).singular_values;
        let condition = sv.max() / sv.min();
        if !(condition <= 1e12) {
            return Err(Error::TruncationTooLarge(condition));
        }
        let inv = gram
            .clone()
            .try_inverse()
            .ok_or(Error::TruncationTooLarge(f64::INFINITY))?;
        let residual = (&gram * &inv - DMatrix::<Complex64>::identity(dim, dim))
            .iter()
            .fold(0.0f64, |m, v| m.max(v.norm()));

        // g_n* = sum_m inv[n][m] P g_m, P cutting the derivative at x0
        let n = space.cells();
        let duals = (0..dim)
            .map(|r| {
                let mut v0 = Complex64::new(0.0, 0.0);
                let mut d = vec![Complex64::new(0.0, 0.0); n];
                for m in 0..dim {
                    let c = inv[(r, m)];
                    v0 += c * basis[m].v0();
                    for (j, dj) in d.iter_mut().enumerate().take(cells_x0) {
                        *dj += c * basis[m].d(j);
                    }
                }
                let re = Curve::new(space, v0.re, d.iter().map(|z| z.re).collect())?;
                let im = Curve::new(space, v0.im, d.iter().map(|z| z.im).collect())?;
                Ok(ComplexCurve { re, im })
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Self { space: space.clone(), spec, cells_x0, basis, duals, gram, condition, residual })
    }

    /// `lambda_n = 2 pi i n / x0 - lambda - alpha/2`.
    fn eigenvalue_of(spec: &RieszBasisSpec, alpha: f64, n: i64) -> Complex64 {
        Complex64::new(-spec.lambda - alpha / 2.0, 2.0 * PI * n as f64 / spec.x0)
    }

    pub fn eigenvalue(&self, n: i64) -> Complex64 {
        Self::eigenvalue_of(&self.spec, self.space.alpha(), n)
    }

    pub fn spec(&self) -> &RieszBasisSpec {
        &self.spec
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn n_max(&self) -> i64 {
        self.spec.n_max as i64
    }

    fn idx(&self, n: i64) -> usize {
        (n + self.n_max()) as usize
    }

    pub fn basis(&self, n: i64) -> &ComplexCurve {
        &self.basis[self.idx(n)]
    }

    pub fn dual(&self, n: i64) -> &ComplexCurve {
        &self.duals[self.idx(n)]
    }

    /// Gram matrix on `[0, x0]`, indexed by `n + n_max`.
    pub fn gram(&self) -> &DMatrix<Complex64> {
        &self.gram
    }

    pub fn condition_number(&self) -> f64 {
        self.condition
    }

    /// `max |G G^-1 - I|`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn cells_x0(&self) -> usize {
        self.cells_x0
    }

    /// `<f, g_n*>` for a complex curve.
    pub fn coefficient_complex(&self, n: i64, f: &ComplexCurve) -> Complex64 {
        full_inner(f, self.dual(n))
    }

    /// `<f, g_n*>`.
    pub fn coefficient(&self, n: i64, f: &Curve) -> Result<Complex64> {
        self.space.check(f.space())?;
        let fc = ComplexCurve { re: f.clone(), im: Curve::zero(&self.space) };
        Ok(self.coefficient_complex(n, &fc))
    }

    /// `sum_{|n| <= n_max} <f, g_n*> g_n`, folded as `c_0 + 2 sum Re(c_n g_n)`.
    pub fn project(&self, f: &Curve) -> Result<Curve> {
        let coefs = (1..=self.n_max())
            .map(|n| self.coefficient(n, f))
            .collect::<Result<Vec<_>>>()?;
        let c0 = self.coefficient(0, f)?.re;
        Ok(self.synthesize(c0, &coefs))
    }

    /// `c0 + 2 sum_{n>=1} Re(c_n g_n)`.
    pub fn synthesize(&self, c0: f64, coefs: &[Complex64]) -> Curve {
        let mut out = Curve::constant(&self.space, c0);
        for (k, c) in coefs.iter().enumerate() {
            let g = self.basis((k + 1) as i64);
            out.axpy(2.0 * c.re, &g.re).expect("same space");
            out.axpy(-2.0 * c.im, &g.im).expect("same space");
        }
        out
    }

    /// `<U_t g_k, g_n*>`.
    pub fn shifted_coefficient(&self, n: i64, k: i64, t: f64) -> Result<Complex64> {
        let m = self.space.grid().steps_for(t)?;
        Ok(self.coefficient_complex(n, &self.basis(k).shift_cells(m)))
    }

    /// `max_k |<U_t g_k, g_n*> - e^{lambda_k t} delta_nk|` for `n != 0`.
    pub fn semigroup_dual_action(&self, n: i64, t: f64) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain("dual semigroup identity is stated for n != 0".into()));
        }
        let mut defect = 0.0f64;
        for k in -self.n_max()..=self.n_max() {
            let v = self.shifted_coefficient(n, k, t)?;
            let expect = if k == n {
                (self.eigenvalue(k) * t).exp()
            } else {
                Complex64::new(0.0, 0.0)
            };
            defect = defect.max((v - expect).norm());
        }
        Ok(defect)
    }
}

/// `u(0) conj(v(0)) + sum_{j < cells} w_j u'_j conj(v'_j) dx`.
fn restricted_inner(u: &ComplexCurve, v: &ComplexCurve, cells: usize) -> Complex64 {
    let sp = u.re.space();
    let w = sp.w_mid();
    let mut s = Complex64::new(0.0, 0.0);
    for (j, wj) in w.iter().enumerate().take(cells) {
        s += u.d(j) * v.d(j).conj() * *wj;
    }
    u.v0() * v.v0().conj() + s * sp.dx()
}

fn full_inner(u: &ComplexCurve, v: &ComplexCurve) -> Complex64 {
    restricted_inner(u, v, u.re.space().cells())
}
