use std::sync::Arc;

use nalgebra::DMatrix;

use super::LinearOperator;
use crate::error::{Error, Result};
use crate::space::{Curve, Space};

/// One row of the kernel: entries for columns `start..start + vals.len()`,
/// zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
struct Row {
    start: usize,
    vals: Vec<f64>,
}

impl Row {
    fn from_dense(dense: &[f64]) -> Self {
        let first = dense.iter().position(|v| *v != 0.0);
        match first {
            None => Row { start: 0, vals: Vec::new() },
            Some(a) => {
                let b = dense.iter().rposition(|v| *v != 0.0).unwrap_or(a);
                Row { start: a, vals: dense[a..=b].to_vec() }
            }
        }
    }

    fn end(&self) -> usize {
        self.start + self.vals.len()
    }

    #[inline]
    fn get(&self, j: usize) -> f64 {
        if j >= self.start && j < self.end() {
            self.vals[j - self.start]
        } else {
            0.0
        }
    }
}

/// Integral operator `(Tf)(x) = int q(x, y) f'(y) dy`. Row `i` holds the
/// kernel at node `x_i`, column `j` at midpoint `y_{j+1/2}`. Rows are
/// trimmed to their nonzero span, so banded kernels stay sparse.
#[derive(Debug, Clone)]
pub struct KernelOperator {
    space: Arc<Space>,
    rows: Vec<Row>,
}

/// Schur-test constants: row sup `a`, column sup `b`, bound `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchurBound {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl KernelOperator {
    pub fn zero(space: &Arc<Space>) -> Self {
        let rows = vec![Row { start: 0, vals: Vec::new() }; space.grid().nodes()];
        Self { space: space.clone(), rows }
    }

    /// Samples `q(x_i, y_{j+1/2})`.
    pub fn from_fn(space: &Arc<Space>, q: impl Fn(f64, f64) -> f64) -> Self {
        let g = *space.grid();
        let rows = (0..g.nodes())
            .map(|i| {
                let x = g.node(i);
                let dense: Vec<f64> = (0..g.cells()).map(|j| q(x, g.mid(j))).collect();
                Row::from_dense(&dense)
            })
            .collect();
        Self { space: space.clone(), rows }
    }

    /// Dense `(N+1) x N` matrix.
    pub fn from_matrix(space: &Arc<Space>, m: &DMatrix<f64>) -> Result<Self> {
        let g = space.grid();
        if m.nrows() != g.nodes() || m.ncols() != g.cells() {
            return Err(Error::Shape(format!(
                "kernel matrix must be {}x{}, got {}x{}",
                g.nodes(),
                g.cells(),
                m.nrows(),
                m.ncols()
            )));
        }
        let rows = (0..m.nrows())
            .map(|i| {
                let dense: Vec<f64> = m.row(i).iter().copied().collect();
                Row::from_dense(&dense)
            })
            .collect();
        Ok(Self { space: space.clone(), rows })
    }

    pub fn from_dense_rows(space: &Arc<Space>, rows: &[Vec<f64>]) -> Result<Self> {
        let g = space.grid();
        if rows.len() != g.nodes() || rows.iter().any(|r| r.len() != g.cells()) {
            return Err(Error::Shape(format!(
                "kernel must have {} rows of {} entries",
                g.nodes(),
                g.cells()
            )));
        }
        Ok(Self { space: space.clone(), rows: rows.iter().map(|r| Row::from_dense(r)).collect() })
    }

    /// `k(x - y)`.
    pub fn convolution(space: &Arc<Space>, k: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(space, |x, y| k(x - y))
    }

    /// `exp(-delta |x - y|)`.
    pub fn expconv(space: &Arc<Space>, delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::Domain(format!("expconv needs delta > 0, got {delta}")));
        }
        Ok(Self::from_fn(space, |x, y| (-delta * (x - y).abs()).exp()))
    }

    /// `xi(x) theta(y)`.
    pub fn separable(
        space: &Arc<Space>,
        xi: impl Fn(f64) -> f64,
        theta: impl Fn(f64) -> f64,
    ) -> Self {
        Self::from_fn(space, |x, y| xi(x) * theta(y))
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i].get(j)
    }

    /// Largest row span; equals the bandwidth for banded kernels.
    pub fn max_row_span(&self) -> usize {
        self.rows.iter().map(|r| r.vals.len()).max().unwrap_or(0)
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let g = self.space.grid();
        DMatrix::from_fn(g.nodes(), g.cells(), |i, j| self.rows[i].get(j))
    }

    pub fn dense_rows(&self) -> Vec<Vec<f64>> {
        let n = self.space.cells();
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![0.0; n];
                d[r.start..r.end()].copy_from_slice(&r.vals);
                d
            })
            .collect()
    }

    /// Row `i` of the x-difference quotient `(q(x_{i+1}, .) - q(x_i, .)) / dx`,
    /// i.e. the x-derivative at the midpoint `x_{i+1/2}`, over its support.
    fn diff_row(&self, i: usize) -> (usize, Vec<f64>) {
        let (r0, r1) = (&self.rows[i], &self.rows[i + 1]);
        let dx = self.space.dx();
        let (a, b) = match (r0.vals.is_empty(), r1.vals.is_empty()) {
            (true, true) => return (0, Vec::new()),
            (true, false) => (r1.start, r1.end()),
            (false, true) => (r0.start, r0.end()),
            (false, false) => (r0.start.min(r1.start), r0.end().max(r1.end())),
        };
        (a, (a..b).map(|j| (r1.get(j) - r0.get(j)) / dx).collect())
    }

    /// Node values of `T f`.
    pub fn apply_nodes(&self, f: &Curve) -> Result<Vec<f64>> {
        self.space.check(f.space())?;
        let dx = self.space.dx();
        let d = f.deriv();
        let nz: Vec<usize> = (0..d.len()).filter(|&j| d[j] != 0.0).collect();
        let sparse = nz.len() * 4 < d.len();
        let mut out = Vec::with_capacity(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            let s: f64 = if sparse {
                nz.iter().map(|&j| r.get(j) * d[j]).sum()
            } else {
                r.vals.iter().zip(&d[r.start..r.end()]).map(|(q, v)| q * v).sum()
            };
            let v = s * dx;
            if !v.is_finite() {
                return Err(Error::KernelIntegrability(format!(
                    "row {i} (x = {}) gives a non-finite integral",
                    self.space.grid().node(i)
                )));
            }
            out.push(v);
        }
        Ok(out)
    }

    pub fn apply(&self, f: &Curve) -> Result<Curve> {
        let v = self.apply_nodes(f)?;
        Curve::from_node_values(&self.space, &v)
    }

    /// Schur test with `b(x,y) = d/dx q(x,y) sqrt(w(x)/w(y))` evaluated at
    /// midpoints. For the discrete operator `||T|| <= c` holds exactly.
    pub fn schur_bound(&self) -> Result<SchurBound> {
        let n = self.space.cells();
        let dx = self.space.dx();
        let w = self.space.w_mid();
        let mut row_max: f64 = 0.0;
        let mut col = vec![0.0; n];
        for i in 0..n {
            let (a, drow) = self.diff_row(i);
            let mut rs = 0.0;
            for (k, dv) in drow.iter().enumerate() {
                let j = a + k;
                let b = dv.abs() * (w[i] / w[j]).sqrt() * dx;
                rs += b;
                col[j] += b;
            }
            row_max = row_max.max(rs);
        }
        let col_max = col.iter().fold(0.0f64, |m, v| m.max(*v));
        let r0 = &self.rows[0];
        let c0: f64 = r0
            .vals
            .iter()
            .enumerate()
            .map(|(k, q)| q * q / w[r0.start + k] * dx)
            .sum();
        let c = (c0 + row_max * col_max).sqrt();
        if !(row_max.is_finite() && col_max.is_finite() && c.is_finite()) {
            return Err(Error::UnboundedKernel(format!(
                "Schur sums diverge (A = {row_max}, B = {col_max})"
            )));
        }
        Ok(SchurBound { a: row_max, b: col_max, c })
    }

    /// Exact discrete adjoint: the kernel `q*(y, x) = int_0^y w(x)/w(z)
    /// d/dx q(x, z) dz` plus the value channel `g(0) int_0^y q(0,z)/w(z) dz`.
    pub fn dual(&self) -> Result<KernelAdjoint> {
        self.schur_bound()?;
        let n = self.space.cells();
        let dx = self.space.dx();
        let w = self.space.w_mid();
        // column i of q* is the running sum over z of the derivative row i
        let mut dense = vec![vec![0.0; n]; n + 1];
        for i in 0..n {
            let (a, drow) = self.diff_row(i);
            let mut acc = 0.0;
            for (k, dv) in drow.iter().enumerate() {
                let j = a + k;
                acc += w[i] / w[j] * dv * dx;
                dense[j + 1][i] = acc;
            }
            for row in dense.iter_mut().skip(a + drow.len() + 1) {
                row[i] = acc;
            }
        }
        let kernel = KernelOperator::from_dense_rows(&self.space, &dense)?;
        let r0 = &self.rows[0];
        let mut deriv = vec![0.0; n];
        for (k, q) in r0.vals.iter().enumerate() {
            let j = r0.start + k;
            deriv[j] = q / w[j];
        }
        let value_channel = Curve::new(&self.space, 0.0, deriv)?;
        Ok(KernelAdjoint { kernel, value_channel })
    }

    /// Coordinate matrix, built directly from the kernel entries.
    fn coords_matrix(&self) -> DMatrix<f64> {
        let n = self.space.cells();
        let dx = self.space.dx();
        let w = self.space.w_mid();
        let mut m = DMatrix::zeros(n + 1, n + 1);
        let r0 = &self.rows[0];
        for (k, q) in r0.vals.iter().enumerate() {
            let j = r0.start + k;
            m[(0, j + 1)] = q * (dx / w[j]).sqrt();
        }
        for i in 0..n {
            let (a, drow) = self.diff_row(i);
            for (k, dv) in drow.iter().enumerate() {
                let j = a + k;
                m[(i + 1, j + 1)] = (w[i] / w[j]).sqrt() * dv * dx;
            }
        }
        m
    }
}

impl LinearOperator for KernelOperator {
    fn space(&self) -> &Arc<Space> {
        &self.space
    }

    fn apply(&self, f: &Curve) -> Result<Curve> {
        KernelOperator::apply(self, f)
    }

    fn coordinate_matrix(&self) -> Result<DMatrix<f64>> {
        Ok(self.coords_matrix())
    }
}

/// Adjoint of a kernel operator: kernel part plus a rank-one value channel.
#[derive(Debug, Clone)]
pub struct KernelAdjoint {
    pub kernel: KernelOperator,
    /// Multiplied by `g(0)`; vanishes at zero.
    pub value_channel: Curve,
}

impl LinearOperator for KernelAdjoint {
    fn space(&self) -> &Arc<Space> {
        self.kernel.space()
    }

    fn apply(&self, g: &Curve) -> Result<Curve> {
        let mut out = self.kernel.apply(g)?;
        out.axpy(g.f0(), &self.value_channel)?;
        Ok(out)
    }
}

/// `q(x, y) = (x + tau - y)/tau` on `[x, x + tau]`, zero elsewhere.
pub fn delivery_kernel(tau: f64) -> impl Fn(f64, f64) -> f64 {
    move |x, y| {
        if y >= x && y <= x + tau {
            (x + tau - y) / tau
        } else {
            0.0
        }
    }
}

/// Delivery-period operator: `(Id + T) f (x)` is the average of `f` over
/// `[x, x + tau]`. Entries are exact cell averages of the kernel, so the
/// average is exact for the piecewise-linear representative. Rows depend
/// only on the column offset, which keeps the operator shift-invariant.
pub fn delivery_period_operator(space: &Arc<Space>, tau: f64) -> Result<KernelOperator> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::Domain(format!("delivery period must be positive, got {tau}")));
    }
    let g = *space.grid();
    let dx = g.dx();
    let n = g.cells();
    // offset k = j - i >= 0; cell covers u = y - x in [k dx, (k+1) dx]
    let mut profile = Vec::new();
    for k in 0.. {
        let lo = k as f64 * dx;
        if lo >= tau {
            break;
        }
        let hi = ((k + 1) as f64 * dx).min(tau);
        let v = ((tau - lo).powi(2) - (tau - hi).powi(2)) / (2.0 * tau) / dx;
        profile.push(v);
    }
    let rows = (0..g.nodes())
        .map(|i| {
            let len = profile.len().min(n.saturating_sub(i));
            Row { start: i.min(n), vals: profile[..len].to_vec() }
        })
        .collect();
    Ok(KernelOperator { space: space.clone(), rows })
}

/// Kernel of the composition `T1 T2`: `q3(x, z) = int q1(x, y) d/dy q2(y, z) dy`.
pub fn compose_kernels(q1: &KernelOperator, q2: &KernelOperator) -> Result<KernelOperator> {
    q1.space.check(&q2.space)?;
    let n = q1.space.cells();
    let dx = q1.space.dx();
    let diffs: Vec<(usize, Vec<f64>)> = (0..n).map(|m| q2.diff_row(m)).collect();
    let mut rows = Vec::with_capacity(n + 1);
    let mut dense = vec![0.0; n];
    for (k, r) in q1.rows.iter().enumerate() {
        dense.iter_mut().for_each(|v| *v = 0.0);
        for (off, q) in r.vals.iter().enumerate() {
            let (a, drow) = &diffs[r.start + off];
            for (t, dv) in drow.iter().enumerate() {
                dense[a + t] += q * dv * dx;
            }
        }
        if dense.iter().any(|v| !v.is_finite()) {
            return Err(Error::CompositionUndefined(format!(
                "composed kernel row {k} is not finite"
            )));
        }
        rows.push(Row::from_dense(&dense));
    }
    Ok(KernelOperator { space: q1.space.clone(), rows })
}
