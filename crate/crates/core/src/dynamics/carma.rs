use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Matrix exponential by scaling and squaring with a Taylor core.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = a.iter().fold(0.0f64, |m, v| m.max(v.abs())) * n as f64;
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.5 && s < 60 {
        s += 1;
    }
    let scaled = a / 2f64.powi(s);
    let mut term = DMatrix::identity(n, n);
    let mut sum = DMatrix::identity(n, n);
    for k in 1..=20 {
        term = &term * &scaled / k as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Companion matrix of `alpha = (a_1, .., a_p)`: ones above the diagonal,
/// last row `(-a_p, .., -a_1)`.
pub fn companion(alpha: &[f64]) -> DMatrix<f64> {
    let p = alpha.len();
    let mut a = DMatrix::zeros(p, p);
    for i in 0..p.saturating_sub(1) {
        a[(i, i + 1)] = 1.0;
    }
    for j in 0..p {
        a[(p - 1, j)] = -alpha[p - 1 - j];
    }
    a
}

/// `xi(x) = b^T exp(A x) e_p` with `b = (b_0, .., b_q, 0, ..)`, `b_q = 1`.
pub fn carma_kernel(alpha: &[f64], b: &[f64], x: f64) -> Result<f64> {
    let p = alpha.len();
    if p == 0 || b.is_empty() || b.len() > p {
        return Err(Error::InvalidParameter(format!(
            "CARMA needs p >= 1 and q < p, got p = {p}, q + 1 = {}",
            b.len()
        )));
    }
    if b[b.len() - 1] != 1.0 {
        return Err(Error::InvalidParameter("CARMA needs b_q = 1".into()));
    }
    let a = companion(alpha);
    let e = expm(&(a * x));
    let mut bv = DVector::zeros(p);
    bv.rows_mut(0, b.len()).copy_from(&DVector::from_column_slice(b));
    Ok(bv.dot(&e.column(p - 1)))
}
