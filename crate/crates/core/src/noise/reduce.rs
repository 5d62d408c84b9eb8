use nalgebra::DMatrix;

use super::covariance::FactorCovariance;
use crate::error::Result;
use crate::linalg::psd_sqrt;
use crate::operators::LinearOperator;

/// `M_ij = <Psi Q Psi* h_{x_i}, h_{x_j}> = sum_n (Psi g_n)(x_i) (Psi g_n)(x_j)`.
pub fn evaluation_gram(
    points: &[f64],
    psi: &dyn LinearOperator,
    q: &FactorCovariance,
) -> Result<DMatrix<f64>> {
    let n = points.len();
    let mut m = DMatrix::zeros(n, n);
    for g in q.factors() {
        let img = psi.apply(g)?;
        let v = points.iter().map(|&x| img.eval(x)).collect::<Result<Vec<f64>>>()?;
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += v[i] * v[j];
            }
        }
    }
    Ok(m)
}

/// Symmetric PSD square root of [`evaluation_gram`]: the volatility matrix
/// of the finite-dimensional projection onto the given evaluation points.
pub fn reduce_to_ndim(
    points: &[f64],
    psi: &dyn LinearOperator,
    q: &FactorCovariance,
) -> Result<DMatrix<f64>> {
    psd_sqrt(&evaluation_gram(points, psi, q)?, 1e-10)
}
