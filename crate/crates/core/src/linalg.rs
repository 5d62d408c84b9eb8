//! Small dense linear-algebra helpers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Largest singular value by power iteration on `A^T A`, given the two
/// matrix-vector products.
pub fn power_norm(
    dim: usize,
    matvec: impl Fn(&[f64]) -> Vec<f64>,
    rmatvec: impl Fn(&[f64]) -> Vec<f64>,
) -> f64 {
    if dim == 0 {
        return 0.0;
    }
    // deterministic, non-degenerate start vector
    let mut v: Vec<f64> = (0..dim).map(|i| 1.0 + 0.5 * ((i as f64) * 0.7).sin()).collect();
    let nv = l2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut sigma = 0.0;
    for _ in 0..2000 {
        let av = matvec(&v);
        let mut w = rmatvec(&av);
        let s2 = l2(&w);
        if s2 == 0.0 {
            return 0.0;
        }
        w.iter_mut().for_each(|x| *x /= s2);
        let next = s2.sqrt();
        let done = (next - sigma).abs() <= 1e-13 * next;
        sigma = next;
        v = w;
        if done {
            break;
        }
    }
    sigma
}

pub fn power_norm_matrix(a: &DMatrix<f64>) -> f64 {
    power_norm(
        a.ncols(),
        |v| (a * DVector::from_column_slice(v)).as_slice().to_vec(),
        |v| (a.tr_mul(&DVector::from_column_slice(v))).as_slice().to_vec(),
    )
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Symmetric PSD square root. Eigenvalues in `[-tol, 0)` are clamped to
/// zero; anything below `-tol` is an error.
pub fn psd_sqrt(m: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Shape(format!("matrix is {}x{}", m.nrows(), m.ncols())));
    }
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut d = eig.eigenvalues.clone();
    for x in d.iter_mut() {
        if *x < -tol {
            return Err(Error::NumericalPsd(*x));
        }
        *x = x.max(0.0).sqrt();
    }
    let q = &eig.eigenvectors;
    Ok(q * DMatrix::from_diagonal(&d) * q.transpose())
}

pub fn max_symmetric_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new((m + m.transpose()) * 0.5).eigenvalues.max()
}
