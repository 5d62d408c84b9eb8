//! Bounded linear operators on the curve space.

mod builtin;
mod hs;
mod kernel;
mod multiplication;
mod trace;

pub use builtin::parse_kernel;
pub use hs::{HsOperator, HsRepresentation};
pub use kernel::{
    compose_kernels, delivery_kernel, delivery_period_operator, KernelAdjoint, KernelOperator,
    SchurBound,
};
pub use multiplication::{MultiplicationAdjoint, MultiplicationOperator};
pub use trace::{TraceClassOperator, TraceClassSpec};

use std::fmt::Debug;
use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::Result;
use crate::linalg::power_norm_matrix;
use crate::space::{Curve, Space};

pub trait LinearOperator: Debug + Send + Sync {
    fn space(&self) -> &Arc<Space>;

    fn apply(&self, f: &Curve) -> Result<Curve>;

    /// Matrix in the discrete orthonormal basis, column `j` holding the
    /// coordinates of the image of basis vector `j`.
    fn coordinate_matrix(&self) -> Result<DMatrix<f64>> {
        let sp = self.space();
        let dim = sp.cells() + 1;
        let cols: Vec<Vec<f64>> = (0..dim)
            .into_par_iter()
            .map(|j| self.apply(&Curve::basis_vector(sp, j)).map(|c| c.coords()))
            .collect::<Result<_>>()?;
        Ok(DMatrix::from_fn(dim, dim, |i, j| cols[j][i]))
    }
}

/// Empirical operator norm: power iteration on the coordinate matrix.
pub fn operator_norm(op: &dyn LinearOperator) -> Result<f64> {
    Ok(power_norm_matrix(&op.coordinate_matrix()?))
}

/// Hilbert-Schmidt (Frobenius) norm of the coordinate matrix.
pub fn frobenius_norm(op: &dyn LinearOperator) -> Result<f64> {
    Ok(op.coordinate_matrix()?.norm())
}

#[derive(Debug, Clone)]
pub struct Identity {
    space: Arc<Space>,
}

impl Identity {
    pub fn new(space: &Arc<Space>) -> Self {
        Self { space: space.clone() }
    }
}

impl LinearOperator for Identity {
    fn space(&self) -> &Arc<Space> {
        &self.space
    }

    fn apply(&self, f: &Curve) -> Result<Curve> {
        self.space.check(f.space())?;
        Ok(f.clone())
    }
}

/// `factor * op`.
#[derive(Debug, Clone)]
pub struct Scaled {
    pub factor: f64,
    pub op: Arc<dyn LinearOperator>,
}

impl LinearOperator for Scaled {
    fn space(&self) -> &Arc<Space> {
        self.op.space()
    }

    fn apply(&self, f: &Curve) -> Result<Curve> {
        Ok(self.op.apply(f)?.scale(self.factor))
    }
}
