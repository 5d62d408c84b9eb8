use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::noise::DriverSpec;
use crate::operators::LinearOperator;
use crate::space::Curve;

pub type CurveFn = Arc<dyn Fn(f64) -> Curve + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Drift curve as a function of time.
#[derive(Clone)]
pub enum Drift {
    Zero,
    Constant(Curve),
    TimeDependent(CurveFn),
}

/// Volatility operator `Psi(t)`.
#[derive(Clone)]
pub enum Volatility {
    Constant(Arc<dyn LinearOperator>),
    /// `sigma(t) T`.
    ScalarTimesOperator { sigma: ScalarFn, op: Arc<dyn LinearOperator> },
    /// `Psi(t) = M_{f(t) g(t)}`: multiplication by the current state times `g(t)`.
    StateMultiplication { g: CurveFn },
}

impl fmt::Debug for Drift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Drift::Zero => write!(f, "Zero"),
            Drift::Constant(c) => write!(f, "Constant(f0={})", c.f0()),
            Drift::TimeDependent(_) => write!(f, "TimeDependent(..)"),
        }
    }
}

impl fmt::Debug for Volatility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Volatility::Constant(op) => write!(f, "Constant({op:?})"),
            Volatility::ScalarTimesOperator { op, .. } => write!(f, "ScalarTimesOperator({op:?})"),
            Volatility::StateMultiplication { .. } => write!(f, "StateMultiplication(..)"),
        }
    }
}

impl Drift {
    pub fn at(&self, t: f64) -> Option<Curve> {
        match self {
            Drift::Zero => None,
            Drift::Constant(c) => Some(c.clone()),
            Drift::TimeDependent(b) => Some(b(t)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub f0: Curve,
    pub beta: Drift,
    pub psi: Volatility,
    pub driver: DriverSpec,
    /// Paths whose norm exceeds `divergence_cap * ||f0||` are aborted.
    pub divergence_cap: f64,
}

impl ModelSpec {
    pub fn new(f0: Curve, beta: Drift, psi: Volatility, driver: DriverSpec) -> Result<Self> {
        let sp = f0.space();
        sp.check(crate::operators::LinearOperator::space(&driver.covariance))?;
        match &psi {
            Volatility::Constant(op) | Volatility::ScalarTimesOperator { op, .. } => {
                sp.check(op.space())?
            }
            Volatility::StateMultiplication { .. } => {}
        }
        if let Drift::Constant(c) = &beta {
            sp.check(c.space())?;
        }
        if !f0.is_finite() {
            return Err(Error::InvalidParameter("initial curve is not finite".into()));
        }
        Ok(Self { f0, beta, psi, driver, divergence_cap: 1e6 })
    }

    /// Drops the drift.
    pub fn risk_neutral(mut self) -> Self {
        self.beta = Drift::Zero;
        self
    }

    pub fn is_risk_neutral(&self) -> bool {
        matches!(self.beta, Drift::Zero)
    }

    /// `Psi(s)` as a deterministic operator, when it is one.
    pub fn deterministic_psi(&self, s: f64) -> Result<(f64, Arc<dyn LinearOperator>)> {
        match &self.psi {
            Volatility::Constant(op) => Ok((1.0, op.clone())),
            Volatility::ScalarTimesOperator { sigma, op } => Ok((sigma(s), op.clone())),
            Volatility::StateMultiplication { .. } => Err(Error::InvalidParameter(
                "state-dependent volatility has no deterministic quadratic form".into(),
            )),
        }
    }
}
