use std::sync::Arc;

use super::LinearOperator;
use crate::error::Result;
use crate::linalg::power_norm;
use crate::space::{h_curve, Curve, Space};

/// `g -> m g`.
#[derive(Debug, Clone)]
pub struct MultiplicationOperator {
    m: Curve,
}

impl MultiplicationOperator {
    pub fn new(m: Curve) -> Self {
        Self { m }
    }

    pub fn multiplier(&self) -> &Curve {
        &self.m
    }

    pub fn adjoint(&self) -> MultiplicationAdjoint {
        MultiplicationAdjoint { m: self.m.clone() }
    }

    /// Coordinate action of the adjoint in O(N): the transpose of the
    /// product rule with accumulated midpoint values.
    pub fn apply_transpose_coords(&self, u: &[f64]) -> Vec<f64> {
        let sp = self.m.space();
        let n = sp.cells();
        let dx = sp.dx();
        let s = sp.sqrt_w_dx();
        let mp = self.m.deriv();
        let mm = self.m.mid_values();
        let p: Vec<f64> = (0..n).map(|i| u[i + 1] * s[i] * mp[i]).collect();
        let mut z = vec![0.0; n + 1];
        z[0] = self.m.f0() * u[0] + p.iter().sum::<f64>();
        let mut tail = 0.0;
        for k in (0..n).rev() {
            let c = u[k + 1] * s[k] * mm[k] + 0.5 * p[k] * dx + dx * tail;
            z[k + 1] = c / s[k];
            tail += p[k];
        }
        z
    }

    /// Power-iteration estimate of the operator norm.
    pub fn norm_estimate(&self) -> f64 {
        let sp = self.m.space().clone();
        power_norm(
            sp.cells() + 1,
            |v| {
                let f = Curve::from_coords(&sp, v).expect("coordinate length");
                self.m.multiply(&f).expect("same space").coords()
            },
            |u| self.apply_transpose_coords(u),
        )
    }

    /// `sqrt(5 + 4 k^2) ||m||`.
    pub fn norm_bound(&self) -> f64 {
        let k2 = self.m.space().weight().k_squared();
        (5.0 + 4.0 * k2).sqrt() * self.m.norm()
    }
}

impl LinearOperator for MultiplicationOperator {
    fn space(&self) -> &Arc<Space> {
        self.m.space()
    }

    fn apply(&self, g: &Curve) -> Result<Curve> {
        self.m.multiply(g)
    }
}

/// `M* u (x) = <u, m h_x>`, evaluated at every node.
#[derive(Debug, Clone)]
pub struct MultiplicationAdjoint {
    m: Curve,
}

impl LinearOperator for MultiplicationAdjoint {
    fn space(&self) -> &Arc<Space> {
        self.m.space()
    }

    fn apply(&self, u: &Curve) -> Result<Curve> {
        let sp = self.m.space();
        let g = sp.grid();
        let vals = (0..g.nodes())
            .map(|k| {
                let mh = self.m.multiply(&h_curve(sp, g.node(k))?)?;
                u.inner(&mh)
            })
            .collect::<Result<Vec<f64>>>()?;
        Curve::from_node_values(sp, &vals)
    }
}
