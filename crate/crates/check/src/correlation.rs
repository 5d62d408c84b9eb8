use std::sync::Arc;

use fcurve_core::analytics::{
    correlation_lower_bound, exp_kernel_correlation, spatial_correlation, ExpKernelCovariance,
};
use fcurve_core::noise::FactorCovariance;
use fcurve_core::space::h_curve;
use fcurve_core::{Curve, Result, Space};

use crate::stats::slope;
use crate::CriterionReport;

fn three_factor(sp: &Arc<Space>) -> Result<FactorCovariance> {
    let g1 = Curve::exponential(sp, 0.6, 0.8);
    let g2 = Curve::from_derivative(sp, 0.2, |x| 0.3 * (2.0 * x).cos() * (-x).exp());
    let g3 = h_curve(sp, 1.5)?.scale(0.25);
    FactorCovariance::new(sp, vec![g1, g2, g3])
}

pub fn criterion_9(_seed: u64) -> CriterionReport {
    CriterionReport::run(9, "spatial correlation", |r| {
        let sp = Space::standard();
        let (alpha, delta) = (sp.alpha(), 0.5);
        let quad = ExpKernelCovariance::new(&sp, delta)?;
        let pts: Vec<f64> = (1..=20).map(|i| sp.grid().node(48 * i)).collect();
        let mut closed: f64 = 0.0;
        for &x in &pts {
            for &y in &pts {
                let (a, b) = if x <= y { (x, y) } else { (y, x) };
                let c = exp_kernel_correlation(alpha, delta, a, b)?;
                closed = closed.max((c - quad.correlation(x, y)?).abs());
            }
        }
        r.require("closed_vs_quadrature", closed, closed <= 1e-6, format!("closed form gap {closed:e}"));

        let q = three_factor(&sp)?;
        let mut worst_margin = f64::INFINITY;
        let mut slopes = Vec::new();
        for x in [0.3, 1.0, 2.0] {
            let eps = correlation_lower_bound(&q, x, x)?.radius;
            for i in 0..=200 {
                let y = x + eps * i as f64 / 200.0;
                if y > sp.x_max() {
                    break;
                }
                if let Some(b) = correlation_lower_bound(&q, x, y)?.bound {
                    worst_margin = worst_margin.min(spatial_correlation(&q, x, y)? - b);
                }
            }
            let mut ld = Vec::new();
            let mut lg = Vec::new();
            for i in 0..20 {
                let d = eps * 1e-4 * 10f64.powf(2.0 * i as f64 / 19.0);
                if let Some(b) = correlation_lower_bound(&q, x, x + d)?.bound {
                    ld.push(d.ln());
                    lg.push((1.0 - b).ln());
                }
            }
            slopes.push(slope(&ld, &lg));
        }
        r.require(
            "min_rho_minus_bound",
            worst_margin,
            worst_margin >= -1e-10,
            format!("bound violated by {}", -worst_margin),
        );
        let dev = slopes.iter().fold(0.0f64, |m, s| m.max((s - 0.5).abs()));
        for (x, s) in [0.3, 1.0, 2.0].iter().zip(&slopes) {
            r.metric(&format!("slope_at_{x}"), *s);
        }
        r.require("max_slope_deviation", dev, dev <= 0.05, format!("slopes {slopes:?}"));
        Ok(())
    })
}
