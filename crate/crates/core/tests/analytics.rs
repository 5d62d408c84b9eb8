mod common;

use common::{reduced, rng, simpson};
use fcurve_core::analytics::{
    correlation_lower_bound, correlation_report, exp_kernel_correlation, spatial_correlation,
    ExpKernelCovariance,
};
use fcurve_core::noise::FactorCovariance;
use fcurve_core::operators::operator_norm;
use fcurve_core::space::h_curve;
use fcurve_core::{Curve, Error, Space};
use rand::Rng;
use rand_distr::StandardNormal;
use std::sync::Arc;

fn three_factor(sp: &Arc<Space>) -> FactorCovariance {
    let g1 = Curve::exponential(sp, 0.6, 0.8);
    let g2 = Curve::from_derivative(sp, 0.2, |x| 0.3 * (2.0 * x).cos() * (-x).exp());
    let g3 = h_curve(sp, 1.5).unwrap().scale(0.25);
    FactorCovariance::new(sp, vec![g1, g2, g3]).unwrap()
}

/// Slope of the least-squares line through `(x, y)`.
fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn diagonal_correlation_is_one() {
    let sp = Space::standard();
    let q = three_factor(&sp);
    for x in [0.0, 0.7, 3.0] {
        assert!((spatial_correlation(&q, x, x).unwrap() - 1.0).abs() < 1e-15);
        let lb = correlation_lower_bound(&q, x, x).unwrap();
        assert_eq!(lb.bound, Some(1.0));
    }
    // zero variance follows the convention rho = 1
    let z = FactorCovariance::new(&sp, vec![]).unwrap();
    assert_eq!(spatial_correlation(&z, 1.0, 2.0).unwrap(), 1.0);
}

#[test]
fn rank_one_sum_of_representers() {
    let sp = Space::standard();
    let (a, b) = (0.8, 2.4);
    let g = h_curve(&sp, a).unwrap().add(&h_curve(&sp, b).unwrap()).unwrap();
    let q = FactorCovariance::new(&sp, vec![g]).unwrap();
    assert!((spatial_correlation(&q, a, b).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn correlation_by_sampling() {
    let sp = Space::standard();
    let q = three_factor(&sp);
    let (x, y) = (0.5, 1.7);
    let n = 100_000;
    let mut r = rng(90);
    let mut sx = Vec::with_capacity(n);
    let mut sy = Vec::with_capacity(n);
    let gx: Vec<f64> = q.factors().iter().map(|g| g.eval(x).unwrap()).collect();
    let gy: Vec<f64> = q.factors().iter().map(|g| g.eval(y).unwrap()).collect();
    for _ in 0..n {
        let z: Vec<f64> = (0..3).map(|_| r.sample(StandardNormal)).collect();
        sx.push(z.iter().zip(&gx).map(|(a, b)| a * b).sum::<f64>());
        sy.push(z.iter().zip(&gy).map(|(a, b)| a * b).sum::<f64>());
    }
    let m = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mx, my) = (m(&sx), m(&sy));
    let cxy: f64 = sx.iter().zip(&sy).map(|(a, b)| (a - mx) * (b - my)).sum();
    let cxx: f64 = sx.iter().map(|a| (a - mx).powi(2)).sum();
    let cyy: f64 = sy.iter().map(|b| (b - my).powi(2)).sum();
    let emp = cxy / (cxx * cyy).sqrt();
    let rho = spatial_correlation(&q, x, y).unwrap();
    let se = (1.0 - rho * rho) / (n as f64).sqrt();
    assert!((emp - rho).abs() <= 3.0 * se, "{emp} vs {rho}");
}

#[test]
fn lower_bound_holds_and_scales_like_sqrt() {
    let sp = Space::standard();
    let q = three_factor(&sp);
    for x in [0.3, 1.0, 2.0] {
        let eps = correlation_lower_bound(&q, x, x).unwrap().radius;
        assert!(eps > 0.0);
        let mut ds = Vec::new();
        let mut gaps = Vec::new();
        for i in 0..=200 {
            let d = eps * i as f64 / 200.0;
            let y = x + d;
            if y > sp.x_max() {
                break;
            }
            let lb = correlation_lower_bound(&q, x, y).unwrap();
            let b = lb.bound.expect("inside the radius");
            assert!(spatial_correlation(&q, x, y).unwrap() >= b - 1e-10, "x={x} d={d}");
        }
        for i in 0..20 {
            let d = eps * 1e-4 * 10f64.powf(2.0 * i as f64 / 19.0);
            let b = correlation_lower_bound(&q, x, x + d).unwrap().bound.unwrap();
            ds.push(d.ln());
            gaps.push((1.0 - b).ln());
        }
        let s = slope(&ds, &gaps);
        assert!((s - 0.5).abs() <= 0.05, "x={x} slope {s}");
        // outside the radius no bound is offered
        assert!(correlation_lower_bound(&q, x, x + 1.01 * eps).unwrap().bound.is_none());
    }
}

#[test]
fn operator_norm_from_gram_and_power_iteration() {
    let sp = reduced();
    let q = three_factor(&sp);
    let emp = operator_norm(&q).unwrap();
    assert!((emp - q.op_norm()).abs() <= 1e-8 * q.op_norm(), "{emp} vs {}", q.op_norm());
}

#[test]
fn exp_kernel_anchor_value() {
    let v = exp_kernel_correlation(1.0, 0.5, 1.0, 2.0).unwrap();
    // independent quadrature of the covariance integral
    let c = |x: f64, y: f64| simpson(|u| (-0.5 * (y - u)).exp() * (-u).exp(), 0.0, x, 4000);
    let oracle = c(1.0, 2.0) / (c(1.0, 1.0) * c(2.0, 2.0)).sqrt();
    assert!((v - oracle).abs() < 1e-10);
    assert!((v - 0.614_443_381).abs() < 1e-9, "{v}");
    assert_eq!(exp_kernel_correlation(1.0, 0.5, 1.3, 1.3).unwrap(), 1.0);
}

#[test]
fn exp_kernel_is_not_stationary() {
    let a = exp_kernel_correlation(1.0, 0.5, 1.0, 1.5).unwrap();
    let b = exp_kernel_correlation(1.0, 0.5, 2.0, 2.5).unwrap();
    assert!((a - b).abs() > 1e-3);
}

#[test]
fn exp_kernel_parameter_checks() {
    assert!(matches!(exp_kernel_correlation(0.5, 0.5, 1.0, 2.0), Err(Error::InvalidParameter(_))));
    assert!(matches!(exp_kernel_correlation(1.0, 0.0, 1.0, 2.0), Err(Error::InvalidParameter(_))));
    assert!(matches!(exp_kernel_correlation(1.0, 0.5, 2.0, 1.0), Err(Error::Domain(_))));
}

#[test]
fn exp_kernel_closed_form_vs_grid_quadrature() {
    let sp = Space::standard();
    let cov = ExpKernelCovariance::new(&sp, 0.5).unwrap();
    let pts: Vec<f64> = (1..=20).map(|i| 0.24 * i as f64).collect();
    let mut worst: f64 = 0.0;
    for (i, &x) in pts.iter().enumerate() {
        for &y in &pts[i..] {
            let a = exp_kernel_correlation(1.0, 0.5, x, y).unwrap();
            let b = cov.correlation(x, y).unwrap();
            worst = worst.max((a - b).abs());
        }
    }
    assert!(worst <= 1e-6, "max deviation {worst}");
}

#[test]
fn cauchy_schwarz_and_holder_transfer() {
    let sp = reduced();
    let q = three_factor(&sp);
    let n = sp.grid().nodes();
    for i in (0..n).step_by(10) {
        let x = sp.grid().node(i);
        let sx = q.sqrt_norm_h(x).unwrap();
        for j in (i..n).step_by(10) {
            let y = sp.grid().node(j);
            let c = q.covariance_at(x, y).unwrap();
            assert!(c.abs() <= sx * q.sqrt_norm_h(y).unwrap() * (1.0 + 1e-12));
        }
        if sx > 0.0 {
            // 1 - rho <= C sqrt|y - x| with C from the lower bound
            let c_hold = 2.0 * q.op_norm().sqrt() / sx;
            for d in [1e-4, 1e-3, 1e-2] {
                let rho = spatial_correlation(&q, x, x + d).unwrap();
                assert!(1.0 - rho <= c_hold * d.sqrt());
            }
        }
    }
}

#[test]
fn report_has_no_violations() {
    let sp = Space::standard();
    let q = three_factor(&sp);
    let pts = [0.0, 0.1, 0.2, 0.5, 1.0, 2.0];
    let rep = correlation_report(&q, &pts).unwrap();
    assert_eq!(rep.pairs.len(), 21);
    assert!(rep.notes.is_empty());
    assert!(rep.pairs.iter().all(|p| (-1.0..=1.0).contains(&p.rho)));
    assert_eq!(rep.q_norm_op, q.op_norm());
}
