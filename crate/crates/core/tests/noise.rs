mod common;

use common::{reduced, rng};
use fcurve_core::linalg::psd_sqrt;
use fcurve_core::noise::{
    assemble_increments, evaluation_gram, nig_increment_excess_kurtosis, reduce_to_ndim,
    sample_ig, sample_increments, DriverKind, DriverSpec, FactorCovariance,
};
use fcurve_core::operators::{Identity, LinearOperator};
use fcurve_core::sample::random_curve;
use fcurve_core::space::h_curve;
use fcurve_core::{Curve, Error, Space};
use nalgebra::DMatrix;
use proptest::prelude::*;
use std::sync::Arc;

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let v = x.iter().map(|a| (a - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v)
}

fn excess_kurtosis(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let m2 = x.iter().map(|a| (a - m).powi(2)).sum::<f64>() / n;
    let m4 = x.iter().map(|a| (a - m).powi(4)).sum::<f64>() / n;
    m4 / (m2 * m2) - 3.0
}

fn three_factors(sp: &Arc<Space>) -> FactorCovariance {
    let f = vec![
        Curve::exponential(sp, 0.6, 0.8),
        Curve::exponential(sp, 0.4, 1.5),
        Curve::exponential(sp, 0.3, 3.0),
    ];
    FactorCovariance::new(sp, f).unwrap()
}

fn nig(ig_lambda: f64, cov: FactorCovariance, seed: u64) -> DriverSpec {
    DriverSpec::new(DriverKind::Nig { ig_mu: 1.0, ig_lambda }, cov, seed).unwrap()
}

/// Two-sample Kolmogorov-Smirnov statistic.
fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

#[test]
fn covariance_on_orthogonal_and_unit_factor() {
    let sp = Space::standard();
    let g = h_curve(&sp, 1.0).unwrap();
    let g = g.scale(1.0 / g.norm());
    let q = FactorCovariance::new(&sp, vec![g.clone()]).unwrap();
    let qg = q.apply(&g).unwrap();
    assert!(qg.distance(&g).unwrap() < 1e-14);
    // derivative supported above 1, zero start: orthogonal to g
    let f = Curve::from_derivative(&sp, 0.0, |x| if x > 1.0 { 1.0 } else { 0.0 });
    assert!(g.inner(&f).unwrap().abs() < 1e-15);
    assert_eq!(q.apply(&f).unwrap().norm(), 0.0);
}

#[test]
fn covariance_trace_over_basis() {
    let sp = reduced();
    let q = three_factors(&sp);
    let m = q.coordinate_matrix().unwrap();
    assert!((m.trace() - q.trace()).abs() < 1e-8 * q.trace());
}

#[test]
fn wiener_increment_variance() {
    let sp = reduced();
    let cov = FactorCovariance::new(&sp, vec![Curve::exponential(&sp, 1.0, 1.0)]).unwrap();
    let spec = DriverSpec::new(DriverKind::Wiener, cov, 7).unwrap();
    let dt = 1e-3;
    let n = 100_000;
    let inc = sample_increments(&spec, dt, n).unwrap();
    assert!(inc.theta.is_none());
    let (m, v) = mean_var(&inc.dl);
    assert!(m.abs() < 3.0 * (dt / n as f64).sqrt());
    assert!((v - dt).abs() <= 3.0 * (2.0 / n as f64).sqrt() * dt, "var {v}");
}

#[test]
fn nig_increments_have_positive_excess_kurtosis() {
    let sp = reduced();
    let cov = FactorCovariance::new(&sp, vec![Curve::exponential(&sp, 1.0, 1.0)]).unwrap();
    let (lam, dt) = (1.0, 1.0);
    let spec = nig(lam, cov, 7);
    let exact = nig_increment_excess_kurtosis(lam, dt);
    assert_eq!(exact, 3.0);
    let inc = sample_increments(&spec, dt, 200_000).unwrap();
    let (m, v) = mean_var(&inc.dl);
    assert!(m.abs() < 3.0 * (dt / 2e5f64).sqrt());
    assert!((v - dt).abs() < 0.02);
    // batch means give the standard error of the kurtosis estimate
    let ks: Vec<f64> = inc.dl.chunks(10_000).map(excess_kurtosis).collect();
    let (km, kv) = mean_var(&ks);
    let se = (kv / ks.len() as f64).sqrt();
    assert!(km > 3.0 * se, "excess kurtosis {km} se {se}");
    assert!((km - exact).abs() < 4.0 * se + 0.3, "excess kurtosis {km} vs {exact}");
}

#[test]
fn subordinator_is_shared_across_factors() {
    let sp = reduced();
    let factors: Vec<Curve> = (0..64).map(|_| Curve::constant(&sp, 0.1)).collect();
    let cov = FactorCovariance::new(&sp, factors).unwrap();
    let spec = nig(0.5, cov, 3);
    let inc = spec.sample_path(1.0, 200, 0).unwrap();
    let theta = inc.theta.clone().unwrap();
    assert!(theta.iter().all(|t| *t > 0.0));
    // within one step every coordinate has variance theta_k
    let ratios: Vec<f64> = (0..inc.steps)
        .map(|k| inc.step(k).iter().map(|x| x * x).sum::<f64>() / 64.0 / theta[k])
        .collect();
    let (m, _) = mean_var(&ratios);
    assert!((m - 1.0).abs() < 3.0 * (2.0 / (64.0 * 200.0f64)).sqrt());
}

#[test]
fn zero_factors_assemble_to_zero() {
    let sp = reduced();
    let cov = FactorCovariance::new(&sp, vec![]).unwrap();
    let spec = DriverSpec::new(DriverKind::Wiener, cov.clone(), 1).unwrap();
    let inc = sample_increments(&spec, 0.01, 10).unwrap();
    assert!(inc.dl.is_empty());
    for k in 0..10 {
        assert_eq!(inc.assemble(k, &cov).unwrap().norm(), 0.0);
    }
}

#[test]
fn invalid_driver_parameters() {
    let sp = reduced();
    let cov = three_factors(&sp);
    let bad = DriverSpec::new(DriverKind::Nig { ig_mu: 2.0, ig_lambda: 1.0 }, cov.clone(), 0);
    assert!(matches!(bad, Err(Error::InvalidParameter(_))));
    let bad = DriverSpec::new(DriverKind::Nig { ig_mu: 1.0, ig_lambda: 0.0 }, cov.clone(), 0);
    assert!(matches!(bad, Err(Error::InvalidParameter(_))));
    let spec = DriverSpec::new(DriverKind::Wiener, cov, 0).unwrap();
    assert!(matches!(sample_increments(&spec, 0.0, 3), Err(Error::InvalidParameter(_))));
    assert!(matches!(sample_ig(-1.0, 1.0, 3, 0), Err(Error::InvalidParameter(_))));
}

#[test]
fn ig_degenerate_limit() {
    let x = sample_ig(1.0, 1e6, 10_000, 1).unwrap();
    let (m, v) = mean_var(&x);
    assert!(v < 1e-3);
    assert!((m - 1.0).abs() < 1e-3);
}

#[test]
fn ig_moments() {
    let x = sample_ig(1.0, 1.0, 100_000, 2).unwrap();
    assert!(x.iter().all(|v| *v > 0.0));
    let (m, v) = mean_var(&x);
    assert!((m - 1.0).abs() <= 0.01, "mean {m}");
    assert!((v - 1.0).abs() <= 0.05, "var {v}");
    let y = sample_ig(0.5, 2.0, 100_000, 3).unwrap();
    let (m, v) = mean_var(&y);
    // mean mu, variance mu^3 / lambda
    assert!((m - 0.5).abs() < 3.0 * (0.0625f64 / 1e5).sqrt());
    assert!((v - 0.0625).abs() < 0.005);
}

#[test]
fn reduction_one_point_identity() {
    let sp = Space::standard();
    let q = three_factors(&sp);
    let id = Identity::new(&sp);
    for x in [0.0, 0.3, 1.0, 4.2] {
        let s = reduce_to_ndim(&[x], &id, &q).unwrap();
        let direct: f64 = q.factors().iter().map(|g| g.eval(x).unwrap().powi(2)).sum();
        let via_h = q.quadratic_form(&h_curve(&sp, x).unwrap()).unwrap();
        assert!((s[(0, 0)].powi(2) - direct).abs() < 1e-8);
        assert!((via_h - direct).abs() < 1e-8);
    }
}

#[test]
fn reduction_of_zero_covariance() {
    let sp = reduced();
    let q = FactorCovariance::new(&sp, vec![]).unwrap();
    let s = reduce_to_ndim(&[0.5, 1.0, 2.0], &Identity::new(&sp), &q).unwrap();
    assert_eq!(s, DMatrix::zeros(3, 3));
}

#[test]
fn reduction_two_maturities() {
    let sp = Space::standard();
    let q = three_factors(&sp);
    let id = Identity::new(&sp);
    let (s, t1, t2) = (0.2, 1.0, 1.6);
    let pts = [t1 - s, t2 - s];
    let m = evaluation_gram(&pts, &id, &q).unwrap();
    let h1 = h_curve(&sp, pts[0]).unwrap();
    let h2 = h_curve(&sp, pts[1]).unwrap();
    let m12 = q.apply(&h1).unwrap().inner(&h2).unwrap();
    assert!((m[(0, 1)] - m12).abs() < 1e-8);
    let root = reduce_to_ndim(&pts, &id, &q).unwrap();
    assert!(((&root * &root) - &m).amax() < 1e-10);
}

#[test]
fn indefinite_matrix_is_rejected() {
    let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1e-6]);
    assert!(matches!(psd_sqrt(&m, 1e-10), Err(Error::NumericalPsd(_))));
    let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1e-12]);
    assert_eq!(psd_sqrt(&m, 1e-10).unwrap()[(1, 1)], 0.0);
}

#[test]
fn assembled_increments_reproduce_covariance() {
    let sp = Space::standard();
    let q = three_factors(&sp);
    let spec = DriverSpec::new(DriverKind::Wiener, q.clone(), 11).unwrap();
    let n = 10_000;
    let inc = sample_increments(&spec, 1.0, n).unwrap();
    let pts = [0.0, 0.5, 1.0, 2.0, 4.0];
    let vals: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let c = assemble_increments(inc.step(k), &q).unwrap();
            pts.iter().map(|x| c.eval(*x).unwrap()).collect()
        })
        .collect();
    for i in 0..pts.len() {
        for j in i..pts.len() {
            let prod: Vec<f64> = vals.iter().map(|v| v[i] * v[j]).collect();
            let (m, _) = mean_var(&prod);
            let sij = q.covariance_at(pts[i], pts[j]).unwrap();
            let sii = q.covariance_at(pts[i], pts[i]).unwrap();
            let sjj = q.covariance_at(pts[j], pts[j]).unwrap();
            let se = ((sii * sjj + sij * sij) / n as f64).sqrt();
            assert!((m - sij).abs() <= 3.0 * se, "({i},{j}): {m} vs {sij}");
        }
    }
}

#[test]
fn coordinates_are_uncorrelated() {
    let sp = reduced();
    for spec in [
        DriverSpec::new(DriverKind::Wiener, three_factors(&sp), 12).unwrap(),
        nig(2.0, three_factors(&sp), 12),
    ] {
        let n = 20_000;
        let inc = sample_increments(&spec, 0.5, n).unwrap();
        for a in 0..3 {
            for b in (a + 1)..3 {
                let xa: Vec<f64> = (0..n).map(|k| inc.step(k)[a]).collect();
                let xb: Vec<f64> = (0..n).map(|k| inc.step(k)[b]).collect();
                let (_, va) = mean_var(&xa);
                let (_, vb) = mean_var(&xb);
                let c: f64 = xa.iter().zip(&xb).map(|(p, q)| p * q).sum::<f64>() / n as f64;
                let rho = c / (va * vb).sqrt();
                assert!(rho.abs() <= 3.0 / (n as f64).sqrt(), "rho({a},{b}) = {rho}");
            }
        }
    }
}

#[test]
fn same_spec_different_seed_same_law() {
    let sp = reduced();
    let n = 20_000;
    let a = sample_increments(&nig(1.5, three_factors(&sp), 100), 0.25, n).unwrap();
    let b = sample_increments(&nig(1.5, three_factors(&sp), 200), 0.25, n).unwrap();
    assert_ne!(a.dl, b.dl);
    for f in 0..3 {
        let xa: Vec<f64> = (0..n).map(|k| a.step(k)[f]).collect();
        let xb: Vec<f64> = (0..n).map(|k| b.step(k)[f]).collect();
        let d = ks_statistic(&xa, &xb);
        // 1% critical value of the two-sample test
        let crit = 1.628 * ((2 * n) as f64 / (n * n) as f64).sqrt();
        assert!(d < crit, "factor {f}: D = {d}, critical {crit}");
    }
}

#[test]
fn increments_are_reproducible_and_order_free() {
    let sp = reduced();
    let spec = nig(1.0, three_factors(&sp), 42);
    let p = spec.sample_path(0.01, 50, 3).unwrap();
    assert_eq!(p, spec.sample_path(0.01, 50, 3).unwrap());
    let mut out = [0.0; 3];
    let th = spec.step_increments(0.01, 3, 17, &mut out);
    assert_eq!(&out[..], p.step(17));
    assert_eq!(th, Some(p.theta.as_ref().unwrap()[17]));
    assert_ne!(p, spec.sample_path(0.01, 50, 4).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn covariance_symmetric_psd(seed in any::<u64>()) {
        let sp = reduced();
        let mut r = rng(seed);
        let q = FactorCovariance::new(&sp, (0..3).map(|_| random_curve(&sp, &mut r)).collect()).unwrap();
        let f = random_curve(&sp, &mut r);
        let g = random_curve(&sp, &mut r);
        let a = q.apply(&f).unwrap().inner(&g).unwrap();
        let b = f.inner(&q.apply(&g).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
        let qf = q.apply(&f).unwrap().inner(&f).unwrap();
        prop_assert!(qf >= 0.0);
        prop_assert!((qf - q.quadratic_form(&f).unwrap()).abs() <= 1e-10 * (1.0 + qf));
        let tr: f64 = q.factors().iter().map(|g| g.norm_sq()).sum();
        prop_assert!((q.trace() - tr).abs() == 0.0);
    }
}
