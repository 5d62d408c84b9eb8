mod common;

use common::rng;
use fcurve_core::dynamics::{Drift, ModelSpec, Simulator, Volatility};
use fcurve_core::noise::{DriverKind, DriverSpec, FactorCovariance};
use fcurve_core::operators::Identity;
use fcurve_core::riesz::{
    embedding_bounds_check, ou_series_reconstruct, BiorthogonalSystem, RieszBasisSpec,
};
use fcurve_core::space::h_curve;
use fcurve_core::{Curve, Error, Space};
use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::sync::Arc;

fn system(n_max: usize) -> BiorthogonalSystem {
    let sp = Space::standard();
    BiorthogonalSystem::build(&sp, RieszBasisSpec::with_default_lambda(2.0, sp.alpha(), n_max))
        .unwrap()
}

/// Max deviation on the nodes of `[0, x0]`.
fn dev_x0(sys: &BiorthogonalSystem, a: &Curve, b: &Curve) -> f64 {
    let c = sys.cells_x0();
    a.node_values()[..=c]
        .iter()
        .zip(&b.node_values()[..=c])
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn basis_structure() {
    let sys = system(8);
    let g0 = sys.basis(0);
    assert_eq!(g0.re.f0(), 1.0);
    assert!(g0.re.deriv().iter().all(|d| *d == 0.0));
    assert_eq!(g0.im.norm(), 0.0);
    for n in 1..=8 {
        let (p, m) = (sys.basis(n), sys.basis(-n));
        assert_eq!(p.re.deriv(), m.re.deriv());
        assert!(p.im.deriv().iter().zip(m.im.deriv()).all(|(a, b)| *a == -*b));
        let lam = sys.eigenvalue(n);
        assert!(lam.re < 0.0);
        assert!((lam.re + 1.0).abs() < 1e-15, "default shift gives Re = -alpha");
        // g_n(x) = (1 - e^{lambda_n x}) / (lambda_n sqrt(x0))
        for x in [0.5, 1.3, 2.0] {
            let want = (Complex64::new(1.0, 0.0) - (lam * x).exp()) / (lam * 2f64.sqrt());
            // midpoint-rule bound for the sampled derivative
            let tol = x * 0.004f64.powi(2) * lam.norm_sqr() / (24.0 * 2f64.sqrt()) + 1e-12;
            assert!((p.eval(x).unwrap() - want).norm() <= tol, "n={n} x={x} {} {tol}", (p.eval(x).unwrap() - want).norm());
        }
    }
    assert!(sys.condition_number().is_finite());
    assert!(sys.residual() <= 1e-10);
}

#[test]
fn biorthogonality() {
    let sys = system(8);
    let mut worst: f64 = 0.0;
    for n in -8..=8i64 {
        for k in -8..=8i64 {
            let v = sys.coefficient_complex(n, sys.basis(k));
            let want = if n == k { 1.0 } else { 0.0 };
            worst = worst.max((v - want).norm());
        }
    }
    assert!(worst <= 1e-8, "defect {worst}");
    // the dual of the constant is the constant
    let d0 = sys.dual(0);
    assert!((d0.re.f0() - 1.0).abs() < 1e-8);
    assert!(d0.re.deriv().iter().all(|d| d.abs() < 1e-8));
    assert!(d0.im.norm() < 1e-8);
}

#[test]
fn projection_reproduces_span() {
    let sys = system(8);
    let sp = sys.space().clone();
    let c = Curve::constant(&sp, 3.5);
    assert!(dev_x0(&sys, &sys.project(&c).unwrap(), &c) < 1e-10);
    let g2 = sys.basis(2).re.clone();
    let p = sys.project(&g2).unwrap();
    assert!(p.distance(&g2).unwrap() < 1e-8);
}

#[test]
fn projection_error_decreases_with_truncation() {
    let h1 = h_curve(&Space::standard(), 1.0).unwrap();
    let errs: Vec<f64> = [4, 8, 16]
        .iter()
        .map(|&n| {
            let sys = system(n);
            dev_x0(&sys, &sys.project(&h1).unwrap(), &h1)
        })
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn projection_is_idempotent() {
    let sys = system(8);
    let sp = sys.space().clone();
    for s in 0..5 {
        let f = fcurve_core::sample::random_curve(&sp, &mut rng(60 + s));
        let p = sys.project(&f).unwrap();
        let pp = sys.project(&p).unwrap();
        assert!(dev_x0(&sys, &p, &pp) <= 1e-8 * (1.0 + p.sup_norm()));
    }
}

#[test]
fn dual_semigroup_identity() {
    let sys = system(8);
    for n in [-3i64, 1, 2, 8] {
        assert!(sys.semigroup_dual_action(n, 0.0).unwrap() <= 1e-8);
        assert!(sys.semigroup_dual_action(n, 0.5).unwrap() <= 1e-7);
        assert!(sys.semigroup_dual_action(n, 1.0).unwrap() <= 1e-7);
    }
    let t = 0.5;
    let v = sys.shifted_coefficient(1, 1, t).unwrap();
    let lam = sys.eigenvalue(1);
    let direct = Complex64::new((lam.re * t).exp() * (lam.im * t).cos(), (lam.re * t).exp() * (lam.im * t).sin());
    assert!((v - direct).norm() <= 1e-7);
    assert!((v.norm() - (-t).exp()).abs() <= 1e-7);
    assert!(sys.shifted_coefficient(1, 3, t).unwrap().norm() <= 1e-7);
    assert!(matches!(sys.semigroup_dual_action(0, t), Err(Error::Domain(_))));
}

#[test]
fn riesz_frame_inequality() {
    let sys = system(8);
    let g = sys.gram();
    // the real-symmetric embedding of the Hermitian Gram matrix has the same spectrum
    let d = g.nrows();
    let big = nalgebra::DMatrix::from_fn(2 * d, 2 * d, |i, j| {
        let v = g[(i % d, j % d)];
        match (i < d, j < d) {
            (true, true) | (false, false) => v.re,
            (true, false) => -v.im,
            (false, true) => v.im,
        }
    });
    let eig = SymmetricEigen::new(big).eigenvalues;
    let (lo, hi) = (eig.min(), eig.max());
    assert!(lo > 0.0);
    let sp = sys.space().clone();
    let cx = sys.cells_x0();
    let mut r = rng(70);
    for _ in 0..200 {
        let c0: f64 = r.sample(StandardNormal);
        let coefs: Vec<Complex64> = (0..8)
            .map(|_| Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal)))
            .collect();
        let f = sys.synthesize(c0, &coefs);
        let w = sp.w_mid();
        let norm2 = f.f0().powi(2)
            + f.deriv()[..cx].iter().zip(w).map(|(v, wj)| wj * v * v).sum::<f64>() * sp.dx();
        // a_n = c_n and a_{-n} = conj(c_n)
        let a2 = c0 * c0 + 2.0 * DVector::from_iterator(8, coefs.iter().map(|c| c.norm_sqr())).sum();
        assert!(lo * a2 <= norm2 * (1.0 + 1e-10) && norm2 <= hi * a2 * (1.0 + 1e-10));
    }
}

#[test]
fn build_rejects_bad_specs() {
    let sp = Space::standard();
    let bad = BiorthogonalSystem::build(&sp, RieszBasisSpec::new(6.0, 0.5, 4));
    assert!(matches!(bad, Err(Error::Domain(_))));
    let bad = BiorthogonalSystem::build(&sp, RieszBasisSpec::new(2.0, 0.0, 4));
    assert!(matches!(bad, Err(Error::InvalidParameter(_))));
    let bad = BiorthogonalSystem::build(&sp, RieszBasisSpec::new(2.0, 0.5, 0));
    assert!(matches!(bad, Err(Error::InvalidParameter(_))));
}

#[test]
fn embedding_geometric_series() {
    let seed = vec![1.0; 10_000];
    let b = embedding_bounds_check(1.0, 1.0, &seed).unwrap();
    // sum_n e^{-2n} int_0^1 e^{-2x} dx = 1/2
    assert!((b.norm_sq - 0.5).abs() < 1e-6, "{}", b.norm_sq);
    assert!(b.holds(1e-3));
    let q = (-2.0f64).exp();
    assert!((b.lower - q / (1.0 - q)).abs() < 1e-12);
    assert!((b.upper - 1.0 / (1.0 - q)).abs() < 1e-12);
}

#[test]
fn embedding_damping_limit() {
    let seed = vec![1.0; 10_000];
    let lam = 20.0;
    let b = embedding_bounds_check(1.0, lam, &seed).unwrap();
    let single = (1.0 - (-2.0 * lam).exp()) / (2.0 * lam);
    assert!((b.norm_sq - single).abs() < 1e-6 * single);
}

#[test]
fn embedding_sandwich_for_random_seeds() {
    for s in 0..50 {
        let mut r = rng(80 + s);
        let t = r.random_range(0.2..3.0);
        let lam = r.random_range(0.05..3.0);
        let seed: Vec<f64> = (0..500).map(|_| r.sample(StandardNormal)).collect();
        let b = embedding_bounds_check(t, lam, &seed).unwrap();
        assert!(b.holds(1e-3), "seed {s}: {b:?}");
    }
    assert!(embedding_bounds_check(1.0, 0.0, &[1.0]).is_err());
}

fn span_model(sys: &BiorthogonalSystem, factor: Curve, seed: u64) -> ModelSpec {
    let sp = sys.space().clone();
    let mut f0 = sys.basis(2).re.scale(0.5);
    f0.axpy(1.0, &sys.basis(1).im).unwrap();
    f0.set_f0(f0.f0() + 5.0);
    let driver = DriverSpec::new(
        DriverKind::Wiener,
        FactorCovariance::new(&sp, vec![factor]).unwrap(),
        seed,
    )
    .unwrap();
    ModelSpec::new(f0, Drift::Zero, Volatility::Constant(Arc::new(Identity::new(&sp))), driver)
        .unwrap()
}

#[test]
fn series_without_noise_is_transport() {
    let sys = system(8);
    let sp = sys.space().clone();
    let model = span_model(&sys, Curve::zero(&sp), 1);
    let sim = Simulator::new(&model, 1.0, sp.dx()).unwrap();
    let inc = model.driver.sample_path(sp.dx(), 250, 0).unwrap();
    let surf = sim.run_path_recorded(0, Some(&inc), 1).unwrap();
    let rec = ou_series_reconstruct(&sys, &model, &surf, &inc).unwrap();
    for (k, c) in rec.curves.iter().enumerate().step_by(10) {
        let u = model.f0.shift_cells(k);
        assert!(dev_x0(&sys, c, &u) <= 1e-8 * u.sup_norm(), "k={k}");
    }
}

#[test]
fn series_matches_mild_simulation() {
    let sys = system(8);
    let sp = sys.space().clone();
    let model = span_model(&sys, sys.basis(1).re.scale(2.0), 3);
    let sim = Simulator::new(&model, 1.0, sp.dx()).unwrap();
    for path in 0..3 {
        let inc = model.driver.sample_path(sp.dx(), 250, path).unwrap();
        let surf = sim.run_path_recorded(path, Some(&inc), 1).unwrap();
        let rec = ou_series_reconstruct(&sys, &model, &surf, &inc).unwrap();
        for (k, (a, b)) in surf.curves.iter().zip(&rec.curves).enumerate() {
            let d = dev_x0(&sys, a, b);
            assert!(d <= 0.02 * a.sup_norm(), "path {path} k={k}: {d}");
            // spot channel
            let s = sys.coefficient(0, a).unwrap();
            assert!((s.re - a.f0()).abs() <= 1e-10 * a.f0().abs().max(1.0));
        }
    }
}

#[test]
fn series_rejects_models_outside_span() {
    let sys = system(8);
    let sp = sys.space().clone();
    let model = span_model(&sys, h_curve(&sp, 1.0).unwrap(), 1);
    let sim = Simulator::new(&model, 0.2, sp.dx()).unwrap();
    let inc = model.driver.sample_path(sp.dx(), 50, 0).unwrap();
    let surf = sim.run_path_recorded(0, Some(&inc), 1).unwrap();
    let out = ou_series_reconstruct(&sys, &model, &surf, &inc);
    assert!(matches!(out, Err(Error::Representation(_))));

    let model = span_model(&sys, sys.basis(1).re.clone(), 1);
    let sim = Simulator::new(&model, 3.5, sp.dx()).unwrap();
    let inc = model.driver.sample_path(sp.dx(), 875, 0).unwrap();
    let surf = sim.run_path_recorded(0, Some(&inc), 1).unwrap();
    assert!(matches!(ou_series_reconstruct(&sys, &model, &surf, &inc), Err(Error::Domain(_))));
}
