use std::sync::Arc;

use fcurve_core::dynamics::{Drift, ModelSpec, Simulator, Volatility};
use fcurve_core::noise::{DriverKind, DriverSpec, FactorCovariance};
use fcurve_core::operators::Identity;
use fcurve_core::riesz::{embedding_bounds_check, ou_series_reconstruct, BiorthogonalSystem, RieszBasisSpec};
use fcurve_core::space::h_curve;
use fcurve_core::{Curve, Result, Space};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{rng, CriterionReport};

fn system(sp: &Arc<Space>, n_max: usize) -> Result<BiorthogonalSystem> {
    BiorthogonalSystem::build(sp, RieszBasisSpec::with_default_lambda(2.0, sp.alpha(), n_max))
}

/// Max deviation on the nodes of `[0, x0]`.
fn dev_x0(sys: &BiorthogonalSystem, a: &Curve, b: &Curve) -> f64 {
    let c = sys.cells_x0();
    a.node_values()[..=c]
        .iter()
        .zip(&b.node_values()[..=c])
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

pub fn criterion_8(seed: u64) -> CriterionReport {
    CriterionReport::run(8, "Riesz basis machinery", |r| {
        let sp = Space::standard();
        let sys = system(&sp, 8)?;
        let mut bio: f64 = 0.0;
        for n in -8..=8i64 {
            for k in -8..=8i64 {
                let want = if n == k { 1.0 } else { 0.0 };
                bio = bio.max((sys.coefficient_complex(n, sys.basis(k)) - want).norm());
            }
        }
        r.require("biorthogonality_defect", bio, bio <= 1e-8, format!("biorthogonality {bio:e}"));

        let h1 = h_curve(&sp, 1.0)?;
        let mut errs = Vec::new();
        for n in [4, 8, 16] {
            let s = system(&sp, n)?;
            let e = dev_x0(&s, &s.project(&h1)?, &h1);
            r.metric(&format!("projection_error_n{n}"), e);
            errs.push(e);
        }
        let monotone = errs[0] > errs[1] && errs[1] > errs[2];
        r.require("projection_monotone", f64::from(u8::from(monotone)), monotone, format!("projection errors {errs:?}"));

        let mut dual: f64 = 0.0;
        for n in (-8..=8i64).filter(|n| *n != 0) {
            for m in [0usize, 50, 125, 250] {
                dual = dual.max(sys.semigroup_dual_action(n, m as f64 * sp.dx())?);
            }
        }
        r.require("dual_semigroup_defect", dual, dual <= 1e-7, format!("dual semigroup {dual:e}"));

        let mut sandwich_fail = 0u32;
        for s in 0..50 {
            let mut g = rng(seed, 8, s);
            let t = g.random_range(0.2..3.0);
            let lam = g.random_range(0.05..3.0);
            let samples: Vec<f64> = (0..500).map(|_| g.sample(StandardNormal)).collect();
            if !embedding_bounds_check(t, lam, &samples)?.holds(1e-12) {
                sandwich_fail += 1;
            }
        }
        r.require("embedding_failures", sandwich_fail.into(), sandwich_fail == 0, format!("{sandwich_fail} sandwich failures"));

        // a model whose curves stay in the span: transport of basis elements
        let mut f0 = sys.basis(2).re.scale(0.5);
        f0.axpy(1.0, &sys.basis(1).im)?;
        f0.set_f0(f0.f0() + 5.0);
        let driver = DriverSpec::new(
            DriverKind::Wiener,
            FactorCovariance::new(&sp, vec![sys.basis(1).re.scale(2.0)])?,
            seed,
        )?;
        let model = ModelSpec::new(f0, Drift::Zero, Volatility::Constant(Arc::new(Identity::new(&sp))), driver)?;
        let sim = Simulator::new(&model, 1.0, sp.dx())?;
        let mut series: f64 = 0.0;
        for path in 0..3 {
            let inc = model.driver.sample_path(sp.dx(), 250, path)?;
            let surf = sim.run_path_recorded(path, Some(&inc), 1)?;
            let rec = ou_series_reconstruct(&sys, &model, &surf, &inc)?;
            for (a, b) in surf.curves.iter().zip(&rec.curves) {
                series = series.max(dev_x0(&sys, a, b) / a.sup_norm());
            }
        }
        r.require("series_rel_gap", series, series <= 0.02, format!("series gap {series}"));
        Ok(())
    })
}
