use std::sync::Arc;

use fcurve_core::dynamics::{
    bivariate_sigma, simulate_mild, Drift, ExpFactor, ModelSpec, OuFactorModel, Simulator,
    VolatilityProfile, Volatility,
};
use fcurve_core::noise::{DriverKind, DriverSpec, FactorCovariance, NoiseIncrements};
use fcurve_core::operators::Identity;
use fcurve_core::sample::random_price_curve;
use fcurve_core::{Curve, Result, Space};
use nalgebra::DMatrix;

use crate::stats::{covariance, mean_var, sup_abs};
use crate::{rng, CriterionReport};

const FACTORS: [ExpFactor; 3] = [
    ExpFactor { lambda: 0.6, gamma: 0.8 },
    ExpFactor { lambda: 0.4, gamma: 1.5 },
    ExpFactor { lambda: 0.3, gamma: 3.0 },
];

fn loadings(sp: &Arc<Space>) -> Result<FactorCovariance> {
    FactorCovariance::new(sp, FACTORS.iter().map(|e| Curve::exponential(sp, e.lambda, e.gamma)).collect())
}

fn identity_model(sp: &Arc<Space>, f0: Curve, kind: DriverKind, seed: u64) -> Result<ModelSpec> {
    let driver = DriverSpec::new(kind, loadings(sp)?, seed)?;
    ModelSpec::new(f0, Drift::Zero, Volatility::Constant(Arc::new(Identity::new(sp))), driver)
}

struct PathRecord {
    /// `F(t_k, T) - F(0, T)` for `k = 1..=steps`, three maturities per step.
    drift: Vec<f64>,
    spot_end: f64,
    pair_end: (f64, f64),
}

const PATHS: u64 = 10_000;
const MATURITIES: [f64; 3] = [1.0, 2.0, 3.0];
const PAIR: (f64, f64) = (1.5, 2.5);

fn record_paths(model: &ModelSpec, horizon: f64, dt: f64) -> Result<Vec<PathRecord>> {
    let sim = Simulator::new(model, horizon, dt)?;
    let start: Vec<f64> = MATURITIES.iter().map(|m| model.f0.eval(*m)).collect::<Result<_>>()?;
    let steps = sim.steps();
    sim.map_paths(PATHS, |p, s| {
        let mut rec = PathRecord { drift: Vec::with_capacity(steps * 3), spot_end: 0.0, pair_end: (0.0, 0.0) };
        s.run_path_with(p, None, |k, t, f| {
            if k == 0 {
                return Ok(());
            }
            for (m, f0m) in MATURITIES.iter().zip(&start) {
                rec.drift.push(f.eval(m - t)? - f0m);
            }
            if k == steps {
                rec.spot_end = f.f0();
                rec.pair_end = (f.eval(PAIR.0 - t)?, f.eval(PAIR.1 - t)?);
            }
            Ok(())
        })?;
        Ok(rec)
    })
}

/// Largest `|mean / standard error|` over all steps and maturities.
fn max_drift_z(recs: &[PathRecord]) -> f64 {
    let len = recs[0].drift.len();
    let n = recs.len() as f64;
    let mut sum = vec![0.0; len];
    let mut sq = vec![0.0; len];
    for r in recs {
        for (j, d) in r.drift.iter().enumerate() {
            sum[j] += d;
            sq[j] += d * d;
        }
    }
    (0..len)
        .map(|j| {
            let m = sum[j] / n;
            let v = (sq[j] - n * m * m) / (n - 1.0);
            (m / (v / n).sqrt()).abs()
        })
        .fold(0.0, f64::max)
}

pub fn criterion_6(seed: u64) -> CriterionReport {
    CriterionReport::run(6, "dynamics consistency", |r| {
        let sp = Space::standard();
        let dt = sp.dx();
        let f0 = random_price_curve(&sp, &mut rng(seed, 6, 0));

        // (a) no noise: f(t)(x) = f0(t + x)
        let empty = DriverSpec::new(DriverKind::Wiener, FactorCovariance::new(&sp, vec![])?, seed)?;
        let still = ModelSpec::new(
            f0.clone(),
            Drift::Zero,
            Volatility::Constant(Arc::new(Identity::new(&sp))),
            empty,
        )?;
        let surf = &simulate_mild(&still, 1.0, dt, 1)?[0];
        let nodes = f0.node_values();
        let last = nodes.len() - 1;
        let mut transport: f64 = 0.0;
        for (k, c) in surf.curves.iter().enumerate() {
            for (i, v) in c.node_values().iter().enumerate() {
                let want = nodes[(i + k).min(last)];
                transport = transport.max((v - want).abs() / want.abs());
            }
        }
        r.require("a_transport_rel", transport, transport <= 1e-12, format!("transport {transport:e}"));

        // (b) martingale diagnostic for both drivers
        let mut wiener = None;
        for (name, kind) in [
            ("wiener", DriverKind::Wiener),
            ("nig", DriverKind::Nig { ig_mu: 1.0, ig_lambda: 2.0 }),
        ] {
            let model = identity_model(&sp, f0.clone(), kind, seed)?.risk_neutral();
            let recs = record_paths(&model, 1.0, dt)?;
            let z = max_drift_z(&recs);
            r.require(&format!("b_max_abs_z_{name}"), z, z <= 3.0, format!("{name} drift z-score {z}"));
            if name == "wiener" {
                wiener = Some((model, recs));
            }
        }
        let (model, recs) = wiener.expect("wiener run recorded");
        let n = recs.len() as f64;

        // (c) spot variance against the left sum of sigma^2
        let spot: Vec<f64> = recs.iter().map(|p| p.spot_end).collect();
        let (_, v) = mean_var(&spot);
        let prof = VolatilityProfile::new(&model)?;
        let theory = prof.spot_variance(1.0, dt)?;
        let se = theory * (2.0 / n).sqrt();
        r.metric("c_spot_variance_mc", v);
        r.metric("c_spot_variance_theory", theory);
        let zc = (v - theory) / se;
        r.require("c_z", zc, zc.abs() <= 3.0, format!("spot variance z-score {zc}"));

        // (d) forward covariance against the squared bivariate sigma
        let a: Vec<f64> = recs.iter().map(|p| p.pair_end.0).collect();
        let b: Vec<f64> = recs.iter().map(|p| p.pair_end.1).collect();
        let cov = covariance(&a, &b);
        let steps = (1.0 / dt).round() as usize;
        let mut m = DMatrix::zeros(2, 2);
        for k in 0..steps {
            let s = bivariate_sigma(&model, PAIR.0, PAIR.1, k as f64 * dt)?;
            m += &s * &s * dt;
        }
        let se = ((m[(0, 0)] * m[(1, 1)] + m[(0, 1)].powi(2)) / n).sqrt();
        r.metric("d_cov_mc", cov);
        r.metric("d_cov_theory", m[(0, 1)]);
        let zd = (cov - m[(0, 1)]) / se;
        r.require("d_z", zd, zd.abs() <= 3.0, format!("forward covariance z-score {zd}"));
        Ok(())
    })
}

fn ou_model(sp: &Arc<Space>, f0_seed: u64, seed: u64) -> Result<OuFactorModel> {
    OuFactorModel::new(
        random_price_curve(sp, &mut rng(f0_seed, 7, 0)),
        FACTORS.to_vec(),
        Arc::new(|_| 1.0),
        vec![],
        DriverKind::Wiener,
        seed,
    )
}

/// Sup-norm gap between the exact factor recursion and the mild scheme,
/// relative to the stochastic part, over `t <= 1` and `x <= x_max - t`.
/// The coarse grid reuses the fine Brownian path through pair sums.
fn cross_discrepancy(seed: u64, fine: &NoiseIncrements, coarsen: usize) -> Result<f64> {
    let dt = fine.dt * coarsen as f64;
    let steps = fine.steps / coarsen;
    let nf = fine.n_factors;
    let mut dl = vec![0.0; steps * nf];
    for k in 0..steps * coarsen {
        for n in 0..nf {
            dl[(k / coarsen) * nf + n] += fine.step(k)[n];
        }
    }
    let inc = NoiseIncrements { dt, steps, n_factors: nf, dl, theta: None };
    let sp = Space::with(1.0, 5.0, dt)?;
    let ou = ou_model(&sp, seed, seed)?;
    let model = ou.to_model()?;
    let mild = Simulator::new(&model, 1.0, dt)?.run_path_recorded(0, Some(&inc), 1)?;
    let fac = ou.simulate_path(1.0, dt, 0, Some(&inc))?.surface;
    let cells = sp.cells();
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (k, (a, b)) in mild.curves.iter().zip(&fac.curves).enumerate() {
        diff = diff.max(sup_abs(&a.sub(b)?.node_values()[..=cells - k]));
        scale = scale.max(sup_abs(&a.sub(&ou.f0.shift_cells(k))?.node_values()[..=cells - k]));
    }
    Ok(diff / scale)
}

pub fn criterion_7(seed: u64) -> CriterionReport {
    CriterionReport::run(7, "factor recursion vs mild scheme", |r| {
        let fine_sp = Space::with(1.0, 5.0, 1.0 / 500.0)?;
        let driver = ou_model(&fine_sp, seed, seed)?.driver;
        let mut coarse: f64 = 0.0;
        let mut fine: f64 = 0.0;
        for path in 0..3 {
            let inc = driver.sample_path(1.0 / 500.0, 500, path)?;
            coarse = coarse.max(cross_discrepancy(seed, &inc, 2)?);
            fine = fine.max(cross_discrepancy(seed, &inc, 1)?);
        }
        r.require("rel_gap_dt_1_250", coarse, coarse <= 0.02, format!("dt = 1/250 gap {coarse}"));
        r.require("rel_gap_dt_1_500", fine, fine <= 0.01, format!("dt = 1/500 gap {fine}"));
        r.metric("refinement_ratio", fine / coarse);
        Ok(())
    })
}
