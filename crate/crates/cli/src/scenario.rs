//! Building a model from a scenario and running it.

use std::f64::consts::PI;
use std::sync::Arc;

use fcurve_core::dynamics::{Drift, ModelSpec, Simulator, VolatilityProfile, Volatility};
use fcurve_core::noise::{DriverKind, DriverSpec, FactorCovariance};
use fcurve_core::operators::{parse_kernel, Identity, LinearOperator};
use fcurve_core::space::read_curve_csv;
use fcurve_core::{Curve, Space};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{DriftConfig, DriverKindConfig, InitialCurve, Mode, Scenario, VolConfig};
use crate::error::{CliError, Result};

pub fn build_space(s: &Scenario) -> Result<Arc<Space>> {
    let c = &s.config.space;
    Ok(Space::with(c.alpha, c.x_max, c.dx)?)
}

pub fn initial_curve(s: &Scenario, sp: &Arc<Space>) -> Result<Curve> {
    Ok(match &s.config.model.f0 {
        InitialCurve::Flat { level } => Curve::constant(sp, *level),
        InitialCurve::Seasonal { level, slope, amplitude, phase } => {
            let g = sp.grid();
            let vals: Vec<f64> = (0..g.nodes())
                .map(|i| {
                    let x = g.node(i);
                    level + slope * x + amplitude * (2.0 * PI * (x + phase)).cos()
                })
                .collect();
            Curve::from_node_values(sp, &vals)?
        }
        InitialCurve::Csv { path } => {
            let p = s.resolve(path);
            let file = std::fs::File::open(&p)
                .map_err(|e| CliError::Config(format!("model.f0.path {}: {e}", p.display())))?;
            read_curve_csv(file, Some(sp))
                .map_err(|e| CliError::Config(format!("model.f0.path {}: {e}", p.display())))?
        }
    })
}

pub fn factor_covariance(s: &Scenario, sp: &Arc<Space>) -> Result<FactorCovariance> {
    let loads = s.config.driver.factors.iter().map(|f| Curve::exponential(sp, f.lambda, f.gamma)).collect();
    Ok(FactorCovariance::new(sp, loads)?)
}

pub fn build_model(s: &Scenario, sp: &Arc<Space>, seed: u64, mode: Mode) -> Result<ModelSpec> {
    let f0 = initial_curve(s, sp)?;
    let beta = match s.config.model.beta {
        DriftConfig::Zero => Drift::Zero,
        DriftConfig::Constant { level } => Drift::Constant(Curve::constant(sp, level)),
        DriftConfig::Exponential { lambda, gamma } => Drift::Constant(Curve::exponential(sp, lambda, gamma)),
    };
    let scaled = |sigma: f64, op: Arc<dyn LinearOperator>| {
        if sigma == 1.0 {
            Volatility::Constant(op)
        } else {
            Volatility::ScalarTimesOperator { sigma: Arc::new(move |_| sigma), op }
        }
    };
    let psi = match &s.config.model.psi {
        VolConfig::Identity { sigma } => scaled(*sigma, Arc::new(Identity::new(sp))),
        VolConfig::Kernel { kernel, sigma } => scaled(*sigma, Arc::new(parse_kernel(sp, kernel)?)),
        VolConfig::Geometric { sigma } => {
            let g = Curve::constant(sp, *sigma);
            Volatility::StateMultiplication { g: Arc::new(move |_| g.clone()) }
        }
    };
    let kind = match s.config.driver.kind {
        DriverKindConfig::Wiener => DriverKind::Wiener,
        DriverKindConfig::Nig => DriverKind::Nig { ig_mu: 1.0, ig_lambda: s.config.driver.ig_lambda.unwrap_or(f64::NAN) },
    };
    let driver = DriverSpec::new(kind, factor_covariance(s, sp)?, seed)?;
    let model = ModelSpec::new(f0, beta, psi, driver)?;
    Ok(match mode {
        Mode::Physical => model,
        Mode::RiskNeutral => model.risk_neutral(),
    })
}

/// Running mean and variance, updated in path order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn variance(&self) -> f64 {
        if self.n > 1.0 {
            self.m2 / (self.n - 1.0)
        } else {
            0.0
        }
    }
}

struct PathOut {
    spot: Vec<f64>,
    /// Per maturity, `F(t_k, T)` for `t_k <= T` and `t_k <= horizon`.
    forwards: Vec<Vec<f64>>,
    /// Recorded states at the summary points, row-major by time.
    grid: Vec<f64>,
    /// Node values of recorded states, for the first paths only.
    surface: Vec<Vec<f64>>,
    finite: bool,
    sup_ratio: f64,
}

#[derive(Debug, Serialize)]
pub struct MomentPoint {
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Serialize)]
pub struct ForwardSummary {
    pub maturity: f64,
    pub last_t: f64,
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Serialize)]
pub struct MartingaleDiagnostic {
    pub maturity: f64,
    pub max_abs_z: f64,
    pub threshold: f64,
}

#[derive(Debug, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    pub passed: bool,
    pub value: f64,
}

#[derive(Debug, Serialize)]
pub struct SurfaceStats {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    /// Indexed `[t][x]`.
    pub mean: Vec<Vec<f64>>,
    pub variance: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub seed: u64,
    pub mode: Mode,
    pub n_paths: u64,
    pub horizon: f64,
    pub dt: f64,
    pub alpha: f64,
    pub x_max: f64,
    pub spot_end: MomentPoint,
    /// Left-sum variance of the spot at the horizon, for deterministic volatility.
    pub spot_end_variance_theory: Option<f64>,
    pub forwards: Vec<ForwardSummary>,
    pub surface: SurfaceStats,
    /// Present in risk-neutral mode.
    pub martingale: Option<Vec<MartingaleDiagnostic>>,
    pub invariants: Vec<InvariantCheck>,
}

pub struct SimulationOutput {
    pub surfaces_csv: String,
    pub spot_csv: String,
    pub forwards_csv: String,
    pub summary: Summary,
}

const CHUNK: u64 = 512;

pub fn simulate(s: &Scenario, seed: u64, n_paths: u64, mode: Mode) -> Result<SimulationOutput> {
    let sp = build_space(s)?;
    let model = build_model(s, &sp, seed, mode)?;
    let run = &s.config.run;
    let out = &run.outputs;
    let dt = s.dt();
    let sim = Simulator::new(&model, run.horizon, dt)?;
    let steps = sim.steps();
    let every = out.record_every;
    let rec_steps: Vec<usize> = (0..=steps).filter(|k| k % every == 0 || *k == steps).collect();
    let x_stride = sp.grid().steps_for(out.summary_x_step)?;
    let x_idx: Vec<usize> = (0..=sp.cells()).step_by(x_stride).collect();
    let fwd_steps: Vec<usize> = out
        .maturities
        .iter()
        .map(|m| ((m / dt).round() as usize).min(steps))
        .collect();

    let one_path = |p: u64| -> Result<PathOut> {
        let mut o = PathOut {
            spot: Vec::with_capacity(steps + 1),
            forwards: vec![Vec::new(); out.maturities.len()],
            grid: Vec::with_capacity(rec_steps.len() * x_idx.len()),
            surface: Vec::new(),
            finite: true,
            sup_ratio: 0.0,
        };
        sim.run_path_with(p, None, |k, t, f| {
            o.finite &= f.is_finite();
            o.spot.push(f.f0());
            for (j, m) in out.maturities.iter().enumerate() {
                if k <= fwd_steps[j] {
                    o.forwards[j].push(f.eval(m - t)?);
                }
            }
            if k % every == 0 || k == steps {
                let nodes = f.node_values();
                o.grid.extend(x_idx.iter().map(|i| nodes[*i]));
                let n = f.norm();
                if n > 0.0 {
                    o.sup_ratio = o.sup_ratio.max(f.sup_norm() / (2f64.sqrt() * n));
                }
                if p < out.surface_paths {
                    o.surface.push(nodes);
                }
            }
            Ok(())
        })?;
        Ok(o)
    };

    let mut spot_m = vec![Moments::default(); steps + 1];
    let mut fwd_m: Vec<Vec<Moments>> = fwd_steps.iter().map(|k| vec![Moments::default(); k + 1]).collect();
    let mut grid_m = vec![Moments::default(); rec_steps.len() * x_idx.len()];
    let mut surfaces_csv = String::from("path_id,t,x,value\n");
    let mut finite = true;
    let mut sup_ratio: f64 = 0.0;
    let mut start = 0;
    while start < n_paths {
        let end = (start + CHUNK).min(n_paths);
        let chunk: Vec<PathOut> = (start..end).into_par_iter().map(one_path).collect::<Result<_>>()?;
        for (off, o) in chunk.into_iter().enumerate() {
            let p = start + off as u64;
            for (m, v) in spot_m.iter_mut().zip(&o.spot) {
                m.push(*v);
            }
            for (ms, vs) in fwd_m.iter_mut().zip(&o.forwards) {
                for (m, v) in ms.iter_mut().zip(vs) {
                    m.push(*v);
                }
            }
            for (m, v) in grid_m.iter_mut().zip(&o.grid) {
                m.push(*v);
            }
            for (k, nodes) in rec_steps.iter().zip(&o.surface) {
                let t = *k as f64 * dt;
                for (i, v) in nodes.iter().enumerate() {
                    surfaces_csv.push_str(&format!("{p},{t},{},{v}\n", sp.grid().node(i)));
                }
            }
            finite &= o.finite;
            sup_ratio = sup_ratio.max(o.sup_ratio);
        }
        start = end;
    }

    let mut spot_csv = String::from("t,mean,variance\n");
    for (k, m) in spot_m.iter().enumerate() {
        spot_csv.push_str(&format!("{},{},{}\n", k as f64 * dt, m.mean, m.variance()));
    }
    let mut forwards_csv = String::from("maturity,t,mean,variance\n");
    for (mat, ms) in out.maturities.iter().zip(&fwd_m) {
        for (k, m) in ms.iter().enumerate() {
            forwards_csv.push_str(&format!("{mat},{},{},{}\n", k as f64 * dt, m.mean, m.variance()));
        }
    }

    let n = n_paths as f64;
    let martingale = model.is_risk_neutral().then(|| {
        out.maturities
            .iter()
            .zip(&fwd_m)
            .map(|(mat, ms)| {
                let start = ms[0].mean;
                let max_abs_z = ms[1..]
                    .iter()
                    .filter(|m| m.variance() > 0.0)
                    .map(|m| ((m.mean - start) / (m.variance() / n).sqrt()).abs())
                    .fold(0.0, f64::max);
                MartingaleDiagnostic { maturity: *mat, max_abs_z, threshold: 3.0 }
            })
            .collect()
    });
    let theory = match &model.psi {
        Volatility::StateMultiplication { .. } => None,
        _ => Some(VolatilityProfile::new(&model)?.spot_variance(run.horizon, dt)?),
    };
    let nx = x_idx.len();
    let surface = SurfaceStats {
        t: rec_steps.iter().map(|k| *k as f64 * dt).collect(),
        x: x_idx.iter().map(|i| sp.grid().node(*i)).collect(),
        mean: grid_m.chunks(nx).map(|r| r.iter().map(|m| m.mean).collect()).collect(),
        variance: grid_m.chunks(nx).map(|r| r.iter().map(Moments::variance).collect()).collect(),
    };
    let summary = Summary {
        scenario: s.config.name.clone().unwrap_or_default(),
        seed,
        mode,
        n_paths,
        horizon: run.horizon,
        dt,
        alpha: sp.alpha(),
        x_max: sp.x_max(),
        spot_end: MomentPoint { mean: spot_m[steps].mean, variance: spot_m[steps].variance() },
        spot_end_variance_theory: theory,
        forwards: out
            .maturities
            .iter()
            .zip(&fwd_m)
            .map(|(mat, ms)| {
                let last = ms.len() - 1;
                ForwardSummary { maturity: *mat, last_t: last as f64 * dt, mean: ms[last].mean, variance: ms[last].variance() }
            })
            .collect(),
        surface,
        martingale,
        invariants: vec![
            InvariantCheck { name: "finite_states".into(), passed: finite, value: f64::from(u8::from(finite)) },
            InvariantCheck {
                name: "sup_norm_over_sqrt2_norm".into(),
                passed: sup_ratio <= 1.0 + 1e-12,
                value: sup_ratio,
            },
        ],
    };
    Ok(SimulationOutput { surfaces_csv, spot_csv, forwards_csv, summary })
}
