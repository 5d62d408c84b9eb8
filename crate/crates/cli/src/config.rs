//! Scenario files: TOML (or JSON when the file ends in `.json`).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub space: SpaceConfig,
    pub model: ModelConfig,
    pub driver: DriverConfig,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default)]
    pub analytics: AnalyticsConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpaceConfig {
    pub alpha: f64,
    pub dx: f64,
    pub x_max: f64,
}

impl Default for SpaceConfig {
    fn default() -> Self {
        Self { alpha: 1.0, dx: 1.0 / 250.0, x_max: 5.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub f0: InitialCurve,
    #[serde(default)]
    pub beta: DriftConfig,
    #[serde(default)]
    pub psi: VolConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialCurve {
    Flat { level: f64 },
    /// `level + slope x + amplitude cos(2 pi (x + phase))`.
    Seasonal {
        level: f64,
        #[serde(default)]
        slope: f64,
        amplitude: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Curve file: a `# alpha=.. dx=.. xmax=.. f0=..` line, then `x,value` rows.
    Csv { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DriftConfig {
    #[default]
    Zero,
    Constant { level: f64 },
    /// `lambda exp(-gamma x)`.
    Exponential { lambda: f64, gamma: f64 },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum VolConfig {
    /// `sigma Id`.
    Identity {
        #[serde(default = "one")]
        sigma: f64,
    },
    /// `sigma T` for a built-in kernel such as `delivery(tau=0.5)`.
    Kernel {
        kernel: String,
        #[serde(default = "one")]
        sigma: f64,
    },
    /// Multiplication by the current state times `sigma`.
    Geometric { sigma: f64 },
}

impl Default for VolConfig {
    fn default() -> Self {
        VolConfig::Identity { sigma: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DriverKindConfig {
    Wiener,
    Nig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriverConfig {
    pub kind: DriverKindConfig,
    /// Shape of the inverse-Gaussian subordinator at unit time.
    #[serde(default)]
    pub ig_lambda: Option<f64>,
    /// Exponential loadings `lambda exp(-gamma x)`.
    pub factors: Vec<FactorConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorConfig {
    pub lambda: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Physical,
    RiskNeutral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub horizon: f64,
    /// Defaults to `dx`; any other value is rejected.
    pub dt: Option<f64>,
    pub n_paths: u64,
    pub seed: u64,
    pub mode: Mode,
    pub outputs: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { horizon: 1.0, dt: None, n_paths: 10_000, seed: 0, mode: Mode::Physical, outputs: OutputConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Fixed delivery times tracked in `forwards.csv`.
    pub maturities: Vec<f64>,
    /// Steps between states written to `surfaces.csv` and the summary grid.
    pub record_every: usize,
    /// Paths written in full to `surfaces.csv`.
    pub surface_paths: u64,
    /// Spacing of the `x` points in the summary statistics.
    pub summary_x_step: f64,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { maturities: vec![0.2, 0.5, 1.0, 2.0], record_every: 25, surface_paths: 1, summary_x_step: 0.2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalyticsConfig {
    pub correlation_points: Vec<f64>,
    /// Decay `delta` of the exponential covariance kernel example.
    pub exp_kernel_delta: Option<f64>,
    pub basis: BasisConfig,
}

impl Default for AnalyticsConfig {
    fn default() -> Self {
        Self {
            correlation_points: vec![0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0],
            exp_kernel_delta: None,
            basis: BasisConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BasisConfig {
    pub x0: f64,
    pub n_max: usize,
    /// Defaults to `alpha / 2`.
    pub lambda: Option<f64>,
}

impl Default for BasisConfig {
    fn default() -> Self {
        Self { x0: 2.0, n_max: 16, lambda: None }
    }
}

pub const BUILTIN_LUCIA_SCHWARTZ: &str = "lucia-schwartz-1f";

/// One mean-reverting factor on a seasonal curve.
fn lucia_schwartz() -> ScenarioConfig {
    ScenarioConfig {
        name: Some(BUILTIN_LUCIA_SCHWARTZ.into()),
        space: SpaceConfig::default(),
        model: ModelConfig {
            f0: InitialCurve::Seasonal { level: 35.0, slope: 0.5, amplitude: 6.0, phase: 0.0 },
            beta: DriftConfig::Zero,
            psi: VolConfig::Identity { sigma: 1.0 },
        },
        driver: DriverConfig {
            kind: DriverKindConfig::Wiener,
            ig_lambda: None,
            factors: vec![FactorConfig { lambda: 4.0, gamma: 1.4 }],
        },
        run: RunConfig::default(),
        analytics: AnalyticsConfig::default(),
    }
}

/// A loaded scenario with file references resolved against its directory.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub base_dir: PathBuf,
}

impl Scenario {
    pub fn load(source: &str) -> Result<Self> {
        let path = Path::new(source);
        if source == BUILTIN_LUCIA_SCHWARTZ && !path.exists() {
            return Ok(Self { config: lucia_schwartz(), base_dir: PathBuf::from(".") });
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let config = parse(&text, path.extension().is_some_and(|e| e == "json"))
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let s = Self { config, base_dir };
        if let InitialCurve::Csv { path } = &s.config.model.f0 {
            let p = s.resolve(path);
            if !p.is_file() {
                return Err(CliError::Config(format!("model.f0.path: {} does not exist", p.display())));
            }
        }
        Ok(s)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn dt(&self) -> f64 {
        self.config.run.dt.unwrap_or(self.config.space.dx)
    }
}

pub fn parse(text: &str, json: bool) -> std::result::Result<ScenarioConfig, String> {
    if json {
        serde_json::from_str(text).map_err(|e| e.to_string())
    } else {
        toml::from_str(text).map_err(|e| e.to_string())
    }
}
