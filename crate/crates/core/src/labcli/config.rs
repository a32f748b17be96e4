//! Run configuration: one JSON document per run.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::evolution::InitialData;
use crate::spectral::Grid1D;

/// Names accepted in `scenario`.
pub const PRESETS: [&str; 8] = [
    "kernel-bounds",
    "smoothing-rates",
    "conservation",
    "mean-barrier",
    "moment-barrier",
    "stein-asymptotics",
    "inequality-audits",
    "picard-crosscheck",
];

pub fn preset_summary(name: &str) -> &'static str {
    match name {
        "kernel-bounds" => "sup and L2 bounds of |xi|^l e^{-t|xi|^{1+a}} against closed forms",
        "smoothing-rates" => "H^lambda decay rate of the linear flow on spectral-critical data",
        "conservation" => "mean mode, L2 monotonicity and first-moment identity along a run",
        "mean-barrier" => "tail exponent and weighted-norm verdicts around r = 3/2 + a",
        "moment-barrier" => "tail exponent and weighted-norm verdicts around r = 5/2 + a",
        "stein-asymptotics" => "small/large eta slopes and L2 membership of D^theta(|xi|^gamma chi)",
        "inequality-audits" => "commutator, weighted Hilbert and interpolation ratio audits",
        "picard-crosscheck" => "Picard iteration of the Duhamel map against time marching",
        _ => "",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: String,
    pub a: f64,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub stepper: StepperConfig,
    #[serde(default)]
    pub data: DataConfig,
    #[serde(default)]
    pub flow: Flow,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub n_points: usize,
    pub half_length: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n_points: 4096,
            half_length: 128.0 * std::f64::consts::PI,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StepperConfig {
    pub dt: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub dealias_fraction: f64,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig {
            dt: 1e-3,
            t_final: 1.0,
            dealias_fraction: 2.0 / 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DataConfig {
    Gaussian {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        width: f64,
        #[serde(default)]
        center: f64,
    },
    /// Gaussian normalised to `∫ φ = 1`.
    UnitMeanGaussian,
    XTimesGaussian {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        width: f64,
    },
    GaussianDerivative {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        width: f64,
        order: u32,
    },
    SpectralCritical {
        #[serde(default)]
        s: f64,
        #[serde(default = "critical_epsilon")]
        epsilon: f64,
    },
    Zero,
    /// Raw samples from a snapshot file or a JSON array, resolved against
    /// the config's directory.
    Custom { path: PathBuf },
}

fn one() -> f64 {
    1.0
}

fn critical_epsilon() -> f64 {
    0.01
}

impl Default for DataConfig {
    fn default() -> Self {
        DataConfig::Gaussian {
            amplitude: 1.0,
            width: 1.0,
            center: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flow {
    Linear,
    #[default]
    Nonlinear,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    #[serde(default)]
    pub s_list: Vec<f64>,
    #[serde(default)]
    pub r_list: Vec<f64>,
    /// Truncation radii `R`; empty means `L/32 · 2^k`, `k = 0..4`.
    #[serde(default, rename = "R_list", alias = "radii")]
    pub radii: Vec<f64>,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
}

/// Parameter lists for the sweeping presets. Empty lists take preset defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub lambdas: Vec<f64>,
    #[serde(default)]
    pub sigmas: Vec<f64>,
    #[serde(default)]
    pub times: Vec<f64>,
    /// `(γ, θ)` pairs for the Stein probe.
    #[serde(default)]
    pub pairs: Vec<(f64, f64)>,
    /// Time window for rate fits.
    #[serde(default)]
    pub window: Option<(f64, f64)>,
    #[serde(default)]
    pub samples: Option<usize>,
}

/// Schema violation: bad syntax, missing or unknown keys, values out of range.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "schema violation: {}", self.0)
    }
}

impl std::error::Error for SchemaError {}

fn schema(msg: impl Into<String>) -> SchemaError {
    SchemaError(msg.into())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, SchemaError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SchemaError> {
        if !PRESETS.contains(&self.scenario.as_str()) {
            return Err(schema(format!("unknown scenario `{}`", self.scenario)));
        }
        if !(self.a > 0.0 && self.a <= 1.0) {
            return Err(schema(format!("a must lie in (0, 1], got {}", self.a)));
        }
        Grid1D::new(self.grid.n_points, self.grid.half_length).map_err(|e| schema(e.to_string()))?;
        let st = &self.stepper;
        if !(st.dt > 0.0 && st.dt < 1.0) {
            return Err(schema(format!("dt must lie in (0, 1), got {}", st.dt)));
        }
        if !(st.t_final > 0.0 && st.t_final.is_finite()) {
            return Err(schema(format!("T must be positive, got {}", st.t_final)));
        }
        if !(st.dealias_fraction > 0.0 && st.dealias_fraction <= 1.0) {
            return Err(schema("dealias_fraction must lie in (0, 1]"));
        }
        let d = &self.diagnostics;
        if d.snapshot_times.iter().any(|t| !(*t >= 0.0 && *t <= st.t_final)) {
            return Err(schema("snapshot times must lie in [0, T]"));
        }
        if d.radii.iter().any(|r| !(*r > 0.0)) {
            return Err(schema("radii must be positive"));
        }
        if d.s_list.iter().chain(&d.r_list).any(|v| !v.is_finite()) {
            return Err(schema("s_list and r_list must be finite"));
        }
        Ok(())
    }

    pub fn make_grid(&self) -> Grid1D {
        Grid1D::new(self.grid.n_points, self.grid.half_length).expect("validated")
    }

    /// Radii for the barrier scans.
    pub fn radii(&self) -> Vec<f64> {
        if self.diagnostics.radii.is_empty() {
            (0..5).map(|k| self.grid.half_length / 32.0 * 2f64.powi(k)).collect()
        } else {
            self.diagnostics.radii.clone()
        }
    }

    /// Initial data, with custom sample files resolved against `base`.
    pub fn initial_data(&self, base: &Path) -> Result<InitialData, SchemaError> {
        Ok(match &self.data {
            DataConfig::Gaussian { amplitude, width, center } => InitialData::Gaussian {
                amplitude: *amplitude,
                width: *width,
                center: *center,
            },
            DataConfig::UnitMeanGaussian => InitialData::unit_mean_gaussian(),
            DataConfig::XTimesGaussian { amplitude, width } => InitialData::XTimesGaussian {
                amplitude: *amplitude,
                width: *width,
            },
            DataConfig::GaussianDerivative { amplitude, width, order } => InitialData::GaussianDerivative {
                amplitude: *amplitude,
                width: *width,
                order: *order,
            },
            DataConfig::SpectralCritical { s, epsilon } => InitialData::SpectralCritical { s: *s, epsilon: *epsilon },
            DataConfig::Zero => InitialData::Samples(vec![0.0; self.grid.n_points]),
            DataConfig::Custom { path } => {
                let full = base.join(path);
                let samples = super::output::read_samples(&full).map_err(|e| schema(format!("{}: {e}", full.display())))?;
                if samples.len() != self.grid.n_points {
                    return Err(schema(format!(
                        "{} holds {} samples, grid has {}",
                        full.display(),
                        samples.len(),
                        self.grid.n_points
                    )));
                }
                InitialData::Samples(samples)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = RunConfig::from_json(r#"{"scenario": "kernel-bounds", "a": 1, "output_dir": "out"}"#).unwrap();
        assert_eq!(cfg.grid, GridConfig::default());
        assert_eq!(cfg.flow, Flow::Nonlinear);
        assert_eq!(cfg.radii().len(), 5);
    }

    #[test]
    fn schema_violations() {
        for bad in [
            r#"{"scenario": "kernel-bounds", "output_dir": "out"}"#,
            r#"{"scenario": "nope", "a": 0.5, "output_dir": "out"}"#,
            r#"{"scenario": "conservation", "a": 1.5, "output_dir": "out"}"#,
            r#"{"scenario": "conservation", "a": 0.5, "output_dir": "out", "stepper": {"dt": 1, "T": 1, "dealias_fraction": 0.5}}"#,
            r#"{"scenario": "conservation", "a": 0.5, "output_dir": "out", "grid": {"n_points": 7, "half_length": 1}}"#,
            r#"{"scenario": "conservation", "a": 0.5, "output_dir": "out", "colour": 1}"#,
        ] {
            assert!(RunConfig::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn data_presets_parse() {
        let cfg = RunConfig::from_json(
            r#"{"scenario": "moment-barrier", "a": 0.5, "output_dir": "o",
                "data": {"preset": "gaussian-derivative", "order": 2}}"#,
        )
        .unwrap();
        assert_eq!(
            cfg.initial_data(Path::new(".")).unwrap(),
            InitialData::GaussianDerivative { amplitude: 1.0, width: 1.0, order: 2 }
        );
    }
}
