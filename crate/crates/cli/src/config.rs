//! Run configuration: the model plus per-stage numeric overrides. Every
//! section is optional and falls back to the library defaults; unknown keys
//! are rejected with the key named.

use std::path::PathBuf;

use clap::ValueEnum;
use frontlab::config::ModelConfig;
use frontlab::evans::{Contour, ORIGIN_RADIUS};
use frontlab::model::DEFAULT_HYPOTHESIS_GRID;
use frontlab::profile::ShootingOptions;
use frontlab::resolvent::ResolventOptions;
use serde::{Deserialize, Serialize};

use crate::summary::Summary;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Check the structural hypotheses only.
    Validate,
    /// Speed and profile (plus manifold traces when configured).
    Front,
    /// Dispersion curves of the essential spectrum and the gap.
    Spectrum,
    /// Spectral gap only.
    Gap,
    /// Evans function zero counts and the Melnikov integral.
    Evans,
    /// Resolvent bounds for stationary fronts (tau > 0).
    Resolvent,
    /// Finite-difference runs: lab-frame speed and perturbation decay.
    Simulate,
    /// Everything applicable to the model.
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Front => "front",
            Command::Spectrum => "spectrum",
            Command::Gap => "gap",
            Command::Evans => "evans",
            Command::Resolvent => "resolvent",
            Command::Simulate => "simulate",
            Command::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShootingConfig {
    pub epsilon: f64,
    pub gamma_tol: f64,
    pub hypothesis_grid: usize,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        let d = ShootingOptions::default();
        Self {
            epsilon: d.epsilon,
            gamma_tol: d.gamma_tol,
            hypothesis_grid: DEFAULT_HYPOTHESIS_GRID,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Profile half-length; `null` picks 12 decay lengths.
    pub half_length: Option<f64>,
    pub spacing: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            half_length: None,
            spacing: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub xi_max: f64,
    pub xi_points: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            xi_max: 50.0,
            xi_points: 4001,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvansConfig {
    /// Region checked for zeros; `null` uses the default stability rectangle.
    pub region: Option<Contour>,
    pub origin_radius: f64,
}

impl Default for EvansConfig {
    fn default() -> Self {
        Self {
            region: None,
            origin_radius: ORIGIN_RADIUS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResolventConfig {
    pub dx: f64,
    pub half_length: Option<f64>,
    pub theta0: f64,
    pub re_max: f64,
    pub im_max: f64,
    pub trials: usize,
}

impl Default for ResolventConfig {
    fn default() -> Self {
        let d = ResolventOptions::default();
        Self {
            dx: 0.05,
            half_length: None,
            theta0: d.theta0,
            re_max: d.re_max,
            im_max: d.im_max,
            trials: d.trials,
        }
    }
}

/// `null` entries take the model-dependent defaults of the time stepper.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub half_length: Option<f64>,
    pub points: Option<usize>,
    pub horizon: Option<f64>,
    /// Time between trajectory snapshots (default 5).
    pub snapshot_every: Option<f64>,
    pub perturbation: Option<f64>,
    pub decay_horizon: Option<f64>,
    /// Grid spacing of the front used for the decay run (default 0.05 for
    /// `tau = 0`, where the explicit step scales with `dx^2`, else the
    /// profile spacing).
    pub decay_spacing: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ManifoldConfig {
    /// `gamma` values whose manifold traces are exported.
    pub gammas: Vec<f64>,
    pub epsilon: f64,
}

impl Default for ManifoldConfig {
    fn default() -> Self {
        Self {
            gammas: Vec::new(),
            epsilon: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Output directory (the `--out` flag takes precedence).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub shooting: ShootingConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
    #[serde(default)]
    pub evans: EvansConfig,
    #[serde(default)]
    pub resolvent: ResolventConfig,
    #[serde(default)]
    pub simulate: SimulateConfig,
    #[serde(default)]
    pub manifolds: ManifoldConfig,
}

impl RunConfig {
    pub fn new(model: ModelConfig) -> Self {
        Self {
            model,
            command: None,
            seed: None,
            output: None,
            shooting: ShootingConfig::default(),
            grid: GridConfig::default(),
            spectrum: SpectrumConfig::default(),
            evans: EvansConfig::default(),
            resolvent: ResolventConfig::default(),
            simulate: SimulateConfig::default(),
            manifolds: ManifoldConfig::default(),
        }
    }

    /// Parses a run configuration, or the `config` section of a summary
    /// written by an earlier run.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(config_error)?;
        let cfg = if value.get("config").is_some() && value.get("model").is_none() {
            serde_json::from_str::<Summary>(text).map_err(config_error)?.config
        } else {
            serde_json::from_str::<RunConfig>(text).map_err(config_error)?
        };
        cfg.check()?;
        Ok(cfg)
    }

    /// Every tolerance, spacing and size must be positive.
    pub fn check(&self) -> Result<(), CliError> {
        let positive: [(&str, f64); 11] = [
            ("shooting.epsilon", self.shooting.epsilon),
            ("shooting.gamma_tol", self.shooting.gamma_tol),
            ("grid.spacing", self.grid.spacing),
            ("spectrum.xi_max", self.spectrum.xi_max),
            ("evans.origin_radius", self.evans.origin_radius),
            ("resolvent.dx", self.resolvent.dx),
            ("resolvent.theta0", self.resolvent.theta0),
            ("resolvent.re_max", self.resolvent.re_max),
            ("resolvent.im_max", self.resolvent.im_max),
            ("manifolds.epsilon", self.manifolds.epsilon),
            ("shooting.hypothesis_grid", self.shooting.hypothesis_grid as f64),
        ];
        let optional: [(&str, Option<f64>); 8] = [
            ("grid.half_length", self.grid.half_length),
            ("resolvent.half_length", self.resolvent.half_length),
            ("simulate.half_length", self.simulate.half_length),
            ("simulate.horizon", self.simulate.horizon),
            ("simulate.snapshot_every", self.simulate.snapshot_every),
            ("simulate.perturbation", self.simulate.perturbation),
            ("simulate.decay_horizon", self.simulate.decay_horizon),
            ("simulate.decay_spacing", self.simulate.decay_spacing),
        ];
        let counts: [(&str, usize, usize); 3] = [
            ("spectrum.xi_points", self.spectrum.xi_points, 2),
            ("resolvent.trials", self.resolvent.trials, 1),
            ("simulate.points", self.simulate.points.unwrap_or(5), 5),
        ];
        for (key, v) in positive.into_iter().chain(optional.into_iter().filter_map(|(k, v)| v.map(|v| (k, v)))) {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{key} must be positive and finite, got {v}")));
            }
        }
        for (key, v, min) in counts {
            if v < min {
                return Err(CliError::Config(format!("{key} must be at least {min}, got {v}")));
            }
        }
        if self.manifolds.gammas.iter().any(|g| !g.is_finite()) {
            return Err(CliError::Config("manifolds.gammas must be finite".into()));
        }
        Ok(())
    }
}

fn config_error(e: serde_json::Error) -> CliError {
    CliError::Config(e.to_string())
}
