//! Top-level run summary. Contains no timings or paths, so identical
//! configurations give byte-identical files; the embedded `config` makes the
//! summary itself a valid `--config` input.

use frontlab::model::HypothesisReport;
use serde::{Deserialize, Serialize};

use crate::config::{Command, RunConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub command: Command,
    pub seed: u64,
    pub gamma_star: Option<f64>,
    pub c_star: Option<f64>,
    pub chi0: Option<f64>,
    pub winding_origin: Option<i64>,
    pub winding_stability_region: Option<i64>,
    pub melnikov_gamma: Option<f64>,
    pub hypothesis_report: HypothesisReport,
    pub simulation: Option<SimulationSummary>,
    pub resolvent: Option<ResolventSummary>,
    /// Stages of `all` that do not apply to the model, with the reason.
    pub skipped: Vec<String>,
    /// Output files written, relative to the output directory.
    pub files: Vec<String>,
    pub config: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSummary {
    pub measured_speed: f64,
    pub c_star: f64,
    pub speed_relative_error: f64,
    pub decay_rate: f64,
    pub noise_floor: f64,
    pub chi0: f64,
    pub heuristic_threshold: f64,
    pub passes_heuristic: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolventSummary {
    pub fitted_m: f64,
    pub theta0: f64,
    pub trials: usize,
    pub max_ratio_vuprime: f64,
    pub max_ratio_uell2: f64,
    pub decay_slope: f64,
}
