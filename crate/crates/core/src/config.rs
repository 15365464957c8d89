//! JSON model description:
//!
//! ```json
//! {
//!   "reaction": { "kind": "cubic", "alpha": 0.3, "kappa": 1.0 },
//!   "damping": { "kind": "cattaneo-maxwell" },
//!   "tau": 1.0
//! }
//! ```
//!
//! Reactions: `cubic` (`alpha`, `kappa`) or `sampled` (`nodes`, `values`,
//! optional `slopes`). Damping: `constant-one`, `cattaneo-maxwell`, or
//! `custom` with `coefficients` `p_k` and optional `tau_coefficients` `q_k`
//! giving `g(u, tau) = sum_k (p_k + tau q_k) u^k`. Optional `tau_m` and
//! `delta0` override the admissibility bounds. Unknown keys are rejected.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{Damping, ModelSpec, PolynomialDamping, Reaction, SampledReaction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ReactionConfig {
    Cubic {
        alpha: f64,
        #[serde(default = "one")]
        kappa: f64,
    },
    Sampled {
        nodes: Vec<f64>,
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        slopes: Option<Vec<f64>>,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DampingConfig {
    ConstantOne,
    CattaneoMaxwell,
    Custom {
        coefficients: Vec<f64>,
        #[serde(default)]
        tau_coefficients: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub reaction: ReactionConfig,
    pub damping: DampingConfig,
    pub tau: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta0: Option<f64>,
}

impl ModelConfig {
    pub fn cubic(alpha: f64, kappa: f64, damping: DampingConfig, tau: f64) -> Self {
        Self {
            reaction: ReactionConfig::Cubic { alpha, kappa },
            damping,
            tau,
            tau_m: None,
            delta0: None,
        }
    }

    /// Builds the (not yet validated) model.
    pub fn to_model(&self) -> Result<ModelSpec> {
        let reaction = match &self.reaction {
            ReactionConfig::Cubic { alpha, kappa } => Reaction::cubic(*alpha, *kappa)?,
            ReactionConfig::Sampled {
                nodes,
                values,
                slopes,
            } => Reaction::Sampled(SampledReaction::new(
                nodes.clone(),
                values.clone(),
                slopes.clone(),
            )?),
        };
        let damping = match &self.damping {
            DampingConfig::ConstantOne => Damping::ConstantOne,
            DampingConfig::CattaneoMaxwell => Damping::CattaneoMaxwell,
            DampingConfig::Custom {
                coefficients,
                tau_coefficients,
            } => Damping::Custom(PolynomialDamping {
                coefficients: coefficients.clone(),
                tau_coefficients: tau_coefficients.clone(),
            }),
        };
        let base = ModelSpec::new(reaction, damping, self.tau)?;
        if self.tau_m.is_none() && self.delta0.is_none() {
            return Ok(base);
        }
        ModelSpec::with_bounds(
            base.reaction,
            base.damping,
            self.tau,
            self.tau_m.unwrap_or(base.tau_m),
            self.delta0.unwrap_or(base.delta0),
        )
    }
}
