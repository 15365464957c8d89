//! Reaction and damping terms of `tau u_tt + g(u, tau) u_t = u_xx + f(u)`,
//! the two-well potential, and the structural checks every downstream
//! computation relies on.
//!
//! The reaction must be bistable: zeros at `0 < alpha < 1` and at both ends,
//! stable at `0` and `1` (`f' < 0`), unstable at `alpha`. The damping must be
//! bounded below by a positive constant on the range of the front.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::CubicHermite;
use crate::quad::adaptive_simpson;

/// Tolerance used when checking that `f` vanishes at its roots.
pub const ROOT_TOL: f64 = 1e-9;
pub const DEFAULT_DELTA0: f64 = 1e-6;
pub const DEFAULT_HYPOTHESIS_GRID: usize = 1000;

#[derive(Debug, Clone)]
pub enum Reaction {
    /// `kappa * u (1 - u) (u - alpha)`
    Cubic { alpha: f64, kappa: f64 },
    Sampled(SampledReaction),
}

/// A reaction given by node values on `[0, 1]`, interpolated by a piecewise
/// cubic. Node slopes are used when supplied, otherwise Fritsch–Carlson
/// slopes keep the interpolant monotone between nodes.
#[derive(Debug, Clone)]
pub struct SampledReaction {
    alpha: f64,
    interp: CubicHermite,
}

impl SampledReaction {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>, slopes: Option<Vec<f64>>) -> Result<Self> {
        if nodes.len() < 4 || nodes.len() != values.len() {
            return Err(Error::InvalidModel(
                "sampled reaction needs at least 4 nodes with matching values".into(),
            ));
        }
        if let Some(s) = &slopes {
            if s.len() != nodes.len() {
                return Err(Error::InvalidModel("slope count differs from node count".into()));
            }
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidModel("nodes must be strictly increasing".into()));
        }
        if nodes[0] != 0.0 || *nodes.last().unwrap() != 1.0 {
            return Err(Error::InvalidModel("nodes must span exactly [0, 1]".into()));
        }
        let interp = match slopes {
            Some(s) => CubicHermite::new(nodes.clone(), values.clone(), s),
            None => CubicHermite::monotone(nodes.clone(), values.clone()),
        };
        // Middle root: the sign change from negative to positive.
        let alpha = (0..nodes.len() - 1)
            .find(|&i| values[i] < 0.0 && values[i + 1] >= 0.0)
            .map(|i| {
                let (mut lo, mut hi) = (nodes[i], nodes[i + 1]);
                if interp.eval(lo) == 0.0 {
                    return lo;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if interp.eval(mid) < 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .ok_or_else(|| Error::InvalidModel("sampled reaction has no interior sign change".into()))?;
        Ok(Self { alpha, interp })
    }
}

impl Reaction {
    pub fn cubic(alpha: f64, kappa: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain {
                what: "alpha",
                value: alpha,
                domain: "(0, 1)",
            });
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::Domain {
                what: "kappa",
                value: kappa,
                domain: "(0, inf)",
            });
        }
        Ok(Reaction::Cubic { alpha, kappa })
    }

    /// The unstable middle root.
    pub fn alpha(&self) -> f64 {
        match self {
            Reaction::Cubic { alpha, .. } => *alpha,
            Reaction::Sampled(s) => s.alpha,
        }
    }

    pub fn f(&self, u: f64) -> f64 {
        match *self {
            Reaction::Cubic { alpha, kappa } => kappa * u * (1.0 - u) * (u - alpha),
            Reaction::Sampled(ref s) => s.interp.eval(u),
        }
    }

    pub fn df(&self, u: f64) -> f64 {
        match *self {
            Reaction::Cubic { alpha, kappa } => {
                kappa * (-3.0 * u * u + 2.0 * (1.0 + alpha) * u - alpha)
            }
            Reaction::Sampled(ref s) => s.interp.eval3(u).1,
        }
    }

    pub fn d2f(&self, u: f64) -> f64 {
        match *self {
            Reaction::Cubic { alpha, kappa } => kappa * (-6.0 * u + 2.0 * (1.0 + alpha)),
            Reaction::Sampled(ref s) => s.interp.eval3(u).2,
        }
    }

    /// Closed-form `F(u) = -∫_0^u f` when available.
    pub fn potential_exact(&self, u: f64) -> Option<f64> {
        match *self {
            Reaction::Cubic { alpha, kappa } => Some(
                -kappa * (-u.powi(4) / 4.0 + (1.0 + alpha) * u.powi(3) / 3.0 - alpha * u * u / 2.0),
            ),
            Reaction::Sampled(_) => None,
        }
    }

    /// Maximum of `f'` over `[0, 1]` (sampled densely plus the critical point
    /// for the cubic).
    pub fn max_slope(&self) -> f64 {
        let mut m = (0..=4000)
            .map(|k| self.df(k as f64 / 4000.0))
            .fold(f64::NEG_INFINITY, f64::max);
        if let Reaction::Cubic { alpha, .. } = *self {
            m = m.max(self.df((1.0 + alpha) / 3.0));
        }
        m
    }

    pub fn max_abs_slope(&self) -> f64 {
        (0..=4000)
            .map(|k| self.df(k as f64 / 4000.0).abs())
            .fold(0.0, f64::max)
            .max(self.max_slope().abs())
    }
}

/// Polynomial damping `g(u, tau) = Σ_k (p_k + tau q_k) u^k`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PolynomialDamping {
    pub coefficients: Vec<f64>,
    #[serde(default)]
    pub tau_coefficients: Vec<f64>,
}

impl PolynomialDamping {
    fn coeff(&self, k: usize, tau: f64) -> f64 {
        self.coefficients.get(k).copied().unwrap_or(0.0)
            + tau * self.tau_coefficients.get(k).copied().unwrap_or(0.0)
    }

    fn degree(&self) -> usize {
        self.coefficients.len().max(self.tau_coefficients.len())
    }

    fn eval(&self, u: f64, tau: f64) -> f64 {
        (0..self.degree()).rev().fold(0.0, |acc, k| acc * u + self.coeff(k, tau))
    }

    fn eval_du(&self, u: f64, tau: f64) -> f64 {
        (1..self.degree())
            .rev()
            .fold(0.0, |acc, k| acc * u + k as f64 * self.coeff(k, tau))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Damping {
    /// `g ≡ 1` (nonlinear telegraph equation).
    ConstantOne,
    /// `g = 1 - tau f'(u)` (relaxed Allen–Cahn).
    CattaneoMaxwell,
    Custom(PolynomialDamping),
}

impl Damping {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Damping::ConstantOne => "constant-one",
            Damping::CattaneoMaxwell => "cattaneo-maxwell",
            Damping::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub reaction: Reaction,
    pub damping: Damping,
    pub tau: f64,
    /// Upper admissible bound on `tau`.
    pub tau_m: f64,
    /// Positive lower bound required of the damping.
    pub delta0: f64,
}

impl ModelSpec {
    /// Builds a model with the default `delta0` and, for Cattaneo–Maxwell
    /// damping, `tau_m` equal to the positivity bound `1 / max f'`.
    pub fn new(reaction: Reaction, damping: Damping, tau: f64) -> Result<Self> {
        let tau_m = match damping {
            Damping::CattaneoMaxwell => {
                let m = reaction.max_slope();
                if m > 0.0 {
                    1.0 / m
                } else {
                    f64::INFINITY
                }
            }
            _ => f64::INFINITY,
        };
        Self::with_bounds(reaction, damping, tau, tau_m, DEFAULT_DELTA0)
    }

    pub fn with_bounds(
        reaction: Reaction,
        damping: Damping,
        tau: f64,
        tau_m: f64,
        delta0: f64,
    ) -> Result<Self> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::Domain {
                what: "tau",
                value: tau,
                domain: "[0, inf)",
            });
        }
        if !(tau_m > 0.0) {
            return Err(Error::Domain {
                what: "tau_m",
                value: tau_m,
                domain: "(0, inf]",
            });
        }
        if !(delta0 > 0.0 && delta0.is_finite()) {
            return Err(Error::Domain {
                what: "delta0",
                value: delta0,
                domain: "(0, inf)",
            });
        }
        Ok(Self {
            reaction,
            damping,
            tau,
            tau_m,
            delta0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.reaction.alpha()
    }

    pub fn f(&self, u: f64) -> f64 {
        self.reaction.f(u)
    }

    pub fn df(&self, u: f64) -> f64 {
        self.reaction.df(u)
    }

    /// Damping at the model's own `tau`.
    pub fn g(&self, u: f64) -> f64 {
        self.g_at(u, self.tau)
    }

    pub fn g_at(&self, u: f64, tau: f64) -> f64 {
        match &self.damping {
            Damping::ConstantOne => 1.0,
            Damping::CattaneoMaxwell => 1.0 - tau * self.reaction.df(u),
            Damping::Custom(p) => p.eval(u, tau),
        }
    }

    /// `∂_u g(u, tau)` at the model's `tau`.
    pub fn dg(&self, u: f64) -> f64 {
        match &self.damping {
            Damping::ConstantOne => 0.0,
            Damping::CattaneoMaxwell => -self.tau * self.reaction.d2f(u),
            Damping::Custom(p) => p.eval_du(u, self.tau),
        }
    }

    /// Positivity bound for Cattaneo–Maxwell damping, `1 / max_{[0,1]} f'`.
    /// For the cubic this is `3 / (kappa (1 - alpha + alpha^2))`.
    pub fn cattaneo_positivity_bound(&self) -> f64 {
        let m = self.reaction.max_slope();
        if m > 0.0 {
            1.0 / m
        } else {
            f64::INFINITY
        }
    }

    pub fn validate(self) -> Result<ValidatedModel> {
        self.validate_on(DEFAULT_HYPOTHESIS_GRID)
    }

    pub fn validate_on(self, grid_points: usize) -> Result<ValidatedModel> {
        let report = validate_hypotheses(&self, grid_points)?;
        if report.passed() {
            Ok(ValidatedModel(self))
        } else {
            Err(Error::Hypothesis(Box::new(report)))
        }
    }
}

/// A model whose hypothesis report passed.
#[derive(Debug, Clone)]
pub struct ValidatedModel(ModelSpec);

impl Deref for ValidatedModel {
    type Target = ModelSpec;
    fn deref(&self) -> &ModelSpec {
        &self.0
    }
}

impl ValidatedModel {
    pub fn into_inner(self) -> ModelSpec {
        self.0
    }
}

/// `F(u) = -∫_0^u f(v) dv` by adaptive quadrature.
pub fn eval_potential(model: &ModelSpec, u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain {
            what: "u",
            value: u,
            domain: "[0, 1]",
        });
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    let f = |v: f64| model.f(v);
    match &model.reaction {
        // piecewise cubic: integrate node interval by node interval
        Reaction::Sampled(_) => Ok(-adaptive_simpson(&f, 0.0, u, 1e-14)),
        Reaction::Cubic { .. } => Ok(-adaptive_simpson(&f, 0.0, u, 1e-15)),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    /// Worst value of the checked quantity.
    pub worst: f64,
    /// Point at which the worst value occurs (u, or tau for bound checks).
    pub witness: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HypothesisReport {
    pub clauses: Vec<Clause>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<String> {
        self.clauses
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} (worst {:.6e} at {:.6})", c.name, c.worst, c.witness))
            .collect()
    }
}

/// Checks every clause of the bistability and damping hypotheses on a
/// uniform grid of `grid_points` on `[0, 1]` plus the three roots.
pub fn validate_hypotheses(model: &ModelSpec, grid_points: usize) -> Result<HypothesisReport> {
    if grid_points < 100 {
        return Err(Error::Domain {
            what: "grid_points",
            value: grid_points as f64,
            domain: ">= 100",
        });
    }
    let alpha = model.alpha();
    let mut grid: Vec<f64> = (0..grid_points)
        .map(|k| k as f64 / (grid_points - 1) as f64)
        .collect();
    grid.extend([0.0, alpha, 1.0]);
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut clauses = Vec::new();

    let roots = [0.0, alpha, 1.0];
    let (worst_root, root_at) = roots
        .iter()
        .map(|&u| (model.f(u).abs(), u))
        .fold((0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a });
    clauses.push(Clause {
        name: "H1: f(0) = f(alpha) = f(1) = 0".into(),
        passed: worst_root <= ROOT_TOL,
        worst: worst_root,
        witness: root_at,
    });

    let slopes = [(model.df(0.0), 0.0), (-model.df(alpha), alpha), (model.df(1.0), 1.0)];
    let (worst_slope, slope_at) = slopes
        .iter()
        .copied()
        .fold((f64::NEG_INFINITY, 0.0), |a, b| if b.0 > a.0 { b } else { a });
    clauses.push(Clause {
        name: "H1: f'(0) < 0, f'(1) < 0, f'(alpha) > 0".into(),
        passed: worst_slope < 0.0,
        worst: worst_slope,
        witness: slope_at,
    });

    // sign pattern away from the roots (open conditions)
    let interior = |u: f64| (u - 0.0).abs() > 1e-12 && (u - alpha).abs() > 1e-12 && (u - 1.0).abs() > 1e-12;
    let neg = grid
        .iter()
        .copied()
        .filter(|&u| u > 0.0 && u < alpha && interior(u))
        .map(|u| (model.f(u), u))
        .fold((f64::NEG_INFINITY, 0.0), |a, b| if b.0 > a.0 { b } else { a });
    clauses.push(Clause {
        name: "H1: f < 0 on (0, alpha)".into(),
        passed: neg.0 < 0.0,
        worst: neg.0,
        witness: neg.1,
    });
    let pos = grid
        .iter()
        .copied()
        .filter(|&u| u > alpha && u < 1.0 && interior(u))
        .map(|u| (model.f(u), u))
        .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a });
    clauses.push(Clause {
        name: "H1: f > 0 on (alpha, 1)".into(),
        passed: pos.0 > 0.0,
        worst: pos.0,
        witness: pos.1,
    });

    // damping bounded below on the (u, tau') grid with tau' in [0, tau]
    let taus: Vec<f64> = (0..=10).map(|k| model.tau * k as f64 / 10.0).collect();
    let (gmin, gmin_u) = grid
        .iter()
        .flat_map(|&u| taus.iter().map(move |&t| (u, t)))
        .map(|(u, t)| (model.g_at(u, t), u))
        .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a });
    clauses.push(Clause {
        name: "H2: inf g >= delta0".into(),
        passed: gmin >= model.delta0,
        worst: gmin,
        witness: gmin_u,
    });

    clauses.push(Clause {
        name: "tau < tau_m".into(),
        passed: model.tau < model.tau_m,
        worst: model.tau_m,
        witness: model.tau,
    });

    if model.damping == Damping::CattaneoMaxwell {
        let bound = model.cattaneo_positivity_bound();
        clauses.push(Clause {
            name: "Cattaneo-Maxwell: tau below the positivity bound 1/max f'".into(),
            passed: model.tau < bound,
            worst: bound,
            witness: model.tau,
        });
    }

    Ok(HypothesisReport { clauses })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic(alpha: f64, damping: Damping, tau: f64) -> ModelSpec {
        ModelSpec::new(Reaction::cubic(alpha, 1.0).unwrap(), damping, tau).unwrap()
    }

    #[test]
    fn potential_at_zero_is_exactly_zero() {
        let m = cubic(0.5, Damping::ConstantOne, 0.0);
        assert_eq!(eval_potential(&m, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn equal_wells_for_symmetric_cubic() {
        let m = cubic(0.5, Damping::ConstantOne, 0.0);
        assert!(eval_potential(&m, 1.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn potential_at_one_for_alpha_03() {
        // -(1/12 - 0.3/6) = -1/30
        let m = cubic(0.3, Damping::ConstantOne, 0.0);
        assert!((eval_potential(&m, 1.0).unwrap() + 1.0 / 30.0).abs() < 1e-14);
    }

    #[test]
    fn potential_rejects_out_of_range() {
        let m = cubic(0.3, Damping::ConstantOne, 0.0);
        assert!(matches!(eval_potential(&m, 1.5), Err(Error::Domain { .. })));
        assert!(matches!(eval_potential(&m, -0.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn quadrature_matches_closed_form_potential() {
        for alpha in [0.1, 0.3, 0.5, 0.77] {
            let m = cubic(alpha, Damping::ConstantOne, 0.0);
            for k in 0..1000 {
                let u = k as f64 / 999.0;
                let q = eval_potential(&m, u).unwrap();
                let e = m.reaction.potential_exact(u).unwrap();
                assert!((q - e).abs() < 1e-10, "alpha={alpha} u={u}");
            }
        }
    }

    #[test]
    fn well_difference_closed_form() {
        for alpha in [0.1, 0.25, 0.5, 0.6, 0.9] {
            let m = cubic(alpha, Damping::ConstantOne, 0.0);
            let d = eval_potential(&m, 1.0).unwrap() - eval_potential(&m, 0.0).unwrap();
            assert!((d - (2.0 * alpha - 1.0) / 12.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_one_passes_everything() {
        let r = validate_hypotheses(&cubic(0.3, Damping::ConstantOne, 1.0), 1000).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        assert_eq!(cubic(0.3, Damping::ConstantOne, 1.0).g(0.7), 1.0);
    }

    #[test]
    fn cattaneo_positivity_bound_matches_cubic_formula() {
        for alpha in [0.2, 0.3, 0.5, 0.8] {
            let m = cubic(alpha, Damping::CattaneoMaxwell, 0.0);
            let expected = 3.0 / (1.0 - alpha + alpha * alpha);
            assert!((m.cattaneo_positivity_bound() - expected).abs() < 1e-12);
            let below = cubic(alpha, Damping::CattaneoMaxwell, 0.99 * expected);
            assert!(validate_hypotheses(&below, 1000).unwrap().passed());
        }
    }

    #[test]
    fn cattaneo_tau_five_fails_near_slope_maximiser() {
        let m = cubic(0.3, Damping::CattaneoMaxwell, 5.0);
        let r = validate_hypotheses(&m, 1000).unwrap();
        assert!(!r.passed());
        let h2 = r.clause("H2: inf g >= delta0").unwrap();
        assert!(!h2.passed);
        // f' is maximal at (1 + alpha) / 3
        assert!((h2.witness - 1.3 / 3.0).abs() < 2e-3, "witness {}", h2.witness);
        assert!(matches!(m.validate(), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn cattaneo_reduces_to_constant_one_at_tau_zero() {
        let a = cubic(0.3, Damping::CattaneoMaxwell, 0.0);
        for k in 0..=100 {
            let u = k as f64 / 100.0;
            assert_eq!(a.g(u), 1.0);
            assert_eq!(a.dg(u), 0.0);
        }
    }

    #[test]
    fn cattaneo_is_one_minus_tau_fprime() {
        let m = cubic(0.3, Damping::CattaneoMaxwell, 0.7);
        for k in 0..=10 {
            let u = k as f64 / 10.0;
            assert_eq!(m.g(u), 1.0 - 0.7 * m.df(u));
        }
    }

    #[test]
    fn grid_too_small_is_rejected() {
        assert!(validate_hypotheses(&cubic(0.3, Damping::ConstantOne, 0.0), 10).is_err());
    }

    #[test]
    fn sampled_reaction_reproduces_cubic() {
        let nodes: Vec<f64> = (0..=40).map(|k| k as f64 / 40.0).collect();
        let c = Reaction::cubic(0.3, 1.0).unwrap();
        let s = SampledReaction::new(
            nodes.clone(),
            nodes.iter().map(|&u| c.f(u)).collect(),
            Some(nodes.iter().map(|&u| c.df(u)).collect()),
        )
        .unwrap();
        let r = Reaction::Sampled(s);
        assert!((r.alpha() - 0.3).abs() < 1e-12);
        for k in 0..=100 {
            let u = k as f64 / 100.0;
            assert!((r.f(u) - c.f(u)).abs() < 1e-13);
        }
        let m = ModelSpec::new(r, Damping::ConstantOne, 0.0).unwrap();
        assert!(validate_hypotheses(&m, 1000).unwrap().passed());
    }

    #[test]
    fn custom_damping_polynomial() {
        let d = Damping::Custom(PolynomialDamping {
            coefficients: vec![1.0, 0.5],
            tau_coefficients: vec![0.0, 0.0, 1.0],
        });
        let m = ModelSpec::new(Reaction::cubic(0.3, 1.0).unwrap(), d, 2.0).unwrap();
        assert!((m.g(0.5) - (1.0 + 0.25 + 2.0 * 0.25)).abs() < 1e-15);
        assert!((m.dg(0.5) - (0.5 + 2.0 * 2.0 * 0.5)).abs() < 1e-15);
    }
}
