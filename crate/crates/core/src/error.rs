use num_complex::Complex64;

use crate::model::HypothesisReport;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("structural hypotheses fail: {}", .0.failures().join("; "))]
    Hypothesis(Box<HypothesisReport>),

    #[error("integrator failure: {0}")]
    Integrator(String),

    #[error("no sign change of the shooting mismatch found for |gamma| <= {gamma_max}")]
    Bracketing { gamma_max: f64 },

    #[error("lambda = {0} lies outside the consistent-splitting region Re lambda > -chi0")]
    OutsideRegion(Complex64),

    #[error("internal consistency violated: {0}")]
    Consistency(String),

    #[error("consistent splitting violated at lambda = {lambda}: margin {margin:e} below floor {floor:e}")]
    Splitting {
        lambda: Complex64,
        margin: f64,
        floor: f64,
    },

    #[error("contour passes through (or too close to) a zero: min |D| = {min_abs:e}, floor {floor:e}")]
    ContourThroughZero { min_abs: f64, floor: f64 },

    #[error("argument step {step:.3} rad still >= pi/2 after refining the contour to {points} points")]
    Resolution { step: f64, points: usize },

    #[error("overflow while integrating the decaying solution at lambda = {0}; increase L or shrink the contour")]
    Overflow(Complex64),

    #[error("singular system at lambda = {0}: numerically in or near the spectrum")]
    Singular(Complex64),

    #[error("candidate is not admissible: {0}")]
    Admissibility(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("time step {dt:e} violates the CFL bound {max:e}")]
    Cfl { dt: f64, max: f64 },

    #[error("level set left the computational domain at t = {0}")]
    DomainTooSmall(f64),

    #[error("perturbation grew by a factor {0:.2} (instability)")]
    Instability(f64),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input or I/O).
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::Domain { .. }
                | Error::InvalidModel(_)
                | Error::Hypothesis(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
