//! Resolvent checks for stationary fronts (`c = 0`).
//!
//! The principal part of the first-order operator is
//! `L0 (u, v) = (v, tau^{-1} u_xx - u - tau^{-1} b(x) v)`, so that
//! `(lambda - L0)(u, v) = (phi, psi / tau)` reads
//!
//! `lambda u - v = phi`, `tau lambda v - u_xx + tau u + b(x) v = psi`.
//!
//! Eliminating `v = lambda u - phi` gives the scalar problem
//! `(tau lambda^2 + b lambda + tau) u - u_xx = psi + (tau lambda + b) phi`,
//! discretized with second-order central differences and homogeneous
//! Dirichlet ends and solved by the Thomas algorithm.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::solve_tridiagonal;
use crate::model::ValidatedModel;
use crate::profile::{reconstruct_profile, GridSpec};
use crate::quad::linear_fit;

/// Stationary-front data on a uniform grid. Grid end points carry the
/// Dirichlet condition; unknowns live on the interior nodes.
#[derive(Debug, Clone)]
pub struct StationaryFront {
    pub tau: f64,
    pub x: Vec<f64>,
    pub dx: f64,
    pub b: Vec<f64>,
}

impl StationaryFront {
    /// Builds the front of an equal-well model on a grid of spacing `dx`.
    pub fn from_model(model: &ValidatedModel, dx: f64, half_length: Option<f64>) -> Result<Self> {
        if !(model.tau > 0.0) {
            return Err(Error::Unsupported(
                "the resolvent system is stated for tau > 0".into(),
            ));
        }
        let grid = GridSpec {
            half_length,
            spacing: dx,
            ..GridSpec::default()
        };
        let front = reconstruct_profile(model, crate::profile::find_gamma_star(model)?, &grid)?;
        if front.c_star.abs() > 1e-9 {
            return Err(Error::Unsupported(format!(
                "resolvent checks need a stationary front, got c* = {:e}",
                front.c_star
            )));
        }
        Ok(Self {
            tau: model.tau,
            b: front.u.iter().map(|&u| model.g(u)).collect(),
            x: front.xi,
            dx: front.dx,
        })
    }

    /// `(min b, max b)` over the grid.
    pub fn b_bounds(&self) -> (f64, f64) {
        self.b.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// One resolvent solve: `lambda` and the right-hand side on the full grid
/// (end values are ignored: the Dirichlet data are zero).
#[derive(Debug, Clone)]
pub struct ResolventProblem<'a> {
    pub front: &'a StationaryFront,
    pub lambda: Complex64,
    pub phi: Vec<Complex64>,
    pub psi: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct ResolventSolution {
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    /// Max residual of the two discrete equations over the interior nodes.
    pub residual: f64,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Discrete `u_xx` (central, interior nodes; zero at the ends).
fn second_difference(u: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = u.len();
    let mut out = vec![zero(); n];
    for i in 1..n - 1 {
        out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / (h * h);
    }
    out
}

pub fn solve_resolvent(problem: &ResolventProblem) -> Result<ResolventSolution> {
    let fr = problem.front;
    let n = fr.len();
    if problem.phi.len() != n || problem.psi.len() != n {
        return Err(Error::Domain {
            what: "right-hand side length",
            value: problem.phi.len().min(problem.psi.len()) as f64,
            domain: "length of the grid",
        });
    }
    if n < 3 {
        return Err(Error::Domain {
            what: "grid points",
            value: n as f64,
            domain: "[3, inf)",
        });
    }
    let (l, tau, h) = (problem.lambda, fr.tau, fr.dx);
    let m = n - 2;
    let off = Complex64::new(-1.0 / (h * h), 0.0);
    let mut lower = vec![off; m];
    let mut upper = vec![off; m];
    lower[0] = zero();
    upper[m - 1] = zero();
    let diag: Vec<Complex64> = (1..n - 1)
        .map(|i| tau * l * l + fr.b[i] * l + tau + 2.0 / (h * h))
        .collect();
    let rhs: Vec<Complex64> = (1..n - 1)
        .map(|i| problem.psi[i] + (tau * l + fr.b[i]) * problem.phi[i])
        .collect();
    let interior = solve_tridiagonal(&lower, &diag, &upper, &rhs).ok_or(Error::Singular(l))?;
    let mut u = vec![zero(); n];
    u[1..n - 1].copy_from_slice(&interior);
    let v: Vec<Complex64> = (0..n)
        .map(|i| if i == 0 || i == n - 1 { zero() } else { l * u[i] - problem.phi[i] })
        .collect();
    let uxx = second_difference(&u, h);
    let mut residual = 0.0f64;
    for i in 1..n - 1 {
        let r1 = l * u[i] - v[i] - problem.phi[i];
        let r2 = tau * l * v[i] - uxx[i] + tau * u[i] + fr.b[i] * v[i] - problem.psi[i];
        residual = residual.max(r1.norm()).max(r2.norm());
    }
    if !residual.is_finite() {
        return Err(Error::Singular(l));
    }
    Ok(ResolventSolution { u, v, residual })
}

/// Discrete `L^2` norm with weight `h` on every node.
pub fn l2(w: &[Complex64], h: f64) -> f64 {
    (h * w.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
}

/// Discrete `L^2` norm of the forward difference quotient.
pub fn l2_derivative(w: &[Complex64], h: f64) -> f64 {
    (h * w.windows(2).map(|p| ((p[1] - p[0]) / h).norm_sqr()).sum::<f64>()).sqrt()
}

/// `||(u, v)||^2 = ||u||^2 + tau^{-1} ||u_x||^2 + ||v||^2`.
pub fn x_norm(u: &[Complex64], v: &[Complex64], tau: f64, h: f64) -> f64 {
    (l2(u, h).powi(2) + l2_derivative(u, h).powi(2) / tau + l2(v, h).powi(2)).sqrt()
}

/// `Re <w, L0 w>` in the inner product of [`x_norm`] next to its predicted
/// value `-tau^{-1} <v, b v>`, for `w = (u, v)` vanishing at the ends.
pub fn dissipativity(front: &StationaryFront, u: &[Complex64], v: &[Complex64]) -> (f64, f64) {
    let (h, tau) = (front.dx, front.tau);
    let n = u.len();
    let uxx = second_difference(u, h);
    let l0v: Vec<Complex64> = (0..n)
        .map(|i| uxx[i] / tau - u[i] - front.b[i] * v[i] / tau)
        .collect();
    let inner = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        h * a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>()
    };
    let dx = |w: &[Complex64]| -> Vec<Complex64> { w.windows(2).map(|p| (p[1] - p[0]) / h).collect() };
    let form = inner(u, v) + inner(&dx(u), &dx(v)) / tau + inner(v, &l0v);
    let bv: Vec<Complex64> = v.iter().zip(&front.b).map(|(z, b)| z * b).collect();
    (form.re, -inner(v, &bv).re / tau)
}

/// Grid-independent smooth random right-hand sides: Gaussian bumps of width
/// `BUMP_WIDTH` on a fixed lattice of spacing `BUMP_SPACING`, with complex
/// standard-normal weights.
pub const BUMP_SPACING: f64 = 0.5;
pub const BUMP_WIDTH: f64 = 0.75;

/// Draws `(phi, psi)` on the grid of `front`; the bumps cover the middle
/// half of the domain so the Dirichlet ends see negligible data.
pub fn random_rhs(front: &StationaryFront, rng: &mut ChaCha8Rng) -> (Vec<Complex64>, Vec<Complex64>) {
    let half = 0.5 * front.x.last().unwrap().abs().min(front.x[0].abs());
    let k = (half / BUMP_SPACING).floor() as i64;
    let mut draw = || -> Vec<Complex64> {
        let weights: Vec<(f64, Complex64)> = (-k..=k)
            .map(|j| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                (j as f64 * BUMP_SPACING, Complex64::new(re, im))
            })
            .collect();
        let n = front.len();
        front
            .x
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                if i == 0 || i == n - 1 {
                    return zero();
                }
                weights
                    .iter()
                    .map(|&(c, w)| w * (-(x - c).powi(2) / (2.0 * BUMP_WIDTH * BUMP_WIDTH)).exp())
                    .sum()
            })
            .collect()
    };
    let phi = draw();
    let psi = draw();
    (phi, psi)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolventRecord {
    pub re_lambda: f64,
    pub im_lambda: f64,
    pub ratio_vuprime: f64,
    pub ratio_uell2: f64,
    pub norm_u: f64,
    pub norm_ux: f64,
    pub norm_v: f64,
    pub norm_phi: f64,
    pub norm_phix: f64,
    pub norm_psi: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ResolventOptions {
    pub theta0: f64,
    pub re_max: f64,
    pub im_max: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for ResolventOptions {
    fn default() -> Self {
        Self {
            theta0: 0.5,
            re_max: 20.0,
            im_max: 20.0,
            trials: 8,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolventReport {
    pub theta0: f64,
    pub fitted_m: f64,
    pub seed: u64,
    pub trials: usize,
    pub b_min: f64,
    pub b_max: f64,
    /// Worst record per sampled `lambda` (max over trials of each ratio).
    pub records: Vec<ResolventRecord>,
    pub max_ratio_vuprime: f64,
    pub max_ratio_uell2: f64,
    /// Log-log slope of the `u`-ratio against real `lambda` in `[M', 20]`
    /// with `M' = max(M, 5)`; close to `-1` for `1/Re lambda` decay.
    pub decay_slope: f64,
}

/// Smallest sampled real `lambda > 0` beyond which every sampled real
/// `lambda` gives a diagonally dominant system with margin at least one
/// (so that `||A^{-1}||_inf <= 1` uniformly).
pub fn fit_m(front: &StationaryFront, re_max: f64) -> f64 {
    let (b_min, _) = front.b_bounds();
    let margin = |l: f64| front.tau * l * l + b_min * l + front.tau;
    let samples: Vec<f64> = (1..=(4.0 * re_max) as usize).map(|k| 0.25 * k as f64).collect();
    let mut m = re_max;
    for &l in samples.iter().rev() {
        if margin(l) >= 1.0 {
            m = l;
        } else {
            break;
        }
    }
    m
}

/// Sampling set `{Re in [0, re_max], |Im| in [theta0, im_max]}` together
/// with the real segment `[M, re_max]`; `lambda = 0` never occurs.
pub fn lambda_samples(opts: &ResolventOptions, m: f64) -> Vec<Complex64> {
    let re_grid: Vec<f64> = (0..=8).map(|k| opts.re_max * k as f64 / 8.0).collect();
    let mut im_grid = vec![opts.theta0, 1.0, 2.0, 5.0, 10.0, opts.im_max];
    im_grid.retain(|&v| v >= opts.theta0 && v <= opts.im_max);
    im_grid.dedup();
    let mut out = Vec::new();
    for &re in &re_grid {
        for &im in &im_grid {
            out.push(Complex64::new(re, im));
            out.push(Complex64::new(re, -im));
        }
    }
    let n_real = 8;
    for k in 0..=n_real {
        let re = m + (opts.re_max - m) * k as f64 / n_real as f64;
        if re > 0.0 {
            out.push(Complex64::new(re, 0.0));
        }
    }
    out
}

/// Worst-case ratios over `trials` random right-hand sides at each `lambda`.
pub fn ratios_at(
    front: &StationaryFront,
    lambdas: &[Complex64],
    trials: usize,
    seed: u64,
) -> Result<Vec<ResolventRecord>> {
    let h = front.dx;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rhs: Vec<_> = (0..trials.max(1)).map(|_| random_rhs(front, &mut rng)).collect();
    lambdas
        .par_iter()
        .map(|&lambda| {
            let mut worst: Option<ResolventRecord> = None;
            for (phi, psi) in &rhs {
                let sol = solve_resolvent(&ResolventProblem {
                    front,
                    lambda,
                    phi: phi.clone(),
                    psi: psi.clone(),
                })?;
                let rec = ResolventRecord {
                    re_lambda: lambda.re,
                    im_lambda: lambda.im,
                    norm_u: l2(&sol.u, h),
                    norm_ux: l2_derivative(&sol.u, h),
                    norm_v: l2(&sol.v, h),
                    norm_phi: l2(phi, h),
                    norm_phix: l2_derivative(phi, h),
                    norm_psi: l2(psi, h),
                    residual: sol.residual,
                    ratio_vuprime: 0.0,
                    ratio_uell2: 0.0,
                };
                let rec = ResolventRecord {
                    ratio_vuprime: (rec.norm_v + rec.norm_ux) / (rec.norm_psi + rec.norm_phix + rec.norm_u),
                    ratio_uell2: rec.norm_u / (rec.norm_phi + rec.norm_psi),
                    ..rec
                };
                worst = Some(match worst {
                    None => rec,
                    Some(w) => ResolventRecord {
                        ratio_vuprime: w.ratio_vuprime.max(rec.ratio_vuprime),
                        ratio_uell2: w.ratio_uell2.max(rec.ratio_uell2),
                        residual: w.residual.max(rec.residual),
                        ..w
                    },
                });
            }
            Ok(worst.expect("at least one trial"))
        })
        .collect()
}

/// Samples the admissible set, solves with random right-hand sides, and
/// reports the empirical constants of the two resolvent bounds.
pub fn verify_bounds(front: &StationaryFront, opts: &ResolventOptions) -> Result<ResolventReport> {
    let m = fit_m(front, opts.re_max);
    let lambdas = lambda_samples(opts, m);
    let records = ratios_at(front, &lambdas, opts.trials, opts.seed)?;
    for r in &records {
        if !(r.ratio_vuprime.is_finite() && r.ratio_uell2.is_finite()) {
            return Err(Error::Singular(Complex64::new(r.re_lambda, r.im_lambda)));
        }
    }
    let real: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.im_lambda == 0.0 && r.re_lambda >= m.max(5.0))
        .map(|r| (r.re_lambda.ln(), r.ratio_uell2.ln()))
        .collect();
    let decay_slope = if real.len() >= 2 {
        let (x, y): (Vec<f64>, Vec<f64>) = real.into_iter().unzip();
        linear_fit(&x, &y).0
    } else {
        f64::NAN
    };
    let (b_min, b_max) = front.b_bounds();
    Ok(ResolventReport {
        theta0: opts.theta0,
        fitted_m: m,
        seed: opts.seed,
        trials: opts.trials,
        b_min,
        b_max,
        max_ratio_vuprime: records.iter().map(|r| r.ratio_vuprime).fold(0.0, f64::max),
        max_ratio_uell2: records.iter().map(|r| r.ratio_uell2).fold(0.0, f64::max),
        records,
        decay_slope,
    })
}
