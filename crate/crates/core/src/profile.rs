//! Front construction: shooting for the normalized speed `gamma*`, the map to
//! the physical speed `c*`, reconstruction of the profile on a uniform grid,
//! and the exponential decay rates at both rest states.
//!
//! In the normalized coordinate `eta = xi / sqrt(1 - c^2 tau)` the profile
//! solves `V'' + gamma g(V) V' + f(V) = 0`. Writing `omega = V'` as a function
//! of `V` gives the scalar trajectory equation
//! `d omega / dV = -f(V)/omega - gamma g(V)`, which is integrated from each
//! saddle towards the middle root. The two traces meet at `V = alpha` exactly
//! when `gamma = gamma*`.
//!
//! Traces are parameterized by the distance `r` to their rest state
//! (`V = r` from zero, `V = 1 - r` from one) so both tails keep full relative
//! precision.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelSpec, ValidatedModel};
use crate::ode::{fixed_step_samples, integrate, Control, Tolerances};
use crate::quad::{linear_fit, second_derivative4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// Unstable manifold of `(0, 0)`, traced for `V` in `[0, alpha]`.
    UnstableFromZero,
    /// Stable manifold of `(1, 0)`, traced for `V` in `[alpha, 1]`.
    StableFromOne,
}

impl Side {
    fn sigma(self) -> f64 {
        match self {
            Side::UnstableFromZero => 1.0,
            Side::StableFromOne => -1.0,
        }
    }

    fn root(self) -> f64 {
        match self {
            Side::UnstableFromZero => 0.0,
            Side::StableFromOne => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ShootingOptions {
    /// Take-off distance from the saddle along its eigenvector.
    pub epsilon: f64,
    pub tol: Tolerances,
    /// Bisection stops when the bracket is narrower than this.
    pub gamma_tol: f64,
    /// Maximum number of bracket doublings.
    pub max_doublings: u32,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            epsilon: 1e-8,
            tol: Tolerances::new(1e-10, 1e-30),
            gamma_tol: 1e-10,
            max_doublings: 30,
        }
    }
}

/// Local expansion `omega = k r + q r^2` of a saddle manifold in the distance
/// `r` from its rest state.
#[derive(Debug, Clone, Copy)]
struct LocalManifold {
    k: f64,
    q: f64,
}

impl LocalManifold {
    fn new(model: &ModelSpec, gamma: f64, side: Side) -> Self {
        let root = side.root();
        let sigma = side.sigma();
        let f1 = model.df(root);
        let f2 = 0.5 * model.reaction.d2f(root);
        let g0 = model.g(root);
        let g1 = model.dg(root);
        let sq = (gamma * gamma * g0 * g0 - 4.0 * f1).sqrt();
        // positive root of k^2 + sigma gamma g0 k + f1 = 0, evaluated without
        // cancellation
        let k = if sigma * gamma * g0 <= 0.0 {
            0.5 * (-sigma * gamma * g0 + sq)
        } else {
            -2.0 * f1 / (sigma * gamma * g0 + sq)
        };
        let q = -(sigma * f2 + gamma * g1 * k) / (k + sq);
        Self { k, q }
    }

    fn omega(&self, r: f64) -> f64 {
        r * (self.k + self.q * r)
    }
}

/// Saddle eigenvalue `mu_0^+` of the trajectory linearization at `(0, 0)`.
pub fn saddle_rate_zero(model: &ModelSpec, gamma: f64) -> f64 {
    LocalManifold::new(model, gamma, Side::UnstableFromZero).k
}

/// Saddle eigenvalue `mu_1^-` (negative) at `(1, 0)`.
pub fn saddle_rate_one(model: &ModelSpec, gamma: f64) -> f64 {
    -LocalManifold::new(model, gamma, Side::StableFromOne).k
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifoldTrace {
    pub gamma: f64,
    pub side: Side,
    /// `omega` at `V = alpha` (zero when the trace died on the way).
    pub terminal_w: f64,
    /// Set when `omega` collapsed to zero before reaching `alpha`.
    pub hit_middle_root: bool,
    /// `(V, omega)` samples ordered from the saddle towards `alpha`.
    pub samples: Vec<(f64, f64)>,
}

/// Integrates the trajectory equation from the saddle of `side` to
/// `V = alpha`, starting `epsilon` away along the local manifold.
pub fn trace_manifold(
    model: &ValidatedModel,
    gamma: f64,
    side: Side,
    epsilon: f64,
) -> Result<ManifoldTrace> {
    let opts = ShootingOptions {
        epsilon,
        ..ShootingOptions::default()
    };
    trace_manifold_with(model, gamma, side, &opts)
}

pub fn trace_manifold_with(
    model: &ModelSpec,
    gamma: f64,
    side: Side,
    opts: &ShootingOptions,
) -> Result<ManifoldTrace> {
    let eps = opts.epsilon;
    if !(eps > 1e-10 && eps < 1e-3) {
        return Err(Error::Domain {
            what: "epsilon",
            value: eps,
            domain: "(1e-10, 1e-3)",
        });
    }
    if !gamma.is_finite() {
        return Err(Error::Domain {
            what: "gamma",
            value: gamma,
            domain: "finite",
        });
    }
    let alpha = model.alpha();
    let root = side.root();
    let sigma = side.sigma();
    let r_end = (alpha - root).abs();
    let local = LocalManifold::new(model, gamma, side);

    // d omega / dr = sigma (-f(V)/omega - gamma g(V)), V = root + sigma r
    let rhs = |r: f64, y: &[f64; 1]| -> [f64; 1] {
        let v = root + sigma * r;
        [sigma * (-model.f(v) / y[0] - gamma * model.g(v))]
    };

    let w0 = local.omega(eps);
    let mut r_samples = vec![[eps, w0, rhs(eps, &[w0])[0]]];
    let mut collapsed = false;
    let floor = 1e-14 * w0;
    let outcome = integrate(rhs, eps, [w0], r_end, &opts.tol, |step| {
        let h = step.t1 - step.t0;
        for j in 1..=4 {
            let t = if j == 4 { step.t1 } else { step.t0 + h * j as f64 / 4.0 };
            let y = if j == 4 { step.y1 } else { step.eval(t) };
            if y[0] <= floor {
                collapsed = true;
                return Control::Stop;
            }
            r_samples.push([t, y[0], rhs(t, &y)[0]]);
        }
        Control::Continue
    });
    let terminal_w = match outcome {
        Ok(out) if !collapsed => out.y[0],
        Ok(_) => 0.0,
        // the trace can only fail by steepening as omega collapses to zero
        Err(Error::Integrator(_)) if r_samples.last().map_or(false, |s| s[1] < 1e-6) => {
            collapsed = true;
            0.0
        }
        Err(e) => return Err(e),
    };
    let samples = r_samples
        .iter()
        .map(|s| (root + sigma * s[0], s[1]))
        .collect();
    Ok(ManifoldTrace {
        gamma,
        side,
        terminal_w,
        hit_middle_root: collapsed,
        samples,
    })
}

/// `h(gamma) = W_1(gamma) - W_0(gamma)`, nondecreasing in `gamma`.
pub fn shooting_mismatch(model: &ModelSpec, gamma: f64, opts: &ShootingOptions) -> Result<f64> {
    let w1 = trace_manifold_with(model, gamma, Side::StableFromOne, opts)?.terminal_w;
    let w0 = trace_manifold_with(model, gamma, Side::UnstableFromZero, opts)?.terminal_w;
    Ok(w1 - w0)
}

pub fn find_gamma_star(model: &ValidatedModel) -> Result<f64> {
    find_gamma_star_with(model, &ShootingOptions::default())
}

/// Brackets the zero of the monotone mismatch by expanding a symmetric
/// interval, then bisects and finishes with one secant step.
pub fn find_gamma_star_with(model: &ModelSpec, opts: &ShootingOptions) -> Result<f64> {
    let kappa_scale = match model.reaction {
        crate::model::Reaction::Cubic { kappa, .. } => (2.0 / kappa).sqrt(),
        _ => 1.0,
    };
    let mut half = 2.0 * kappa_scale.max(1.0);
    let h = |g: f64| shooting_mismatch(model, g, opts);
    let (mut lo, mut hi, mut h_lo, mut h_hi);
    let mut doublings = 0;
    loop {
        lo = -half;
        hi = half;
        h_lo = h(lo)?;
        h_hi = h(hi)?;
        if h_lo <= 0.0 && h_hi >= 0.0 {
            break;
        }
        doublings += 1;
        if doublings > opts.max_doublings {
            return Err(Error::Bracketing { gamma_max: half });
        }
        half *= 2.0;
    }
    if h_lo == 0.0 {
        return Ok(lo);
    }
    if h_hi == 0.0 {
        return Ok(hi);
    }
    while hi - lo > opts.gamma_tol {
        let mid = 0.5 * (lo + hi);
        let hm = h(mid)?;
        if hm == 0.0 {
            return Ok(mid);
        }
        if hm < 0.0 {
            lo = mid;
            h_lo = hm;
        } else {
            hi = mid;
            h_hi = hm;
        }
    }
    let secant = lo - h_lo * (hi - lo) / (h_hi - h_lo);
    Ok(if secant.is_finite() && secant >= lo && secant <= hi {
        secant
    } else {
        0.5 * (lo + hi)
    })
}

/// `c = gamma / sqrt(1 + tau gamma^2)`; always satisfies `c^2 tau < 1`.
pub fn speed_from_gamma(gamma: f64, tau: f64) -> f64 {
    gamma / (1.0 + tau * gamma * gamma).sqrt()
}

/// Inverse of [`speed_from_gamma`] for `c^2 tau < 1`.
pub fn gamma_from_speed(c: f64, tau: f64) -> f64 {
    c / (1.0 - c * c * tau).sqrt()
}

/// Decay rates `(eta_minus, eta_plus)` of the profile towards 0 at `-inf`
/// and towards 1 at `+inf`, from the saddle eigenvalues of
/// `(1 - c^2 tau) U'' + c b U' + a U = 0`.
pub fn decay_rates(model: &ModelSpec, c: f64) -> (f64, f64) {
    let s2 = 1.0 - c * c * model.tau;
    let rates = |u: f64| {
        let a = model.df(u).abs();
        let b = model.g(u);
        let disc = (c * c * b * b + 4.0 * a * s2).sqrt();
        // mu_2 (positive) and mu_1 (negative), each without cancellation
        let (mu2, mu1) = if c * b >= 0.0 {
            (2.0 * a / (c * b + disc), -(c * b + disc) / (2.0 * s2))
        } else {
            ((-c * b + disc) / (2.0 * s2), -2.0 * a / (disc - c * b))
        };
        (mu2, mu1)
    };
    let (mu2_minus, _) = rates(0.0);
    let (_, mu1_plus) = rates(1.0);
    (mu2_minus, mu1_plus.abs())
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    /// Half-length `L`; defaults to `12 / min(eta_minus, eta_plus)`.
    pub half_length: Option<f64>,
    /// Target spacing; the actual spacing divides `L` evenly.
    pub spacing: f64,
    /// Position where `U = alpha`.
    pub pin: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            half_length: None,
            spacing: 0.02,
            pin: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrontProfile {
    pub gamma_star: f64,
    pub c_star: f64,
    pub tau: f64,
    pub alpha: f64,
    /// Uniform grid `pin - L .. pin + L` with an odd number of points.
    pub xi: Vec<f64>,
    pub dx: f64,
    pub half_length: f64,
    /// Index of the pinned point (`U = alpha`).
    pub center: usize,
    pub u: Vec<f64>,
    pub u_x: Vec<f64>,
    pub u_xx: Vec<f64>,
    /// `1 - U`, carried separately so the upper tail keeps relative accuracy.
    pub one_minus_u: Vec<f64>,
    pub eta_minus: f64,
    pub eta_plus: f64,
    /// Non-fatal notes, e.g. a truncated domain.
    pub warnings: Vec<String>,
}

impl FrontProfile {
    /// `sqrt(1 - c^2 tau)`, the factor between `xi` and `eta`.
    pub fn stretch(&self) -> f64 {
        1.0 / (1.0 + self.tau * self.gamma_star * self.gamma_star).sqrt()
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }
}

/// Shoots for `gamma*` and reconstructs the front on the default grid.
pub fn compute_front(model: &ValidatedModel) -> Result<FrontProfile> {
    let gamma = find_gamma_star(model)?;
    reconstruct_profile(model, gamma, &GridSpec::default())
}

pub fn reconstruct_profile(
    model: &ValidatedModel,
    gamma_star: f64,
    grid: &GridSpec,
) -> Result<FrontProfile> {
    reconstruct_profile_with(model, gamma_star, grid, &ShootingOptions::default())
}

pub fn reconstruct_profile_with(
    model: &ModelSpec,
    gamma_star: f64,
    grid: &GridSpec,
    opts: &ShootingOptions,
) -> Result<FrontProfile> {
    if !(grid.spacing > 0.0) {
        return Err(Error::Domain {
            what: "spacing",
            value: grid.spacing,
            domain: "(0, inf)",
        });
    }
    let tau = model.tau;
    let alpha = model.alpha();
    let c0 = speed_from_gamma(gamma_star, tau);
    let (eta_minus, eta_plus) = decay_rates(model, c0);
    let requested = grid
        .half_length
        .unwrap_or(12.0 / eta_minus.min(eta_plus));
    if !(requested > 0.0 && requested.is_finite()) {
        return Err(Error::Domain {
            what: "half_length",
            value: requested,
            domain: "(0, inf)",
        });
    }
    let half_points = ((requested / grid.spacing).round() as usize).max(4);
    let dx = requested / half_points as f64;

    let gamma = polish_gamma(model, gamma_star, opts)?;
    let c = speed_from_gamma(gamma, tau);
    let stretch = 1.0 / (1.0 + tau * gamma * gamma).sqrt();
    let d_eta = dx / stretch;
    let left = half_orbit(model, gamma, Side::UnstableFromZero, half_points, d_eta)?;
    let right = half_orbit(model, gamma, Side::StableFromOne, half_points, d_eta)?;

    // assemble left to right; rows are (distance to the rest state, V')
    let mut u = Vec::with_capacity(2 * half_points + 1);
    let mut omu = Vec::with_capacity(2 * half_points + 1);
    let mut u_x = Vec::with_capacity(2 * half_points + 1);
    for row in left.iter().take(half_points) {
        u.push(row[0]);
        omu.push(1.0 - row[0]);
        u_x.push(row[1] / stretch);
    }
    u.push(alpha);
    omu.push(1.0 - alpha);
    u_x.push(0.5 * (left[half_points][1] + right[half_points][1]) / stretch);
    for row in right.iter().take(half_points).rev() {
        u.push(1.0 - row[0]);
        omu.push(row[0]);
        u_x.push(row[1] / stretch);
    }

    // keep the largest symmetric window on which U is strictly increasing
    // and strictly inside (0, 1)
    let center = half_points;
    let ok = |i: usize| u[i] > 0.0 && omu[i] > 0.0 && u[i] < 1.0 && u_x[i] > 0.0;
    let mut keep = 0;
    while keep < half_points {
        let (l, r) = (center - keep - 1, center + keep + 1);
        if !(ok(l) && ok(r) && u[l] < u[l + 1] && u[r] > u[r - 1]) {
            break;
        }
        keep += 1;
    }
    let mut warnings = Vec::new();
    if keep < half_points {
        let achieved = keep as f64 * dx;
        warnings.push(format!(
            "domain truncated to L = {achieved:.6} (requested {requested:.6}): tail reached rounding level"
        ));
        if keep < 4 {
            return Err(Error::Integrator(
                "profile collapsed to a handful of points".into(),
            ));
        }
    }
    let range = center - keep..=center + keep;
    let u: Vec<f64> = u[range.clone()].to_vec();
    let one_minus_u: Vec<f64> = omu[range.clone()].to_vec();
    let u_x: Vec<f64> = u_x[range].to_vec();
    let s2 = stretch * stretch;
    let u_xx: Vec<f64> = u
        .iter()
        .zip(&u_x)
        .map(|(&uu, &ux)| -(c * model.g(uu) * ux + model.f(uu)) / s2)
        .collect();
    let xi: Vec<f64> = (0..u.len())
        .map(|i| grid.pin + (i as f64 - keep as f64) * dx)
        .collect();

    Ok(FrontProfile {
        gamma_star: gamma,
        c_star: c,
        tau,
        alpha,
        xi,
        dx,
        half_length: keep as f64 * dx,
        center: keep,
        u,
        u_x,
        u_xx,
        one_minus_u,
        eta_minus,
        eta_plus,
        warnings,
    })
}

/// Tolerances of the orbit integrations behind the profile.
fn orbit_tol() -> Tolerances {
    Tolerances::new(1e-13, 1e-300)
}

/// Right-hand side of the profile system in the state `(r, P)`, where `r`
/// is the distance to the rest state of `side` and `P = V' > 0`.
fn orbit_rhs<'a>(model: &'a ModelSpec, gamma: f64, side: Side) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] + 'a {
    let (root, sigma) = (side.root(), side.sigma());
    let f1 = model.df(root);
    let f2 = 0.5 * model.reaction.d2f(root);
    move |_, y| {
        let r = y[0];
        let v = root + sigma * r;
        // near the root `v` has lost the low bits of `r`: use the Taylor
        // expansion in `r` (relative error below 1e-10 for r < 1e-5)
        let f = if r < 1e-5 {
            sigma * r * (f1 + sigma * f2 * r)
        } else {
            model.f(v)
        };
        [sigma * y[1], -gamma * model.g(v) * y[1] - f]
    }
}

/// Direction of integration: away from the saddle along its manifold.
fn orbit_direction(side: Side) -> f64 {
    side.sigma()
}

/// Starts at distance `eps` on the local manifold and integrates until
/// `V = alpha`. Returns the elapsed `|eta|` and the state there.
fn orbit_to_alpha(model: &ModelSpec, gamma: f64, side: Side, eps: f64) -> Result<(f64, [f64; 2])> {
    let r_end = (model.alpha() - side.root()).abs();
    let local = LocalManifold::new(model, gamma, side);
    let dir = orbit_direction(side);
    let y0 = [eps, local.omega(eps)];
    let rhs = orbit_rhs(model, gamma, side);
    let mut hit: Option<(f64, f64, [f64; 2])> = None;
    let horizon = dir * 1e6;
    integrate(&rhs, 0.0, y0, horizon, &orbit_tol(), |step| {
        if step.y1[0] >= r_end {
            // bisect the dense output for the crossing
            let (mut lo, mut hi) = (step.t0, step.t1);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if step.eval(mid)[0] < r_end {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            hit = Some((step.t0, lo, step.y0));
            return Control::Stop;
        }
        if step.y1[1] <= 0.0 {
            return Control::Stop;
        }
        Control::Continue
    })?;
    let (t_prev, mut t_hit, y_prev) = hit.ok_or_else(|| {
        Error::Integrator("orbit did not reach the middle root".into())
    })?;
    // Newton corrections with exact re-integration from the last step start
    for _ in 0..3 {
        let y = if t_hit == t_prev {
            y_prev
        } else {
            integrate(&rhs, t_prev, y_prev, t_hit, &orbit_tol(), |_| Control::Continue)?.y
        };
        let dr = dir * rhs(t_hit, &y)[0];
        t_hit += dir * (r_end - y[0]) / dr;
    }
    let y = integrate(&rhs, t_prev, y_prev, t_hit, &orbit_tol(), |_| Control::Continue)?.y;
    Ok((t_hit.abs(), y))
}

/// `P(alpha)` from one to `P(alpha)` from zero; vanishes at `gamma*`.
fn orbit_mismatch(model: &ModelSpec, gamma: f64) -> Result<f64> {
    let (_, zero) = orbit_to_alpha(model, gamma, Side::UnstableFromZero, 1e-8)?;
    let (_, one) = orbit_to_alpha(model, gamma, Side::StableFromOne, 1e-8)?;
    Ok(one[1] - zero[1])
}

/// Secant refinement of `gamma*` against the orbit mismatch so the two
/// halves of the profile join without a kink in `U_x`.
fn polish_gamma(model: &ModelSpec, gamma: f64, opts: &ShootingOptions) -> Result<f64> {
    let step = 10.0 * opts.gamma_tol.max(1e-12);
    let (mut g0, mut g1) = (gamma, gamma + step);
    let (mut m0, mut m1) = (orbit_mismatch(model, g0)?, orbit_mismatch(model, g1)?);
    for _ in 0..6 {
        if m1 == m0 || m1 == 0.0 {
            break;
        }
        let g2 = g1 - m1 * (g1 - g0) / (m1 - m0);
        if (g2 - g1).abs() <= 1e-15 * (1.0 + g1.abs()) {
            g1 = g2;
            break;
        }
        (g0, m0) = (g1, m1);
        g1 = g2;
        m1 = orbit_mismatch(model, g1)?;
    }
    // never wander beyond the shooting bracket
    if (g1 - gamma).abs() > 100.0 * step || !g1.is_finite() {
        return Ok(gamma);
    }
    Ok(g1)
}

/// Samples one half of the profile on the grid `|eta| = k d_eta`,
/// `k = n, ..., 0`, ordered from the outer end (index 0) to the middle
/// root (index `n`). Each row is `(distance to the rest state, V')`.
fn half_orbit(model: &ModelSpec, gamma: f64, side: Side, n: usize, d_eta: f64) -> Result<Vec<[f64; 2]>> {
    let span = n as f64 * d_eta;
    let local = LocalManifold::new(model, gamma, side);
    let r_end = (model.alpha() - side.root()).abs();
    let dir = orbit_direction(side);
    let rhs = orbit_rhs(model, gamma, side);
    // take off well below the tail value at the outer grid point
    let mut eps = (1e-3 * r_end * (-local.k * span).exp()).clamp(1e-280, 1e-8);
    for _ in 0..40 {
        let (t_hit, _) = orbit_to_alpha(model, gamma, side, eps)?;
        if t_hit > span + d_eta {
            let y0 = [eps, local.omega(eps)];
            let start = integrate(&rhs, 0.0, y0, dir * (t_hit - span), &orbit_tol(), |_| Control::Continue)?;
            let substeps = (d_eta / 0.005).ceil().max(4.0) as usize;
            return Ok(fixed_step_samples(&rhs, start.t, start.y, dir * d_eta, substeps, n));
        }
        eps *= 1e-4;
        if eps < 1e-290 {
            break;
        }
    }
    Err(Error::Integrator(
        "half-length too large for the profile tail to be resolved".into(),
    ))
}

/// Max over interior grid points of `|(1 - c^2 tau) U_xx + c g U_x + f|`
/// with `U_xx` from fourth-order differences of the sampled `U`.
pub fn profile_residual(model: &ModelSpec, front: &FrontProfile) -> f64 {
    let s2 = front.stretch().powi(2);
    let c = front.c_star;
    second_derivative4(&front.u, front.dx)
        .iter()
        .enumerate()
        .filter_map(|(i, d2)| {
            d2.map(|d2| {
                let u = front.u[i];
                (s2 * d2 + c * model.g(u) * front.u_x[i] + model.f(u)).abs()
            })
        })
        .fold(0.0, f64::max)
}

/// Log-slope fits of the tails `U` (left) and `1 - U` (right) over the outer
/// tenth of each half-grid, returned as positive rates.
pub fn fitted_tail_rates(front: &FrontProfile) -> (f64, f64) {
    let n = front.len();
    let w = (front.center / 10).max(3);
    let (xl, yl): (Vec<f64>, Vec<f64>) = (0..w).map(|i| (front.xi[i], front.u[i].ln())).unzip();
    let (xr, yr): (Vec<f64>, Vec<f64>) = (n - w..n)
        .map(|i| (front.xi[i], front.one_minus_u[i].ln()))
        .unzip();
    (linear_fit(&xl, &yl).0, -linear_fit(&xr, &yr).0)
}

/// Min-max bracket of `gamma*` from an admissible candidate `W(eta)` given by
/// samples of `W`, `W'` and `W''`: the infimum and supremum over the samples
/// of `-(W'' + f(W)) / (g(W) W')`.
pub fn minmax_bracket(model: &ModelSpec, w: &[f64], dw: &[f64], d2w: &[f64]) -> Result<(f64, f64)> {
    if w.is_empty() || w.len() != dw.len() || w.len() != d2w.len() {
        return Err(Error::Admissibility("sample arrays are empty or of unequal length".into()));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..w.len() {
        if !(w[i] > 0.0 && w[i] < 1.0) {
            return Err(Error::Admissibility(format!("W = {} outside (0, 1) at sample {i}", w[i])));
        }
        if i > 0 && w[i] <= w[i - 1] {
            return Err(Error::Admissibility(format!("W not increasing at sample {i}")));
        }
        if !(dw[i] > 0.0) {
            return Err(Error::Admissibility(format!("W' = {} not positive at sample {i}", dw[i])));
        }
        let v = -(d2w[i] + model.f(w[i])) / (model.g(w[i]) * dw[i]);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Damping, Reaction};

    fn model(alpha: f64, kappa: f64, damping: Damping, tau: f64) -> ValidatedModel {
        ModelSpec::new(Reaction::cubic(alpha, kappa).unwrap(), damping, tau)
            .unwrap()
            .validate()
            .unwrap()
    }

    fn gamma_ac(alpha: f64, kappa: f64) -> f64 {
        (2.0 * kappa).sqrt() * (alpha - 0.5)
    }

    #[test]
    fn unstable_trace_follows_logistic_parabola() {
        let m = model(0.3, 1.0, Damping::ConstantOne, 0.0);
        let t = trace_manifold(&m, gamma_ac(0.3, 1.0), Side::UnstableFromZero, 1e-8).unwrap();
        assert!((t.terminal_w - 0.148492424049175).abs() < 1e-8, "{}", t.terminal_w);
        let a = 0.5f64.sqrt();
        for &(v, w) in &t.samples {
            assert!((w - a * v * (1.0 - v)).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_gamma_energy_identity() {
        let m = model(0.5, 1.0, Damping::ConstantOne, 0.0);
        let expected = (2.0f64 / 64.0).sqrt();
        for side in [Side::UnstableFromZero, Side::StableFromOne] {
            let t = trace_manifold(&m, 0.0, side, 1e-8).unwrap();
            assert!((t.terminal_w - expected).abs() < 1e-8, "{side:?}: {}", t.terminal_w);
        }
        let m = model(0.3, 1.0, Damping::CattaneoMaxwell, 1.0);
        let f_alpha = crate::model::eval_potential(&m, 0.3).unwrap();
        let t = trace_manifold(&m, 0.0, Side::UnstableFromZero, 1e-8).unwrap();
        assert!((t.terminal_w - (2.0 * f_alpha).sqrt()).abs() < 1e-8);
    }

    #[test]
    fn epsilon_out_of_range() {
        let m = model(0.3, 1.0, Damping::ConstantOne, 0.0);
        assert!(trace_manifold(&m, 0.0, Side::UnstableFromZero, 1e-2).is_err());
        assert!(trace_manifold(&m, 0.0, Side::UnstableFromZero, 1e-12).is_err());
    }

    #[test]
    fn gamma_star_closed_form() {
        for kappa in [0.5, 1.0, 2.0] {
            for alpha in [0.2, 0.5, 0.8] {
                let m = model(alpha, kappa, Damping::ConstantOne, 0.0);
                let g = find_gamma_star(&m).unwrap();
                assert!((g - gamma_ac(alpha, kappa)).abs() < 1e-6, "kappa={kappa} alpha={alpha}: {g}");
            }
        }
    }

    #[test]
    fn symmetric_wells_give_zero_speed() {
        let m = model(0.5, 1.0, Damping::CattaneoMaxwell, 1.0);
        assert!(find_gamma_star(&m).unwrap().abs() < 1e-9);
    }

    #[test]
    fn cattaneo_gamma_in_reference_bracket() {
        let m = model(0.3, 1.0, Damping::CattaneoMaxwell, 1.0);
        let g = find_gamma_star(&m).unwrap();
        assert!(g > -0.40 && g < -0.32, "{g}");
    }

    #[test]
    fn speed_map_examples() {
        assert_eq!(speed_from_gamma(0.0, 3.0), 0.0);
        assert_eq!(speed_from_gamma(-0.37, 0.0), -0.37);
        let c = speed_from_gamma(-0.2828427, 1.0);
        assert!((c + 0.2721655).abs() < 1e-7);
        assert!((gamma_from_speed(c, 1.0) + 0.2828427).abs() < 1e-12);
    }

    #[test]
    fn decay_rate_examples() {
        let m = model(0.5, 1.0, Damping::ConstantOne, 1.0);
        let (em, ep) = decay_rates(&m, 0.0);
        assert!((em - 0.5f64.sqrt()).abs() < 1e-14 && (ep - 0.5f64.sqrt()).abs() < 1e-14);
        let m = model(0.3, 1.0, Damping::ConstantOne, 0.0);
        let c = -0.3;
        let (em, _) = decay_rates(&m, c);
        assert!((em - (-c + (c * c + 4.0 * 0.3f64).sqrt()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn logistic_profile() {
        for (alpha, kappa) in [(0.3, 1.0), (0.7, 2.0)] {
            let m = model(alpha, kappa, Damping::ConstantOne, 0.0);
            let g = find_gamma_star(&m).unwrap();
            let front = reconstruct_profile(&m, g, &GridSpec::default()).unwrap();
            assert_eq!(front.u[front.center], alpha);
            let a = (kappa / 2.0).sqrt();
            let shift = (alpha / (1.0 - alpha)).ln();
            let err = front
                .xi
                .iter()
                .zip(&front.u)
                .map(|(&x, &u)| (u - 1.0 / (1.0 + (-(a * x) - shift).exp())).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-5, "alpha={alpha}: {err}");
            assert!(profile_residual(&m, &front) < 1e-6);
        }
    }

    #[test]
    fn tail_fits_match_rates() {
        let m = model(0.3, 1.0, Damping::CattaneoMaxwell, 1.0);
        let front = compute_front(&m).unwrap();
        let (fl, fr) = fitted_tail_rates(&front);
        assert!((fl / front.eta_minus - 1.0).abs() < 0.02, "{fl} vs {}", front.eta_minus);
        assert!((fr / front.eta_plus - 1.0).abs() < 0.02, "{fr} vs {}", front.eta_plus);
        assert!(profile_residual(&m, &front) < 1e-6);
    }

    #[test]
    fn pin_shifts_grid_only() {
        let m = model(0.3, 1.0, Damping::ConstantOne, 0.5);
        let g = find_gamma_star(&m).unwrap();
        let a = reconstruct_profile(&m, g, &GridSpec::default()).unwrap();
        let b = reconstruct_profile(
            &m,
            g,
            &GridSpec {
                pin: 3.25,
                ..GridSpec::default()
            },
        )
        .unwrap();
        assert_eq!(a.u, b.u);
        assert_eq!(a.c_star, b.c_star);
        assert_eq!((a.eta_minus, a.eta_plus), (b.eta_minus, b.eta_plus));
        assert!((b.xi[b.center] - 3.25).abs() < 1e-15);
    }

    #[test]
    fn minmax_on_exact_front_is_tight() {
        let m = model(0.3, 1.0, Damping::CattaneoMaxwell, 1.0);
        let front = compute_front(&m).unwrap();
        let s = front.stretch();
        let dw: Vec<f64> = front.u_x.iter().map(|v| v * s).collect();
        let d2w: Vec<f64> = front.u_xx.iter().map(|v| v * s * s).collect();
        let (lo, hi) = minmax_bracket(&m, &front.u, &dw, &d2w).unwrap();
        assert!((lo - front.gamma_star).abs() < 1e-8 && (hi - front.gamma_star).abs() < 1e-8);
    }

    #[test]
    fn minmax_wrong_rate_contains_gamma() {
        let m = model(0.3, 1.0, Damping::ConstantOne, 0.0);
        let a = 0.9;
        let etas: Vec<f64> = (-400..=400).map(|k| k as f64 * 0.05).collect();
        let w: Vec<f64> = etas.iter().map(|e| 1.0 / (1.0 + (-a * e).exp())).collect();
        let dw: Vec<f64> = w.iter().map(|w| a * w * (1.0 - w)).collect();
        let d2w: Vec<f64> = w.iter().map(|w| a * a * w * (1.0 - w) * (1.0 - 2.0 * w)).collect();
        let (lo, hi) = minmax_bracket(&m, &w, &dw, &d2w).unwrap();
        let g = gamma_ac(0.3, 1.0);
        assert!(lo < g && g < hi, "{lo} {g} {hi}");
    }

    #[test]
    fn minmax_rejects_non_monotone() {
        let m = model(0.3, 1.0, Damping::ConstantOne, 0.0);
        assert!(matches!(
            minmax_bracket(&m, &[0.2, 0.3], &[1.0, -1.0], &[0.0, 0.0]),
            Err(Error::Admissibility(_))
        ));
    }
}
