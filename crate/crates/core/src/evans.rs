//! Point spectrum of the linearization about a front: the first-order
//! system `W_x = A(x, lambda) W`, its Evans function, winding numbers, and
//! the Melnikov integral certifying simplicity of the translation
//! eigenvalue.
//!
//! With `s = 1 - c^2 tau`, `a(x) = c d/dx g(U) + f'(U)` and `b(x) = g(U)`,
//!
//! `A(x, lambda) = s^{-1} [[0, s], [tau lambda^2 + lambda b - a, -c (b + 2 tau lambda)]]`.
//!
//! The decaying solutions are integrated with the exponential of their
//! asymptotic rate factored out and start from the eigenvector `(1, mu)`,
//! which is analytic in `lambda` and never vanishes.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::QuinticHermite;
use crate::linalg::{det_cols, Mat2};
use crate::model::{ModelSpec, ValidatedModel};
use crate::ode::{integrate, integrate_sampled, Control, Tolerances};
use crate::profile::FrontProfile;
use crate::quad::{cumulative_from, derivative4, linear_fit, second_derivative4, simpson};
use crate::spectrum::{spatial_eigenvalues_unchecked, spectral_gap, AsymptoticSpectralData, End, SpectralGap};

/// Maximum number of contour samples before refinement gives up.
pub const MAX_CONTOUR_POINTS: usize = 1 << 14;

/// Variable coefficients of the linearization, sampled on the profile grid
/// and interpolated between nodes through the profile itself.
#[derive(Debug, Clone)]
pub struct CoefficientFields {
    model: ModelSpec,
    profile: QuinticHermite,
    pub c: f64,
    pub tau: f64,
    /// `1 - c^2 tau`
    pub s: f64,
    pub xi: Vec<f64>,
    pub dx: f64,
    /// Matching point (where `U = alpha`).
    pub x_match: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub data: AsymptoticSpectralData,
    pub gap: SpectralGap,
}

impl CoefficientFields {
    pub fn from_front(model: &ValidatedModel, front: &FrontProfile) -> Result<Self> {
        let c = front.c_star;
        let data = AsymptoticSpectralData::from_model(model, c)?;
        let profile = QuinticHermite::uniform(
            front.xi[0],
            front.dx,
            front.u.clone(),
            front.u_x.clone(),
            front.u_xx.clone(),
        );
        let a = front
            .u
            .iter()
            .zip(&front.u_x)
            .map(|(&u, &ux)| c * model.dg(u) * ux + model.df(u))
            .collect();
        let b = front.u.iter().map(|&u| model.g(u)).collect();
        Ok(Self {
            model: (**model).clone(),
            profile,
            c,
            tau: model.tau,
            s: 1.0 - c * c * model.tau,
            xi: front.xi.clone(),
            dx: front.dx,
            x_match: front.xi[front.center],
            a,
            b,
            gap: spectral_gap(&data),
            data,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.xi[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.xi.last().unwrap()
    }

    /// `(a(x), b(x))` at an arbitrary point of the domain.
    pub fn coefficients_at(&self, x: f64) -> (f64, f64) {
        let (u, ux) = self.profile.eval2(x);
        (
            self.c * self.model.dg(u) * ux + self.model.df(u),
            self.model.g(u),
        )
    }
}

fn matrix_from(a: f64, b: f64, c: f64, tau: f64, s: f64, lambda: Complex64) -> Mat2 {
    Mat2::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        (tau * lambda * lambda + lambda * b - a) / s,
        -c * (b + 2.0 * tau * lambda) / s,
    )
}

/// `A(x, lambda)`
pub fn coefficient_matrix(fields: &CoefficientFields, x: f64, lambda: Complex64) -> Mat2 {
    let (a, b) = fields.coefficients_at(x);
    matrix_from(a, b, fields.c, fields.tau, fields.s, lambda)
}

/// `(A0, A1, A2)` with `A = A0 + lambda A1 + lambda^2 A2`.
pub fn coefficient_parts(fields: &CoefficientFields, x: f64) -> (Mat2, Mat2, Mat2) {
    let (a, b) = fields.coefficients_at(x);
    let (c, tau, s) = (fields.c, fields.tau, fields.s);
    let z = Complex64::new(0.0, 0.0);
    let r = |v: f64| Complex64::new(v, 0.0);
    (
        Mat2::new(z, r(1.0), r(-a / s), r(-c * b / s)),
        Mat2::new(z, z, r(b / s), r(-2.0 * c * tau / s)),
        Mat2::new(z, z, r(tau / s), z),
    )
}

/// Largest deviation `max |A(x, lambda) - A_±(lambda)|` at the two ends of
/// the grid.
pub fn endpoint_mismatch(fields: &CoefficientFields, lambda: Complex64) -> f64 {
    let lo = coefficient_matrix(fields, fields.x_min(), lambda)
        - crate::spectrum::asymptotic_matrix(&fields.data, End::Minus, lambda);
    let hi = coefficient_matrix(fields, fields.x_max(), lambda)
        - crate::spectrum::asymptotic_matrix(&fields.data, End::Plus, lambda);
    lo.max_abs().max(hi.max_abs())
}

/// Exponential rates `(nu_minus, nu_plus)` at which the coefficients reach
/// their limits, fitted on the outer halves of the grid.
pub fn coefficient_convergence_rates(fields: &CoefficientFields) -> (f64, f64) {
    let n = fields.xi.len();
    let dev = |i: usize, end: End| {
        let (abs_a, b) = fields.data.end(end);
        (fields.a[i] + abs_a).abs() + (fields.b[i] - b).abs()
    };
    let fit = |range: std::ops::Range<usize>, end: End| {
        let (x, y): (Vec<f64>, Vec<f64>) = range
            .filter(|&i| dev(i, end) > 1e-13)
            .map(|i| (fields.xi[i].abs(), dev(i, end).ln()))
            .unzip();
        if x.len() < 3 {
            f64::INFINITY
        } else {
            -linear_fit(&x, &y).0
        }
    };
    (fit(0..n / 4, End::Minus), fit(n - n / 4..n, End::Plus))
}

#[derive(Debug, Clone, Copy)]
pub struct EvansOptions {
    pub tol: Tolerances,
    /// Reject `lambda` outside `{Re lambda > -chi0}`.
    pub check_region: bool,
}

impl Default for EvansOptions {
    fn default() -> Self {
        Self {
            tol: Tolerances::new(1e-10, 1e-12),
            check_region: true,
        }
    }
}

fn pack(w: [Complex64; 2]) -> [f64; 4] {
    [w[0].re, w[0].im, w[1].re, w[1].im]
}

fn unpack(y: &[f64; 4]) -> [Complex64; 2] {
    [Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3])]
}

/// Selected mode of one end: the rate factored out and the initial data.
fn end_mode(fields: &CoefficientFields, end: End, lambda: Complex64) -> (Complex64, [Complex64; 2]) {
    let (mu1, mu2) = spatial_eigenvalues_unchecked(&fields.data, end, lambda);
    // decaying towards -inf means growing in x: the mode with Re mu > 0
    let mu = match end {
        End::Minus => mu2,
        End::Plus => mu1,
    };
    (mu, [Complex64::new(1.0, 0.0), mu])
}

fn check_region(fields: &CoefficientFields, lambda: Complex64, opts: &EvansOptions) -> Result<()> {
    if opts.check_region && !(lambda.re > -fields.gap.chi0) {
        return Err(Error::OutsideRegion(lambda));
    }
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::OutsideRegion(lambda));
    }
    Ok(())
}

fn rescaled_rhs<'a>(
    fields: &'a CoefficientFields,
    lambda: Complex64,
    mu: Complex64,
) -> impl FnMut(f64, &[f64; 4]) -> [f64; 4] + 'a {
    move |x, y| {
        let w = unpack(y);
        let m = coefficient_matrix(fields, x, lambda);
        let r = m.apply(w);
        pack([r[0] - mu * w[0], r[1] - mu * w[1]])
    }
}

/// Decaying solution of one end sampled on the grid between that end and
/// the matching point, with `exp(mu (x - x_end))` factored out.
#[derive(Debug, Clone)]
pub struct DecayingSolution {
    pub end: End,
    pub mu: Complex64,
    /// Grid abscissae, ordered from the end towards the matching point.
    pub x: Vec<f64>,
    pub w: Vec<[Complex64; 2]>,
}

pub fn decaying_solution(
    fields: &CoefficientFields,
    end: End,
    lambda: Complex64,
    opts: &EvansOptions,
) -> Result<DecayingSolution> {
    check_region(fields, lambda, opts)?;
    let (mu, w0) = end_mode(fields, end, lambda);
    let k = fields.xi.iter().position(|&x| x == fields.x_match).unwrap();
    let x: Vec<f64> = match end {
        End::Minus => fields.xi[..=k].to_vec(),
        End::Plus => fields.xi[k..].iter().rev().copied().collect(),
    };
    let ys = integrate_sampled(
        rescaled_rhs(fields, lambda, mu),
        x[0],
        pack(w0),
        *x.last().unwrap(),
        &opts.tol,
        &x,
    )
    .map_err(|e| overflow_or(e, lambda))?;
    Ok(DecayingSolution {
        end,
        mu,
        x,
        w: ys.iter().map(unpack).collect(),
    })
}

fn overflow_or(e: Error, lambda: Complex64) -> Error {
    match e {
        Error::Integrator(_) => Error::Overflow(lambda),
        other => other,
    }
}

/// The two matching-point vectors `W^-(x_match)` and `W^+(x_match)`.
pub fn matching_vectors(
    fields: &CoefficientFields,
    lambda: Complex64,
    opts: &EvansOptions,
) -> Result<([Complex64; 2], [Complex64; 2])> {
    check_region(fields, lambda, opts)?;
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (slot, (end, x_end)) in out
        .iter_mut()
        .zip([(End::Minus, fields.x_min()), (End::Plus, fields.x_max())])
    {
        let (mu, w0) = end_mode(fields, end, lambda);
        let res = integrate(
            rescaled_rhs(fields, lambda, mu),
            x_end,
            pack(w0),
            fields.x_match,
            &opts.tol,
            |_| Control::Continue,
        )
        .map_err(|e| overflow_or(e, lambda))?;
        let w = unpack(&res.y);
        if !w.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Overflow(lambda));
        }
        *slot = w;
    }
    Ok((out[0], out[1]))
}

/// `D(lambda) = det[W^-(x_match), W^+(x_match)]`.
pub fn evans(fields: &CoefficientFields, lambda: Complex64) -> Result<Complex64> {
    evans_with(fields, lambda, &EvansOptions::default())
}

pub fn evans_with(fields: &CoefficientFields, lambda: Complex64, opts: &EvansOptions) -> Result<Complex64> {
    let (wm, wp) = matching_vectors(fields, lambda, opts)?;
    Ok(det_cols(wm, wp))
}

/// `|D(lambda)| / (|W^-| |W^+|)`: the sine of the angle between the two
/// matching vectors, a scale-free measure of how close `lambda` is to an
/// eigenvalue.
pub fn evans_relative(fields: &CoefficientFields, lambda: Complex64) -> Result<f64> {
    let (wm, wp) = matching_vectors(fields, lambda, &EvansOptions::default())?;
    let norm = |w: [Complex64; 2]| (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
    Ok(det_cols(wm, wp).norm() / (norm(wm) * norm(wp)))
}

/// Closed contour in the `lambda` plane, traversed counterclockwise and
/// parameterized by `t` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Contour {
    Circle {
        center: Complex64,
        radius: f64,
    },
    Rectangle {
        re_min: f64,
        re_max: f64,
        im_min: f64,
        im_max: f64,
    },
}

impl Contour {
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            Contour::Circle { center, radius } => center + Complex64::from_polar(radius, TAU * t),
            Contour::Rectangle {
                re_min,
                re_max,
                im_min,
                im_max,
            } => {
                let (w, h) = (re_max - re_min, im_max - im_min);
                let mut d = t.rem_euclid(1.0) * 2.0 * (w + h);
                if d < w {
                    return Complex64::new(re_min + d, im_min);
                }
                d -= w;
                if d < h {
                    return Complex64::new(re_max, im_min + d);
                }
                d -= h;
                if d < w {
                    return Complex64::new(re_max - d, im_max);
                }
                d -= w;
                Complex64::new(re_min, im_max - d)
            }
        }
    }

    /// Parameter values of the corners (rectangles), always sampled.
    fn corners(&self) -> Vec<f64> {
        match *self {
            Contour::Circle { .. } => vec![],
            Contour::Rectangle {
                re_min,
                re_max,
                im_min,
                im_max,
            } => {
                let (w, h) = (re_max - re_min, im_max - im_min);
                let p = 2.0 * (w + h);
                vec![w / p, (w + h) / p, (2.0 * w + h) / p]
            }
        }
    }

    pub fn vertices(&self) -> Vec<Complex64> {
        match *self {
            Contour::Circle { center, radius } => vec![center, Complex64::new(radius, 0.0)],
            Contour::Rectangle {
                re_min,
                re_max,
                im_min,
                im_max,
            } => vec![
                Complex64::new(re_min, im_min),
                Complex64::new(re_max, im_min),
                Complex64::new(re_max, im_max),
                Complex64::new(re_min, im_max),
            ],
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct WindingOptions {
    pub initial_points: usize,
    /// Refine until every consecutive argument step is below this.
    pub max_arg_step: f64,
    pub max_points: usize,
    /// `zero_floor = floor_factor * median |D|`.
    pub floor_factor: f64,
}

impl Default for WindingOptions {
    fn default() -> Self {
        Self {
            initial_points: 128,
            max_arg_step: PI / 4.0,
            max_points: MAX_CONTOUR_POINTS,
            floor_factor: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindingResult {
    pub winding: i64,
    /// Total argument change / 2 pi before rounding.
    pub raw_winding: f64,
    pub lambdas: Vec<Complex64>,
    pub values: Vec<Complex64>,
    pub min_abs: f64,
    pub zero_floor: f64,
}

/// Winding number of `f` along `contour` by the argument principle with
/// adaptive refinement. Evaluations run in parallel; results are assembled
/// in contour order.
pub fn winding_of<F>(f: F, contour: &Contour, opts: &WindingOptions) -> Result<WindingResult>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let n0 = opts.initial_points.max(8);
    let mut ts: Vec<f64> = (0..n0).map(|k| k as f64 / n0 as f64).collect();
    ts.extend(contour.corners());
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let eval = |ts: &[f64]| -> Result<Vec<Complex64>> {
        ts.par_iter().map(|&t| f(contour.point(t))).collect()
    };
    let mut vals = eval(&ts)?;
    loop {
        let (min_abs, zero_floor) = zero_floor(&vals, opts.floor_factor);
        if !(min_abs > zero_floor) {
            return Err(Error::ContourThroughZero {
                min_abs,
                floor: zero_floor,
            });
        }
        let n = ts.len();
        let step = |i: usize| (vals[(i + 1) % n] / vals[i]).arg();
        let bad: Vec<usize> = (0..n)
            .filter(|&i| !(step(i).abs() < opts.max_arg_step))
            .collect();
        if bad.is_empty() {
            break;
        }
        if n + bad.len() > opts.max_points {
            let worst = (0..n).map(|i| step(i).abs()).fold(0.0, f64::max);
            return Err(Error::Resolution {
                step: worst,
                points: n,
            });
        }
        let new_ts: Vec<f64> = bad
            .iter()
            .map(|&i| {
                let t1 = if i + 1 == n { 1.0 } else { ts[i + 1] };
                0.5 * (ts[i] + t1)
            })
            .collect();
        let new_vals = eval(&new_ts)?;
        let mut merged: Vec<(f64, Complex64)> = ts
            .iter()
            .copied()
            .zip(vals.iter().copied())
            .chain(new_ts.into_iter().zip(new_vals))
            .collect();
        merged.sort_by(|a, b| a.0.total_cmp(&b.0));
        ts = merged.iter().map(|p| p.0).collect();
        vals = merged.iter().map(|p| p.1).collect();
    }
    let (min_abs, zero_floor) = zero_floor(&vals, opts.floor_factor);
    let n = vals.len();
    let total: f64 = (0..n).map(|i| (vals[(i + 1) % n] / vals[i]).arg()).sum();
    let raw = total / TAU;
    Ok(WindingResult {
        winding: raw.round() as i64,
        raw_winding: raw,
        lambdas: ts.iter().map(|&t| contour.point(t)).collect(),
        values: vals,
        min_abs,
        zero_floor,
    })
}

/// `(min |D|, factor * median |D|)` over the samples.
fn zero_floor(vals: &[Complex64], factor: f64) -> (f64, f64) {
    let mut mags: Vec<f64> = vals.iter().map(|v| v.norm()).collect();
    let min_abs = mags.iter().copied().fold(f64::INFINITY, f64::min);
    mags.sort_by(f64::total_cmp);
    (min_abs, factor * mags[mags.len() / 2])
}

/// Winding number of the Evans function along a contour inside the region.
pub fn winding_number(fields: &CoefficientFields, contour: &Contour) -> Result<WindingResult> {
    let opts = EvansOptions::default();
    winding_of(|l| evans_with(fields, l, &opts), contour, &WindingOptions::default())
}

/// Default stability rectangle `[-chi0/2, R] x [-M, M]` with
/// `R = M = 1 + 10 max(|a_±|, b_±^2, 1/tau)`.
pub fn stability_rectangle(fields: &CoefficientFields) -> Contour {
    let d = &fields.data;
    let mut scale = d.a_minus.abs().max(d.a_plus.abs());
    scale = scale.max(d.b_minus.powi(2)).max(d.b_plus.powi(2));
    if d.tau > 0.0 {
        scale = scale.max(1.0 / d.tau);
    }
    let r = 1.0 + 10.0 * scale;
    Contour::Rectangle {
        re_min: -0.5 * fields.gap.chi0,
        re_max: r,
        im_min: -r,
        im_max: r,
    }
}

pub const ORIGIN_RADIUS: f64 = 0.05;

pub fn origin_circle() -> Contour {
    Contour::Circle {
        center: Complex64::new(0.0, 0.0),
        radius: ORIGIN_RADIUS,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvansReport {
    pub contour: Vec<Complex64>,
    pub lambdas: Vec<Complex64>,
    pub d_samples: Vec<Complex64>,
    pub winding: i64,
    pub min_abs_on_contour: f64,
    pub zero_floor: f64,
    pub winding_origin: i64,
    /// Zeros in the stability rectangle outside the small disk at 0.
    pub winding_stability_region: i64,
    pub melnikov_gamma: f64,
    /// `|D(0)| / (|W^-(0)| |W^+(0)|)`
    pub d0_relative: f64,
}

/// Full zero-structure check: winding on the origin circle and the
/// stability rectangle, the normalized `|D(0)|`, and the Melnikov integral.
pub fn evans_report(fields: &CoefficientFields, front: &FrontProfile) -> Result<EvansReport> {
    evans_report_on(fields, front, &stability_rectangle(fields), &origin_circle())
}

/// [`evans_report`] on caller-chosen contours: `rect` bounds the region
/// checked for zeros and `origin` isolates the translation eigenvalue.
pub fn evans_report_on(
    fields: &CoefficientFields,
    front: &FrontProfile,
    rect: &Contour,
    origin: &Contour,
) -> Result<EvansReport> {
    let outer = winding_number(fields, rect)?;
    let origin = winding_number(fields, origin)?;
    Ok(EvansReport {
        contour: rect.vertices(),
        lambdas: outer.lambdas,
        d_samples: outer.values,
        winding: outer.winding,
        min_abs_on_contour: outer.min_abs,
        zero_floor: outer.zero_floor,
        winding_origin: origin.winding,
        winding_stability_region: outer.winding - origin.winding,
        melnikov_gamma: melnikov_gamma(fields, front)?,
        d0_relative: evans_relative(fields, Complex64::new(0.0, 0.0))?,
    })
}

/// `theta(x)` with `theta_x = -c b / (2 s)`, `theta(x_match) = 0`.
pub fn melnikov_weight_exponent(fields: &CoefficientFields) -> Vec<f64> {
    let k = fields.xi.iter().position(|&x| x == fields.x_match).unwrap();
    let rate: Vec<f64> = fields
        .b
        .iter()
        .map(|&b| -fields.c * b / (2.0 * fields.s))
        .collect();
    cumulative_from(&rate, fields.dx, k)
}

/// `Gamma = s^{-2} ∫ b U_x^2 e^{-2 theta} dx`.
pub fn melnikov_gamma(fields: &CoefficientFields, front: &FrontProfile) -> Result<f64> {
    let theta = melnikov_weight_exponent(fields);
    let integrand: Vec<f64> = (0..fields.xi.len())
        .map(|i| fields.b[i] * front.u_x[i].powi(2) * (-2.0 * theta[i]).exp())
        .collect();
    let gamma = simpson(&integrand, fields.dx) / (fields.s * fields.s);
    if !(gamma > 0.0) {
        return Err(Error::Invariant(format!("Melnikov integral {gamma} is not positive")));
    }
    Ok(gamma)
}

/// Central-difference `D'(0)` along the real axis.
pub fn evans_derivative_at_zero(fields: &CoefficientFields, h: f64) -> Result<Complex64> {
    let plus = evans(fields, Complex64::new(h, 0.0))?;
    let minus = evans(fields, Complex64::new(-h, 0.0))?;
    Ok((plus - minus) / (2.0 * h))
}

/// `D'(0)` predicted from the Melnikov integral: with `W^±(x_match, 0) =
/// k_± (U_x, U_xx)(x_match)`, `D'(0) = -k_+ k_- Gamma`.
pub fn melnikov_prediction(fields: &CoefficientFields, front: &FrontProfile) -> Result<f64> {
    let (wm, wp) = matching_vectors(fields, Complex64::new(0.0, 0.0), &EvansOptions::default())?;
    let k = front.center;
    let phi = [front.u_x[k], front.u_xx[k]];
    let nn = phi[0] * phi[0] + phi[1] * phi[1];
    let proj = |w: [Complex64; 2]| (w[0].re * phi[0] + w[1].re * phi[1]) / nn;
    Ok(-proj(wm) * proj(wp) * melnikov_gamma(fields, front)?)
}

/// `max |Phi_x - A(x, 0) Phi|` for `Phi = scale (U_x, U_xx)`, with `Phi_x`
/// from fourth-order differences.
pub fn translation_eigenvalue_residual(fields: &CoefficientFields, front: &FrontProfile, scale: f64) -> f64 {
    let p0: Vec<f64> = front.u_x.iter().map(|v| scale * v).collect();
    let p1: Vec<f64> = front.u_xx.iter().map(|v| scale * v).collect();
    let d0 = derivative4(&p0, fields.dx);
    let d1 = derivative4(&p1, fields.dx);
    let (c, s) = (fields.c, fields.s);
    (0..p0.len())
        .filter_map(|i| {
            let (d0, d1) = (d0[i]?, d1[i]?);
            let (a, b) = (fields.a[i], fields.b[i]);
            let r0 = d0 - p1[i];
            let r1 = d1 - (-a * p0[i] - c * b * p1[i]) / s;
            Some(r0.abs().max(r1.abs()))
        })
        .fold(0.0, f64::max)
}

/// Residuals of a candidate eigenfunction `v` (sampled on the profile
/// grid) in two equivalent formulations: the companion system
/// `lambda (v1, v2) = L (v1, v2)` with `v2 = lambda v - c v_x`, and the
/// first-order system `W_x = A(x, lambda) W` with `W = (v, v_x)`.
/// Derivatives are fourth-order differences; the two end points on each
/// side are skipped.
pub fn companion_residuals(
    fields: &CoefficientFields,
    lambda: Complex64,
    v: &[Complex64],
) -> Result<(f64, f64)> {
    if fields.tau == 0.0 {
        return Err(Error::Unsupported(
            "the companion operator requires tau > 0".into(),
        ));
    }
    if v.len() != fields.xi.len() {
        return Err(Error::Domain {
            what: "eigenfunction samples",
            value: v.len() as f64,
            domain: "length of the profile grid",
        });
    }
    let h = fields.dx;
    let (c, tau, s) = (fields.c, fields.tau, fields.s);
    let d = |w: &[Complex64]| -> Vec<Option<Complex64>> {
        let re: Vec<f64> = w.iter().map(|z| z.re).collect();
        let im: Vec<f64> = w.iter().map(|z| z.im).collect();
        derivative4(&re, h)
            .into_iter()
            .zip(derivative4(&im, h))
            .map(|(a, b)| Some(Complex64::new(a?, b?)))
            .collect()
    };
    let dd = |w: &[Complex64]| -> Vec<Option<Complex64>> {
        let re: Vec<f64> = w.iter().map(|z| z.re).collect();
        let im: Vec<f64> = w.iter().map(|z| z.im).collect();
        second_derivative4(&re, h)
            .into_iter()
            .zip(second_derivative4(&im, h))
            .map(|(a, b)| Some(Complex64::new(a?, b?)))
            .collect()
    };
    let vx = d(v);
    let vxx = dd(v);
    // v2 needs v_x everywhere it is differentiated; use the interior only
    let v2: Vec<Option<Complex64>> = (0..v.len()).map(|i| Some(lambda * v[i] - c * vx[i]?)).collect();
    let mut companion = 0.0f64;
    let mut first_order = 0.0f64;
    for i in 4..v.len().saturating_sub(4) {
        let (a, b) = (fields.a[i], fields.b[i]);
        let (vx_i, vxx_i) = (vx[i].unwrap(), vxx[i].unwrap());
        let w2: Vec<Complex64> = (i - 2..=i + 2).map(|j| v2[j].unwrap()).collect();
        let v2x = (w2[0] - 8.0 * w2[1] + 8.0 * w2[3] - w2[4]) / (12.0 * h);
        let v2i = w2[2];
        // row 1 (c v1_x + v2 = lambda v1) holds identically by construction
        let row2 = (vxx_i + a * v[i]) / tau + c * v2x - b * v2i / tau - lambda * v2i;
        companion = companion.max(row2.norm());
        let m = matrix_from(a, b, c, tau, s, lambda);
        let r = m.apply([v[i], vx_i]);
        let w_x = [vx_i, vxx_i];
        first_order = first_order.max((w_x[0] - r[0]).norm().max((w_x[1] - r[1]).norm()));
    }
    Ok((companion, first_order))
}

/// Zeros of `f` inside a rectangle, located by recursive subdivision with
/// winding counts. Boxes with a nonzero count are split until their side is
/// below `min_size`; the box centers are returned with multiplicity.
pub fn locate_zeros<F>(f: &F, rect: [f64; 4], min_size: f64, max_depth: u32) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let [re_min, re_max, im_min, im_max] = rect;
    let contour = Contour::Rectangle {
        re_min,
        re_max,
        im_min,
        im_max,
    };
    let opts = WindingOptions {
        initial_points: 32,
        ..WindingOptions::default()
    };
    let w = winding_of(f, &contour, &opts)?.winding;
    if w <= 0 {
        return Ok(vec![]);
    }
    let size = (re_max - re_min).max(im_max - im_min);
    if size < min_size || max_depth == 0 {
        let center = Complex64::new(0.5 * (re_min + re_max), 0.5 * (im_min + im_max));
        return Ok(vec![center; w as usize]);
    }
    // split slightly off-center so sub-box edges avoid symmetric zeros
    let rm = re_min + 0.5123 * (re_max - re_min);
    let im = im_min + 0.4877 * (im_max - im_min);
    let mut out = Vec::new();
    for q in [
        [re_min, rm, im_min, im],
        [rm, re_max, im_min, im],
        [re_min, rm, im, im_max],
        [rm, re_max, im, im_max],
    ] {
        out.extend(locate_zeros(f, q, min_size, max_depth - 1)?);
    }
    Ok(out)
}

/// Empirical point-spectrum gap: the distance from the imaginary axis to the
/// nearest Evans zero (other than the translation zero) in
/// `[-0.9 chi0, 0] x [-M, M]`, or `None` when no zero is detected there.
pub fn empirical_point_gap(fields: &CoefficientFields, height: f64) -> Result<Option<f64>> {
    let opts = EvansOptions::default();
    let f = |l: Complex64| evans_with(fields, l, &opts);
    let left = -0.9 * fields.gap.chi0;
    let zeros = locate_zeros(&f, [left, 0.5 * ORIGIN_RADIUS, -height, height], 1e-3, 12)?;
    Ok(zeros
        .iter()
        .filter(|z| z.norm() > ORIGIN_RADIUS)
        .map(|z| -z.re)
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Damping, Reaction};
    use crate::profile::compute_front;

    fn setup(alpha: f64, damping: Damping, tau: f64) -> (ValidatedModel, FrontProfile, CoefficientFields) {
        let m = ModelSpec::new(Reaction::cubic(alpha, 1.0).unwrap(), damping, tau)
            .unwrap()
            .validate()
            .unwrap();
        let front = compute_front(&m).unwrap();
        let fields = CoefficientFields::from_front(&m, &front).unwrap();
        (m, front, fields)
    }

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn decomposition_reproduces_matrix() {
        let (_, _, f) = setup(0.3, Damping::CattaneoMaxwell, 1.0);
        for (x, l) in [(-3.0, c64(0.3, 1.2)), (0.7, c64(-0.05, -2.0)), (5.0, c64(4.0, 0.0))] {
            let (a0, a1, a2) = coefficient_parts(&f, x);
            let sum = a0 + a1.scale(l) + a2.scale(l * l);
            assert!((sum - coefficient_matrix(&f, x, l)).max_abs() < 1e-14);
            let h = 1e-6;
            let fd = (coefficient_matrix(&f, x, l + h) - coefficient_matrix(&f, x, l - h))
                .scale(c64(0.5 / h, 0.0));
            assert!((fd - (a1 + a2.scale(2.0 * l))).max_abs() < 1e-8);
        }
    }

    #[test]
    fn ends_match_asymptotic_matrices() {
        let (_, front, f) = setup(0.3, Damping::CattaneoMaxwell, 1.0);
        let eta = front.eta_minus.min(front.eta_plus);
        let bound = 10.0 * (-eta * front.half_length).exp();
        assert!(endpoint_mismatch(&f, c64(0.2, 0.5)) < bound);
        let (nm, np) = coefficient_convergence_rates(&f);
        assert!(nm > 0.5 * front.eta_minus && np > 0.5 * front.eta_plus, "{nm} {np}");
        assert!(f.b.iter().all(|&b| b > 0.0));
    }

    #[test]
    fn d_vanishes_at_zero() {
        let (_, _, f) = setup(0.3, Damping::ConstantOne, 0.0);
        assert!(evans_relative(&f, c64(0.0, 0.0)).unwrap() < 1e-8);
        assert!(evans(&f, c64(0.5, 0.0)).unwrap().norm() > 1e-3);
    }

    #[test]
    fn d_real_on_real_axis_and_conjugate_symmetric() {
        let (_, _, f) = setup(0.3, Damping::CattaneoMaxwell, 1.0);
        for l in [0.01, 0.3, 1.0] {
            let d = evans(&f, c64(l, 0.0)).unwrap();
            assert!(d.im.abs() <= 1e-9 * d.norm());
        }
        let l = c64(0.4, 0.9);
        let (d1, d2) = (evans(&f, l).unwrap(), evans(&f, l.conj()).unwrap());
        assert!((d1.norm() - d2.norm()).abs() < 1e-9 * d1.norm());
    }

    #[test]
    fn rescaled_solution_stays_bounded_for_large_lambda() {
        let (_, _, f) = setup(0.3, Damping::ConstantOne, 0.0);
        let sol = decaying_solution(&f, End::Plus, c64(10.0, 0.0), &EvansOptions::default()).unwrap();
        let max = sol.w.iter().map(|w| w[0].norm()).fold(0.0, f64::max);
        assert!(max < 10.0, "{max}");
        let (mu, w0) = end_mode(&f, End::Plus, c64(10.0, 0.0));
        let m = crate::spectrum::asymptotic_matrix(&f.data, End::Plus, c64(10.0, 0.0));
        let r = m.apply(w0);
        assert!((r[0] - mu * w0[0]).norm() + (r[1] - mu * w0[1]).norm() < 1e-12);
    }

    #[test]
    fn region_is_enforced() {
        let (_, _, f) = setup(0.3, Damping::ConstantOne, 0.0);
        assert!(matches!(
            evans(&f, c64(-f.gap.chi0 - 0.01, 0.0)),
            Err(Error::OutsideRegion(_))
        ));
    }

    #[test]
    fn winding_of_affine_function() {
        let rect = Contour::Rectangle {
            re_min: -1.0,
            re_max: 1.0,
            im_min: -1.0,
            im_max: 1.0,
        };
        let w = winding_of(|l| Ok(l - 5.0), &rect, &WindingOptions::default()).unwrap();
        assert_eq!(w.winding, 0);
        let w = winding_of(|l| Ok(l - 0.5), &rect, &WindingOptions::default()).unwrap();
        assert_eq!(w.winding, 1);
        assert!((w.raw_winding - 1.0).abs() < 1e-9);
        let w = winding_of(|l| Ok((l - 0.5) * (l + c64(0.1, 0.2)).powi(2)), &rect, &WindingOptions::default())
            .unwrap();
        assert_eq!(w.winding, 3);
    }

    #[test]
    fn contour_through_zero_is_reported() {
        let circle = Contour::Circle {
            center: c64(0.0, 0.0),
            radius: 1.0,
        };
        let r = winding_of(|l| Ok(l - 1.0), &circle, &WindingOptions::default());
        assert!(matches!(r, Err(Error::ContourThroughZero { .. })));
    }

    #[test]
    fn locate_zeros_finds_roots() {
        let f = |l: Complex64| Ok((l - c64(0.3, 0.1)) * (l + c64(0.2, -0.4)));
        let mut z = locate_zeros(&f, [-1.0, 1.0, -1.0, 1.0], 1e-3, 20).unwrap();
        z.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert_eq!(z.len(), 2);
        assert!((z[0] - c64(-0.2, 0.4)).norm() < 2e-3 && (z[1] - c64(0.3, 0.1)).norm() < 2e-3);
    }

    #[test]
    fn origin_zero_is_simple() {
        let (_, _, f) = setup(0.5, Damping::ConstantOne, 0.0);
        assert_eq!(winding_number(&f, &origin_circle()).unwrap().winding, 1);
    }

    #[test]
    fn stationary_melnikov_integral() {
        let (_, front, f) = setup(0.5, Damping::ConstantOne, 0.0);
        let g = melnikov_gamma(&f, &front).unwrap();
        assert!((g - 0.5f64.sqrt() / 6.0).abs() < 1e-6, "{g}");
    }

    #[test]
    fn melnikov_continuous_in_tau() {
        let (_, f0, c0) = setup(0.3, Damping::CattaneoMaxwell, 0.0);
        let (_, f1, c1) = setup(0.3, Damping::CattaneoMaxwell, 1e-6);
        let (g0, g1) = (melnikov_gamma(&c0, &f0).unwrap(), melnikov_gamma(&c1, &f1).unwrap());
        assert!((g0 - g1).abs() < 1e-4);
    }

    #[test]
    fn derivative_at_zero_matches_melnikov() {
        let (_, front, f) = setup(0.3, Damping::CattaneoMaxwell, 1.0);
        let fd = evans_derivative_at_zero(&f, 1e-4).unwrap();
        let predicted = melnikov_prediction(&f, &front).unwrap();
        assert!(fd.im.abs() < 1e-9 * fd.norm());
        assert!((fd.re / predicted - 1.0).abs() < 1e-3, "{} vs {predicted}", fd.re);
    }

    #[test]
    fn translation_residual_small_and_linear() {
        let (_, front, f) = setup(0.3, Damping::ConstantOne, 0.0);
        let r1 = translation_eigenvalue_residual(&f, &front, 1.0);
        let r3 = translation_eigenvalue_residual(&f, &front, 3.0);
        assert!(r1 < 1e-8, "{r1}");
        assert!((r3 - 3.0 * r1).abs() <= 1e-12 + 1e-9 * r1);
    }

    #[test]
    fn companion_residuals_on_translation_mode() {
        let (_, front, f) = setup(0.3, Damping::CattaneoMaxwell, 1.0);
        let v: Vec<Complex64> = front.u_x.iter().map(|&x| c64(x, 0.0)).collect();
        let (rc, rf) = companion_residuals(&f, c64(0.0, 0.0), &v).unwrap();
        assert!(rc < 1e-8 && rf < 1e-8, "{rc} {rf}");
        let v2: Vec<Complex64> = v.iter().map(|z| 2.0 * z).collect();
        let (rc2, rf2) = companion_residuals(&f, c64(0.0, 0.0), &v2).unwrap();
        assert!((rc2 - 2.0 * rc).abs() <= 1e-15 + 1e-9 * rc && (rf2 - 2.0 * rf).abs() <= 1e-15 + 1e-9 * rf);
        let (rc, rf) = companion_residuals(&f, c64(0.7, 0.4), &v).unwrap();
        assert!(rc > 1e-3 && rf > 1e-3);
    }

    #[test]
    fn companion_unsupported_at_tau_zero() {
        let (_, front, f) = setup(0.3, Damping::ConstantOne, 0.0);
        let v: Vec<Complex64> = front.u_x.iter().map(|&x| c64(x, 0.0)).collect();
        assert!(matches!(companion_residuals(&f, c64(0.0, 0.0), &v), Err(Error::Unsupported(_))));
    }

    #[test]
    fn second_eigenvalue_of_stationary_front() {
        // Linearization about the stationary cubic front: eigenvalues 0 and
        // -3/8, located outside the region Omega with the check disabled.
        let (_, _, f) = setup(0.5, Damping::ConstantOne, 0.0);
        let opts = EvansOptions {
            check_region: false,
            ..EvansOptions::default()
        };
        let g = |l: Complex64| evans_with(&f, l, &opts);
        let z = locate_zeros(&g, [-0.45, -0.3, -0.05, 0.05], 1e-4, 16).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0].re + 0.375).abs() < 1e-3, "{:?}", z);
    }
}
