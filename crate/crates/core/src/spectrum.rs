//! Constant-coefficient spectral data at the two rest states: asymptotic
//! coefficient matrices, spatial eigenvalues, the dispersion curves bounding
//! the essential spectrum, and the spectral gap `chi0(tau)`.
//!
//! With `s = 1 - c^2 tau`, `b = g(U_±, tau)` and `|a| = |f'(U_±)|`, a
//! Fourier mode `e^{i xi x / s}` of the limiting system has temporal
//! eigenvalue `lambda` solving
//!
//! `s tau lambda^2 + (s b - 2 i c xi tau) lambda + (s |a| + xi^2 - i c xi b) = 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::model::ModelSpec;

/// Consistent-splitting margins below this are treated as violations.
pub const SPLITTING_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Minus,
    Plus,
}

impl End {
    pub const BOTH: [End; 2] = [End::Minus, End::Plus];

    pub fn name(self) -> &'static str {
        match self {
            End::Minus => "minus",
            End::Plus => "plus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSpectralData {
    /// `f'(0) < 0`
    pub a_minus: f64,
    /// `f'(1) < 0`
    pub a_plus: f64,
    pub b_minus: f64,
    pub b_plus: f64,
    pub c: f64,
    pub tau: f64,
}

impl AsymptoticSpectralData {
    pub fn new(a_minus: f64, a_plus: f64, b_minus: f64, b_plus: f64, c: f64, tau: f64) -> Result<Self> {
        if !(a_minus < 0.0 && a_plus < 0.0) {
            return Err(Error::InvalidModel(format!(
                "endpoint slopes must be negative (a- = {a_minus}, a+ = {a_plus})"
            )));
        }
        if !(b_minus > 0.0 && b_plus > 0.0) {
            return Err(Error::InvalidModel(format!(
                "endpoint damping must be positive (b- = {b_minus}, b+ = {b_plus})"
            )));
        }
        if !(tau >= 0.0) || !(c * c * tau < 1.0) {
            return Err(Error::InvalidModel(format!("c^2 tau = {} is not below 1", c * c * tau)));
        }
        Ok(Self {
            a_minus,
            a_plus,
            b_minus,
            b_plus,
            c,
            tau,
        })
    }

    /// Endpoint data of a model for a front moving with speed `c`.
    pub fn from_model(model: &ModelSpec, c: f64) -> Result<Self> {
        Self::new(model.df(0.0), model.df(1.0), model.g(0.0), model.g(1.0), c, model.tau)
    }

    /// `(|a|, b)` at one end.
    pub fn end(&self, end: End) -> (f64, f64) {
        match end {
            End::Minus => (self.a_minus.abs(), self.b_minus),
            End::Plus => (self.a_plus.abs(), self.b_plus),
        }
    }

    /// `1 - c^2 tau`
    pub fn s(&self) -> f64 {
        1.0 - self.c * self.c * self.tau
    }
}

/// `lim_{x -> ±inf}` of the first-order coefficient matrix.
pub fn asymptotic_matrix(data: &AsymptoticSpectralData, end: End, lambda: Complex64) -> Mat2 {
    let (abs_a, b) = data.end(end);
    let (c, tau, s) = (data.c, data.tau, data.s());
    let one = Complex64::new(1.0, 0.0);
    Mat2::new(
        Complex64::new(0.0, 0.0),
        one,
        (tau * lambda * lambda + lambda * b + abs_a) / s,
        -c * (b + 2.0 * tau * lambda) / s,
    )
}

/// Roots of `a z^2 + b z + c = 0` without cancellation; the first root is
/// the one of larger magnitude. For `a = 0` only the second is meaningful
/// and the first is returned as infinity.
pub fn stable_quadratic(a: Complex64, b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    let disc = (b * b - 4.0 * a * c).sqrt();
    let q = if (b.conj() * disc).re >= 0.0 {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    let big = if a == Complex64::new(0.0, 0.0) {
        Complex64::new(f64::INFINITY, 0.0)
    } else {
        q / a
    };
    let small = if q == Complex64::new(0.0, 0.0) {
        Complex64::new(0.0, 0.0)
    } else {
        c / q
    };
    (big, small)
}

/// Spatial eigenvalues `(mu1, mu2)` of the asymptotic matrix, ordered so
/// that `Re mu1 < Re mu2`, without any region check.
pub fn spatial_eigenvalues_unchecked(
    data: &AsymptoticSpectralData,
    end: End,
    lambda: Complex64,
) -> (Complex64, Complex64) {
    let (abs_a, b) = data.end(end);
    let (c, tau, s) = (data.c, data.tau, data.s());
    // s mu^2 + c (b + 2 tau lambda) mu - (tau lambda^2 + b lambda + |a|) = 0
    let (r1, r2) = stable_quadratic(
        Complex64::new(s, 0.0),
        c * (b + 2.0 * tau * lambda),
        -(tau * lambda * lambda + b * lambda + abs_a),
    );
    if r1.re <= r2.re {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

/// Spatial eigenvalues for `lambda` in `Omega = {Re lambda > -chi0}`, where
/// one decays and one grows.
pub fn spatial_eigenvalues(
    data: &AsymptoticSpectralData,
    end: End,
    lambda: Complex64,
) -> Result<(Complex64, Complex64)> {
    let gap = spectral_gap(data);
    if !(lambda.re > -gap.chi0) {
        return Err(Error::OutsideRegion(lambda));
    }
    Ok(spatial_eigenvalues_unchecked(data, end, lambda))
}

/// Spatial eigenvalues along a connected sample path, each pair assigned to
/// continue the previous one (nearest-neighbour matching). The first pair is
/// ordered by real part.
pub fn spatial_eigenvalues_along(
    data: &AsymptoticSpectralData,
    end: End,
    path: &[Complex64],
) -> Vec<(Complex64, Complex64)> {
    let mut out: Vec<(Complex64, Complex64)> = Vec::with_capacity(path.len());
    for &lambda in path {
        let (r1, r2) = spatial_eigenvalues_unchecked(data, end, lambda);
        let pair = match out.last() {
            None => (r1, r2),
            Some(&(p1, p2)) => {
                if (r1 - p1).norm() + (r2 - p2).norm() <= (r2 - p1).norm() + (r1 - p2).norm() {
                    (r1, r2)
                } else {
                    (r2, r1)
                }
            }
        };
        out.push(pair);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    TauZero,
    /// `b^2 >= 4 tau |a|`: the curves have a real segment near `xi = 0`.
    CaseSmallTau,
    /// `b^2 < 4 tau |a|`: the curves are vertical lines `Re = -b / 2 tau`.
    CaseLargeTau,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralGap {
    pub chi0_minus: f64,
    pub chi0_plus: f64,
    pub chi0: f64,
    pub regimes: [Regime; 2],
}

fn gap_at(abs_a: f64, b: f64, tau: f64) -> (f64, Regime) {
    if tau == 0.0 {
        (abs_a / (2.0 * b), Regime::TauZero)
    } else if b * b >= 4.0 * tau * abs_a {
        // ½ (b/2tau - sqrt(b²/4tau² - |a|/tau)) written without cancellation
        (abs_a / (b + (b * b - 4.0 * tau * abs_a).sqrt()), Regime::CaseSmallTau)
    } else {
        (b / (4.0 * tau), Regime::CaseLargeTau)
    }
}

pub fn spectral_gap(data: &AsymptoticSpectralData) -> SpectralGap {
    let (am, bm) = data.end(End::Minus);
    let (ap, bp) = data.end(End::Plus);
    let (chi0_minus, rm) = gap_at(am, bm, data.tau);
    let (chi0_plus, rp) = gap_at(ap, bp, data.tau);
    SpectralGap {
        chi0_minus,
        chi0_plus,
        chi0: chi0_minus.min(chi0_plus),
        regimes: [rm, rp],
    }
}

/// Coefficients `(A, B, C)` of the dispersion quadratic in `lambda`.
fn dispersion_coefficients(
    data: &AsymptoticSpectralData,
    end: End,
    xi: f64,
) -> (Complex64, Complex64, Complex64) {
    let (abs_a, b) = data.end(end);
    let (c, tau, s) = (data.c, data.tau, data.s());
    (
        Complex64::new(s * tau, 0.0),
        Complex64::new(s * b, -2.0 * c * xi * tau),
        Complex64::new(s * abs_a + xi * xi, -c * xi * b),
    )
}

/// Residual of the dispersion relation relative to the size of its terms.
pub fn dispersion_residual(data: &AsymptoticSpectralData, end: End, xi: f64, lambda: Complex64) -> f64 {
    let (a, b, c) = dispersion_coefficients(data, end, xi);
    let scale = a.norm() * lambda.norm_sqr() + b.norm() * lambda.norm() + c.norm();
    (a * lambda * lambda + b * lambda + c).norm() / scale.max(f64::MIN_POSITIVE)
}

/// Roots of the dispersion quadratic at `xi`: `[branch 1, branch 2]`, or a
/// single root when `tau = 0`.
pub fn dispersion_roots(data: &AsymptoticSpectralData, end: End, xi: f64) -> Vec<Complex64> {
    let (a, b, c) = dispersion_coefficients(data, end, xi);
    if data.tau == 0.0 {
        return vec![-c / b];
    }
    let (big, small) = stable_quadratic(a, b, c);
    let mut roots = vec![big, small];
    // branch 1 carries the "+" sign of the case formulas
    let reference = case_formula_roots(data, end, xi);
    if (roots[0] - reference[0]).norm() + (roots[1] - reference[1]).norm()
        > (roots[1] - reference[0]).norm() + (roots[0] - reference[1]).norm()
    {
        roots.swap(0, 1);
    }
    roots
}

/// Squared threshold frequency `(xi0)^2 = s^2 (b^2/4tau - |a|)`; negative in
/// the large-tau regime.
pub fn xi0_squared(data: &AsymptoticSpectralData, end: End) -> f64 {
    let (abs_a, b) = data.end(end);
    let s = data.s();
    s * s * (b * b / (4.0 * data.tau) - abs_a)
}

/// The real/imaginary-part case formulas for the two roots, `[+, -]`.
/// Requires `tau > 0`.
pub fn case_formula_roots(data: &AsymptoticSpectralData, end: End, xi: f64) -> [Complex64; 2] {
    let (abs_a, b) = data.end(end);
    let (c, tau, s) = (data.c, data.tau, data.s());
    let q = abs_a + xi * xi / (s * s);
    let delta2 = b * b - 4.0 * tau * q;
    let beta0 = c * xi / s;
    if delta2 < 0.0 {
        // case I: common real part, split imaginary parts
        let eta = -b / (2.0 * tau);
        let w = (-delta2).sqrt() / (2.0 * tau);
        [Complex64::new(eta, beta0 + w), Complex64::new(eta, beta0 - w)]
    } else {
        // case II: common imaginary part, split real parts
        let sq = delta2.sqrt();
        let eta_plus = -2.0 * q / (b + sq);
        let eta_minus = -(b + sq) / (2.0 * tau);
        [Complex64::new(eta_plus, beta0), Complex64::new(eta_minus, beta0)]
    }
}

/// The `tau = 0` curve `-|a|/b + i c xi - xi^2 / b`.
pub fn tau_zero_curve(data: &AsymptoticSpectralData, end: End, xi: f64) -> Complex64 {
    let (abs_a, b) = data.end(end);
    Complex64::new(-abs_a / b - xi * xi / b, data.c * xi)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DispersionCurve {
    pub end: End,
    pub branch: u8,
    pub xi: Vec<f64>,
    pub lambda: Vec<Complex64>,
}

impl DispersionCurve {
    pub fn max_re(&self) -> f64 {
        self.lambda.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Default grid: 4001 points on `[-50, 50]`.
pub fn default_xi_grid() -> Vec<f64> {
    uniform_grid(-50.0, 50.0, 4001)
}

pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
        .collect()
}

/// Agreement tolerance between the quadratic solve and the case formulas.
pub const CASE_AGREEMENT_TOL: f64 = 1e-9;

/// Dispersion curves at one end. For `tau > 0` both branches are returned
/// and every point is cross-checked against the case formulas; for
/// `tau = 0` there is a single branch.
pub fn dispersion_curves(
    data: &AsymptoticSpectralData,
    end: End,
    xi_grid: &[f64],
) -> Result<Vec<DispersionCurve>> {
    let mut branches: Vec<Vec<Complex64>> = vec![Vec::with_capacity(xi_grid.len()); if data.tau == 0.0 { 1 } else { 2 }];
    for &xi in xi_grid {
        let roots = dispersion_roots(data, end, xi);
        if data.tau > 0.0 {
            let case = case_formula_roots(data, end, xi);
            for (r, c) in roots.iter().zip(case.iter()) {
                let err = (r - c).norm();
                if err > CASE_AGREEMENT_TOL * r.norm().max(1.0) {
                    return Err(Error::Consistency(format!(
                        "dispersion root {r} disagrees with the case formula {c} at xi = {xi} ({} end)",
                        end.name()
                    )));
                }
            }
        }
        for (branch, r) in branches.iter_mut().zip(roots) {
            branch.push(r);
        }
    }
    Ok(branches
        .into_iter()
        .enumerate()
        .map(|(k, lambda)| DispersionCurve {
            end,
            branch: k as u8 + 1,
            xi: xi_grid.to_vec(),
            lambda,
        })
        .collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplittingReport {
    /// Smallest `min(|Re mu1|, |Re mu2|)` over samples and both ends.
    pub min_margin: f64,
    pub worst_lambda: Complex64,
    pub worst_end: End,
}

/// Checks that both asymptotic matrices are hyperbolic with one stable and
/// one unstable direction at every sample.
pub fn consistent_splitting_check(
    data: &AsymptoticSpectralData,
    lambdas: &[Complex64],
    floor: f64,
) -> Result<SplittingReport> {
    let mut report = SplittingReport {
        min_margin: f64::INFINITY,
        worst_lambda: Complex64::new(f64::NAN, f64::NAN),
        worst_end: End::Minus,
    };
    for &lambda in lambdas {
        for end in End::BOTH {
            let (m1, m2) = spatial_eigenvalues(data, end, lambda)?;
            let margin = if m1.re < 0.0 && m2.re > 0.0 {
                (-m1.re).min(m2.re)
            } else {
                -(m1.re.abs().min(m2.re.abs()))
            };
            if margin < report.min_margin {
                report.min_margin = margin;
                report.worst_lambda = lambda;
                report.worst_end = end;
            }
            if margin <= floor {
                return Err(Error::Splitting { lambda, margin, floor });
            }
        }
    }
    Ok(report)
}
