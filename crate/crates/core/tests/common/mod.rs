//! Property checks shared by the proptest suite and the acceptance harness.
//! Each check returns `Err(message)` on violation.

#![allow(dead_code)]

use frontlab::evans::{
    companion_residuals, translation_eigenvalue_residual, winding_number, winding_of, Contour, CoefficientFields,
    WindingOptions,
};
use frontlab::model::PolynomialDamping;
use frontlab::profile::{compute_front, find_gamma_star, minmax_bracket, shooting_mismatch, ShootingOptions};
use frontlab::{Damping, ModelSpec, Reaction, ValidatedModel};
use num_complex::Complex64;

pub type Check = Result<(), String>;

/// Damping laws indexed 0..3: `g = 1`, Cattaneo–Maxwell, and the custom
/// polynomial `1 + u/2 + tau u^2 / 5`.
pub fn damping(kind: usize) -> Damping {
    match kind % 3 {
        0 => Damping::ConstantOne,
        1 => Damping::CattaneoMaxwell,
        _ => Damping::Custom(PolynomialDamping {
            coefficients: vec![1.0, 0.5],
            tau_coefficients: vec![0.0, 0.0, 0.2],
        }),
    }
}

pub fn spec(alpha: f64, kind: usize, tau: f64) -> ModelSpec {
    ModelSpec::new(Reaction::cubic(alpha, 1.0).unwrap(), damping(kind), tau).unwrap()
}

pub fn model(alpha: f64, kind: usize, tau: f64) -> Result<ValidatedModel, String> {
    spec(alpha, kind, tau).validate().map_err(|e| e.to_string())
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// The shooting mismatch is nondecreasing in `gamma`.
pub fn mismatch_monotone(alpha: f64, kind: usize, tau: f64, gamma: f64, step: f64) -> Check {
    let m = spec(alpha, kind, tau);
    let opts = ShootingOptions::default();
    let h0 = shooting_mismatch(&m, gamma, &opts).map_err(err)?;
    let h1 = shooting_mismatch(&m, gamma + step, &opts).map_err(err)?;
    if h1 >= h0 - 1e-9 {
        Ok(())
    } else {
        Err(format!("h({gamma}) = {h0} > h({}) = {h1}", gamma + step))
    }
}

/// Any logistic candidate brackets `gamma*` in the min-max sense.
pub fn minmax_contains(alpha: f64, kind: usize, tau: f64, rate: f64) -> Check {
    let m = model(alpha, kind, tau)?;
    let gamma = find_gamma_star(&m).map_err(err)?;
    let reach = 20.0 / rate;
    let n = 2001;
    let (mut w, mut dw, mut d2w) = (Vec::new(), Vec::new(), Vec::new());
    for k in 0..n {
        let eta = -reach + 2.0 * reach * k as f64 / (n - 1) as f64;
        let v = 1.0 / (1.0 + (-rate * eta).exp());
        let p = v * (1.0 - v);
        w.push(v);
        dw.push(rate * p);
        d2w.push(rate * rate * p * (1.0 - 2.0 * v));
    }
    let (lo, hi) = minmax_bracket(&m, &w, &dw, &d2w).map_err(err)?;
    if lo - 1e-9 <= gamma && gamma <= hi + 1e-9 {
        Ok(())
    } else {
        Err(format!("gamma* = {gamma} outside [{lo}, {hi}] for rate {rate}"))
    }
}

/// The translation mode solves the linearization at `lambda = 0`, with a
/// residual linear in its amplitude; the Evans function winds once around
/// any small circle about the origin.
pub fn translation_mode(alpha: f64, kind: usize, tau: f64, radius: f64) -> Check {
    let m = model(alpha, kind, tau)?;
    let front = compute_front(&m).map_err(err)?;
    let fields = CoefficientFields::from_front(&m, &front).map_err(err)?;
    let r1 = translation_eigenvalue_residual(&fields, &front, 1.0);
    let r2 = translation_eigenvalue_residual(&fields, &front, 2.0);
    if !(r1 < 1e-7) {
        return Err(format!("translation residual {r1:e}"));
    }
    if (r2 - 2.0 * r1).abs() > 1e-12 + 1e-9 * r1 {
        return Err(format!("residual not linear: {r1:e}, {r2:e}"));
    }
    let circle = Contour::Circle {
        center: Complex64::new(0.0, 0.0),
        radius,
    };
    let w = winding_number(&fields, &circle).map_err(err)?;
    if w.winding != 1 {
        return Err(format!("winding {} about the origin at radius {radius}", w.winding));
    }
    Ok(())
}

/// The companion and first-order formulations agree: both vanish on the
/// translation mode (any complex multiple) and both detect a wrong lambda.
pub fn companion_equivalence(alpha: f64, kind: usize, tau: f64, amp: Complex64, wrong: Complex64) -> Check {
    let m = model(alpha, kind, tau)?;
    let front = compute_front(&m).map_err(err)?;
    let fields = CoefficientFields::from_front(&m, &front).map_err(err)?;
    let v: Vec<Complex64> = front.u_x.iter().map(|&x| amp * x).collect();
    let (rc, rf) = companion_residuals(&fields, Complex64::new(0.0, 0.0), &v).map_err(err)?;
    let tol = 1e-7 * amp.norm();
    if !(rc < tol && rf < tol) {
        return Err(format!("residuals {rc:e} (companion), {rf:e} (first order) above {tol:e}"));
    }
    let (rc, rf) = companion_residuals(&fields, wrong, &v).map_err(err)?;
    let floor = 1e-3 * wrong.norm() * amp.norm();
    if !(rc > floor && rf > floor) {
        return Err(format!("lambda = {wrong} not detected: {rc:e}, {rf:e}"));
    }
    Ok(())
}

/// The argument principle returns integers that count the zeros of a
/// polynomial times a zero-free factor.
pub fn winding_integrality(zeros: &[Complex64], radius: f64, twist: Complex64) -> Check {
    let inside = zeros.iter().filter(|z| z.norm() < radius).count() as i64;
    if zeros.iter().any(|z| (z.norm() - radius).abs() < 0.05) {
        return Ok(()); // contour too close to a zero; not a valid sample
    }
    let f = |l: Complex64| -> frontlab::Result<Complex64> {
        Ok(zeros.iter().map(|z| l - z).product::<Complex64>() * (twist * l).exp())
    };
    let circle = Contour::Circle {
        center: Complex64::new(0.0, 0.0),
        radius,
    };
    let w = winding_of(f, &circle, &WindingOptions::default()).map_err(err)?;
    if (w.raw_winding - w.winding as f64).abs() > 1e-9 {
        return Err(format!("raw winding {} not an integer", w.raw_winding));
    }
    if w.winding != inside {
        return Err(format!("winding {} but {inside} zeros inside", w.winding));
    }
    Ok(())
}
