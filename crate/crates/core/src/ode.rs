//! Dormand–Prince 5(4) integrator with step-size control and dense output.
//!
//! States are fixed-size `[f64; N]` arrays; complex systems are integrated as
//! interleaved real/imaginary parts. Integration may run in either direction
//! (`t_end < t0` integrates backwards). The observer sees every accepted step
//! together with its continuous extension and may stop the integration early,
//! which is how callers implement events.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step magnitude; chosen automatically when `None`.
    pub h_init: Option<f64>,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            h_init: None,
            h_max: f64::INFINITY,
            max_steps: 200_000,
        }
    }
}

impl Tolerances {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }

    pub fn with_h_max(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self
    }
}

/// One accepted step and its quartic continuous extension.
#[derive(Debug, Clone)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    rcont: [[f64; N]; 5],
}

impl<const N: usize> Step<N> {
    /// Dense output at `t` between `t0` and `t1`.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let th = (t - self.t0) / h;
        let th1 = 1.0 - th;
        let r = &self.rcont;
        std::array::from_fn(|i| {
            r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])))
        })
    }

    pub fn contains(&self, t: f64) -> bool {
        let (lo, hi) = if self.t0 <= self.t1 {
            (self.t0, self.t1)
        } else {
            (self.t1, self.t0)
        };
        t >= lo && t <= hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone)]
pub struct Outcome<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub accepted: usize,
    pub rejected: usize,
    /// True when the observer requested the stop.
    pub stopped: bool,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t_end`.
pub fn integrate<const N: usize, F, O>(
    mut rhs: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    tol: &Tolerances,
    mut observer: O,
) -> Result<Outcome<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(&Step<N>) -> Control,
{
    let span = t_end - t0;
    let mut out = Outcome {
        t: t0,
        y: y0,
        accepted: 0,
        rejected: 0,
        stopped: false,
    };
    if span == 0.0 {
        return Ok(out);
    }
    let dir = span.signum();
    let scale = |a: &[f64; N], b: &[f64; N], i: usize| tol.atol + tol.rtol * a[i].abs().max(b[i].abs());

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut h = match tol.h_init {
        Some(h) => h.abs(),
        None => {
            // Hairer–Wanner starting step heuristic.
            let d0 = rms(&y, |i| y[i] / scale(&y, &y, i));
            let d1 = rms(&k1, |i| k1[i] / scale(&y, &y, i));
            let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
            let y1 = axpy(&y, dir * h0, &[(1.0, &k1)]);
            let k2 = rhs(t + dir * h0, &y1);
            let d2 = rms(&k1, |i| (k2[i] - k1[i]) / scale(&y, &y, i)) / h0;
            let h1 = if d1.max(d2) <= 1e-15 {
                (h0 * 1e-3).max(1e-6)
            } else {
                (0.01 / d1.max(d2)).powf(0.2)
            };
            (100.0 * h0).min(h1)
        }
    }
    .min(tol.h_max)
    .min(span.abs());

    let mut steps = 0usize;
    loop {
        if steps >= tol.max_steps {
            return Err(Error::Integrator(format!(
                "step budget {} exhausted at t = {t}",
                tol.max_steps
            )));
        }
        steps += 1;
        let remaining = (t_end - t).abs();
        let mut last = false;
        if h >= remaining * (1.0 - 1e-12) {
            h = remaining;
            last = true;
        }
        let hs = dir * h;

        let k2 = rhs(t + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(
            t + C4 * hs,
            &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = rhs(
            t + C5 * hs,
            &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let y6 = axpy(
            &y,
            hs,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        );
        let k6 = rhs(t + hs, &y6);
        let ynew = axpy(
            &y,
            hs,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = rhs(t + hs, &ynew);

        let err = rms(&ynew, |i| {
            let e = hs
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            e / scale(&y, &ynew, i)
        });

        if !err.is_finite() || ynew.iter().any(|v| !v.is_finite()) {
            out.rejected += 1;
            h *= 0.25;
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(Error::Integrator(format!("non-finite state near t = {t}")));
            }
            continue;
        }

        if err <= 1.0 {
            let ydiff: [f64; N] = std::array::from_fn(|i| ynew[i] - y[i]);
            let bspl: [f64; N] = std::array::from_fn(|i| hs * k1[i] - ydiff[i]);
            let rcont = [
                y,
                ydiff,
                bspl,
                std::array::from_fn(|i| ydiff[i] - hs * k7[i] - bspl[i]),
                std::array::from_fn(|i| {
                    hs * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
                }),
            ];
            let step = Step {
                t0: t,
                t1: if last { t_end } else { t + hs },
                y0: y,
                y1: ynew,
                rcont,
            };
            t = step.t1;
            y = ynew;
            k1 = k7;
            out.accepted += 1;
            out.t = t;
            out.y = y;
            if observer(&step) == Control::Stop {
                out.stopped = true;
                return Ok(out);
            }
            if last {
                return Ok(out);
            }
            let fac = if err == 0.0 { 10.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 10.0) };
            h = (h * fac).min(tol.h_max);
        } else {
            out.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(Error::Integrator(format!("step size underflow at t = {t}")));
            }
        }
    }
}

fn rms<const N: usize>(_v: &[f64; N], term: impl Fn(usize) -> f64) -> f64 {
    if N == 0 {
        return 0.0;
    }
    ((0..N).map(|i| term(i).powi(2)).sum::<f64>() / N as f64).sqrt()
}

/// Integrates and samples the dense output at the (monotone in the integration
/// direction) abscissae `ts`, which must lie between `t0` and `t_end`.
pub fn integrate_sampled<const N: usize, F>(
    rhs: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    tol: &Tolerances,
    ts: &[f64],
) -> Result<Vec<[f64; N]>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let mut out = Vec::with_capacity(ts.len());
    let mut next = 0usize;
    while next < ts.len() && ts[next] == t0 {
        out.push(y0);
        next += 1;
    }
    integrate(rhs, t0, y0, t_end, tol, |step| {
        while next < ts.len() && step.contains(ts[next]) {
            out.push(step.eval(ts[next]));
            next += 1;
        }
        Control::Continue
    })?;
    if out.len() != ts.len() {
        return Err(Error::Integrator(format!(
            "only {} of {} output points reached",
            out.len(),
            ts.len()
        )));
    }
    Ok(out)
}

/// Fixed-step fifth-order Runge–Kutta (the propagating scheme of the
/// adaptive integrator) returning `y0` and the state after each of `n`
/// samples of length `h_sample`, each taken in `substeps` equal steps. The
/// global error is a smooth function of `t`, which matters when the samples
/// are later differentiated numerically.
pub fn fixed_step_samples<const N: usize, F>(
    mut rhs: F,
    t0: f64,
    y0: [f64; N],
    h_sample: f64,
    substeps: usize,
    n: usize,
) -> Vec<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let substeps = substeps.max(1);
    let h = h_sample / substeps as f64;
    let mut out = Vec::with_capacity(n + 1);
    out.push(y0);
    let mut y = y0;
    for k in 0..n {
        let base = t0 + k as f64 * h_sample;
        for j in 0..substeps {
            let t = base + j as f64 * h;
            let k1 = rhs(t, &y);
            let k2 = rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
            let k3 = rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = rhs(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = rhs(
                t + C5 * h,
                &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = rhs(
                t + h,
                &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            y = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        }
        out.push(y);
    }
    out
}
