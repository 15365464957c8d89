//! Quadrature and finite-difference helpers on uniform grids.

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `eps`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, eps, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
}

/// Composite Simpson rule for samples on a uniform grid of spacing `h`.
/// An even number of intervals is integrated exactly by Simpson; with an odd
/// count the last interval uses the 3/8 rule on the final four points.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (values[0] + values[1]),
        3 => h / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        _ => {
            let intervals = n - 1;
            let even_end = if intervals % 2 == 0 { n } else { n - 3 };
            let mut s = 0.0;
            let mut i = 0;
            while i + 2 < even_end {
                s += values[i] + 4.0 * values[i + 1] + values[i + 2];
                i += 2;
            }
            let mut total = h / 3.0 * s;
            if intervals % 2 == 1 {
                let k = n - 4;
                total += 3.0 * h / 8.0
                    * (values[k] + 3.0 * values[k + 1] + 3.0 * values[k + 2] + values[k + 3]);
            }
            total
        }
    }
}

/// Fourth-order cumulative integral `I_i = ∫_{x_origin}^{x_i} f`, with
/// `I_origin = 0`, for samples on a uniform grid.
pub fn cumulative_from(values: &[f64], h: f64, origin: usize) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    // integral over [x_i, x_{i+1}]
    let cell = |i: usize| -> f64 {
        if n < 4 {
            return 0.5 * h * (values[i] + values[i + 1]);
        }
        if i == 0 {
            h / 24.0 * (9.0 * values[0] + 19.0 * values[1] - 5.0 * values[2] + values[3])
        } else if i + 2 >= n {
            h / 24.0 * (values[i - 2] - 5.0 * values[i - 1] + 19.0 * values[i] + 9.0 * values[i + 1])
        } else {
            h / 24.0 * (-values[i - 1] + 13.0 * values[i] + 13.0 * values[i + 1] - values[i + 2])
        }
    };
    for i in origin..n - 1 {
        out[i + 1] = out[i] + cell(i);
    }
    for i in (0..origin).rev() {
        out[i] = out[i + 1] - cell(i);
    }
    out
}

/// Fourth-order central first derivative at interior points `2..n-2`;
/// returns `None` for the two points at each end.
pub fn derivative4(values: &[f64], h: f64) -> Vec<Option<f64>> {
    let n = values.len();
    (0..n)
        .map(|i| {
            (i >= 2 && i + 2 < n).then(|| {
                (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2])
                    / (12.0 * h)
            })
        })
        .collect()
}

/// Fourth-order central second derivative at interior points.
pub fn second_derivative4(values: &[f64], h: f64) -> Vec<Option<f64>> {
    let n = values.len();
    (0..n)
        .map(|i| {
            (i >= 2 && i + 2 < n).then(|| {
                (-values[i - 2] + 16.0 * values[i - 1] - 30.0 * values[i] + 16.0 * values[i + 1]
                    - values[i + 2])
                    / (12.0 * h * h)
            })
        })
        .collect()
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adaptive_simpson_polynomial() {
        let v = adaptive_simpson(&|x: f64| x.powi(3) - x, 0.0, 2.0, 1e-13);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn composite_simpson_even_and_odd() {
        for n in [21usize, 22, 101, 102] {
            let h = std::f64::consts::PI / (n - 1) as f64;
            let v: Vec<f64> = (0..n).map(|i| (i as f64 * h).sin()).collect();
            assert!((simpson(&v, h) - 2.0).abs() < 1e-4, "n={n}");
        }
    }

    #[test]
    fn cumulative_matches_antiderivative() {
        let n = 201;
        let h = 0.05;
        let x0 = -5.0;
        let v: Vec<f64> = (0..n).map(|i| (x0 + i as f64 * h).cos()).collect();
        let origin = 100;
        let c = cumulative_from(&v, h, origin);
        for (i, ci) in c.iter().enumerate() {
            let x = x0 + i as f64 * h;
            assert!((ci - x.sin()).abs() < 1e-6, "i={i}");
        }
    }

    #[test]
    fn derivatives_fourth_order() {
        let h = 0.01;
        let v: Vec<f64> = (0..100).map(|i| (i as f64 * h).exp()).collect();
        let d = derivative4(&v, h);
        let d2 = second_derivative4(&v, h);
        assert!(d[0].is_none() && d[99].is_none());
        assert!((d[50].unwrap() - v[50]).abs() < 1e-9);
        assert!((d2[50].unwrap() - v[50]).abs() < 1e-6);
    }
}
