//! Piecewise Hermite interpolation.

/// Cubic Hermite interpolant through `(x_i, y_i)` with slopes `d_i`.
/// Abscissae must be strictly monotone (either direction).
#[derive(Debug, Clone)]
pub struct CubicHermite {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
    increasing: bool,
}

impl CubicHermite {
    pub fn new(x: Vec<f64>, y: Vec<f64>, d: Vec<f64>) -> Self {
        assert!(x.len() >= 2 && x.len() == y.len() && y.len() == d.len());
        let increasing = x[1] > x[0];
        Self { x, y, d, increasing }
    }

    /// Fritsch–Carlson slopes: the interpolant is monotone on every interval
    /// where the data are.
    pub fn monotone(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        assert!(n >= 2 && n == y.len());
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
        let mut d = vec![0.0; n];
        d[0] = delta[0];
        d[n - 1] = delta[n - 2];
        for i in 1..n - 1 {
            d[i] = if delta[i - 1] * delta[i] <= 0.0 {
                0.0
            } else {
                let w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
                let w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
                (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i])
            };
        }
        Self::new(x, y, d)
    }

    pub fn domain(&self) -> (f64, f64) {
        let (a, b) = (self.x[0], *self.x.last().unwrap());
        (a.min(b), a.max(b))
    }

    fn interval(&self, t: f64) -> usize {
        let n = self.x.len();
        let idx = if self.increasing {
            self.x.partition_point(|&v| v <= t)
        } else {
            self.x.partition_point(|&v| v >= t)
        };
        idx.clamp(1, n - 1) - 1
    }

    /// Value, first and second derivative at `t` (extrapolates the end cubics).
    pub fn eval3(&self, t: f64) -> (f64, f64, f64) {
        let i = self.interval(t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.d[i] * h, self.d[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let v = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1;
        let dv = ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * m1)
            / h;
        let d2v = ((12.0 * s - 6.0) * y0
            + (6.0 * s - 4.0) * m0
            + (-12.0 * s + 6.0) * y1
            + (6.0 * s - 2.0) * m1)
            / (h * h);
        (v, dv, d2v)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval3(t).0
    }
}

/// Quintic Hermite interpolant on a uniform grid using values, first and
/// second derivatives at the nodes.
#[derive(Debug, Clone)]
pub struct QuinticHermite {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
}

impl QuinticHermite {
    pub fn uniform(x0: f64, h: f64, y: Vec<f64>, d1: Vec<f64>, d2: Vec<f64>) -> Self {
        assert!(y.len() >= 2 && y.len() == d1.len() && y.len() == d2.len() && h > 0.0);
        Self { x0, h, y, d1, d2 }
    }

    /// Value and first derivative at `t`; clamps `t` to the grid.
    pub fn eval2(&self, t: f64) -> (f64, f64) {
        let n = self.y.len();
        let pos = ((t - self.x0) / self.h).clamp(0.0, (n - 1) as f64);
        let i = (pos.floor() as usize).min(n - 2);
        let s = pos - i as f64;
        let h = self.h;
        let (p0, p1) = (self.y[i], self.y[i + 1]);
        let (v0, v1) = (self.d1[i] * h, self.d1[i + 1] * h);
        let (a0, a1) = (self.d2[i] * h * h, self.d2[i + 1] * h * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let s4 = s3 * s;
        let s5 = s4 * s;
        let h00 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
        let h01 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
        let h10 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
        let h11 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
        let h20 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
        let h21 = 0.5 * s3 - s4 + 0.5 * s5;
        let v = h00 * p0 + h01 * p1 + h10 * v0 + h11 * v1 + h20 * a0 + h21 * a1;
        let dh00 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
        let dh10 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
        let dh11 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
        let dh20 = s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4;
        let dh21 = 1.5 * s2 - 4.0 * s3 + 2.5 * s4;
        let dv = (dh00 * (p0 - p1) + dh10 * v0 + dh11 * v1 + dh20 * a0 + dh21 * a1) / h;
        (v, dv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_hermite_exact_for_cubics() {
        let f = |x: f64| x * x * x - 2.0 * x + 1.0;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let xs: Vec<f64> = (0..5).map(|i| i as f64 * 0.25).collect();
        let ip = CubicHermite::new(
            xs.clone(),
            xs.iter().map(|&x| f(x)).collect(),
            xs.iter().map(|&x| df(x)).collect(),
        );
        for t in [0.1, 0.33, 0.9] {
            let (v, d, _) = ip.eval3(t);
            assert!((v - f(t)).abs() < 1e-13 && (d - df(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn decreasing_abscissae() {
        let xs = vec![1.0, 0.5, 0.0];
        let ip = CubicHermite::new(xs, vec![1.0, 0.5, 0.0], vec![1.0, 1.0, 1.0]);
        assert!((ip.eval(0.25) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn monotone_slopes_preserve_monotonicity() {
        let xs = vec![0.0, 1.0, 2.0, 3.0];
        let ys = vec![0.0, 0.0, 1.0, 1.0];
        let ip = CubicHermite::monotone(xs, ys);
        let mut prev = -1.0;
        for k in 0..=300 {
            let v = ip.eval(k as f64 * 0.01);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn quintic_is_sixth_order_accurate() {
        let h = 0.1;
        let xs: Vec<f64> = (0..40).map(|i| i as f64 * h).collect();
        let ip = QuinticHermite::uniform(
            0.0,
            h,
            xs.iter().map(|x| x.sin()).collect(),
            xs.iter().map(|x| x.cos()).collect(),
            xs.iter().map(|x| -x.sin()).collect(),
        );
        for t in [0.05, 1.234, 3.0001] {
            let (v, d) = ip.eval2(t);
            assert!((v - f64::sin(t)).abs() < 1e-9);
            assert!((d - f64::cos(t)).abs() < 1e-7);
        }
    }
}
