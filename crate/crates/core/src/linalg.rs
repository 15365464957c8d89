use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;

/// Dense 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Mat2([[z, z], [z, z]])
    }

    pub fn identity() -> Self {
        let (z, o) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Mat2([[o, z], [z, o]])
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Mat2(self.0.map(|row| row.map(|e| e * s)))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|e| e.norm()).fold(0.0, f64::max)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + o.0[i][j])))
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] - o.0[i][j])))
    }
}

/// Determinant of the matrix with columns `a` and `b`.
pub fn det_cols(a: [Complex64; 2], b: [Complex64; 2]) -> Complex64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Thomas algorithm for a tridiagonal system.
///
/// `lower[i]` multiplies `x[i-1]` in row `i` (entry 0 unused), `upper[i]`
/// multiplies `x[i+1]` (last entry unused). Returns `None` when a pivot
/// vanishes relative to the row scale.
pub fn solve_tridiagonal<T>(lower: &[T], diag: &[T], upper: &[T], rhs: &[T]) -> Option<Vec<T>>
where
    T: Copy
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Magnitude,
{
    let n = diag.len();
    assert!(lower.len() == n && upper.len() == n && rhs.len() == n);
    if n == 0 {
        return Some(Vec::new());
    }
    let mut c = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    let mut pivot = diag[0];
    if pivot.magnitude() <= 1e-14 * (diag[0].magnitude() + upper[0].magnitude()) {
        return None;
    }
    c.push(upper[0] / pivot);
    d.push(rhs[0] / pivot);
    for i in 1..n {
        pivot = diag[i] - lower[i] * c[i - 1];
        let row_scale = diag[i].magnitude() + lower[i].magnitude() + upper[i].magnitude();
        if !(pivot.magnitude() > 1e-14 * row_scale) {
            return None;
        }
        c.push(upper[i] / pivot);
        d.push((rhs[i] - lower[i] * d[i - 1]) / pivot);
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] = x[i] - c[i] * next;
    }
    Some(x)
}

pub trait Magnitude {
    fn magnitude(&self) -> f64;
}

impl Magnitude for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Magnitude for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_real_matches_dense_product() {
        let n = 6;
        let lower: Vec<f64> = (0..n).map(|i| if i == 0 { 0.0 } else { -1.0 + 0.1 * i as f64 }).collect();
        let diag: Vec<f64> = (0..n).map(|i| 4.0 + i as f64).collect();
        let upper: Vec<f64> = (0..n).map(|i| if i + 1 == n { 0.0 } else { 0.5 }).collect();
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 1.0).collect();
        let rhs: Vec<f64> = (0..n)
            .map(|i| {
                let mut s = diag[i] * x_true[i];
                if i > 0 {
                    s += lower[i] * x_true[i - 1];
                }
                if i + 1 < n {
                    s += upper[i] * x_true[i + 1];
                }
                s
            })
            .collect();
        let x = solve_tridiagonal(&lower, &diag, &upper, &rhs).unwrap();
        for (a, b) in x.iter().zip(&x_true) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn singular_pivot_is_reported() {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        assert!(solve_tridiagonal(&[z, o], &[o, o], &[o, z], &[o, o]).is_none());
    }

    #[test]
    fn det_and_trace() {
        let m = Mat2::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 1.0),
            Complex64::new(4.0, 0.0),
        );
        assert_eq!(m.det(), Complex64::new(-2.0, -2.0));
        assert_eq!(m.trace(), Complex64::new(5.0, 0.0));
    }
}
