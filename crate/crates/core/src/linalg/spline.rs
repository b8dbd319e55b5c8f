//! Periodic spline interpolation: cubic on nonuniform knots, quintic on
//! uniform knots.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct PeriodicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
    period: f64,
}

impl PeriodicSpline {
    /// `x` strictly increasing with `x[n-1] - x[0] < period`; the value at
    /// `x[0] + period` is taken to equal `y[0]`.
    pub fn new(x: Vec<f64>, y: Vec<f64>, period: f64) -> Result<Self> {
        let n = x.len();
        if n < 4 || y.len() != n {
            return Err(Error::Precondition("periodic spline needs at least 4 matching knots".into()));
        }
        if !(x[n - 1] - x[0] < period) {
            return Err(Error::Precondition("knots span more than one period".into()));
        }
        let h: Vec<f64> = (0..n)
            .map(|i| if i + 1 < n { x[i + 1] - x[i] } else { x[0] + period - x[n - 1] })
            .collect();
        if h.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::Precondition("spline knots must be strictly increasing".into()));
        }
        // Cyclic tridiagonal system for second derivatives M:
        // h_{i-1} M_{i-1} + 2 (h_{i-1} + h_i) M_i + h_i M_{i+1} = rhs_i
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut r = vec![0.0; n];
        for i in 0..n {
            let im = (i + n - 1) % n;
            let ip = (i + 1) % n;
            a[i] = h[im];
            b[i] = 2.0 * (h[im] + h[i]);
            c[i] = h[i];
            r[i] = 6.0 * ((y[ip] - y[i]) / h[i] - (y[i] - y[im]) / h[im]);
        }
        let m = solve_cyclic(&a, &b, &c, &r);
        Ok(Self { x, y, m, period })
    }

    /// Uniform knots `x0 + i * period / n`.
    pub fn uniform(x0: f64, y: Vec<f64>, period: f64) -> Result<Self> {
        let n = y.len();
        let x = (0..n).map(|i| x0 + period * i as f64 / n as f64).collect();
        Self::new(x, y, period)
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    fn locate(&self, t: f64) -> (usize, f64, f64) {
        let n = self.x.len();
        let mut u = (t - self.x[0]).rem_euclid(self.period) + self.x[0];
        if u >= self.x[0] + self.period {
            u = self.x[0];
        }
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&u).unwrap()) {
            Ok(k) => k,
            Err(k) => k - 1,
        };
        let i = i.min(n - 1);
        let h = if i + 1 < n { self.x[i + 1] - self.x[i] } else { self.x[0] + self.period - self.x[i] };
        (i, u - self.x[i], h)
    }

    /// Value and first two derivatives.
    pub fn eval3(&self, t: f64) -> (f64, f64, f64) {
        let n = self.x.len();
        let (i, d, h) = self.locate(t);
        let j = (i + 1) % n;
        let (y0, y1, m0, m1) = (self.y[i], self.y[j], self.m[i], self.m[j]);
        let e = h - d;
        let v = m0 * e.powi(3) / (6.0 * h) + m1 * d.powi(3) / (6.0 * h)
            + (y0 / h - m0 * h / 6.0) * e
            + (y1 / h - m1 * h / 6.0) * d;
        let dv = -m0 * e * e / (2.0 * h) + m1 * d * d / (2.0 * h) + (y1 - y0) / h - (m1 - m0) * h / 6.0;
        let ddv = (m0 * e + m1 * d) / h;
        (v, dv, ddv)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval3(t).0
    }

    pub fn deriv(&self, t: f64) -> f64 {
        self.eval3(t).1
    }
}

/// Segment polynomials of the cardinal quintic B-spline, times 120: on
/// `[k, k + 1]` the basis function starting at 0 is `sum_i Q[k][i] u^i`.
const QUINTIC: [[f64; 6]; 6] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    [1.0, 5.0, 10.0, 10.0, 5.0, -5.0],
    [26.0, 50.0, 20.0, -20.0, -20.0, 10.0],
    [66.0, 0.0, -60.0, 0.0, 30.0, -10.0],
    [26.0, -50.0, 20.0, 20.0, -20.0, 5.0],
    [1.0, -5.0, 10.0, -10.0, 5.0, -1.0],
];

/// Periodic quintic interpolating spline on the knots `i * period / n`.
/// Four continuous derivatives, so curvature computed from it has two.
#[derive(Debug, Clone)]
pub struct PeriodicQuintic {
    /// B-spline coefficients, `c[i]` centred on knot `i`.
    c: Vec<f64>,
    h: f64,
    period: f64,
}

impl PeriodicQuintic {
    pub fn new(y: &[f64], period: f64) -> Result<Self> {
        let n = y.len();
        if n < 6 {
            return Err(Error::Precondition("periodic quintic spline needs at least 6 knots".into()));
        }
        // circulant system (c[i-2] + 26 c[i-1] + 66 c[i] + 26 c[i+1] + c[i+2]) / 120 = y[i]
        let mut buf: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(n).process(&mut buf);
        for (k, b) in buf.iter_mut().enumerate() {
            let w = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let lam = (66.0 + 52.0 * w.cos() + 2.0 * (2.0 * w).cos()) / 120.0;
            *b /= lam * n as f64;
        }
        planner.plan_fft_inverse(n).process(&mut buf);
        Ok(Self { c: buf.iter().map(|z| z.re).collect(), h: period / n as f64, period })
    }

    /// Value and first two derivatives.
    pub fn eval3(&self, t: f64) -> (f64, f64, f64) {
        let n = self.c.len();
        let x = t.rem_euclid(self.period) / self.h;
        let i = (x.floor() as usize).min(n - 1);
        let u = x - i as f64;
        let (mut v, mut dv, mut ddv) = (0.0, 0.0, 0.0);
        for (seg, q) in QUINTIC.iter().enumerate() {
            // the basis function on its segment `seg` is centred on knot i + 3 - seg
            let cj = self.c[(i + 3 + n - seg) % n];
            let p = q[0] + u * (q[1] + u * (q[2] + u * (q[3] + u * (q[4] + u * q[5]))));
            let dp = q[1] + u * (2.0 * q[2] + u * (3.0 * q[3] + u * (4.0 * q[4] + u * 5.0 * q[5])));
            let ddp = 2.0 * q[2] + u * (6.0 * q[3] + u * (12.0 * q[4] + u * 20.0 * q[5]));
            v += cj * p;
            dv += cj * dp;
            ddv += cj * ddp;
        }
        let s = 1.0 / 120.0;
        (v * s, dv * s / self.h, ddv * s / (self.h * self.h))
    }
}

/// Solves a cyclic tridiagonal system via Sherman-Morrison.
/// `a[i]` multiplies `x[i-1]`, `c[i]` multiplies `x[i+1]` (indices mod n).
pub fn solve_cyclic(a: &[f64], b: &[f64], c: &[f64], r: &[f64]) -> Vec<f64> {
    let n = b.len();
    let gamma = -b[0];
    let mut bb = b.to_vec();
    bb[0] -= gamma;
    bb[n - 1] -= a[0] * c[n - 1] / gamma;
    let x = thomas(a, &bb, c, r);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = c[n - 1];
    let z = thomas(a, &bb, c, &u);
    let fact = (x[0] + a[0] * x[n - 1] / gamma) / (1.0 + z[0] + a[0] * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

fn thomas(a: &[f64], b: &[f64], c: &[f64], r: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    cp[0] = c[0] / b[0];
    dp[0] = r[0] / b[0];
    for i in 1..n {
        let den = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / den;
        dp[i] = (r[i] - a[i] * dp[i - 1]) / den;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = dp[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = dp[i] - cp[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn reproduces_trig_function() {
        let n = 64;
        let y: Vec<f64> = (0..n).map(|i| (2.0 * PI * i as f64 / n as f64).sin()).collect();
        let s = PeriodicSpline::uniform(0.0, y, 2.0 * PI).unwrap();
        for k in 0..50 {
            let t = -3.0 + 0.17 * k as f64;
            let (v, dv, _) = s.eval3(t);
            assert!((v - t.sin()).abs() < 1e-5);
            assert!((dv - t.cos()).abs() < 1e-3);
        }
    }

    #[test]
    fn quintic_interpolates_and_converges() {
        let f = |t: f64| (t.sin() + 0.3 * (2.0 * t).cos()).exp();
        let err = |n: usize| {
            let y: Vec<f64> = (0..n).map(|i| f(2.0 * PI * i as f64 / n as f64)).collect();
            let s = PeriodicQuintic::new(&y, 2.0 * PI).unwrap();
            for (i, yi) in y.iter().enumerate() {
                assert!((s.eval3(2.0 * PI * i as f64 / n as f64).0 - yi).abs() < 1e-12);
            }
            (0..200)
                .map(|k| {
                    let t = -1.0 + 0.0437 * k as f64;
                    let d = 1e-4;
                    let dd = (f(t + d) - 2.0 * f(t) + f(t - d)) / (d * d);
                    (s.eval3(t).2 - dd).abs()
                })
                .fold(0.0, f64::max)
        };
        let (a, b) = (err(64), err(128));
        assert!(a < 1e-3, "{a}");
        // second derivative error of a quintic interpolant is O(h^4)
        assert!(a / b > 12.0, "{a} {b}");
    }

    #[test]
    fn interpolates_nonuniform_knots() {
        let x = vec![0.0, 0.3, 1.1, 1.5, 2.4, 3.0];
        let y: Vec<f64> = x.iter().map(|t: &f64| t.cos()).collect();
        let s = PeriodicSpline::new(x.clone(), y.clone(), 4.0).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert!((s.eval(*xi) - yi).abs() < 1e-12);
        }
        assert!((s.eval(4.0) - y[0]).abs() < 1e-12);
    }
}
