//! Symmetric tridiagonal matrices: Sturm-sequence bisection for indexed
//! eigenvalues, inverse iteration for eigenvectors, and pivoted solves.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length mismatch");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    pub fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.bounds();
        lo.abs().max(hi.abs())
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.len();
        let tiny = f64::MIN_POSITIVE.sqrt() * (1.0 + self.norm_bound());
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..n {
            if i > 0 {
                let e = self.off[i - 1];
                q = self.diag[i] - x - e * e / q;
            }
            if q.abs() < tiny {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected to working precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.len());
        let (mut lo, mut hi) = self.bounds();
        let scale = self.norm_bound().max(1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * scale {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Absolute accuracy of [`Self::eigenvalue`].
    pub fn eigen_tolerance(&self) -> f64 {
        8.0 * f64::EPSILON * self.norm_bound().max(1.0)
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.len();
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * x[i + 1];
            }
            y[i] = s;
        }
    }

    /// Solves `(T - shift) x = rhs` by Gaussian elimination with partial
    /// pivoting. Exactly singular pivots are nudged, which is what inverse
    /// iteration wants.
    pub fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        let tiny = f64::EPSILON * self.norm_bound().max(1.0);
        // Row i after elimination: u0[i] x_i + u1[i] x_{i+1} + u2[i] x_{i+2}.
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut b = rhs.to_vec();
        // current working row i: (a_i on diag, c_i on super), next row (l, d, c)
        let mut cur_diag = self.diag[0] - shift;
        let mut cur_sup = if n > 1 { self.off[0] } else { 0.0 };
        let mut cur_sup2 = 0.0;
        for i in 0..n {
            if i + 1 < n {
                let sub = self.off[i];
                let next_diag = self.diag[i + 1] - shift;
                let next_sup = if i + 2 < n { self.off[i + 1] } else { 0.0 };
                if sub.abs() > cur_diag.abs() {
                    // swap row i and i+1
                    u0[i] = sub;
                    u1[i] = next_diag;
                    u2[i] = next_sup;
                    let m = cur_diag / sub;
                    b.swap(i, i + 1);
                    let bi = b[i];
                    b[i + 1] -= m * bi;
                    cur_diag = cur_sup - m * next_diag;
                    cur_sup = cur_sup2 - m * next_sup;
                    cur_sup2 = 0.0;
                } else {
                    if cur_diag.abs() < tiny {
                        cur_diag = tiny;
                    }
                    u0[i] = cur_diag;
                    u1[i] = cur_sup;
                    u2[i] = cur_sup2;
                    let m = sub / cur_diag;
                    let bi = b[i];
                    b[i + 1] -= m * bi;
                    cur_diag = next_diag - m * cur_sup;
                    cur_sup = next_sup - m * cur_sup2;
                    cur_sup2 = 0.0;
                }
            } else {
                if cur_diag.abs() < tiny {
                    cur_diag = tiny;
                }
                u0[i] = cur_diag;
                u1[i] = 0.0;
                u2[i] = 0.0;
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * x[i + 2];
            }
            x[i] = s / u0[i];
        }
        x
    }

    /// Unit eigenvector for an accurate eigenvalue `lambda`.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.01 * ((i as f64) * 0.618_033_988_75).sin())
            .collect();
        normalize(&mut x);
        let mut y = vec![0.0; n];
        for _ in 0..4 {
            let mut z = self.solve_shifted(lambda, &x);
            if z.iter().any(|v| !v.is_finite()) {
                return Err(Error::Numerical("inverse iteration overflow".into()));
            }
            normalize(&mut z);
            x = z;
        }
        self.matvec(&x, &mut y);
        let res: f64 = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (b - lambda * a).powi(2))
            .sum::<f64>()
            .sqrt();
        if res > 1e-6 * self.norm_bound().max(1.0) {
            return Err(Error::Numerical(format!(
                "inverse iteration did not converge (residual {res:e})"
            )));
        }
        Ok(x)
    }
}

pub fn normalize(x: &mut [f64]) {
    let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in x.iter_mut() {
        *v /= nrm;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> SymTridiag {
        SymTridiag::new(vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn dirichlet_laplacian_spectrum() {
        let n = 50;
        let t = laplacian(n);
        for k in [0, 1, 7, 49] {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((t.eigenvalue(k) - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn eigenvector_is_sine_mode() {
        let n = 40;
        let t = laplacian(n);
        let lam = t.eigenvalue(0);
        let v = t.eigenvector(lam).unwrap();
        let sign = v[0].signum();
        let mut exact: Vec<f64> = (0..n)
            .map(|i| ((i + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).sin())
            .collect();
        normalize(&mut exact);
        for (a, b) in v.iter().zip(&exact) {
            assert!((sign * a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn pivoted_solve_matches_matvec() {
        let t = SymTridiag::new(vec![0.1, 3.0, -2.0, 1.0, 0.5], vec![2.0, 1.0, 4.0, -1.0]);
        let x = [1.0, -2.0, 0.5, 3.0, -1.0];
        let mut b = vec![0.0; 5];
        t.matvec(&x, &mut b);
        let b: Vec<f64> = b.iter().zip(&x).map(|(bi, xi)| bi - 0.3 * xi).collect();
        let y = t.solve_shifted(0.3, &b);
        for (a, c) in x.iter().zip(&y) {
            assert!((a - c).abs() < 1e-12);
        }
    }
}
