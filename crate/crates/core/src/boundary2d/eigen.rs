//! Lowest eigenpairs by shifted block inverse iteration.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::MagneticOperator2D;
use crate::error::{Error, Result};
use crate::linalg::BandCholesky;

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    /// Initial shift; `None` takes `nu_guess - 0.02`.
    pub shift: Option<f64>,
    pub nu_guess: f64,
    pub block: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub retries: usize,
    /// Number of lowest pairs that must meet `tol`.
    pub want: usize,
}

impl EigenOptions {
    pub fn near(nu_guess: f64) -> Self {
        Self { shift: None, nu_guess, block: 4, tol: 1e-10, max_iter: 300, retries: 5, want: 2 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenSolveResult {
    pub nu1: f64,
    pub nu2: f64,
    /// Ritz values of the whole block.
    pub values: Vec<f64>,
    /// `|(N - nu) v|_a / |v|_a` for the two lowest pairs.
    pub residuals: [f64; 2],
    /// `|<v1, v2>_a|` for normalized vectors.
    pub orthogonality: f64,
    pub iterations: usize,
    pub shift: f64,
    /// Eigenvectors in storage order, normalized in the weighted product.
    #[serde(skip)]
    pub vectors: [Vec<Complex64>; 2],
    /// Final Ritz block in the symmetrized coordinates, for warm starts.
    #[serde(skip)]
    pub block: Vec<Vec<Complex64>>,
}

impl EigenSolveResult {
    pub fn gap(&self) -> f64 {
        self.nu2 - self.nu1
    }
}

pub fn lowest_pair(op: &MagneticOperator2D, nu_guess: f64) -> Result<EigenSolveResult> {
    lowest_pair_with(op, &EigenOptions::near(nu_guess), None)
}

/// `warm` seeds the block with a previous result on a grid of the same size.
pub fn lowest_pair_with(
    op: &MagneticOperator2D,
    opts: &EigenOptions,
    warm: Option<&EigenSolveResult>,
) -> Result<EigenSolveResult> {
    let mut shift = opts.shift.unwrap_or(opts.nu_guess - 0.02);
    let mut last = None;
    for attempt in 0..=opts.retries {
        let mut a = op.symmetrized().clone();
        a.shift_diagonal(shift);
        match a.cholesky() {
            Ok(f) => return iterate(op, f, shift, opts, warm),
            Err(e) => {
                last = Some(e);
                shift -= 0.05 * (1 << attempt) as f64;
            }
        }
    }
    Err(Error::Numerical(format!(
        "shifted operator not positive definite after {} retries ({:?})",
        opts.retries, last
    )))
}

fn iterate(
    op: &MagneticOperator2D,
    mut f: BandCholesky,
    mut shift: f64,
    opts: &EigenOptions,
    warm: Option<&EigenSolveResult>,
) -> Result<EigenSolveResult> {
    let n = op.dim();
    let p = opts.block.max(opts.want + 1).max(2);
    let want = opts.want.clamp(1, 2);
    let mut refined = false;
    let a = op.symmetrized();
    let mut x: Vec<Vec<Complex64>> = (0..p)
        .map(|k| {
            (0..n)
                .map(|i| {
                    let t = i as f64;
                    Complex64::new(1.0 + 0.3 * (0.37 * t * (k + 1) as f64).sin(), 0.2 * (0.11 * t * (k + 2) as f64).cos())
                })
                .collect()
        })
        .collect();
    if let Some(w) = warm.filter(|w| w.block.first().map(|b| b.len()) == Some(n)) {
        for (dst, src) in x.iter_mut().zip(&w.block) {
            dst.copy_from_slice(src);
        }
    }
    orthonormalize(&mut x)?;
    let mut theta = vec![0.0; p];
    let mut res = [f64::INFINITY; 2];
    let mut ax = vec![vec![Complex64::new(0.0, 0.0); n]; p];
    for it in 1..=opts.max_iter {
        for v in x.iter_mut() {
            f.solve_in_place(v);
        }
        orthonormalize(&mut x)?;
        for (v, y) in x.iter().zip(ax.iter_mut()) {
            a.matvec(v, y);
        }
        let mut h = DMatrix::<Complex64>::zeros(p, p);
        for i in 0..p {
            for j in 0..p {
                h[(i, j)] = dot(&x[i], &ax[j]);
            }
        }
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = h.symmetric_eigen();
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let mut nx = vec![vec![Complex64::new(0.0, 0.0); n]; p];
        let mut nax = vec![vec![Complex64::new(0.0, 0.0); n]; p];
        for (c, &k) in order.iter().enumerate() {
            theta[c] = eig.eigenvalues[k];
            for j in 0..p {
                let q = eig.eigenvectors[(j, k)];
                for i in 0..n {
                    nx[c][i] += x[j][i] * q;
                    nax[c][i] += ax[j][i] * q;
                }
            }
        }
        x = nx;
        ax = nax;
        for c in 0..2 {
            let r: f64 = x[c].iter().zip(&ax[c]).map(|(v, w)| (w - v * theta[c]).norm_sqr()).sum();
            res[c] = r.sqrt() / norm(&x[c]);
        }
        if !theta[0].is_finite() {
            return Err(Error::Numerical("non-finite Ritz value".into()));
        }
        if res[..want].iter().all(|&r| r <= opts.tol) {
            return Ok(finish(op, x, theta, res, it, shift));
        }
        // once the lowest Ritz value has settled, move the shift up under it
        if !refined && res[0] < 1e-3 {
            refined = true;
            let spread = theta[want] - theta[0];
            let s2 = theta[0] - 0.2 * spread.max(0.0) - 10.0 * res[0];
            if s2 > shift {
                let mut a2 = a.clone();
                a2.shift_diagonal(s2);
                if let Ok(f2) = a2.cholesky() {
                    f = f2;
                    shift = s2;
                }
            }
        }
    }
    Err(Error::Numerical(format!(
        "inverse iteration did not converge in {} steps (residuals {:.2e}, {:.2e})",
        opts.max_iter, res[0], res[1]
    )))
}

fn finish(
    op: &MagneticOperator2D,
    x: Vec<Vec<Complex64>>,
    theta: Vec<f64>,
    res: [f64; 2],
    iterations: usize,
    shift: f64,
) -> EigenSolveResult {
    let to_physical = |v: &[Complex64]| -> Vec<Complex64> {
        let mut u: Vec<Complex64> = v.iter().zip(&op.mass).map(|(z, m)| z / m.sqrt()).collect();
        let nrm = op.norm(&u);
        u.iter_mut().for_each(|z| *z /= nrm);
        u
    };
    let v1 = to_physical(&x[0]);
    let v2 = to_physical(&x[1]);
    let orthogonality = op.inner(&v1, &v2).norm();
    EigenSolveResult {
        nu1: theta[0],
        nu2: theta[1],
        values: theta,
        residuals: res,
        orthogonality,
        iterations,
        shift,
        vectors: [v1, v2],
        block: x,
    }
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm(u: &[Complex64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Modified Gram-Schmidt, two passes.
fn orthonormalize(x: &mut [Vec<Complex64>]) -> Result<()> {
    for _ in 0..2 {
        for k in 0..x.len() {
            for j in 0..k {
                let (head, tail) = x.split_at_mut(k);
                let c = dot(&head[j], &tail[0]);
                for (t, h) in tail[0].iter_mut().zip(&head[j]) {
                    *t -= h * c;
                }
            }
            let nr = norm(&x[k]);
            if !(nr > 1e-300) || !nr.is_finite() {
                return Err(Error::Numerical("block lost rank during orthonormalization".into()));
            }
            x[k].iter_mut().for_each(|z| *z /= nr);
        }
    }
    Ok(())
}
