//! Complex Hermitian band matrices in lower storage, with an in-place
//! Cholesky factorization `A = L L^H` and the matching triangular solves.

use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct HermitianBand {
    n: usize,
    bw: usize,
    /// Row `i` holds columns `i - bw ..= i`; entry `(i, j)` sits at
    /// `i * (bw + 1) + (j + bw - i)`.
    data: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NotPositiveDefinite {
    pub row: usize,
    pub pivot: f64,
}

impl HermitianBand {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self { n, bw, data: vec![Complex64::new(0.0, 0.0); n * (bw + 1)] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw);
        i * (self.bw + 1) + (j + self.bw - i)
    }

    /// Adds `v` to entry `(i, j)` and, implicitly, `conj(v)` to `(j, i)`.
    /// Diagonal contributions must be real.
    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        if j <= i {
            assert!(i - j <= self.bw, "entry ({i},{j}) outside band {}", self.bw);
            let k = self.idx(i, j);
            self.data[k] += v;
        } else {
            assert!(j - i <= self.bw, "entry ({i},{j}) outside band {}", self.bw);
            let k = self.idx(j, i);
            self.data[k] += v.conj();
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if j <= i {
            if i - j > self.bw {
                return Complex64::new(0.0, 0.0);
            }
            self.data[self.idx(i, j)]
        } else {
            if j - i > self.bw {
                return Complex64::new(0.0, 0.0);
            }
            self.data[self.idx(j, i)].conj()
        }
    }

    pub fn shift_diagonal(&mut self, s: f64) {
        for i in 0..self.n {
            let k = self.idx(i, i);
            self.data[k].re -= s;
        }
    }

    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        for v in y.iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        for i in 0..self.n {
            let j0 = i.saturating_sub(self.bw);
            let row = &self.data[i * (self.bw + 1)..(i + 1) * (self.bw + 1)];
            let mut acc = Complex64::new(0.0, 0.0);
            for j in j0..i {
                let a = row[j + self.bw - i];
                acc += a * x[j];
                y[j] += a.conj() * x[i];
            }
            acc += row[self.bw] * x[i];
            y[i] += acc;
        }
    }

    /// Factorizes in place. On success the lower band holds `L`.
    pub fn cholesky(mut self) -> Result<BandCholesky, NotPositiveDefinite> {
        let bw = self.bw;
        let w = bw + 1;
        for i in 0..self.n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                let k0 = j0.max(j.saturating_sub(bw));
                let ri = i * w + bw - i;
                let rj = j * w + bw - j;
                let s = self.data[ri + j] - dot_conj(&self.data[ri + k0..ri + j], &self.data[rj + k0..rj + j]);
                if j < i {
                    let d = self.data[rj + j].re;
                    self.data[ri + j] = s / d;
                } else {
                    if !(s.re > 0.0) || !s.re.is_finite() {
                        return Err(NotPositiveDefinite { row: i, pivot: s.re });
                    }
                    self.data[ri + i] = Complex64::new(s.re.sqrt(), 0.0);
                }
            }
        }
        Ok(BandCholesky { l: self })
    }
}

/// `sum a_k conj(b_k)` with split accumulators so the loop vectorizes.
#[inline]
fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let mut re = [0.0f64; 4];
    let mut im = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for l in 0..4 {
            re[l] += x[l].re * y[l].re + x[l].im * y[l].im;
            im[l] += x[l].im * y[l].re - x[l].re * y[l].im;
        }
    }
    let mut s = Complex64::new(re.iter().sum(), im.iter().sum());
    for (x, y) in ra.iter().zip(rb) {
        s += x * y.conj();
    }
    s
}

/// `sum a_k b_k`, as [`dot_conj`].
#[inline]
fn dot_plain(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let mut re = [0.0f64; 4];
    let mut im = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for l in 0..4 {
            re[l] += x[l].re * y[l].re - x[l].im * y[l].im;
            im[l] += x[l].im * y[l].re + x[l].re * y[l].im;
        }
    }
    let mut s = Complex64::new(re.iter().sum(), im.iter().sum());
    for (x, y) in ra.iter().zip(rb) {
        s += x * y;
    }
    s
}

#[derive(Debug, Clone)]
pub struct BandCholesky {
    l: HermitianBand,
}

impl BandCholesky {
    pub fn dim(&self) -> usize {
        self.l.n
    }

    /// Solves `L L^H x = b` in place.
    pub fn solve_in_place(&self, b: &mut [Complex64]) {
        let n = self.l.n;
        let bw = self.l.bw;
        let w = bw + 1;
        let d = &self.l.data;
        for i in 0..n {
            let r = i * w + bw - i;
            let k0 = i.saturating_sub(bw);
            let s = b[i] - dot_plain(&d[r + k0..r + i], &b[k0..i]);
            b[i] = s / d[r + i].re;
        }
        for i in (0..n).rev() {
            let r = i * w + bw - i;
            let xi = b[i] / d[r + i].re;
            b[i] = xi;
            for k in i.saturating_sub(bw)..i {
                b[k] -= d[r + k].conj() * xi;
            }
        }
    }

    /// Logarithm of the determinant of the factored matrix.
    pub fn log_det(&self) -> f64 {
        let bw = self.l.bw;
        (0..self.l.n)
            .map(|i| 2.0 * self.l.data[i * (bw + 1) + bw].re.ln())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(n: usize, bw: usize) -> HermitianBand {
        let mut a = HermitianBand::zeros(n, bw);
        for i in 0..n {
            a.add(i, i, c(4.0 + 2.0 * bw as f64, 0.0));
            for d in 1..=bw.min(i) {
                let x = (i * 7 + d * 3) as f64;
                a.add(i, i - d, c(x.sin(), 0.5 * x.cos()));
            }
        }
        a
    }

    #[test]
    fn solve_roundtrip() {
        let n = 37;
        let a = sample(n, 5);
        let x: Vec<Complex64> = (0..n).map(|i| c((i as f64).cos(), (i as f64 * 0.3).sin())).collect();
        let mut b = vec![c(0.0, 0.0); n];
        a.matvec(&x, &mut b);
        let f = a.clone().cholesky().unwrap();
        f.solve_in_place(&mut b);
        for (u, v) in x.iter().zip(&b) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn hermitian_access() {
        let mut a = HermitianBand::zeros(4, 2);
        a.add(0, 2, c(1.0, 2.0));
        assert_eq!(a.get(2, 0), c(1.0, -2.0));
        assert_eq!(a.get(0, 2), c(1.0, 2.0));
        assert_eq!(a.get(3, 0), c(0.0, 0.0));
    }

    #[test]
    fn indefinite_is_reported() {
        let mut a = HermitianBand::zeros(3, 1);
        a.add(0, 0, c(1.0, 0.0));
        a.add(1, 1, c(1.0, 0.0));
        a.add(2, 2, c(1.0, 0.0));
        a.add(1, 0, c(2.0, 0.0));
        let e = a.cholesky().unwrap_err();
        assert_eq!(e.row, 1);
    }
}
