//! Direct solvers for the banded systems produced by the steppers.
//!
//! All systems here are either symmetric positive definite or diagonally
//! dominant, so elimination runs without pivoting; a vanishing pivot is
//! reported as [`Error::Singular`].

use crate::error::{Error, Result};

/// Square matrix with `p` sub- and super-diagonals, stored by rows.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    p: usize,
    // row i holds columns i-p ..= i+p at offsets 0 ..= 2p
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, p: usize) -> Self {
        BandMatrix {
            n,
            p,
            data: vec![0.0; n * (2 * p + 1)],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn half_bandwidth(&self) -> usize {
        self.p
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.p >= i && j <= i + self.p);
        i * (2 * self.p + 1) + (j + self.p - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.p < i || j > i + self.p {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    /// Builds the band matrix of a linear operator by probing it with
    /// `2p + 1` comb vectors. Each probe excites columns spaced `2p + 1` apart,
    /// so every output entry is the contribution of exactly one column.
    pub fn from_operator(n: usize, p: usize, mut apply: impl FnMut(&[f64], &mut [f64])) -> Self {
        let mut m = BandMatrix::zeros(n, p);
        let stride = 2 * p + 1;
        let mut probe = vec![0.0; n];
        let mut out = vec![0.0; n];
        for offset in 0..stride.min(n) {
            probe.iter_mut().for_each(|v| *v = 0.0);
            for j in (offset..n).step_by(stride) {
                probe[j] = 1.0;
            }
            out.iter_mut().for_each(|v| *v = 0.0);
            apply(&probe, &mut out);
            for j in (offset..n).step_by(stride) {
                let lo = j.saturating_sub(p);
                let hi = (j + p).min(n - 1);
                for i in lo..=hi {
                    m.set(i, j, out[i]);
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.p);
                let hi = (i + self.p).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Solves `A x = rhs` by banded Gaussian elimination, consuming `self`.
    pub fn solve(mut self, rhs: &[f64]) -> Result<Vec<f64>> {
        let (n, p) = (self.n, self.p);
        assert_eq!(rhs.len(), n, "right-hand side length");
        let mut x = rhs.to_vec();
        let scale = self.data.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let tiny = scale * f64::EPSILON * 1e-2;
        for k in 0..n {
            let pivot = self.data[self.idx(k, k)];
            if !(pivot.abs() > tiny) || !pivot.is_finite() {
                return Err(Error::Singular { row: k });
            }
            let last = (k + p).min(n - 1);
            for i in (k + 1)..=last {
                let factor = self.data[self.idx(i, k)] / pivot;
                if factor == 0.0 {
                    continue;
                }
                for j in (k + 1)..=last {
                    let akj = self.data[self.idx(k, j)];
                    let ij = self.idx(i, j);
                    self.data[ij] -= factor * akj;
                }
                x[i] -= factor * x[k];
            }
        }
        for k in (0..n).rev() {
            let last = (k + p).min(n - 1);
            let mut s = x[k];
            for j in (k + 1)..=last {
                s -= self.data[self.idx(k, j)] * x[j];
            }
            x[k] = s / self.data[self.idx(k, k)];
        }
        Ok(x)
    }
}

/// Thomas algorithm for `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
///
/// `lower[0]` and `upper[n-1]` are ignored.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert!(lower.len() == n && upper.len() == n && rhs.len() == n);
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = diag[0];
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::Singular { row: 0 });
    }
    c[0] = upper[0] / denom;
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - lower[i] * c[i - 1];
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::Singular { row: i });
        }
        c[i] = if i + 1 < n { upper[i] / denom } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}
