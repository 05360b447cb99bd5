//! Jacobi matrices of the ladder `J_β = J⁺ + βJ⁰ + J⁻` and the monic
//! orthogonal polynomials of Meixner type.

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix acting on `e_1, ..., e_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiMatrix {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
}

impl JacobiMatrix {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(Error::Domain("Jacobi matrix needs size >= 1".into()));
        }
        if off_diagonal.len() + 1 != diagonal.len() {
            return Err(Error::Dimension { expected: diagonal.len() - 1, got: off_diagonal.len() });
        }
        if off_diagonal.iter().any(|&b| !(b >= 0.0)) {
            return Err(Error::Domain("off-diagonal entries must be nonnegative".into()));
        }
        Ok(JacobiMatrix { diagonal, off_diagonal })
    }

    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    /// Entry `(row, col)`, zero-based.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        match row.abs_diff(col) {
            0 => self.diagonal[row],
            1 => self.off_diagonal[row.min(col)],
            _ => 0.0,
        }
    }

    pub fn transpose(&self) -> JacobiMatrix {
        self.clone()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let m = self.size();
        (0..m).map(|r| (0..m).map(|c| self.entry(r, c)).collect()).collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let m = self.size();
        let mut y = vec![0.0; m];
        for i in 0..m {
            let mut acc = self.diagonal[i] * x[i];
            if i > 0 {
                acc += self.off_diagonal[i - 1] * x[i - 1];
            }
            if i + 1 < m {
                acc += self.off_diagonal[i] * x[i + 1];
            }
            y[i] = acc;
        }
        y
    }

    /// `(J^j)_{11}` for `j = 0..=max_order`. Exact for the infinite matrix as
    /// long as `size > max_order / 2`.
    pub fn vacuum_moments(&self, max_order: usize) -> Vec<f64> {
        let m = self.size();
        let mut x = vec![0.0; m];
        x[0] = 1.0;
        // ⟨e1, J^j e1⟩ = ⟨J^{⌊j/2⌋} e1, J^{⌈j/2⌉} e1⟩
        let mut powers = vec![x];
        for _ in 0..max_order.div_ceil(2) {
            let next = self.matvec(powers.last().expect("nonempty"));
            powers.push(next);
        }
        (0..=max_order)
            .map(|j| {
                let (a, b) = (&powers[j / 2], &powers[j - j / 2]);
                a.iter().zip(b).map(|(u, w)| u * w).sum()
            })
            .collect()
    }
}

/// `J⁺ + βJ⁰ + J⁻` truncated to `e_1..e_M`: diagonal `βn`, off-diagonal `√(n(n+1))`.
pub fn jacobi_beta(beta: f64, size: usize) -> Result<JacobiMatrix> {
    check_beta(beta)?;
    if size == 0 {
        return Err(Error::Domain("Jacobi matrix needs size >= 1".into()));
    }
    let diagonal = (1..=size).map(|n| beta * n as f64).collect();
    let off = (1..size).map(|n| ((n * (n + 1)) as f64).sqrt()).collect();
    JacobiMatrix::new(diagonal, off)
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta >= 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("beta must be a finite nonnegative number, got {beta}")))
    }
}

/// `∫ s^j ν̃_β(ds)` as `(J_β^j)_{11}`.
pub fn spectral_moment(beta: f64, j: usize) -> Result<f64> {
    let jm = jacobi_beta(beta, j + 1)?;
    Ok(jm.vacuum_moments(j)[j])
}

/// Monic `P̃_{β,0..=n_max}`, coefficients stored lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSequence {
    beta: f64,
    coefficients: Vec<Vec<f64>>,
}

/// `s P̃_n = P̃_{n+1} + β(n+1) P̃_n + n(n+1) P̃_{n-1}` with `P̃_{-1} = 0`.
pub fn polynomial_sequence(beta: f64, n_max: usize) -> Result<PolynomialSequence> {
    check_beta(beta)?;
    let mut coefficients: Vec<Vec<f64>> = vec![vec![1.0]];
    for n in 0..n_max {
        let cur = &coefficients[n];
        let mut next = vec![0.0; n + 2];
        for (k, &c) in cur.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= beta * (n + 1) as f64 * c;
        }
        if n >= 1 {
            let prev = &coefficients[n - 1];
            for (k, &c) in prev.iter().enumerate() {
                next[k] -= (n * (n + 1)) as f64 * c;
            }
        }
        coefficients.push(next);
    }
    Ok(PolynomialSequence { beta, coefficients })
}

impl PolynomialSequence {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_max(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self, n: usize) -> &[f64] {
        &self.coefficients[n]
    }

    /// `P̃_{β,n}(s)` by Horner.
    pub fn eval(&self, n: usize, s: f64) -> f64 {
        self.coefficients[n].iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    /// `P_{β,n}(s) = s P̃_{β,n-1}(s)` for `n >= 1`.
    pub fn eval_shifted(&self, n: usize, s: f64) -> f64 {
        assert!(n >= 1, "shifted polynomials start at n = 1");
        s * self.eval(n - 1, s)
    }

    /// `‖P̃_{β,n}‖² = n!(n+1)!` under `ν̃_β`.
    pub fn squared_norm(n: usize) -> f64 {
        (1..=n).map(|k| (k * (k + 1)) as f64).product()
    }

    /// Orthonormal `p_n = P̃_{β,n} / √(n!(n+1)!)`.
    pub fn eval_normalized(&self, n: usize, s: f64) -> f64 {
        self.eval(n, s) / Self::squared_norm(n).sqrt()
    }
}
