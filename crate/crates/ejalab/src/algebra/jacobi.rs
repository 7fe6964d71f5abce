//! Cyclic Jacobi eigenvalue iteration for Hermitian matrices.
//!
//! Real symmetric input is handled by the same routine: when every entry has
//! zero imaginary part the phase factors are exactly ±1 and the iteration
//! stays real. Adequate at desk scale (n ≤ 16).

use num_complex::Complex64;

use crate::error::{EjaError, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a Hermitian matrix given in row-major order.
///
/// Returns eigenvalues sorted decreasing and the matching unit eigenvectors
/// as columns (`vectors[k]` is the k-th eigenvector).
pub fn hermitian_eigen(n: usize, a: &[Complex64]) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    assert_eq!(a.len(), n * n);
    let mut m: Vec<Complex64> = a.to_vec();
    let mut v: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }

    let scale = frobenius(n, &m).max(f64::MIN_POSITIVE);
    let target = 1e-12 * scale;

    let mut sweeps = 0;
    while off_norm(n, &m) > target {
        if sweeps >= MAX_SWEEPS {
            return Err(EjaError::EigenNonConvergence {
                off_norm: off_norm(n, &m),
                sweeps,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(n, &mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    // Diagonal of a Hermitian matrix is real; collect and sort decreasing.
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m[i * n + i].re, i)).collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let eigenvalues: Vec<f64> = pairs.iter().map(|&(l, _)| l).collect();
    let vectors: Vec<Vec<Complex64>> = pairs
        .iter()
        .map(|&(_, col)| (0..n).map(|row| v[row * n + col]).collect())
        .collect();
    Ok((eigenvalues, vectors))
}

/// One Jacobi rotation zeroing entry (p, q). Phase-adjusted Givens: the
/// off-diagonal entry is first made real, then the classic real rotation
/// (Golub & Van Loan §8.5) is applied.
fn rotate(n: usize, m: &mut [Complex64], v: &mut [Complex64], p: usize, q: usize) {
    let apq = m[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{iφ}
    let alpha = m[p * n + p].re;
    let beta = m[q * n + q].re;

    let tau = (beta - alpha) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Unitary update U = D·J, D = diag(e^{iφ}, 1), J = [[c, s], [-s, c]]:
    //   col_p' = e^{iφ}·c·col_p − s·col_q
    //   col_q' = e^{iφ}·s·col_p + c·col_q
    let up = phase * c;
    let uq = phase * s;
    for row in 0..n {
        let xp = m[row * n + p];
        let xq = m[row * n + q];
        m[row * n + p] = up * xp - s * xq;
        m[row * n + q] = uq * xp + c * xq;
        let vp = v[row * n + p];
        let vq = v[row * n + q];
        v[row * n + p] = up * vp - s * vq;
        v[row * n + q] = uq * vp + c * vq;
    }
    // Rows with U*.
    let cp = phase.conj() * c;
    let cq = phase.conj() * s;
    for col in 0..n {
        let xp = m[p * n + col];
        let xq = m[q * n + col];
        m[p * n + col] = cp * xp - s * xq;
        m[q * n + col] = cq * xp + c * xq;
    }
    // Clean the zeroed pair against rounding drift.
    m[p * n + q] = Complex64::new(0.0, 0.0);
    m[q * n + p] = Complex64::new(0.0, 0.0);
    m[p * n + p] = Complex64::new(m[p * n + p].re, 0.0);
    m[q * n + q] = Complex64::new(m[q * n + q].re, 0.0);
}

fn frobenius(n: usize, m: &[Complex64]) -> f64 {
    m[..n * n].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn off_norm(n: usize, m: &[Complex64]) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}
