//! Real symmetric eigensolving (cyclic Jacobi) and dense least squares.
//!
//! These kernels are deliberately small and dependency-free: the complex
//! hermitian eigenproblems in this crate are reduced to real symmetric ones,
//! so one robust Jacobi sweep serves every module.

use crate::{Error, Result};

/// Hard cap on Jacobi sweeps; quadratic convergence makes this generous.
pub(crate) const MAX_JACOBI_SWEEPS: usize = 60;

/// Convergence threshold: off-diagonal Frobenius norm relative to `‖M‖`.
const OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Diagonalizes a real symmetric matrix (row-major, `n x n`) by cyclic Jacobi
/// rotations.  Returns eigenvalues sorted ascending and, when requested, the
/// matching orthonormal eigenvectors as columns of a row-major matrix.
pub(crate) fn jacobi_symmetric(
    n: usize,
    matrix: &[f64],
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    assert_eq!(matrix.len(), n * n, "matrix storage must be n*n");
    let mut a = matrix.to_vec();
    let mut v = if want_vectors {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        Some(id)
    } else {
        None
    };

    let norm: f64 = matrix.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = OFF_DIAGONAL_TOL * norm;

    let mut converged = false;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let off: f64 = {
            let mut s = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    s += a[p * n + q] * a[p * n + q];
                }
            }
            (2.0 * s).sqrt()
        };
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, v.as_deref_mut(), n, p, q);
            }
        }
    }
    if !converged {
        // Re-check once more: the last sweep may have finished the job.
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += a[p * n + q] * a[p * n + q];
            }
        }
        if (2.0 * s).sqrt() > threshold {
            return Err(Error::ConvergenceFailure {
                sweeps: MAX_JACOBI_SWEEPS,
            });
        }
    }

    // Sort eigenvalues ascending, permuting eigenvector columns to match.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .partial_cmp(&a[j * n + j])
            .expect("eigenvalues are finite")
            .then(i.cmp(&j))
    });
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = v.map(|v| {
        let mut sorted = vec![0.0; n * n];
        for (new_col, &old_col) in order.iter().enumerate() {
            for r in 0..n {
                sorted[r * n + new_col] = v[r * n + old_col];
            }
        }
        sorted
    });
    Ok((values, vectors))
}

/// One Jacobi rotation annihilating `a[p][q]`, with optional accumulation of
/// the rotation into the eigenvector matrix `v`.
fn rotate(a: &mut [f64], v: Option<&mut [f64]>, n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    if apq == 0.0 {
        return;
    }
    let theta = 0.5 * (a[q * n + q] - a[p * n + p]) / apq;
    let t = if theta.abs() > 1e150 {
        // Far in the tails 1/(2θ) is the stable limit of the exact formula.
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);

    a[p * n + p] -= t * apq;
    a[q * n + q] += t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a[r * n + p];
        let arq = a[r * n + q];
        a[r * n + p] = arp - s * (arq + tau * arp);
        a[p * n + r] = a[r * n + p];
        a[r * n + q] = arq + s * (arp - tau * arq);
        a[q * n + r] = a[r * n + q];
    }
    if let Some(v) = v {
        for r in 0..n {
            let vrp = v[r * n + p];
            let vrq = v[r * n + q];
            v[r * n + p] = vrp - s * (vrq + tau * vrp);
            v[r * n + q] = vrq + s * (vrp - tau * vrq);
        }
    }
}

/// Solves the dense least-squares problem `min ‖Ax − b‖₂` for `A` of shape
/// `m x n` (row-major, `m ≥ n`) by Householder QR.  Returns the solution and
/// the residual norm.  Rank deficiency surfaces as `IllConditionedFit`.
pub(crate) fn least_squares(m: usize, n: usize, a: &[f64], b: &[f64]) -> Result<(Vec<f64>, f64)> {
    assert!(m >= n, "least squares needs at least as many rows as columns");
    assert_eq!(a.len(), m * n);
    assert_eq!(b.len(), m);
    let mut r = a.to_vec();
    let mut y = b.to_vec();

    for k in 0..n {
        let col_norm: f64 = (k..m).map(|i| r[i * n + k] * r[i * n + k]).sum::<f64>().sqrt();
        if col_norm == 0.0 {
            return Err(Error::IllConditionedFit {
                residual: f64::INFINITY,
            });
        }
        let alpha = if r[k * n + k] >= 0.0 { -col_norm } else { col_norm };
        let mut v = vec![0.0; m - k];
        v[0] = r[k * n + k] - alpha;
        for i in 1..(m - k) {
            v[i] = r[(k + i) * n + k];
        }
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        r[k * n + k] = alpha;
        for i in (k + 1)..m {
            r[i * n + k] = 0.0;
        }
        if vnorm2 == 0.0 {
            continue;
        }
        for j in (k + 1)..n {
            let dot: f64 = (0..(m - k)).map(|i| v[i] * r[(k + i) * n + j]).sum();
            let coef = 2.0 * dot / vnorm2;
            for i in 0..(m - k) {
                r[(k + i) * n + j] -= coef * v[i];
            }
        }
        let dot: f64 = (0..(m - k)).map(|i| v[i] * y[k + i]).sum();
        let coef = 2.0 * dot / vnorm2;
        for i in 0..(m - k) {
            y[k + i] -= coef * v[i];
        }
    }

    let max_diag = (0..n).map(|k| r[k * n + k].abs()).fold(0.0_f64, f64::max);
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let rkk = r[k * n + k];
        if rkk.abs() <= 1e-13 * max_diag {
            return Err(Error::IllConditionedFit {
                residual: f64::INFINITY,
            });
        }
        let mut s = y[k];
        for j in (k + 1)..n {
            s -= r[k * n + j] * x[j];
        }
        x[k] = s / rkk;
    }
    let residual: f64 = y[n..m].iter().map(|t| t * t).sum::<f64>().sqrt();
    Ok((x, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalizes_known_2x2() {
        // Eigenvalues of [[2,1],[1,2]] are 1 and 3.
        let (vals, vecs) = jacobi_symmetric(2, &[2.0, 1.0, 1.0, 2.0], true).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
        let v = vecs.unwrap();
        // Columns orthonormal.
        let dot = v[0] * v[1] + v[2] * v[3];
        assert!(dot.abs() < 1e-14);
    }

    #[test]
    fn already_diagonal_is_sorted_untouched() {
        let (vals, _) = jacobi_symmetric(3, &[5.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 1.0], false)
            .unwrap();
        assert_eq!(vals, vec![-2.0, 1.0, 5.0]);
    }

    #[test]
    fn zero_matrix_is_fine() {
        let (vals, _) = jacobi_symmetric(2, &[0.0; 4], false).unwrap();
        assert_eq!(vals, vec![0.0, 0.0]);
    }

    #[test]
    fn reconstructs_random_symmetric() {
        // Deterministic pseudo-random symmetric matrix.
        let n = 6;
        let mut m = vec![0.0; n * n];
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for i in 0..n {
            for j in i..n {
                let x = next();
                m[i * n + j] = x;
                m[j * n + i] = x;
            }
        }
        let (vals, vecs) = jacobi_symmetric(n, &m, true).unwrap();
        let v = vecs.unwrap();
        // ‖M − V diag(vals) Vᵀ‖ small.
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += v[i * n + k] * vals[k] * v[j * n + k];
                }
                worst = worst.max((s - m[i * n + j]).abs());
            }
        }
        assert!(worst < 1e-12, "reconstruction error {worst}");
    }

    #[test]
    fn least_squares_recovers_exact_solution() {
        // Overdetermined consistent system: fit y = 2 + 3x at x = 0..4.
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let mut a = Vec::new();
        let mut b = Vec::new();
        for &x in &xs {
            a.extend_from_slice(&[1.0, x]);
            b.push(2.0 + 3.0 * x);
        }
        let (sol, res) = least_squares(5, 2, &a, &b).unwrap();
        assert!((sol[0] - 2.0).abs() < 1e-12);
        assert!((sol[1] - 3.0).abs() < 1e-12);
        assert!(res < 1e-12);
    }

    #[test]
    fn least_squares_reports_residual() {
        // Inconsistent system: x = 0 and x = 1 simultaneously.
        let a = [1.0, 1.0];
        let b = [0.0, 1.0];
        let (sol, res) = least_squares(2, 1, &a, &b).unwrap();
        assert!((sol[0] - 0.5).abs() < 1e-14);
        // Residual vector is (0.5, -0.5), norm sqrt(1/2).
        assert!((res - 0.5_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn least_squares_flags_rank_deficiency() {
        // Two identical columns.
        let a = [1.0, 1.0, 2.0, 2.0, 3.0, 3.0];
        let b = [1.0, 2.0, 3.0];
        assert!(matches!(
            least_squares(3, 2, &a, &b),
            Err(Error::IllConditionedFit { .. })
        ));
    }
}
