//! One-sided (Hestenes) Jacobi SVD for small real matrices.
//!
//! Orthogonalizes the columns of `M` in place with plane rotations; the
//! column norms are the singular values. Small singular values keep full
//! absolute accuracy, which the pseudo-inverse in the witness construction
//! depends on.

use super::matrix::RealMatrix;

const MAX_SWEEPS: usize = 80;

/// Thin SVD `M = U diag(s) V^t`, singular values descending.
///
/// `u` is `m x k`, `v` is `n x k` with `k = min(m, n)`. Columns of `u` that
/// belong to a zero singular value are zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: RealMatrix,
    pub singular_values: Vec<f64>,
    pub v: RealMatrix,
}

pub fn svd(m: &RealMatrix) -> Svd {
    if m.rows() < m.cols() {
        let t = svd(&m.transpose());
        return Svd { u: t.v, singular_values: t.singular_values, v: t.u };
    }
    let (rows, cols) = m.shape();
    let mut work = m.clone();
    let mut v = RealMatrix::identity(cols);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..cols.saturating_sub(1) {
            for j in i + 1..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for k in 0..rows {
                    let x = work[(k, i)];
                    let y = work[(k, j)];
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..rows {
                    let x = work[(k, i)];
                    let y = work[(k, j)];
                    work[(k, i)] = c * x - s * y;
                    work[(k, j)] = s * x + c * y;
                }
                for k in 0..cols {
                    let x = v[(k, i)];
                    let y = v[(k, j)];
                    v[(k, i)] = c * x - s * y;
                    v[(k, j)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..cols)
        .map(|j| (0..rows).map(|k| work[(k, j)] * work[(k, j)]).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));

    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u = RealMatrix::from_fn(rows, cols, |k, c| {
        let j = order[c];
        if norms[j] > 0.0 {
            work[(k, j)] / norms[j]
        } else {
            0.0
        }
    });
    let v = RealMatrix::from_fn(cols, cols, |k, c| v[(k, order[c])]);
    Svd { u, singular_values, v }
}

/// Singular values, descending.
pub fn singular_values(m: &RealMatrix) -> Vec<f64> {
    svd(m).singular_values
}

/// Sum of singular values, `Tr sqrt(M^t M)`.
pub fn nuclear_norm(m: &RealMatrix) -> f64 {
    singular_values(m).iter().sum()
}
