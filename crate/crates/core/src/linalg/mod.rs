//! Dense linear algebra for the small matrices this crate works with
//! (at most 25x25 for two ququints).

mod eig;
mod matrix;
mod svd;

pub use eig::{hermitian_eig, hermitian_eigenvalues, Spectrum};
pub use matrix::{ComplexMatrix, Matrix, RealMatrix, C64};
pub use svd::{nuclear_norm, singular_values, svd, Svd};

use crate::error::{Error, Result};
use crate::tolerance::TOL;

/// Which tensor factor a partial operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    ComplexMatrix::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

/// Transposes the indices of one factor of a `dA*dB` square matrix.
///
/// Product index convention: `(i_A, i_B) -> i_A * dB + i_B`.
pub fn partial_transpose(rho: &ComplexMatrix, dim_a: usize, dim_b: usize, which: Subsystem) -> Result<ComplexMatrix> {
    let n = dim_a * dim_b;
    if rho.shape() != (n, n) {
        return Err(Error::Dimension(format!(
            "partial transpose of a {}x{} matrix with dA={dim_a}, dB={dim_b}",
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(ComplexMatrix::from_fn(n, n, |row, col| {
        let (ia, ib) = (row / dim_b, row % dim_b);
        let (ja, jb) = (col / dim_b, col % dim_b);
        match which {
            Subsystem::A => rho[(ja * dim_b + ib, ia * dim_b + jb)],
            Subsystem::B => rho[(ia * dim_b + jb, ja * dim_b + ib)],
        }
    }))
}

/// Smallest eigenvalue of the partial transpose on subsystem A.
pub fn min_partial_transpose_eigenvalue(rho: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<f64> {
    let pt = partial_transpose(rho, dim_a, dim_b, Subsystem::A)?;
    Ok(hermitian_eig(&pt)?.min())
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = hermitian_eig(m)?;
    let scale = m.max_abs().max(1.0);
    if spec.min() < -TOL.psd_reject * scale {
        return Err(Error::NotPsd(spec.min()));
    }
    Ok(spec.reconstruct_with(|l| if l > 0.0 { l.sqrt() } else { 0.0 }))
}

/// `M^t M` for a real matrix.
pub fn gram(m: &RealMatrix) -> RealMatrix {
    &m.transpose() * m
}

/// Singular values from the eigenvalues of `M^t M` (descending, clamped).
///
/// Accurate to about `sqrt(eps) * ||M||` for the smallest values; use
/// [`singular_values`] where small values matter.
pub fn gram_singular_values(m: &RealMatrix) -> Result<Vec<f64>> {
    let eig = hermitian_eigenvalues(&gram(m).to_complex())?;
    let mut out: Vec<f64> = eig
        .into_iter()
        .map(|l| if l < -TOL.gram_clamp { Err(Error::NotPsd(l)) } else { Ok(l.max(0.0).sqrt()) })
        .collect::<Result<_>>()?;
    out.reverse();
    out.truncate(m.rows().min(m.cols()));
    Ok(out)
}
