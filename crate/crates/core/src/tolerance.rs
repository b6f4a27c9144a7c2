//! Numerical thresholds shared by every module.
//!
//! The defaults are collected in [`Tolerances::DEFAULT`]; functions that take
//! no explicit tolerance argument use them.

/// Threshold record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Entrywise bound on `|M - M^dagger|` for a matrix treated as Hermitian.
    pub hermitian: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm drops below this
    /// (scaled by `max(1, ||M||_F)`).
    pub jacobi_offdiag: f64,
    /// Eigenvalues of a PSD input above `-psd_clamp` are clamped to zero.
    pub psd_clamp: f64,
    /// Eigenvalues below `-psd_reject` make a PSD input an error.
    pub psd_reject: f64,
    /// Density matrix trace must equal one within this.
    pub trace: f64,
    /// Minimum eigenvalue a density matrix may have.
    pub density_min_eigenvalue: f64,
    /// Negative eigenvalues of `M^t M` are clamped above `-gram_clamp`.
    pub gram_clamp: f64,
    /// Singular values below this are dropped from the pseudo-inverse.
    pub rank: f64,
    /// Largest imaginary part tolerated in a correlation entry.
    pub imaginary_residue: f64,
    /// A detection value below `-detection` counts as detected.
    pub detection: f64,
    /// Witness constraint: `sigma_max(A) <= 1 + constraint`.
    pub constraint: f64,
    /// Minimum partial-transpose eigenvalue still counted as PPT.
    pub ppt: f64,
    /// Lowest see-saw value still accepted for a valid witness.
    pub seesaw: f64,
    /// See-saw stops when successive values differ by less than this.
    pub seesaw_step: f64,
    /// Half-width of the PPT boundary band (`|p - p*|`).
    pub ppt_boundary: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-12,
        jacobi_offdiag: 1e-13,
        psd_clamp: 1e-10,
        psd_reject: 1e-6,
        trace: 1e-12,
        density_min_eigenvalue: -1e-9,
        gram_clamp: 1e-12,
        rank: 1e-10,
        imaginary_residue: 1e-10,
        detection: 1e-9,
        constraint: 1e-9,
        ppt: 1e-9,
        seesaw: 1e-7,
        seesaw_step: 1e-12,
        ppt_boundary: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub const TOL: Tolerances = Tolerances::DEFAULT;
