//! Witness construction from the correlation matrix of a state.
//!
//! A witness has the form `W = I (x) I + sum_ij A_ij O_i (x) O'_j`. For
//! product states the expectation is `1 + P^t A P'` with both `P` and `P'`
//! inside the unit ball, so `W` is nonnegative on separable states whenever
//! every singular value of `A` is at most one.
//!
//! For a given state with correlation matrix `R` (`R_ij = Tr(rho O_i (x) O'_j)`)
//! the coefficient matrix minimizing `Tr(W rho)` under that constraint is
//!
//! ```text
//! Z = 1/2 (R^t R)^(1/2),    A = -1/2 R Z^-1 = -R (R^t R)^(-1/2)
//! ```
//!
//! and the minimum is `1 - Tr (R^t R)^(1/2)`, one minus the nuclear norm of `R`.
//! The state is detected when that value is negative.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bases::{BasisKind, OperatorBasis};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, svd, ComplexMatrix, RealMatrix, C64};
use crate::states::{random_pure_vector, DensityMatrix};
use crate::tolerance::TOL;

/// `R_ij = Tr(rho O_i (x) O'_j)`.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    pub entries: RealMatrix,
    pub kind_a: BasisKind,
    pub kind_b: BasisKind,
    /// Largest discarded imaginary part.
    pub imaginary_residue: f64,
}

fn check_dims(rho: &DensityMatrix, basis_a: &OperatorBasis, basis_b: &OperatorBasis) -> Result<()> {
    if rho.dim_a() != basis_a.dim() || rho.dim_b() != basis_b.dim() {
        return Err(Error::Dimension(format!(
            "state is {}x{}, bases are {} and {}",
            rho.dim_a(),
            rho.dim_b(),
            basis_a.dim(),
            basis_b.dim()
        )));
    }
    Ok(())
}

pub fn correlation_matrix(
    rho: &DensityMatrix,
    basis_a: &OperatorBasis,
    basis_b: &OperatorBasis,
) -> Result<CorrelationMatrix> {
    check_dims(rho, basis_a, basis_b)?;
    let db = rho.dim_b();
    let m = rho.matrix();
    let mut residue: f64 = 0.0;
    let mut entries = RealMatrix::zeros(basis_a.len(), basis_b.len());
    for (i, oa) in basis_a.sparse().iter().enumerate() {
        for (j, ob) in basis_b.sparse().iter().enumerate() {
            // Tr(rho (X (x) Y)) = sum X[a,a'] Y[b,b'] rho[(a',b'),(a,b)]
            let mut acc = C64::new(0.0, 0.0);
            for &(a, a2, x) in &oa.entries {
                for &(b, b2, y) in &ob.entries {
                    acc += x * y * m[(a2 * db + b2, a * db + b)];
                }
            }
            residue = residue.max(acc.im.abs());
            entries[(i, j)] = acc.re;
        }
    }
    if residue > TOL.imaginary_residue {
        return Err(Error::ImaginaryResidue(residue));
    }
    Ok(CorrelationMatrix { entries, kind_a: basis_a.kind(), kind_b: basis_b.kind(), imaginary_residue: residue })
}

/// Optimal coefficient matrix `A` and Lagrange multiplier `Z` for `R`.
///
/// `A = -R (R^t R)^(-1/2)` with singular directions below the rank cutoff
/// dropped, so `A` is a partial isometry.
pub fn witness_coefficients(r: &RealMatrix) -> Result<(RealMatrix, RealMatrix)> {
    let dec = svd(r);
    let (n1, n2) = r.shape();
    let mut a = RealMatrix::zeros(n1, n2);
    // Z = (R^t R)^(1/2) / 2 = V (S/2) V^t, which keeps near-zero singular
    // values near zero instead of square-rooting eigenvalue noise.
    let mut z = RealMatrix::zeros(n2, n2);
    for (k, &s) in dec.singular_values.iter().enumerate() {
        for i in 0..n2 {
            let vi = 0.5 * s * dec.v[(i, k)];
            for j in 0..n2 {
                z[(i, j)] += vi * dec.v[(j, k)];
            }
        }
        if s < TOL.rank {
            continue;
        }
        for i in 0..n1 {
            let u = dec.u[(i, k)];
            for j in 0..n2 {
                a[(i, j)] -= u * dec.v[(j, k)];
            }
        }
    }
    Ok((a, z))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectionStatus {
    Detected,
    Boundary,
    Undetected,
}

impl DetectionStatus {
    pub fn from_value(value: f64) -> Self {
        if value < -TOL.detection {
            DetectionStatus::Detected
        } else if value <= TOL.detection {
            DetectionStatus::Boundary
        } else {
            DetectionStatus::Undetected
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DetectionReport {
    pub nuclear_norm: f64,
    /// `1 - nuclear_norm`.
    pub value: f64,
    pub detected: bool,
    pub status: DetectionStatus,
    pub singular_values: Vec<f64>,
    pub z: RealMatrix,
    pub a: RealMatrix,
}

pub fn detection_from_correlation(r: &CorrelationMatrix) -> Result<DetectionReport> {
    let singular_values = svd(&r.entries).singular_values;
    let nuclear_norm: f64 = singular_values.iter().sum();
    let value = 1.0 - nuclear_norm;
    let (a, z) = witness_coefficients(&r.entries)?;
    let status = DetectionStatus::from_value(value);
    Ok(DetectionReport {
        nuclear_norm,
        value,
        detected: status == DetectionStatus::Detected,
        status,
        singular_values,
        z,
        a,
    })
}

pub fn detection_value(
    rho: &DensityMatrix,
    basis_a: &OperatorBasis,
    basis_b: &OperatorBasis,
) -> Result<DetectionReport> {
    detection_from_correlation(&correlation_matrix(rho, basis_a, basis_b)?)
}

/// Coefficients plus the operator sets they refer to.
#[derive(Debug, Clone)]
pub struct Witness {
    a: RealMatrix,
    basis_a: OperatorBasis,
    basis_b: OperatorBasis,
}

impl Witness {
    pub fn new(a: RealMatrix, basis_a: OperatorBasis, basis_b: OperatorBasis) -> Result<Self> {
        if a.shape() != (basis_a.len(), basis_b.len()) {
            return Err(Error::Dimension(format!(
                "coefficient matrix is {}x{}, bases have {} and {} operators",
                a.rows(),
                a.cols(),
                basis_a.len(),
                basis_b.len()
            )));
        }
        Ok(Self { a, basis_a, basis_b })
    }

    pub fn coefficients(&self) -> &RealMatrix {
        &self.a
    }

    pub fn basis_a(&self) -> &OperatorBasis {
        &self.basis_a
    }

    pub fn basis_b(&self) -> &OperatorBasis {
        &self.basis_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.basis_a.dim(), self.basis_b.dim())
    }

    /// Explicit `(dA dB) x (dA dB)` operator.
    pub fn matrix(&self) -> ComplexMatrix {
        let (da, db) = self.dims();
        let mut w = ComplexMatrix::identity(da * db);
        for (i, oa) in self.basis_a.operators().iter().enumerate() {
            for (j, ob) in self.basis_b.operators().iter().enumerate() {
                let c = self.a[(i, j)];
                if c != 0.0 {
                    w = &w + &kron(oa, ob).scale(C64::new(c, 0.0));
                }
            }
        }
        w
    }
}

/// Builds the witness and its explicit matrix.
pub fn assemble_witness(
    a: RealMatrix,
    basis_a: OperatorBasis,
    basis_b: OperatorBasis,
) -> Result<(Witness, ComplexMatrix)> {
    let w = Witness::new(a, basis_a, basis_b)?;
    let m = w.matrix();
    Ok((w, m))
}

/// Witness minimizing `Tr(W rho)` for the given state.
pub fn build_witness(rho: &DensityMatrix, basis_a: &OperatorBasis, basis_b: &OperatorBasis) -> Result<Witness> {
    let r = correlation_matrix(rho, basis_a, basis_b)?;
    let (a, _) = witness_coefficients(&r.entries)?;
    Witness::new(a, basis_a.clone(), basis_b.clone())
}

/// `Tr(W rho) = 1 + sum_ij A_ij R_ij(rho)`.
pub fn evaluate_witness(w: &Witness, rho: &DensityMatrix) -> Result<f64> {
    let r = correlation_matrix(rho, &w.basis_a, &w.basis_b)?;
    let a = &w.a;
    let mut acc = 1.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            acc += a[(i, j)] * r.entries[(i, j)];
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstraintCheck {
    pub pass: bool,
    pub max_singular_value: f64,
}

/// Passes when `sigma_max(A) <= 1 + 1e-9`.
pub fn validate_constraint(a: &RealMatrix) -> ConstraintCheck {
    let max = svd(a).singular_values.first().copied().unwrap_or(0.0);
    ConstraintCheck { pass: max <= 1.0 + TOL.constraint, max_singular_value: max }
}

#[derive(Debug, Clone, Copy)]
pub struct SeesawConfig {
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        Self { restarts: 50, iters: 200, seed: 7 }
    }
}

#[derive(Debug, Clone)]
pub struct SeesawResult {
    pub min_value: f64,
    pub a: Vec<C64>,
    pub b: Vec<C64>,
}

/// `(I (x) <b|) W (I (x) |b>)`.
fn reduce_b(w: &ComplexMatrix, da: usize, db: usize, b: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(da, da, |i, k| {
        let mut acc = C64::new(0.0, 0.0);
        for (x, bx) in b.iter().enumerate() {
            let bc = bx.conj();
            for (y, by) in b.iter().enumerate() {
                acc += bc * w[(i * db + x, k * db + y)] * by;
            }
        }
        acc
    })
}

/// `(<a| (x) I) W (|a> (x) I)`.
fn reduce_a(w: &ComplexMatrix, da: usize, db: usize, a: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(db, db, |x, y| {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..da {
            let ac = a[i].conj();
            for k in 0..da {
                acc += ac * w[(i * db + x, k * db + y)] * a[k];
            }
        }
        acc
    })
}

fn seesaw_single(w: &ComplexMatrix, da: usize, db: usize, iters: usize, rng: &mut ChaCha8Rng) -> Result<SeesawResult> {
    let mut b = random_pure_vector(db, rng);
    let mut a = vec![C64::new(0.0, 0.0); da];
    let mut value = f64::INFINITY;
    for _ in 0..iters.max(1) {
        let spec = hermitian_eig(&reduce_b(w, da, db, &b))?;
        a = spec.eigenvector(0);
        let spec = hermitian_eig(&reduce_a(w, da, db, &a))?;
        b = spec.eigenvector(0);
        let next = spec.min();
        let step = (value - next).abs();
        value = next;
        if step < TOL.seesaw_step {
            break;
        }
    }
    Ok(SeesawResult { min_value: value, a, b })
}

/// Minimum of `<ab|W|ab>` over pure product states by alternating
/// smallest-eigenvector updates of each factor, best of `restarts` random
/// starts. Restart `r` uses ChaCha stream `r` of `seed`, so the result does
/// not depend on thread scheduling.
pub fn seesaw_min(w: &ComplexMatrix, dim_a: usize, dim_b: usize, config: SeesawConfig) -> Result<SeesawResult> {
    if w.shape() != (dim_a * dim_b, dim_a * dim_b) {
        return Err(Error::Dimension(format!("{}x{} operator for dA={dim_a}, dB={dim_b}", w.rows(), w.cols())));
    }
    let runs: Vec<SeesawResult> = (0..config.restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(r as u64);
            seesaw_single(w, dim_a, dim_b, config.iters, &mut rng)
        })
        .collect::<Result<_>>()?;
    Ok(runs
        .into_iter()
        .reduce(|best, x| if x.min_value < best.min_value { x } else { best })
        .expect("at least one restart"))
}

pub fn seesaw_min_separable(w: &Witness, config: SeesawConfig) -> Result<SeesawResult> {
    let (da, db) = w.dims();
    seesaw_min(&w.matrix(), da, db, config)
}

/// JSON export of a constructed witness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessExport {
    #[serde(rename = "dA")]
    pub dim_a: usize,
    #[serde(rename = "dB")]
    pub dim_b: usize,
    pub basis_a: BasisKind,
    pub basis_b: BasisKind,
    pub labels_a: Vec<String>,
    pub labels_b: Vec<String>,
    #[serde(rename = "A")]
    pub a: RealMatrix,
    pub detection_value: f64,
    pub nuclear_norm: f64,
}

impl WitnessExport {
    pub fn new(w: &Witness, report: &DetectionReport) -> Self {
        let (dim_a, dim_b) = w.dims();
        Self {
            dim_a,
            dim_b,
            basis_a: w.basis_a.kind(),
            basis_b: w.basis_b.kind(),
            labels_a: w.basis_a.labels().to_vec(),
            labels_b: w.basis_b.labels().to_vec(),
            a: w.a.clone(),
            detection_value: report.value,
            nuclear_norm: report.nuclear_norm,
        }
    }
}
