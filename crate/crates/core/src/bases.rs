//! Single-party operator sets.
//!
//! Two sets are provided:
//!
//! * the *generator set*: the `d^2 - 1` SU(d) generators `u_jk`, `v_jk`, `w_l`
//!   rescaled by `sqrt(d / (2(d-1)))`, so `sum_i Tr(O_i P)^2 = 1` for every
//!   pure state `P`;
//! * the *unit set*: `d^2` orthonormal Hermitian matrices built from the
//!   matrix units `E_ab`, for which `sum_i Tr(O_i rho)^2 = Tr(rho^2)`.
//!
//! Ordering is fixed so correlation and coefficient matrices are reproducible:
//! generators are all `u_jk` (j<k lexicographic), then all `v_jk`, then
//! `w_1..w_{d-1}`; unit operators are the diagonals `E_aa`, then the symmetric
//! pairs, then the antisymmetric pairs, each pair list lexicographic in `(a, b)`
//! with `a < b`.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    /// Rescaled SU(d) generators.
    Generator,
    /// Orthonormal matrix-unit combinations.
    Unit,
}

impl BasisKind {
    pub fn build(self, d: usize) -> Result<OperatorBasis> {
        match self {
            BasisKind::Generator => first_set(d),
            BasisKind::Unit => unit_set(d),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Generator => "generator",
            BasisKind::Unit => "unit",
        }
    }
}

/// Nonzero entries of an operator, used for fast `Tr(rho O x O')`.
#[derive(Debug, Clone)]
pub(crate) struct SparseOp {
    pub entries: Vec<(usize, usize, C64)>,
}

impl SparseOp {
    fn from_dense(m: &ComplexMatrix) -> Self {
        let mut entries = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let z = m[(i, j)];
                if z.re != 0.0 || z.im != 0.0 {
                    entries.push((i, j, z));
                }
            }
        }
        Self { entries }
    }
}

/// Ordered Hermitian operators acting on one `d`-level party.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    dim: usize,
    kind: BasisKind,
    operators: Vec<ComplexMatrix>,
    labels: Vec<String>,
    sparse: Vec<SparseOp>,
}

impl OperatorBasis {
    fn new(dim: usize, kind: BasisKind, ops: Vec<(String, ComplexMatrix)>) -> Self {
        let sparse = ops.iter().map(|(_, m)| SparseOp::from_dense(m)).collect();
        let (labels, operators) = ops.into_iter().unzip();
        Self { dim, kind, operators, labels, sparse }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn operator(&self, i: usize) -> &ComplexMatrix {
        &self.operators[i]
    }

    /// Short names such as `E00`, `S01`, `A01`, `u01`, `w2`.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub(crate) fn sparse(&self) -> &[SparseOp] {
        &self.sparse
    }

    /// `Tr(O_i rho)` for every operator (real parts).
    pub fn expectations(&self, rho: &ComplexMatrix) -> Result<Vec<f64>> {
        if rho.shape() != (self.dim, self.dim) {
            return Err(Error::Dimension(format!(
                "{}x{} state for a d={} basis",
                rho.rows(),
                rho.cols(),
                self.dim
            )));
        }
        Ok(self
            .sparse
            .iter()
            .map(|op| op.entries.iter().map(|&(i, j, z)| (z * rho[(j, i)]).re).sum())
            .collect())
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Parameter(format!("operator basis needs d >= 2, got {d}")));
    }
    Ok(())
}

fn unit(d: usize, a: usize, b: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(a, b)] = C64::new(1.0, 0.0);
    m
}

fn generators_labelled(d: usize) -> Result<Vec<(String, ComplexMatrix)>> {
    check_dim(d)?;
    let mut out = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in j + 1..d {
            out.push((format!("u{j}{k}"), &unit(d, j, k) + &unit(d, k, j)));
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            let m = (&unit(d, j, k) - &unit(d, k, j)).scale(C64::new(0.0, -1.0));
            out.push((format!("v{j}{k}"), m));
        }
    }
    for l in 1..d {
        let norm = -(2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = ComplexMatrix::zeros(d, d);
        for k in 0..l {
            m[(k, k)] = C64::new(norm, 0.0);
        }
        m[(l, l)] = C64::new(-norm * l as f64, 0.0);
        out.push((format!("w{l}"), m));
    }
    Ok(out)
}

/// The `d^2 - 1` SU(d) generators with `Tr(g_i g_j) = 2 delta_ij`.
pub fn su_generators(d: usize) -> Result<Vec<ComplexMatrix>> {
    Ok(generators_labelled(d)?.into_iter().map(|(_, m)| m).collect())
}

/// Generators scaled by `sqrt(d / (2(d-1)))`.
pub fn first_set(d: usize) -> Result<OperatorBasis> {
    let scale = C64::new((d as f64 / (2.0 * (d as f64 - 1.0))).sqrt(), 0.0);
    let ops = generators_labelled(d)?.into_iter().map(|(l, m)| (l, m.scale(scale))).collect();
    Ok(OperatorBasis::new(d, BasisKind::Generator, ops))
}

/// Orthonormal set of `d^2` Hermitian operators from matrix units.
pub fn unit_set(d: usize) -> Result<OperatorBasis> {
    check_dim(d)?;
    let mut ops = Vec::with_capacity(d * d);
    for a in 0..d {
        ops.push((format!("E{a}{a}"), unit(d, a, a)));
    }
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    for a in 0..d {
        for b in a + 1..d {
            ops.push((format!("S{a}{b}"), (&unit(d, a, b) + &unit(d, b, a)).scale(s)));
        }
    }
    let i = C64::new(0.0, FRAC_1_SQRT_2);
    for a in 0..d {
        for b in a + 1..d {
            ops.push((format!("A{a}{b}"), (&unit(d, b, a) - &unit(d, a, b)).scale(i)));
        }
    }
    Ok(OperatorBasis::new(d, BasisKind::Unit, ops))
}

/// `sum_i Tr(O_i rho)^2`: the squared distance from the origin of the
/// feasible-region point of a single-party state.
pub fn fr_norm(rho: &ComplexMatrix, basis: &OperatorBasis) -> Result<f64> {
    Ok(basis.expectations(rho)?.iter().map(|p| p * p).sum())
}
