//! Bipartite density matrices: validation, the state families used
//! throughout the crate, and random product states.

use std::fmt;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, min_partial_transpose_eigenvalue, ComplexMatrix, C64};
use crate::tolerance::TOL;

/// A validated state on `C^dA (x) C^dB`.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim_a: usize,
    dim_b: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    pub fn min_partial_transpose_eigenvalue(&self) -> Result<f64> {
        min_partial_transpose_eigenvalue(&self.matrix, self.dim_a, self.dim_b)
    }

    pub fn is_ppt(&self) -> Result<bool> {
        Ok(self.min_partial_transpose_eigenvalue()? >= -TOL.ppt)
    }
}

/// One failed density-matrix check, with its magnitude.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    Shape { rows: usize, cols: usize, expected: usize },
    NonHermitian { deviation: f64 },
    Trace { trace: f64 },
    NotPsd { min_eigenvalue: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { rows, cols, expected } => {
                write!(f, "shape {rows}x{cols}, expected {expected}x{expected}")
            }
            Violation::NonHermitian { deviation } => write!(f, "not Hermitian (deviation {deviation:e})"),
            Violation::Trace { trace } => write!(f, "trace {trace} != 1"),
            Violation::NotPsd { min_eigenvalue } => write!(f, "negative eigenvalue {min_eigenvalue:e}"),
        }
    }
}

/// Checks Hermiticity, unit trace and positivity; every failed check is reported.
pub fn validate_density(matrix: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<DensityMatrix> {
    let n = dim_a * dim_b;
    if matrix.shape() != (n, n) {
        return Err(Error::InvalidDensity(vec![Violation::Shape {
            rows: matrix.rows(),
            cols: matrix.cols(),
            expected: n,
        }]));
    }
    let mut violations = Vec::new();
    let deviation = matrix.hermitian_deviation();
    if deviation > TOL.hermitian {
        violations.push(Violation::NonHermitian { deviation });
    }
    let trace = matrix.trace();
    if (trace.re - 1.0).abs() > TOL.trace || trace.im.abs() > TOL.trace {
        violations.push(Violation::Trace { trace: trace.re });
    }
    if deviation <= TOL.hermitian {
        let min = hermitian_eig(&matrix)?.min();
        if min < TOL.density_min_eigenvalue {
            violations.push(Violation::NotPsd { min_eigenvalue: min });
        }
    }
    if violations.is_empty() {
        Ok(DensityMatrix { dim_a, dim_b, matrix })
    } else {
        Err(Error::InvalidDensity(violations))
    }
}

#[derive(Deserialize)]
struct DensityJson {
    #[serde(rename = "dA")]
    dim_a: usize,
    #[serde(rename = "dB")]
    dim_b: usize,
    matrix: ComplexMatrix,
}

/// Parses `{"dA": .., "dB": .., "matrix": [[[re, im], ..], ..]}`.
pub fn density_from_json(text: &str) -> Result<DensityMatrix> {
    let raw: DensityJson = serde_json::from_str(text)?;
    validate_density(raw.matrix, raw.dim_a, raw.dim_b)
}

pub fn load_density_json(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    density_from_json(&std::fs::read_to_string(path)?)
}

fn basis_projector(n: usize, k: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    m[(k, k)] = C64::new(1.0, 0.0);
    m
}

/// `|psi_00><psi_00|` with `|psi_00> = sum_l |ll> / sqrt d`.
fn max_entangled_projector(d: usize) -> ComplexMatrix {
    let n = d * d;
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i % (d + 1) == 0 && j % (d + 1) == 0 {
            C64::new(1.0 / d as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Two-qutrit family `2/7 |psi+><psi+| + alpha/7 sigma+ + (5-alpha)/7 sigma-`, `0 <= alpha <= 5`.
pub fn horodecki_alpha(alpha: f64) -> Result<DensityMatrix> {
    if !(0.0..=5.0).contains(&alpha) {
        return Err(Error::Parameter(format!("alpha must lie in [0, 5], got {alpha}")));
    }
    let idx = |a: usize, b: usize| a * 3 + b;
    let mut sigma_plus = ComplexMatrix::zeros(9, 9);
    let mut sigma_minus = ComplexMatrix::zeros(9, 9);
    for (a, b) in [(0, 1), (1, 2), (2, 0)] {
        sigma_plus = &sigma_plus + &basis_projector(9, idx(a, b));
        sigma_minus = &sigma_minus + &basis_projector(9, idx(b, a));
    }
    let third = C64::new(1.0 / 3.0, 0.0);
    let m = &(&max_entangled_projector(3).scale(C64::new(2.0 / 7.0, 0.0))
        + &sigma_plus.scale(third * (alpha / 7.0)))
        + &sigma_minus.scale(third * ((5.0 - alpha) / 7.0));
    validate_density(m, 3, 3)
}

#[rustfmt::skip]
const UPB_TILES_X72: [[i32; 9]; 9] = [
    [ 7,  7, -2, -2, -2, -2, -2, -2, -2],
    [ 7,  7, -2, -2, -2, -2, -2, -2, -2],
    [-2, -2,  7, -2, -2,  7, -2, -2, -2],
    [-2, -2, -2,  7, -2, -2,  7, -2, -2],
    [-2, -2, -2, -2, 16, -2, -2, -2, -2],
    [-2, -2,  7, -2, -2,  7, -2, -2, -2],
    [-2, -2, -2,  7, -2, -2,  7, -2, -2],
    [-2, -2, -2, -2, -2, -2, -2,  7,  7],
    [-2, -2, -2, -2, -2, -2, -2,  7,  7],
];

/// Bound entangled two-qutrit state from the tiles UPB (entries are integers / 72).
pub fn upb_tiles() -> DensityMatrix {
    let m = ComplexMatrix::from_fn(9, 9, |i, j| C64::new(UPB_TILES_X72[i][j] as f64 / 72.0, 0.0));
    validate_density(m, 3, 3).expect("tiles UPB state is a valid density matrix")
}

/// Two-qutrit PPT entangled family, `0 < a < 1`.
pub fn horodecki_a(a: f64) -> Result<DensityMatrix> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Parameter(format!("a must lie in (0, 1), got {a}")));
    }
    let mut m = ComplexMatrix::zeros(9, 9);
    for i in 0..9 {
        m[(i, i)] = C64::new(a, 0.0);
    }
    for i in [0, 4, 8] {
        for j in [0, 4, 8] {
            m[(i, j)] = C64::new(a, 0.0);
        }
    }
    let diag = (1.0 + a) / 2.0;
    let corner = (1.0 - a * a).sqrt() / 2.0;
    m[(6, 6)] = C64::new(diag, 0.0);
    m[(8, 8)] = C64::new(diag, 0.0);
    m[(6, 8)] = C64::new(corner, 0.0);
    m[(8, 6)] = C64::new(corner, 0.0);
    validate_density(m.scale(C64::new(1.0 / (8.0 * a + 1.0), 0.0)), 3, 3)
}

/// Parameters of the generalized Choi family on `d x d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoiParams {
    d: usize,
    p: f64,
    mu: Vec<f64>,
}

const SIMPLEX_TOL: f64 = 1e-12;

impl ChoiParams {
    /// `0 <= p <= 1/d`, `mu` has `d-1` entries in `[0, 1]` summing to one.
    pub fn new(d: usize, p: f64, mu: Vec<f64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::Parameter(format!("Choi family needs d >= 2, got {d}")));
        }
        if mu.len() != d - 1 {
            return Err(Error::Parameter(format!("expected {} weights mu, got {}", d - 1, mu.len())));
        }
        if !(p >= 0.0 && p <= 1.0 / d as f64 + SIMPLEX_TOL) {
            return Err(Error::Parameter(format!("p must lie in [0, 1/{d}], got {p}")));
        }
        if mu.iter().any(|&m| !(-SIMPLEX_TOL..=1.0 + SIMPLEX_TOL).contains(&m)) {
            return Err(Error::Parameter(format!("mu entries must lie in [0, 1]: {mu:?}")));
        }
        let sum: f64 = mu.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::Parameter(format!("mu must sum to 1, sums to {sum}")));
        }
        let mu = mu.into_iter().map(|m| m.clamp(0.0, 1.0)).collect();
        Ok(Self { d, p: p.min(1.0 / d as f64), mu })
    }

    /// Accepts `d-1` weights, or `d-2` with the last inferred from the sum
    /// (when the given ones sum to at most `1 + 1e-9`).
    pub fn with_inferred_mu(d: usize, p: f64, mut mu: Vec<f64>) -> Result<Self> {
        if d >= 2 && mu.len() + 2 == d {
            let sum: f64 = mu.iter().sum();
            if sum > 1.0 + 1e-9 {
                return Err(Error::Parameter(format!("mu weights already sum to {sum} > 1")));
            }
            mu.push((1.0 - sum).max(0.0));
            let total: f64 = mu.iter().sum();
            // renormalize rounding so the strict sum check passes
            mu.iter_mut().for_each(|m| *m /= total);
        }
        Self::new(d, p, mu)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `mu_1 .. mu_{d-1}`.
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// `mu_k` for `k` in `1..d`.
    pub fn mu_k(&self, k: usize) -> f64 {
        self.mu[k - 1]
    }
}

/// `p |psi_00><psi_00| + (1-p)/d sum_i mu_i rho_i` with
/// `rho_i = sum_l |l><l| (x) |l+i><l+i|` (indices mod d).
pub fn choi_state(params: &ChoiParams) -> Result<DensityMatrix> {
    let d = params.d;
    let mut m = max_entangled_projector(d).scale(C64::new(params.p, 0.0));
    let w = (1.0 - params.p) / d as f64;
    for i in 1..d {
        for l in 0..d {
            let k = l * d + (l + i) % d;
            m[(k, k)] += C64::new(w * params.mu[i - 1], 0.0);
        }
    }
    validate_density(m, d, d)
}

/// A pure product state `|a><a| (x) |b><b|` and its factors.
#[derive(Debug, Clone)]
pub struct ProductState {
    pub state: DensityMatrix,
    pub a: Vec<C64>,
    pub b: Vec<C64>,
}

pub fn random_pure_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..d)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Product of two Gaussian-sampled pure states.
pub fn random_product_state<R: Rng + ?Sized>(dim_a: usize, dim_b: usize, rng: &mut R) -> Result<ProductState> {
    if dim_a < 2 || dim_b < 2 {
        return Err(Error::Parameter(format!("product state needs dims >= 2, got {dim_a}x{dim_b}")));
    }
    let a = random_pure_vector(dim_a, rng);
    let b = random_pure_vector(dim_b, rng);
    let m = kron(&ComplexMatrix::outer(&a, &a), &ComplexMatrix::outer(&b, &b));
    let state = validate_density(m, dim_a, dim_b)?;
    Ok(ProductState { state, a, b })
}

/// Names accepted on the command line.
pub const FAMILIES: [(&str, &str); 4] = [
    ("horodecki-alpha", "--alpha in [0, 5]"),
    ("upb-tiles", "no parameters"),
    ("horodecki-a", "--a in (0, 1)"),
    ("choi", "--d >= 2, --p in [0, 1/d], --mu mu_1,..,mu_{d-1} in [0,1] summing to 1 (last may be omitted)"),
];

/// A catalog state with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum StateSpec {
    HorodeckiAlpha { alpha: f64 },
    UpbTiles,
    HorodeckiA { a: f64 },
    Choi(ChoiParams),
}

impl StateSpec {
    pub fn build(&self) -> Result<DensityMatrix> {
        match self {
            StateSpec::HorodeckiAlpha { alpha } => horodecki_alpha(*alpha),
            StateSpec::UpbTiles => Ok(upb_tiles()),
            StateSpec::HorodeckiA { a } => horodecki_a(*a),
            StateSpec::Choi(params) => choi_state(params),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            StateSpec::HorodeckiAlpha { .. } => "horodecki-alpha",
            StateSpec::UpbTiles => "upb-tiles",
            StateSpec::HorodeckiA { .. } => "horodecki-a",
            StateSpec::Choi(_) => "choi",
        }
    }

    pub fn local_dim(&self) -> usize {
        match self {
            StateSpec::Choi(p) => p.d(),
            _ => 3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::linalg::{partial_transpose, Subsystem};

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn validate_examples() {
        let mixed = ComplexMatrix::identity(9).scale(re(1.0 / 9.0));
        assert!(validate_density(mixed, 3, 3).is_ok());

        let bad = ComplexMatrix::diag(&[re(2.0), re(-1.0), re(0.0), re(0.0)]);
        match validate_density(bad, 2, 2) {
            Err(Error::InvalidDensity(v)) => {
                assert_eq!(v.len(), 1, "{v:?}");
                assert!(matches!(v[0], Violation::NotPsd { min_eigenvalue } if min_eigenvalue == -1.0));
            }
            other => panic!("{other:?}"),
        }

        let bad = ComplexMatrix::diag(&[re(2.0), re(-1.0), re(0.5), re(0.0)]);
        match validate_density(bad, 2, 2) {
            Err(Error::InvalidDensity(v)) => {
                assert!(v.iter().any(|x| matches!(x, Violation::Trace { .. })));
                assert!(v.iter().any(|x| matches!(x, Violation::NotPsd { .. })));
            }
            other => panic!("{other:?}"),
        }

        let mut nh = ComplexMatrix::identity(4).scale(re(0.25));
        nh[(0, 1)] = re(0.1);
        assert!(matches!(
            validate_density(nh, 2, 2),
            Err(Error::InvalidDensity(v)) if matches!(v[0], Violation::NonHermitian { .. })
        ));
        assert!(matches!(
            validate_density(ComplexMatrix::identity(3), 2, 2),
            Err(Error::InvalidDensity(v)) if matches!(v[0], Violation::Shape { .. })
        ));
    }

    #[test]
    fn horodecki_alpha_examples() {
        assert!(horodecki_alpha(-0.1).is_err());
        assert!(horodecki_alpha(5.1).is_err());
        let r = horodecki_alpha(2.5).unwrap();
        let m = r.matrix();
        // sigma+ on |01>,|12>,|20>; sigma- on |10>,|21>,|02>
        let plus: f64 = [1, 5, 6].iter().map(|&k| m[(k, k)].re).sum();
        let minus: f64 = [3, 7, 2].iter().map(|&k| m[(k, k)].re).sum();
        assert!((plus - 5.0 / 14.0).abs() < 1e-15);
        assert!((minus - 5.0 / 14.0).abs() < 1e-15);
        let r0 = horodecki_alpha(0.0).unwrap();
        assert_eq!(r0.matrix()[(1, 1)], re(0.0));
    }

    #[test]
    fn horodecki_alpha_is_a_choi_state() {
        for k in 0..=10 {
            let alpha = 0.5 * k as f64;
            let direct = horodecki_alpha(alpha).unwrap();
            let params = ChoiParams::new(3, 2.0 / 7.0, vec![alpha / 5.0, 1.0 - alpha / 5.0]).unwrap();
            let choi = choi_state(&params).unwrap();
            assert!(direct.matrix().max_abs_diff(choi.matrix()) <= 1e-12, "alpha={alpha}");
        }
    }

    #[test]
    fn upb_tiles_entries() {
        let r = upb_tiles();
        assert_eq!(r.matrix()[(0, 0)].re, 7.0 / 72.0);
        assert_eq!(r.matrix()[(4, 4)].re, 16.0 / 72.0);
        assert!((r.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn horodecki_a_examples() {
        assert!(horodecki_a(0.0).is_err());
        assert!(horodecki_a(1.0).is_err());
        let r = horodecki_a(0.5).unwrap();
        let want = (0.75f64).sqrt() / 2.0 / 5.0;
        assert!((r.matrix()[(6, 8)].re - want).abs() < 1e-15);
        assert!((want - 0.0866025).abs() < 1e-7);
        let near_one = horodecki_a(1.0 - 1e-12).unwrap();
        assert!(near_one.matrix()[(6, 8)].re < 1e-6);
        for k in 1..20 {
            let r = horodecki_a(k as f64 / 20.0).unwrap();
            assert!(r.min_partial_transpose_eigenvalue().unwrap() >= -1e-10);
        }
    }

    #[test]
    fn choi_examples() {
        let p0 = choi_state(&ChoiParams::new(3, 0.0, vec![0.4, 0.6]).unwrap()).unwrap();
        let m = p0.matrix();
        for i in 0..9 {
            for j in 0..9 {
                if i != j {
                    assert_eq!(m[(i, j)], re(0.0));
                }
            }
        }
        let r = choi_state(&ChoiParams::new(3, 1.0 / 3.0, vec![0.5, 0.5]).unwrap()).unwrap();
        // <00|rho|11>
        assert!((r.matrix()[(0, 4)].re - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn choi_params_validation() {
        assert!(ChoiParams::new(3, 0.4, vec![0.5, 0.5]).is_err());
        assert!(ChoiParams::new(3, -0.1, vec![0.5, 0.5]).is_err());
        assert!(ChoiParams::new(3, 0.1, vec![0.5]).is_err());
        assert!(ChoiParams::new(3, 0.1, vec![0.6, 0.6]).is_err());
        assert!(ChoiParams::new(3, 0.1, vec![1.2, -0.2]).is_err());
        assert!(ChoiParams::new(1, 0.1, vec![]).is_err());
        let p = ChoiParams::with_inferred_mu(4, 0.1, vec![0.2, 0.3]).unwrap();
        assert!((p.mu_k(3) - 0.5).abs() < 1e-12);
        assert!(ChoiParams::with_inferred_mu(4, 0.1, vec![0.7, 0.6]).is_err());
    }

    #[test]
    fn random_product_state_properties() {
        let mut r1 = ChaCha8Rng::seed_from_u64(11);
        let mut r2 = ChaCha8Rng::seed_from_u64(11);
        let a = random_product_state(3, 4, &mut r1).unwrap();
        let b = random_product_state(3, 4, &mut r2).unwrap();
        assert_eq!(a.state.matrix(), b.state.matrix());
        assert!((a.state.purity() - 1.0).abs() < 1e-12);
        let pt = partial_transpose(a.state.matrix(), 3, 4, Subsystem::A).unwrap();
        assert!(hermitian_eig(&pt).unwrap().min() > -1e-12);
        assert!(random_product_state(1, 3, &mut r1).is_err());
    }

    #[test]
    fn json_loader() {
        let json = r#"{"dA": 2, "dB": 1, "matrix": [[[0.5, 0.0], [0.0, 0.5]], [[0.0, -0.5], [0.5, 0.0]]]}"#;
        let r = density_from_json(json).unwrap();
        assert_eq!(r.matrix()[(0, 1)], C64::new(0.0, 0.5));
        let bad = r#"{"dA": 2, "dB": 1, "matrix": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]}"#;
        assert!(matches!(density_from_json(bad), Err(Error::InvalidDensity(_))));
    }
}
