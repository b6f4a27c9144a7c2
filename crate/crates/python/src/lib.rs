use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use ::ewitness::bases::BasisKind;
use ::ewitness::witness::{self, SeesawConfig};
use ::ewitness::{choi, states, ChoiParams, ComplexMatrix, RealMatrix};

fn to_py(err: ::ewitness::Error) -> PyErr {
    match err {
        ::ewitness::Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn basis_kind(name: &str) -> PyResult<BasisKind> {
    match name {
        "unit" => Ok(BasisKind::Unit),
        "generator" => Ok(BasisKind::Generator),
        other => Err(PyValueError::new_err(format!("unknown basis `{other}` (unit | generator)"))),
    }
}

fn rows(m: &RealMatrix) -> Vec<Vec<f64>> {
    m.to_rows()
}

fn complex_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    m.to_rows()
}

/// Bipartite density matrix.
#[pyclass(name = "DensityMatrix", module = "ewitness", frozen)]
struct PyDensityMatrix {
    inner: states::DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    #[staticmethod]
    fn horodecki_alpha(alpha: f64) -> PyResult<Self> {
        Ok(Self { inner: states::horodecki_alpha(alpha).map_err(to_py)? })
    }

    #[staticmethod]
    fn upb_tiles() -> Self {
        Self { inner: states::upb_tiles() }
    }

    #[staticmethod]
    fn horodecki_a(a: f64) -> PyResult<Self> {
        Ok(Self { inner: states::horodecki_a(a).map_err(to_py)? })
    }

    #[staticmethod]
    fn choi(d: usize, p: f64, mu: Vec<f64>) -> PyResult<Self> {
        let params = ChoiParams::with_inferred_mu(d, p, mu).map_err(to_py)?;
        Ok(Self { inner: states::choi_state(&params).map_err(to_py)? })
    }

    /// Validates an explicit matrix given as nested lists of complex numbers.
    #[staticmethod]
    fn from_matrix(matrix: Vec<Vec<Complex64>>, dim_a: usize, dim_b: usize) -> PyResult<Self> {
        let m = ComplexMatrix::from_rows(&matrix).map_err(to_py)?;
        Ok(Self { inner: states::validate_density(m, dim_a, dim_b).map_err(to_py)? })
    }

    #[getter]
    fn dim_a(&self) -> usize {
        self.inner.dim_a()
    }

    #[getter]
    fn dim_b(&self) -> usize {
        self.inner.dim_b()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        complex_rows(self.inner.matrix())
    }

    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    fn min_pt_eigenvalue(&self) -> PyResult<f64> {
        self.inner.min_partial_transpose_eigenvalue().map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dim_a={}, dim_b={})", self.inner.dim_a(), self.inner.dim_b())
    }
}

#[pyclass(name = "DetectionReport", module = "ewitness", frozen)]
struct PyDetectionReport {
    inner: witness::DetectionReport,
}

#[pymethods]
impl PyDetectionReport {
    #[getter]
    fn value(&self) -> f64 {
        self.inner.value
    }

    #[getter]
    fn nuclear_norm(&self) -> f64 {
        self.inner.nuclear_norm
    }

    #[getter]
    fn detected(&self) -> bool {
        self.inner.detected
    }

    #[getter]
    fn singular_values(&self) -> Vec<f64> {
        self.inner.singular_values.clone()
    }

    #[getter]
    fn a(&self) -> Vec<Vec<f64>> {
        rows(&self.inner.a)
    }

    #[getter]
    fn z(&self) -> Vec<Vec<f64>> {
        rows(&self.inner.z)
    }

    fn __repr__(&self) -> String {
        format!("DetectionReport(value={:.6}, detected={})", self.inner.value, self.inner.detected)
    }
}

#[pyclass(name = "Witness", module = "ewitness", frozen)]
struct PyWitness {
    inner: witness::Witness,
}

#[pymethods]
impl PyWitness {
    /// Optimal witness for `rho` in the chosen operator set.
    #[staticmethod]
    #[pyo3(signature = (rho, basis = "unit"))]
    fn build(rho: &PyDensityMatrix, basis: &str) -> PyResult<Self> {
        let kind = basis_kind(basis)?;
        let r = &rho.inner;
        let ba = kind.build(r.dim_a()).map_err(to_py)?;
        let bb = kind.build(r.dim_b()).map_err(to_py)?;
        Ok(Self { inner: witness::build_witness(r, &ba, &bb).map_err(to_py)? })
    }

    fn coefficients(&self) -> Vec<Vec<f64>> {
        rows(self.inner.coefficients())
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        complex_rows(&self.inner.matrix())
    }

    fn max_singular_value(&self) -> f64 {
        witness::validate_constraint(self.inner.coefficients()).max_singular_value
    }

    fn evaluate(&self, rho: &PyDensityMatrix) -> PyResult<f64> {
        witness::evaluate_witness(&self.inner, &rho.inner).map_err(to_py)
    }

    /// Smallest expectation found over product states.
    #[pyo3(signature = (restarts = 50, iters = 200, seed = 7))]
    fn seesaw_min(&self, py: Python<'_>, restarts: usize, iters: usize, seed: u64) -> PyResult<f64> {
        let config = SeesawConfig { restarts, iters, seed };
        py.detach(|| witness::seesaw_min_separable(&self.inner, config))
            .map(|r| r.min_value)
            .map_err(to_py)
    }
}

#[pyfunction]
#[pyo3(signature = (rho, basis = "unit"))]
fn detect(rho: &PyDensityMatrix, basis: &str) -> PyResult<PyDetectionReport> {
    let kind = basis_kind(basis)?;
    let r = &rho.inner;
    let ba = kind.build(r.dim_a()).map_err(to_py)?;
    let bb = kind.build(r.dim_b()).map_err(to_py)?;
    Ok(PyDetectionReport { inner: witness::detection_value(r, &ba, &bb).map_err(to_py)? })
}

#[pyfunction]
fn detection_closed_form(d: usize, p: f64, mu: Vec<f64>) -> PyResult<f64> {
    let params = ChoiParams::with_inferred_mu(d, p, mu).map_err(to_py)?;
    Ok(choi::detection_closed_form(&params))
}

#[pyfunction]
fn ppt_bound(mu: Vec<f64>, d: usize) -> PyResult<f64> {
    choi::ppt_bound(&mu, d).map_err(to_py)
}

#[pyfunction]
fn d3_is_proved_separable(p: f64, mu1: f64) -> bool {
    choi::d3_is_proved_separable(p, mu1)
}

#[pyfunction]
fn d5_imv1_zero(mu3: f64, mu4: f64) -> PyResult<Vec<f64>> {
    choi::d5_imv1_zero(mu3, mu4).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "ewitness")]
fn ewitness_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyDetectionReport>()?;
    m.add_class::<PyWitness>()?;
    m.add_function(wrap_pyfunction!(detect, m)?)?;
    m.add_function(wrap_pyfunction!(detection_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(ppt_bound, m)?)?;
    m.add_function(wrap_pyfunction!(d3_is_proved_separable, m)?)?;
    m.add_function(wrap_pyfunction!(d5_imv1_zero, m)?)?;
    Ok(())
}
