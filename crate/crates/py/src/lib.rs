//! Python bindings. Reports cross the boundary as plain dicts decoded from the
//! core crate's JSON forms.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use qcch_core::kato::DEFAULT_KATO_MAX_QUBITS;
use qcch_core::num_complex::Complex64;
use qcch_core::pulse::DEFAULT_CIRCUIT_MAX_QUBITS;
use qcch_core::{
    BarrierOptions, KatoConfig, KatoEngine, LogicalPauli, PauliAxis, PauliOperator,
    PerturbationSpec,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

create_exception!(
    qcch,
    CapExceededError,
    PyRuntimeError,
    "A resource cap was exceeded or a series diverges."
);

fn to_py(e: qcch_core::Error) -> PyErr {
    if e.is_cap_or_divergence() {
        CapExceededError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn from_json<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn dense_to_py(m: &qcch_core::CMat) -> Vec<Vec<Complex64>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect()
}

/// Pauli operator with a phase `i^k`, e.g. `Pauli("-XZZXI")`.
#[pyclass(name = "Pauli", module = "qcch", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPauli(PauliOperator);

#[pymethods]
impl PyPauli {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyPauli).map_err(to_py)
    }

    #[staticmethod]
    fn single(n_qubits: usize, qubit: usize, axis: &str) -> PyResult<Self> {
        if qubit >= n_qubits {
            return Err(PyValueError::new_err(format!("qubit {qubit} out of range")));
        }
        let axis: PauliAxis = axis.parse().map_err(to_py)?;
        Ok(PyPauli(PauliOperator::single(n_qubits, qubit, axis)))
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.0.n_qubits()
    }

    #[getter]
    fn weight(&self) -> usize {
        self.0.weight()
    }

    #[getter]
    fn phase_exp(&self) -> u8 {
        self.0.phase_exp()
    }

    fn support(&self) -> Vec<usize> {
        self.0.support()
    }

    fn commutes(&self, other: &PyPauli) -> PyResult<bool> {
        self.0.commutes(&other.0).map_err(to_py)
    }

    fn __mul__(&self, other: &PyPauli) -> PyResult<PyPauli> {
        self.0.multiply(&other.0).map(PyPauli).map_err(to_py)
    }

    /// Dense matrix as nested lists; qubit 0 is the most significant factor.
    #[pyo3(signature = (max_qubits = 10))]
    fn to_dense(&self, max_qubits: usize) -> PyResult<Vec<Vec<Complex64>>> {
        self.0
            .to_dense(max_qubits)
            .map(|m| dense_to_py(&m))
            .map_err(to_py)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Pauli('{}')", self.0)
    }
}

#[pyclass(name = "StabilizerCode", module = "qcch", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCode(qcch_core::StabilizerCode);

#[pymethods]
impl PyCode {
    /// Built-in code: "five-qubit" or "nine-qubit".
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        qcch_core::preset(name)
            .map(PyCode)
            .ok_or_else(|| PyValueError::new_err(format!("unknown preset {name:?}")))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let code = qcch_core::StabilizerCode::from_json_str(text).map_err(to_py)?;
        code.ensure_valid().map_err(to_py)?;
        Ok(PyCode(code))
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.0.n_qubits()
    }

    #[getter]
    fn generators(&self) -> Vec<PyPauli> {
        self.0.generators().iter().cloned().map(PyPauli).collect()
    }

    #[getter]
    fn logical_x(&self) -> Vec<PyPauli> {
        self.0.logical_x().iter().cloned().map(PyPauli).collect()
    }

    #[getter]
    fn logical_z(&self) -> Vec<PyPauli> {
        self.0.logical_z().iter().cloned().map(PyPauli).collect()
    }

    /// `[[n,k,d]]` or `[[n,k,r,d]]`.
    #[pyo3(signature = (max_weight = 7))]
    fn parameters(&self, max_weight: usize) -> String {
        self.0.parameters(max_weight).to_string()
    }

    /// Minimum distance, or `None` when it exceeds `max_weight`.
    #[pyo3(signature = (max_weight = 7))]
    fn distance(&self, max_weight: usize) -> Option<usize> {
        self.0.distance(max_weight).exact()
    }

    /// Bit `j` is set when the error anticommutes with generator `j`.
    fn syndrome(&self, error: &PyPauli) -> PyResult<Vec<bool>> {
        self.0
            .syndrome(&error.0)
            .map(|s| s.bits().to_vec())
            .map_err(to_py)
    }

    fn is_correctable(&self, error: &PyPauli, t: usize) -> PyResult<bool> {
        self.0.is_correctable(&error.0, t).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("StabilizerCode('{}')", self.0.name())
    }
}

#[pyclass(name = "CodeHamiltonian", module = "qcch", frozen)]
struct PyHamiltonian(qcch_core::CodeHamiltonian);

#[pymethods]
impl PyHamiltonian {
    /// `-(J/2) Σ S` over the generators of `code`, concatenated `levels` times.
    #[new]
    #[pyo3(signature = (code, levels = 1, J = 1.0))]
    #[allow(non_snake_case)]
    fn new(code: &PyCode, levels: usize, J: f64) -> PyResult<Self> {
        let h = if levels == 1 {
            qcch_core::CodeHamiltonian::build_flat(&code.0, J)
        } else {
            qcch_core::CodeHamiltonian::build_concatenated(&code.0, levels, J)
        };
        h.map(PyHamiltonian).map_err(to_py)
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.0.n_qubits()
    }

    #[getter]
    fn levels(&self) -> usize {
        self.0.levels()
    }

    /// `(coefficient, Pauli)` pairs.
    fn terms(&self) -> Vec<(f64, PyPauli)> {
        self.0
            .terms()
            .iter()
            .map(|t| (t.coeff, PyPauli(t.pauli.clone())))
            .collect()
    }

    fn error_energy(&self, error: &PyPauli) -> PyResult<f64> {
        self.0.error_energy(&error.0).map_err(to_py)
    }

    fn spectrum<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        from_json(py, &self.0.spectrum().map_err(to_py)?)
    }

    #[pyo3(signature = (max_qubits = 13))]
    fn to_dense(&self, max_qubits: usize) -> PyResult<Vec<Vec<Complex64>>> {
        self.0
            .to_dense(max_qubits)
            .map(|m| dense_to_py(&m))
            .map_err(to_py)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[pyo3(signature = (max_states = 200_000))]
    fn energy_barrier<'py>(
        &self,
        py: Python<'py>,
        max_states: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let options = BarrierOptions {
            step_weight: 1,
            max_states,
        };
        from_json(
            py,
            &qcch_core::energy_barrier(&self.0, options).map_err(to_py)?,
        )
    }

    /// Effective Hamiltonian report for `level` under single-qubit perturbations of
    /// strength `x`; uniform coefficients unless `seed` is given.
    #[pyo3(signature = (x, order = 2, level = 0, seed = None, max_qubits = DEFAULT_KATO_MAX_QUBITS))]
    fn perturb<'py>(
        &self,
        py: Python<'py>,
        x: f64,
        order: usize,
        level: usize,
        seed: Option<u64>,
        max_qubits: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let n = self.0.n_qubits();
        let spec = match seed {
            Some(s) => PerturbationSpec::random(n, x, &mut ChaCha8Rng::seed_from_u64(s)),
            None => PerturbationSpec::uniform(n, x),
        };
        let config = KatoConfig {
            max_qubits,
            ..KatoConfig::default()
        };
        let engine = KatoEngine::new(&self.0, &spec, config).map_err(to_py)?;
        if level >= engine.decomposition().n_levels() {
            return Err(PyValueError::new_err(format!("level {level} out of range")));
        }
        let report = engine
            .effective_hamiltonian(level, x, order)
            .map_err(to_py)?;
        from_json(py, &report.summary())
    }

    /// Circuit for `exp(-i H t)` in `steps` repetitions.
    #[pyo3(signature = (t, steps = 1))]
    fn compile(&self, t: f64, steps: usize) -> PyResult<PyCircuit> {
        qcch_core::compile_evolution(&self.0, t, steps)
            .map(PyCircuit)
            .map_err(to_py)
    }
}

#[pyclass(name = "Circuit", module = "qcch", frozen)]
struct PyCircuit(qcch_core::PulseCircuit);

#[pymethods]
impl PyCircuit {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        text.parse().map(PyCircuit).map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        qcch_core::PulseCircuit::from_json(text)
            .map(PyCircuit)
            .map_err(to_py)
    }

    #[getter]
    fn depth(&self) -> usize {
        self.0.depth()
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.0.n_qubits
    }

    #[getter]
    fn gate_count(&self) -> usize {
        self.0.gate_count()
    }

    #[getter]
    fn cnot_count(&self) -> usize {
        self.0.cnot_count()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[pyo3(signature = (max_qubits = DEFAULT_CIRCUIT_MAX_QUBITS))]
    fn unitary(&self, max_qubits: usize) -> PyResult<Vec<Vec<Complex64>>> {
        self.0
            .unitary(max_qubits)
            .map(|m| dense_to_py(&m))
            .map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Circuit(n_qubits={}, depth={}, gates={})",
            self.0.n_qubits,
            self.0.depth(),
            self.0.gate_count()
        )
    }
}

/// Circuit for `exp(-i t P)`.
#[pyfunction]
fn compile_pauli_exponential(pauli: &PyPauli, t: f64) -> PyResult<PyCircuit> {
    qcch_core::compile_pauli_exponential(&pauli.0, t)
        .map(PyCircuit)
        .map_err(to_py)
}

/// One layer of π/2 rotations implementing a logical Pauli (`"I"`, `"X"`, `"Y"`, `"Z"`).
#[pyfunction]
#[pyo3(signature = (code, which, index = 0))]
fn compile_logical_pauli(code: &PyCode, which: &str, index: usize) -> PyResult<PyCircuit> {
    let which: LogicalPauli = which.parse().map_err(to_py)?;
    qcch_core::compile_logical_pauli(&code.0, which, index)
        .map(PyCircuit)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (code, J = 1.0))]
#[allow(non_snake_case)]
fn threshold<'py>(py: Python<'py>, code: &PyCode, J: f64) -> PyResult<Bound<'py, PyAny>> {
    from_json(py, &qcch_core::threshold(&code.0, J).map_err(to_py)?)
}

#[pyfunction]
fn count_report<'py>(py: Python<'py>, code: &PyCode) -> PyResult<Bound<'py, PyAny>> {
    from_json(py, &qcch_core::count_report(&code.0).map_err(to_py)?)
}

/// `x_r = x* (x/x*)^(2^r)` for `r = 0..=r_max`.
#[pyfunction]
fn suppression_curve(x: f64, x_star: f64, r_max: usize) -> PyResult<Vec<f64>> {
    qcch_core::suppression_curve(x, x_star, r_max).map_err(to_py)
}

#[pymodule]
fn qcch(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPauli>()?;
    m.add_class::<PyCode>()?;
    m.add_class::<PyHamiltonian>()?;
    m.add_class::<PyCircuit>()?;
    m.add_function(wrap_pyfunction!(compile_pauli_exponential, m)?)?;
    m.add_function(wrap_pyfunction!(compile_logical_pauli, m)?)?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(count_report, m)?)?;
    m.add_function(wrap_pyfunction!(suppression_curve, m)?)?;
    m.add("CapExceededError", m.py().get_type::<CapExceededError>())?;
    Ok(())
}
