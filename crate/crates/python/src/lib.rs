//! Python module `pctgen`: circuits, test sets, SSA construction and the
//! test generation pipeline.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pctgen::circuit::{self as circ, parse_aiger_ascii, parse_netlist};
use pctgen::cnf::{from_dimacs, to_dimacs, tseitin_encode, Bits, Var};
use pctgen::semstr::{self, SemStrConfig, SemStrOutcome};
use pctgen::ssa::{self, SsaOutcome, DEFAULT_SEARCH_BUDGET, DEFAULT_STATE_BUDGET};
use pctgen::testgen::{self, CtsVerdict, PctConfig, PctOutcome, VarChoice, DEFAULT_TRIES};
use pctgen::{Error, SolverConfig};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Budget { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn bits(s: &str) -> PyResult<Bits> {
    s.parse()
        .map_err(|_| PyValueError::new_err(format!("not a bitstring: `{s}`")))
}

#[pyclass(name = "Circuit", module = "pctgen", from_py_object)]
#[derive(Clone)]
struct PyCircuit {
    inner: pctgen::Circuit,
}

#[pymethods]
impl PyCircuit {
    #[staticmethod]
    fn from_netlist(text: &str) -> PyResult<Self> {
        parse_netlist(text).map(|inner| PyCircuit { inner }).map_err(to_py)
    }

    #[staticmethod]
    fn from_aiger(text: &str) -> PyResult<Self> {
        parse_aiger_ascii(text).map(|inner| PyCircuit { inner }).map_err(to_py)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn num_inputs(&self) -> usize {
        self.inner.num_inputs()
    }

    #[getter]
    fn num_gates(&self) -> usize {
        self.inner.num_gates()
    }

    #[getter]
    fn input_names(&self) -> Vec<String> {
        self.inner.input_names().to_vec()
    }

    fn eval(&self, test: &str) -> PyResult<bool> {
        let x = bits(test)?;
        if x.len() != self.inner.num_inputs() {
            return Err(to_py(Error::DomainMismatch));
        }
        Ok(self.inner.eval(&x))
    }

    /// Values of all signals (inputs first, then gates) under `test`.
    fn simulate(&self, test: &str) -> PyResult<String> {
        let x = bits(test)?;
        if x.len() != self.inner.num_inputs() {
            return Err(to_py(Error::DomainMismatch));
        }
        Ok(self.inner.simulate(&x).to_string())
    }

    fn to_netlist(&self) -> String {
        self.inner.to_netlist()
    }

    /// DIMACS text of `F_N ∧ z`.
    fn encode(&self) -> String {
        to_dimacs(&tseitin_encode(&self.inner))
    }

    /// Boundary signal names of the cut grown to `size` members.
    fn cut(&self, size: usize) -> PyResult<Vec<String>> {
        let r = circ::gen_cut(&self.inner, size).map_err(to_py)?;
        Ok(r.boundary()
            .iter()
            .map(|v| self.inner.signal_name(v.index()).to_string())
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Circuit(name={:?}, inputs={}, gates={})",
            self.inner.name(),
            self.inner.num_inputs(),
            self.inner.num_gates()
        )
    }
}

#[pyclass(name = "TestSet", module = "pctgen", from_py_object)]
#[derive(Clone)]
struct PyTestSet {
    inner: pctgen::TestSet,
}

#[pymethods]
impl PyTestSet {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        pctgen::TestSet::from_text(text)
            .map(|inner| PyTestSet { inner })
            .map_err(to_py)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn tests(&self) -> Vec<String> {
        self.inner.tests().iter().map(|t| t.to_string()).collect()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.as_str()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, test: &str) -> PyResult<bool> {
        Ok(self.inner.contains(&bits(test)?))
    }

    fn __repr__(&self) -> String {
        format!("TestSet(kind={}, tests={})", self.inner.kind, self.inner.len())
    }
}

#[pyfunction]
fn miter(a: &PyCircuit, b: &PyCircuit) -> PyResult<PyCircuit> {
    circ::build_miter(&a.inner, &b.inner)
        .map(|inner| PyCircuit { inner })
        .map_err(to_py)
}

/// `{"ssa": [(point, clause), ...]}` for an unsatisfiable formula, else
/// `{"model": point}`.
#[pyfunction]
#[pyo3(signature = (dimacs, center, budget = DEFAULT_STATE_BUDGET))]
fn build_ssa<'py>(py: Python<'py>, dimacs: &str, center: &str, budget: u64) -> PyResult<Bound<'py, PyDict>> {
    let h = from_dimacs(dimacs).map_err(to_py)?;
    let d = PyDict::new(py);
    match ssa::build_ssa(&h, &bits(center)?, budget).map_err(to_py)? {
        SsaOutcome::Ssa(s) => {
            let pairs: Vec<(String, usize)> = s.iter().map(|(p, c)| (p.to_string(), c)).collect();
            d.set_item("ssa", pairs)?;
        }
        SsaOutcome::Sat(m) => d.set_item("model", m.to_string())?,
    }
    Ok(d)
}

/// Projection onto the 0-based variables `onto`: `{"h": dimacs, "points":
/// [...]}`, or `{"model": point}` when the formula is satisfiable.
#[pyfunction]
fn sem_str<'py>(py: Python<'py>, dimacs: &str, onto: Vec<u32>) -> PyResult<Bound<'py, PyDict>> {
    let g = from_dimacs(dimacs).map_err(to_py)?;
    let v: Vec<Var> = onto.into_iter().map(Var).collect();
    let d = PyDict::new(py);
    match semstr::sem_str(&g, &v, None, &SemStrConfig::default()).map_err(to_py)? {
        SemStrOutcome::Projection(p) => {
            d.set_item("h", to_dimacs(&p.h))?;
            d.set_item(
                "points",
                p.ssa.points().iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            )?;
        }
        SemStrOutcome::Sat(m) => d.set_item("model", m.to_string())?,
    }
    Ok(d)
}

/// `{"tests": TestSet}` or `{"counterexample": test}`.
#[pyfunction]
#[pyo3(signature = (circuit, mode = "full", cut_size = None, tries = DEFAULT_TRIES, seed = 0, jobs = 1, center_iteration = 0))]
#[allow(clippy::too_many_arguments)]
fn gen_pct<'py>(
    py: Python<'py>,
    circuit: &PyCircuit,
    mode: &str,
    cut_size: Option<usize>,
    tries: usize,
    seed: u64,
    jobs: usize,
    center_iteration: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let choice = match (mode, cut_size) {
        ("full", _) => VarChoice::Full,
        ("inputs", _) => VarChoice::Inputs,
        ("cut", Some(k)) => VarChoice::Cut(k),
        ("cut", None) => return Err(PyValueError::new_err("mode `cut` needs cut_size")),
        _ => return Err(PyValueError::new_err(format!("unknown mode `{mode}`"))),
    };
    let cfg = PctConfig {
        tries,
        seed,
        solver: SolverConfig::default().with_seed(seed),
        jobs: jobs.max(1),
        center_iteration,
        ..PctConfig::default()
    };
    let d = PyDict::new(py);
    match py
        .detach(|| testgen::gen_pct(&circuit.inner, choice, &cfg))
        .map_err(to_py)?
    {
        PctOutcome::Tests(inner) => d.set_item("tests", PyTestSet { inner })?,
        PctOutcome::Counterexample(x) => d.set_item("counterexample", x.to_string())?,
    }
    Ok(d)
}

/// `"complete"`, `"incomplete"` or `"inconclusive"`.
#[pyfunction]
#[pyo3(signature = (circuit, tests, budget = DEFAULT_SEARCH_BUDGET, redundancy_aware = false))]
fn verify_cts(circuit: &PyCircuit, tests: &PyTestSet, budget: u64, redundancy_aware: bool) -> PyResult<&'static str> {
    let verdict = if redundancy_aware {
        testgen::redundancy_aware_verify(&circuit.inner, &tests.inner, &SolverConfig::default(), budget)
            .map_err(to_py)?
            .verdict
    } else {
        testgen::verify_cts(&circuit.inner, &tests.inner, budget).map_err(to_py)?
    };
    Ok(match verdict {
        CtsVerdict::Complete(_) => "complete",
        CtsVerdict::NotComplete => "incomplete",
        CtsVerdict::Inconclusive => "inconclusive",
    })
}

/// `(outputs, hit indices, hit rate)`.
#[pyfunction]
#[pyo3(signature = (circuit, tests, jobs = 1))]
fn run_tests(circuit: &PyCircuit, tests: &PyTestSet, jobs: usize) -> PyResult<(Vec<bool>, Vec<usize>, f64)> {
    let r = testgen::run_tests(&circuit.inner, &tests.inner, jobs.max(1)).map_err(to_py)?;
    let rate = r.hit_rate();
    Ok((r.outputs, r.hits, rate))
}

#[pyfunction]
#[pyo3(signature = (circuit, count, seed = 0, distinct = false))]
fn random_tests(circuit: &PyCircuit, count: usize, seed: u64, distinct: bool) -> PyTestSet {
    PyTestSet {
        inner: testgen::random_tests(&circuit.inner, count, seed, !distinct),
    }
}

#[pymodule]
#[pyo3(name = "pctgen")]
fn pctgen_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCircuit>()?;
    m.add_class::<PyTestSet>()?;
    m.add_function(wrap_pyfunction!(miter, m)?)?;
    m.add_function(wrap_pyfunction!(build_ssa, m)?)?;
    m.add_function(wrap_pyfunction!(sem_str, m)?)?;
    m.add_function(wrap_pyfunction!(gen_pct, m)?)?;
    m.add_function(wrap_pyfunction!(verify_cts, m)?)?;
    m.add_function(wrap_pyfunction!(run_tests, m)?)?;
    m.add_function(wrap_pyfunction!(random_tests, m)?)?;
    Ok(())
}
