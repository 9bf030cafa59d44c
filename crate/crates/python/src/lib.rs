//! Python module `floorsum`. Function kinds, targets and cases are passed by
//! their CLI names (`"tau2"`, `"lambda"`, `"2omega"`, ...); rationals cross
//! the boundary as `"p/q"` strings, and reports come back as dicts.

use floorsum_core::expsum::{self, BoundCase};
use floorsum_core::floorsum::{self as fs, Method};
use floorsum_core::identities::{self, IdentityKind, PhaseFunction};
use floorsum_core::pairs_opt::{self as po, Seed, Target};
use floorsum_core::{arith, psi, Error, FunctionKind, Numeric};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyComplex;
use serde::Serialize;

create_exception!(floorsum, FloorsumError, PyValueError, "Raised for any error reported by the core library.");

fn err(e: Error) -> PyErr {
    FloorsumError::new_err(format!("{}: {e}", e.kind()))
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| FloorsumError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn numeric<'py>(py: Python<'py>, n: Numeric) -> PyResult<Bound<'py, PyAny>> {
    Ok(match n {
        Numeric::Int(v) => v.into_pyobject(py)?.into_any(),
        Numeric::Real(v) => v.into_pyobject(py)?.into_any(),
    })
}

/// An exponent pair `(k, l)` with exact rational coordinates.
#[pyclass(name = "ExponentPair", module = "floorsum", frozen, from_py_object)]
#[derive(Clone)]
struct PyExponentPair(po::ExponentPair);

#[pymethods]
impl PyExponentPair {
    #[new]
    #[pyo3(signature = (k, l, eps_carrier = false))]
    fn new(k: &str, l: &str, eps_carrier: bool) -> PyResult<Self> {
        po::ExponentPair::new(parse(k)?, parse(l)?, eps_carrier).map(Self).map_err(err)
    }

    /// `trivial`, `vdc`, `classic`, `bourgain` or `hb:<m>`.
    #[staticmethod]
    fn from_seed(name: &str) -> PyResult<Self> {
        parse::<Seed>(name)?.pair().map(Self).map_err(err)
    }

    #[getter]
    fn k(&self) -> String {
        self.0.k.to_string()
    }

    #[getter]
    fn l(&self) -> String {
        self.0.l.to_string()
    }

    #[getter]
    fn eps_carrier(&self) -> bool {
        self.0.eps_carrier
    }

    #[getter]
    fn word(&self) -> String {
        self.0.word.clone()
    }

    #[getter]
    fn seed(&self) -> String {
        self.0.seed.to_string()
    }

    fn a(&self) -> Self {
        Self(po::apply_a(&self.0))
    }

    fn b(&self) -> Self {
        Self(po::apply_b(&self.0))
    }

    /// Applies a word in composition order: `"BA"` is `B(A(self))`.
    fn apply_word(&self, word: &str) -> PyResult<Self> {
        self.0.apply_word(word).map(Self).map_err(err)
    }

    fn as_floats(&self) -> (f64, f64) {
        (self.0.k.to_f64(), self.0.l.to_f64())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0.same_point(&other.0)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.0.key().hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        format!("ExponentPair('{}', '{}', eps_carrier={})", self.0.k, self.0.l, if self.0.eps_carrier { "True" } else { "False" })
    }
}

#[pyfunction]
fn heath_brown_pair(m: u32) -> PyResult<PyExponentPair> {
    po::heath_brown_pair(m).map(PyExponentPair).map_err(err)
}

/// The closed-form exponent as `"p/q"`, or `None` when a side condition fails.
#[pyfunction]
fn theorem_exponent(target: &str, pair: &PyExponentPair) -> PyResult<Option<String>> {
    let t: Target = parse(target)?;
    Ok(po::theorem_exponent(t, &pair.0).exponent().map(ToString::to_string))
}

/// Best pair over words of length `<= depth` from comma-separated seeds.
#[pyfunction]
#[pyo3(signature = (target, seeds = "trivial,classic,bourgain", depth = 8))]
fn minimize_over_pairs(py: Python<'_>, target: &str, seeds: &str, depth: u32) -> PyResult<(PyExponentPair, String)> {
    let t: Target = parse(target)?;
    let seeds = Seed::parse_list(seeds)
        .and_then(|s| s.into_iter().map(Seed::pair).collect::<Result<Vec<_>, _>>())
        .map_err(err)?;
    let (p, e) = py.detach(|| po::minimize_over_pairs(t, &seeds, depth)).map_err(err)?;
    Ok((PyExponentPair(p), e.to_string()))
}

/// Solves a balance problem given as JSON (the `pairs balance` format).
#[pyfunction]
fn balance<'py>(py: Python<'py>, problem: &str) -> PyResult<Bound<'py, PyAny>> {
    let problem: po::BalanceProblem =
        serde_json::from_str(problem).map_err(|e| FloorsumError::new_err(format!("parse: {e}")))?;
    to_dict(py, &po::balance_auto(&problem).map_err(err)?)
}

/// `S_f(x)`: an int for integer-valued kinds, a float for `lambda`.
#[pyfunction]
#[pyo3(signature = (kind, x, method = "fast"))]
fn floor_sum<'py>(py: Python<'py>, kind: &str, x: u64, method: &str) -> PyResult<Bound<'py, PyAny>> {
    let kind: FunctionKind = parse(kind)?;
    let method: Method = parse(method)?;
    let v = py
        .detach(|| match method {
            Method::Naive => fs::floor_sum_naive(kind, x),
            Method::Fast => fs::floor_sum_fast(kind, x),
        })
        .map_err(err)?;
    numeric(py, v)
}

#[pyfunction]
#[pyo3(signature = (kind, x, method = "fast", cutoff = 1_000_000))]
fn floor_sum_report<'py>(py: Python<'py>, kind: &str, x: u64, method: &str, cutoff: u64) -> PyResult<Bound<'py, PyAny>> {
    let kind: FunctionKind = parse(kind)?;
    let method: Method = parse(method)?;
    let rep = py.detach(|| fs::floor_sum_report(kind, x, method, cutoff)).map_err(err)?;
    to_dict(py, &rep)
}

#[pyfunction]
fn main_term_constant<'py>(py: Python<'py>, kind: &str, cutoff: u64) -> PyResult<Bound<'py, PyAny>> {
    let kind: FunctionKind = parse(kind)?;
    let c = py.detach(|| fs::main_term_constant(kind, cutoff)).map_err(err)?;
    let d = to_dict(py, &c)?;
    d.set_item("completed", c.completed())?;
    Ok(d)
}

/// `[f(lo), ..., f(hi)]`.
#[pyfunction]
fn sieve<'py>(py: Python<'py>, kind: &str, lo: u64, hi: u64) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let kind: FunctionKind = parse(kind)?;
    let table = py.detach(|| arith::build_sieve(kind, lo, hi)).map_err(err)?;
    (lo..=hi).map(|n| numeric(py, table.get(n).expect("covered"))).collect()
}

#[pyfunction]
fn error_scan<'py>(py: Python<'py>, kind: &str, lo: u64, hi: u64, points: usize) -> PyResult<Bound<'py, PyAny>> {
    let kind: FunctionKind = parse(kind)?;
    let rep = py
        .detach(|| fs::log_grid(lo, hi, points).and_then(|g| fs::error_scan(kind, &g)))
        .map_err(err)?;
    to_dict(py, &rep)
}

/// `max over the grid of |ψ − V_H| − envelope`; at most about 1e-9 when the bound holds.
#[pyfunction]
#[pyo3(signature = (h, grid = 10_000))]
fn verify_pointwise_bound(py: Python<'_>, h: u64, grid: u64) -> PyResult<f64> {
    py.detach(|| psi::verify_pointwise_bound(h, grid)).map_err(err)
}

/// Seeded random identity checks; `identity` is `vaughan-lambda`,
/// `vaughan-mu`, `hyperbola` or `hyperbola-exp`.
#[pyfunction]
#[pyo3(signature = (identity, trials = 100, seed = 0))]
fn random_suite<'py>(py: Python<'py>, identity: &str, trials: u64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let id: IdentityKind = parse(identity)?;
    let rep = py.detach(|| identities::random_suite(id, trials, seed)).map_err(err)?;
    to_dict(py, &rep)
}

/// `Σ_{R<n≤R1} f(n) e(z/n)`.
#[pyfunction]
#[pyo3(name = "exp_sum")]
fn exp_sum_py<'py>(py: Python<'py>, kind: &str, r: u64, r1: u64, z: f64) -> PyResult<Bound<'py, PyComplex>> {
    let kind: FunctionKind = parse(kind)?;
    let s = py
        .detach(|| expsum::exp_sum(kind, r, r1, &PhaseFunction::Reciprocal { z }))
        .map_err(err)?;
    Ok(PyComplex::from_doubles(py, s.re, s.im))
}

/// Measured-versus-claimed report for a bound case (`lambda`, `2omega`, ...).
#[pyfunction]
#[pyo3(signature = (case, z, r, pair = None))]
fn check_bound<'py>(py: Python<'py>, case: &str, z: f64, r: u64, pair: Option<PyExponentPair>) -> PyResult<Bound<'py, PyAny>> {
    let case: BoundCase = parse(case)?;
    let pair = match pair {
        Some(p) => p.0,
        None => Seed::Classic.pair().map_err(err)?,
    };
    let rep = py.detach(|| expsum::check_bound(case, z, r, &pair)).map_err(err)?;
    to_dict(py, &rep)
}

#[pymodule]
fn floorsum(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FloorsumError", m.py().get_type::<FloorsumError>())?;
    m.add_class::<PyExponentPair>()?;
    m.add_function(wrap_pyfunction!(heath_brown_pair, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_over_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(balance, m)?)?;
    m.add_function(wrap_pyfunction!(floor_sum, m)?)?;
    m.add_function(wrap_pyfunction!(floor_sum_report, m)?)?;
    m.add_function(wrap_pyfunction!(main_term_constant, m)?)?;
    m.add_function(wrap_pyfunction!(sieve, m)?)?;
    m.add_function(wrap_pyfunction!(error_scan, m)?)?;
    m.add_function(wrap_pyfunction!(verify_pointwise_bound, m)?)?;
    m.add_function(wrap_pyfunction!(random_suite, m)?)?;
    m.add_function(wrap_pyfunction!(exp_sum_py, m)?)?;
    m.add_function(wrap_pyfunction!(check_bound, m)?)?;
    Ok(())
}
