//! Python bindings: evaluate invariants and run verification suites.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use knotpoly::braidrep::{component_count as count, BraidWord};
use knotpoly::cli::catalog::load_catalog;
use knotpoly::cli::suites::{run_suite, Options, SuiteError};
use knotpoly::invariants;

fn parse(braid: &str) -> PyResult<BraidWord> {
    BraidWord::parse(braid).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn value(invariant: &str, braid: &str) -> PyResult<invariants::InvariantValue> {
    let beta = parse(braid)?;
    invariants::compute(invariant, &beta)
        .ok_or_else(|| PyValueError::new_err(format!("unknown invariant '{invariant}'")))?
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Invariant of the braid closure, in display form (`t^(k/2)` for half powers).
#[pyfunction]
fn compute(invariant: &str, braid: &str) -> PyResult<String> {
    Ok(value(invariant, braid)?.value.to_string())
}

/// Invariant as JSON with its variable context.
#[pyfunction]
fn compute_json(invariant: &str, braid: &str) -> PyResult<String> {
    let v = value(invariant, braid)?;
    serde_json::to_string(&v.value.to_json()).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pyfunction]
fn component_count(braid: &str) -> PyResult<usize> {
    Ok(count(&parse(braid)?))
}

/// `(name, braid, components)` for each catalog link.
#[pyfunction]
fn catalog() -> PyResult<Vec<(String, String, usize)>> {
    let cat = load_catalog().map_err(PyRuntimeError::new_err)?;
    Ok(cat.into_iter().map(|e| (e.name, e.braid.to_string(), e.expected_components)).collect())
}

/// Run a suite; returns `(all_pass, json_report)`.
#[pyfunction]
#[pyo3(signature = (suite, seed = 0, samples = 20, link = "all"))]
fn verify(suite: &str, seed: u64, samples: usize, link: &str) -> PyResult<(bool, String)> {
    let opts = Options { seed, samples, link: link.to_string(), matrix_file: None };
    match run_suite(suite, &opts) {
        Ok(r) => Ok((r.all_pass(), r.to_json())),
        Err(SuiteError::Usage(m)) => Err(PyValueError::new_err(m)),
        Err(SuiteError::Internal(m)) => Err(PyRuntimeError::new_err(m)),
    }
}

#[pymodule]
fn pyknotpoly(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(compute, m)?)?;
    m.add_function(wrap_pyfunction!(compute_json, m)?)?;
    m.add_function(wrap_pyfunction!(component_count, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
