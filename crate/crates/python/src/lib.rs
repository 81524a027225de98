//! Python bindings. Matrices are nested lists of floats, patterns are nested
//! lists of 0/1, and every index (sensor, state) is 0-based. Results come back
//! as plain dicts; eigenvalues are Python complex numbers.

use std::collections::BTreeSet;

use funcobs::placement::{
    construct_min_c, greedy_place, greedy_with_certificate, PlacementProblem,
};
use funcobs::structural::realization::sample_functional_observability;
use funcobs::structural::target_controllability as target_report;
use funcobs::{Error, PatternMatrix, PatternTriple, RankPolicy, RealMatrix, SystemTriple};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

create_exception!(funcobs_py, AnalysisError, PyException);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidInput(_) | Error::DimensionMismatch(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => AnalysisError::new_err(e.to_string()),
    }
}

fn real(rows: &[Vec<f64>], cols: usize, name: &str) -> PyResult<RealMatrix> {
    if let Some(r) = rows.iter().position(|row| row.len() != cols) {
        return Err(PyValueError::new_err(format!(
            "{name} row {r} has {} entries, expected {cols}",
            rows[r].len()
        )));
    }
    Ok(RealMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

fn system(a: Vec<Vec<f64>>, c: Vec<Vec<f64>>, f: Vec<Vec<f64>>) -> PyResult<SystemTriple> {
    let n = a.len();
    SystemTriple::new(real(&a, n, "A")?, real(&c, n, "C")?, real(&f, n, "F")?).map_err(py_err)
}

fn pattern(grid: &[Vec<u8>], cols: usize) -> PyResult<PatternMatrix> {
    PatternMatrix::from_grid(grid, cols).map_err(py_err)
}

fn pattern_triple(a: Vec<Vec<u8>>, c: Vec<Vec<u8>>, f: Vec<Vec<u8>>) -> PyResult<PatternTriple> {
    let n = a.len();
    PatternTriple::new(pattern(&a, n)?, pattern(&c, n)?, pattern(&f, n)?).map_err(py_err)
}

fn policy(tolerance: f64) -> PyResult<RankPolicy> {
    if tolerance == 0.0 {
        return Ok(RankPolicy::default());
    }
    RankPolicy::relative(tolerance).map_err(py_err)
}

fn value_to_py<'py>(py: Python<'py>, key: Option<&str>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_pyobject(py)?.into_any(),
            (None, Some(i)) => i.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => match (key, items.as_slice()) {
            (Some("eigenvalue"), [re, im]) => PyComplex::from_doubles(
                py,
                re.as_f64().unwrap_or(f64::NAN),
                im.as_f64().unwrap_or(f64::NAN),
            )
            .into_any(),
            _ => {
                let list = PyList::empty(py);
                for item in items {
                    list.append(value_to_py(py, None, item)?)?;
                }
                list.into_any()
            }
        },
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, value_to_py(py, Some(k), item)?)?;
            }
            dict.into_any()
        }
    })
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| AnalysisError::new_err(e.to_string()))?;
    value_to_py(py, None, &v)
}

/// Functional observability and detectability of `(A, C, F)`.
#[pyfunction]
#[pyo3(signature = (a, c, f, tolerance = 0.0, margin = 0.0))]
fn analyze<'py>(
    py: Python<'py>,
    a: Vec<Vec<f64>>,
    c: Vec<Vec<f64>>,
    f: Vec<Vec<f64>>,
    tolerance: f64,
    margin: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let sys = system(a, c, f)?;
    let report = funcobs::analyze(&sys, &policy(tolerance)?, margin).map_err(py_err)?;
    to_py(py, &report)
}

/// Structural functional observability of a pattern triple.
#[pyfunction]
fn check_sfo<'py>(
    py: Python<'py>,
    a: Vec<Vec<u8>>,
    c: Vec<Vec<u8>>,
    f: Vec<Vec<u8>>,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &funcobs::is_sfo(&pattern_triple(a, c, f)?))
}

/// Fraction of random real realizations of a pattern triple that are
/// functionally observable.
#[pyfunction]
#[pyo3(signature = (a, c, f, trials = 100, seed = 0, tolerance = 0.0))]
fn sample_sfo<'py>(
    py: Python<'py>,
    a: Vec<Vec<u8>>,
    c: Vec<Vec<u8>>,
    f: Vec<Vec<u8>>,
    trials: usize,
    seed: u64,
    tolerance: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let t = pattern_triple(a, c, f)?;
    to_py(
        py,
        &sample_functional_observability(&t, trials, seed, &policy(tolerance)?).map_err(py_err)?,
    )
}

/// Greedy selection of rows of `C`. `mode` is `"fo"` or `"fd"` for numeric
/// matrices and `"sfo"` for 0/1 patterns. With `max_exhaustive`, the result
/// also carries a certificate against the exact optimum.
#[pyfunction]
#[pyo3(signature = (a, c, f, mode = "fo", candidates = None, tolerance = 0.0, margin = 0.0, max_exhaustive = None))]
#[allow(clippy::too_many_arguments)]
fn place<'py>(
    py: Python<'py>,
    a: Bound<'py, PyAny>,
    c: Bound<'py, PyAny>,
    f: Bound<'py, PyAny>,
    mode: &str,
    candidates: Option<Vec<usize>>,
    tolerance: f64,
    margin: f64,
    max_exhaustive: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut problem = match mode {
        "fo" => PlacementProblem::numeric_fo(
            system(a.extract()?, c.extract()?, f.extract()?)?,
            policy(tolerance)?,
        ),
        "fd" => PlacementProblem::numeric_fd(
            system(a.extract()?, c.extract()?, f.extract()?)?,
            policy(tolerance)?,
            margin,
        )
        .map_err(py_err)?,
        "sfo" => PlacementProblem::structural_sfo(pattern_triple(
            a.extract()?,
            c.extract()?,
            f.extract()?,
        )?),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown mode {other:?}; expected fo, fd or sfo"
            )))
        }
    };
    if let Some(list) = candidates {
        problem = problem.with_candidates(list).map_err(py_err)?;
    }
    let result = match max_exhaustive {
        Some(limit) => greedy_with_certificate(&problem, limit),
        None => greedy_place(&problem),
    }
    .map_err(py_err)?;
    to_py(py, &result)
}

/// Minimal output matrix making `(A, C, F)` functionally observable for
/// diagonalizable `A`.
#[pyfunction]
#[pyo3(signature = (a, f, tolerance = 0.0))]
fn design_min<'py>(
    py: Python<'py>,
    a: Vec<Vec<f64>>,
    f: Vec<Vec<f64>>,
    tolerance: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let n = a.len();
    let design = construct_min_c(&real(&a, n, "A")?, &real(&f, n, "F")?, &policy(tolerance)?)
        .map_err(py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("sensor_count", design.sensor_count)?;
    let rows: Vec<Vec<f64>> = design
        .c
        .row_iter()
        .map(|r| r.iter().copied().collect())
        .collect();
    dict.set_item("C", rows)?;
    dict.set_item("basis_condition", design.basis_condition)?;
    dict.set_item("rank_o", design.rank_o)?;
    dict.set_item("rank_of", design.rank_of)?;
    Ok(dict.into_any())
}

/// Structural target controllability of the states `targets` under `(A, B)`.
#[pyfunction]
fn target_controllability<'py>(
    py: Python<'py>,
    a: Vec<Vec<u8>>,
    b: Vec<Vec<u8>>,
    targets: Vec<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let targets: BTreeSet<usize> = targets.into_iter().collect();
    to_py(
        py,
        &target_report(&pattern(&a, n)?, &pattern(&b, m)?, &targets).map_err(py_err)?,
    )
}

#[pymodule]
pub fn funcobs_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("AnalysisError", m.py().get_type::<AnalysisError>())?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(check_sfo, m)?)?;
    m.add_function(wrap_pyfunction!(sample_sfo, m)?)?;
    m.add_function(wrap_pyfunction!(place, m)?)?;
    m.add_function(wrap_pyfunction!(design_min, m)?)?;
    m.add_function(wrap_pyfunction!(target_controllability, m)?)?;
    Ok(())
}
