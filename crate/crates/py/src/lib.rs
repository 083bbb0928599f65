//! Python bindings. Exact rationals cross the boundary as strings such as
//! `"7/2"`; reports come back as dicts.

use okounkov_core::linalg::{format_rational, parse_rational};
use okounkov_core::okounkov::DEFAULT_WITNESS_CAP;
use okounkov_core::{self as core, FlagSpec, QVector, VPolytope};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(okounkov, OkounkovError, PyException);

fn err(e: core::Error) -> PyErr {
    OkounkovError::new_err(e.to_string())
}

fn rationals(v: &[String]) -> PyResult<QVector> {
    let coords = v.iter().map(|s| parse_rational(s)).collect::<core::Result<Vec<_>>>().map_err(err)?;
    QVector::new(coords).map_err(err)
}

#[pyclass(name = "Model", frozen, from_py_object)]
#[derive(Clone)]
struct PyModel(core::Model);

#[pymethods]
impl PyModel {
    /// `P^n` with `O(d)`.
    #[staticmethod]
    fn projective(n: usize, d: u32) -> PyResult<Self> {
        core::Model::projective(n, d).map(PyModel).map_err(err)
    }

    /// Toric variety of a lattice polytope given by its vertices.
    #[staticmethod]
    fn toric(vertices: Vec<Vec<i64>>) -> PyResult<Self> {
        core::Model::toric(&vertices).map(PyModel).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn hilbert_dim(&self, k: u32) -> PyResult<u64> {
        core::hilbert_dim(&self.0, k).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Model({})", self.0)
    }
}

#[pyclass(name = "Flag", frozen, from_py_object)]
#[derive(Clone)]
struct PyFlag(FlagSpec);

#[pymethods]
impl PyFlag {
    #[staticmethod]
    fn coordinate(order: Vec<usize>) -> Self {
        PyFlag(FlagSpec::coordinate(order))
    }

    /// Curve flag: `xi1` in `z0, z1, z2`, components as binary forms in `u, t`.
    #[staticmethod]
    fn curve(xi1: &str, param: Vec<String>) -> PyResult<Self> {
        let comps: Vec<&str> = param.iter().map(String::as_str).collect();
        FlagSpec::curve(xi1, &comps).map(PyFlag).map_err(err)
    }

    #[staticmethod]
    fn toric_vertex(vertex: Vec<i64>, edges: Vec<Vec<i64>>) -> Self {
        PyFlag(FlagSpec::toric_vertex(vertex, edges))
    }

    /// Validation report as `[(check, status, detail), ...]`.
    fn validate(&self, model: &PyModel) -> PyResult<Vec<(String, String, String)>> {
        let report = core::validate_flag(&model.0, &self.0).map_err(err)?;
        Ok(report
            .checks
            .iter()
            .map(|c| {
                let status = status_name(c.status);
                (c.name.to_string(), status, c.detail.clone())
            })
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("Flag({})", self.0)
    }
}

fn status_name(s: core::CheckStatus) -> String {
    match s {
        core::CheckStatus::Pass => "pass",
        core::CheckStatus::Fail => "fail",
        core::CheckStatus::UserAsserted => "user-asserted",
    }
    .to_string()
}

#[pyclass(name = "Polytope", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPolytope(VPolytope);

#[pymethods]
impl PyPolytope {
    /// Convex hull of points with rational string coordinates.
    #[staticmethod]
    fn hull(points: Vec<Vec<String>>) -> PyResult<Self> {
        let pts = points.iter().map(|p| rationals(p)).collect::<PyResult<Vec<_>>>()?;
        core::convex_hull(&pts).map(PyPolytope).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        VPolytope::from_json(text).map(PyPolytope).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn vertices(&self) -> Vec<Vec<String>> {
        self.0.vertices().iter().map(QVector::to_strings).collect()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.0.ambient_dim()
    }

    fn volume(&self) -> String {
        format_rational(&self.0.volume())
    }

    fn scale(&self, c: &str) -> PyResult<Self> {
        let c = parse_rational(c).map_err(err)?;
        self.0.scale(&c).map(PyPolytope).map_err(err)
    }

    /// Whether `other` lies inside this polytope.
    fn contains(&self, other: &PyPolytope) -> PyResult<bool> {
        self.0.contains(&other.0).map_err(err)
    }

    fn contains_point(&self, point: Vec<String>) -> PyResult<bool> {
        self.0.contains_point(&rationals(&point)?).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Polytope({})", self.0.to_json())
    }
}

/// Model and flag from a TOML or JSON config file.
#[pyfunction]
fn load_config(path: &str) -> PyResult<(PyModel, PyFlag)> {
    let (m, f) = core::config::load_config(std::path::Path::new(path)).map_err(err)?;
    Ok((PyModel(m), PyFlag(f)))
}

#[pyfunction]
fn valuation_image(model: &PyModel, flag: &PyFlag, k: u32) -> PyResult<Vec<Vec<u32>>> {
    Ok(core::valuation_image(&model.0, &flag.0, k).map_err(err)?.into_iter().collect())
}

/// Truncated body: the hull of `v(s)/k` over levels `k <= max_level`.
#[pyfunction]
fn body(model: &PyModel, flag: &PyFlag, max_level: u32) -> PyResult<PyPolytope> {
    let sample = core::enumerate_semigroup(&model.0, &flag.0, max_level).map_err(err)?;
    core::body_approx(&sample).map(PyPolytope).map_err(err)
}

#[pyfunction]
fn verify_theorem<'py>(
    py: Python<'py>,
    model: &PyModel,
    flag: &PyFlag,
    max_level: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let r = core::verify_theorem(&model.0, &flag.0, max_level).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("contained", r.contained)?;
    d.set_item("equal", r.equal)?;
    d.set_item("e1_gap", format_rational(&r.e1_gap))?;
    d.set_item("b", r.b)?;
    d.set_item("K", r.max_level)?;
    d.set_item("body", PyPolytope(r.body))?;
    d.set_item("predicted", PyPolytope(r.predicted))?;
    Ok(d)
}

/// Coefficients `x_0, ..., x_n` writing `a` at level `k` in the simplex
/// `conv{0, b e_1, e_2, ..., e_n}`.
#[pyfunction]
fn decompose(a: Vec<u32>, k: u32, b: u64) -> PyResult<Vec<String>> {
    let n = a.len();
    let r = core::decompose(&a, k, b, n).map_err(err)?;
    Ok(r.coefficients.iter().map(format_rational).collect())
}

#[pyfunction]
#[pyo3(signature = (model, flag, c, cap = DEFAULT_WITNESS_CAP))]
fn lemma_witness<'py>(
    py: Python<'py>,
    model: &PyModel,
    flag: &PyFlag,
    c: &str,
    cap: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let c = parse_rational(c).map_err(err)?;
    let w = core::lemma_witness(&model.0, &flag.0, &c, cap).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("c", format_rational(&w.c))?;
    d.set_item("b", w.b)?;
    d.set_item("m", w.m)?;
    d.set_item("v1", w.v1)?;
    d.set_item("N", w.power)?;
    d.set_item("tau", w.tau.to_string_with(&okounkov_core::poly::BINARY_VARS))?;
    d.set_item("lifted", w.lifted.to_string())?;
    d.set_item("valuation", w.valuation)?;
    Ok(d)
}

#[pyfunction]
fn scaling_check(model: &PyModel, flag: &PyFlag, m: u32, max_level: u32) -> PyResult<bool> {
    Ok(core::scaling_check(&model.0, &flag.0, m, max_level).map_err(err)?.equal)
}

/// `(k, dim H^0(L^k), dim / k^n, body volume or None)`.
type VolumeRow = (u32, u64, String, Option<String>);

#[pyfunction]
#[pyo3(signature = (model, flag, max_level, body_levels = 0))]
fn volume_table(model: &PyModel, flag: &PyFlag, max_level: u32, body_levels: u32) -> PyResult<Vec<VolumeRow>> {
    let t = core::volume_vs_hilbert(&model.0, &flag.0, max_level, body_levels).map_err(err)?;
    Ok(t.rows
        .into_iter()
        .map(|r| (r.k, r.hilbert_dim, format_rational(&r.normalized_dim), r.volume.as_ref().map(format_rational)))
        .collect())
}

/// Number of violations of the valuation axioms over seeded random pairs.
#[pyfunction]
#[pyo3(signature = (model, flag, trials = 200, seed = 0))]
fn axiom_violations(model: &PyModel, flag: &PyFlag, trials: usize, seed: u64) -> PyResult<usize> {
    Ok(core::valuation_axiom_check(&model.0, &flag.0, trials, seed).map_err(err)?.violations.len())
}

#[pyfunction]
fn restriction_rank(model: &PyModel, flag: &PyFlag, j: u32) -> PyResult<usize> {
    Ok(core::rank(&core::restriction_matrix(&model.0, &flag.0, j).map_err(err)?))
}

#[pymodule]
fn okounkov(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("OkounkovError", m.py().get_type::<OkounkovError>())?;
    m.add_class::<PyModel>()?;
    m.add_class::<PyFlag>()?;
    m.add_class::<PyPolytope>()?;
    m.add_function(wrap_pyfunction!(load_config, m)?)?;
    m.add_function(wrap_pyfunction!(valuation_image, m)?)?;
    m.add_function(wrap_pyfunction!(body, m)?)?;
    m.add_function(wrap_pyfunction!(verify_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_witness, m)?)?;
    m.add_function(wrap_pyfunction!(scaling_check, m)?)?;
    m.add_function(wrap_pyfunction!(volume_table, m)?)?;
    m.add_function(wrap_pyfunction!(axiom_violations, m)?)?;
    m.add_function(wrap_pyfunction!(restriction_rank, m)?)?;
    Ok(())
}
