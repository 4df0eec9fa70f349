//! Python bindings: words, morphisms, Weyl classes, ideals and self-tests.

use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use heis::diagrams::{hom_dim_restricted, restricted_basis};
use heis::engine::{compose as engine_compose, decompose_multiplicities, hcompose, SumObject};
use heis::ideals::{self, IdealDescriptor, Side};
use heis::oracle::selftest::{closure_selftest, relations_selftest};
use heis::oracle::Oracle;
use heis::render::{morphism_json, render_morphism, to_json, Format};
use heis::HeisError;

fn err(e: HeisError) -> PyErr {
    match e {
        HeisError::Type(_) | HeisError::TypeMismatch { .. } | HeisError::DimensionMismatch(_) => {
            PyTypeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn word(s: &str) -> PyResult<heis::words::Word> {
    s.parse().map_err(err)
}

fn sum_object(s: &str) -> PyResult<SumObject> {
    s.parse().map_err(err)
}

fn side(s: &str) -> PyResult<Side> {
    match s {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        "two_sided" | "two-sided" => Ok(Side::TwoSided),
        other => Err(PyValueError::new_err(format!("unknown side {other:?}"))),
    }
}

/// An integer combination of restricted basis diagrams.
#[pyclass(name = "Morphism", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyMorphism(heis::engine::Morphism);

#[pymethods]
impl PyMorphism {
    /// Normal form of an expression such as `"t . t'"`.
    #[new]
    fn new(expr: &str) -> PyResult<Self> {
        let e = heis::expr::parse(expr).map_err(err)?;
        e.evaluate().map(PyMorphism).map_err(err)
    }

    #[staticmethod]
    fn identity(w: &str) -> PyResult<Self> {
        Ok(PyMorphism(heis::engine::Morphism::identity(&word(w)?)))
    }

    #[getter]
    fn source(&self) -> String {
        self.0.source().to_string()
    }

    #[getter]
    fn target(&self) -> String {
        self.0.target().to_string()
    }

    /// `(coefficient, diagram)` pairs in canonical order.
    fn terms(&self) -> Vec<(i64, String)> {
        self.0.terms().iter().map(|(d, &c)| (c, d.to_string())).collect()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `self ∘ below`.
    fn compose(&self, below: &PyMorphism) -> PyResult<Self> {
        engine_compose(&self.0, &below.0).map(PyMorphism).map_err(err)
    }

    /// `self ⊗ right`.
    fn tensor(&self, right: &PyMorphism) -> Self {
        PyMorphism(hcompose(&self.0, &right.0))
    }

    fn __add__(&self, other: &PyMorphism) -> PyResult<Self> {
        self.0.add(&other.0).map(PyMorphism).map_err(err)
    }

    fn __sub__(&self, other: &PyMorphism) -> PyResult<Self> {
        self.0.sub(&other.0).map(PyMorphism).map_err(err)
    }

    fn __mul__(&self, k: i64) -> Self {
        PyMorphism(self.0.scale(k))
    }

    fn __rmul__(&self, k: i64) -> Self {
        self.__mul__(k)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &to_json("morphism", &morphism_json(&self.0)))
    }

    #[pyo3(signature = (format = "ascii"))]
    fn render(&self, format: &str) -> PyResult<String> {
        let f = match format {
            "ascii" => Format::Ascii,
            "tikz" => Format::Tikz,
            "json" => Format::Json,
            other => return Err(PyValueError::new_err(format!("unknown format {other:?}"))),
        };
        render_morphism(&self.0, f).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Morphism({})", self.0)
    }
}

/// Normal form in the restricted engine.
#[pyfunction]
fn normalize(expr: &str) -> PyResult<PyMorphism> {
    PyMorphism::new(expr)
}

/// Equality of two expressions in the semantic model at levels `0..=level`.
#[pyfunction]
#[pyo3(signature = (a, b, level = 4))]
fn oracle_equal(a: &str, b: &str, level: usize) -> PyResult<bool> {
    let (ea, eb) = (heis::expr::parse(a).map_err(err)?, heis::expr::parse(b).map_err(err)?);
    if (&ea.source, &ea.target) != (&eb.source, &eb.target) {
        return Err(PyTypeError::new_err("expressions have different types"));
    }
    let (sa, sb) = (ea.slice_sum().map_err(err)?, eb.slice_sum().map_err(err)?);
    let oracle = Oracle::new();
    Ok((0..=level).all(|n| sa.eval(&oracle, n) == sb.eval(&oracle, n)))
}

#[pyfunction]
fn basis(source: &str, target: &str) -> PyResult<Vec<String>> {
    Ok(restricted_basis(&word(source)?, &word(target)?).iter().map(|d| d.to_string()).collect())
}

#[pyfunction]
fn homdim(source: &str, target: &str) -> PyResult<usize> {
    Ok(hom_dim_restricted(&word(source)?, &word(target)?))
}

/// Simple multiplicities of a word, keyed by `(ups, downs)`.
#[pyfunction]
fn decompose(w: &str) -> PyResult<Vec<((usize, usize), u64)>> {
    Ok(decompose_multiplicities(&word(w)?).into_iter().map(|(s, n)| ((s.ups, s.downs), n)).collect())
}

/// A normal-ordered element of the Weyl algebra.
#[pyclass(name = "WeylElement", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyWeyl(heis::weyl::WeylElement);

#[pymethods]
impl PyWeyl {
    #[new]
    fn new(expr: &str) -> PyResult<Self> {
        let terms = heis::weyl::parse_weyl_sum(expr).map_err(err)?;
        Ok(PyWeyl(heis::weyl::normal_order(&terms)))
    }

    /// `{(i, j): c}` for `Σ c xⁱ∂ʲ`; coefficients are Python integers.
    fn coeffs<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let d = pyo3::types::PyDict::new(py);
        for (&(i, j), c) in self.0.coeffs() {
            let v = py.import("builtins")?.getattr("int")?.call1((c.to_string(),))?;
            d.set_item((i, j), v)?;
        }
        Ok(d.into_any())
    }

    fn __mul__(&self, other: &PyWeyl) -> Self {
        PyWeyl(&self.0 * &other.0)
    }

    fn __add__(&self, other: &PyWeyl) -> Self {
        PyWeyl(&self.0 + &other.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("WeylElement({})", self.0)
    }
}

#[pyfunction]
fn k0(object: &str) -> PyResult<PyWeyl> {
    Ok(PyWeyl(heis::weyl::k0_sum(&sum_object(object)?)))
}

#[pyfunction]
fn normal_order(expr: &str) -> PyResult<PyWeyl> {
    PyWeyl::new(expr)
}

#[pyfunction]
fn iso(a: &str, b: &str) -> PyResult<bool> {
    Ok(heis::weyl::iso_objects(&sum_object(a)?, &sum_object(b)?))
}

fn descriptor_name(d: IdealDescriptor) -> String {
    d.to_string()
}

/// Canonical name of the ideal generated on `side` by sums of words.
#[pyfunction]
fn ideal_generated(side_name: &str, objects: Vec<String>) -> PyResult<String> {
    let gens = objects.iter().map(|o| Ok(ideals::split_sum(&sum_object(o)?, 0))).collect::<PyResult<Vec<_>>>()?;
    Ok(descriptor_name(ideals::ideal_generated(side(side_name)?, &gens)))
}

#[pyfunction]
fn ideal_member(side_name: &str, generator: &str, object: &str) -> PyResult<bool> {
    let ideal = ideals::ideal_generated(side(side_name)?, &[ideals::split_sum(&sum_object(generator)?, 0)]);
    Ok(ideals::ideal_member(ideal, &ideals::split_sum(&sum_object(object)?, 0)))
}

#[pyfunction]
fn enumerate_ideals(side_name: &str, l: usize) -> PyResult<Vec<String>> {
    Ok(ideals::enumerate_ideals(side(side_name)?, l).into_iter().map(descriptor_name).collect())
}

#[pyfunction]
#[pyo3(signature = (sample = 3))]
fn spc_report<'py>(py: Python<'py>, sample: usize) -> PyResult<Bound<'py, PyAny>> {
    json_to_py(py, &to_json("spc", &ideals::spc_report(sample)))
}

#[pyfunction]
#[pyo3(signature = (l = 4))]
fn quasi_support<'py>(py: Python<'py>, l: usize) -> PyResult<Bound<'py, PyAny>> {
    json_to_py(py, &to_json("quasi_support", &ideals::quasi_support_points(l)))
}

/// Relation self-test report at levels `0..=level`.
#[pyfunction]
#[pyo3(signature = (level = 3))]
fn selftest_relations<'py>(py: Python<'py>, level: usize) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| relations_selftest(&Oracle::new(), level));
    json_to_py(py, &to_json("selftest_relations", &r))
}

#[pyfunction]
#[pyo3(signature = (max_len = 3, level = 4))]
fn selftest_closure<'py>(py: Python<'py>, max_len: usize, level: usize) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| closure_selftest(&Oracle::new(), max_len, level));
    json_to_py(py, &to_json("selftest_closure", &r))
}

#[pymodule]
#[pyo3(name = "heis")]
fn heis_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMorphism>()?;
    m.add_class::<PyWeyl>()?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_equal, m)?)?;
    m.add_function(wrap_pyfunction!(basis, m)?)?;
    m.add_function(wrap_pyfunction!(homdim, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(k0, m)?)?;
    m.add_function(wrap_pyfunction!(normal_order, m)?)?;
    m.add_function(wrap_pyfunction!(iso, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_generated, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_member, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_ideals, m)?)?;
    m.add_function(wrap_pyfunction!(spc_report, m)?)?;
    m.add_function(wrap_pyfunction!(quasi_support, m)?)?;
    m.add_function(wrap_pyfunction!(selftest_relations, m)?)?;
    m.add_function(wrap_pyfunction!(selftest_closure, m)?)?;
    m.add("SCHEMA", heis::render::SCHEMA)?;
    Ok(())
}
