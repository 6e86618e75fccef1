//! Python bindings: point sets, symbolic spacings, signatures and the main
//! operations on them.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use equispace::analytic::{
    extent, from_signature, inner_classes, is_maximal, sample, sig_of, validate, AnalyticSpacing,
    Flavor,
};
use equispace::gluing;
use equispace::linalg::Vector;
use equispace::orthocentric;
use equispace::signatures::{self, Signature};
use equispace::spacing::{verify, verify_naive, LabeledPointSet, VerifyReport};
use equispace::transforms;

const TOL: f64 = 1e-9;

fn err(e: equispace::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn vectors(points: Vec<Vec<f64>>) -> Vec<Vector> {
    points.into_iter().map(Vector).collect()
}

fn parse_flavor(name: &str) -> PyResult<Flavor> {
    match name {
        "coincident" => Ok(Flavor::Coincident),
        "distinct" => Ok(Flavor::Distinct),
        other => Err(PyValueError::new_err(format!(
            "flavor must be 'coincident' or 'distinct', got {other:?}"
        ))),
    }
}

fn report_dict<'py>(py: Python<'py>, r: &VerifyReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("accepted", r.accepted)?;
    if let Some(f) = &r.failure {
        d.set_item("stage", f.stage.name())?;
        d.set_item("classes", f.classes.clone())?;
        d.set_item("residual", f.residual)?;
    }
    Ok(d)
}

#[pyclass(name = "Signature", module = "pyequispace", skip_from_py_object, frozen, eq, hash)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PySignature {
    inner: Signature,
}

#[pymethods]
impl PySignature {
    #[new]
    fn new(m: usize, d: Vec<usize>) -> PyResult<Self> {
        Ok(PySignature {
            inner: Signature::new(m, d).map_err(err)?,
        })
    }

    /// Parses `"m;(d1,..)"`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PySignature {
            inner: text.parse().map_err(err)?,
        })
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m
    }

    #[getter]
    fn d(&self) -> Vec<usize> {
        self.inner.d.clone()
    }

    /// `{"eq": (I, n) or None, "neq": (I, n) or None}`
    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let c = signatures::classify(&self.inner);
        let d = PyDict::new(py);
        d.set_item("eq", c.eq.map(|p| (p.classes, p.dimension)))?;
        d.set_item("neq", c.neq.map(|p| (p.classes, p.dimension)))?;
        Ok(d)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Signature('{}')", self.inner)
    }
}

#[pyclass(name = "PointSet", module = "pyequispace", skip_from_py_object)]
#[derive(Clone)]
struct PyPointSet {
    inner: LabeledPointSet,
}

#[pymethods]
impl PyPointSet {
    /// One list of points per class; labels default to `c0, c1, ..`.
    #[new]
    #[pyo3(signature = (classes, dimension=None))]
    fn new(classes: Vec<Vec<Vec<f64>>>, dimension: Option<usize>) -> PyResult<Self> {
        let dim = dimension
            .or_else(|| classes.iter().flatten().next().map(|p| p.len()))
            .unwrap_or(0);
        let classes = classes.into_iter().map(vectors).collect();
        Ok(PyPointSet {
            inner: LabeledPointSet::from_points(dim, classes).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyPointSet {
            inner: serde_json::from_str(text).map_err(json_err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.classes.iter().map(|c| c.label.clone()).collect()
    }

    #[getter]
    fn point_count(&self) -> usize {
        self.inner.point_count()
    }

    fn points(&self) -> Vec<Vec<Vec<f64>>> {
        self.inner
            .classes
            .iter()
            .map(|c| c.points.iter().map(|p| p.0.clone()).collect())
            .collect()
    }

    #[pyo3(signature = (tol=TOL))]
    fn verify<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        report_dict(py, &verify(&self.inner, tol))
    }

    #[pyo3(signature = (tol=TOL))]
    fn verify_naive<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        report_dict(py, &verify_naive(&self.inner, tol))
    }

    fn __len__(&self) -> usize {
        self.inner.class_count()
    }
}

#[pyclass(name = "Spacing", module = "pyequispace", skip_from_py_object)]
#[derive(Clone)]
struct PySpacing {
    inner: AnalyticSpacing,
}

#[pymethods]
impl PySpacing {
    /// Normal-form spacing of a signature; flavor is "coincident" or "distinct".
    #[staticmethod]
    #[pyo3(signature = (signature, flavor="distinct", r=0.5, dims_slack=0))]
    fn from_signature(signature: &PySignature, flavor: &str, r: f64, dims_slack: usize) -> PyResult<Self> {
        let inner = from_signature(&signature.inner, parse_flavor(flavor)?, r, dims_slack).map_err(err)?;
        Ok(PySpacing { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySpacing {
            inner: serde_json::from_str(text).map_err(json_err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension
    }

    #[getter]
    fn radii(&self) -> Vec<f64> {
        self.inner.radii()
    }

    #[getter]
    fn centers(&self) -> Vec<Vec<f64>> {
        self.inner.centers().into_iter().map(|c| c.0).collect()
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims()
    }

    #[pyo3(signature = (tol=TOL))]
    fn validate<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        report_dict(py, &validate(&self.inner, tol))
    }

    #[pyo3(signature = (points_per_class, seed=0))]
    fn sample(&self, points_per_class: usize, seed: u64) -> PyResult<PyPointSet> {
        Ok(PyPointSet {
            inner: sample(&self.inner, points_per_class, seed).map_err(err)?,
        })
    }

    /// `(value, glue_site)`, with `(inf, None)` when the extent is infinite.
    #[pyo3(signature = (tol=TOL))]
    fn extent(&self, tol: f64) -> PyResult<(f64, Option<Vec<f64>>)> {
        let e = extent(&self.inner, tol).map_err(err)?;
        Ok((e.value, e.glue_site.map(|v| v.0)))
    }

    /// `(maximal, reason)`
    #[pyo3(signature = (tol=TOL))]
    fn is_maximal(&self, tol: f64) -> PyResult<(bool, String)> {
        let v = is_maximal(&self.inner, tol).map_err(err)?;
        Ok((v.maximal, v.reason))
    }

    #[pyo3(signature = (tol=TOL))]
    fn inner_classes(&self, tol: f64) -> PyResult<Vec<usize>> {
        inner_classes(&self.inner, tol).map_err(err)
    }

    #[pyo3(signature = (tol=TOL))]
    fn signature(&self, tol: f64) -> PyResult<PySignature> {
        Ok(PySignature {
            inner: sig_of(&self.inner, tol).map_err(err)?,
        })
    }

    #[pyo3(signature = (r=0.5, tol=TOL))]
    fn normal_form(&self, r: f64, tol: f64) -> PyResult<PySpacing> {
        let (out, _) = transforms::to_equilateral_normal_form(&self.inner, r, tol).map_err(err)?;
        Ok(PySpacing { inner: out })
    }

    #[pyo3(signature = (outer, target_r, tol=TOL))]
    fn squash_stretch(&self, outer: usize, target_r: f64, tol: f64) -> PyResult<PySpacing> {
        let out = transforms::outer_inner_squash_stretch(&self.inner, outer, target_r, tol).map_err(err)?;
        Ok(PySpacing { inner: out })
    }

    fn __len__(&self) -> usize {
        self.inner.class_count()
    }
}

/// `(eq, neq, total)` counts of maximal spacings in R^n.
#[pyfunction]
fn count_maximal(n: usize) -> (u128, u128, u128) {
    let c = signatures::count_maximal(n);
    (c.eq, c.neq, c.total)
}

/// Signatures with the given total; family is "eq" or "neq".
#[pyfunction]
#[pyo3(signature = (total, family="eq"))]
fn enumerate_signatures(total: usize, family: &str) -> PyResult<Vec<PySignature>> {
    let list = match family {
        "eq" => signatures::enumerate_eq(total),
        "neq" => signatures::enumerate_neq(total),
        other => {
            return Err(PyValueError::new_err(format!(
                "family must be 'eq' or 'neq', got {other:?}"
            )))
        }
    }
    .map_err(err)?;
    Ok(list.into_iter().map(|inner| PySignature { inner }).collect())
}

#[pyfunction]
fn partitions(n: usize) -> Vec<Vec<usize>> {
    signatures::partitions(n)
}

#[pyfunction]
fn partition_count(n: usize) -> u128 {
    signatures::partition_count(n)
}

#[pyfunction]
#[pyo3(signature = (a, b, tol=TOL))]
fn glue(a: &PySpacing, b: &PySpacing, tol: f64) -> PyResult<PySpacing> {
    Ok(PySpacing {
        inner: gluing::glue(&a.inner, &b.inner, tol).map_err(err)?,
    })
}

#[pyfunction]
fn glued_extent(a_sq: f64, b_sq: f64) -> PyResult<f64> {
    gluing::glued_extent(a_sq, b_sq).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, tol=TOL))]
fn isometric(a: &PySpacing, b: &PySpacing, tol: f64) -> PyResult<bool> {
    transforms::isometric(&a.inner, &b.inner, tol).map_err(err)
}

/// `(lambdas, residual, reciprocal_sum)`
#[pyfunction]
fn solve_lambdas(points: Vec<Vec<f64>>) -> PyResult<(Vec<f64>, f64, f64)> {
    let s = orthocentric::solve_lambdas(&vectors(points)).map_err(err)?;
    Ok((s.lambdas, s.residual, s.reciprocal_sum))
}

#[pyfunction]
#[pyo3(signature = (points, tol=TOL))]
fn is_orthocentric_system(points: Vec<Vec<f64>>, tol: f64) -> PyResult<bool> {
    orthocentric::is_orthocentric_system(&vectors(points), tol).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (points, tol=TOL))]
fn orthocenter(points: Vec<Vec<f64>>, tol: f64) -> PyResult<Vec<f64>> {
    Ok(orthocentric::orthocenter(&vectors(points), tol).map_err(err)?.0)
}

#[pymodule]
fn pyequispace(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySignature>()?;
    m.add_class::<PyPointSet>()?;
    m.add_class::<PySpacing>()?;
    m.add_function(wrap_pyfunction!(count_maximal, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_signatures, m)?)?;
    m.add_function(wrap_pyfunction!(partitions, m)?)?;
    m.add_function(wrap_pyfunction!(partition_count, m)?)?;
    m.add_function(wrap_pyfunction!(glue, m)?)?;
    m.add_function(wrap_pyfunction!(glued_extent, m)?)?;
    m.add_function(wrap_pyfunction!(isometric, m)?)?;
    m.add_function(wrap_pyfunction!(solve_lambdas, m)?)?;
    m.add_function(wrap_pyfunction!(is_orthocentric_system, m)?)?;
    m.add_function(wrap_pyfunction!(orthocenter, m)?)?;
    Ok(())
}
