//! Python bindings: complexes, obstructor specs, certification, the van
//! Kampen obstruction and the group calculus.

use obstructor_core::certifier::check_parity;
use obstructor_core::geometry::{parse_rational, GeneralPositionMap};
use obstructor_core::group::{actdim_statement, Advisory};
use obstructor_core::{constructors, Error};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

create_exception!(obstructor, ObstructorError, PyValueError);

fn err(e: Error) -> PyErr {
    ObstructorError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn moment_map(
    k: &obstructor_core::Complex,
    m: usize,
    params: Option<Vec<Bound<'_, PyAny>>>,
) -> PyResult<Option<GeneralPositionMap>> {
    let Some(params) = params else { return Ok(None) };
    let values = params
        .iter()
        .map(|p| parse_rational(&p.str()?.to_string()).map_err(err))
        .collect::<PyResult<Vec<_>>>()?;
    GeneralPositionMap::moment(k, m, Some(&values)).map(Some).map_err(err)
}

#[pyclass(module = "obstructor", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Complex {
    inner: obstructor_core::Complex,
}

#[pymethods]
impl Complex {
    /// Closure of the given maximal simplices.
    #[new]
    fn new(maximal: Vec<Vec<u32>>) -> PyResult<Self> {
        obstructor_core::Complex::from_lists(&maximal)
            .map(|inner| Complex { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn points(n: u32) -> Self {
        Complex {
            inner: obstructor_core::Complex::points(n),
        }
    }

    #[staticmethod]
    fn simplex_skeleton(n: u32, k: usize) -> Self {
        Complex {
            inner: obstructor_core::Complex::simplex_skeleton(n, k),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        obstructor_core::Complex::from_json(text)
            .map(|inner| Complex { inner })
            .map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn dimension(&self) -> PyResult<usize> {
        self.inner.dimension().map_err(err)
    }

    fn f_vector(&self) -> Vec<usize> {
        self.inner.f_vector()
    }

    fn vertices(&self) -> Vec<u32> {
        self.inner.vertices().collect()
    }

    #[pyo3(signature = (dim=None))]
    fn simplices(&self, dim: Option<usize>) -> Vec<Vec<u32>> {
        match dim {
            Some(d) => self.inner.simplices_of_dim(d).map(|s| s.vertices().to_vec()).collect(),
            None => self.inner.simplices().map(|s| s.vertices().to_vec()).collect(),
        }
    }

    fn maximal(&self) -> Vec<Vec<u32>> {
        self.inner.maximal().iter().map(|s| s.vertices().to_vec()).collect()
    }

    fn contains(&self, simplex: Vec<u32>) -> bool {
        obstructor_core::Simplex::new(simplex).is_ok_and(|s| self.inner.contains(&s))
    }

    fn join(&self, other: &Complex) -> PyResult<Self> {
        self.inner.join(&other.inner).map(|inner| Complex { inner }).map_err(err)
    }

    fn cone(&self) -> PyResult<Self> {
        self.inner.cone().map(|inner| Complex { inner }).map_err(err)
    }

    fn digest(&self) -> String {
        self.inner.digest()
    }

    /// The mod-2 van Kampen obstruction in dimension `m` as a dict.
    #[pyo3(signature = (m, params=None))]
    fn obstruction<'py>(
        &self,
        py: Python<'py>,
        m: usize,
        params: Option<Vec<Bound<'py, PyAny>>>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let f = moment_map(&self.inner, m, params)?;
        let report = obstructor_core::obstruction_vanishes(&self.inner, m, f.as_ref()).map_err(err)?;
        json_to_py(py, &report.to_json())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Complex(f_vector={:?})", self.inner.f_vector())
    }
}

#[pyclass(module = "obstructor", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Spec {
    inner: constructors::ObstructorSpec,
}

#[pymethods]
impl Spec {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        constructors::ObstructorSpec::from_json(text)
            .map(|inner| Spec { inner })
            .map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn complex(&self) -> Complex {
        Complex {
            inner: self.inner.complex.clone(),
        }
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn provenance(&self) -> String {
        self.inner.provenance.clone()
    }

    #[getter]
    fn sigma(&self) -> Vec<(Vec<u32>, Vec<u32>)> {
        self.inner.sigma.to_lists()
    }

    fn cone(&self) -> PyResult<Self> {
        constructors::cone_spec(&self.inner).map(|inner| Spec { inner }).map_err(err)
    }

    fn join(&self, other: &Spec) -> PyResult<Self> {
        constructors::join_spec(&self.inner, &other.inner)
            .map(|inner| Spec { inner })
            .map_err(err)
    }

    /// Certificate as a dict; `params` are moment-curve parameters in vertex order.
    #[pyo3(signature = (params=None))]
    fn certify<'py>(&self, py: Python<'py>, params: Option<Vec<Bound<'py, PyAny>>>) -> PyResult<Bound<'py, PyAny>> {
        let f = moment_map(&self.inner.complex, self.inner.m(), params)?;
        let cert = self.inner.certify(f.as_ref()).map_err(err)?;
        json_to_py(py, &cert.to_json())
    }

    /// Total intersection count of Σ.
    #[pyo3(signature = (params=None))]
    fn parity_count(&self, params: Option<Vec<Bound<'_, PyAny>>>) -> PyResult<u64> {
        let f = moment_map(&self.inner.complex, self.inner.m(), params)?;
        check_parity(&self.inner.complex, &self.inner.sigma, f.as_ref())
            .map(|p| p.count)
            .map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.sigma.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Spec({:?}, m={}, pairs={})",
            self.inner.provenance,
            self.inner.m(),
            self.inner.sigma.len()
        )
    }
}

/// Evaluates a construction expression such as `join(vk(1), cone(points3))`.
#[pyfunction]
fn build(expr: &str) -> PyResult<Spec> {
    constructors::build(expr).map(|inner| Spec { inner }).map_err(err)
}

#[pyfunction]
fn points3() -> Spec {
    Spec {
        inner: constructors::points3(),
    }
}

#[pyfunction]
fn vk(j: u32) -> PyResult<Spec> {
    constructors::vk(j).map(|inner| Spec { inner }).map_err(err)
}

#[pyfunction]
fn flores(n: u32) -> PyResult<Spec> {
    constructors::flores(n).map(|inner| Spec { inner }).map_err(err)
}

/// Derivation of an obdim lower bound as a dict.
#[pyfunction]
fn group_bound<'py>(py: Python<'py>, expr: &str) -> PyResult<Bound<'py, PyAny>> {
    let d = obstructor_core::group_bound(expr).map_err(err)?;
    json_to_py(py, &d.to_json())
}

/// Indented derivation tree followed by the action-dimension statement.
#[pyfunction]
#[pyo3(signature = (expr, gdim=None, torsion_free=false))]
fn explain_group(expr: &str, gdim: Option<u64>, torsion_free: bool) -> PyResult<String> {
    let d = obstructor_core::group_bound(expr).map_err(err)?;
    Ok(format!("{}{}", d.explain(), actdim_statement(&d, &Advisory { gdim, torsion_free })))
}

#[pymodule]
fn obstructor(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ObstructorError", m.py().get_type::<ObstructorError>())?;
    m.add("__version__", obstructor_core::VERSION)?;
    m.add_class::<Complex>()?;
    m.add_class::<Spec>()?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(points3, m)?)?;
    m.add_function(wrap_pyfunction!(vk, m)?)?;
    m.add_function(wrap_pyfunction!(flores, m)?)?;
    m.add_function(wrap_pyfunction!(group_bound, m)?)?;
    m.add_function(wrap_pyfunction!(explain_group, m)?)?;
    Ok(())
}
