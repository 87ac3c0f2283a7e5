//! Python bindings: `import lpa_ibn`.

use lpa_core::constructions::{self, Family, RamificationData};
use lpa_core::deciders::{self, GrIbnReason};
use lpa_core::graph::VertexSet;
use lpa_core::monoid::{self, TalentedElement};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(
    lpa_ibn,
    LpaError,
    PyValueError,
    "Invalid input or failed precondition."
);

fn err(e: lpa_core::Error) -> PyErr {
    LpaError::new_err(e.to_string())
}

#[pyclass(name = "Graph", module = "lpa_ibn", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyGraph {
    inner: lpa_core::graph::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(names: Vec<String>, adjacency: Vec<Vec<u64>>) -> PyResult<Self> {
        let inner = lpa_core::graph::Graph::new(names, adjacency).map_err(err)?;
        Ok(PyGraph { inner })
    }

    /// Parses the text or JSON graph format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let inner = lpa_core::graph::Graph::parse(text).map_err(err)?;
        Ok(PyGraph { inner })
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    #[getter]
    fn adjacency(&self) -> Vec<Vec<u64>> {
        self.inner.adjacency()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn has_sink(&self) -> bool {
        self.inner.has_sink()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[pyo3(signature = (name = "E"))]
    fn to_dot(&self, name: &str) -> String {
        self.inner.to_dot(name)
    }

    /// `(sinks, sources, regular, isolated)` as name lists.
    fn classify(&self) -> (Vec<String>, Vec<String>, Vec<String>, Vec<String>) {
        let c = self.inner.classify_vertices();
        let names = |s: &VertexSet| s.names(&self.inner).into_iter().map(String::from).collect();
        (
            names(&c.sinks),
            names(&c.sources),
            names(&c.regular),
            names(&c.isolated),
        )
    }

    fn reaches(&self, v: &str, w: &str) -> PyResult<bool> {
        self.inner.reaches(v, w).map_err(err)
    }

    fn hereditary_saturated_sets(&self) -> PyResult<Vec<Vec<String>>> {
        let sets = self.inner.hs_enumerate().map_err(err)?;
        Ok(sets
            .iter()
            .map(|s| s.names(&self.inner).into_iter().map(String::from).collect())
            .collect())
    }

    fn quotient(&self, names: Vec<String>) -> PyResult<PyGraph> {
        let set = VertexSet::from_names(&self.inner, &names).map_err(err)?;
        let inner = self.inner.quotient(&set).map_err(err)?;
        Ok(PyGraph { inner })
    }

    fn cartesian_product(&self, other: &PyGraph) -> PyGraph {
        PyGraph {
            inner: self.inner.cartesian_product(&other.inner),
        }
    }

    fn covering_window(&self, lo: i64, hi: i64) -> PyResult<PyGraph> {
        let inner = self.inner.covering_window(lo, hi).map_err(err)?;
        Ok(PyGraph { inner })
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(names={:?}, adjacency={:?})",
            self.inner.names(),
            self.inner.adjacency()
        )
    }
}

#[pyclass(name = "Group", module = "lpa_ibn", frozen)]
pub struct PyGroup {
    inner: constructions::Group,
}

#[pymethods]
impl PyGroup {
    #[new]
    fn new(elements: Vec<String>, table: Vec<Vec<usize>>) -> PyResult<Self> {
        let inner = constructions::group_from_table(elements, table).map_err(err)?;
        Ok(PyGroup { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = constructions::Group::from_json(text).map_err(err)?;
        Ok(PyGroup { inner })
    }

    #[staticmethod]
    fn cyclic(n: usize) -> PyResult<Self> {
        let inner = constructions::Group::cyclic(n).map_err(err)?;
        Ok(PyGroup { inner })
    }

    #[staticmethod]
    fn symmetric(n: usize) -> PyResult<Self> {
        let inner = constructions::Group::symmetric(n).map_err(err)?;
        Ok(PyGroup { inner })
    }

    #[staticmethod]
    fn direct_product(a: &PyGroup, b: &PyGroup) -> PyResult<Self> {
        let inner = constructions::Group::direct_product(&a.inner, &b.inner).map_err(err)?;
        Ok(PyGroup { inner })
    }

    #[getter]
    fn elements(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn conjugacy_classes(&self) -> Vec<Vec<String>> {
        self.inner
            .conjugacy_classes()
            .iter()
            .map(|c| c.iter().map(|&x| self.inner.name(x).to_string()).collect())
            .collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!("Group(elements={:?})", self.inner.names())
    }
}

#[pyclass(
    name = "Certificate",
    module = "lpa_ibn",
    frozen,
    eq,
    skip_from_py_object
)]
#[derive(Clone, PartialEq)]
pub struct PyCertificate {
    inner: deciders::Certificate,
}

#[pymethods]
impl PyCertificate {
    #[new]
    fn new(p: Vec<u32>, q: Vec<u32>) -> Self {
        PyCertificate {
            inner: deciders::Certificate::new(p, q),
        }
    }

    #[getter]
    fn p(&self) -> Vec<u32> {
        self.inner.p()
    }

    #[getter]
    fn q(&self) -> Vec<u32> {
        self.inner.q()
    }

    fn canonical(&self) -> PyCertificate {
        PyCertificate {
            inner: self.inner.canonical(),
        }
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("certificate serialises")
    }

    fn __repr__(&self) -> String {
        format!("Certificate({})", self.inner)
    }
}

#[pyclass(name = "IbnVerdict", module = "lpa_ibn", frozen)]
pub struct PyIbnVerdict {
    #[pyo3(get)]
    has_ibn: bool,
    #[pyo3(get)]
    rank_left: usize,
    #[pyo3(get)]
    rank_right: usize,
    /// `"maximal-sink-or-cycle"` when that sufficient condition holds.
    #[pyo3(get)]
    shortcut: Option<String>,
    json: String,
}

#[pymethods]
impl PyIbnVerdict {
    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __repr__(&self) -> String {
        format!("IbnVerdict({})", self.json)
    }
}

#[pyclass(name = "GrIbnVerdict", module = "lpa_ibn", frozen)]
pub struct PyGrIbnVerdict {
    #[pyo3(get)]
    has_gr_ibn: bool,
    #[pyo3(get)]
    reason: String,
    /// The common column sum when the reason is `column-sum-uniform`.
    #[pyo3(get)]
    column_sum: Option<u64>,
    #[pyo3(get)]
    certificate: Option<PyCertificate>,
    json: String,
}

#[pymethods]
impl PyGrIbnVerdict {
    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __repr__(&self) -> String {
        format!("GrIbnVerdict({})", self.json)
    }
}

#[pyfunction]
fn decide_ibn(g: &PyGraph) -> PyIbnVerdict {
    let v = deciders::decide_ibn(&g.inner);
    PyIbnVerdict {
        has_ibn: v.has_ibn,
        rank_left: v.rank_left,
        rank_right: v.rank_right,
        shortcut: v.shortcut.map(|_| "maximal-sink-or-cycle".to_string()),
        json: serde_json::to_string(&v).expect("verdict serialises"),
    }
}

#[pyfunction]
fn decide_gribn(g: &PyGraph) -> PyGrIbnVerdict {
    let v = deciders::decide_gribn(&g.inner);
    PyGrIbnVerdict {
        has_gr_ibn: v.has_gr_ibn,
        reason: v.reason.tag().to_string(),
        column_sum: match v.reason {
            GrIbnReason::ColumnSumUniform(c) => Some(c),
            _ => None,
        },
        json: serde_json::to_string(&v).expect("verdict serialises"),
        certificate: v.certificate.map(|inner| PyCertificate { inner }),
    }
}

#[pyfunction]
fn exact_certificate(g: &PyGraph) -> PyResult<Option<PyCertificate>> {
    let c = deciders::exact_certificate(&g.inner).map_err(err)?;
    Ok(c.map(|inner| PyCertificate { inner }))
}

#[pyfunction]
#[pyo3(signature = (g, max_exp = 6, max_terms = 8))]
fn bounded_certificate_search(
    g: &PyGraph,
    max_exp: u32,
    max_terms: u32,
) -> PyResult<Option<PyCertificate>> {
    let c = deciders::bounded_certificate_search(&g.inner, max_exp, max_terms).map_err(err)?;
    Ok(c.map(|inner| PyCertificate { inner }))
}

#[pyfunction]
fn verify_certificate(g: &PyGraph, cert: &PyCertificate) -> PyResult<bool> {
    deciders::verify_certificate(&g.inner, &cert.inner).map_err(err)
}

#[pyfunction]
fn column_sum_shortcut(g: &PyGraph) -> PyResult<Option<u64>> {
    deciders::column_sum_shortcut(&g.inner).map_err(err)
}

#[pyfunction]
fn sufficient_ibn_maximal(g: &PyGraph) -> bool {
    deciders::sufficient_ibn_maximal(&g.inner)
}

/// Equality of two talented monoid elements written like `2*u(1)+v(0)`.
#[pyfunction]
fn monoid_equal(g: &PyGraph, left: &str, right: &str) -> PyResult<bool> {
    let a = TalentedElement::parse(left, &g.inner).map_err(err)?;
    let b = TalentedElement::parse(right, &g.inner).map_err(err)?;
    monoid::equal(&g.inner, &a, &b).map_err(err)
}

/// Shifts every level of an element by `n`.
#[pyfunction]
fn monoid_shift(g: &PyGraph, element: &str, n: i64) -> PyResult<String> {
    let a = TalentedElement::parse(element, &g.inner).map_err(err)?;
    Ok(a.shift(n).render(&g.inner))
}

/// The two monoid elements whose equality `cert` asserts.
#[pyfunction]
fn certificate_to_equation(g: &PyGraph, cert: &PyCertificate) -> PyResult<(String, String)> {
    let (a, b) = monoid::certificate_to_equation(&g.inner, &cert.inner).map_err(err)?;
    Ok((a.render(&g.inner), b.render(&g.inner)))
}

#[pyfunction]
fn cayley_graph(group: &PyGroup, gens: Vec<String>) -> PyResult<PyGraph> {
    let s = gens
        .iter()
        .map(|n| group.inner.index_of(n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let inner = constructions::cayley_graph(&group.inner, &s).map_err(err)?;
    Ok(PyGraph { inner })
}

#[pyfunction]
fn cyclic_cayley(n: usize, j: usize) -> PyResult<PyGraph> {
    let inner = constructions::cyclic_cayley(n, j).map_err(err)?;
    Ok(PyGraph { inner })
}

/// Hopf graph for ramification data written `name:count,...`.
#[pyfunction]
fn hopf_graph(group: &PyGroup, ram: &str) -> PyResult<PyGraph> {
    let r = RamificationData::parse(&group.inner, ram).map_err(err)?;
    let inner = constructions::hopf_graph(&group.inner, &r).map_err(err)?;
    Ok(PyGraph { inner })
}

#[pyfunction]
fn line(n: usize) -> PyResult<PyGraph> {
    let inner = constructions::family(Family::Line(n)).map_err(err)?;
    Ok(PyGraph { inner })
}

#[pyfunction]
fn cycle(m: usize) -> PyResult<PyGraph> {
    let inner = constructions::family(Family::Cycle(m)).map_err(err)?;
    Ok(PyGraph { inner })
}

#[pymodule]
pub fn lpa_ibn(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LpaError", m.py().get_type::<LpaError>())?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyIbnVerdict>()?;
    m.add_class::<PyGrIbnVerdict>()?;
    m.add_function(wrap_pyfunction!(decide_ibn, m)?)?;
    m.add_function(wrap_pyfunction!(decide_gribn, m)?)?;
    m.add_function(wrap_pyfunction!(exact_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(bounded_certificate_search, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(column_sum_shortcut, m)?)?;
    m.add_function(wrap_pyfunction!(sufficient_ibn_maximal, m)?)?;
    m.add_function(wrap_pyfunction!(monoid_equal, m)?)?;
    m.add_function(wrap_pyfunction!(monoid_shift, m)?)?;
    m.add_function(wrap_pyfunction!(certificate_to_equation, m)?)?;
    m.add_function(wrap_pyfunction!(cayley_graph, m)?)?;
    m.add_function(wrap_pyfunction!(cyclic_cayley, m)?)?;
    m.add_function(wrap_pyfunction!(hopf_graph, m)?)?;
    m.add_function(wrap_pyfunction!(line, m)?)?;
    m.add_function(wrap_pyfunction!(cycle, m)?)?;
    Ok(())
}
