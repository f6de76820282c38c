//! Python bindings. Objects cross the boundary either as wrapped handles or
//! as JSON strings in the formats the CLI reads and writes.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use dendro::closed_ops;
use dendro::homotopy;
use dendro::normality;
use dendro::presheaf::{self, FinitePresheaf, PresheafMap};
use dendro::verify::{self, Level};
use dendro::{DendroError, Flavor};

fn err(e: DendroError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn flavor(name: &str) -> PyResult<Flavor> {
    name.parse().map_err(err)
}

fn json(text: &str) -> PyResult<serde_json::Value> {
    serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyclass(name = "Tree", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyTree {
    inner: dendro::Tree,
}

#[pymethods]
impl PyTree {
    #[new]
    #[pyo3(signature = (term, flavor = "general"))]
    fn new(term: &str, flavor: &str) -> PyResult<Self> {
        let inner = dendro::parse_term(term, self::flavor(flavor)?).map_err(err)?;
        Ok(PyTree { inner })
    }

    #[getter]
    fn flavor(&self) -> &'static str {
        self.inner.flavor().name()
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    fn key(&self) -> String {
        self.inner.key().to_string()
    }

    /// Edge maps of all morphisms into `target`.
    fn hom(&self, target: &PyTree) -> PyResult<Vec<Vec<usize>>> {
        let maps = dendro::hom_set(&self.inner, &target.inner).map_err(err)?;
        Ok(maps.into_iter().map(|m| m.edge_map).collect())
    }

    fn automorphisms(&self) -> Vec<Vec<usize>> {
        dendro::automorphisms(&self.inner).into_iter().map(|m| m.edge_map).collect()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    fn __str__(&self) -> String {
        dendro::print_term(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Tree('{}', '{}')", dendro::print_term(&self.inner), self.inner.flavor())
    }

    fn __eq__(&self, other: &PyTree) -> bool {
        self.inner == other.inner
    }
}

#[pyclass(name = "Presheaf", frozen)]
pub struct PyPresheaf {
    inner: Arc<FinitePresheaf>,
}

#[pymethods]
impl PyPresheaf {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = FinitePresheaf::from_json(&json(text)?).map_err(err)?;
        Ok(PyPresheaf { inner: Arc::new(inner) })
    }

    #[staticmethod]
    fn representable(tree: &PyTree, truncation: usize) -> Self {
        PyPresheaf { inner: presheaf::representable(&tree.inner, truncation) }
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    #[getter]
    fn flavor(&self) -> &'static str {
        self.inner.flavor().name()
    }

    #[getter]
    fn truncation(&self) -> usize {
        self.inner.truncation()
    }

    /// Element counts keyed by tree term.
    fn counts(&self) -> Vec<(String, usize)> {
        let cat = self.inner.cat();
        (0..cat.num_objects()).map(|o| (dendro::print_term(cat.object(o)), self.inner.count(o))).collect()
    }

    fn total(&self) -> usize {
        self.inner.total()
    }

    fn is_normal(&self, upto: usize) -> bool {
        normality::is_normal_upto(&self.inner, upto)
    }

    fn skeleton(&self, n: usize) -> PyPresheafMap {
        PyPresheafMap { inner: presheaf::skeleton(&self.inner, n) }
    }

    fn coskeleton_unit(&self, n: usize) -> PyResult<PyPresheafMap> {
        let inner = dendro::lean::coskeleton_unit(&self.inner, n).map_err(err)?;
        Ok(PyPresheafMap { inner })
    }

    fn coskeletal_degree(&self, upto: usize) -> PyResult<Option<usize>> {
        closed_ops::coskeletal_degree_search(&self.inner, upto).map_err(err)
    }

    /// The projection from the normal replacement.
    fn normalize(&self) -> PyResult<PyPresheafMap> {
        let inner = homotopy::normalize(&self.inner).map_err(err)?;
        Ok(PyPresheafMap { inner })
    }

    fn __repr__(&self) -> String {
        format!("Presheaf({}, truncation={}, total={})", self.inner.flavor(), self.inner.truncation(), self.inner.total())
    }
}

#[pyclass(name = "PresheafMap", frozen)]
pub struct PyPresheafMap {
    inner: PresheafMap,
}

#[pymethods]
impl PyPresheafMap {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = PresheafMap::from_json(&json(text)?).map_err(err)?;
        Ok(PyPresheafMap { inner })
    }

    #[staticmethod]
    fn boundary(tree: &PyTree, truncation: usize) -> Self {
        PyPresheafMap { inner: presheaf::boundary(&tree.inner, truncation) }
    }

    #[staticmethod]
    fn horn(tree: &PyTree, edge: usize, truncation: usize) -> PyResult<Self> {
        let inner = presheaf::horn(&tree.inner, edge, truncation).map_err(err)?;
        Ok(PyPresheafMap { inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn source(&self) -> PyPresheaf {
        PyPresheaf { inner: self.inner.source().clone() }
    }

    fn target(&self) -> PyPresheaf {
        PyPresheaf { inner: self.inner.target().clone() }
    }

    fn components(&self) -> Vec<Vec<usize>> {
        self.inner.comps().to_vec()
    }

    fn is_mono(&self) -> bool {
        self.inner.is_mono()
    }

    fn is_iso(&self) -> bool {
        self.inner.is_iso()
    }

    fn is_normal_mono(&self, upto: usize) -> bool {
        normality::is_normal_mono_upto(&self.inner, upto)
    }

    fn lifts_against_normality_generators(&self, upto: usize) -> PyResult<bool> {
        normality::llp_normality_check(&self.inner, upto).map_err(err)
    }

    fn has_lifting(&self, p: &PyPresheafMap) -> bool {
        dendro::lifting::has_lifting(&self.inner, &p.inner)
    }
}

#[pyfunction]
#[pyo3(signature = (max_size, flavor = "general"))]
fn enumerate_trees(max_size: usize, flavor: &str) -> PyResult<Vec<PyTree>> {
    let trees = dendro::enumerate_trees(max_size, self::flavor(flavor)?);
    Ok(trees.into_iter().map(|inner| PyTree { inner }).collect())
}

#[pyfunction]
fn ass_operations(n: usize) -> Vec<Vec<usize>> {
    closed_ops::ass_operations(n)
}

/// `(operations, families, image, injective, surjective)` in arity `n`.
#[pyfunction]
fn matching_report(n: usize) -> PyResult<(usize, usize, usize, bool, bool)> {
    let r = closed_ops::matching_report(n).map_err(err)?;
    Ok((r.operations, r.families, r.image, r.injective, r.surjective))
}

#[pyfunction]
fn closed_nerve_ass(truncation: usize) -> PyPresheaf {
    PyPresheaf { inner: Arc::new(closed_ops::closed_nerve_ass(truncation)) }
}

/// The resolution state as JSON.
#[pyfunction]
#[pyo3(signature = (flavor, bound, budget = homotopy::DEFAULT_BUDGET))]
fn build_e(flavor: &str, bound: usize, budget: usize) -> PyResult<String> {
    let state = homotopy::build_e(self::flavor(flavor)?, bound, budget).map_err(err)?;
    Ok(state.to_json().to_string())
}

/// Runs a verification suite and returns its JSON report.
#[pyfunction]
#[pyo3(signature = (suite = "all", quick = true))]
fn run_verify(py: Python<'_>, suite: &str, quick: bool) -> PyResult<String> {
    let report = py.detach(|| match suite {
        "all" => verify::verify_all(if quick { Level::Quick } else { Level::Full }, false),
        "trees" => Ok(verify::verify_trees(4, false)),
        "gset" => Ok(verify::verify_gset(4, false)),
        "normality" => verify::verify_normality(3, 2, false),
        "ass" => verify::verify_ass(6, 5, false),
        "e" => verify::verify_e(3, false),
        "reduction" => verify::verify_reduction(4, false),
        other => Err(DendroError::Malformed(format!("unknown suite `{other}`"))),
    });
    Ok(report.map_err(err)?.to_json().to_string())
}

#[pymodule(name = "dendro")]
pub fn dendro_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTree>()?;
    m.add_class::<PyPresheaf>()?;
    m.add_class::<PyPresheafMap>()?;
    m.add_function(wrap_pyfunction!(enumerate_trees, m)?)?;
    m.add_function(wrap_pyfunction!(ass_operations, m)?)?;
    m.add_function(wrap_pyfunction!(matching_report, m)?)?;
    m.add_function(wrap_pyfunction!(closed_nerve_ass, m)?)?;
    m.add_function(wrap_pyfunction!(build_e, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
