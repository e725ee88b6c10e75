use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use drsys::cstar::{fixed_point_intersection, indicator_family, induced_star_iso, FiniteGroupoid, LegMap};
use drsys::funcspace::{check_prop_sigma, parse_function, parse_weights, AnyFn};
use drsys::groupoid::{cocycle_eval, intertwine_check, DegreePreservingIso, GroupoidElement};
use drsys::homcheck::{check_conjugacy, Homeomorphism};
use drsys::point::enumerate_points;
use drsys::transducer::Transducer;
use drsys::{DRSystem, DirectedGraph};

fn err(e: drsys::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// A finite directed graph and the shift on its boundary path space.
#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    sys: DRSystem,
}

impl PyGraph {
    fn graph(&self) -> &DirectedGraph {
        self.sys.graph()
    }

    fn point(&self, literal: &str) -> PyResult<drsys::BoundaryPoint> {
        self.graph().parse_point(literal).map_err(err)
    }
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            sys: DRSystem::new(drsys::parse_graph(text).map_err(err)?),
        })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Self::new(&text)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.graph().vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.graph().edge_count()
    }

    fn sinks(&self) -> Vec<String> {
        let g = self.graph();
        g.sinks().into_iter().map(|v| g.vertex_name(v).to_string()).collect()
    }

    fn condition_l(&self) -> bool {
        self.sys.is_topologically_free()
    }

    fn periodic_count(&self, p: usize) -> PyResult<u128> {
        self.sys.periodic_count(p).map_err(err)
    }

    fn shift(&self, point: &str, k: usize) -> PyResult<String> {
        let x = self.sys.shift(&self.point(point)?, k).map_err(err)?;
        Ok(self.graph().point_literal(&x))
    }

    fn preimages(&self, point: &str) -> PyResult<Vec<String>> {
        let g = self.graph();
        Ok(self.sys.preimages(&self.point(point)?).iter().map(|x| g.point_literal(x)).collect())
    }

    fn periodicity(&self, py: Python<'_>, point: &str) -> PyResult<Py<PyAny>> {
        to_py(py, &self.sys.periodicity(&self.point(point)?))
    }

    /// All points whose description has at most `max_len` edges.
    fn points(&self, max_len: usize) -> Vec<String> {
        let g = self.graph();
        enumerate_points(g, max_len).iter().map(|x| g.point_literal(x)).collect()
    }

    /// Evaluates `f^(k)(x)` for an integer function file.
    fn iterated(&self, function: &str, k: usize, point: &str) -> PyResult<i64> {
        match parse_function(self.graph(), function).map_err(err)? {
            AnyFn::Integer(f) => f.iterated(self.graph(), k, &self.point(point)?).map_err(err),
            other => Err(PyValueError::new_err(format!("expected integer values, found {}", other.kind()))),
        }
    }

    /// `c_f(x, m - n, y)` for an integer function file.
    fn cocycle(&self, function: &str, x: &str, m: usize, n: usize, y: &str) -> PyResult<i64> {
        let el = GroupoidElement::new(&self.sys, self.point(x)?, m, n, self.point(y)?).map_err(err)?;
        match parse_function(self.graph(), function).map_err(err)? {
            AnyFn::Integer(f) => cocycle_eval(&self.sys, &f, &el).map_err(err),
            other => Err(PyValueError::new_err(format!("expected integer values, found {}", other.kind()))),
        }
    }

    fn to_text(&self) -> String {
        self.graph().to_text()
    }

    fn __repr__(&self) -> String {
        format!("Graph(vertices={}, edges={})", self.vertex_count(), self.edge_count())
    }
}

/// A map between boundary path spaces given by a transducer file.
#[pyclass(name = "Map", frozen)]
struct PyMap {
    t: Transducer,
}

#[pymethods]
impl PyMap {
    #[new]
    fn new(text: &str, source: &PyGraph, target: &PyGraph) -> PyResult<Self> {
        Ok(PyMap {
            t: Transducer::parse(text, source.graph(), target.graph()).map_err(err)?,
        })
    }

    #[getter]
    fn delay(&self) -> usize {
        self.t.delay()
    }

    fn apply(&self, point: &str) -> PyResult<String> {
        let x = self.t.source().parse_point(point).map_err(err)?;
        Ok(self.t.target().point_literal(&self.t.apply(&x).map_err(err)?))
    }

    /// The inverse when every step writes exactly one letter, else `None`.
    fn inverse_letterwise(&self) -> Option<PyMap> {
        self.t.invert_letterwise().map(|t| PyMap { t })
    }

    fn to_text(&self) -> String {
        self.t.to_text()
    }
}

fn homeomorphism(map: &PyMap, inverse: &PyMap) -> PyResult<Homeomorphism> {
    Homeomorphism::new(map.t.clone(), inverse.t.clone()).map_err(err)
}

/// Both conjugacy routes and the shift-operator conditions, as a dict.
#[pyfunction]
#[pyo3(signature = (map, inverse, depth = 3, seed = 0))]
fn conjugacy(py: Python<'_>, map: &PyMap, inverse: &PyMap, depth: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let verdict = check_conjugacy(&map.t, &inverse.t, depth, seed).map_err(err)?;
    let operators = match verdict.is_homeomorphism {
        true => Some(check_prop_sigma(&homeomorphism(map, inverse)?, depth).map_err(err)?),
        false => None,
    };
    to_py(py, &serde_json::json!({ "verdict": verdict, "operator_route": operators }))
}

/// The cocycle intertwining check on groupoid generators.
#[pyfunction]
#[pyo3(signature = (map, inverse, depth = 3))]
fn cocycle_intertwine(py: Python<'_>, map: &PyMap, inverse: &PyMap, depth: usize) -> PyResult<Py<PyAny>> {
    let iso = DegreePreservingIso::new(homeomorphism(map, inverse)?).map_err(err)?;
    to_py(py, &intertwine_check(&iso, depth).map_err(err)?)
}

/// Fixed points of weighted gauge actions on an acyclic graph's groupoid algebra.
#[pyfunction]
#[pyo3(signature = (graph, weights = None, seed = 0))]
fn fixed_points(py: Python<'_>, graph: &PyGraph, weights: Option<&str>, seed: u64) -> PyResult<Py<PyAny>> {
    let gr = FiniteGroupoid::build(&graph.sys).map_err(err)?;
    let g = graph.graph();
    let ws = match weights {
        Some(text) => parse_weights(g, text).map_err(err)?.into_iter().map(|(_, w)| w).collect(),
        None => indicator_family(g, g.longest_path().unwrap_or(0)),
    };
    to_py(py, &fixed_point_intersection(&gr, &ws, seed).map_err(err)?)
}

/// The induced *-isomorphism for a conjugacy of acyclic graphs, or the leg
/// map's intertwining defect otherwise.
#[pyfunction]
#[pyo3(signature = (map, inverse, depth = 3, seed = 0))]
fn star_isomorphism(py: Python<'_>, map: &PyMap, inverse: &PyMap, depth: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let h = homeomorphism(map, inverse)?;
    match induced_star_iso(h.clone(), depth, seed) {
        Ok(phi) => to_py(
            py,
            &serde_json::json!({
                "conjugacy": true,
                "star_isomorphism": phi.check_star_iso(seed).map_err(err)?,
                "intertwining": phi.verify_intertwining(depth, seed).map_err(err)?,
            }),
        ),
        Err(drsys::Error::NotConjugacy(reason)) => {
            let legs = LegMap::new(h).map_err(err)?;
            to_py(
                py,
                &serde_json::json!({
                    "conjugacy": false,
                    "reason": reason,
                    "leg_map_intertwining": legs.verify_intertwining(depth, seed).map_err(err)?,
                }),
            )
        }
        Err(e) => Err(err(e)),
    }
}

/// Names of the built-in graphs.
#[pyfunction]
fn corpus_graphs() -> Vec<&'static str> {
    drsys::corpus::GRAPHS.iter().map(|(n, _)| *n).collect()
}

/// A built-in graph by name.
#[pyfunction]
fn corpus_graph(name: &str) -> PyResult<PyGraph> {
    let text = drsys::corpus::graph_text(name).ok_or_else(|| PyValueError::new_err(format!("no corpus graph `{name}`")))?;
    PyGraph::new(text)
}

/// A built-in instance as `(map, inverse, is_conjugacy)`.
#[pyfunction]
fn corpus_instance(name: &str) -> PyResult<(PyMap, PyMap, bool)> {
    let inst = drsys::corpus::instance(name).ok_or_else(|| PyValueError::new_err(format!("no corpus instance `{name}`")))?;
    let (t, u) = inst.transducers().map_err(err)?;
    Ok((PyMap { t }, PyMap { t: u }, inst.conjugacy))
}

#[pyfunction]
fn corpus_instances() -> Vec<&'static str> {
    drsys::corpus::INSTANCES.iter().map(|i| i.name).collect()
}

#[pymodule]
fn drsys_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyMap>()?;
    m.add_function(wrap_pyfunction!(conjugacy, m)?)?;
    m.add_function(wrap_pyfunction!(cocycle_intertwine, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_points, m)?)?;
    m.add_function(wrap_pyfunction!(star_isomorphism, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_graphs, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_graph, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_instances, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_instance, m)?)?;
    Ok(())
}
