//! Python module `groupwl`: graphs, CFI graphs, explicit groups, Mekler
//! groups and the WL / pebble-game comparisons.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;

use groupwl_core::cayley::{self, CayleyGroup};
use groupwl_core::cfi;
use groupwl_core::cfigroups;
use groupwl_core::graphs::{self, Outcome, Verdict};
use groupwl_core::mekler;
use groupwl_core::wlgroups::{self, Budget, Version, Winner};
use groupwl_core::Error;

fn err(e: Error) -> PyErr {
    match e {
        Error::Budget(_) | Error::Validation(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn version(v: &str) -> PyResult<Version> {
    v.parse().map_err(err)
}

fn verdict<'py>(py: Python<'py>, v: &Verdict) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    let (kind, round) = match v.outcome {
        Outcome::Distinguished { round } => ("distinguished", round),
        Outcome::StableEqual { round } => ("stable_equal", round),
    };
    d.set_item("outcome", kind)?;
    d.set_item("round", round)?;
    d.set_item("distinguished", v.distinguished())?;
    Ok(d)
}

fn iso_result<T>(o: graphs::IsoOutcome<T>) -> (&'static str, Option<T>) {
    match o {
        graphs::IsoOutcome::Isomorphic(phi) => ("isomorphic", Some(phi)),
        graphs::IsoOutcome::NonIsomorphic => ("non_isomorphic", None),
        graphs::IsoOutcome::Budget => ("budget", None),
    }
}

#[pyclass(name = "Graph", module = "groupwl", skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: graphs::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(Self { inner: graphs::Graph::from_edges(n, edges).map_err(err)? })
    }

    /// Parses the `n m` / `u v` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self { inner: graphs::parse_graph(text).map_err(err)? })
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        Self { inner: graphs::Graph::complete(n) }
    }

    #[staticmethod]
    fn cycle(n: usize) -> Self {
        Self { inner: graphs::Graph::cycle(n) }
    }

    #[staticmethod]
    fn complete_bipartite(a: usize, b: usize) -> Self {
        Self { inner: graphs::Graph::complete_bipartite(a, b) }
    }

    #[staticmethod]
    fn petersen() -> Self {
        Self { inner: graphs::Graph::petersen() }
    }

    fn to_text(&self) -> String {
        graphs::write_graph(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.vertex_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn complement(&self) -> Self {
        Self { inner: self.inner.complement() }
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.vertex_count(), self.inner.edge_count())
    }
}

/// CFI graph of `base` with the given base edges twisted; returns the graph
/// and the JSON gadget metadata.
#[pyfunction]
#[pyo3(signature = (base, twist = Vec::new()))]
fn cfi_build(base: &PyGraph, twist: Vec<(usize, usize)>) -> PyResult<(PyGraph, String)> {
    let c = cfi::build_cfi(&base.inner, &twist).map_err(err)?;
    Ok((PyGraph { inner: c.graph.clone() }, c.metadata_json()))
}

#[pyfunction]
#[pyo3(signature = (g1, g2, k = 1, max_rounds = None))]
fn graph_wl<'py>(py: Python<'py>, g1: &PyGraph, g2: &PyGraph, k: usize, max_rounds: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
    let v = py.detach(|| graphs::graph_wl(&g1.inner, &g2.inner, k, max_rounds)).map_err(err)?;
    verdict(py, &v)
}

/// `("isomorphic", mapping)`, `("non_isomorphic", None)` or `("budget", None)`.
#[pyfunction]
#[pyo3(signature = (g1, g2, budget = graphs::DEFAULT_ISO_BUDGET))]
fn graph_iso(g1: &PyGraph, g2: &PyGraph, budget: u64) -> (&'static str, Option<Vec<usize>>) {
    iso_result(graphs::graph_iso_oracle(&g1.inner, &g2.inner, budget))
}

#[pyclass(name = "Group", module = "groupwl", skip_from_py_object)]
#[derive(Clone)]
struct PyGroup {
    inner: CayleyGroup,
}

#[pymethods]
impl PyGroup {
    /// Validated group from a multiplication table (rows of indices).
    #[new]
    fn new(table: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(Self { inner: CayleyGroup::from_table(&table).map_err(err)? })
    }

    #[staticmethod]
    fn cyclic(n: usize) -> PyResult<Self> {
        Ok(Self { inner: CayleyGroup::cyclic(n).map_err(err)? })
    }

    /// Dihedral group of order `2n`.
    #[staticmethod]
    fn dihedral(n: usize) -> PyResult<Self> {
        Ok(Self { inner: CayleyGroup::dihedral(n).map_err(err)? })
    }

    #[staticmethod]
    fn quaternion8() -> Self {
        Self { inner: CayleyGroup::quaternion8() }
    }

    #[staticmethod]
    fn heisenberg(p: usize) -> PyResult<Self> {
        Ok(Self { inner: CayleyGroup::heisenberg(p).map_err(err)? })
    }

    /// Named groups of order at most `max_order`.
    #[staticmethod]
    fn corpus(max_order: usize) -> Vec<(String, PyGroup)> {
        cayley::corpus(max_order).into_iter().map(|(n, g)| (n, PyGroup { inner: g })).collect()
    }

    fn direct_product(&self, other: &PyGroup) -> Self {
        Self { inner: CayleyGroup::direct_product(&self.inner, &other.inner) }
    }

    fn relabel(&self, perm: Vec<usize>) -> PyResult<Self> {
        Ok(Self { inner: self.inner.relabel(&perm).map_err(err)? })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        let n = self.inner.order();
        if a as usize >= n || b as usize >= n {
            return Err(PyValueError::new_err(format!("element out of range for a group of order {n}")));
        }
        Ok(self.inner.mul(a, b))
    }

    fn table(&self) -> Vec<Vec<usize>> {
        self.inner.table_rows()
    }

    fn invariants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let inv = self.inner.invariants();
        let d = PyDict::new(py);
        d.set_item("order", inv.order)?;
        d.set_item("exponent", inv.exponent)?;
        d.set_item("class", inv.class)?;
        d.set_item("center_size", inv.center_size)?;
        d.set_item("conj_class_sizes", inv.conj_class_sizes)?;
        Ok(d)
    }

    /// `(subgroup order, count)` pairs of the k-generated subgroups.
    #[pyo3(signature = (k, max_tuples = 1 << 20))]
    fn profile(&self, k: usize, max_tuples: u64) -> PyResult<Vec<(usize, usize)>> {
        Ok(self.inner.profile(k, max_tuples).map_err(err)?.summary())
    }

    fn __repr__(&self) -> String {
        format!("Group(order={})", self.inner.order())
    }
}

#[pyfunction]
#[pyo3(signature = (g, h, budget = cayley::DEFAULT_GROUP_ISO_BUDGET))]
fn group_iso(g: &PyGroup, h: &PyGroup, budget: u64) -> (&'static str, Option<Vec<u32>>) {
    iso_result(cayley::iso_oracle(&g.inner, &h.inner, budget))
}

#[pyfunction]
#[pyo3(signature = (g, h, k = 2, version = "II", max_tuples = 1 << 26))]
fn wl_group<'py>(py: Python<'py>, g: &PyGroup, h: &PyGroup, k: usize, version: &str, max_tuples: u64) -> PyResult<Bound<'py, PyDict>> {
    let v = self::version(version)?;
    let budget = Budget { max_tuples, max_rounds: None };
    let out = py.detach(|| wlgroups::wl_group(&g.inner, &h.inner, k, v, &budget)).map_err(err)?;
    verdict(py, &out)
}

/// Winner of the bijective pebble game: `"spoiler"` or `"duplicator"`.
#[pyfunction]
#[pyo3(signature = (g, h, pebbles = 3, version = "II", max_states = 1 << 24))]
fn game_solve(g: &PyGroup, h: &PyGroup, pebbles: usize, version: &str, max_states: u64) -> PyResult<&'static str> {
    let w = wlgroups::game_solve(&g.inner, &h.inner, pebbles, self::version(version)?, max_states).map_err(err)?;
    Ok(match w {
        Winner::Spoiler => "spoiler",
        Winner::Duplicator => "duplicator",
    })
}

#[pyclass(name = "MeklerGroup", module = "groupwl")]
struct PyMekler {
    inner: mekler::MeklerGroup,
}

#[pymethods]
impl PyMekler {
    #[new]
    fn new(graph: &PyGraph, p: u32) -> PyResult<Self> {
        Ok(Self { inner: mekler::MeklerGroup::new(&graph.inner, p).map_err(err)? })
    }

    #[getter]
    fn log_order(&self) -> usize {
        self.inner.log_order()
    }

    #[getter]
    fn non_edges(&self) -> Vec<(usize, usize)> {
        self.inner.non_edges().to_vec()
    }

    /// Product of two element literals such as `v1^2*v3*[v1,v2]`.
    fn mul(&self, x: &str, y: &str) -> PyResult<String> {
        let g = &self.inner;
        let z = g.mul(&g.parse_element(x).map_err(err)?, &g.parse_element(y).map_err(err)?).map_err(err)?;
        Ok(g.format_element(&z))
    }

    fn commutator(&self, x: &str, y: &str) -> PyResult<String> {
        let g = &self.inner;
        let z = g.commutator(&g.parse_element(x).map_err(err)?, &g.parse_element(y).map_err(err)?).map_err(err)?;
        Ok(g.format_element(&z))
    }

    fn normalize(&self, x: &str) -> PyResult<String> {
        Ok(self.inner.format_element(&self.inner.parse_element(x).map_err(err)?))
    }

    fn centralizer_log_order(&self, x: &str) -> PyResult<usize> {
        Ok(self.inner.centralizer_log_order(&self.inner.parse_element(x).map_err(err)?))
    }

    #[pyo3(signature = (max_order = 6561))]
    fn to_group(&self, max_order: u64) -> PyResult<PyGroup> {
        Ok(PyGroup { inner: self.inner.to_cayley(max_order).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("MeklerGroup(p={}, n={}, m={})", self.inner.p(), self.inner.n(), self.inner.m())
    }
}

#[pyclass(name = "CfiGroupPair", module = "groupwl")]
struct PyCfiPair {
    inner: cfigroups::CfiGroupPair,
}

#[pymethods]
impl PyCfiPair {
    #[new]
    #[pyo3(signature = (base, p = 3, twisted_edge = None))]
    fn new(base: &PyGraph, p: u32, twisted_edge: Option<(usize, usize)>) -> PyResult<Self> {
        Ok(Self { inner: cfigroups::CfiGroupPair::new(&base.inner, p, twisted_edge).map_err(err)? })
    }

    #[getter]
    fn twisted_edge(&self) -> (usize, usize) {
        self.inner.twisted_edge
    }

    /// `(distinguished, (bit1, bit2))` from the parity discriminator.
    fn distinguish(&self) -> PyResult<(bool, (u8, u8))> {
        let v = self.inner.distinguish().map_err(err)?;
        Ok((v.distinguished, v.bits))
    }

    /// Runs the twist pipeline on `count` random k-tuples; returns
    /// `(edges found, certificate matches)`.
    #[pyo3(signature = (count, k = 3, seed = 0))]
    fn twist_pipeline(&self, py: Python<'_>, count: usize, k: usize, seed: u64) -> PyResult<(usize, usize)> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let tuples: Vec<_> = (0..count).map(|_| self.inner.random_tuple(k, &mut rng)).collect();
        let reports = py.detach(|| self.inner.phi_pipeline_batch(&tuples)).map_err(err)?;
        Ok((reports.iter().filter(|r| r.edge.is_some()).count(), reports.iter().filter(|r| r.equal).count()))
    }

    /// Number of centralizer-lemma violations over `samples` random elements of `G1`.
    #[pyo3(signature = (samples = 1000, seed = 0))]
    fn centralizer_violations(&self, samples: usize, seed: u64) -> PyResult<usize> {
        Ok(cfigroups::centralizer_profile_check(&self.inner.g1, samples, seed).map_err(err)?.violations.len())
    }
}

#[pymodule]
fn groupwl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyMekler>()?;
    m.add_class::<PyCfiPair>()?;
    m.add_function(wrap_pyfunction!(cfi_build, m)?)?;
    m.add_function(wrap_pyfunction!(graph_wl, m)?)?;
    m.add_function(wrap_pyfunction!(graph_iso, m)?)?;
    m.add_function(wrap_pyfunction!(group_iso, m)?)?;
    m.add_function(wrap_pyfunction!(wl_group, m)?)?;
    m.add_function(wrap_pyfunction!(game_solve, m)?)?;
    Ok(())
}
