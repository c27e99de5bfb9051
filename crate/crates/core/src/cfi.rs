//! CFI graphs over a connected base graph.
//!
//! Gadget `F_d` for a base vertex of degree `d` has external pairs
//! `(a_i, b_i)`, one per incident base edge (pair indices follow the sorted
//! neighbour order), and one internal vertex per even-weight bitstring of
//! length `d`. Internal `m` is joined to `a_i` when bit `i` of `m` is 0 and to
//! `b_i` otherwise. Links join `a` to `a` and `b` to `b`; a twisted link
//! crosses them.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum VertexKind {
    /// `pair` is 0-based.
    External { pair: usize, side: Side },
    /// Bit `i` of the mask is position `i` of the string.
    Internal { bits: String },
}

/// The four external vertices and two edges realizing one base edge `(u, v)`, `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Link {
    pub base_edge: (usize, usize),
    pub pair_u: usize,
    pub pair_v: usize,
    pub a_u: usize,
    pub b_u: usize,
    pub a_v: usize,
    pub b_v: usize,
    pub edges: [(usize, usize); 2],
}

#[derive(Debug, Clone)]
pub struct CfiGraph {
    pub graph: Graph,
    pub base: Graph,
    pub gadget_of: Vec<usize>,
    pub kind_of: Vec<VertexKind>,
    pub links: BTreeMap<(usize, usize), Link>,
    pub twisted: BTreeSet<(usize, usize)>,
    /// `external[v][i] = (a_i, b_i)` of gadget `v`.
    external: Vec<Vec<(usize, usize)>>,
    /// Internal vertices of each gadget with their bitmask, ascending by mask.
    internal: Vec<Vec<(usize, u64)>>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    gadget_of: &'a [usize],
    kind_of: &'a [VertexKind],
    links: Vec<&'a Link>,
    twisted: Vec<(usize, usize)>,
}

fn normalize(e: (usize, usize)) -> (usize, usize) {
    (e.0.min(e.1), e.0.max(e.1))
}

/// Builds the CFI graph of `base` with the links of `twist` twisted.
pub fn build_cfi(base: &Graph, twist: &[(usize, usize)]) -> Result<CfiGraph> {
    if base.vertex_count() == 0 || !base.is_connected() {
        return Err(Error::Input("CFI base graph must be connected and non-empty".into()));
    }
    if base.min_degree() == 0 {
        return Err(Error::Input("CFI base graph needs minimum degree 1".into()));
    }
    if let Some(d) = (0..base.vertex_count()).map(|v| base.degree(v)).find(|&d| d > 20) {
        return Err(Error::Budget(format!("gadget of degree {d} has too many internal vertices")));
    }
    let mut twisted = BTreeSet::new();
    for &e in twist {
        let e = normalize(e);
        if !base.has_edge(e.0, e.1) {
            return Err(Error::Input(format!("{}-{} is not a base edge", e.0, e.1)));
        }
        twisted.insert(e);
    }

    let mut gadget_of = Vec::new();
    let mut kind_of = Vec::new();
    let mut external = Vec::new();
    let mut internal = Vec::new();
    let mut edges = Vec::new();
    for v in 0..base.vertex_count() {
        let d = base.degree(v);
        let mut ext = Vec::with_capacity(d);
        for i in 0..d {
            let a = kind_of.len();
            kind_of.push(VertexKind::External { pair: i, side: Side::A });
            kind_of.push(VertexKind::External { pair: i, side: Side::B });
            gadget_of.extend([v, v]);
            ext.push((a, a + 1));
        }
        let mut int = Vec::new();
        for mask in (0u64..1 << d).filter(|m| m.count_ones() % 2 == 0) {
            let m = kind_of.len();
            let bits = (0..d).map(|i| if mask >> i & 1 == 1 { '1' } else { '0' }).collect();
            kind_of.push(VertexKind::Internal { bits });
            gadget_of.push(v);
            for (i, &(a, b)) in ext.iter().enumerate() {
                edges.push((m, if mask >> i & 1 == 0 { a } else { b }));
            }
            int.push((m, mask));
        }
        external.push(ext);
        internal.push(int);
    }
    let mut links = BTreeMap::new();
    for (u, v) in base.edges() {
        let pair_u = base.neighbors(u).binary_search(&v).unwrap();
        let pair_v = base.neighbors(v).binary_search(&u).unwrap();
        let (a_u, b_u) = external[u][pair_u];
        let (a_v, b_v) = external[v][pair_v];
        let link_edges =
            if twisted.contains(&(u, v)) { [(a_u, b_v), (b_u, a_v)] } else { [(a_u, a_v), (b_u, b_v)] };
        edges.extend(link_edges);
        links.insert((u, v), Link { base_edge: (u, v), pair_u, pair_v, a_u, b_u, a_v, b_v, edges: link_edges });
    }
    let graph = Graph::from_edges(kind_of.len(), edges)?;
    Ok(CfiGraph { graph, base: base.clone(), gadget_of, kind_of, links, twisted, external, internal })
}

impl CfiGraph {
    pub fn external_pair(&self, v: usize, pair: usize) -> (usize, usize) {
        self.external[v][pair]
    }

    /// Internal vertices of gadget `v` as `(vertex, bitmask)`.
    pub fn internal_vertices(&self, v: usize) -> &[(usize, u64)] {
        &self.internal[v]
    }

    pub fn link(&self, e: (usize, usize)) -> Result<&Link> {
        let e = normalize(e);
        self.links.get(&e).ok_or_else(|| Error::Input(format!("{}-{} is not a base edge", e.0, e.1)))
    }

    /// JSON sidecar with the gadget metadata.
    pub fn metadata_json(&self) -> String {
        let sidecar = Sidecar {
            gadget_of: &self.gadget_of,
            kind_of: &self.kind_of,
            links: self.links.values().collect(),
            twisted: self.twisted.iter().copied().collect(),
        };
        serde_json::to_string_pretty(&sidecar).unwrap()
    }

    /// The choice of the all-zero internal vertex in every gadget.
    pub fn default_choice(&self) -> InternalChoice {
        InternalChoice { choice: self.internal.iter().map(|int| int[0].0).collect() }
    }
}

/// One internal vertex per gadget, indexed by base vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalChoice {
    pub choice: Vec<usize>,
}

/// Parity of the number of edges induced on the chosen internal vertices
/// together with all their neighbours.
pub fn parity_invariant(cfi: &CfiGraph, ch: &InternalChoice) -> Result<u8> {
    let n = cfi.base.vertex_count();
    if ch.choice.len() != n {
        return Err(Error::Input(format!("missing gadget choice: {} of {n} gadgets", ch.choice.len())));
    }
    let mut set = BTreeSet::new();
    for (v, &m) in ch.choice.iter().enumerate() {
        let valid = m < cfi.kind_of.len()
            && cfi.gadget_of[m] == v
            && matches!(cfi.kind_of[m], VertexKind::Internal { .. });
        if !valid {
            return Err(Error::Input(format!("vertex {m} is not internal to gadget {v}")));
        }
        set.insert(m);
        set.extend(cfi.graph.neighbors(m).iter().copied());
    }
    let sub = cfi.graph.induced_subgraph(&set.into_iter().collect::<Vec<_>>())?;
    Ok((sub.edge_count() % 2) as u8)
}
