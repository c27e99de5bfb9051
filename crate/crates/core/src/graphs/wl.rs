use super::refine::{intern, Domain, Engine, Step, TupleSpace, Verdict};
use super::Graph;
use crate::error::{param, Result};

/// Default cap on the number of k-tuples per structure.
pub const DEFAULT_MAX_TUPLES: u64 = 1 << 26;

/// The coloring of `V^k` after some number of refinement rounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphColoring {
    pub k: usize,
    pub round: usize,
    /// Indexed by tuple, first entry most significant.
    pub colors: Vec<u32>,
}

impl GraphColoring {
    pub fn class_count(&self) -> usize {
        let mut c = self.colors.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    }

    /// True iff every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &GraphColoring) -> bool {
        let mut image = std::collections::HashMap::new();
        self.colors
            .iter()
            .zip(&coarser.colors)
            .all(|(a, b)| *image.entry(*a).or_insert(*b) == *b)
    }
}

pub(crate) struct AdjMatrix {
    n: usize,
    bits: Vec<u64>,
}

impl AdjMatrix {
    pub fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for (u, v) in g.edges() {
            bits[u * words + v / 64] |= 1 << (v % 64);
            bits[v * words + u / 64] |= 1 << (u % 64);
        }
        Self { n, bits }
    }

    #[inline]
    pub fn has(&self, u: usize, v: usize) -> bool {
        let words = self.n.div_ceil(64);
        self.bits[u * words + v / 64] >> (v % 64) & 1 == 1
    }
}

/// Initial colors: isomorphism type of the (vertex-colored) induced ordered subgraph.
fn initial_colors(graphs: &[&Graph], space: &TupleSpace) -> (Vec<Vec<u32>>, usize) {
    let k = space.k;
    if k == 1 {
        return intern(graphs.len(), space.len, || (), |_, s, v| {
            graphs[s].colors().map_or(0, |c| c[v])
        });
    }
    let adj: Vec<AdjMatrix> = graphs.iter().map(|g| AdjMatrix::new(g)).collect();
    intern(graphs.len(), space.len, || vec![0usize; k], |digits, s, idx| {
        space.decode(idx, digits);
        let mut key = Vec::with_capacity(k * (k - 1) / 2 + k);
        for i in 0..k {
            for j in i + 1..k {
                let (a, b) = (digits[i], digits[j]);
                key.push(if a == b { 0 } else if adj[s].has(a, b) { 1 } else { 2 });
            }
        }
        if let Some(c) = graphs[s].colors() {
            key.extend(digits.iter().map(|&v| c[v]));
        }
        key
    })
}

/// Joint k-WL on two graphs.
pub fn graph_wl(g1: &Graph, g2: &Graph, k: usize, max_rounds: Option<usize>) -> Result<Verdict> {
    graph_wl_on(&[g1, g2], k, max_rounds, Domain::All, DEFAULT_MAX_TUPLES)
}

pub(crate) fn graph_wl_on(
    graphs: &[&Graph],
    k: usize,
    max_rounds: Option<usize>,
    domain: Domain,
    max_tuples: u64,
) -> Result<Verdict> {
    if k == 0 {
        return Err(param("k must be at least 1"));
    }
    let n = graphs[0].vertex_count();
    if graphs.iter().any(|g| g.vertex_count() != n) {
        let sizes: Vec<u64> =
            graphs.iter().map(|g| (g.vertex_count() as u64).saturating_pow(k as u32)).collect();
        return Ok(Verdict::size_mismatch(&sizes));
    }
    let space = TupleSpace::new(n, k, max_tuples)?;
    let (colors, count) = initial_colors(graphs, &space);
    let step = if k == 1 { Step::Neighbors(graphs.to_vec()) } else { Step::Replace };
    Engine::new(space, colors, count, step, domain).run(max_rounds)
}

/// The colorings of a single graph after rounds `0..=rounds` (or until stable).
pub fn refinement_sequence(g: &Graph, k: usize, rounds: usize) -> Result<Vec<GraphColoring>> {
    if k == 0 {
        return Err(param("k must be at least 1"));
    }
    let space = TupleSpace::new(g.vertex_count(), k, DEFAULT_MAX_TUPLES)?;
    let (colors, count) = initial_colors(&[g], &space);
    let step = if k == 1 { Step::Neighbors(vec![g]) } else { Step::Replace };
    let mut engine = Engine::new(space, colors, count, step, Domain::All);
    let mut out = vec![GraphColoring { k, round: 0, colors: engine.colors[0].clone() }];
    for round in 1..=rounds {
        if !engine.refine()? {
            break;
        }
        out.push(GraphColoring { k, round, colors: engine.colors[0].clone() });
    }
    Ok(out)
}
