//! Individualization-refinement isomorphism search for small graphs.

use std::collections::HashMap;

use serde::Serialize;

use super::Graph;

/// Result of an exhaustive isomorphism search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "map", rename_all = "snake_case")]
pub enum IsoOutcome<M> {
    Isomorphic(M),
    NonIsomorphic,
    /// The node budget ran out before the search space was exhausted.
    Budget,
}

impl<M> IsoOutcome<M> {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }
}

pub const DEFAULT_ISO_BUDGET: u64 = 2_000_000;

/// Joint color refinement of two vertex colorings to the coarsest stable
/// partition. Returns `None` once the class sizes disagree.
fn refine_pair(g: [&Graph; 2], mut c: [Vec<u32>; 2]) -> Option<[Vec<u32>; 2]> {
    let mut classes = usize::MAX;
    loop {
        let mut sigs: [Vec<(u32, Vec<u32>)>; 2] = [Vec::new(), Vec::new()];
        for s in 0..2 {
            sigs[s] = (0..g[s].vertex_count())
                .map(|v| {
                    let mut nb: Vec<u32> = g[s].neighbors(v).iter().map(|&w| c[s][w]).collect();
                    nb.sort_unstable();
                    (c[s][v], nb)
                })
                .collect();
        }
        let mut all: Vec<&(u32, Vec<u32>)> = sigs[0].iter().chain(&sigs[1]).collect();
        all.sort_unstable();
        all.dedup();
        let names: HashMap<&(u32, Vec<u32>), u32> =
            all.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
        for s in 0..2 {
            c[s] = sigs[s].iter().map(|sig| names[sig]).collect();
        }
        let mut h = [c[0].clone(), c[1].clone()];
        h[0].sort_unstable();
        h[1].sort_unstable();
        if h[0] != h[1] {
            return None;
        }
        if all.len() == classes {
            return Some(c);
        }
        classes = all.len();
    }
}

struct Search<'a> {
    g: [&'a Graph; 2],
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// `Some(Some(map))` found, `Some(None)` exhausted, `None` budget.
    fn go(&mut self, c: [Vec<u32>; 2]) -> Option<Option<Vec<usize>>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let Some(c) = refine_pair(self.g, c) else { return Some(None) };
        let n = c[0].len();
        let mut size: HashMap<u32, usize> = HashMap::new();
        for &x in &c[0] {
            *size.entry(x).or_default() += 1;
        }
        // Target cell: smallest non-singleton class, ties by smallest color.
        let target = size.iter().filter(|&(_, &s)| s > 1).min_by_key(|&(&col, &s)| (s, col));
        let Some((&col, _)) = target else {
            let mut pos = HashMap::new();
            for (w, &x) in c[1].iter().enumerate() {
                pos.insert(x, w);
            }
            let phi: Vec<usize> = (0..n).map(|v| pos[&c[0][v]]).collect();
            return Some(self.g[0].is_isomorphism(self.g[1], &phi).then_some(phi));
        };
        let fresh = c[0].iter().chain(&c[1]).max().unwrap() + 1;
        let v = c[0].iter().position(|&x| x == col).unwrap();
        for w in (0..n).filter(|&w| c[1][w] == col) {
            let mut next = c.clone();
            next[0][v] = fresh;
            next[1][w] = fresh;
            if let Some(phi) = self.go(next)? {
                return Some(Some(phi));
            }
        }
        Some(None)
    }
}

/// Exhaustive search for an isomorphism `g1 -> g2` (respecting vertex
/// colors). The returned map is verified edge by edge.
pub fn graph_iso_oracle(g1: &Graph, g2: &Graph, budget: u64) -> IsoOutcome<Vec<usize>> {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return IsoOutcome::NonIsomorphic;
    }
    let init = |g: &Graph| g.colors().map_or_else(|| vec![0; g.vertex_count()], <[u32]>::to_vec);
    let mut search = Search { g: [g1, g2], nodes: 0, budget };
    match search.go([init(g1), init(g2)]) {
        Some(Some(phi)) => IsoOutcome::Isomorphic(phi),
        Some(None) => IsoOutcome::NonIsomorphic,
        None => IsoOutcome::Budget,
    }
}
