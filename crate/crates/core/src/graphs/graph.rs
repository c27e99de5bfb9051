use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Finite simple undirected graph on vertices `0..n`, optionally vertex-colored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
    colors: Option<Vec<u32>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self { n, adj: vec![Vec::new(); n], edge_count: 0, colors: None }
    }

    /// Builds a graph, rejecting loops, duplicate edges and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::OutOfRange { index: x, size: self.n });
            }
        }
        if u == v {
            return Err(Error::Input(format!("loop at vertex {u}")));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => return Err(Error::Input(format!("duplicate edge {u}-{v}"))),
            Err(pos) => self.adj[u].insert(pos, v),
        }
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        self.edge_count += 1;
        Ok(())
    }

    pub fn with_colors(mut self, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != self.n {
            return Err(Error::Dimension(format!("{} colors for {} vertices", colors.len(), self.n)));
        }
        self.colors = Some(colors);
        Ok(self)
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least 3 vertices");
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Self::from_edges(a + b, (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j)))).unwrap()
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Self::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        let edges = self.edges().chain(other.edges().map(|(u, v)| (u + off, v + off)));
        let mut g = Graph::from_edges(self.n + other.n, edges).unwrap();
        if self.colors.is_some() || other.colors.is_some() {
            let mut c = self.colors.clone().unwrap_or_else(|| vec![0; self.n]);
            c.extend(other.colors.clone().unwrap_or_else(|| vec![0; other.n]));
            g.colors = Some(c);
        }
        g
    }

    /// Uniformly random `d`-regular graph by the pairing model, retried until
    /// simple. Only intended for small `n`.
    pub fn random_regular<R: Rng>(n: usize, d: usize, rng: &mut R) -> Result<Self> {
        if n * d % 2 != 0 || d >= n {
            return Err(Error::Parameter(format!("no {d}-regular graph on {n} vertices")));
        }
        'attempt: for _ in 0..10_000 {
            let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
            points.shuffle(rng);
            let mut g = Graph::empty(n);
            for pair in points.chunks(2) {
                if g.add_edge(pair[0], pair[1]).is_err() {
                    continue 'attempt;
                }
            }
            return Ok(g);
        }
        Err(Error::Budget("random regular graph: too many rejected pairings".into()))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn colors(&self) -> Option<&[u32]> {
        self.colors.as_deref()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges().collect()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|ns| ns.len() == d)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// The simple complement.
    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g.colors = self.colors.clone();
        g
    }

    /// Subgraph induced by `vertices`, relabeled `0..|S|` in sorted order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut sorted: Vec<usize> = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|&&v| v >= self.n) {
            return Err(Error::OutOfRange { index: bad, size: self.n });
        }
        let mut g = Graph::empty(sorted.len());
        for (i, &u) in sorted.iter().enumerate() {
            for (j, &v) in sorted.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        if let Some(c) = &self.colors {
            g.colors = Some(sorted.iter().map(|&v| c[v]).collect());
        }
        Ok(g)
    }

    /// Image of the graph under the vertex map `v -> perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        check_permutation(perm, self.n)?;
        let mut g = Graph::from_edges(self.n, self.edges().map(|(u, v)| (perm[u], perm[v])))?;
        if let Some(c) = &self.colors {
            let mut nc = vec![0; self.n];
            for v in 0..self.n {
                nc[perm[v]] = c[v];
            }
            g.colors = Some(nc);
        }
        Ok(g)
    }

    /// True iff `phi` maps edges onto edges, non-edges onto non-edges and
    /// preserves vertex colors.
    pub fn is_isomorphism(&self, other: &Graph, phi: &[usize]) -> bool {
        if self.n != other.n || self.edge_count != other.edge_count {
            return false;
        }
        if check_permutation(phi, self.n).is_err() {
            return false;
        }
        let colors_ok = match (&self.colors, &other.colors) {
            (None, None) => true,
            (a, b) => (0..self.n).all(|v| {
                a.as_ref().map_or(0, |c| c[v]) == b.as_ref().map_or(0, |c| c[phi[v]])
            }),
        };
        colors_ok && self.edges().all(|(u, v)| other.has_edge(phi[u], phi[v]))
    }

    /// No ordered pair of distinct vertices `v, w` has `N(v) ⊆ N[w]`.
    ///
    /// Exactly when this holds, the graph's vertex set sits canonically inside
    /// the class-2 group built from it.
    pub fn canonicity_condition(&self) -> bool {
        for v in 0..self.n {
            for w in 0..self.n {
                if v == w {
                    continue;
                }
                let contained = self.adj[v].iter().all(|&x| x == w || self.has_edge(w, x));
                if contained {
                    return false;
                }
            }
        }
        true
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::Dimension(format!("permutation of length {} on {n} points", perm.len())));
    }
    let mut seen = vec![false; n];
    for &x in perm {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::Input("not a permutation".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_duplicates_and_range() {
        let mut g = Graph::empty(3);
        assert!(g.add_edge(0, 0).is_err());
        g.add_edge(0, 1).unwrap();
        assert!(g.add_edge(1, 0).is_err());
        assert!(matches!(g.add_edge(0, 3), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn complement_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.complement(), Graph::empty(4));
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(g.complement().complement(), g);
    }

    #[test]
    fn induced_subgraph_examples() {
        let g = Graph::petersen();
        let all: Vec<usize> = (0..10).collect();
        assert_eq!(g.induced_subgraph(&all).unwrap(), g);
        assert_eq!(g.induced_subgraph(&[]).unwrap(), Graph::empty(0));
        assert_eq!(Graph::complete(4).induced_subgraph(&[0, 2, 3]).unwrap(), Graph::complete(3));
        assert!(g.induced_subgraph(&[11]).is_err());
    }

    #[test]
    fn canonicity_examples() {
        assert!(!Graph::complete(2).canonicity_condition());
        assert!(Graph::cycle(5).canonicity_condition());
        // 0 and 1 are twins (both adjacent to exactly 2 and 3).
        let twins = Graph::from_edges(5, [(0, 2), (0, 3), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert!(!twins.canonicity_condition());
    }

    #[test]
    fn components_and_regularity() {
        let g = Graph::cycle(3).disjoint_union(&Graph::cycle(3));
        assert_eq!(g.components(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert!(g.is_regular(2));
        assert!(!g.is_connected());
        assert!(Graph::petersen().is_regular(3));
    }

    #[test]
    fn random_regular_is_regular() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let g = Graph::random_regular(20, 3, &mut rng).unwrap();
        assert!(g.is_regular(3));
        assert_eq!(g.edge_count(), 30);
    }
}
