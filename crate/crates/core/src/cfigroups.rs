//! Mekler groups over a CFI pair: the twist map on commutator coordinates,
//! gadget automorphisms, twist-edge search with kernel certificates,
//! centralizer bounds and the parity discriminator.
//!
//! All groups live over the same vertex order. The relation subgroups of the
//! two quotients are never built; they only appear as column masks on `B₂`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cfi::{build_cfi, parity_invariant, CfiGraph, Link, VertexKind};
use crate::error::{Error, Result};
use crate::fpalgebra::{binom2, column_space_equal, pair_index, FpMatrix, PrimeField};
use crate::graphs::{check_permutation, graph_wl, Graph, Verdict};
use crate::mekler::{MeklerElement, MeklerGroup};

/// Untwisted CFI graph, its copy twisted on one link, and their Mekler groups.
#[derive(Debug, Clone)]
pub struct CfiGroupPair {
    pub base: Graph,
    pub p: u32,
    pub twisted_edge: (usize, usize),
    pub gamma1: CfiGraph,
    pub gamma2: CfiGraph,
    pub g1: MeklerGroup,
    pub g2: MeklerGroup,
    /// Free class-2 exponent-p group on the CFI vertices.
    pub free: MeklerGroup,
}

/// `(k, rank, canonical left kernel)` of a zeroed `B₂`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SubgroupCertificate {
    pub k: usize,
    pub rank: usize,
    pub kernel: Vec<Vec<u32>>,
}

/// A permutation of the CFI vertices acting as an automorphism on every gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetTwist {
    pub perm: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub edge: Option<(usize, usize)>,
    /// Base edges walked from the search edge to the designated twisted link.
    pub path: Vec<(usize, usize)>,
    pub left: SubgroupCertificate,
    pub right: Option<SubgroupCertificate>,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralizerReport {
    pub p: u32,
    pub center_log_order: usize,
    /// `log_p |C(v)| / |Z|` per vertex generator.
    pub vertex_log_ratios: Vec<usize>,
    pub samples: usize,
    pub max_sample_log_ratio: Option<usize>,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParityVerdict {
    pub distinguished: bool,
    pub bits: (u8, u8),
}

fn norm(e: (usize, usize)) -> (usize, usize) {
    (e.0.min(e.1), e.0.max(e.1))
}

/// The two link edges of `l` with the twist toggled.
fn toggled(l: &Link) -> [(usize, usize); 2] {
    if l.edges[0] == (l.a_u, l.a_v) {
        [norm((l.a_u, l.b_v)), norm((l.b_u, l.a_v))]
    } else {
        [norm((l.a_u, l.a_v)), norm((l.b_u, l.b_v))]
    }
}

/// Edge set of `cfi` with the twist of link `e` toggled.
pub fn toggled_edge_set(cfi: &CfiGraph, e: (usize, usize)) -> Result<BTreeSet<(usize, usize)>> {
    let link = cfi.link(e)?;
    let mut edges = cfi.graph.edge_set();
    for x in link.edges {
        edges.remove(&norm(x));
    }
    edges.extend(toggled(link));
    Ok(edges)
}

fn columns(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<usize> {
    edges.into_iter().map(|(u, v)| pair_index(n, u.min(v), u.max(v))).collect()
}

/// `B₂` of `tuple` in the free group with nothing zeroed (`binom2(k)` rows).
fn free_b2(free: &MeklerGroup, tuple: &[MeklerElement]) -> Result<FpMatrix> {
    Ok(free.b_matrices(tuple)?.1)
}

fn certificate_of(k: usize, b2: &FpMatrix) -> SubgroupCertificate {
    let (rank, kernel) = if b2.rows() == 0 {
        (0, Vec::new())
    } else {
        let ker = b2.row_kernel();
        (b2.rank(), (0..ker.rows()).map(|r| ker.row(r).to_vec()).collect())
    };
    SubgroupCertificate { k, rank, kernel }
}

/// Certificate of `tuple` (elements of `free`) with the columns of `zero` cleared.
pub fn subgroup_certificate(
    free: &MeklerGroup,
    tuple: &[MeklerElement],
    zero: impl IntoIterator<Item = (usize, usize)>,
) -> Result<SubgroupCertificate> {
    let mut b2 = free_b2(free, tuple)?;
    b2.zero_columns(columns(free.n(), zero));
    Ok(certificate_of(tuple.len(), &b2))
}

impl CfiGroupPair {
    /// `twisted_edge` defaults to the first base edge.
    pub fn new(base: &Graph, p: u32, twisted_edge: Option<(usize, usize)>) -> Result<Self> {
        PrimeField::new(p)?;
        if p == 2 {
            return Err(Error::Parameter("p must be an odd prime".into()));
        }
        if !base.is_regular(3) {
            return Err(Error::Input("CFI group pairs need a 3-regular base graph".into()));
        }
        let e0 = match twisted_edge {
            Some(e) => norm(e),
            None => base.edges().next().ok_or_else(|| Error::Input("base graph has no edges".into()))?,
        };
        let gamma1 = build_cfi(base, &[])?;
        let gamma2 = build_cfi(base, &[e0])?;
        let n = gamma1.graph.vertex_count();
        Ok(Self {
            base: base.clone(),
            p,
            twisted_edge: e0,
            g1: MeklerGroup::new(&gamma1.graph, p)?,
            g2: MeklerGroup::new(&gamma2.graph, p)?,
            free: MeklerGroup::new(&Graph::empty(n), p)?,
            gamma1,
            gamma2,
        })
    }

    pub fn n(&self) -> usize {
        self.free.n()
    }

    fn check_tuple(&self, tuple: &[MeklerElement]) -> Result<()> {
        tuple.iter().try_for_each(|t| self.free.check(t))
    }

    /// Slot pairs exchanged by the twist of link `e`.
    fn swapped_slots(&self, e: (usize, usize)) -> Result<[(usize, usize); 2]> {
        let l = self.gamma1.link(e)?;
        let n = self.n();
        let s = |x: usize, y: usize| pair_index(n, x.min(y), x.max(y));
        Ok([(s(l.a_u, l.a_v), s(l.a_u, l.b_v)), (s(l.b_u, l.b_v), s(l.b_u, l.a_v))])
    }

    /// Exchanges the commutator coordinates `[a_u, a_v] <-> [a_u, b_v]` and
    /// `[b_u, b_v] <-> [b_u, a_v]` of link `e` in every normal form.
    pub fn twist_map(&self, tuple: &[MeklerElement], e: (usize, usize)) -> Result<Vec<MeklerElement>> {
        self.check_tuple(tuple)?;
        let swaps = self.swapped_slots(e)?;
        Ok(tuple
            .iter()
            .map(|t| {
                let mut t = t.clone();
                for (x, y) in swaps {
                    t.comm_exp.as_mut_slice().swap(x, y);
                }
                t
            })
            .collect())
    }

    /// The twist map applied to the columns of a `B₂` matrix.
    pub fn twist_columns(&self, b2: &FpMatrix, e: (usize, usize)) -> Result<FpMatrix> {
        if b2.cols() != binom2(self.n()) {
            return Err(Error::Dimension(format!("{} columns, expected {}", b2.cols(), binom2(self.n()))));
        }
        let mut perm: Vec<usize> = (0..b2.cols()).collect();
        for (x, y) in self.swapped_slots(e)? {
            perm.swap(x, y);
        }
        Ok(b2.select_columns(&perm))
    }

    /// True iff `B₂` zeroed at `E(Γ₁)` and at `E(Γ₁)` with `e` twisted have
    /// the same column space.
    pub fn edge_qualifies(&self, tuple: &[MeklerElement], e: (usize, usize)) -> Result<bool> {
        let b2 = free_b2(&self.free, tuple)?;
        self.qualifies(&b2, e)
    }

    fn qualifies(&self, b2: &FpMatrix, e: (usize, usize)) -> Result<bool> {
        let link = self.gamma1.link(e)?;
        if b2.rows() == 0 {
            return Ok(true);
        }
        let n = self.n();
        let own: BTreeSet<(usize, usize)> = link.edges.iter().map(|&x| norm(x)).collect();
        let mut common = b2.clone();
        common.zero_columns(columns(n, self.gamma1.graph.edges().filter(|x| !own.contains(x))));
        let mut plain = common.clone();
        plain.zero_columns(columns(n, own.iter().copied()));
        let mut twisted = common;
        twisted.zero_columns(columns(n, toggled(link)));
        column_space_equal(&plain, &twisted)
    }

    /// The first base edge passing [`Self::edge_qualifies`].
    pub fn twist_edge_search(&self, tuple: &[MeklerElement]) -> Result<Option<(usize, usize)>> {
        let b2 = free_b2(&self.free, tuple)?;
        for e in self.base.edges() {
            if self.qualifies(&b2, e)? {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }

    /// Composition of link-flipping generators along a shortest path in the
    /// line graph from `e` to the designated twisted link. Maps the edge set
    /// of `Γ₁` twisted at `e` onto `E(Γ₂)`.
    pub fn sigma_for(&self, e: (usize, usize)) -> Result<(GadgetTwist, Vec<(usize, usize)>)> {
        let e = norm(e);
        self.gamma1.link(e)?;
        let edges: Vec<(usize, usize)> = self.base.edges().collect();
        let id: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let (start, goal) = (id[&e], id[&self.twisted_edge]);
        let mut prev = vec![usize::MAX; edges.len()];
        prev[start] = start;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (u, v) = edges[i];
            for w in [u, v] {
                for &x in self.base.neighbors(w) {
                    let j = id[&norm((w, x))];
                    if prev[j] == usize::MAX {
                        prev[j] = i;
                        queue.push_back(j);
                    }
                }
            }
        }
        let mut path = vec![goal];
        while *path.last().unwrap() != start {
            path.push(prev[*path.last().unwrap()]);
        }
        path.reverse();
        let mut sigma = GadgetTwist::identity(self.n());
        for w in path.windows(2) {
            let (f, g) = (edges[w[0]], edges[w[1]]);
            let shared = if f.0 == g.0 || f.0 == g.1 { f.0 } else { f.1 };
            let pos = |x: (usize, usize)| {
                let other = if x.0 == shared { x.1 } else { x.0 };
                self.base.neighbors(shared).binary_search(&other).unwrap()
            };
            sigma = GadgetTwist::flip(&self.gamma1, shared, pos(f), pos(g))?.compose(&sigma);
        }
        Ok((sigma, path.into_iter().map(|i| edges[i]).collect()))
    }

    /// Image of each element under the automorphism of the free group
    /// induced by the vertex permutation of `sigma`.
    pub fn apply_gadget_twist(&self, sigma: &GadgetTwist, tuple: &[MeklerElement]) -> Result<Vec<MeklerElement>> {
        sigma.validate(&self.gamma1)?;
        self.check_tuple(tuple)?;
        Ok(tuple.iter().map(|t| permute_element(&self.free, &sigma.perm, t)).collect())
    }

    /// `t` mod `E(Γ₁)` against `σ_e(t^(e))` mod `E(Γ₂)`.
    pub fn phi_pipeline(&self, tuple: &[MeklerElement]) -> Result<PipelineReport> {
        let left = subgroup_certificate(&self.free, tuple, self.gamma1.graph.edges())?;
        let Some(e) = self.twist_edge_search(tuple)? else {
            return Ok(PipelineReport { edge: None, path: Vec::new(), left, right: None, equal: false });
        };
        let (sigma, path) = self.sigma_for(e)?;
        let image = sigma.image_edges(&toggled_edge_set(&self.gamma1, e)?);
        if image != self.gamma2.graph.edge_set() {
            return Err(Error::Validation(format!("gadget twist for edge {e:?} does not reach E(Γ₂)")));
        }
        let moved = self.apply_gadget_twist(&sigma, &self.twist_map(tuple, e)?)?;
        let right = subgroup_certificate(&self.free, &moved, self.gamma2.graph.edges())?;
        Ok(PipelineReport { edge: Some(e), path, equal: left == right, left, right: Some(right) })
    }

    pub fn phi_pipeline_batch(&self, tuples: &[Vec<MeklerElement>]) -> Result<Vec<PipelineReport>> {
        tuples.par_iter().map(|t| self.phi_pipeline(t)).collect()
    }

    pub fn random_tuple<R: Rng>(&self, k: usize, rng: &mut R) -> Vec<MeklerElement> {
        (0..k).map(|_| self.free.random_element(rng)).collect()
    }

    pub fn distinguish(&self) -> Result<ParityVerdict> {
        distinguish_cfi_graphs(&self.gamma1, &self.gamma2)
    }

    /// 1-WL on the support-capped commuting graphs of `G₁` and `G₂`.
    pub fn commuting_graph_wl(&self, cap: usize, max_vertices: usize) -> Result<Verdict> {
        let c1 = self.g1.commuting_graph(cap, max_vertices)?;
        let c2 = self.g2.commuting_graph(cap, max_vertices)?;
        graph_wl(&c1.graph, &c2.graph, 1, None)
    }
}

fn permute_element(free: &MeklerGroup, perm: &[usize], t: &MeklerElement) -> MeklerElement {
    let f = free.field();
    let n = free.n();
    let mut acc = free.identity();
    for (i, &a) in t.gen_exp.as_slice().iter().enumerate() {
        if a != 0 {
            let mut y = free.identity();
            y.gen_exp.as_mut_slice()[perm[i]] = a;
            acc = free.mul(&acc, &y).expect("same group");
        }
    }
    let comm = acc.comm_exp.as_mut_slice();
    for (s, (i, j)) in crate::fpalgebra::pairs(n).enumerate() {
        let c = t.comm_exp.as_slice()[s];
        if c == 0 {
            continue;
        }
        let (x, y) = (perm[i], perm[j]);
        let (slot, c) = if x < y { (pair_index(n, x, y), c) } else { (pair_index(n, y, x), f.neg(c)) };
        comm[slot] = f.add(comm[slot], c);
    }
    acc
}

impl GadgetTwist {
    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect() }
    }

    /// Swaps `a_i <-> b_i` and `a_j <-> b_j` in gadget `v` and moves each
    /// internal vertex `m` to `m xor {i, j}`.
    pub fn flip(cfi: &CfiGraph, v: usize, i: usize, j: usize) -> Result<Self> {
        let d = cfi.base.degree(v);
        if i == j || i >= d || j >= d {
            return Err(Error::Parameter(format!("pairs {i}, {j} of a degree-{d} gadget")));
        }
        let mut perm: Vec<usize> = (0..cfi.graph.vertex_count()).collect();
        for q in [i, j] {
            let (a, b) = cfi.external_pair(v, q);
            perm.swap(a, b);
        }
        let int = cfi.internal_vertices(v);
        let by_mask: HashMap<u64, usize> = int.iter().map(|&(x, m)| (m, x)).collect();
        for &(x, m) in int {
            perm[x] = by_mask[&(m ^ (1 << i) ^ (1 << j))];
        }
        Ok(Self { perm })
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GadgetTwist) -> GadgetTwist {
        GadgetTwist { perm: other.perm.iter().map(|&x| self.perm[x]).collect() }
    }

    pub fn image_edges(&self, edges: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
        edges.iter().map(|&(u, v)| norm((self.perm[u], self.perm[v]))).collect()
    }

    /// Checks that every gadget is mapped to itself by an automorphism and
    /// every external pair (hence every link) is fixed setwise.
    pub fn validate(&self, cfi: &CfiGraph) -> Result<()> {
        let n = cfi.graph.vertex_count();
        check_permutation(&self.perm, n)?;
        for x in 0..n {
            let y = self.perm[x];
            let same_kind = match (&cfi.kind_of[x], &cfi.kind_of[y]) {
                (VertexKind::External { pair: p, .. }, VertexKind::External { pair: q, .. }) => p == q,
                (VertexKind::Internal { .. }, VertexKind::Internal { .. }) => true,
                _ => false,
            };
            if cfi.gadget_of[x] != cfi.gadget_of[y] || !same_kind {
                return Err(Error::Validation(format!("vertex {x} is not mapped within its gadget slot")));
            }
        }
        for (u, v) in cfi.graph.edges() {
            if cfi.gadget_of[u] == cfi.gadget_of[v] && !cfi.graph.has_edge(self.perm[u], self.perm[v]) {
                return Err(Error::Validation(format!("gadget edge {u}-{v} is not preserved")));
            }
        }
        Ok(())
    }
}

/// All flips of two pairs in one gadget; they generate the group of gadget twists.
pub fn gadget_twist_generators(cfi: &CfiGraph) -> Result<Vec<GadgetTwist>> {
    let mut out = Vec::new();
    for v in 0..cfi.base.vertex_count() {
        let d = cfi.base.degree(v);
        for i in 0..d {
            for j in i + 1..d {
                out.push(GadgetTwist::flip(cfi, v, i, j)?);
            }
        }
    }
    Ok(out)
}

/// Parity bits of both graphs (default internal choice on each side).
pub fn distinguish_cfi_graphs(a: &CfiGraph, b: &CfiGraph) -> Result<ParityVerdict> {
    let bits = (parity_invariant(a, &a.default_choice())?, parity_invariant(b, &b.default_choice())?);
    Ok(ParityVerdict { distinguished: bits.0 != bits.1, bits })
}

pub fn distinguish_cfi_groups(pair: &CfiGroupPair) -> Result<ParityVerdict> {
    pair.distinguish()
}

fn random_small_support<R: Rng>(g: &MeklerGroup, rng: &mut R) -> MeklerElement {
    let n = g.n();
    let p = g.p();
    let mut x = g.identity();
    if rng.gen_bool(0.5) {
        let s = rng.gen_range(2..=4.min(n));
        for v in rand::seq::index::sample(rng, n, s) {
            x.gen_exp.as_mut_slice()[v] = rng.gen_range(1..p);
        }
    } else {
        x.gen_exp.as_mut_slice().iter_mut().for_each(|d| *d = rng.gen_range(0..p));
    }
    x.comm_exp.as_mut_slice().iter_mut().for_each(|d| *d = rng.gen_range(0..p));
    x
}

/// Checks `|C(v)| = p⁴ |Z|` for every vertex generator and `|C(x)| ≤ p³ |Z|`
/// for `samples` random non-central elements of support at least 2.
pub fn centralizer_profile_check(g: &MeklerGroup, samples: usize, seed: u64) -> Result<CentralizerReport> {
    let graph = g.graph();
    if !graph.is_connected() || !graph.is_regular(3) || !graph.complement().is_connected() {
        return Err(Error::Input(
            "centralizer check needs a connected 3-regular graph with connected complement".into(),
        ));
    }
    let center = g.m() + g.universal_vertices().len();
    let mut violations = Vec::new();
    let vertex_log_ratios: Vec<usize> =
        (0..g.n()).map(|v| g.centralizer_log_order(&g.generator(v).unwrap()) - center).collect();
    for (v, &r) in vertex_log_ratios.iter().enumerate() {
        if r != 4 {
            violations.push(format!("vertex {v}: |C(v)|/|Z| = p^{r}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs = Vec::with_capacity(samples);
    while xs.len() < samples {
        let x = random_small_support(g, &mut rng);
        if g.support(&x).len() >= 2 && !g.is_central(&x) {
            xs.push(x);
        }
    }
    let ratios: Vec<usize> = xs.par_iter().map(|x| g.centralizer_log_order(x) - center).collect();
    for (x, &r) in xs.iter().zip(&ratios) {
        if r > 3 {
            violations.push(format!("{}: |C(x)|/|Z| = p^{r}", g.format_element(x)));
        }
    }
    Ok(CentralizerReport {
        p: g.p(),
        center_log_order: center,
        vertex_log_ratios,
        samples,
        max_sample_log_ratio: ratios.iter().copied().max(),
        violations,
    })
}
