//! Weisfeiler-Leman refinement on groups (Versions I, II, III) and the
//! bijective pebble game for Versions I and II.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cayley::{CayleyGroup, Certifier, MarkedCertificate};
use crate::error::{param, Error, Result};
use crate::graphs::refine::{intern, Domain, Engine, Step, TupleSpace};
use crate::graphs::{graph_wl_on, Graph, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Version {
    I,
    II,
    III,
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Version::I => "I",
            Version::II => "II",
            Version::III => "III",
        })
    }
}

impl FromStr for Version {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(Version::I),
            "II" | "2" => Ok(Version::II),
            "III" | "3" => Ok(Version::III),
            _ => Err(param(format!("unknown version `{s}`"))),
        }
    }
}

/// Budgets for group refinement.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Cap on k-tuples per structure (of the group, or of the gadget graph for Version III).
    pub max_tuples: u64,
    pub max_rounds: Option<usize>,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_tuples: 1 << 26, max_rounds: None }
    }
}

/// Version-I certificate: which entries are defined, the equality pattern and
/// the set of triples `(i, j, m)` with `g_i g_j = g_m`, packed as bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct V1Certificate(Vec<u64>);

struct Bits(Vec<u64>, usize);

impl Bits {
    fn push(&mut self, b: bool) {
        if self.1 % 64 == 0 {
            self.0.push(0);
        }
        if b {
            *self.0.last_mut().unwrap() |= 1 << (self.1 % 64);
        }
        self.1 += 1;
    }
}

pub(crate) fn v1_partial(g: &CayleyGroup, tuple: &[Option<u32>]) -> V1Certificate {
    let k = tuple.len();
    let mut bits = Bits(Vec::with_capacity(1), 0);
    for t in tuple {
        bits.push(t.is_some());
    }
    for i in 0..k {
        for j in i + 1..k {
            bits.push(matches!((tuple[i], tuple[j]), (Some(a), Some(b)) if a == b));
        }
    }
    for i in 0..k {
        for j in 0..k {
            for m in 0..k {
                let holds = match (tuple[i], tuple[j], tuple[m]) {
                    (Some(a), Some(b), Some(c)) => g.mul(a, b) == c,
                    _ => false,
                };
                bits.push(holds);
            }
        }
    }
    V1Certificate(bits.0)
}

pub fn init_color_v1(g: &CayleyGroup, tuple: &[u32]) -> Result<V1Certificate> {
    if tuple.len() < 2 {
        return Err(param("group refinement needs k >= 2"));
    }
    if let Some(&x) = tuple.iter().find(|&&x| x as usize >= g.order()) {
        return Err(Error::OutOfRange { index: x as usize, size: g.order() });
    }
    let t: Vec<Option<u32>> = tuple.iter().map(|&x| Some(x)).collect();
    Ok(v1_partial(g, &t))
}

pub fn init_color_v2(g: &CayleyGroup, tuple: &[u32]) -> Result<MarkedCertificate> {
    g.marked_certificate(tuple)
}

/// Graph with the element vertices `0..|G|` and, for every ordered pair
/// `(g, h)`, a gadget `a, b, c, d` with edges `g-a, h-b, gh-d, a-b, b-c, c-d`.
pub fn gamma_graph(g: &CayleyGroup, max_vertices: usize) -> Result<Graph> {
    let n = g.order();
    let size = n + 4 * n * n;
    if size > max_vertices {
        return Err(Error::Budget(format!("gadget graph needs {size} vertices (budget {max_vertices})")));
    }
    let mut edges = Vec::with_capacity(6 * n * n);
    for x in 0..n {
        for y in 0..n {
            let base = n + 4 * (x * n + y);
            let (a, b, c, d) = (base, base + 1, base + 2, base + 3);
            let xy = g.mul(x as u32, y as u32) as usize;
            edges.extend([(x, a), (y, b), (xy, d), (a, b), (b, c), (c, d)]);
        }
    }
    Graph::from_edges(size, edges)
}

fn tuple_space(n: usize, k: usize, budget: &Budget) -> Result<TupleSpace> {
    if k < 2 {
        return Err(param("group refinement needs k >= 2"));
    }
    TupleSpace::new(n, k, budget.max_tuples)
}

/// Joint k-WL refinement of two groups.
pub fn wl_group(g: &CayleyGroup, h: &CayleyGroup, k: usize, version: Version, budget: &Budget) -> Result<Verdict> {
    if k < 2 {
        return Err(param("group refinement needs k >= 2"));
    }
    let n = g.order();
    if n != h.order() {
        let sizes = [g.order(), h.order()].map(|s| (s as u64).saturating_pow(k as u32));
        return Ok(Verdict::size_mismatch(&sizes));
    }
    let groups = [g, h];
    match version {
        Version::I => {
            let space = tuple_space(n, k, budget)?;
            let (colors, count) = intern(2, space.len, || (vec![0usize; k], vec![None; k]), |(digits, t), s, idx| {
                space.decode(idx, digits);
                for (slot, &d) in t.iter_mut().zip(digits.iter()) {
                    *slot = Some(d as u32);
                }
                v1_partial(groups[s], t)
            });
            Engine::new(space, colors, count, Step::Replace, Domain::All).run(budget.max_rounds)
        }
        Version::II => {
            let space = tuple_space(n, k, budget)?;
            let init = || (vec![0usize; k], vec![0u32; k], Certifier::new(n));
            let (colors, count) = intern(2, space.len, init, |(digits, t, cert), s, idx| {
                space.decode(idx, digits);
                for (slot, &d) in t.iter_mut().zip(digits.iter()) {
                    *slot = d as u32;
                }
                cert.certify(groups[s], t)
            });
            Engine::new(space, colors, count, Step::Replace, Domain::All).run(budget.max_rounds)
        }
        Version::III => {
            let vertices = n + 4 * n * n;
            TupleSpace::new(vertices, k, budget.max_tuples)?;
            let gg = gamma_graph(g, vertices)?;
            let gh = gamma_graph(h, vertices)?;
            graph_wl_on(&[&gg, &gh], k, budget.max_rounds, Domain::Prefix(n), budget.max_tuples)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    Spoiler,
    Duplicator,
}

/// A position of the bijective pebble game: slot `i` holds the pair of
/// pebbled elements or nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameConfig {
    pub slots: Vec<Option<(u32, u32)>>,
}

/// Solves the bijective pebble game with `pebble_pairs` pairs exactly.
///
/// Duplicator's winning positions form the greatest set `W` such that from
/// every position in `W`, for every pebble Spoiler lifts, the remaining
/// pebbles pass the initial-color check and some bijection keeps every
/// placement inside `W`. A bijection exists iff the bipartite graph of good
/// placements has a perfect matching.
pub fn game_solve(g: &CayleyGroup, h: &CayleyGroup, pebble_pairs: usize, version: Version, max_states: u64) -> Result<Winner> {
    if version == Version::III {
        return Err(param("the game solver covers Versions I and II"));
    }
    if pebble_pairs < 1 {
        return Err(param("need at least one pebble pair"));
    }
    let n = g.order();
    if n != h.order() {
        return Ok(Winner::Spoiler);
    }
    let base = 1 + (n * n) as u64;
    let states = base
        .checked_pow(pebble_pairs as u32)
        .filter(|&s| s <= max_states)
        .ok_or_else(|| Error::Budget(format!("{base}^{pebble_pairs} game positions exceed {max_states}")))?
        as usize;
    let base = base as usize;
    let decode = |mut s: usize| -> GameConfig {
        let slots = (0..pebble_pairs)
            .map(|_| {
                let v = s % base;
                s /= base;
                (v != 0).then(|| (((v - 1) / n) as u32, ((v - 1) % n) as u32))
            })
            .collect();
        GameConfig { slots }
    };
    let mut cg = Certifier::new(n);
    let mut ch = Certifier::new(n);
    let ok: Vec<bool> = (0..states)
        .map(|s| {
            let cfg = decode(s);
            match version {
                Version::I => {
                    let left: Vec<Option<u32>> = cfg.slots.iter().map(|p| p.map(|x| x.0)).collect();
                    let right: Vec<Option<u32>> = cfg.slots.iter().map(|p| p.map(|x| x.1)).collect();
                    v1_partial(g, &left) == v1_partial(h, &right)
                }
                _ => {
                    let left: Vec<u32> = cfg.slots.iter().flatten().map(|x| x.0).collect();
                    let right: Vec<u32> = cfg.slots.iter().flatten().map(|x| x.1).collect();
                    cg.certify(g, &left) == ch.certify(h, &right)
                }
            }
        })
        .collect();
    let powers: Vec<usize> = (0..pebble_pairs).map(|i| base.pow(i as u32)).collect();
    let mut alive = vec![true; states];
    let mut adj = vec![false; n * n];
    loop {
        let mut changed = false;
        for s in 0..states {
            if !alive[s] {
                continue;
            }
            let survives = (0..pebble_pairs).all(|i| {
                let lifted = s - (s / powers[i] % base) * powers[i];
                if !ok[lifted] {
                    return false;
                }
                for x in 0..n {
                    for y in 0..n {
                        adj[x * n + y] = alive[lifted + (1 + x * n + y) * powers[i]];
                    }
                }
                has_perfect_matching(n, &adj)
            });
            if !survives {
                alive[s] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(if alive[0] { Winner::Duplicator } else { Winner::Spoiler })
}

/// Kuhn's augmenting paths on an `n x n` adjacency matrix.
fn has_perfect_matching(n: usize, adj: &[bool]) -> bool {
    fn augment(x: usize, n: usize, adj: &[bool], seen: &mut [bool], mate: &mut [usize]) -> bool {
        for y in 0..n {
            if adj[x * n + y] && !seen[y] {
                seen[y] = true;
                if mate[y] == usize::MAX || augment(mate[y], n, adj, seen, mate) {
                    mate[y] = x;
                    return true;
                }
            }
        }
        false
    }
    let mut mate = vec![usize::MAX; n];
    (0..n).all(|x| augment(x, n, adj, &mut vec![false; n], &mut mate))
}

/// One refinement run inside a version comparison.
#[derive(Debug, Clone, Serialize)]
pub struct VersionRun {
    pub version: Version,
    pub k: usize,
    /// `None` when the run did not fit the budget.
    pub distinguished: Option<bool>,
    pub rounds: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VersionReport {
    pub runs: Vec<VersionRun>,
    pub violations: Vec<String>,
}

/// Runs Version I and II at `k` and Version III at `⌈k/2⌉ + 2`, and checks
/// that each version is at least as strong as the previous one.
pub fn compare_versions(g: &CayleyGroup, h: &CayleyGroup, k: usize, budget: &Budget) -> Result<VersionReport> {
    let mut runs = Vec::new();
    for (version, kk) in [(Version::I, k), (Version::II, k), (Version::III, k.div_ceil(2) + 2)] {
        let run = match wl_group(g, h, kk, version, budget) {
            Ok(v) => VersionRun { version, k: kk, distinguished: Some(v.distinguished()), rounds: Some(v.round()) },
            Err(Error::Budget(_)) => VersionRun { version, k: kk, distinguished: None, rounds: None },
            Err(e) => return Err(e),
        };
        runs.push(run);
    }
    let mut violations = Vec::new();
    for w in runs.windows(2) {
        if w[0].distinguished == Some(true) && w[1].distinguished == Some(false) {
            violations.push(format!(
                "version {} distinguishes at k={} but version {} does not at k={}",
                w[0].version, w[0].k, w[1].version, w[1].k
            ));
        }
    }
    Ok(VersionReport { runs, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2z2() -> CayleyGroup {
        let c2 = CayleyGroup::cyclic(2).unwrap();
        CayleyGroup::direct_product(&c2, &c2)
    }

    #[test]
    fn v1_certificate_examples() {
        let z4 = CayleyGroup::cyclic(4).unwrap();
        let e = init_color_v1(&z4, &[0, 0]).unwrap();
        // two defined flags, equal pair, then all 8 triples
        assert_eq!(e.0, vec![0x7ff]);
        assert!(init_color_v1(&z4, &[1]).is_err());
        let z3 = CayleyGroup::cyclic(3).unwrap();
        let c2 = CayleyGroup::cyclic(2).unwrap();
        let z6 = CayleyGroup::direct_product(&z3, &c2);
        // (g, g^-1) with g of order 3 vs (h, h) with h of order 2
        let g = 2; // (1, 0)
        assert_ne!(init_color_v1(&z6, &[g, z6.inv(g)]).unwrap(), init_color_v1(&z6, &[1, 1]).unwrap());
        let v = z2z2();
        for a in 1..4 {
            for b in 1..4 {
                assert_ne!(init_color_v1(&z4, &[1, 2]).unwrap(), init_color_v1(&v, &[a, b]).unwrap());
            }
        }
    }

    #[test]
    fn gamma_graph_shape() {
        let g = CayleyGroup::dihedral(3).unwrap();
        let gg = gamma_graph(&g, 1 << 20).unwrap();
        assert_eq!(gg.vertex_count(), 6 + 4 * 36);
        for v in 0..6 {
            assert_eq!(gg.degree(v), 18);
        }
        for v in 6..gg.vertex_count() {
            assert!((2..=3).contains(&gg.degree(v)));
        }
        assert!(gamma_graph(&g, 100).is_err());
    }

    #[test]
    fn refinement_examples() {
        let b = Budget::default();
        let z4 = CayleyGroup::cyclic(4).unwrap();
        for version in [Version::I, Version::II, Version::III] {
            assert!(!wl_group(&z4, &z4, 2, version, &b).unwrap().distinguished());
        }
        assert!(wl_group(&z4, &z2z2(), 2, Version::I, &b).unwrap().distinguished());
        let d4 = CayleyGroup::dihedral(4).unwrap();
        let q8 = CayleyGroup::quaternion8();
        assert!(wl_group(&d4, &q8, 2, Version::I, &b).unwrap().distinguished());
        assert!(wl_group(&z4, &z4, 1, Version::I, &b).is_err());
        let z6 = CayleyGroup::cyclic(6).unwrap();
        let v = wl_group(&z4, &z6, 2, Version::II, &b).unwrap();
        assert!(v.distinguished() && v.round() == 0);
    }

    #[test]
    fn relabeled_groups_are_not_distinguished() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let g = CayleyGroup::dihedral(4).unwrap();
        let mut perm: Vec<usize> = (0..8).collect();
        perm.shuffle(&mut rng);
        let h = g.relabel(&perm).unwrap();
        for version in [Version::I, Version::II, Version::III] {
            assert!(!wl_group(&g, &h, 2, version, &Budget::default()).unwrap().distinguished());
        }
    }

    #[test]
    fn game_examples() {
        let z4 = CayleyGroup::cyclic(4).unwrap();
        assert_eq!(game_solve(&z4, &z4, 3, Version::I, 1 << 20).unwrap(), Winner::Duplicator);
        assert_eq!(game_solve(&z4, &z2z2(), 3, Version::I, 1 << 20).unwrap(), Winner::Spoiler);
        let z6 = CayleyGroup::cyclic(6).unwrap();
        let s3 = CayleyGroup::dihedral(3).unwrap();
        assert_eq!(game_solve(&z6, &s3, 3, Version::II, 1 << 20).unwrap(), Winner::Spoiler);
        assert!(game_solve(&z6, &s3, 4, Version::II, 1000).is_err());
    }

    #[test]
    fn matching() {
        assert!(has_perfect_matching(2, &[true, true, true, false]));
        assert!(!has_perfect_matching(2, &[true, false, true, false]));
    }

    #[test]
    fn versions_are_ordered() {
        let z4 = CayleyGroup::cyclic(4).unwrap();
        let r = compare_versions(&z4, &z2z2(), 2, &Budget::default()).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.runs.iter().all(|run| run.distinguished == Some(true)));
    }
}
