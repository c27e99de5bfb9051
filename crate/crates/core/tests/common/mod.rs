//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the algorithms it is used to check.
#![allow(dead_code)]

use std::collections::BTreeSet;

use groupwl_core::graphs::Graph;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Every labeled graph on `n` vertices, indexed by its edge bitmask.
pub fn labeled_graphs(n: usize) -> Vec<Graph> {
    let pairs = all_pairs(n);
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e);
            Graph::from_edges(n, edges).unwrap()
        })
        .collect()
}

/// Smallest edge bitmask over all relabelings.
pub fn canonical_mask(g: &Graph, perms: &[Vec<usize>]) -> u64 {
    let n = g.vertex_count();
    let pairs = all_pairs(n);
    perms
        .iter()
        .map(|p| {
            pairs
                .iter()
                .enumerate()
                .filter(|(_, &(i, j))| g.has_edge(p[i], p[j]))
                .fold(0u64, |m, (b, _)| m | 1 << b)
        })
        .min()
        .unwrap()
}

/// One representative per isomorphism class, smallest mask first.
pub fn graph_classes(n: usize) -> Vec<Graph> {
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    labeled_graphs(n).into_iter().filter(|g| seen.insert(canonical_mask(g, &perms))).collect()
}

/// Normal form of `x * y` in the Mekler group of `graph` by collecting the
/// word: generator letters are bubble-sorted, and each swap `v_b v_a -> v_a v_b`
/// (`a < b`) contributes `[v_a, v_b]^-1` when `a, b` are non-adjacent. An
/// element is `(generator exponents, commutator exponents)`, the latter over
/// the non-edges in lexicographic order.
pub fn collect_product(graph: &Graph, p: u32, x: (&[u32], &[u32]), y: (&[u32], &[u32])) -> (Vec<u32>, Vec<u32>) {
    let n = graph.vertex_count();
    let non_edges: Vec<(usize, usize)> = all_pairs(n).into_iter().filter(|&(i, j)| !graph.has_edge(i, j)).collect();
    let mut central: Vec<i64> = x.1.iter().zip(y.1).map(|(&a, &b)| a as i64 + b as i64).collect();
    let mut word = Vec::new();
    for gens in [x.0, y.0] {
        for (v, &e) in gens.iter().enumerate() {
            word.extend(std::iter::repeat(v).take(e as usize));
        }
    }
    let mut sorted = false;
    while !sorted {
        sorted = true;
        for t in 0..word.len().saturating_sub(1) {
            let (b, a) = (word[t], word[t + 1]);
            if b > a {
                word.swap(t, t + 1);
                if let Some(s) = non_edges.iter().position(|&e| e == (a, b)) {
                    central[s] -= 1;
                }
                sorted = false;
            }
        }
    }
    let mut gens = vec![0u32; n];
    for v in word {
        gens[v] = (gens[v] + 1) % p;
    }
    let comm = central.iter().map(|&c| c.rem_euclid(p as i64) as u32).collect();
    (gens, comm)
}

/// Rank over `F_p` by plain row reduction.
pub fn naive_rank(rows: &[Vec<i64>], p: i64) -> usize {
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, r);
        let inv = (1..p).find(|&i| i * m[rank][c] % p == 1).unwrap();
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c] * inv % p;
                for j in 0..cols {
                    m[r][j] = (m[r][j] - f * m[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// All 2x2 minors, rows and columns by lexicographic index pairs.
pub fn naive_wedge(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let cols = rows[0].len();
    let rp = all_pairs(rows.len());
    let cp = all_pairs(cols);
    rp.iter()
        .map(|&(i, j)| cp.iter().map(|&(k, l)| rows[i][k] * rows[j][l] - rows[i][l] * rows[j][k]).collect())
        .collect()
}
