//! The refinement engine shared by graph and group WL.
//!
//! Colors of all structures under comparison live in one name space: every
//! round computes a certificate per tuple, the distinct certificates of all
//! structures are sorted together and renamed to dense ids. Work is split in
//! fixed-size chunks and merged by content, so the result does not depend on
//! the number of threads.

use std::collections::HashMap;
use std::hash::Hash;

use rayon::prelude::*;
use serde::Serialize;

use super::Graph;
use crate::error::{Error, Result};

const CHUNK: usize = 1 << 14;

/// splitmix64 finalizer.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub(crate) struct TupleSpace {
    pub n: usize,
    pub k: usize,
    pub len: usize,
    /// `strides[i] = n^(k-1-i)`: position 0 is the most significant digit.
    pub strides: Vec<usize>,
}

impl TupleSpace {
    pub fn new(n: usize, k: usize, max_tuples: u64) -> Result<Self> {
        let len = (n as u64)
            .checked_pow(k as u32)
            .filter(|&l| l <= max_tuples && l <= usize::MAX as u64)
            .ok_or_else(|| {
                Error::Budget(format!("{n}^{k} tuples exceed the budget of {max_tuples}"))
            })? as usize;
        let strides = (0..k).map(|i| n.pow((k - 1 - i) as u32)).collect();
        Ok(Self { n, k, len, strides })
    }

    #[inline]
    pub fn decode(&self, mut idx: usize, out: &mut [usize]) {
        for i in (0..self.k).rev() {
            out[i] = idx % self.n;
            idx /= self.n;
        }
    }

    #[inline]
    pub fn encode(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &d| acc * self.n + d)
    }
}

/// Which tuples enter the color histograms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Domain {
    All,
    /// Only tuples whose entries are all `< m`.
    Prefix(usize),
}

/// Final result of a joint refinement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Per structure: sorted `(color, multiplicity)` pairs of the last coloring compared.
    pub histograms: Vec<Vec<(u32, u64)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    /// The histograms of coloring number `round` differ.
    Distinguished { round: usize },
    /// Coloring number `round` is stable and its histograms agree.
    StableEqual { round: usize },
}

impl Verdict {
    pub fn distinguished(&self) -> bool {
        matches!(self.outcome, Outcome::Distinguished { .. })
    }

    pub fn round(&self) -> usize {
        match self.outcome {
            Outcome::Distinguished { round } | Outcome::StableEqual { round } => round,
        }
    }

    pub(crate) fn size_mismatch(sizes: &[u64]) -> Self {
        Verdict {
            outcome: Outcome::Distinguished { round: 0 },
            histograms: sizes.iter().map(|&s| vec![(0, s)]).collect(),
        }
    }
}

/// Computes `f(scratch, structure, tuple)` for every tuple of every structure
/// and replaces the keys by dense ids, ordered by key.
pub(crate) fn intern<K, S, I, F>(structures: usize, len: usize, init: I, f: F) -> (Vec<Vec<u32>>, usize)
where
    K: Ord + Hash + Send + Sync,
    S: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize, usize) -> K + Sync + Send,
{
    let mut outs = Vec::with_capacity(structures);
    let mut all_keys: Vec<Vec<Vec<K>>> = Vec::with_capacity(structures);
    for s in 0..structures {
        let mut out = vec![0u32; len];
        let keys: Vec<Vec<K>> = out
            .par_chunks_mut(CHUNK)
            .enumerate()
            .map_init(&init, |scratch, (ci, chunk)| {
                let mut map: HashMap<K, u32> = HashMap::new();
                for (off, slot) in chunk.iter_mut().enumerate() {
                    let key = f(scratch, s, ci * CHUNK + off);
                    let next = map.len() as u32;
                    *slot = *map.entry(key).or_insert(next);
                }
                let mut local: Vec<(K, u32)> = map.into_iter().collect();
                local.sort_unstable_by_key(|&(_, id)| id);
                local.into_iter().map(|(k, _)| k).collect()
            })
            .collect();
        outs.push(out);
        all_keys.push(keys);
    }
    let mut global: Vec<&K> = all_keys.iter().flatten().flatten().collect();
    global.par_sort_unstable();
    global.dedup();
    for (out, keys) in outs.iter_mut().zip(&all_keys) {
        let maps: Vec<Vec<u32>> = keys
            .par_iter()
            .map(|ks| ks.iter().map(|k| global.binary_search(&k).unwrap() as u32).collect())
            .collect();
        out.par_chunks_mut(CHUNK).zip(maps.par_iter()).for_each(|(chunk, m)| {
            for c in chunk {
                *c = m[*c as usize];
            }
        });
    }
    let count = global.len();
    (outs, count)
}

/// How one refinement round gathers the colors of a tuple's "neighbours".
pub(crate) enum Step<'a> {
    /// k = 1 on graphs: multiset of neighbour colors.
    Neighbors(Vec<&'a Graph>),
    /// k ≥ 2: multiset over `x` of the k-tuple of colors obtained by
    /// replacing each position by `x`.
    Replace,
}

pub(crate) struct Engine<'a> {
    pub space: TupleSpace,
    pub colors: Vec<Vec<u32>>,
    pub num_colors: usize,
    step: Step<'a>,
    domain: Domain,
}

impl<'a> Engine<'a> {
    pub fn new(space: TupleSpace, colors: Vec<Vec<u32>>, num_colors: usize, step: Step<'a>, domain: Domain) -> Self {
        Self { space, colors, num_colors, step, domain }
    }

    pub fn histogram(&self, s: usize) -> Vec<(u32, u64)> {
        let mut counts = vec![0u64; self.num_colors];
        let colors = &self.colors[s];
        match self.domain {
            Domain::All => colors.iter().for_each(|&c| counts[c as usize] += 1),
            Domain::Prefix(m) => {
                let sub = TupleSpace::new(m, self.space.k, u64::MAX).unwrap();
                let mut digits = vec![0; self.space.k];
                for idx in 0..sub.len {
                    sub.decode(idx, &mut digits);
                    counts[colors[self.space.encode(&digits)] as usize] += 1;
                }
            }
        }
        counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(i, c)| (i as u32, c))
            .collect()
    }

    /// One refinement round; returns whether the joint partition changed.
    pub fn refine(&mut self) -> Result<bool> {
        let before = self.num_colors;
        let (colors, count) = match &self.step {
            Step::Neighbors(graphs) => self.refine_neighbors(graphs),
            Step::Replace => self.refine_replace()?,
        };
        self.colors = colors;
        self.num_colors = count;
        Ok(count != before)
    }

    fn refine_neighbors(&self, graphs: &[&Graph]) -> (Vec<Vec<u32>>, usize) {
        let colors = &self.colors;
        intern(
            colors.len(),
            self.space.len,
            Vec::<u32>::new,
            |nb: &mut Vec<u32>, s, v| {
                nb.clear();
                nb.extend(graphs[s].neighbors(v).iter().map(|&w| colors[s][w]));
                nb.sort_unstable();
                let mut key = Vec::with_capacity(nb.len() + 1);
                key.push(colors[s][v]);
                key.extend_from_slice(nb);
                key
            },
        )
    }

    fn refine_replace(&self) -> Result<(Vec<Vec<u32>>, usize)> {
        let sp = &self.space;
        let (n, k) = (sp.n, sp.k);
        // transposed[s][i]: colors with position i moved to the last digit, so
        // that replacing position i reads a contiguous run.
        let transposed: Vec<Vec<Vec<u32>>> = self
            .colors
            .iter()
            .map(|col| (0..k - 1).map(|i| transpose(col, sp, i)).collect())
            .collect();
        let srcs: Vec<Vec<&[u32]>> = self
            .colors
            .iter()
            .zip(&transposed)
            .map(|(col, tr)| tr.iter().map(Vec::as_slice).chain([col.as_slice()]).collect())
            .collect();
        let colors = &self.colors;
        Ok(intern(colors.len(), sp.len, || vec![0usize; k], |offsets: &mut Vec<usize>, s, idx| {
            let src = &srcs[s];
            for i in 0..k {
                let stride = sp.strides[i];
                offsets[i] = (idx / (n * stride) * stride + idx % stride) * n;
            }
            // The multiset over x of (c_1, ..., c_k) is summarized by two
            // additive hashes of independently mixed tuple encodings.
            let (mut lo, mut hi) = (0u64, 0u64);
            for x in 0..n {
                let mut z = 0x9e37_79b9_7f4a_7c15u64;
                for i in 0..k {
                    z = mix(z ^ src[i][offsets[i] + x] as u64);
                }
                lo = lo.wrapping_add(z);
                hi = hi.wrapping_add(mix(z ^ 0xd6e8_feb8_6659_fd93));
            }
            (colors[s][idx], lo, hi)
        }))
    }

    /// Refines until the histograms differ or the joint partition is stable.
    pub fn run(mut self, max_rounds: Option<usize>) -> Result<Verdict> {
        let structures = self.colors.len();
        let mut round = 0;
        loop {
            let hists: Vec<_> = (0..structures).map(|s| self.histogram(s)).collect();
            if hists.windows(2).any(|w| w[0] != w[1]) {
                return Ok(Verdict { outcome: Outcome::Distinguished { round }, histograms: hists });
            }
            if max_rounds.is_some_and(|m| round >= m) {
                return Err(Error::Budget(format!("no decision within {round} rounds")));
            }
            if !self.refine()? {
                return Ok(Verdict { outcome: Outcome::StableEqual { round }, histograms: hists });
            }
            round += 1;
        }
    }
}

fn transpose(col: &[u32], sp: &TupleSpace, i: usize) -> Vec<u32> {
    let n = sp.n;
    let stride = sp.strides[i];
    let mut out = vec![0u32; sp.len];
    out.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, chunk)| {
        for (off, slot) in chunk.iter_mut().enumerate() {
            let d = ci * CHUNK + off;
            let (r, x) = (d / n, d % n);
            let (hi, lo) = (r / stride, r % stride);
            *slot = col[hi * n * stride + x * stride + lo];
        }
    });
    out
}
