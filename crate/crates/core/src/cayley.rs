//! Finite groups given by explicit multiplication tables.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::fpalgebra::is_prime;
use crate::graphs::IsoOutcome;

/// Groups up to this order get the full O(n³) associativity check when
/// built from trusted symbolic data.
pub const TRUSTED_ASSOC_CHECK_LIMIT: usize = 729;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyGroup {
    order: usize,
    table: Vec<u32>,
    identity: u32,
    inverse: Vec<u32>,
}

impl CayleyGroup {
    /// Validates a multiplication table: range, identity, inverses, associativity.
    pub fn from_table(grid: &[Vec<usize>]) -> Result<Self> {
        let n = grid.len();
        if n == 0 {
            return Err(Error::Validation("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for row in grid {
            if row.len() != n {
                return Err(Error::Dimension(format!("row of length {} in a {n}x{n} table", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::OutOfRange { index: x, size: n });
                }
                table.push(x as u32);
            }
        }
        Self::build(n, table, true)
    }

    /// Table from trusted data; identity and inverses are still derived and checked.
    pub(crate) fn from_flat(n: usize, table: Vec<u32>) -> Result<Self> {
        Self::build(n, table, false)
    }

    fn build(n: usize, table: Vec<u32>, check_assoc: bool) -> Result<Self> {
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] as usize == x && table[x * n + e] as usize == x))
            .ok_or_else(|| Error::Validation("no identity element".into()))? as u32;
        if check_assoc {
            associativity_witness(n, &table)?;
        }
        let mut inverse = vec![u32::MAX; n];
        for x in 0..n {
            let row = &table[x * n..x * n + n];
            let y = row
                .iter()
                .position(|&z| z == identity)
                .ok_or_else(|| Error::Validation(format!("element {x} has no inverse")))?;
            if table[y * n + x] != identity {
                return Err(Error::Validation(format!("element {x} has no two-sided inverse")));
            }
            inverse[x] = y as u32;
        }
        Ok(Self { order: n, table, identity, inverse })
    }

    pub fn check_associative(&self) -> Result<()> {
        associativity_witness(self.order, &self.table)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(param("cyclic group needs n >= 1"));
        }
        let table = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
        Self::from_flat(n, table)
    }

    /// Pairs `(g, h)` indexed `g * |H| + h`.
    pub fn direct_product(g: &Self, h: &Self) -> Self {
        let (m, k) = (g.order, h.order);
        let n = m * k;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let a = g.mul((x / k) as u32, (y / k) as u32) as usize;
                let b = h.mul((x % k) as u32, (y % k) as u32) as usize;
                table.push((a * k + b) as u32);
            }
        }
        Self::from_flat(n, table).unwrap()
    }

    /// Symmetries of the regular n-gon, `r^i s^j` indexed `i + n j`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(param("dihedral group needs n >= 1"));
        }
        let m = 2 * n;
        let mut table = Vec::with_capacity(m * m);
        for x in 0..m {
            for y in 0..m {
                let (a, b) = (x % n, x / n);
                let (c, d) = (y % n, y / n);
                let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
                table.push((rot + n * ((b + d) % 2)) as u32);
            }
        }
        Self::from_flat(m, table)
    }

    /// Elements `±1, ±i, ±j, ±k` as indices `0..8` (sign in the low bit).
    pub fn quaternion8() -> Self {
        // unit products: [row][col] -> (unit, negative)
        const T: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let mut table = Vec::with_capacity(64);
        for x in 0..8 {
            for y in 0..8 {
                let (u, neg) = T[x / 2][y / 2];
                let sign = (x % 2) ^ (y % 2) ^ neg as usize;
                table.push((2 * u + sign) as u32);
            }
        }
        Self::from_flat(8, table).unwrap()
    }

    /// Upper unitriangular 3x3 matrices over F_p, `(a, b, c)` indexed `a p² + b p + c`.
    pub fn heisenberg(p: usize) -> Result<Self> {
        if p == 2 || !is_prime(p as u64) {
            return Err(param(format!("{p} is not an odd prime")));
        }
        let n = p * p * p;
        let dec = |x: usize| (x / (p * p), x / p % p, x % p);
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            let (a, b, c) = dec(x);
            for y in 0..n {
                let (a2, b2, c2) = dec(y);
                let z = ((a + a2) % p) * p * p + ((b + b2) % p) * p + (c + c2 + a * b2) % p;
                table.push(z as u32);
            }
        }
        Self::from_flat(n, table)
    }

    /// The group transported along the bijection `x -> perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        crate::graphs::check_permutation(perm, self.order)?;
        let n = self.order;
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                table[perm[x] * n + perm[y]] = perm[self.mul(x as u32, y as u32) as usize] as u32;
            }
        }
        Self::from_flat(n, table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.iter().map(|&x| x as usize).collect()).collect()
    }

    fn check(&self, x: u32) -> Result<()> {
        if x as usize >= self.order {
            return Err(Error::OutOfRange { index: x as usize, size: self.order });
        }
        Ok(())
    }

    pub fn element_order(&self, x: u32) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        self.elements().map(|x| self.element_order(x)).fold(1, |l, o| l / gcd(l, o) * o)
    }

    pub fn commutes(&self, a: u32, b: u32) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn centralizer(&self, x: u32) -> Result<Vec<u32>> {
        self.check(x)?;
        Ok(self.elements().filter(|&y| self.commutes(x, y)).collect())
    }

    pub fn centralizer_size(&self, x: u32) -> usize {
        self.elements().filter(|&y| self.commutes(x, y)).count()
    }

    pub fn center(&self) -> Vec<u32> {
        self.elements().filter(|&x| self.elements().all(|y| self.commutes(x, y))).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.center().len() == self.order
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn subgroup_closure(&self, gens: &[u32]) -> Result<Vec<u32>> {
        for &g in gens {
            self.check(g)?;
        }
        Ok(self.closure_unchecked(gens))
    }

    fn closure_unchecked(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order];
        seen[self.identity as usize] = true;
        let mut out = vec![self.identity];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !std::mem::replace(&mut seen[y as usize], true) {
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Smallest subgroup containing all `[a, b]` with `a ∈ xs`, `b ∈ ys`.
    fn commutator_subgroup(&self, xs: &[u32], ys: &[u32]) -> Vec<u32> {
        let mut comms: Vec<u32> = xs.iter().flat_map(|&a| ys.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.commutator(a, b))
            .collect();
        comms.sort_unstable();
        comms.dedup();
        self.closure_unchecked(&comms)
    }

    pub fn derived_subgroup(&self) -> Vec<u32> {
        let all: Vec<u32> = self.elements().collect();
        self.commutator_subgroup(&all, &all)
    }

    /// Sorted conjugacy class sizes.
    pub fn conjugacy_class_sizes(&self) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        let mut sizes = Vec::new();
        for x in self.elements() {
            if seen[x as usize] {
                continue;
            }
            let mut size = 0;
            for g in self.elements() {
                let y = self.mul(self.mul(g, x), self.inv(g));
                if !std::mem::replace(&mut seen[y as usize], true) {
                    size += 1;
                }
            }
            sizes.push(size);
        }
        sizes.sort_unstable();
        sizes
    }

    /// Length of the lower central series, `None` if it stalls above the trivial group.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let all: Vec<u32> = self.elements().collect();
        let mut gamma = all.clone();
        let mut c = 0;
        while gamma.len() > 1 {
            let next = self.commutator_subgroup(&all, &gamma);
            if next.len() == gamma.len() {
                return None;
            }
            gamma = next;
            c += 1;
        }
        Some(c)
    }

    pub fn invariants(&self) -> GroupInvariants {
        GroupInvariants {
            order: self.order,
            exponent: self.exponent(),
            class: self.nilpotency_class(),
            center_size: self.center().len(),
            conj_class_sizes: self.conjugacy_class_sizes(),
        }
    }

    /// Marked-isomorphism certificate of `tuple`.
    pub fn marked_certificate(&self, tuple: &[u32]) -> Result<MarkedCertificate> {
        for &g in tuple {
            self.check(g)?;
        }
        Ok(Certifier::new(self.order).certify(self, tuple))
    }

    /// Multiset of isomorphism types of subgroups generated by at most `k` elements.
    pub fn profile(&self, k: usize, max_tuples: u64) -> Result<Profile> {
        let n = self.order as u64;
        let count = n.checked_pow(k as u32).filter(|&c| c <= max_tuples).ok_or_else(|| {
            Error::Budget(format!("{n}^{k} tuples exceed the budget of {max_tuples}"))
        })?;
        let mut subgroups: HashSet<Vec<u32>> = HashSet::new();
        let mut tuple = vec![0u32; k];
        for code in 0..count {
            let mut c = code;
            for t in tuple.iter_mut() {
                *t = (c % n) as u32;
                c /= n;
            }
            subgroups.insert(self.closure_unchecked(&tuple));
        }
        let mut certifier = Certifier::new(self.order);
        let mut types: BTreeMap<MarkedCertificate, usize> = BTreeMap::new();
        let mut sorted: Vec<Vec<u32>> = subgroups.into_iter().collect();
        sorted.sort();
        for s in sorted {
            *types.entry(self.unmarked_certificate(&s, &mut certifier)).or_default() += 1;
        }
        Ok(Profile { k, types })
    }

    /// Minimum marked certificate over generating tuples of minimal length.
    fn unmarked_certificate(&self, sub: &[u32], certifier: &mut Certifier) -> MarkedCertificate {
        let s = sub.len();
        for d in 0.. {
            let mut best: Option<MarkedCertificate> = None;
            let mut tuple = vec![0u32; d];
            for code in 0..s.pow(d as u32) {
                let mut c = code;
                for t in tuple.iter_mut() {
                    *t = sub[c % s];
                    c /= s;
                }
                if self.closure_unchecked(&tuple).len() != s {
                    continue;
                }
                let cert = certifier.certify(self, &tuple);
                if best.as_ref().is_none_or(|b| cert < *b) {
                    best = Some(cert);
                }
            }
            if let Some(b) = best {
                return b;
            }
        }
        unreachable!()
    }

    /// Greedy small generating tuple: repeatedly add the element that enlarges
    /// the generated subgroup most, then prune.
    pub fn greedy_generators(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut current = self.closure_unchecked(&gens);
        while current.len() < self.order {
            let mut best = (0, 0u32);
            for x in self.elements() {
                if current.binary_search(&x).is_ok() {
                    continue;
                }
                gens.push(x);
                let size = self.closure_unchecked(&gens).len();
                gens.pop();
                if size > best.0 {
                    best = (size, x);
                }
            }
            gens.push(best.1);
            current = self.closure_unchecked(&gens);
        }
        // Drop redundant generators; for p-groups an irredundant generating
        // set has the minimum size.
        let mut i = 0;
        while i < gens.len() {
            let x = gens.remove(i);
            if self.closure_unchecked(&gens).len() == self.order {
                continue;
            }
            gens.insert(i, x);
            i += 1;
        }
        gens
    }

    /// True iff `phi` is a bijective homomorphism `self -> other`.
    pub fn is_isomorphism(&self, other: &Self, phi: &[u32]) -> bool {
        if self.order != other.order || phi.len() != self.order {
            return false;
        }
        let perm: Vec<usize> = phi.iter().map(|&x| x as usize).collect();
        crate::graphs::check_permutation(&perm, self.order).is_ok()
            && self.elements().all(|a| {
                self.elements().all(|b| phi[self.mul(a, b) as usize] == other.mul(phi[a as usize], phi[b as usize]))
            })
    }
}

fn associativity_witness(n: usize, table: &[u32]) -> Result<()> {
    let mul = |a: usize, b: usize| table[a * n + b] as usize;
    for a in 0..n {
        for b in 0..n {
            let ab = mul(a, b);
            for c in 0..n {
                if mul(ab, c) != mul(a, mul(b, c)) {
                    return Err(Error::Validation(format!("not associative: ({a}, {b}, {c})")));
                }
            }
        }
    }
    Ok(())
}

/// Report of the classical invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupInvariants {
    pub order: usize,
    pub exponent: usize,
    /// `None` when not nilpotent.
    pub class: Option<usize>,
    pub center_size: usize,
    pub conj_class_sizes: Vec<usize>,
}

/// Canonical description of `(⟨g_1..g_k⟩, g_1..g_k)` up to marked isomorphism.
///
/// Elements are numbered in discovery order: identity, the generators, then
/// breadth first by left multiplication with the generators. `action[i*k+j]`
/// is the number of `g_j · x_i`. Left multiplication by the generators
/// determines the whole group, so two tuples agree iff `g_i ↦ h_i` extends to
/// an isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MarkedCertificate {
    pub k: usize,
    pub generator_positions: Vec<u32>,
    pub action: Vec<u32>,
}

impl MarkedCertificate {
    pub fn subgroup_order(&self) -> usize {
        if self.k == 0 { 1 } else { self.action.len() / self.k }
    }

    /// Full multiplication table of the generated subgroup in discovery order.
    pub fn canonical_table(&self) -> Vec<Vec<u32>> {
        let (m, k) = (self.subgroup_order(), self.k);
        // Write every element as a word; x_i = g_{j} x_{parent}.
        let mut word: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut known = vec![false; m];
        known[0] = true;
        for i in 0..m {
            for j in 0..k {
                let y = self.action[i * k + j] as usize;
                if !known[y] {
                    known[y] = true;
                    let mut w = vec![j];
                    w.extend(&word[i]);
                    word[y] = w;
                }
            }
        }
        (0..m)
            .map(|a| {
                (0..m)
                    .map(|b| {
                        // x_a x_b = w_a(g) x_b, apply the letters right to left.
                        word[a].iter().rev().fold(b as u32, |x, &j| self.action[x as usize * k + j])
                    })
                    .collect()
            })
            .collect()
    }
}

/// Reusable scratch space for certificates.
pub(crate) struct Certifier {
    stamp: Vec<u32>,
    pos: Vec<u32>,
    generation: u32,
    order: Vec<u32>,
}

impl Certifier {
    pub fn new(n: usize) -> Self {
        Self { stamp: vec![0; n], pos: vec![0; n], generation: 0, order: Vec::with_capacity(n) }
    }

    fn discover(&mut self, x: u32) -> u32 {
        let xi = x as usize;
        if self.stamp[xi] != self.generation {
            self.stamp[xi] = self.generation;
            self.pos[xi] = self.order.len() as u32;
            self.order.push(x);
        }
        self.pos[xi]
    }

    pub fn certify(&mut self, g: &CayleyGroup, tuple: &[u32]) -> MarkedCertificate {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.fill(0);
            self.generation = 1;
        }
        self.order.clear();
        self.discover(g.identity());
        let generator_positions = tuple.iter().map(|&t| self.discover(t)).collect();
        let k = tuple.len();
        let mut action = Vec::new();
        let mut i = 0;
        while i < self.order.len() {
            let x = self.order[i];
            for &t in tuple {
                let y = g.mul(t, x);
                action.push(self.discover(y));
            }
            i += 1;
        }
        MarkedCertificate { k, generator_positions, action }
    }

    /// The elements of the last certified subgroup in discovery order.
    pub fn discovered(&self) -> &[u32] {
        &self.order
    }
}

/// Multiset of subgroup isomorphism types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub k: usize,
    pub types: BTreeMap<MarkedCertificate, usize>,
}

impl Profile {
    pub fn subgroup_count(&self) -> usize {
        self.types.values().sum()
    }

    /// Sorted `(subgroup order, multiplicity)` summary per isomorphism type.
    pub fn summary(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self.types.iter().map(|(c, &m)| (c.subgroup_order(), m)).collect();
        v.sort_unstable();
        v
    }
}

pub const DEFAULT_GROUP_ISO_BUDGET: u64 = 5_000_000;

/// Backtracking isomorphism search.
pub fn iso_oracle(g: &CayleyGroup, h: &CayleyGroup, budget: u64) -> IsoOutcome<Vec<u32>> {
    let n = g.order();
    if n != h.order() {
        return IsoOutcome::NonIsomorphic;
    }
    let profile = |x: &CayleyGroup| -> Vec<(usize, usize)> {
        x.elements().map(|e| (x.element_order(e), x.centralizer_size(e))).collect()
    };
    let (pg, ph) = (profile(g), profile(h));
    let census = |p: &[(usize, usize)]| {
        let mut c = p.to_vec();
        c.sort_unstable();
        c
    };
    if census(&pg) != census(&ph) {
        return IsoOutcome::NonIsomorphic;
    }
    let gens = g.greedy_generators();
    let target = Certifier::new(n).certify(g, &gens);
    let mut images = Vec::with_capacity(gens.len());
    let mut cg = Certifier::new(n);
    let mut ch = Certifier::new(n);
    let mut nodes = 0u64;

    fn rec(
        ctx: (&CayleyGroup, &CayleyGroup, &[u32], &[(usize, usize)], &[(usize, usize)]),
        images: &mut Vec<u32>,
        cg: &mut Certifier,
        ch: &mut Certifier,
        nodes: &mut u64,
        budget: u64,
    ) -> Option<bool> {
        let (g, h, gens, pg, ph) = ctx;
        *nodes += 1;
        if *nodes > budget {
            return None;
        }
        let i = images.len();
        if i == gens.len() {
            return Some(true);
        }
        let want = pg[gens[i] as usize];
        for y in h.elements() {
            if ph[y as usize] != want {
                continue;
            }
            images.push(y);
            let ok = cg.certify(g, &gens[..=i]) == ch.certify(h, images);
            if ok && rec(ctx, images, cg, ch, nodes, budget)? {
                return Some(true);
            }
            images.pop();
        }
        Some(false)
    }

    match rec((g, h, &gens, &pg, &ph), &mut images, &mut cg, &mut ch, &mut nodes, budget) {
        None => IsoOutcome::Budget,
        Some(false) => IsoOutcome::NonIsomorphic,
        Some(true) => {
            // Equal certificates: discovery orders correspond elementwise.
            debug_assert_eq!(ch.certify(h, &images), target);
            let to: Vec<u32> = ch.discovered().to_vec();
            cg.certify(g, &gens);
            let from = cg.discovered();
            let mut phi = vec![0u32; n];
            for (a, b) in from.iter().zip(&to) {
                phi[*a as usize] = *b;
            }
            assert!(g.is_isomorphism(h, &phi), "certificate correspondence is not multiplicative");
            IsoOutcome::Isomorphic(phi)
        }
    }
}

/// Group table text format: `n`, then `n` rows of `n` indices; element 0 is the identity.
pub fn parse_table(text: &str) -> Result<CayleyGroup> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (ln, first) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let n: usize = first.parse().map_err(|_| Error::Parse { line: ln, msg: format!("bad order `{first}`") })?;
    let mut grid = Vec::with_capacity(n);
    for (ln, line) in lines {
        let row: std::result::Result<Vec<usize>, _> = line.split_whitespace().map(str::parse).collect();
        let row = row.map_err(|_| Error::Parse { line: ln, msg: "bad table entry".into() })?;
        if row.len() != n {
            return Err(Error::Parse { line: ln, msg: format!("expected {n} entries, found {}", row.len()) });
        }
        grid.push(row);
    }
    if grid.len() != n {
        return Err(Error::Parse { line: ln, msg: format!("expected {n} rows, found {}", grid.len()) });
    }
    let g = CayleyGroup::from_table(&grid)?;
    if g.identity() != 0 {
        return Err(Error::Validation("element 0 must be the identity".into()));
    }
    Ok(g)
}

pub fn write_table(g: &CayleyGroup) -> String {
    let mut out = format!("{}\n", g.order());
    for row in g.table.chunks(g.order()) {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

/// Number of elements of each order.
pub fn order_census(g: &CayleyGroup) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for x in g.elements() {
        *m.entry(g.element_order(x)).or_default() += 1;
    }
    m
}

/// Explicit search for a marked isomorphism `⟨s⟩ -> ⟨t⟩`, `s_i ↦ t_i`, by
/// extending along words. Independent of the certificate machinery.
pub fn marked_iso_search(g: &CayleyGroup, s: &[u32], t: &[u32]) -> bool {
    if s.len() != t.len() {
        return false;
    }
    let mut map: HashMap<u32, u32> = HashMap::from([(g.identity(), g.identity())]);
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        let y = map[&x];
        for (&a, &b) in s.iter().zip(t) {
            let (xa, yb) = (g.mul(x, a), g.mul(y, b));
            match map.get(&xa) {
                Some(&z) if z != yb => return false,
                Some(_) => {}
                None => {
                    map.insert(xa, yb);
                    queue.push_back(xa);
                }
            }
        }
    }
    let mut image: Vec<u32> = map.values().copied().collect();
    image.sort_unstable();
    image.dedup();
    image.len() == map.len() && g.closure_unchecked(t).len() == map.len()
}

/// Named groups of order at most `max_order` built from the constructors:
/// cyclic groups, abelian products, dihedral groups (`D2n` has order `2n`),
/// `Q8` and two products of order 16. No two entries are isomorphic.
pub fn corpus(max_order: usize) -> Vec<(String, CayleyGroup)> {
    let z = |n| CayleyGroup::cyclic(n).unwrap();
    let x = CayleyGroup::direct_product;
    let mut out: Vec<(String, CayleyGroup)> = (1..=max_order).map(|n| (format!("Z{n}"), z(n))).collect();
    let v4 = x(&z(2), &z(2));
    let d8 = CayleyGroup::dihedral(4).unwrap();
    let q8 = CayleyGroup::quaternion8();
    let extra = [
        ("Z2xZ2", v4.clone()),
        ("Z2xZ4", x(&z(2), &z(4))),
        ("Z2xZ2xZ2", x(&v4, &z(2))),
        ("Z3xZ3", x(&z(3), &z(3))),
        ("Z2xZ6", x(&z(2), &z(6))),
        ("Z2xZ8", x(&z(2), &z(8))),
        ("Z4xZ4", x(&z(4), &z(4))),
        ("Z2xZ2xZ4", x(&v4, &z(4))),
        ("Z2^4", x(&v4, &v4)),
        ("Q8", q8.clone()),
        ("Q8xZ2", x(&q8, &z(2))),
        ("D8xZ2", x(&d8, &z(2))),
    ];
    out.extend(extra.into_iter().filter(|(_, g)| g.order() <= max_order).map(|(s, g)| (s.to_string(), g)));
    out.extend((3..=max_order / 2).map(|n| (format!("D{}", 2 * n), CayleyGroup::dihedral(n).unwrap())));
    out.sort_by_key(|(_, g)| g.order());
    out
}
