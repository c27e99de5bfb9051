//! The class-2 exponent-p group `G_Γ` of a graph: generators `v_i` of order
//! `p`, `[v_i, v_j] = 1` exactly for edges, all commutators central.
//!
//! Elements are kept in the normal form `v_1^{d_1} … v_n^{d_n} · c`, where
//! `c` is a product of the standard commutators `[v_j, v_i]`, `j < i`, over
//! the non-edges in lexicographic order. The commutator convention is
//! `[g, h] = g h g⁻¹ h⁻¹`, so `h g = [h, g] g h`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::cayley::{CayleyGroup, TRUSTED_ASSOC_CHECK_LIMIT};
use crate::error::{Error, Result};
use crate::fpalgebra::{binom2, pair_index, pairs, FpMatrix, FpVector, Label, PrimeField};
use crate::graphs::Graph;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct MeklerGroup {
    graph: Graph,
    field: PrimeField,
    non_edges: Vec<(usize, usize)>,
    /// Pair index (lexicographic over all pairs) to non-edge index, or `NONE`.
    slot: Vec<u32>,
    universal: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeklerElement {
    pub gen_exp: FpVector,
    pub comm_exp: FpVector,
}

impl MeklerElement {
    pub fn is_identity(&self) -> bool {
        self.gen_exp.is_zero() && self.comm_exp.is_zero()
    }
}

impl MeklerGroup {
    pub fn new(graph: &Graph, p: u32) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let n = graph.vertex_count();
        let mut slot = vec![NONE; binom2(n)];
        let mut non_edges = Vec::new();
        for (i, j) in pairs(n) {
            if !graph.has_edge(i, j) {
                slot[pair_index(n, i, j)] = non_edges.len() as u32;
                non_edges.push((i, j));
            }
        }
        let universal = (0..n).filter(|&v| graph.degree(v) + 1 == n).collect();
        Ok(Self { graph: graph.clone(), field, non_edges, slot, universal })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn n(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn m(&self) -> usize {
        self.non_edges.len()
    }

    pub fn non_edges(&self) -> &[(usize, usize)] {
        &self.non_edges
    }

    /// Index of the standard commutator `[v_i, v_j]`, `i < j`, if it is a non-edge.
    pub fn commutator_slot(&self, i: usize, j: usize) -> Option<usize> {
        let s = self.slot[pair_index(self.n(), i, j)];
        (s != NONE).then_some(s as usize)
    }

    pub fn universal_vertices(&self) -> &[usize] {
        &self.universal
    }

    /// `log_p |G|`.
    pub fn log_order(&self) -> usize {
        self.n() + self.m()
    }

    pub fn identity(&self) -> MeklerElement {
        MeklerElement {
            gen_exp: FpVector::zeros(self.field, self.n()),
            comm_exp: FpVector::zeros(self.field, self.m()),
        }
    }

    pub fn generator(&self, i: usize) -> Result<MeklerElement> {
        if i >= self.n() {
            return Err(Error::OutOfRange { index: i, size: self.n() });
        }
        let mut x = self.identity();
        x.gen_exp.as_mut_slice()[i] = 1;
        Ok(x)
    }

    /// The central element `[v_i, v_j]` for a non-edge `i < j`.
    pub fn standard_commutator(&self, slot: usize) -> MeklerElement {
        let mut x = self.identity();
        x.comm_exp.as_mut_slice()[slot] = 1;
        x
    }

    pub fn element(&self, gen: &[i64], comm: &[i64]) -> Result<MeklerElement> {
        if gen.len() != self.n() || comm.len() != self.m() {
            return Err(Error::Dimension(format!(
                "element with {}+{} coordinates in a group with {}+{}",
                gen.len(),
                comm.len(),
                self.n(),
                self.m()
            )));
        }
        Ok(MeklerElement {
            gen_exp: FpVector::from_signed(self.field, gen),
            comm_exp: FpVector::from_signed(self.field, comm),
        })
    }

    pub fn check(&self, x: &MeklerElement) -> Result<()> {
        if x.gen_exp.len() != self.n() || x.comm_exp.len() != self.m() || x.gen_exp.field() != self.field {
            return Err(Error::Input("element belongs to a different group".into()));
        }
        Ok(())
    }

    /// Adds the reordering correction of `a · b` (generator parts) to `comm`.
    #[inline]
    fn correct(&self, a: &[u32], b: &[u32], comm: &mut [u32]) {
        let f = self.field;
        let n = a.len();
        for i in (1..n).filter(|&i| a[i] != 0) {
            for j in (0..i).filter(|&j| b[j] != 0) {
                let s = self.slot[pair_index(n, j, i)];
                if s != NONE {
                    let c = &mut comm[s as usize];
                    *c = f.sub(*c, f.mul(a[i], b[j]));
                }
            }
        }
    }

    pub fn mul(&self, x: &MeklerElement, y: &MeklerElement) -> Result<MeklerElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn mul_unchecked(&self, x: &MeklerElement, y: &MeklerElement) -> MeklerElement {
        let mut gen_exp = x.gen_exp.clone();
        gen_exp.add_assign(&y.gen_exp);
        let mut comm_exp = x.comm_exp.clone();
        comm_exp.add_assign(&y.comm_exp);
        self.correct(x.gen_exp.as_slice(), y.gen_exp.as_slice(), comm_exp.as_mut_slice());
        MeklerElement { gen_exp, comm_exp }
    }

    pub fn inv(&self, x: &MeklerElement) -> MeklerElement {
        let f = self.field;
        let gen_exp = x.gen_exp.scale(f.neg(1));
        // x · x⁻¹ = 1 forces c' = -c - correction(a, -a).
        let mut comm_exp = x.comm_exp.scale(f.neg(1));
        let mut corr = vec![0u32; self.m()];
        self.correct(x.gen_exp.as_slice(), gen_exp.as_slice(), &mut corr);
        for (c, d) in comm_exp.as_mut_slice().iter_mut().zip(corr) {
            *c = f.sub(*c, d);
        }
        MeklerElement { gen_exp, comm_exp }
    }

    pub fn pow(&self, x: &MeklerElement, e: i64) -> MeklerElement {
        let mut e = e.rem_euclid(self.p() as i64) as u64;
        let mut base = x.clone();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            base = self.mul_unchecked(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn commutator(&self, x: &MeklerElement, y: &MeklerElement) -> Result<MeklerElement> {
        let xy = self.mul(x, y)?;
        Ok(self.mul_unchecked(&xy, &self.mul_unchecked(&self.inv(x), &self.inv(y))))
    }

    /// Vertices with non-zero generator exponent.
    pub fn support(&self, x: &MeklerElement) -> Vec<usize> {
        x.gen_exp.as_slice().iter().enumerate().filter(|(_, &d)| d != 0).map(|(i, _)| i).collect()
    }

    /// `[x, y] = 1`, decided on generator parts alone.
    pub fn commutes(&self, x: &MeklerElement, y: &MeklerElement) -> bool {
        self.gens_commute(x.gen_exp.as_slice(), y.gen_exp.as_slice())
    }

    fn gens_commute(&self, a: &[u32], b: &[u32]) -> bool {
        let f = self.field;
        let n = a.len();
        let union: Vec<usize> = (0..n).filter(|&i| a[i] != 0 || b[i] != 0).collect();
        for (s, &k) in union.iter().enumerate() {
            for &l in &union[s + 1..] {
                if self.slot[pair_index(n, k, l)] != NONE && f.mul(a[k], b[l]) != f.mul(a[l], b[k]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_central(&self, x: &MeklerElement) -> bool {
        self.support(x).iter().all(|v| self.universal.contains(v))
    }

    /// Standard commutators, then one generator per universal vertex.
    pub fn center_basis(&self) -> Vec<MeklerElement> {
        let mut basis: Vec<MeklerElement> = (0..self.m()).map(|s| self.standard_commutator(s)).collect();
        basis.extend(self.universal.iter().map(|&v| self.generator(v).unwrap()));
        basis
    }

    /// Generator parts spanning `C(x)` modulo the derived subgroup: the
    /// restrictions of `x` to the non-singleton components of the complement
    /// of `Γ[supp x]`, and the vertices in the closed neighbourhood of every
    /// support vertex.
    fn centralizer_gens(&self, x: &MeklerElement) -> (Vec<Vec<usize>>, Vec<usize>) {
        let supp = self.support(x);
        let sub = self.graph.induced_subgraph(&supp).unwrap().complement();
        let comps: Vec<Vec<usize>> = sub
            .components()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| c.into_iter().map(|i| supp[i]).collect())
            .collect();
        let common: Vec<usize> = (0..self.n())
            .filter(|&v| supp.iter().all(|&w| w == v || self.graph.has_edge(v, w)))
            .collect();
        (comps, common)
    }

    /// An exact generating set of the centralizer `C(x)`.
    pub fn centralizer_basis(&self, x: &MeklerElement) -> Result<Vec<MeklerElement>> {
        self.check(x)?;
        let (comps, common) = self.centralizer_gens(x);
        let mut basis = Vec::new();
        for comp in comps {
            let mut y = self.identity();
            for v in comp {
                y.gen_exp.as_mut_slice()[v] = x.gen_exp.as_slice()[v];
            }
            basis.push(y);
        }
        basis.extend(common.iter().map(|&v| self.generator(v).unwrap()));
        basis.extend((0..self.m()).map(|s| self.standard_commutator(s)));
        Ok(basis)
    }

    /// `log_p |C(x)|`.
    pub fn centralizer_log_order(&self, x: &MeklerElement) -> usize {
        let (comps, common) = self.centralizer_gens(x);
        comps.len() + common.len() + self.m()
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> MeklerElement {
        let p = self.p();
        let mut x = self.identity();
        x.gen_exp.as_mut_slice().iter_mut().for_each(|d| *d = rng.gen_range(0..p));
        x.comm_exp.as_mut_slice().iter_mut().for_each(|d| *d = rng.gen_range(0..p));
        x
    }

    /// Mixed-radix index of a normal form, first generator exponent most significant.
    pub fn index_of(&self, x: &MeklerElement) -> Option<u64> {
        let p = self.p() as u64;
        let mut idx = 0u64;
        for &d in x.gen_exp.as_slice().iter().chain(x.comm_exp.as_slice()) {
            idx = idx.checked_mul(p)?.checked_add(d as u64)?;
        }
        Some(idx)
    }

    pub fn element_at(&self, mut idx: u64) -> MeklerElement {
        let p = self.p() as u64;
        let mut x = self.identity();
        for d in x.comm_exp.as_mut_slice().iter_mut().rev() {
            *d = (idx % p) as u32;
            idx /= p;
        }
        for d in x.gen_exp.as_mut_slice().iter_mut().rev() {
            *d = (idx % p) as u32;
            idx /= p;
        }
        x
    }

    pub fn order_u64(&self) -> Option<u64> {
        (self.p() as u64).checked_pow(self.log_order() as u32)
    }

    /// Multiplication table over all normal forms in lexicographic order.
    pub fn to_cayley(&self, max_order: u64) -> Result<CayleyGroup> {
        let order = self
            .order_u64()
            .filter(|&o| o <= max_order && o <= u32::MAX as u64)
            .ok_or_else(|| Error::Budget(format!("p^{} exceeds the order budget {max_order}", self.log_order())))?
            as usize;
        let (n, m, p) = (self.n(), self.m(), self.p());
        let width = n + m;
        let digits: Vec<u32> = (0..order as u64)
            .flat_map(|i| {
                let x = self.element_at(i);
                let mut d = x.gen_exp.into_inner();
                d.extend(x.comm_exp.into_inner());
                d
            })
            .collect();
        let f = self.field;
        let mut table = vec![0u32; order * order];
        table.par_chunks_mut(order).enumerate().for_each(|(a, row)| {
            let da = &digits[a * width..(a + 1) * width];
            let mut buf = vec![0u32; width];
            for (b, out) in row.iter_mut().enumerate() {
                let db = &digits[b * width..(b + 1) * width];
                for t in 0..width {
                    buf[t] = f.add(da[t], db[t]);
                }
                self.correct(&da[..n], &db[..n], &mut buf[n..]);
                *out = buf.iter().fold(0u32, |acc, &d| acc * p + d);
            }
        });
        let _ = m;
        let g = CayleyGroup::from_flat(order, table)?;
        if order <= TRUSTED_ASSOC_CHECK_LIMIT {
            g.check_associative()?;
        }
        Ok(g)
    }

    /// Order of `⟨tuple⟩` by breadth-first closure.
    pub fn subgroup_order(&self, tuple: &[MeklerElement], budget: usize) -> Result<usize> {
        for t in tuple {
            self.check(t)?;
        }
        let mut seen: HashSet<MeklerElement> = HashSet::from([self.identity()]);
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(x) = queue.pop_front() {
            for t in tuple {
                let y = self.mul_unchecked(&x, t);
                if !seen.contains(&y) {
                    if seen.len() >= budget {
                        return Err(Error::Budget(format!("subgroup closure exceeds {budget} elements")));
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(seen.len())
    }

    /// `log_p |⟨tuple⟩|` by linear algebra: the rank of the generator parts
    /// plus the dimension of the subgroup's intersection with `G'`, which is
    /// spanned by the commutators of the tuple and by the products
    /// `∏ t_i^{λ_i}` for `λ` in the left kernel of the generator parts.
    pub fn subgroup_log_order(&self, tuple: &[MeklerElement]) -> Result<usize> {
        let (b1, _) = self.b_matrices(tuple)?;
        let mut central: Vec<u32> = Vec::new();
        for (i, j) in pairs(tuple.len()) {
            central.extend(self.commutator(&tuple[i], &tuple[j])?.comm_exp.into_inner());
        }
        let ker = b1.row_kernel();
        for r in 0..ker.rows() {
            let mut acc = self.identity();
            for (t, &l) in tuple.iter().zip(ker.row(r)) {
                acc = self.mul_unchecked(&acc, &self.pow(t, l as i64));
            }
            debug_assert!(acc.gen_exp.is_zero());
            central.extend(acc.comm_exp.into_inner());
        }
        let rows = central.len() / self.m().max(1);
        let c = if self.m() == 0 { 0 } else { FpMatrix::from_residues(self.field, rows, self.m(), central)?.rank() };
        Ok(b1.rank() + c)
    }

    /// `B₁` (generator exponents, one row per tuple entry) and `B₂` (its
    /// second exterior power with the columns of edges zeroed).
    pub fn b_matrices(&self, tuple: &[MeklerElement]) -> Result<(FpMatrix, FpMatrix)> {
        let (n, k) = (self.n(), tuple.len());
        let mut data = Vec::with_capacity(k * n);
        for t in tuple {
            self.check(t)?;
            data.extend_from_slice(t.gen_exp.as_slice());
        }
        let b1 = FpMatrix::from_residues(self.field, k, n, data)?
            .with_row_labels((0..k).map(Label::Index).collect())
            .with_col_labels((0..n).map(Label::Index).collect());
        let mut b2 = if k >= 2 && n >= 2 {
            b1.wedge()?
        } else {
            FpMatrix::zeros(self.field, binom2(k), binom2(n))
                .with_row_labels(pairs(k).map(|(i, j)| Label::Pair(i, j)).collect())
                .with_col_labels(pairs(n).map(|(i, j)| Label::Pair(i, j)).collect())
        };
        b2.zero_columns(self.graph.edges().map(|(u, v)| pair_index(n, u, v)));
        Ok((b1, b2))
    }

    /// Formats `x` as `v1^2*v3*[v1,v2]^4` (1-based, exponents in `1..p`, `1` for the identity).
    pub fn format_element(&self, x: &MeklerElement) -> String {
        let mut parts = Vec::new();
        let exp = |e: u32| if e == 1 { String::new() } else { format!("^{e}") };
        for (i, &d) in x.gen_exp.as_slice().iter().enumerate() {
            if d != 0 {
                parts.push(format!("v{}{}", i + 1, exp(d)));
            }
        }
        for (s, &d) in x.comm_exp.as_slice().iter().enumerate() {
            if d != 0 {
                let (i, j) = self.non_edges[s];
                parts.push(format!("[v{},v{}]{}", i + 1, j + 1, exp(d)));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Parses an element literal; factors may come in any order and are multiplied left to right.
    pub fn parse_element(&self, text: &str) -> Result<MeklerElement> {
        let bad = |msg: String| Error::Parse { line: 1, msg };
        let vertex = |tok: &str| -> Result<usize> {
            let idx: usize = tok
                .trim()
                .strip_prefix('v')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(format!("bad generator `{tok}`")))?;
            if idx == 0 || idx > self.n() {
                return Err(bad(format!("generator v{idx} out of range 1..={}", self.n())));
            }
            Ok(idx - 1)
        };
        let mut acc = self.identity();
        for factor in text.split('*') {
            let factor = factor.trim();
            if factor == "1" {
                continue;
            }
            let (base, e) = match factor.rsplit_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<i64>().map_err(|_| bad(format!("bad exponent `{e}`")))?),
                None => (factor, 1),
            };
            let x = if let Some(inner) = base.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let (a, b) = inner.split_once(',').ok_or_else(|| bad(format!("bad commutator `{base}`")))?;
                let (a, b) = (self.generator(vertex(a)?)?, self.generator(vertex(b)?)?);
                self.commutator(&a, &b)?
            } else {
                self.generator(vertex(base)?)?
            };
            acc = self.mul_unchecked(&acc, &self.pow(&x, e));
        }
        Ok(acc)
    }

    /// Graph on the non-trivial cosets `xZ` whose support (outside the
    /// universal vertices) has between 1 and `cap` vertices, joined when
    /// they commute. Commutation only depends on the coset.
    pub fn commuting_graph(&self, cap: usize, max_vertices: usize) -> Result<CommutingGraph> {
        let n = self.n();
        let p = self.p();
        let free: Vec<usize> = (0..n).filter(|v| !self.universal.contains(v)).collect();
        let mut reps: Vec<Vec<u32>> = Vec::new();
        for size in 1..=cap.min(free.len()) {
            let mut comb: Vec<usize> = (0..size).collect();
            loop {
                let mut exps = vec![1u32; size];
                loop {
                    if reps.len() >= max_vertices {
                        return Err(Error::Budget(format!("commuting graph exceeds {max_vertices} vertices")));
                    }
                    let mut v = vec![0u32; n];
                    for (&c, &e) in comb.iter().zip(&exps) {
                        v[free[c]] = e;
                    }
                    reps.push(v);
                    let Some(pos) = exps.iter().rposition(|&e| e + 1 < p) else { break };
                    exps[pos] += 1;
                    exps[pos + 1..].iter_mut().for_each(|e| *e = 1);
                }
                let Some(pos) = (0..size).rposition(|i| comb[i] < free.len() - size + i) else { break };
                comb[pos] += 1;
                for i in pos + 1..size {
                    comb[i] = comb[i - 1] + 1;
                }
            }
        }
        let index: HashMap<&[u32], usize> = reps.iter().enumerate().map(|(i, r)| (r.as_slice(), i)).collect();
        let f = self.field;
        let span_limit = (reps.len() as u64).max(1 << 12);
        let neighbours: Vec<Vec<usize>> = reps
            .par_iter()
            .enumerate()
            .map(|(ix, a)| {
                let x = MeklerElement {
                    gen_exp: FpVector::from_residues(f, a.clone()),
                    comm_exp: FpVector::zeros(f, self.m()),
                };
                let (comps, common) = self.centralizer_gens(&x);
                let mut basis: Vec<Vec<u32>> = comps
                    .iter()
                    .map(|c| {
                        let mut v = vec![0u32; n];
                        c.iter().for_each(|&i| v[i] = a[i]);
                        v
                    })
                    .collect();
                basis.extend(common.iter().filter(|v| !self.universal.contains(v)).map(|&v| {
                    let mut e = vec![0u32; n];
                    e[v] = 1;
                    e
                }));
                let mut out = Vec::new();
                let dim = basis.len() as u32;
                if (p as u64).checked_pow(dim).is_some_and(|s| s <= span_limit) {
                    let mut coef = vec![0u32; basis.len()];
                    'span: loop {
                        let mut v = vec![0u32; n];
                        for (b, &c) in basis.iter().zip(&coef) {
                            for i in 0..n {
                                v[i] = f.add(v[i], f.mul(b[i], c));
                            }
                        }
                        if let Some(&j) = index.get(v.as_slice()) {
                            if j > ix {
                                out.push(j);
                            }
                        }
                        for c in coef.iter_mut() {
                            *c += 1;
                            if *c < p {
                                continue 'span;
                            }
                            *c = 0;
                        }
                        break;
                    }
                } else {
                    out.extend((ix + 1..reps.len()).filter(|&j| self.gens_commute(a, &reps[j])));
                }
                out.sort_unstable();
                out
            })
            .collect();
        let edges = neighbours.iter().enumerate().flat_map(|(i, ns)| ns.iter().map(move |&j| (i, j)));
        let graph = Graph::from_edges(reps.len(), edges)?;
        let reps = reps
            .into_iter()
            .map(|g| MeklerElement { gen_exp: FpVector::from_residues(f, g), comm_exp: FpVector::zeros(f, self.m()) })
            .collect();
        Ok(CommutingGraph { graph, reps })
    }
}

/// Support-capped commuting graph on central cosets.
#[derive(Debug, Clone)]
pub struct CommutingGraph {
    pub graph: Graph,
    /// Coset representatives (zero commutator part, zero on universal vertices).
    pub reps: Vec<MeklerElement>,
}

/// Isomorphism `G_Γ₁ → G_Γ₂` induced by a graph isomorphism.
#[derive(Debug, Clone)]
pub struct InducedIso {
    pub perm: Vec<usize>,
    /// Image slot and sign (`true` = inverted) of each standard commutator.
    comm_image: Vec<(usize, bool)>,
}

impl InducedIso {
    /// Sends `v_1^{d_1} … v_n^{d_n} · ∏ [v_j, v_i]^{e}` to
    /// `v_{φ1}^{d_1} … v_{φn}^{d_n} · ∏ [v_{φj}, v_{φi}]^{e}`, renormalized in the target.
    pub fn apply(&self, target: &MeklerGroup, x: &MeklerElement) -> MeklerElement {
        let f = target.field();
        let mut acc = target.identity();
        for (i, &d) in x.gen_exp.as_slice().iter().enumerate() {
            if d != 0 {
                let v = target.pow(&target.generator(self.perm[i]).unwrap(), d as i64);
                acc = target.mul_unchecked(&acc, &v);
            }
        }
        let c = acc.comm_exp.as_mut_slice();
        for (s, &e) in x.comm_exp.as_slice().iter().enumerate() {
            let (t, neg) = self.comm_image[s];
            c[t] = if neg { f.sub(c[t], e) } else { f.add(c[t], e) };
        }
        acc
    }
}

/// Lifts a graph isomorphism to the groups and checks it on `checks` random products.
pub fn graph_iso_to_group_iso(phi: &[usize], g1: &MeklerGroup, g2: &MeklerGroup, checks: usize) -> Result<InducedIso> {
    if g1.p() != g2.p() {
        return Err(Error::Input("groups over different primes".into()));
    }
    if !g1.graph().is_isomorphism(g2.graph(), phi) {
        return Err(Error::Input("vertex map is not a graph isomorphism".into()));
    }
    let comm_image = g1
        .non_edges()
        .iter()
        .map(|&(j, i)| {
            let (a, b) = (phi[j], phi[i]);
            let slot = g2.commutator_slot(a.min(b), a.max(b)).expect("isomorphisms preserve non-edges");
            (slot, a > b)
        })
        .collect();
    let iso = InducedIso { perm: phi.to_vec(), comm_image };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x150);
    for _ in 0..checks {
        let (x, y) = (g1.random_element(&mut rng), g1.random_element(&mut rng));
        let lhs = iso.apply(g2, &g1.mul_unchecked(&x, &y));
        let rhs = g2.mul_unchecked(&iso.apply(g2, &x), &iso.apply(g2, &y));
        if lhs != rhs {
            return Err(Error::Validation(format!(
                "induced map not multiplicative on {} * {}",
                g1.format_element(&x),
                g1.format_element(&y)
            )));
        }
    }
    Ok(iso)
}

/// Writes a compact report line for an element; used by the CLI.
pub fn describe(g: &MeklerGroup, x: &MeklerElement) -> String {
    let mut s = g.format_element(x);
    let supp = g.support(x);
    if !supp.is_empty() {
        let names: Vec<String> = supp.iter().map(|v| format!("v{}", v + 1)).collect();
        write!(s, " (support {{{}}})", names.join(",")).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::iso_oracle;
    use crate::cayley::DEFAULT_GROUP_ISO_BUDGET;

    fn f3_example() -> (MeklerGroup, MeklerElement, MeklerElement) {
        let g = MeklerGroup::new(&Graph::empty(3), 11).unwrap();
        let g1 = g.element(&[1, 5, 1], &[0, 0, 0]).unwrap();
        let g2 = g.element(&[2, 1, 0], &[0, 0, 0]).unwrap();
        (g, g1, g2)
    }

    #[test]
    fn orders() {
        let f = MeklerGroup::new(&Graph::empty(4), 3).unwrap();
        assert_eq!(f.log_order(), 4 + 6);
        assert_eq!(MeklerGroup::new(&Graph::complete(4), 5).unwrap().log_order(), 4);
        assert_eq!(MeklerGroup::new(&Graph::path(3), 3).unwrap().order_u64(), Some(81));
        assert!(MeklerGroup::new(&Graph::path(3), 2).is_err());
        assert!(MeklerGroup::new(&Graph::path(3), 9).is_err());
    }

    #[test]
    fn commutator_matches_worked_example() {
        let (g, g1, g2) = f3_example();
        let c = g.commutator(&g1, &g2).unwrap();
        assert!(c.gen_exp.is_zero());
        assert_eq!(c.comm_exp, FpVector::from_signed(g.field(), &[-9, -2, -1]));
        let (_, b2) = g.b_matrices(&[g1, g2]).unwrap();
        assert_eq!(b2.row(0), FpVector::from_signed(g.field(), &[-9, -2, -1]).as_slice());
    }

    #[test]
    fn reordering_sign_on_path() {
        let g = MeklerGroup::new(&Graph::path(3), 3).unwrap();
        let (v1, v3) = (g.generator(0).unwrap(), g.generator(2).unwrap());
        let got = g.mul(&v3, &v1).unwrap();
        assert_eq!(g.format_element(&got), "v1*v3*[v1,v3]^2");
        assert_eq!(g.parse_element("v3*v1").unwrap(), got);
    }

    #[test]
    fn group_identities() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for graph in [Graph::cycle(5), Graph::empty(4), Graph::path(4)] {
            let g = MeklerGroup::new(&graph, 5).unwrap();
            for _ in 0..200 {
                let (x, y, z) = (g.random_element(&mut rng), g.random_element(&mut rng), g.random_element(&mut rng));
                let lhs = g.mul(&g.mul(&x, &y).unwrap(), &z).unwrap();
                assert_eq!(lhs, g.mul(&x, &g.mul(&y, &z).unwrap()).unwrap());
                assert!(g.pow(&x, 5).is_identity());
                assert!(g.mul(&x, &g.inv(&x)).unwrap().is_identity());
                let c = g.commutator(&x, &y).unwrap();
                assert_eq!(c, g.inv(&g.commutator(&y, &x).unwrap()));
                assert_eq!(c.is_identity(), g.commutes(&x, &y));
            }
        }
    }

    #[test]
    fn support_examples() {
        let g = MeklerGroup::new(&Graph::empty(3), 5).unwrap();
        assert!(g.support(&g.identity()).is_empty());
        let x = g.element(&[1, 5, 1], &[0, 0, 0]).unwrap();
        assert_eq!(g.support(&x), vec![0, 2]);
    }

    #[test]
    fn centers() {
        let k22 = MeklerGroup::new(&Graph::complete_bipartite(2, 2), 3).unwrap();
        assert_eq!(k22.center_basis().len(), 2);
        let p3 = MeklerGroup::new(&Graph::path(3), 3).unwrap();
        assert_eq!(p3.center_basis().len(), 2);
        let kn = MeklerGroup::new(&Graph::complete(3), 3).unwrap();
        assert_eq!(kn.center_basis().len(), 3);
        for g in [k22, p3, kn] {
            let t = g.to_cayley(1 << 12).unwrap();
            assert_eq!(t.center().len(), 3usize.pow(g.center_basis().len() as u32));
        }
    }

    #[test]
    fn centralizer_example_k22() {
        let g = MeklerGroup::new(&Graph::complete_bipartite(2, 2), 3).unwrap();
        let x = g.element(&[1, 1, 1, 1], &[0, 0]).unwrap();
        let basis = g.centralizer_basis(&x).unwrap();
        let names: Vec<String> = basis.iter().map(|b| g.format_element(b)).collect();
        assert_eq!(names, ["v1*v2", "v3*v4", "[v1,v2]", "[v3,v4]"]);
        assert_eq!(g.centralizer_log_order(&x), 4);
        assert_eq!(g.subgroup_order(&basis, 1000).unwrap(), 81);
    }

    #[test]
    fn centralizers_match_tables() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for graph in [Graph::path(4), Graph::cycle(4), Graph::complete_bipartite(1, 3)] {
            let g = MeklerGroup::new(&graph, 3).unwrap();
            let t = g.to_cayley(3u64.pow(7)).unwrap();
            for _ in 0..30 {
                let x = g.random_element(&mut rng);
                let ix = g.index_of(&x).unwrap() as u32;
                let want: Vec<u32> = t.centralizer(ix).unwrap();
                assert_eq!(want.len(), 3usize.pow(g.centralizer_log_order(&x) as u32));
                let basis = g.centralizer_basis(&x).unwrap();
                let idx: Vec<u32> = basis.iter().map(|b| g.index_of(b).unwrap() as u32).collect();
                assert_eq!(t.subgroup_closure(&idx).unwrap(), want);
            }
        }
    }

    #[test]
    fn cayley_bridge() {
        let k2 = MeklerGroup::new(&Graph::complete(2), 3).unwrap().to_cayley(100).unwrap();
        assert_eq!(k2.order(), 9);
        assert!(k2.is_abelian());
        let p3 = MeklerGroup::new(&Graph::path(3), 3).unwrap().to_cayley(100).unwrap();
        assert_eq!(p3.order(), 81);
        let h = MeklerGroup::new(&Graph::empty(2), 3).unwrap().to_cayley(100).unwrap();
        assert!(iso_oracle(&h, &CayleyGroup::heisenberg(3).unwrap(), DEFAULT_GROUP_ISO_BUDGET).is_isomorphic());
        assert!(MeklerGroup::new(&Graph::empty(3), 3).unwrap().to_cayley(100).is_err());
    }

    #[test]
    fn vertices_generate_minimally() {
        for graph in [Graph::path(4), Graph::empty(3), Graph::cycle(4)] {
            let g = MeklerGroup::new(&graph, 3).unwrap();
            let t = g.to_cayley(1 << 20).unwrap();
            assert_eq!(t.greedy_generators().len(), graph.vertex_count());
        }
    }

    #[test]
    fn subgroup_orders() {
        let f = MeklerGroup::new(&Graph::empty(2), 3).unwrap();
        assert_eq!(f.subgroup_order(&[f.identity()], 100).unwrap(), 1);
        let (v1, v2) = (f.generator(0).unwrap(), f.generator(1).unwrap());
        assert_eq!(f.subgroup_order(&[v1.clone()], 100).unwrap(), 3);
        assert_eq!(f.subgroup_order(&[v1.clone(), v2.clone()], 100).unwrap(), 27);
        assert_eq!(f.subgroup_log_order(&[v1.clone(), v2.clone()]).unwrap(), 3);
        assert!(f.subgroup_order(&[v1, v2], 10).is_err());
    }

    #[test]
    fn subgroup_log_order_matches_closure() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for graph in [Graph::empty(4), Graph::path(4), Graph::cycle(5)] {
            let g = MeklerGroup::new(&graph, 3).unwrap();
            for len in 0..4 {
                for _ in 0..10 {
                    let mut tuple: Vec<MeklerElement> = (0..len).map(|_| g.random_element(&mut rng)).collect();
                    if len == 3 {
                        // force a dependency among generator parts
                        tuple[2] = g.mul(&tuple[0], &g.pow(&tuple[1], 2)).unwrap();
                        tuple[2].comm_exp.as_mut_slice()[0] = rng.gen_range(0..3);
                    }
                    let closure = g.subgroup_order(&tuple, 1 << 20).unwrap();
                    assert_eq!(closure, 3usize.pow(g.subgroup_log_order(&tuple).unwrap() as u32));
                }
            }
        }
    }

    #[test]
    fn b_matrix_edge_cases() {
        let g = MeklerGroup::new(&Graph::complete(3), 3).unwrap();
        let t = [g.generator(0).unwrap(), g.generator(1).unwrap()];
        let (_, b2) = g.b_matrices(&t).unwrap();
        assert!(b2.is_zero());
        let f = MeklerGroup::new(&Graph::empty(3), 3).unwrap();
        let (b1, b2) = f.b_matrices(&[f.identity(), f.identity()]).unwrap();
        assert!(b1.is_zero() && b2.is_zero());
        let (b1, b2) = f.b_matrices(&[f.generator(0).unwrap()]).unwrap();
        assert_eq!((b1.rows(), b2.rows(), b2.cols()), (1, 0, 3));
    }

    #[test]
    fn literal_roundtrip() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let g = MeklerGroup::new(&Graph::cycle(5), 7).unwrap();
        for _ in 0..100 {
            let x = g.random_element(&mut rng);
            assert_eq!(g.parse_element(&g.format_element(&x)).unwrap(), x);
        }
        assert_eq!(g.format_element(&g.identity()), "1");
        assert!(g.parse_element("v6").is_err());
        assert!(g.parse_element("v0").is_err());
        assert!(g.parse_element("w1").is_err());
    }

    #[test]
    fn commuting_graph_matches_pairwise_check() {
        for graph in [Graph::cycle(5), Graph::complete_bipartite(2, 2), Graph::path(4)] {
            let g = MeklerGroup::new(&graph, 3).unwrap();
            let cg = g.commuting_graph(2, 1 << 16).unwrap();
            let r = &cg.reps;
            for i in 0..r.len() {
                for j in i + 1..r.len() {
                    let c = g.commutator(&r[i], &r[j]).unwrap().is_identity();
                    assert_eq!(cg.graph.has_edge(i, j), c);
                }
            }
        }
        let k = MeklerGroup::new(&Graph::complete(3), 3).unwrap();
        assert!(k.commuting_graph(3, 100).unwrap().graph.vertex_count() == 0);
        let g = MeklerGroup::new(&Graph::complete_bipartite(2, 2), 3).unwrap();
        let cg = g.commuting_graph(2, 1000).unwrap();
        let find = |s: &str| cg.reps.iter().position(|x| *x == g.parse_element(s).unwrap()).unwrap();
        assert!(cg.graph.has_edge(find("v1*v2"), find("v3*v4")));
        assert!(cg.graph.has_edge(find("v1*v2"), find("v1^2*v2^2")));
    }

    #[test]
    fn induced_isomorphisms() {
        let c5 = MeklerGroup::new(&Graph::cycle(5), 5).unwrap();
        let rot = [1, 2, 3, 4, 0];
        let refl = [0, 4, 3, 2, 1];
        for phi in [&rot[..], &refl[..], &[0, 1, 2, 3, 4][..]] {
            graph_iso_to_group_iso(phi, &c5, &c5, 1000).unwrap();
        }
        let k22 = MeklerGroup::new(&Graph::complete_bipartite(2, 2), 3).unwrap();
        graph_iso_to_group_iso(&[2, 3, 0, 1], &k22, &k22, 1000).unwrap();
        assert!(graph_iso_to_group_iso(&[0, 2, 1, 3, 4], &c5, &c5, 10).is_err());
    }
}
