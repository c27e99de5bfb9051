//! Arithmetic and dense linear algebra over a prime field `F_p`, `p` odd.
//!
//! Matrices are small enough (a few hundred rows, at most some tens of
//! thousands of columns) that a dense row-major grid of residues is used
//! throughout. Reduced row echelon form doubles as the canonical
//! representation of row spaces, so kernels can be compared with `==`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Deterministic primality check for the small moduli used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An odd prime modulus together with the field operations on residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::Parameter("p = 2 is not supported, p must be an odd prime".into()));
        }
        if !is_prime(p as u64) {
            return Err(Error::Parameter(format!("{p} is not an odd prime")));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    /// Reduces any signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p as u64 - 2)
    }
}

/// A single residue carrying its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    field: PrimeField,
}

impl FpScalar {
    pub fn new(field: PrimeField, value: i64) -> Self {
        Self { value: field.reduce(value), field }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> PrimeField {
        self.field
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A vector of residues sharing one modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpVector {
    field: PrimeField,
    entries: Vec<u32>,
}

impl FpVector {
    pub fn zeros(field: PrimeField, len: usize) -> Self {
        Self { field, entries: vec![0; len] }
    }

    pub fn from_signed(field: PrimeField, values: &[i64]) -> Self {
        Self { field, entries: values.iter().map(|&v| field.reduce(v)).collect() }
    }

    /// Wraps already-reduced residues. Panics in debug builds on unreduced input.
    pub fn from_residues(field: PrimeField, entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&e| e < field.p()));
        Self { field, entries }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn get(&self, i: usize) -> FpScalar {
        FpScalar { value: self.entries[i], field: self.field }
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.entries
    }

    pub fn as_mut_slice(&mut self) -> &mut [u32] {
        &mut self.entries
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.entries
    }

    pub fn add_assign(&mut self, other: &FpVector) {
        let f = self.field;
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a = f.add(*a, b);
        }
    }

    pub fn scale(&self, c: u32) -> FpVector {
        let f = self.field;
        FpVector { field: f, entries: self.entries.iter().map(|&a| f.mul(a, c)).collect() }
    }
}

/// Symbolic label of a matrix row or column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Label {
    Index(usize),
    Pair(usize, usize),
}

/// Number of unordered pairs from `n` items.
#[inline]
pub fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `(i, j)`, `i < j < n`, in the lexicographic list of
/// all pairs `(0,1), (0,2), ..., (n-2,n-1)`.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// All pairs `(i, j)` with `i < j < n` in lexicographic order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Dense matrix over `F_p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
    row_labels: Option<Vec<Label>>,
    col_labels: Option<Vec<Label>>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols], row_labels: None, col_labels: None }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing every entry mod `p`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("rows of unequal length".into()));
        }
        let data = rows.iter().flatten().map(|&v| field.reduce(v)).collect();
        Ok(Self { field, rows: rows.len(), cols, data, row_labels: None, col_labels: None })
    }

    /// Builds a matrix from already-reduced residues in row-major order.
    pub fn from_residues(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|&v| v >= field.p()) {
            return Err(Error::Input("matrix entry not reduced".into()));
        }
        Ok(Self { field, rows, cols, data, row_labels: None, col_labels: None })
    }

    pub fn with_row_labels(mut self, labels: Vec<Label>) -> Self {
        assert_eq!(labels.len(), self.rows);
        self.row_labels = Some(labels);
        self
    }

    pub fn with_col_labels(mut self, labels: Vec<Label>) -> Self {
        assert_eq!(labels.len(), self.cols);
        self.col_labels = Some(labels);
        self
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_labels(&self) -> Option<&[Label]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[Label]> {
        self.col_labels.as_deref()
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.field.p());
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t.row_labels = self.col_labels.clone();
        t.col_labels = self.row_labels.clone();
        t
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!("{} vs {} rows", self.rows, other.rows)));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(FpMatrix { field: self.field, rows: self.rows, cols, data, row_labels: None, col_labels: None })
    }

    /// Sets the given columns to zero.
    pub fn zero_columns(&mut self, cols: impl IntoIterator<Item = usize>) {
        let cols: Vec<usize> = cols.into_iter().collect();
        for r in 0..self.rows {
            let row = &mut self.data[r * self.cols..(r + 1) * self.cols];
            for &c in &cols {
                row[c] = 0;
            }
        }
    }

    /// Reorders columns: column `c` of the result is column `perm[c]` of `self`.
    pub fn select_columns(&self, perm: &[usize]) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.field, self.rows, perm.len());
        for r in 0..self.rows {
            for (c, &src) in perm.iter().enumerate() {
                out.data[r * perm.len() + c] = self.data[r * self.cols + src];
            }
        }
        out
    }

    /// In-place reduction to reduced row echelon form; returns pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..cols {
            if lead == self.rows {
                break;
            }
            let Some(pr) = (lead..self.rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if pr != lead {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, lead * cols + j);
                }
            }
            let inv = f.inv(self.data[lead * cols + c]);
            for j in c..cols {
                let v = &mut self.data[lead * cols + j];
                *v = f.mul(*v, inv);
            }
            let (before, rest) = self.data.split_at_mut(lead * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            for other in before.chunks_exact_mut(cols).chain(after.chunks_exact_mut(cols)) {
                let factor = other[c];
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    other[j] = f.sub(other[j], f.mul(factor, pivot_row[j]));
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    /// Reduced row echelon form with zero rows removed.
    pub fn rref(&self) -> FpMatrix {
        let mut m = self.clone();
        m.row_labels = None;
        let rank = m.rref_in_place().len();
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        m
    }

    /// Rank of the row space over `F_p`.
    pub fn rank(&self) -> usize {
        // Eliminate along the shorter side.
        if self.cols < self.rows {
            return self.transpose().rank();
        }
        let mut m = FpMatrix { row_labels: None, col_labels: None, ..self.clone() };
        m.rref_in_place().len()
    }

    /// Second exterior power: row `(i, j)`, column `(k, l)` holds the minor
    /// `M[i,k] M[j,l] - M[i,l] M[j,k]`; rows and columns are labeled by index
    /// pairs in lexicographic order.
    pub fn wedge(&self) -> Result<FpMatrix> {
        if self.rows < 2 || self.cols < 2 {
            return Err(Error::Dimension(format!(
                "wedge needs at least 2 rows and 2 columns, got {}x{}",
                self.rows, self.cols
            )));
        }
        let f = self.field;
        let out_rows = binom2(self.rows);
        let out_cols = binom2(self.cols);
        let mut data = Vec::with_capacity(out_rows * out_cols);
        for (i, j) in pairs(self.rows) {
            let ri = self.row(i);
            let rj = self.row(j);
            for (k, l) in pairs(self.cols) {
                let a = f.mul(ri[k], rj[l]);
                let b = f.mul(ri[l], rj[k]);
                data.push(f.sub(a, b));
            }
        }
        Ok(FpMatrix {
            field: f,
            rows: out_rows,
            cols: out_cols,
            data,
            row_labels: Some(pairs(self.rows).map(|(i, j)| Label::Pair(i, j)).collect()),
            col_labels: Some(pairs(self.cols).map(|(i, j)| Label::Pair(i, j)).collect()),
        })
    }

    /// Basis of the left null space `{x : x M = 0}` in reduced row echelon form.
    ///
    /// The result has `rows` columns and `rows - rank` rows; it is canonical,
    /// so two matrices with the same left kernel produce equal outputs.
    pub fn row_kernel(&self) -> FpMatrix {
        let f = self.field;
        let t = self.transpose().rref();
        let n = self.rows;
        let pivots: Vec<usize> = (0..t.rows)
            .map(|r| (0..t.cols).find(|&c| t.get(r, c) != 0).expect("rref rows are nonzero"))
            .collect();
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; n];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(t.get(r, free));
            }
            basis.extend(v);
        }
        let dim = basis.len() / n.max(1);
        FpMatrix { field: f, rows: dim, cols: n, data: basis, row_labels: None, col_labels: None }
            .rref()
    }
}

/// True iff the column spans of `a` and `b` coincide.
pub fn column_space_equal(a: &FpMatrix, b: &FpMatrix) -> Result<bool> {
    if a.rows != b.rows {
        return Err(Error::Dimension(format!("{} vs {} rows", a.rows, b.rows)));
    }
    if a.field != b.field {
        return Err(Error::Dimension("matrices over different fields".into()));
    }
    let ra = a.rank();
    if ra != b.rank() {
        return Ok(false);
    }
    Ok(a.hconcat(b)?.rank() == ra)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    /// Counts the row span by enumerating all coefficient vectors.
    fn span_size(m: &FpMatrix) -> usize {
        let p = m.field().p() as usize;
        let mut seen = std::collections::HashSet::new();
        let mut coeff = vec![0usize; m.rows()];
        loop {
            let v: Vec<u32> = (0..m.cols())
                .map(|c| {
                    (0..m.rows()).fold(0u32, |acc, r| {
                        m.field().add(acc, m.field().mul(coeff[r] as u32, m.get(r, c)))
                    })
                })
                .collect();
            seen.insert(v);
            let mut i = 0;
            while i < coeff.len() {
                coeff[i] += 1;
                if coeff[i] < p {
                    break;
                }
                coeff[i] = 0;
                i += 1;
            }
            if i == coeff.len() {
                break;
            }
        }
        seen.len()
    }

    #[test]
    fn rejects_two_and_composites() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn scalar_is_reduced() {
        let s = FpScalar::new(f(5), -9);
        assert_eq!(s.value(), 1);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(FpMatrix::zeros(f(3), 3, 4).rank(), 0);
        assert_eq!(FpMatrix::identity(f(5), 3).rank(), 3);
        let m = FpMatrix::from_rows(f(3), &[vec![1, 5, 1], vec![2, 1, 0]]).unwrap();
        assert_eq!(m.rank(), 2);
        // Brute-force span: 3^2 vectors.
        assert_eq!(span_size(&m), 9);
    }

    #[test]
    fn wedge_of_worked_example() {
        for p in [3, 5, 7, 11] {
            let m = FpMatrix::from_rows(f(p), &[vec![1, 5, 1], vec![2, 1, 0]]).unwrap();
            let w = m.wedge().unwrap();
            let expected = FpMatrix::from_rows(f(p), &[vec![-9, -2, -1]]).unwrap();
            assert_eq!(w.data(), expected.data());
            assert_eq!(
                w.col_labels().unwrap(),
                &[Label::Pair(0, 1), Label::Pair(0, 2), Label::Pair(1, 2)]
            );
        }
    }

    #[test]
    fn wedge_of_identity_and_bad_shape() {
        let w = FpMatrix::identity(f(3), 2).wedge().unwrap();
        assert_eq!((w.rows(), w.cols(), w.get(0, 0)), (1, 1, 1));
        assert!(matches!(FpMatrix::zeros(f(3), 1, 4).wedge(), Err(Error::Dimension(_))));
        assert!(matches!(FpMatrix::zeros(f(3), 4, 1).wedge(), Err(Error::Dimension(_))));
    }

    #[test]
    fn pair_index_matches_enumeration() {
        for n in 2..9 {
            for (pos, (i, j)) in pairs(n).enumerate() {
                assert_eq!(pair_index(n, i, j), pos);
            }
            assert_eq!(pairs(n).count(), binom2(n));
        }
    }

    #[test]
    fn column_space_examples() {
        let a = FpMatrix::from_rows(f(3), &[vec![1, 2], vec![0, 1]]).unwrap();
        assert!(column_space_equal(&a, &a).unwrap());
        let i2 = FpMatrix::identity(f(3), 2);
        let two_i2 = FpMatrix::from_rows(f(3), &[vec![2, 0], vec![0, 2]]).unwrap();
        assert!(column_space_equal(&i2, &two_i2).unwrap());
        let e1 = FpMatrix::from_rows(f(3), &[vec![1], vec![0]]).unwrap();
        let e2 = FpMatrix::from_rows(f(3), &[vec![0], vec![1]]).unwrap();
        assert!(!column_space_equal(&e1, &e2).unwrap());
        let tall = FpMatrix::zeros(f(3), 3, 1);
        assert!(matches!(column_space_equal(&e1, &tall), Err(Error::Dimension(_))));
    }

    #[test]
    fn row_kernel_examples() {
        assert_eq!(FpMatrix::identity(f(5), 4).row_kernel().rows(), 0);
        let m = FpMatrix::from_rows(f(5), &[vec![1, 2, 3], vec![1, 2, 3]]).unwrap();
        let k = m.row_kernel();
        assert_eq!(k, FpMatrix::from_rows(f(5), &[vec![1, -1]]).unwrap());
    }

    #[test]
    fn row_kernel_annihilates() {
        let m = FpMatrix::from_rows(
            f(7),
            &[vec![1, 2, 3, 4], vec![2, 4, 6, 1], vec![3, 6, 2, 5], vec![0, 0, 0, 0]],
        )
        .unwrap();
        let k = m.row_kernel();
        assert_eq!(k.rows(), m.rows() - m.rank());
        let fld = m.field();
        for r in 0..k.rows() {
            for c in 0..m.cols() {
                let s = (0..m.rows())
                    .fold(0, |acc, i| fld.add(acc, fld.mul(k.get(r, i), m.get(i, c))));
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn wedge_of_random_tuple_has_rank_nullity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let fld = f(3);
        let rows: Vec<Vec<i64>> =
            (0..3).map(|_| (0..6).map(|_| rng.gen_range(0..3)).collect()).collect();
        let b2 = FpMatrix::from_rows(fld, &rows).unwrap().wedge().unwrap();
        assert_eq!(b2.row_kernel().rows(), 3 - b2.rank());
    }
}
