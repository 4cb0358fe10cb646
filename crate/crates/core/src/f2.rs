//! Dense linear algebra over GF(2).
//!
//! Rows are packed into `u64` words, least significant bit first: column `j`
//! of a row lives in word `j / 64` at bit `j % 64`. Padding bits past the last
//! column are always zero, so whole-word comparisons and popcounts are exact.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters; other characters are rejected.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for (pos, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::Parse {
                        position: pos,
                        message: format!("expected '0' or '1', found {c:?}"),
                    })
                }
            }
        }
        Ok(Self::from_bools(&bits))
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.truncate(words_for(len));
        words.resize(words_for(len), 0);
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Self { len, words }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn or_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn not(&self) -> BitVector {
        BitVector::from_words(self.len, self.words.iter().map(|w| !w).collect())
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Copies out the bits at `indices` into a new vector, in the given order.
    pub fn select(&self, indices: &[usize]) -> BitVector {
        let mut out = BitVector::zeros(indices.len());
        for (k, &i) in indices.iter().enumerate() {
            if self.get(i) {
                out.set(k, true);
            }
        }
        out
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from `0`/`1` strings, one per row.
    pub fn parse_rows(rows: &[&str]) -> Result<Self> {
        let vecs = rows
            .iter()
            .map(|r| BitVector::parse(r))
            .collect::<Result<Vec<_>>>()?;
        let cols = vecs.first().map_or(0, BitVector::len);
        Self::from_rows(cols, &vecs)
    }

    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(0, cols);
        for r in rows {
            m.push_row(r)?;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of range"
        );
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of range"
        );
        let mask = 1u64 << (c % WORD);
        let w = &mut self.data[r * self.stride + c / WORD];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = BitVector> + '_ {
        (0..self.rows).map(|r| self.row(r))
    }

    pub fn push_row(&mut self, v: &BitVector) -> Result<()> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        self.data.extend_from_slice(&v.words);
        self.rows += 1;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// `rows[dst] ^= rows[src]`, starting at word `from`.
    #[inline]
    fn xor_row_from(&mut self, dst: usize, src: usize, from: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (d, sr) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (a, b) in d[from..].iter_mut().zip(&sr[from..]) {
            *a ^= b;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = self.data.split_at_mut(a.max(b) * s);
        lo[a.min(b) * s..(a.min(b) + 1) * s].swap_with_slice(&mut hi[..s]);
    }

    /// Gauss–Jordan elimination in place. Returns pivot columns in order.
    ///
    /// With `full = false` only entries below each pivot are cleared (row
    /// echelon form), which is all `rank` needs.
    fn eliminate(&mut self, full: bool, mut track: Option<&mut BitMatrix>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..self.cols {
            if prow == self.rows {
                break;
            }
            let (wi, bit) = (c / WORD, 1u64 << (c % WORD));
            let Some(found) =
                (prow..self.rows).find(|&r| self.data[r * self.stride + wi] & bit != 0)
            else {
                continue;
            };
            self.swap_rows(prow, found);
            if let Some(t) = track.as_deref_mut() {
                t.swap_rows(prow, found);
            }
            let start = if full { 0 } else { prow + 1 };
            for r in start..self.rows {
                if r != prow && self.data[r * self.stride + wi] & bit != 0 {
                    self.xor_row_from(r, prow, wi);
                    if let Some(t) = track.as_deref_mut() {
                        t.xor_row_from(r, prow, 0);
                    }
                }
            }
            pivots.push(c);
            prow += 1;
        }
        pivots
    }

    /// Dimension of the row space.
    pub fn rank(&self) -> usize {
        self.clone().eliminate(false, None).len()
    }

    /// Reduced row-echelon form and its pivot columns. Zero rows are kept at
    /// the bottom so the shape is unchanged.
    pub fn row_reduce(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(true, None);
        (m, pivots)
    }

    /// Basis of the right null space `{v : M v = 0}`, one vector per row.
    pub fn kernel_basis(&self) -> BitMatrix {
        let (rref, pivots) = self.row_reduce();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = BitMatrix::zeros(self.cols - pivots.len(), self.cols);
        for (k, f) in (0..self.cols).filter(|&c| !is_pivot[c]).enumerate() {
            basis.set(k, f, true);
            for (i, &p) in pivots.iter().enumerate() {
                if rref.get(i, f) {
                    basis.set(k, p, true);
                }
            }
        }
        basis
    }

    /// Solves `xᵀ M = bᵀ` for `x`, i.e. expresses `b` (length `cols`) as a
    /// combination of the rows of `M`. Returns `None` when `b` is not in the
    /// row space. The returned `x` has length `rows`.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>> {
        if b.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: b.len(),
            });
        }
        let mut m = self.clone();
        let mut track = BitMatrix::identity(self.rows);
        let pivots = m.eliminate(true, Some(&mut track));
        let mut residual = b.clone();
        let mut x = BitVector::zeros(self.rows);
        for (i, &p) in pivots.iter().enumerate() {
            if residual.get(p) {
                for (r, w) in residual.words.iter_mut().zip(m.row_words(i)) {
                    *r ^= w;
                }
                for (xw, tw) in x.words.iter_mut().zip(track.row_words(i)) {
                    *xw ^= tw;
                }
            }
        }
        Ok(residual.is_zero().then_some(x))
    }

    /// `M v` over GF(2); `v` must have length `cols`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols, "length mismatch");
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let ones: u32 = self
                .row_words(r)
                .iter()
                .zip(&v.words)
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if ones & 1 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// `xᵀ M`: the combination of rows selected by `x`.
    pub fn combine_rows(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.rows, "length mismatch");
        let mut out = BitVector::zeros(self.cols);
        for r in x.ones() {
            for (o, w) in out.words.iter_mut().zip(self.row_words(r)) {
                *o ^= w;
            }
        }
        out
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            let row = self.row_words(r);
            for (k, &c) in cols.iter().enumerate() {
                if (row[c / WORD] >> (c % WORD)) & 1 == 1 {
                    out.set(r, k, true);
                }
            }
        }
        out
    }

    /// A maximal independent subset of the rows, in original order.
    pub fn independent_rows(&self) -> Vec<usize> {
        // Each basis row is zero at the pivots of all earlier basis rows, so a
        // single forward pass reduces a candidate completely.
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        let mut kept = Vec::new();
        for r in 0..self.rows {
            let mut v = self.row_words(r).to_vec();
            for (p, b) in &basis {
                if (v[p / WORD] >> (p % WORD)) & 1 == 1 {
                    for (a, w) in v.iter_mut().zip(b) {
                        *a ^= w;
                    }
                }
            }
            let lead = v
                .iter()
                .enumerate()
                .find(|(_, &w)| w != 0)
                .map(|(i, w)| i * WORD + w.trailing_zeros() as usize);
            if let Some(p) = lead {
                basis.push((p, v));
                kept.push(r);
            }
        }
        kept
    }

    pub fn select_rows(&self, rows: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(0, self.cols);
        for &r in rows {
            out.data.extend_from_slice(self.row_words(r));
            out.rows += 1;
        }
        out
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}
