// Copyright 2026 The tdoped Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Bit-packed linear algebra over F₂.

use std::fmt;

use crate::error::{check_dim, Result};

const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A fixed-length vector over F₂, packed 64 bits per word.
///
/// Bits past `len` in the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        bits.iter().copied().collect()
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let rem = len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
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
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// `self ^= other`. Panics on length mismatch.
    #[inline]
    pub fn xor_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len, "F2Vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Standard inner product mod 2.
    pub fn dot(&self, other: &F2Vector) -> bool {
        assert_eq!(self.len, other.len, "F2Vector length mismatch");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &F2Vector) -> F2Vector {
        let mut out = F2Vector::zeros(self.len + other.len);
        for i in 0..self.len {
            if self.get(i) {
                out.set(i, true);
            }
        }
        for i in 0..other.len {
            if other.get(i) {
                out.set(self.len + i, true);
            }
        }
        out
    }

    /// Bits `[start, start + len)` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> F2Vector {
        assert!(start + len <= self.len);
        let mut out = F2Vector::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }
}

impl FromIterator<bool> for F2Vector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let bits: Vec<bool> = iter.into_iter().collect();
        let mut v = F2Vector::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2[")?;
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        write!(f, "]")
    }
}

/// Dense row-major bit matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Result of reducing a matrix to reduced row-echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: BitMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
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

    /// Stacks `rows` as matrix rows; all must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[F2Vector]) -> Result<Self> {
        let mut m = BitMatrix::zeros(0, cols);
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

    pub fn push_row(&mut self, row: &F2Vector) -> Result<()> {
        check_dim(self.cols, row.len())?;
        self.data.extend_from_slice(&row.words);
        self.rows += 1;
        Ok(())
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> F2Vector {
        assert!(r < self.rows);
        F2Vector::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = F2Vector> + '_ {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let idx = r * self.stride + c / WORD_BITS;
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            self.data[idx] |= mask;
        } else {
            self.data[idx] &= !mask;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// `row[dst] ^= row[src]`.
    fn xor_row_into(&mut self, src: usize, dst: usize) {
        for w in 0..self.stride {
            let v = self.data[src * self.stride + w];
            self.data[dst * self.stride + w] ^= v;
        }
    }

    /// Gauss–Jordan elimination choosing pivots only among the first
    /// `pivot_cols` columns. Columns past that limit are carried along, which
    /// lets callers track row operations on an augmented block.
    pub fn rref_limited(&self, pivot_cols: usize) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..pivot_cols.min(self.cols) {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for r in 0..m.rows {
                if r != rank && m.get(r, c) {
                    m.xor_row_into(rank, r);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        Rref {
            matrix: m,
            rank,
            pivots,
        }
    }

    pub fn rref(&self) -> Rref {
        self.rref_limited(self.cols)
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// True iff `v` lies in the row space of `basis`.
pub fn in_span(v: &F2Vector, basis: &BitMatrix) -> Result<bool> {
    check_dim(basis.cols(), v.len())?;
    let mut inc = IncrementalBasis::new(basis.cols());
    for row in basis.iter_rows() {
        inc.insert(&row);
    }
    Ok(inc.contains(v))
}

/// Keeps the first-seen linearly independent vectors of `vectors`, in order.
pub fn extract_basis(vectors: &[F2Vector]) -> Result<BitMatrix> {
    let Some(first) = vectors.first() else {
        return Ok(BitMatrix::zeros(0, 0));
    };
    let cols = first.len();
    let mut inc = IncrementalBasis::new(cols);
    let mut out = BitMatrix::zeros(0, cols);
    for v in vectors {
        check_dim(cols, v.len())?;
        if inc.insert(v) {
            out.push_row(v)?;
        }
    }
    Ok(out)
}

/// Echelon basis that grows one vector at a time.
///
/// Each stored row has a distinct pivot bit and is zero at the pivots of all
/// rows inserted before it, so a single pass in insertion order fully reduces
/// any vector. The reduced residual is a canonical label for the coset
/// `v + span`. Every row also records which inserted vectors it combines.
#[derive(Clone, Debug)]
pub struct IncrementalBasis {
    cols: usize,
    rows: Vec<BasisRow>,
    steps: u64,
}

#[derive(Clone, Debug)]
struct BasisRow {
    pivot: usize,
    bits: F2Vector,
    combo: F2Vector,
}

impl IncrementalBasis {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
            steps: 0,
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Row XORs performed so far.
    pub fn elimination_steps(&self) -> u64 {
        self.steps
    }

    fn reduce_tracked(&mut self, v: &F2Vector) -> (F2Vector, F2Vector) {
        assert_eq!(v.len(), self.cols, "vector length does not match basis");
        let mut bits = v.clone();
        let mut combo = F2Vector::zeros(self.cols.max(1));
        for row in &self.rows {
            if bits.get(row.pivot) {
                bits.xor_assign(&row.bits);
                combo.xor_assign(&row.combo);
                self.steps += 1;
            }
        }
        (bits, combo)
    }

    /// Residual of `v` after elimination against the basis.
    pub fn reduce(&mut self, v: &F2Vector) -> F2Vector {
        self.reduce_tracked(v).0
    }

    pub fn contains(&mut self, v: &F2Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns true iff the rank grew.
    pub fn insert(&mut self, v: &F2Vector) -> bool {
        let (bits, mut combo) = self.reduce_tracked(v);
        match bits.first_one() {
            None => false,
            Some(pivot) => {
                combo.flip(self.rows.len());
                self.rows.push(BasisRow { pivot, bits, combo });
                true
            }
        }
    }

    /// Coefficients expressing `v` over the independent vectors in insertion
    /// order, or `None` when `v` is outside the span.
    pub fn decompose(&mut self, v: &F2Vector) -> Option<Vec<usize>> {
        let (bits, combo) = self.reduce_tracked(v);
        if !bits.is_zero() {
            return None;
        }
        Some((0..self.rows.len()).filter(|&i| combo.get(i)).collect())
    }
}
