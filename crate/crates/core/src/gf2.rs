//! Bit-packed linear algebra over GF(2).
//!
//! Vectors are packed little-endian into `u64` words: bit `i` lives in word
//! `i / 64` at position `i % 64`. Bit 0 is the leftmost character of the
//! textual form, so `"110"` has bits 0 and 1 set. Padding bits past `len` are
//! kept at zero by every operation.
//!
//! Subspaces are represented by row matrices. The canonical form of a
//! subspace is its reduced row-echelon basis with zero rows dropped, so two
//! subspaces are equal exactly when their canonical matrices are equal.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; word_count(len)],
        };
        v.clear_padding();
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector of length `len` with the given positions set.
    ///
    /// # Panics
    ///
    /// Panics if a position is `>= len`.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    /// Builds a vector of length `len <= 64` from the low bits of `word`.
    pub fn from_word(len: usize, word: u64) -> Self {
        assert!(len <= WORD_BITS, "from_word supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = word;
            v.clear_padding();
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the first set bit, if any.
    pub fn leading_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn xor_assign(&mut self, other: &BitVector) -> Result<()> {
        self.check_len(other.len)?;
        self.xor_words(&other.words);
        Ok(())
    }

    #[inline]
    pub(crate) fn xor_words(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    /// Concatenation `self | other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        for i in other.support() {
            out.set(self.len + i, true);
        }
        out
    }

    /// The sub-vector of bits `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len, "slice out of range");
        let mut out = BitVector::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }

    /// Copy of `self` with position `column` deleted.
    pub fn without_bit(&self, column: usize) -> BitVector {
        assert!(column < self.len, "column out of range");
        let mut out = BitVector::zeros(self.len - 1);
        for i in self.support() {
            match i.cmp(&column) {
                std::cmp::Ordering::Less => out.set(i, true),
                std::cmp::Ordering::Greater => out.set(i - 1, true),
                std::cmp::Ordering::Equal => {}
            }
        }
        out
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if self.len != found {
            return Err(Error::DimensionMismatch {
                expected: self.len,
                found,
            });
        }
        Ok(())
    }

    fn clear_padding(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
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

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses `'1'`, `'0'` and `'.'` (read as zero).
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for (col, ch) in s.chars().enumerate() {
            match ch {
                '1' => bits.push(true),
                '0' | '.' => bits.push(false),
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        column: col + 1,
                        message: format!("illegal character {other:?}"),
                    })
                }
            }
        }
        Ok(BitVector::from_bits(&bits))
    }
}

/// Kronecker product: bit `i * b.len() + j` is `a[i] AND b[j]`.
pub fn kron(a: &BitVector, b: &BitVector) -> BitVector {
    let mut out = BitVector::zeros(a.len() * b.len());
    let b_support = b.support();
    for i in a.support() {
        let base = i * b.len();
        for &j in &b_support {
            out.set(base + j, true);
        }
    }
    out
}

/// A matrix over GF(2), stored as a sequence of rows of equal length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    /// An empty matrix (the zero subspace of `F_2^cols`).
    pub fn empty(cols: usize) -> Self {
        Self { cols, rows: Vec::new() }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        for row in &rows {
            row.check_len(cols).map_err(|_| Error::DimensionMismatch {
                expected: cols,
                found: row.len(),
            })?;
        }
        Ok(Self { cols, rows })
    }

    /// Parses rows of `'0'`, `'1'` and `'.'`. All rows must share a length.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(line, r)| {
                r.parse::<BitVector>().map_err(|e| match e {
                    Error::Parse { column, message, .. } => Error::Parse {
                        line: line + 1,
                        column,
                        message,
                    },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let cols = parsed.first().map_or(0, BitVector::len);
        Self::from_rows(cols, parsed)
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        self.check_cols(row.len())?;
        self.rows.push(row);
        Ok(())
    }

    #[inline]
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn col_count(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        self.check_cols(other.cols)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix { cols: self.cols, rows })
    }

    pub fn rref(&self) -> Echelon {
        rref(self)
    }

    pub fn rank(&self) -> usize {
        rref(self).rank()
    }

    fn check_cols(&self, found: usize) -> Result<()> {
        if self.cols != found {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Reduced row-echelon form of a matrix together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    matrix: BitMatrix,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> BitMatrix {
        self.matrix
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the pivots; the result is zero iff `v` is in the row space.
    pub fn reduce(&self, v: &BitVector) -> Result<BitVector> {
        self.matrix.check_cols(v.len())?;
        let mut r = v.clone();
        for (row, &p) in self.matrix.rows.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_words(&row.words);
            }
        }
        Ok(r)
    }

    pub fn contains(&self, v: &BitVector) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Adds `v` to the row space, keeping the form reduced. Returns `false`
    /// when `v` was already in the span.
    pub fn insert(&mut self, v: &BitVector) -> Result<bool> {
        let r = self.reduce(v)?;
        let Some(p) = r.leading_one() else {
            return Ok(false);
        };
        for row in &mut self.matrix.rows {
            if row.get(p) {
                row.xor_words(&r.words);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.matrix.rows.insert(at, r);
        Ok(true)
    }
}

/// Gauss–Jordan elimination. Zero rows are dropped, pivots strictly increase.
pub fn rref(m: &BitMatrix) -> Echelon {
    let mut rows: Vec<BitVector> = m.rows.iter().filter(|r| !r.is_zero()).cloned().collect();
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..m.cols {
        if top == rows.len() {
            break;
        }
        let Some(found) = (top..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(top, found);
        let pivot_words = rows[top].words.clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != top && row.get(col) {
                row.xor_words(&pivot_words);
            }
        }
        pivots.push(col);
        top += 1;
    }
    rows.truncate(top);
    Echelon {
        matrix: BitMatrix { cols: m.cols, rows },
        pivots,
    }
}

/// True iff `v` lies in the row space of `basis`.
pub fn member(v: &BitVector, basis: &BitMatrix) -> Result<bool> {
    basis.check_cols(v.len())?;
    rref(basis).contains(v)
}

/// Canonical basis of the sum of two row spaces.
pub fn subspace_sum(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    Ok(rref(&a.stack(b)?).into_matrix())
}

/// Canonical basis of the intersection of two row spaces (Zassenhaus).
///
/// Rows `[a | a]` and `[b | 0]` are stacked and reduced in one pass. Rows
/// whose left half vanishes carry a basis of the intersection in their right
/// half.
pub fn subspace_intersection(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    a.check_cols(b.cols)?;
    let n = a.cols;
    let zero = BitVector::zeros(n);
    let mut rows = Vec::with_capacity(a.row_count() + b.row_count());
    rows.extend(a.rows.iter().map(|r| r.concat(r)));
    rows.extend(b.rows.iter().map(|r| r.concat(&zero)));
    let reduced = rref(&BitMatrix { cols: 2 * n, rows });
    let right: Vec<BitVector> = reduced
        .matrix
        .rows
        .iter()
        .zip(&reduced.pivots)
        .filter(|(_, &p)| p >= n)
        .map(|(r, _)| r.slice(n, n))
        .collect();
    Ok(rref(&BitMatrix { cols: n, rows: right }).into_matrix())
}

/// All pairwise Kronecker products of rows, row-major in `(row of a, row of b)`.
pub fn kron_matrix(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    let rows = a
        .rows
        .iter()
        .flat_map(|r| b.rows.iter().map(move |q| kron(r, q)))
        .collect();
    BitMatrix {
        cols: a.cols * b.cols,
        rows,
    }
}
