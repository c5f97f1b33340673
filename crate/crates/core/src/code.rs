//! Binary linear codes with a canonical generator and exact parameters.

use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::{self, rref, BitMatrix, BitVector, Echelon};

/// Default cap on the number of codewords an exhaustive scan may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// The message space is split into `2^CHUNK_BITS` slices that are scanned
/// independently. The split does not depend on the worker count, so results
/// are the same on any machine.
const CHUNK_BITS: usize = 6;

/// Minimum distance of a code. The zero code has distance `Infinite`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Distance::Infinite)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("INFINITE"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u64(*d as u64),
            Distance::Infinite => s.serialize_str("INFINITE"),
        }
    }
}

impl<'de> Deserialize<'de> for Distance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Distance::Finite(v)),
            Raw::Text(t) if t == "INFINITE" => Ok(Distance::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "expected integer or \"INFINITE\", found {t:?}"
            ))),
        }
    }
}

/// A binary linear code of length `n`, stored as a reduced row-echelon generator.
///
/// The minimum distance is computed on first request and cached. Concurrent
/// first requests compute the same value, so the fill is idempotent.
#[derive(Clone)]
pub struct LinearCode {
    generator: Echelon,
    min_word: OnceLock<Option<BitVector>>,
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.generator == other.generator
    }
}

impl Eq for LinearCode {}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearCode(n={}, k={}", self.length(), self.dimension())?;
        if let Some(w) = self.min_word.get() {
            let d = w.as_ref().map_or(Distance::Infinite, |v| Distance::Finite(v.weight()));
            write!(f, ", d={d}")?;
        }
        write!(f, ")")
    }
}

impl LinearCode {
    /// The code spanned by the rows of `rows`.
    pub fn from_matrix(rows: &BitMatrix) -> Self {
        Self::from_echelon(rref(rows))
    }

    /// The code of length `n` spanned by `rows`; rows of another length are rejected.
    pub fn from_rows(n: usize, rows: Vec<BitVector>) -> Result<Self> {
        Ok(Self::from_matrix(&BitMatrix::from_rows(n, rows)?))
    }

    fn from_echelon(generator: Echelon) -> Self {
        Self {
            generator,
            min_word: OnceLock::new(),
        }
    }

    /// Parses generator rows written with `'1'`, `'0'` and `'.'`.
    pub fn from_text(lines: &[&str]) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "empty generator block".into(),
            });
        }
        Ok(Self::from_matrix(&BitMatrix::from_strs(lines)?))
    }

    pub fn zero(n: usize) -> Self {
        Self::from_matrix(&BitMatrix::empty(n))
    }

    /// All of `F_2^n`: an `(n, n, 1)` code.
    pub fn universe(n: usize) -> Self {
        assert!(n >= 1, "code length must be positive");
        let rows = (0..n).map(|i| BitVector::from_support(n, &[i])).collect();
        Self::from_matrix(&BitMatrix::from_rows(n, rows).expect("uniform rows"))
    }

    /// All even-weight vectors: an `(n, n - 1, 2)` code.
    pub fn even_weight(n: usize) -> Self {
        assert!(n >= 1, "code length must be positive");
        let rows = (1..n).map(|i| BitVector::from_support(n, &[0, i])).collect();
        Self::from_matrix(&BitMatrix::from_rows(n, rows).expect("uniform rows"))
    }

    /// `{0, 1...1}`: an `(n, 1, n)` code.
    pub fn repetition(n: usize) -> Self {
        assert!(n >= 1, "code length must be positive");
        Self::from_matrix(&BitMatrix::from_rows(n, vec![BitVector::ones(n)]).expect("uniform rows"))
    }

    /// Reed–Muller code `RM(r, m)`: evaluations of all polynomials of degree
    /// at most `r` in `m` variables. Point `p` assigns bit `j` of `p` to variable `j`.
    pub fn reed_muller(r: usize, m: usize) -> Self {
        let n = 1usize << m;
        let rows = (0u32..1 << m)
            .filter(|mono| mono.count_ones() as usize <= r)
            .map(|mono| {
                let support: Vec<usize> = (0..n).filter(|&p| p as u32 & mono == mono).collect();
                BitVector::from_support(n, &support)
            })
            .collect();
        Self::from_matrix(&BitMatrix::from_rows(n, rows).expect("uniform rows"))
    }

    #[inline]
    pub fn length(&self) -> usize {
        self.generator.matrix().col_count()
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.generator.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.dimension() == 0
    }

    /// The canonical (RREF) generator.
    pub fn generator(&self) -> &BitMatrix {
        self.generator.matrix()
    }

    pub fn echelon(&self) -> &Echelon {
        &self.generator
    }

    pub fn contains(&self, v: &BitVector) -> Result<bool> {
        self.generator.contains(v)
    }

    /// True iff every codeword of `self` lies in `other`.
    pub fn is_subcode_of(&self, other: &LinearCode) -> Result<bool> {
        if self.length() != other.length() {
            return Err(Error::DimensionMismatch {
                expected: other.length(),
                found: self.length(),
            });
        }
        for row in self.generator().rows() {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Number of codewords, `2^k`, saturating at `u64::MAX`.
    pub fn size(&self) -> u64 {
        1u64.checked_shl(self.dimension() as u32).unwrap_or(u64::MAX)
    }

    fn check_budget(&self, budget: u64) -> Result<()> {
        let required = self.size();
        if required > budget {
            return Err(Error::BudgetExceeded { required, budget });
        }
        Ok(())
    }

    pub fn min_distance(&self) -> Result<Distance> {
        self.min_distance_with_budget(DEFAULT_BUDGET)
    }

    /// Exact minimum distance by Gray-code enumeration of all `2^k` messages.
    pub fn min_distance_with_budget(&self, budget: u64) -> Result<Distance> {
        Ok(match self.min_weight_codeword(budget)? {
            Some(v) => Distance::Finite(v.weight()),
            None => Distance::Infinite,
        })
    }

    /// A nonzero codeword of minimum weight, or `None` for the zero code.
    ///
    /// Among several minimum-weight codewords the first one met in the fixed
    /// enumeration order is returned.
    pub fn min_weight_codeword(&self, budget: u64) -> Result<Option<BitVector>> {
        if let Some(w) = self.min_word.get() {
            return Ok(w.clone());
        }
        self.check_budget(budget)?;
        let found = self.scan_min_weight();
        Ok(self.min_word.get_or_init(|| found).clone())
    }

    /// The distance if it has already been computed.
    pub fn cached_distance(&self) -> Option<Distance> {
        self.min_word
            .get()
            .map(|w| w.as_ref().map_or(Distance::Infinite, |v| Distance::Finite(v.weight())))
    }

    /// Codeword counts `A_0..=A_n` by weight.
    pub fn weight_distribution(&self, budget: u64) -> Result<Vec<u64>> {
        self.check_budget(budget)?;
        let n = self.length();
        let parts = scan_chunks(
            self.generator(),
            || vec![0u64; n + 1],
            |hist, word| hist[weight_of(word)] += 1,
        );
        let mut total = vec![0u64; n + 1];
        for part in parts {
            for (t, p) in total.iter_mut().zip(part) {
                *t += p;
            }
        }
        Ok(total)
    }

    fn scan_min_weight(&self) -> Option<BitVector> {
        if self.is_zero() {
            return None;
        }
        let parts = scan_chunks(
            self.generator(),
            || None::<(usize, Vec<u64>)>,
            |best, word| {
                let w = weight_of(word);
                if w > 0 && best.as_ref().is_none_or(|(b, _)| w < *b) {
                    *best = Some((w, word.to_vec()));
                }
            },
        );
        let (_, words) = parts
            .into_iter()
            .flatten()
            .reduce(|a, b| if b.0 < a.0 { b } else { a })?;
        let n = self.length();
        let mut v = BitVector::zeros(n);
        for i in 0..n {
            if (words[i / 64] >> (i % 64)) & 1 == 1 {
                v.set(i, true);
            }
        }
        Some(v)
    }

    /// Tensor product code: generator is every pairwise Kronecker product of rows.
    pub fn tensor_product(&self, other: &LinearCode) -> LinearCode {
        LinearCode::from_matrix(&gf2::kron_matrix(self.generator(), other.generator()))
    }

    pub fn sum(&self, other: &LinearCode) -> Result<LinearCode> {
        Ok(LinearCode::from_matrix(&gf2::subspace_sum(
            self.generator(),
            other.generator(),
        )?))
    }

    pub fn intersection(&self, other: &LinearCode) -> Result<LinearCode> {
        Ok(LinearCode::from_matrix(&gf2::subspace_intersection(
            self.generator(),
            other.generator(),
        )?))
    }

    /// Deletes coordinate `column` from every codeword.
    pub fn puncture(&self, column: usize) -> Result<LinearCode> {
        let n = self.length();
        if n < 2 {
            return Err(Error::PunctureTooShort(n));
        }
        if column >= n {
            return Err(Error::ColumnOutOfRange { column, length: n });
        }
        let rows = self.generator().rows().iter().map(|r| r.without_bit(column)).collect();
        LinearCode::from_rows(n - 1, rows)
    }
}

#[inline]
fn weight_of(word: &[u64]) -> usize {
    word.iter().map(|w| w.count_ones() as usize).sum()
}

/// Visits every codeword once. The top `CHUNK_BITS` message bits select a
/// chunk; inside a chunk the remaining bits run in Gray-code order so each
/// step costs one row XOR. Chunk results come back in chunk order.
fn scan_chunks<T, I, F>(generator: &BitMatrix, init: I, visit: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &[u64]) + Sync,
{
    let rows = generator.rows();
    let k = rows.len();
    let words = generator.col_count().div_ceil(64);
    let high = k.min(CHUNK_BITS);
    let low = k - high;
    (0u64..1 << high)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = init();
            let mut word = vec![0u64; words.max(1)];
            for b in 0..high {
                if chunk >> b & 1 == 1 {
                    xor_into(&mut word, rows[low + b].words());
                }
            }
            visit(&mut acc, &word);
            for step in 1u64..1 << low {
                xor_into(&mut word, rows[step.trailing_zeros() as usize].words());
                visit(&mut acc, &word);
            }
            acc
        })
        .collect()
}

#[inline]
fn xor_into(acc: &mut [u64], row: &[u64]) {
    for (a, r) in acc.iter_mut().zip(row) {
        *a ^= r;
    }
}
