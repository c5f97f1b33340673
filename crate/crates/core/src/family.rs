//! Families of same-length codes and their lattice of sums and intersections.
//!
//! For a family `C_1..C_s` and a nonempty multi-index `α ⊆ {1..s}` the family
//! provides the sum code `C^α` and the intersection code `C_α`, a family
//! basis with per-vector tags, and the acyclic / embedded predicates.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::{rref, BitMatrix, BitVector, Echelon};

/// Largest supported family size. The lattice has `2^s - 1` entries.
pub const MAX_FAMILY_SIZE: usize = 16;

/// A nonempty subset of `{1..s}`, stored as a bit mask (member `i` is bit `i - 1`).
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(u32);

impl MultiIndex {
    pub fn new(members: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &m in members {
            if m == 0 || m > MAX_FAMILY_SIZE {
                return Err(Error::IndexOutOfRange {
                    member: m,
                    size: MAX_FAMILY_SIZE,
                });
            }
            mask |= 1 << (m - 1);
        }
        Self::from_mask(mask).ok_or(Error::EmptyMultiIndex)
    }

    pub fn singleton(member: usize) -> Self {
        assert!((1..=MAX_FAMILY_SIZE).contains(&member), "member out of range");
        MultiIndex(1 << (member - 1))
    }

    /// The full index `{1..s}`.
    pub fn full(s: usize) -> Self {
        assert!((1..=MAX_FAMILY_SIZE).contains(&s), "family size out of range");
        MultiIndex(((1u64 << s) - 1) as u32)
    }

    pub fn from_mask(mask: u32) -> Option<Self> {
        (mask != 0 && mask >> MAX_FAMILY_SIZE == 0).then_some(MultiIndex(mask))
    }

    #[inline]
    pub fn mask(self) -> u32 {
        self.0
    }

    /// Members in increasing order, 1-based.
    pub fn members(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |b| self.0 >> b & 1 == 1).map(|b| b + 1)
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn max_member(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    pub fn contains(self, member: usize) -> bool {
        (1..=32).contains(&member) && self.0 >> (member - 1) & 1 == 1
    }

    pub fn is_subset_of(self, other: MultiIndex) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: MultiIndex) -> MultiIndex {
        MultiIndex(self.0 | other.0)
    }

    /// `self` with its largest member removed, or `None` for a singleton.
    fn without_max(self) -> Option<MultiIndex> {
        Self::from_mask(self.0 & !(1 << (self.max_member() - 1)))
    }

    /// Every nonempty subset of `{1..s}`, in mask order.
    pub fn all(s: usize) -> impl Iterator<Item = MultiIndex> {
        (1u32..1 << s).map(MultiIndex)
    }
}

/// Lexicographic on the sorted member lists, so `{1} < {1,2} < {1,3} < {2}`.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.members().cmp(other.members())
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Compact form `12` for `{1,2}`; members are dot-separated once any exceeds 9.
impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.max_member() > 9;
        for (i, m) in self.members().enumerate() {
            if wide && i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "α{self}")
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.members())
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(d)?;
        MultiIndex::new(&members).map_err(serde::de::Error::custom)
    }
}

/// Renders a set of multi-indexes as `{1,2,12}`.
pub fn format_index_set<'a>(set: impl IntoIterator<Item = &'a MultiIndex>) -> String {
    let parts: Vec<String> = set.into_iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// All multi-indexes obtained by choosing one member from each element of
/// `psi0` and uniting the choices.
pub fn transversals(psi0: &[MultiIndex]) -> BTreeSet<MultiIndex> {
    if psi0.is_empty() {
        return BTreeSet::new();
    }
    // Partial unions as masks; the empty choice is the start state.
    let mut partial: BTreeSet<u32> = BTreeSet::from([0]);
    for alpha in psi0 {
        partial = partial
            .iter()
            .flat_map(|&u| alpha.members().map(move |m| u | 1 << (m - 1)))
            .collect();
    }
    partial.into_iter().filter_map(MultiIndex::from_mask).collect()
}

/// The members of `indexes` with no proper subset in `indexes`.
pub fn minimal_elements<'a>(indexes: impl IntoIterator<Item = &'a MultiIndex>) -> BTreeSet<MultiIndex> {
    let all: BTreeSet<MultiIndex> = indexes.into_iter().copied().collect();
    all.iter()
        .filter(|a| !all.iter().any(|b| b != *a && b.is_subset_of(**a)))
        .copied()
        .collect()
}

/// A basis vector together with its tag `{i : vector ∈ C_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub vector: BitVector,
    pub tag: MultiIndex,
}

/// A family basis: vectors from the union of the family such that the ones
/// lying in each `C_α` span `C_α`, with no removable element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyBasis {
    elements: Vec<BasisElement>,
    independent: bool,
}

impl FamilyBasis {
    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_independent(&self) -> bool {
        self.independent
    }

    /// The deduplicated tag set, sorted.
    pub fn tags(&self) -> Vec<MultiIndex> {
        let set: BTreeSet<MultiIndex> = self.elements.iter().map(|e| e.tag).collect();
        set.into_iter().collect()
    }
}

/// Outcome of the two acyclicity tests.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Acyclicity {
    /// The family basis is linearly independent.
    pub independent_basis: bool,
    /// `dim(C_1 + … + C_s)` equals the alternating sum of `dim C_α`.
    pub inclusion_exclusion: bool,
}

impl Acyclicity {
    pub fn agree(&self) -> bool {
        self.independent_basis == self.inclusion_exclusion
    }
}

/// An ordered family `C_1..C_s` of nonzero codes of one length.
#[derive(Clone)]
pub struct CodeFamily {
    codes: Vec<LinearCode>,
    sums: Vec<OnceLock<LinearCode>>,
    intersections: Vec<OnceLock<LinearCode>>,
    basis: OnceLock<FamilyBasis>,
}

impl fmt::Debug for CodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CodeFamily")
            .field("n", &self.length())
            .field("codes", &self.codes)
            .finish()
    }
}

impl CodeFamily {
    pub fn new(codes: Vec<LinearCode>) -> Result<Self> {
        let Some(first) = codes.first() else {
            return Err(Error::EmptyFamily);
        };
        if codes.len() > MAX_FAMILY_SIZE {
            return Err(Error::FamilyTooLarge(codes.len()));
        }
        let n = first.length();
        for (i, c) in codes.iter().enumerate() {
            if c.length() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.length(),
                });
            }
            if c.is_zero() {
                return Err(Error::ZeroMember { index: i + 1 });
            }
        }
        let slots = 1usize << codes.len();
        Ok(Self {
            codes,
            sums: (0..slots).map(|_| OnceLock::new()).collect(),
            intersections: (0..slots).map(|_| OnceLock::new()).collect(),
            basis: OnceLock::new(),
        })
    }

    /// Number of member codes `s`.
    pub fn size(&self) -> usize {
        self.codes.len()
    }

    /// Common code length `n`.
    pub fn length(&self) -> usize {
        self.codes[0].length()
    }

    pub fn codes(&self) -> &[LinearCode] {
        &self.codes
    }

    /// Member `C_i`, 1-based.
    pub fn code(&self, i: usize) -> &LinearCode {
        &self.codes[i - 1]
    }

    /// All nonempty multi-indexes over this family.
    pub fn indexes(&self) -> impl Iterator<Item = MultiIndex> {
        MultiIndex::all(self.size())
    }

    fn check_index(&self, alpha: MultiIndex) -> Result<()> {
        if alpha.max_member() > self.size() {
            return Err(Error::IndexOutOfRange {
                member: alpha.max_member(),
                size: self.size(),
            });
        }
        Ok(())
    }

    /// `C^α`, the sum of `C_i` over `i ∈ α`.
    pub fn sum_code(&self, alpha: MultiIndex) -> Result<&LinearCode> {
        self.check_index(alpha)?;
        Ok(self.lattice(alpha, true))
    }

    /// `C_α`, the intersection of `C_i` over `i ∈ α`.
    pub fn intersection_code(&self, alpha: MultiIndex) -> Result<&LinearCode> {
        self.check_index(alpha)?;
        Ok(self.lattice(alpha, false))
    }

    fn lattice(&self, alpha: MultiIndex, sum: bool) -> &LinearCode {
        let slots = if sum { &self.sums } else { &self.intersections };
        slots[alpha.mask() as usize].get_or_init(|| {
            let last = self.code(alpha.max_member());
            match alpha.without_max() {
                None => last.clone(),
                Some(rest) => {
                    let rest = self.lattice(rest, sum);
                    if sum {
                        rest.sum(last).expect("uniform length")
                    } else {
                        rest.intersection(last).expect("uniform length")
                    }
                }
            }
        })
    }

    /// `{i : v ∈ C_i}`.
    pub fn alpha_of(&self, v: &BitVector) -> Result<MultiIndex> {
        let mut mask = 0u32;
        for (i, c) in self.codes.iter().enumerate() {
            if c.contains(v)? {
                mask |= 1 << i;
            }
        }
        if v.is_zero() {
            return Err(Error::NotInUnion);
        }
        MultiIndex::from_mask(mask).ok_or(Error::NotInUnion)
    }

    /// The family basis, built once and cached.
    ///
    /// Multi-indexes are visited by decreasing cardinality, ties in
    /// lexicographic order. For each nonzero `C_α` the selected vectors that
    /// lie in `C_α` are extended to span it with rows of its canonical
    /// generator. Elements whose removal keeps every `C_α` spanned are then
    /// pruned in insertion order.
    pub fn family_basis(&self) -> &FamilyBasis {
        self.basis.get_or_init(|| self.build_basis())
    }

    fn build_basis(&self) -> FamilyBasis {
        let n = self.length();
        let mut order: Vec<MultiIndex> = self.indexes().collect();
        order.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));

        let mut selected: Vec<BitVector> = Vec::new();
        for alpha in order {
            let target = self.lattice(alpha, false);
            if target.is_zero() {
                continue;
            }
            let mut span = empty_echelon(n);
            for v in &selected {
                if target.contains(v).expect("uniform length") {
                    span.insert(v).expect("uniform length");
                }
            }
            for row in target.generator().rows() {
                if span.insert(row).expect("uniform length") {
                    selected.push(row.clone());
                }
            }
        }

        let mut elements: Vec<BasisElement> = selected
            .into_iter()
            .map(|vector| {
                let tag = self.alpha_of(&vector).expect("basis vectors lie in the family");
                BasisElement { vector, tag }
            })
            .collect();

        let mut i = 0;
        while i < elements.len() {
            let removed = elements.remove(i);
            if self.spans_lattice(&elements) {
                continue;
            }
            elements.insert(i, removed);
            i += 1;
        }

        let rows = elements.iter().map(|e| e.vector.clone()).collect();
        let rank = rref(&BitMatrix::from_rows(n, rows).expect("uniform length")).rank();
        FamilyBasis {
            independent: rank == elements.len(),
            elements,
        }
    }

    /// True iff for every `α` the elements lying in `C_α` span `C_α`.
    pub(crate) fn spans_lattice(&self, elements: &[BasisElement]) -> bool {
        self.indexes().all(|alpha| {
            let target = self.lattice(alpha, false);
            let mut span = empty_echelon(self.length());
            for e in elements.iter().filter(|e| alpha.is_subset_of(e.tag)) {
                span.insert(&e.vector).expect("uniform length");
            }
            span.rank() == target.dimension()
        })
    }

    /// `Σ_α (-1)^{|α|+1} dim C_α` over all nonempty `α`.
    pub fn inclusion_exclusion_dimension(&self) -> i64 {
        self.indexes()
            .map(|alpha| {
                let k = self.lattice(alpha, false).dimension() as i64;
                if alpha.len() % 2 == 1 {
                    k
                } else {
                    -k
                }
            })
            .sum()
    }

    /// Runs both acyclicity tests.
    pub fn acyclicity(&self) -> Acyclicity {
        let full = self.lattice(MultiIndex::full(self.size()), true).dimension() as i64;
        Acyclicity {
            independent_basis: self.family_basis().is_independent(),
            inclusion_exclusion: self.inclusion_exclusion_dimension() == full,
        }
    }

    /// True iff the family basis is linearly independent.
    ///
    /// Logs a warning when the inclusion-exclusion dimension test disagrees.
    pub fn is_acyclic(&self) -> bool {
        let check = self.acyclicity();
        if !check.agree() {
            log::warn!(
                "acyclicity tests disagree: independent basis = {}, inclusion-exclusion = {}",
                check.independent_basis,
                check.inclusion_exclusion
            );
        }
        check.independent_basis
    }

    /// True iff `C_i ⊆ C_{i+1}` for every `i`, in the declared order.
    pub fn is_embedded(&self) -> bool {
        self.codes
            .windows(2)
            .all(|w| w[0].is_subcode_of(&w[1]).expect("uniform length"))
    }

    /// True iff the family is embedded with every inclusion proper.
    pub fn is_strictly_embedded(&self) -> bool {
        self.is_embedded() && self.codes.windows(2).all(|w| w[0].dimension() < w[1].dimension())
    }

    /// The family in reverse order, `C_s..C_1`.
    pub fn reversed(&self) -> CodeFamily {
        CodeFamily::new(self.codes.iter().rev().cloned().collect()).expect("same members")
    }

    /// The members sorted by increasing dimension (stable).
    pub fn sorted_by_dimension(&self) -> CodeFamily {
        let mut codes = self.codes.clone();
        codes.sort_by_key(LinearCode::dimension);
        CodeFamily::new(codes).expect("same members")
    }
}

fn empty_echelon(n: usize) -> Echelon {
    rref(&BitMatrix::empty(n))
}
