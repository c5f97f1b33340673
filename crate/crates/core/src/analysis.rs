//! Construction of `C_1⊗D_1 + … + C_s⊗D_s` and its parameters.
//!
//! Given two families `C = {C_i}` (length `n`) and `D = {D_i}` (length `n'`)
//! of equal size `s`, this module builds the code of length `n·n'`, its
//! inclusion-exclusion dimension, the product-type upper distance bound, the
//! basis-driven lower distance bound and the closed forms for two embedded
//! chains. [`analyze`] collects everything into an [`AnalysisReport`] and
//! [`verify`] cross-checks a report against exhaustive enumeration.
//!
//! Coordinates: position `i·n' + j` (0-based) carries coordinate `i` of the
//! `C` factor and coordinate `j` of the `D` factor.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::code::{Distance, LinearCode, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::family::{minimal_elements, transversals, CodeFamily, MultiIndex};
use crate::gf2::{kron, kron_matrix, BitMatrix, BitVector};

/// Upper limit on `|Ψ|` for the exhaustive subset walk of the lower bound.
pub const MAX_TAG_SET: usize = 16;

fn check_sizes(c: &CodeFamily, d: &CodeFamily) -> Result<()> {
    if c.size() != d.size() {
        return Err(Error::FamilySizeMismatch {
            left: c.size(),
            right: d.size(),
        });
    }
    Ok(())
}

fn require_acyclic(c: &CodeFamily, d: &CodeFamily) -> Result<()> {
    for (name, f) in [("C", c), ("D", d)] {
        if !f.is_acyclic() {
            return Err(Error::HypothesisViolated(format!("family {name} is not acyclic")));
        }
    }
    Ok(())
}

/// Distance of a lattice code that is known to be nonzero.
fn dist(code: &LinearCode) -> Result<usize> {
    match code.min_distance_with_budget(DEFAULT_BUDGET)? {
        Distance::Finite(d) => Ok(d),
        Distance::Infinite => unreachable!("sum codes of a family are nonzero"),
    }
}

/// The code `C_1⊗D_1 + … + C_s⊗D_s`.
pub fn construct(c: &CodeFamily, d: &CodeFamily) -> Result<LinearCode> {
    check_sizes(c, d)?;
    let mut stacked = BitMatrix::empty(c.length() * d.length());
    for (ci, di) in c.codes().iter().zip(d.codes()) {
        stacked = stacked.stack(&kron_matrix(ci.generator(), di.generator()))?;
    }
    Ok(LinearCode::from_matrix(&stacked))
}

/// `Σ_α (-1)^{|α|+1} k_α k'_α`; both families must be acyclic.
pub fn dimension_formula(c: &CodeFamily, d: &CodeFamily) -> Result<usize> {
    check_sizes(c, d)?;
    require_acyclic(c, d)?;
    let mut total: i64 = 0;
    for alpha in c.indexes() {
        let term = (c.intersection_code(alpha)?.dimension() * d.intersection_code(alpha)?.dimension()) as i64;
        total += if alpha.len() % 2 == 1 { term } else { -term };
    }
    Ok(usize::try_from(total).expect("inclusion-exclusion of acyclic families is non-negative"))
}

/// Which product an upper-bound term uses.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `d_α · d'^α`: intersection of `C`, sum of `D`.
    CIntersection,
    /// `d^α · d'_α`: sum of `C`, intersection of `D`.
    DIntersection,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundTerm {
    pub alpha: MultiIndex,
    pub side: Side,
    pub value: usize,
}

/// Every term of the upper bound, in index order, `C`-side terms first.
pub fn upper_bound_terms(c: &CodeFamily, d: &CodeFamily) -> Result<Vec<BoundTerm>> {
    check_sizes(c, d)?;
    let mut terms = Vec::new();
    for alpha in c.indexes() {
        let meet = c.intersection_code(alpha)?;
        if !meet.is_zero() {
            terms.push(BoundTerm {
                alpha,
                side: Side::CIntersection,
                value: dist(meet)? * dist(d.sum_code(alpha)?)?,
            });
        }
    }
    for alpha in d.indexes() {
        let meet = d.intersection_code(alpha)?;
        if !meet.is_zero() {
            terms.push(BoundTerm {
                alpha,
                side: Side::DIntersection,
                value: dist(c.sum_code(alpha)?)? * dist(meet)?,
            });
        }
    }
    Ok(terms)
}

/// The smallest product term; the first one in index order on ties.
pub fn upper_bound(c: &CodeFamily, d: &CodeFamily) -> Result<BoundTerm> {
    let terms = upper_bound_terms(c, d)?;
    Ok(terms
        .into_iter()
        .reduce(|best, t| if t.value < best.value { t } else { best })
        .expect("singleton indexes of nonzero members always contribute"))
}

/// An explicit codeword `x ⊗ y` whose weight equals an upper-bound term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub term: BoundTerm,
    pub left: BitVector,
    pub right: BitVector,
    pub codeword: BitVector,
}

/// Builds the witness for `term`: `x` of minimum weight in `C_α` and `y` of
/// minimum weight in `D^α` (or `C^α` and `D_α` for the other side).
pub fn witness_for(c: &CodeFamily, d: &CodeFamily, term: BoundTerm) -> Result<Witness> {
    let (left_code, right_code) = match term.side {
        Side::CIntersection => (c.intersection_code(term.alpha)?, d.sum_code(term.alpha)?),
        Side::DIntersection => (c.sum_code(term.alpha)?, d.intersection_code(term.alpha)?),
    };
    let pick = |code: &LinearCode| -> Result<BitVector> {
        code.min_weight_codeword(DEFAULT_BUDGET)?
            .ok_or_else(|| Error::HypothesisViolated("witness factor is the zero code".into()))
    };
    let left = pick(left_code)?;
    let right = pick(right_code)?;
    Ok(Witness {
        codeword: kron(&left, &right),
        term,
        left,
        right,
    })
}

/// The witness for the minimizing upper-bound term.
pub fn upper_bound_witness(c: &CodeFamily, d: &CodeFamily) -> Result<Witness> {
    witness_for(c, d, upper_bound(c, d)?)
}

/// One evaluated subset `Ψ0` of a tag set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiRow {
    pub psi0: Vec<MultiIndex>,
    pub psi0_star: Vec<MultiIndex>,
    /// The inclusion-minimal members of `psi0_star`.
    pub psi0_star_minimal: Vec<MultiIndex>,
    /// `max_{α∈Ψ0}` of the other family's sum distances.
    pub outer: usize,
    /// `max_{β∈Ψ0*}` of this family's sum distances.
    pub inner: usize,
    pub value: usize,
}

/// One half of the lower bound: the walk over subsets of one family's tags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiTable {
    pub tags: Vec<MultiIndex>,
    pub rows: Vec<PsiRow>,
    pub value: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBound {
    /// Subsets of the `C` basis tags; row values are `m1`.
    pub from_c: PsiTable,
    /// Subsets of the `D` basis tags; row values are `m2`.
    pub from_d: PsiTable,
    pub value: usize,
}

/// Walks every nonempty `Ψ0 ⊆ tags`. The row value is
/// `(max_{α∈Ψ0} d(other^α)) · (max_{β∈Ψ0*} d(own^β))`.
///
/// With `prune` the inner maximum only looks at inclusion-minimal members of
/// `Ψ0*`; a larger index has a larger sum code and so a smaller distance.
fn psi_table(own: &CodeFamily, other: &CodeFamily, prune: bool) -> Result<PsiTable> {
    let tags = own.family_basis().tags();
    if tags.len() > MAX_TAG_SET {
        return Err(Error::TagSetTooLarge(tags.len()));
    }
    let mut rows = Vec::with_capacity((1 << tags.len()) - 1);
    for mask in 1u32..1 << tags.len() {
        let psi0: Vec<MultiIndex> = (0..tags.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| tags[b])
            .collect();
        let star: Vec<MultiIndex> = transversals(&psi0).into_iter().collect();
        let minimal: Vec<MultiIndex> = minimal_elements(&star).into_iter().collect();
        let mut outer = 0;
        for alpha in &psi0 {
            outer = outer.max(dist(other.sum_code(*alpha)?)?);
        }
        let mut inner = 0;
        for beta in if prune { &minimal } else { &star } {
            inner = inner.max(dist(own.sum_code(*beta)?)?);
        }
        rows.push(PsiRow {
            psi0,
            psi0_star: star,
            psi0_star_minimal: minimal,
            outer,
            inner,
            value: outer * inner,
        });
    }
    let value = rows.iter().map(|r| r.value).min().expect("tag sets are nonempty");
    Ok(PsiTable { tags, rows, value })
}

/// The lower bound with inclusion-minimal pruning of `Ψ0*`.
pub fn lower_bound(c: &CodeFamily, d: &CodeFamily) -> Result<LowerBound> {
    lower_bound_with(c, d, true)
}

/// The lower bound; `prune` selects whether inner maxima skip non-minimal indexes.
pub fn lower_bound_with(c: &CodeFamily, d: &CodeFamily, prune: bool) -> Result<LowerBound> {
    check_sizes(c, d)?;
    require_acyclic(c, d)?;
    let from_c = psi_table(c, d, prune)?;
    let from_d = psi_table(d, c, prune)?;
    Ok(LowerBound {
        value: from_c.value.max(from_d.value),
        from_c,
        from_d,
    })
}

/// Closed-form `(dimension, distance)` of `C_1⊗D_s + C_2⊗D_{s-1} + … + C_s⊗D_1`
/// for two embedded chains.
///
/// The pairing is reversed with respect to [`construct`]; compare against
/// `construct(c, &d.reversed())`.
pub fn embedded_params(c: &CodeFamily, d: &CodeFamily) -> Result<(usize, usize)> {
    check_sizes(c, d)?;
    if !c.is_embedded() {
        return Err(Error::NotEmbedded("C"));
    }
    if !d.is_embedded() {
        return Err(Error::NotEmbedded("D"));
    }
    let s = c.size();
    let mut kappa = 0;
    let mut delta = usize::MAX;
    let mut previous_k = 0;
    for i in 1..=s {
        let ci = c.code(i);
        let dj = d.code(s - i + 1);
        kappa += (ci.dimension() - previous_k) * dj.dimension();
        previous_k = ci.dimension();
        delta = delta.min(dist(ci)? * dist(dj)?);
    }
    Ok((kappa, delta))
}

/// How the reported exact distance was obtained.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactSource {
    Enumeration,
    /// Not enumerated; taken from the bounds, which coincide because one
    /// family is embedded and the other acyclic.
    CoincidingBounds,
    Skipped,
}

/// `k` and `d` of `C_α` and `C^α` for one family at one index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeEntry {
    pub k_intersection: usize,
    pub k_sum: usize,
    pub d_intersection: Distance,
    pub d_sum: Distance,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaRow {
    pub alpha: MultiIndex,
    pub c: LatticeEntry,
    pub d: LatticeEntry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub n_prime: usize,
    pub s: usize,
    #[serde(with = "not_applicable")]
    pub kappa_formula: Option<usize>,
    pub rank: usize,
    pub upper_bound: usize,
    #[serde(with = "not_applicable")]
    pub lower_bound: Option<usize>,
    #[serde(with = "skipped")]
    pub exact_distance: Option<usize>,
    pub exact_source: ExactSource,
    pub c_acyclic: bool,
    pub d_acyclic: bool,
    pub c_embedded: bool,
    pub d_embedded: bool,
    /// One family is embedded and the other acyclic, so the two bounds must meet.
    pub theorem_b_applies: bool,
    pub bounds_coincide: bool,
    pub upper_bound_term: BoundTerm,
    pub per_alpha_table: Vec<AlphaRow>,
    pub psi_tables: Option<LowerBound>,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn length(&self) -> usize {
        self.n * self.n_prime
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub compute_exact: bool,
    /// Cap on codewords visited by the exact enumeration of the constructed code.
    pub budget: u64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            compute_exact: true,
            budget: DEFAULT_BUDGET,
        }
    }
}

fn lattice_entry(f: &CodeFamily, alpha: MultiIndex) -> Result<LatticeEntry> {
    let meet = f.intersection_code(alpha)?;
    let sum = f.sum_code(alpha)?;
    Ok(LatticeEntry {
        k_intersection: meet.dimension(),
        k_sum: sum.dimension(),
        d_intersection: meet.min_distance_with_budget(DEFAULT_BUDGET)?,
        d_sum: sum.min_distance_with_budget(DEFAULT_BUDGET)?,
    })
}

/// Computes every report field for the pair `(c, d)`.
///
/// Dimension formula and lower bound are left `None` when either family is
/// not acyclic; the code is still built and its rank reported. A budget
/// overrun in the exact enumeration only downgrades `exact_distance`.
pub fn analyze(c: &CodeFamily, d: &CodeFamily, options: AnalyzeOptions) -> Result<AnalysisReport> {
    check_sizes(c, d)?;
    let code = construct(c, d)?;
    let mut notes = Vec::new();

    let c_check = c.acyclicity();
    let d_check = d.acyclicity();
    for (name, check) in [("C", c_check), ("D", d_check)] {
        if !check.agree() {
            notes.push(format!(
                "family {name}: independent basis = {} but inclusion-exclusion test = {}",
                check.independent_basis, check.inclusion_exclusion
            ));
        }
    }
    let c_acyclic = c_check.independent_basis;
    let d_acyclic = d_check.independent_basis;
    let both_acyclic = c_acyclic && d_acyclic;

    let kappa_formula = if both_acyclic {
        Some(dimension_formula(c, d)?)
    } else {
        None
    };
    let upper = upper_bound(c, d)?;
    let psi_tables = if both_acyclic { Some(lower_bound(c, d)?) } else { None };
    let lower = psi_tables.as_ref().map(|l| l.value);

    let c_embedded = c.is_embedded();
    let d_embedded = d.is_embedded();
    for (name, f, embedded) in [("C", c, c_embedded), ("D", d, d_embedded)] {
        if embedded && !f.is_strictly_embedded() {
            notes.push(format!("family {name} is a non-strict chain (repeated member)"));
        }
    }
    let theorem_b_applies = (c_embedded && d_acyclic) || (d_embedded && c_acyclic);

    let (exact_distance, exact_source) = if options.compute_exact {
        match code.min_distance_with_budget(options.budget) {
            Ok(found) => (found.finite(), ExactSource::Enumeration),
            Err(Error::BudgetExceeded { required, budget }) => {
                notes.push(format!(
                    "exact enumeration skipped: {required} codewords exceed budget {budget}"
                ));
                if theorem_b_applies {
                    (Some(upper.value), ExactSource::CoincidingBounds)
                } else {
                    (None, ExactSource::Skipped)
                }
            }
            Err(e) => return Err(e),
        }
    } else if theorem_b_applies {
        (Some(upper.value), ExactSource::CoincidingBounds)
    } else {
        (None, ExactSource::Skipped)
    };

    let per_alpha_table = c
        .indexes()
        .map(|alpha| {
            Ok(AlphaRow {
                alpha,
                c: lattice_entry(c, alpha)?,
                d: lattice_entry(d, alpha)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(AnalysisReport {
        n: c.length(),
        n_prime: d.length(),
        s: c.size(),
        kappa_formula,
        rank: code.dimension(),
        upper_bound: upper.value,
        lower_bound: lower,
        exact_distance,
        exact_source,
        c_acyclic,
        d_acyclic,
        c_embedded,
        d_embedded,
        theorem_b_applies,
        bounds_coincide: lower == Some(upper.value),
        upper_bound_term: upper,
        per_alpha_table,
        psi_tables,
        notes,
    })
}

/// A failed consistency check on a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    ShapeMismatch {
        field: &'static str,
        report: usize,
        actual: usize,
    },
    RankMismatch {
        report: usize,
        actual: usize,
    },
    KappaMismatch {
        kappa: usize,
        rank: usize,
    },
    ExactUnavailable,
    ExactBelowLower {
        exact: usize,
        lower: usize,
    },
    ExactExceedsUpper {
        exact: usize,
        upper: usize,
    },
    BoundsDisagree {
        lower: Option<usize>,
        upper: usize,
        exact: usize,
    },
    InvalidWitness {
        reason: String,
    },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::ShapeMismatch { field, report, actual } => {
                write!(f, "shape mismatch: report {field} = {report}, families give {actual}")
            }
            Finding::RankMismatch { report, actual } => {
                write!(f, "rank mismatch: report {report}, constructed code {actual}")
            }
            Finding::KappaMismatch { kappa, rank } => {
                write!(f, "dimension formula {kappa} differs from rank {rank}")
            }
            Finding::ExactUnavailable => f.write_str("exact distance unavailable"),
            Finding::ExactBelowLower { exact, lower } => {
                write!(f, "exact below lower: {exact} < {lower}")
            }
            Finding::ExactExceedsUpper { exact, upper } => {
                write!(f, "exact exceeds upper: {exact} > {upper}")
            }
            Finding::BoundsDisagree { lower, upper, exact } => {
                let lower = lower.map_or("NOT-APPLICABLE".to_string(), |l| l.to_string());
                write!(f, "bounds should coincide: lower {lower}, upper {upper}, exact {exact}")
            }
            Finding::InvalidWitness { reason } => write!(f, "invalid upper-bound witness: {reason}"),
        }
    }
}

/// Cross-checks `report` against the families it claims to describe.
///
/// Returns no findings iff the shape and rank match, the dimension formula
/// (when present) equals the rank, `lower ≤ exact ≤ upper`, the bounds and
/// exact distance all agree whenever one family is embedded and the other
/// acyclic, and the upper-bound witness codeword is valid.
pub fn verify(report: &AnalysisReport, c: &CodeFamily, d: &CodeFamily) -> Result<Vec<Finding>> {
    check_sizes(c, d)?;
    let mut findings = Vec::new();
    for (field, reported, actual) in [
        ("n", report.n, c.length()),
        ("n_prime", report.n_prime, d.length()),
        ("s", report.s, c.size()),
    ] {
        if reported != actual {
            findings.push(Finding::ShapeMismatch {
                field,
                report: reported,
                actual,
            });
        }
    }

    let code = construct(c, d)?;
    if report.rank != code.dimension() {
        findings.push(Finding::RankMismatch {
            report: report.rank,
            actual: code.dimension(),
        });
    }
    if let Some(kappa) = report.kappa_formula {
        if kappa != report.rank {
            findings.push(Finding::KappaMismatch {
                kappa,
                rank: report.rank,
            });
        }
    }

    match report.exact_distance {
        None => findings.push(Finding::ExactUnavailable),
        Some(exact) => {
            if let Some(lower) = report.lower_bound {
                if exact < lower {
                    findings.push(Finding::ExactBelowLower { exact, lower });
                }
            }
            if exact > report.upper_bound {
                findings.push(Finding::ExactExceedsUpper {
                    exact,
                    upper: report.upper_bound,
                });
            }
            if report.theorem_b_applies
                && !(report.lower_bound == Some(report.upper_bound) && exact == report.upper_bound)
            {
                findings.push(Finding::BoundsDisagree {
                    lower: report.lower_bound,
                    upper: report.upper_bound,
                    exact,
                });
            }
        }
    }

    let witness = upper_bound_witness(c, d)?;
    if !code.contains(&witness.codeword)? {
        findings.push(Finding::InvalidWitness {
            reason: "codeword is not in the constructed code".into(),
        });
    } else if witness.codeword.weight() != witness.term.value {
        findings.push(Finding::InvalidWitness {
            reason: format!(
                "weight {} differs from bound term {}",
                witness.codeword.weight(),
                witness.term.value
            ),
        });
    }
    Ok(findings)
}

/// `Option<usize>` as an integer or the string `"NOT-APPLICABLE"`.
mod not_applicable {
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<usize>, s: S) -> Result<S::Ok, S::Error> {
        super::marked::serialize(v, "NOT-APPLICABLE", s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<usize>, D::Error> {
        super::marked::deserialize(d, "NOT-APPLICABLE")
    }
}

/// `Option<usize>` as an integer or the string `"SKIPPED"`.
mod skipped {
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<usize>, s: S) -> Result<S::Ok, S::Error> {
        super::marked::serialize(v, "SKIPPED", s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<usize>, D::Error> {
        super::marked::deserialize(d, "SKIPPED")
    }
}

mod marked {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<usize>, label: &str, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_u64(*x as u64),
            None => s.serialize_str(label),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D, label: &str) -> Result<Option<usize>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Some(v)),
            Raw::Text(t) if t == label => Ok(None),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "expected integer or {label:?}, found {t:?}"
            ))),
        }
    }
}
