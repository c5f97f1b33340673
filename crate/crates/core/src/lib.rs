//! Binary codes of the form `C_1⊗D_1 + … + C_s⊗D_s`.
//!
//! The crate is layered bottom-up:
//!
//! - [`gf2`]: packed vectors and matrices over GF(2), RREF, sums and
//!   intersections of row spaces, Kronecker products.
//! - [`code`]: [`LinearCode`] with exact distance and weight distribution by
//!   Gray-code enumeration.
//! - [`family`]: [`CodeFamily`] with its lattice of sums and intersections,
//!   family basis and the acyclic / embedded predicates.
//! - [`analysis`]: construction, dimension formula, upper and lower distance
//!   bounds, the embedded-chain closed forms, [`analyze`] and [`verify`].
//! - [`text`], [`render`], [`fixtures`]: file format, report rendering and
//!   the built-in example families.

pub mod analysis;
pub mod code;
pub mod error;
pub mod family;
pub mod fixtures;
pub mod gf2;
pub mod render;
pub mod text;

pub use analysis::{
    analyze, construct, dimension_formula, embedded_params, lower_bound, upper_bound, verify, AnalysisReport,
    AnalyzeOptions, Finding,
};
pub use code::{Distance, LinearCode, DEFAULT_BUDGET};
pub use error::{Error, Result};
pub use family::{CodeFamily, FamilyBasis, MultiIndex};
pub use gf2::{BitMatrix, BitVector};
