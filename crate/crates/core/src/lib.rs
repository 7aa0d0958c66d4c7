//! Choquet extensions of (not necessarily monotone) setfunctions on finite
//! ground sets and on the half-open interval algebra of `[0, 1)`.
//!
//! - [`setfn`], [`predicates`]: setfunction families, submodularity and
//!   monotonicity checks with witnesses, conjugation.
//! - [`extension`]: the Choquet extension `ŵφ` evaluated exactly over level chains.
//! - [`variation`]: total variation and the canonical `μ - ν` decomposition.
//! - [`uncross`]: certifying uncrossing of weighted set families.
//! - [`interval`]: upper-infimum / lower-supremum extensions on interval sets.
//! - [`fubini`]: the lopsided Fubini inequality on finite probability spaces.
//! - [`selftest`]: randomized invariant suite behind the `selftest` command.

pub mod concave;
pub mod error;
pub mod extension;
pub mod fubini;
pub mod generate;
pub mod interval;
pub mod predicates;
pub mod reference;
pub mod selftest;
pub mod setfn;
pub mod subset;
pub mod uncross;
pub mod variation;

pub use error::{Error, Result};
pub use extension::{choquet, level_chain, BoundedFunction, LevelChain};
pub use predicates::{conjugate, is_increasing, is_modular, is_submodular, Verdict, Witness, DEFAULT_TOL};
pub use setfn::{SetFunction, SetFunctionKind};
pub use subset::{GroundSet, SubsetMask};
