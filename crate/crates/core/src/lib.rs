//! Involutive non-degenerate set-theoretic solutions of the Yang–Baxter
//! equation via finite left braces and cycle sets.
//!
//! The crate builds braces from tables or structured descriptions, derives
//! the decomposable and uniconnected cycle sets attached to them, computes
//! retraction towers and multipermutation levels, and classifies the
//! uniconnected cycle sets of odd order whose permutation group is a
//! Z-group. Every closed formula has a brute-force counterpart in
//! [`oracle`].

pub mod arith;
pub mod brace;
pub mod classify;
pub mod cycleset;
pub mod error;
pub mod group;
pub mod io;
pub mod oracle;
pub mod perm;
pub mod zgroup;

pub use brace::{Ideal, LeftBrace};
pub use cycleset::{CycleSet, RetractionTower, Solution};
pub use error::{AlgebraError, BraceError, ClassifyError, CycleSetError, SpecError};
pub use group::{GroupTable, PermGroup};
pub use perm::Perm;
pub use zgroup::{ActedFactor, ActionEntry, BraceFactorSpec, InvariantQuadruple, ZGroupBraceSpec};
