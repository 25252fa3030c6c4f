//! Central extensions of finite abelian groups.
//!
//! A central extension `0 → B → G → A → 0` of finite abelian groups is
//! stored through a normalized 2-cocycle `γ: A × A → B` (a dense table).
//! The crate validates and compares cocycles, builds the extension group,
//! computes `H²(A, B)` and its bilinear part by exact integer linear algebra,
//! and embeds any such `G` into a twisted product `A ×_β L` with `β`
//! bilinear and `L = (Q/Z)^k` depending only on `B`.
//!
//! Both `A` and `B` are written additively throughout; a product `xy` in `A`
//! is the sum `x + y` of coordinate vectors.

#![allow(clippy::needless_range_loop, clippy::field_reassign_with_default)]

pub mod abelian;
pub mod cli;
pub mod cocycle;
pub mod cohomology;
pub mod embedding;
pub mod error;
pub mod examples;
pub mod io;
pub mod matrix;
pub mod properties;
pub mod qz;
pub mod twisted;

pub use abelian::{canonicalize, AbelianGroup, GroupElement};
pub use cocycle::{BilinearMatrix, CochainMap, Cocycle};
pub use error::{Error, Result};
pub use matrix::IntMatrix;

/// Size bounds for the exhaustive and dense computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `|A|` for a dense cocycle table.
    pub max_table_order: u128,
    /// Largest `|A|` for a full `H²(A, B)` computation.
    pub max_h2_order: u128,
    /// Largest `|G|` for extension groups and embeddings.
    pub max_group_order: u128,
    /// Largest `|A|` for coboundary witness searches.
    pub max_cohomologous_order: u128,
    /// Largest number of bilinear candidates enumerated when searching for a
    /// twisted-product representative.
    pub max_bilinear_candidates: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_table_order: 4096,
            max_h2_order: 16,
            max_group_order: 4096,
            max_cohomologous_order: 512,
            max_bilinear_candidates: 19683,
        }
    }
}
