//! Exact arithmetic for real quadratic fields and the modular identities
//! built on it: Hecke L-values at non-positive integers via Shintani cone
//! decompositions, half-integral weight Eisenstein coefficient tables,
//! diagonal restriction to classical q-expansions, and exact verification
//! of the classical class-number relations.
//!
//! All arithmetic is exact: integers, `BigInt` and `BigRational` throughout.
//! No floating point participates in any decision path.

pub mod cache;
pub mod cohen;
pub mod dirichlet;
pub mod error;
pub mod fchar;
pub mod field;
pub mod ideal;
pub mod qmode;
pub mod qseries;
pub mod report;
pub mod shintani;

pub use error::Error;

/// Default trial-division bound for integer and ideal factorization.
pub const DEFAULT_FACTOR_BOUND: i128 = 10_000_000;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate version string recorded in report provenance blocks.
pub fn version() -> String {
    format!("hq-core {}", env!("CARGO_PKG_VERSION"))
}
