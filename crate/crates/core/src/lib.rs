//! Exact invariants of lattice polytopes, aimed at (0,1)-polytopes and their
//! toric rings: facets with normalized support forms, lattice points,
//! normality, Gorenstein property, divisor class groups and weights, Gale
//! diagrams, and Gröbner bases of toric ideals for a few named families.
//!
//! All arithmetic is exact. Input coordinates are `i64`; every derived
//! quantity is an arbitrary-precision integer or rational.

mod bitset;
pub mod classgroup;
pub mod error;
pub mod families;
pub mod gale;
pub mod lattice;
pub mod linalg;
pub mod polytope;
pub mod random;
pub mod toric;

pub use error::{Error, Result};
pub use linalg::{Int, IntMatrix, Rat};
pub use polytope::{FacetInequality, Point, Polytope};

/// Name of the environment variable that overrides every enumeration guard.
pub const GUARD_ENV: &str = "TORICLASS_GUARD_LIMIT";

/// The guard limit to use: the environment override if set and parseable,
/// otherwise `default`.
pub fn guard_limit(default: u128) -> u128 {
    std::env::var(GUARD_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

pub(crate) fn check_guard(what: &str, count: u128, default: u128) -> Result<()> {
    let limit = guard_limit(default);
    if count > limit {
        return Err(Error::TooLarge {
            what: what.to_string(),
            count,
            limit,
        });
    }
    Ok(())
}
