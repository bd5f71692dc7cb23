//! Exact-arithmetic toolkit for orthogonal Buekenhout-Metz unitals in the
//! Desarguesian projective plane PG(2,q²), q an odd prime power.
//!
//! The crate builds the unital point sets from their (a,b) parameters, runs
//! the explicit Triple O'Nan constructions, and exhaustively searches and
//! verifies O'Nan / Triple O'Nan configurations at desk scale. All arithmetic
//! is exact, over table-driven GF(q) and GF(q²).
//!
//! Module map:
//! - [`gfield`]: GF(q) and GF(q²) contexts, Frobenius, norm, quadratic character.
//! - [`plane`]: points, lines and incidence in PG(2,q²).
//! - [`unital`]: the unital U_{a,b}, its automorphisms, parameter equivalence.
//! - [`onan`]: O'Nan and Triple O'Nan objects, verification, Feng-Li scan.
//! - [`construct`]: explicit Triple O'Nan constructions and cyclotomic counts.
//! - [`search`]: canonical-frame exhaustive search and the brute-force oracle.
//! - [`report`]: JSON-serializable records shared with the CLI.

pub mod construct;
pub mod gfield;
pub mod onan;
pub mod plane;
pub mod report;
pub mod search;
pub mod unital;

/// Crate-wide error type.
///
/// The CLI maps variants onto process exit codes: invalid parameters → 2,
/// invariant violations → 3, resource caps → 4.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An internal consistency condition failed. Reaching this indicates a
    /// bug or a violated theorem, never bad user input.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    /// Geometric degeneracy (coincident points, equal lines).
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// The requested construction does not exist for these parameters.
    #[error("no construction: {0}")]
    NoConstruction(String),

    #[error("square root of a non-square")]
    NotASquare,
}

pub type Result<T> = std::result::Result<T, Error>;
