//! Exact arithmetic for twisted Thue equations over the simplest cubic fields.
//!
//! The family of cubics `f(X; n) = X^3 - (n-1)X^2 - (n+2)X - 1` has three real
//! roots `λ0 > 0 > λ1 > -1 > λ2` generating the simplest cubic fields. For twist
//! exponents `(s, t)` the unit `α0 = λ0^s λ1^t` and its conjugates define the
//! twisted norm form
//!
//! ```text
//! F(X, Y; n, s, t) = (X - α0 Y)(X - α1 Y)(X - α2 Y)
//! ```
//!
//! with integer coefficients, and this crate studies the unit equation
//! `|F(X, Y; n, s, t)| = 1` in rational integers X, Y.
//!
//! Everything numerical runs on validated enclosures: dyadic intervals with
//! outward rounding and directed transcendental kernels, so every reported
//! comparison is a certificate, never a floating-point guess. Algebra on the
//! order `Z[λ0]` is exact over `BigInt`. The analysis layer classifies
//! solutions, decomposes the associated units over the fundamental pair
//! `(λ0, λ2)`, builds the linear forms in logarithms that drive the effective
//! bounds, and cross-checks the inequalities used by the contradiction
//! argument. A search harness enumerates small solutions two independent ways.
//!
//! Verification entry points return a three-valued [`Verdict`]: `Pass` and
//! `Fail` are certified claims, `Undecided` means the precision budget was
//! exhausted before certification. An `Undecided` is never silently converted
//! into a pass or a fail.

pub mod analysis;
pub mod bounds;
pub mod cubic;
pub mod dyadic;
pub mod enclosure;
pub mod form;
pub mod order;
pub mod precision;
pub mod search;
pub mod transcendental;

pub use dyadic::{Dyadic, Rounding};
pub use enclosure::RealEnclosure;
pub use precision::{PrecisionPolicy, Refined, Verdict};

use num_bigint::BigInt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Logarithm of an enclosure whose lower endpoint is not strictly positive.
    #[error("log domain error: enclosure must be strictly positive, got lower endpoint {0}")]
    LogDomain(String),
    /// Division or negative power of an enclosure containing zero.
    #[error("enclosure spans zero: {0}")]
    ZeroSpan(String),
    /// Two order elements with different field parameters were combined.
    #[error("mismatched field parameter: n = {0} vs n = {1}")]
    MismatchedN(i64, i64),
    /// An operation requiring a unit was applied to a non-unit.
    #[error("element has norm {0}, not a unit")]
    NotAUnit(BigInt),
    /// A parameter was outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The precision budget ran out before the operation could complete at all.
    ///
    /// Only raised where no `Undecided` verdict or unconverged result can carry
    /// the outcome, e.g. when root isolation cannot even represent the initial
    /// bracket at the allowed precision.
    #[error("precision exhausted at {bits} bits: {what}")]
    PrecisionExhausted { bits: u32, what: String },
    /// Integer rounding of a decomposition stayed ambiguous at maximum precision.
    #[error("rounding ambiguous at {bits} bits: enclosure {0} spans multiple integers", .interval)]
    RoundingAmbiguous { interval: String, bits: u32 },
    /// A decomposition candidate failed the exact verification step.
    ///
    /// For units of `Z[λ0]` with the fundamental pair `(λ0, λ2)` this cannot
    /// happen; it is fatal rather than recoverable.
    #[error("exact verification failed: {0}")]
    ExactVerificationFailed(String),
    /// The point is not a solution of `|F| = 1`, so solution-only analysis
    /// does not apply.
    #[error("|F({x}, {y})| = {value}, not 1")]
    NotASolution { x: BigInt, y: BigInt, value: BigInt },
    /// A certified ordering could not be established and no exact tie explains it.
    #[error("undecidable ordering: {0}")]
    UndecidableOrdering(String),
    /// The requested case analysis is only supported for the stated index.
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
