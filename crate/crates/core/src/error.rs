//! Crate-wide error type.

use std::fmt;

/// Errors produced by any operation in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Incompatible shapes; the message names the operands.
    DimensionMismatch(String),
    /// A column subset is numerically rank deficient.
    RankDeficient { smallest: f64, largest: f64 },
    /// Matrix is not symmetric within tolerance (or not square).
    NotSymmetric,
    /// Sparsity level out of range for the ambient dimension.
    BadK { k: usize, limit: usize },
    /// Signal has fewer nonzero entries than the requested sparsity.
    AllZero,
    /// Decay constant must exceed 1.
    BadAlpha(f64),
    /// Variable count for the ratio-minimization oracle must be in 2..=4.
    BadL(usize),
    /// Noise-split constant of the C1prime condition must lie strictly
    /// inside (0, 1).
    BadTau(f64),
    /// Subset enumeration would exceed the configured cap.
    CombinatorialLimit { subsets: u128, cap: usize },
    /// A ratio denominator is zero; the message names it.
    ZeroDenominator(&'static str),
    /// Coherence needs at least two columns.
    TooFewColumns,
    /// A column is not unit-norm where the bound requires it.
    NotNormalized { column: usize, norm: f64 },
    /// Signal fails the requested decay ratio.
    NotStrongDecaying,
    /// Relative matrix perturbation must satisfy eps < 1 here.
    EpsTooLarge(f64),
    /// Isometry constant must satisfy delta < 1 here.
    DeltaTooLarge(f64),
    /// A comparison ratio is undefined for these inputs.
    DegenerateBound(&'static str),
    /// Adversarial construction: k - eta^2 + rho^2 < 0.
    EtaTooLarge { eta: f64, k: usize, rho: f64 },
    /// Adversarial construction: closed-form delta left its admissible range.
    DeltaOutOfRange { delta: f64, bound: f64 },
    /// Operation invoked on a problem tagged with the wrong scenario,
    /// or the tag's structural requirements (zero E, zero b, sparse x) fail.
    ScenarioMismatch { expected: &'static str, got: String },
    /// An induction hypothesis required by an oracle does not hold.
    PreconditionBroken(String),
    /// Catch-all for invalid scalar arguments (counts, grid sizes).
    InvalidArgument(&'static str),
    /// Filesystem failure while reading or writing experiment artifacts.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::RankDeficient { smallest, largest } => write!(
                f,
                "rank deficient: smallest singular value {smallest:.3e} vs largest {largest:.3e}"
            ),
            Error::NotSymmetric => write!(f, "matrix is not symmetric"),
            Error::BadK { k, limit } => write!(f, "sparsity k = {k} out of range (limit {limit})"),
            Error::AllZero => write!(f, "signal has too few nonzero entries"),
            Error::BadAlpha(a) => write!(f, "decay constant alpha = {a} must exceed 1"),
            Error::BadL(l) => write!(f, "variable count l = {l} must be in 2..=4"),
            Error::BadTau(t) => write!(f, "tau = {t} must lie in (0, 1)"),
            Error::CombinatorialLimit { subsets, cap } => {
                write!(f, "{subsets} subsets exceed the enumeration cap {cap}")
            }
            Error::ZeroDenominator(what) => write!(f, "zero denominator: {what}"),
            Error::TooFewColumns => write!(f, "coherence needs at least two columns"),
            Error::NotNormalized { column, norm } => {
                write!(f, "column {column} has norm {norm}, expected unit")
            }
            Error::NotStrongDecaying => write!(f, "signal is not strong-decaying at this alpha"),
            Error::EpsTooLarge(e) => write!(f, "relative perturbation eps = {e} must be < 1"),
            Error::DeltaTooLarge(d) => write!(f, "isometry constant delta = {d} must be < 1"),
            Error::DegenerateBound(what) => write!(f, "degenerate bound: {what}"),
            Error::EtaTooLarge { eta, k, rho } => {
                write!(f, "eta = {eta} too large for k = {k}, rho = {rho}")
            }
            Error::DeltaOutOfRange { delta, bound } => {
                write!(f, "delta = {delta} outside admissible range (< {bound})")
            }
            Error::ScenarioMismatch { expected, got } => {
                write!(f, "scenario mismatch: expected {expected}, got {got}")
            }
            Error::PreconditionBroken(msg) => write!(f, "precondition broken: {msg}"),
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            Error::Io(msg) => write!(f, "io: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
