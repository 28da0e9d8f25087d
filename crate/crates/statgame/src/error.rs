use alloc::string::String;
use core::fmt;

use crate::dist::GameClass;

/// Failure modes shared by every solver in the crate.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Game parameters violate `0 <= K <= M`, `N <= M` or `gamma > 0`.
    InvalidSpec(String),
    /// A Binomial fraction outside the open unit interval.
    InvalidFraction(f64),
    /// Argument outside the mathematical domain of the function.
    DomainError(String),
    /// The class of the game does not admit the requested quantity.
    Degenerate(GameClass),
    /// An iteration hit its cap before reaching the requested tolerance.
    NoConvergence { iterations: usize },
    /// Fixed-point map is not a contraction (`q >= 1`).
    NotContractive { q: f64 },
    /// Interval iteration needs identical supports.
    SupportMismatch,
    /// The Newton guard never held within the iteration budget.
    GuardNotMet { iterations: usize },
    /// Probability vector does not sum to one.
    NotNormalized { sum: f64 },
    /// `q_k = 0` where `p_k > 0` in a divergence.
    SupportViolation,
    /// Gamma function pole hit.
    PoleError(f64),
    /// Enumeration would exceed the size guard.
    TooLarge { size: u128, limit: u128 },
    /// An equilibrium certificate failed.
    Refuted(String),
    /// A proven inequality failed numerically.
    BoundViolation(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpec(msg) => write!(f, "invalid game spec: {msg}"),
            Error::InvalidFraction(x) => write!(f, "fraction {x} is not in (0,1)"),
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
            Error::Degenerate(class) => write!(f, "degenerate game class {class:?}"),
            Error::NoConvergence { iterations } => {
                write!(f, "no convergence after {iterations} iterations")
            }
            Error::NotContractive { q } => write!(f, "map is not contractive (q = {q})"),
            Error::SupportMismatch => write!(f, "supports of the two scenarios differ"),
            Error::GuardNotMet { iterations } => {
                write!(f, "Newton guard not met after {iterations} iterations")
            }
            Error::NotNormalized { sum } => write!(f, "probabilities sum to {sum}, not 1"),
            Error::SupportViolation => write!(f, "q vanishes where p is positive"),
            Error::PoleError(z) => write!(f, "Gamma function pole at {z}"),
            Error::TooLarge { size, limit } => {
                write!(f, "enumeration size {size} exceeds the limit {limit}")
            }
            Error::Refuted(msg) => write!(f, "certificate refuted: {msg}"),
            Error::BoundViolation(msg) => write!(f, "bound violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
