use thiserror::Error;

/// Errors produced across the library.
///
/// Most variants describe bad input; [`Error::NotIrreducible`] and
/// [`Error::NoConvergence`] are computation failures (see [`Error::is_computation_failure`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("invalid character {ch:?} at position {position}")]
    InvalidCharacter { position: usize, ch: char },
    #[error("throw value {0} exceeds the notation limit of 35")]
    ThrowTooLarge(u32),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("no particle lands now, so the only legal throw is 0 (got {0})")]
    MustWait(u8),
    #[error("a particle lands now and must be thrown; 0 is not allowed")]
    MustThrow,
    #[error("throw {0} collides with a particle already scheduled to land")]
    Collision(u8),
    #[error("throw {throw} exceeds the maximum throw {max_throw}")]
    OutOfRange { throw: u8, max_throw: u8 },
    #[error("maximum throw {capacity} is smaller than the pattern's largest throw {needed}")]
    CapacityTooSmall { capacity: u8, needed: u8 },
    #[error("states {0} and {1} (cyclically) are not joined by a single throw")]
    NotATransition(usize, usize),

    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("invalid state {0:?}: {1}")]
    BadState(String, String),
    #[error("probability {0} must lie strictly between 0 and 1")]
    BadProbability(String),
    #[error("bad kernel: {0}")]
    BadKernel(String),
    #[error("start state {0} is not a node of the graph")]
    BadStart(String),
    #[error("walk trace is empty")]
    EmptyTrace,
    #[error("no state closes the word {0}")]
    NoCycle(String),
    #[error("invalid document: {0}")]
    BadDocument(String),

    #[error("chain has {} closed communicating classes: {}", .0.len(), format_classes(.0))]
    NotIrreducible(Vec<Vec<String>>),
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
}

impl Error {
    /// True for failures of a computation on well-formed input.
    pub fn is_computation_failure(&self) -> bool {
        matches!(self, Error::NotIrreducible(_) | Error::NoConvergence(_))
    }
}

fn format_classes(classes: &[Vec<String>]) -> String {
    classes
        .iter()
        .map(|c| format!("[{}]", c.join(" | ")))
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
