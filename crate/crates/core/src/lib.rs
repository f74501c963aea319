//! State graphs for toss and poi juggling.
//!
//! - [`siteswap`]: notation, validity, particle counts
//! - [`toss`]: toss states, transitions, the `(k, m)` state graph
//! - [`walk`]: transition kernels, stationary distributions, seeded walks
//! - [`poi`]: the poi spin state machine
//! - [`combine`]: a poi word layered over a siteswap
//! - [`export`], [`cli`]: file formats and the command-line frontend

pub mod cli;
pub mod combine;
pub mod error;
pub mod export;
pub mod graph;
pub mod poi;
pub mod siteswap;
pub mod toss;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{GraphKind, StateGraph};
pub use poi::{MoveLabel, PoiState, PoiWord};
pub use siteswap::Siteswap;
pub use toss::TossState;
