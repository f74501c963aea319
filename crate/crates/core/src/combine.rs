//! A siteswap with a poi move word layered on top, beat by beat.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::poi::{find_entry, Entry, Hand, PoiState, PoiWord};
use crate::siteswap::Siteswap;
use crate::toss::{pattern_states, TossState};

/// One beat of a combined pattern: the states before the beat and the moves made on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Beat {
    pub beat: usize,
    pub throw: u8,
    pub label: crate::poi::MoveLabel,
    pub toss: TossState,
    pub poi: PoiState,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinedPattern {
    pub toss: Siteswap,
    pub spin: PoiWord,
    pub max_throw: u8,
    /// `lcm(period, word length)`.
    pub notation_period: usize,
    /// Beats until both the toss state and the poi state are back where they started.
    pub full_period: usize,
    /// Entry used to pick the starting poi state; `None` when the word has no
    /// steady cycle and the pattern simply starts from the ground state.
    pub entry: Option<Entry>,
    pub timeline: Vec<Beat>,
}

impl CombinedPattern {
    pub fn poi_start(&self) -> PoiState {
        self.timeline[0].poi
    }

    /// `"ground"` or `"after entry <moves>"`.
    pub fn start_description(&self) -> String {
        match &self.entry {
            Some(e) if !e.starts_on_ground() => {
                format!("after entry {} from {}", e.moves_text(), e.from)
            }
            _ => "ground".to_string(),
        }
    }
}

/// Aligns beat `i` with `toss[i mod n]` and `spin[i mod w]` and runs both
/// layers until they close together.
pub fn combine(toss: &Siteswap, spin: &PoiWord, max_throw: u8) -> Result<CombinedPattern> {
    let toss_cycle = pattern_states(toss, max_throw)?;
    let entry = match find_entry(spin) {
        Ok(e) => Some(e),
        Err(Error::NoCycle(_)) => None,
        Err(e) => return Err(e),
    };
    let poi_start = entry
        .as_ref()
        .map(|e| e.start)
        .unwrap_or_else(|| PoiState::ground(Hand::Left));

    let n = toss.period();
    let w = spin.len();
    let notation_period = n.lcm(&w);

    let mut timeline = Vec::new();
    let mut toss_state = toss_cycle[0];
    let mut poi_state = poi_start;
    // The word acts as a permutation of eight states, so its order is at most 15.
    for _ in 0..16 {
        for _ in 0..notation_period {
            let beat = timeline.len();
            let throw = toss.throws()[beat % n];
            let label = spin.labels()[beat % w];
            timeline.push(Beat {
                beat,
                throw,
                label,
                toss: toss_state,
                poi: poi_state,
            });
            toss_state = toss_state.advance(throw)?;
            poi_state = poi_state.advance(label);
        }
        if toss_state == toss_cycle[0] && poi_state == poi_start {
            let full_period = timeline.len();
            return Ok(CombinedPattern {
                toss: toss.clone(),
                spin: spin.clone(),
                max_throw,
                notation_period,
                full_period,
                entry,
                timeline,
            });
        }
    }
    unreachable!("combined pattern failed to close")
}

/// [`combine`] with the maximum throw taken from the pattern (at least 1).
pub fn combine_default(toss: &Siteswap, spin: &PoiWord) -> Result<CombinedPattern> {
    combine(toss, spin, toss.max_throw().max(1))
}
