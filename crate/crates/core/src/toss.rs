//! Toss-juggling states and the state graph for `k` particles and maximum throw `m`.
//!
//! A state is the set of upcoming beats (offsets from now, `0..m`) at which an
//! airborne particle comes down. Each beat the state shifts down by one; if a
//! particle was due at offset 0 it is thrown again to offset `throw - 1`.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{lex_bfs, GraphKind, StateGraph};
use crate::siteswap::{Siteswap, MAX_THROW};

/// Upper bound on the number of nodes `build_state_graph` will materialize.
pub const MAX_GRAPH_NODES: u64 = 2_000_000;

pub type TossGraph = StateGraph<TossState, u8>;

/// A `k`-subset of `{0, ..., m-1}` with its capacity `m`.
///
/// Stored as an occupancy word; equality and ordering follow the sorted
/// element list (then capacity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TossState {
    bits: u64,
    capacity: u8,
}

impl TossState {
    pub fn new(elements: impl IntoIterator<Item = u8>, capacity: u8) -> Result<Self> {
        check_capacity(capacity)?;
        let mut bits = 0u64;
        for x in elements {
            if x >= capacity {
                return Err(Error::BadState(
                    format!("{x}"),
                    format!("element must be below the maximum throw {capacity}"),
                ));
            }
            if bits & (1 << x) != 0 {
                return Err(Error::BadState(format!("{x}"), "repeated element".into()));
            }
            bits |= 1 << x;
        }
        Ok(TossState { bits, capacity })
    }

    /// `{0, ..., k-1}`: every particle lands as soon as possible.
    pub fn ground(balls: u8, capacity: u8) -> Result<Self> {
        if balls > capacity {
            return Err(Error::BadParameters(format!(
                "{balls} particles do not fit under maximum throw {capacity}"
            )));
        }
        TossState::new(0..balls, capacity)
    }

    /// Parses the comma-separated form `"0,2,3"` (empty string for no particles).
    pub fn parse(text: &str, capacity: u8) -> Result<Self> {
        let text = text.trim();
        let text = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .unwrap_or(text);
        if text.trim().is_empty() {
            return TossState::new([], capacity);
        }
        let elements = text
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u8>()
                    .map_err(|_| Error::BadState(text.to_string(), format!("{part:?} is not a beat offset")))
            })
            .collect::<Result<Vec<_>>>()?;
        TossState::new(elements, capacity).map_err(|e| match e {
            Error::BadState(_, why) => Error::BadState(text.to_string(), why),
            other => other,
        })
    }

    pub fn capacity(&self) -> u8 {
        self.capacity
    }

    pub fn balls(&self) -> u8 {
        self.bits.count_ones() as u8
    }

    pub fn contains(&self, x: u8) -> bool {
        x < 64 && self.bits & (1 << x) != 0
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.capacity).filter(|&x| self.contains(x))
    }

    pub fn to_vec(&self) -> Vec<u8> {
        self.elements().collect()
    }

    /// Comma-separated identifier used in exports and on the command line.
    pub fn id(&self) -> String {
        self.elements().map(|x| x.to_string()).join(",")
    }

    /// State after one beat with the given throw.
    pub fn advance(&self, throw: u8) -> Result<TossState> {
        if throw > self.capacity {
            return Err(Error::OutOfRange {
                throw,
                max_throw: self.capacity,
            });
        }
        let shifted = self.bits >> 1;
        if !self.contains(0) {
            return if throw == 0 {
                Ok(TossState { bits: shifted, ..*self })
            } else {
                Err(Error::MustWait(throw))
            };
        }
        if throw == 0 {
            return Err(Error::MustThrow);
        }
        let slot = 1u64 << (throw - 1);
        if shifted & slot != 0 {
            return Err(Error::Collision(throw));
        }
        Ok(TossState {
            bits: shifted | slot,
            ..*self
        })
    }

    /// Throws accepted by [`advance`](Self::advance), ascending.
    pub fn admissible_throws(&self) -> Vec<u8> {
        if !self.contains(0) {
            return vec![0];
        }
        let shifted = self.bits >> 1;
        (1..=self.capacity)
            .filter(|&t| shifted & (1 << (t - 1)) == 0)
            .collect()
    }

    pub fn successors(&self) -> impl Iterator<Item = (u8, TossState)> + '_ {
        self.admissible_throws()
            .into_iter()
            .map(move |t| (t, self.advance(t).expect("admissible throw")))
    }
}

impl Ord for TossState {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements()
            .cmp(other.elements())
            .then(self.capacity.cmp(&other.capacity))
    }
}

impl PartialOrd for TossState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TossState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

fn check_capacity(capacity: u8) -> Result<()> {
    if capacity == 0 || capacity > MAX_THROW {
        return Err(Error::BadParameters(format!(
            "maximum throw must lie in 1..={MAX_THROW}, got {capacity}"
        )));
    }
    Ok(())
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Every `k`-subset of `{0, ..., m-1}` in canonical order.
pub fn all_states(balls: u8, max_throw: u8) -> Result<Vec<TossState>> {
    check_capacity(max_throw)?;
    if balls > max_throw {
        return Err(Error::BadParameters(format!(
            "need 0 <= balls <= max throw, got balls {balls}, max throw {max_throw}"
        )));
    }
    let count = binomial(max_throw as u64, balls as u64);
    if count > MAX_GRAPH_NODES {
        return Err(Error::BadParameters(format!(
            "({balls}, {max_throw}) has {count} states, more than the supported {MAX_GRAPH_NODES}"
        )));
    }
    Ok((0..max_throw)
        .combinations(balls as usize)
        .map(|c| TossState::new(c, max_throw).expect("subset of 0..m"))
        .collect())
}

/// The state graph for `balls` particles and maximum throw `max_throw`.
pub fn build_state_graph(balls: u8, max_throw: u8) -> Result<TossGraph> {
    let nodes = all_states(balls, max_throw)?;
    Ok(StateGraph::from_successors(
        GraphKind::Toss { balls, max_throw },
        nodes,
        |s| s.successors().collect::<Vec<_>>(),
    ))
}

/// The state before each beat of a valid pattern, using maximum throw `max_throw`.
///
/// Entry `i` collects every landing offset `d >= 0` such that some beat
/// `j < i` throws a particle that comes down at `i + d`.
pub fn pattern_states(pattern: &Siteswap, max_throw: u8) -> Result<Vec<TossState>> {
    crate::siteswap::particle_count(pattern)?;
    check_capacity(max_throw)?;
    let needed = pattern.max_throw();
    if max_throw < needed {
        return Err(Error::CapacityTooSmall {
            capacity: max_throw,
            needed,
        });
    }
    let n = pattern.period() as i64;
    let m = max_throw as i64;
    let states = (0..n)
        .map(|i| {
            let landing = ((i - m)..i).filter_map(|j| {
                let land = j + pattern.throw_at(j) as i64;
                (land >= i).then(|| (land - i) as u8)
            });
            TossState::new(landing, max_throw).expect("landing offsets are below the maximum throw")
        })
        .collect();
    Ok(states)
}

/// [`pattern_states`] with the maximum throw taken from the pattern itself (at least 1).
pub fn pattern_states_default(pattern: &Siteswap) -> Result<Vec<TossState>> {
    pattern_states(pattern, pattern.max_throw().max(1))
}

/// Reads the throw labels off a cyclic sequence of states.
pub fn cycle_to_pattern(states: &[TossState]) -> Result<Siteswap> {
    if states.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = states.len();
    let throws = (0..n)
        .map(|i| {
            let (from, to) = (&states[i], &states[(i + 1) % n]);
            if from.capacity() != to.capacity() {
                return Err(Error::NotATransition(i, (i + 1) % n));
            }
            from.successors()
                .find(|(_, s)| s == to)
                .map(|(t, _)| t)
                .ok_or(Error::NotATransition(i, (i + 1) % n))
        })
        .collect::<Result<Vec<_>>>()?;
    Siteswap::new(throws)
}

/// Shortest throw sequence taking `from` to `to`, lexicographically smallest on ties.
pub fn find_transition(from: &TossState, to: &TossState) -> Result<Vec<u8>> {
    if from.capacity() != to.capacity() || from.balls() != to.balls() {
        return Err(Error::BadParameters(format!(
            "states {from} (max throw {}) and {to} (max throw {}) differ in particles or maximum throw",
            from.capacity(),
            to.capacity()
        )));
    }
    let (word, _) = lex_bfs(*from, |s| s.successors().collect::<Vec<_>>(), |s| s == to)
        .expect("toss state graphs are strongly connected");
    Ok(word)
}
