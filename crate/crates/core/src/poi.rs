//! Poi spinning as a state machine.
//!
//! The tethers are treated as extended hands hanging from a fixed shoulder
//! line. Each beat both hands turn half a circle: the hand that was down
//! comes up and the other goes down. Only the rising hand may pass to the
//! other side of the body; a move that does so is labeled `R`, one that
//! does not is labeled `B`. A state records which hand is up and the side
//! each hand is on. The crossing count (how braided the tethers are) is the
//! number of hands away from their own side, so it never exceeds two.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::graph::{lex_bfs, GraphKind, StateGraph};
use crate::walk::TransitionKernel;

pub type PoiGraph = StateGraph<PoiState, MoveLabel>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hand {
    Left,
    Right,
}

impl Hand {
    pub fn other(self) -> Hand {
        match self {
            Hand::Left => Hand::Right,
            Hand::Right => Hand::Left,
        }
    }

    /// The side of the body the hand belongs to.
    pub fn natural_side(self) -> Side {
        match self {
            Hand::Left => Side::Left,
            Hand::Right => Side::Right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// `B` keeps the rising hand on its side, `R` takes it across.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveLabel {
    B,
    R,
}

impl fmt::Display for MoveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveLabel::B => "B",
            MoveLabel::R => "R",
        })
    }
}

impl MoveLabel {
    pub fn from_char(c: char) -> Option<MoveLabel> {
        match c.to_ascii_uppercase() {
            'B' => Some(MoveLabel::B),
            'R' => Some(MoveLabel::R),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PoiState {
    pub up: Hand,
    pub left_at: Side,
    pub right_at: Side,
}

impl PoiState {
    /// Untangled tethers with the given hand up.
    pub fn ground(up: Hand) -> PoiState {
        PoiState {
            up,
            left_at: Side::Left,
            right_at: Side::Right,
        }
    }

    /// Both ground states, left hand up first.
    pub fn grounds() -> [PoiState; 2] {
        [PoiState::ground(Hand::Left), PoiState::ground(Hand::Right)]
    }

    pub fn all() -> Vec<PoiState> {
        let hands = [Hand::Left, Hand::Right];
        let sides = [Side::Left, Side::Right];
        let mut v = Vec::with_capacity(8);
        for up in hands {
            for left_at in sides {
                for right_at in sides {
                    v.push(PoiState { up, left_at, right_at });
                }
            }
        }
        v
    }

    pub fn side_of(&self, hand: Hand) -> Side {
        match hand {
            Hand::Left => self.left_at,
            Hand::Right => self.right_at,
        }
    }

    pub fn crossing_count(&self) -> u8 {
        [Hand::Left, Hand::Right]
            .into_iter()
            .filter(|&h| self.side_of(h) != h.natural_side())
            .count() as u8
    }

    pub fn is_ground(&self) -> bool {
        self.crossing_count() == 0
    }

    /// Mirror image through the body's midline: hands swap roles and sides reflect.
    pub fn mirror(&self) -> PoiState {
        PoiState {
            up: self.up.other(),
            left_at: self.right_at.flip(),
            right_at: self.left_at.flip(),
        }
    }

    pub fn advance(&self, label: MoveLabel) -> PoiState {
        let rising = self.up.other();
        let mut next = PoiState { up: rising, ..*self };
        if label == MoveLabel::R {
            match rising {
                Hand::Left => next.left_at = next.left_at.flip(),
                Hand::Right => next.right_at = next.right_at.flip(),
            }
        }
        next
    }

    /// Export identifier, e.g. `up=L;L@l;R@r;c=0`.
    pub fn id(&self) -> String {
        let hand = |h: Hand| if h == Hand::Left { 'L' } else { 'R' };
        let side = |s: Side| if s == Side::Left { 'l' } else { 'r' };
        format!(
            "up={};L@{};R@{};c={}",
            hand(self.up),
            side(self.left_at),
            side(self.right_at),
            self.crossing_count()
        )
    }
}

impl fmt::Display for PoiState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for PoiState {
    type Err = Error;

    /// Accepts the export identifier; the `c=` field is optional but must agree if given.
    fn from_str(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::BadState(text.to_string(), why.to_string());
        let parts: Vec<&str> = text.trim().split(';').map(str::trim).collect();
        if parts.len() != 3 && parts.len() != 4 {
            return Err(bad("expected up=<L|R>;L@<l|r>;R@<l|r>[;c=<n>]"));
        }
        let up = match parts[0] {
            "up=L" => Hand::Left,
            "up=R" => Hand::Right,
            _ => return Err(bad("first field must be up=L or up=R")),
        };
        let side = |field: &str, prefix: &str| match field.strip_prefix(prefix) {
            Some("l") => Ok(Side::Left),
            Some("r") => Ok(Side::Right),
            _ => Err(bad(&format!("expected {prefix}l or {prefix}r"))),
        };
        let state = PoiState {
            up,
            left_at: side(parts[1], "L@")?,
            right_at: side(parts[2], "R@")?,
        };
        if let Some(c) = parts.get(3) {
            if *c != format!("c={}", state.crossing_count()) {
                return Err(bad("crossing count does not match the hand sides"));
            }
        }
        Ok(state)
    }
}

/// A nonempty sequence of moves, e.g. `RRB`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PoiWord(Vec<MoveLabel>);

impl PoiWord {
    pub fn new(labels: Vec<MoveLabel>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(PoiWord(labels))
    }

    pub fn labels(&self) -> &[MoveLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn repeated(&self, times: usize) -> PoiWord {
        PoiWord(self.0.repeat(times.max(1)))
    }
}

impl FromStr for PoiWord {
    type Err = Error;

    /// Parses `R`/`B` letters (either case). Whitespace and the parentheses
    /// used to mark entry and exit moves are ignored.
    fn from_str(text: &str) -> Result<Self> {
        let labels = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace() && *c != '(' && *c != ')')
            .map(|(position, ch)| MoveLabel::from_char(ch).ok_or(Error::InvalidCharacter { position, ch }))
            .collect::<Result<Vec<_>>>()?;
        PoiWord::new(labels)
    }
}

impl fmt::Display for PoiWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|l| write!(f, "{l}"))
    }
}

pub fn poi_advance(state: &PoiState, label: MoveLabel) -> PoiState {
    state.advance(label)
}

/// The eight-state poi graph, one `B` and one `R` edge out of every state.
pub fn build_poi_graph() -> PoiGraph {
    StateGraph::from_successors(GraphKind::Poi, PoiState::all(), |s| {
        [MoveLabel::B, MoveLabel::R].map(|l| (l, s.advance(l)))
    })
}

/// Folds the moves over `start`; the trajectory holds the state after each move.
pub fn run_word(start: &PoiState, labels: &[MoveLabel]) -> (PoiState, Vec<PoiState>) {
    let trajectory: Vec<PoiState> = labels
        .iter()
        .scan(*start, |s, &l| {
            *s = s.advance(l);
            Some(*s)
        })
        .collect();
    (trajectory.last().copied().unwrap_or(*start), trajectory)
}

/// True when the word brings `start` back to itself.
pub fn is_cycle(start: &PoiState, word: &PoiWord) -> bool {
    run_word(start, word.labels()).0 == *start
}

/// States from which the word can be spun as a steady periodic pattern.
///
/// An even-length word must return to its starting state. An odd-length word
/// cannot (the up hand alternates), so it is repeated with the hands' roles
/// swapped: one pass must end in the mirror image of the starting state, and
/// two passes close the cycle.
pub fn cycle_starts(word: &PoiWord) -> Vec<PoiState> {
    PoiState::all()
        .into_iter()
        .filter(|s| {
            let end = run_word(s, word.labels()).0;
            if word.len().is_multiple_of(2) {
                end == *s
            } else {
                end == s.mirror()
            }
        })
        .collect()
}

/// Number of moves after which the word's cycle closes from one of its starts.
pub fn cycle_length(word: &PoiWord) -> usize {
    if word.len().is_multiple_of(2) {
        word.len()
    } else {
        2 * word.len()
    }
}

/// How to reach a word's steady cycle from the ground pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    /// Ground state the entry starts from.
    pub from: PoiState,
    /// Moves before the word begins; empty when a ground state already starts the cycle.
    pub moves: Vec<MoveLabel>,
    /// State in which the word's first move is made.
    pub start: PoiState,
}

impl Entry {
    pub fn starts_on_ground(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn moves_text(&self) -> String {
        self.moves.iter().map(|l| l.to_string()).collect()
    }
}

/// Shortest move sequence from a ground state into a state that starts the
/// word's cycle. Ties prefer `B` over `R` position by position, then the
/// left-hand-up ground state.
pub fn find_entry(word: &PoiWord) -> Result<Entry> {
    let starts = cycle_starts(word);
    if starts.is_empty() {
        return Err(Error::NoCycle(word.to_string()));
    }
    PoiState::grounds()
        .into_iter()
        .filter_map(|g| {
            lex_bfs(
                g,
                |s: &PoiState| [MoveLabel::B, MoveLabel::R].map(|l| (l, s.advance(l))),
                |s| starts.contains(s),
            )
            .map(|(moves, start)| Entry { from: g, moves, start })
        })
        .min_by(|a, b| (a.moves.len(), &a.moves).cmp(&(b.moves.len(), &b.moves)))
        .ok_or_else(|| Error::NoCycle(word.to_string()))
}

/// Kernel taking `R` with probability `p_r` and `B` otherwise, in every state.
pub fn poi_kernel(p_r: &BigRational) -> Result<TransitionKernel<PoiState, MoveLabel>> {
    if !p_r.is_positive() || *p_r >= BigRational::one() {
        return Err(Error::BadProbability(p_r.to_string()));
    }
    let p_b = BigRational::one() - p_r;
    TransitionKernel::from_fn(build_poi_graph(), |_, l| match l {
        MoveLabel::R => p_r.clone(),
        MoveLabel::B => p_b.clone(),
    })
}

/// Convenience wrapper for `p_r = numer / denom`.
pub fn poi_kernel_ratio(numer: i64, denom: i64) -> Result<TransitionKernel<PoiState, MoveLabel>> {
    if denom == 0 {
        return Err(Error::BadProbability(format!("{numer}/{denom}")));
    }
    poi_kernel(&BigRational::new(BigInt::from(numer), BigInt::from(denom)))
}
