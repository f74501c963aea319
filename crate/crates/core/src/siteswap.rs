//! Vanilla siteswap notation: parsing, validation and particle counts.
//!
//! A pattern is a finite periodic throw schedule. Beat `i` throws
//! `throws[i mod n]`; the particle thrown there is next thrown at beat
//! `i + throws[i mod n]`. A schedule is jugglable when no two beats send a
//! particle to the same future beat, which for a periodic schedule reduces to
//! the landing residues `(i + throws[i]) mod n` being pairwise distinct.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest throw expressible in the single-character notation (`z`).
pub const MAX_THROW: u8 = 35;

/// Numeric value of a notation character: `0`-`9`, then `a`-`z` (either case) for 10-35.
pub fn throw_from_char(c: char) -> Option<u8> {
    c.to_digit(36).map(|v| v as u8)
}

/// Lowercase notation character for a throw value.
///
/// Panics if `throw > MAX_THROW`.
pub fn throw_to_char(throw: u8) -> char {
    assert!(throw <= MAX_THROW, "throw {throw} has no notation character");
    char::from_digit(throw as u32, 36).unwrap()
}

/// Renders a throw sequence in notation form, e.g. `[4, 5, 0]` as `"450"`.
pub fn render_throws(throws: &[u8]) -> String {
    throws.iter().map(|&t| throw_to_char(t)).collect()
}

/// A periodic throw sequence with period `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Siteswap {
    throws: Vec<u8>,
}

impl Siteswap {
    pub fn new(throws: Vec<u8>) -> Result<Self> {
        if throws.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(&t) = throws.iter().find(|&&t| t > MAX_THROW) {
            return Err(Error::ThrowTooLarge(t as u32));
        }
        Ok(Siteswap { throws })
    }

    pub fn throws(&self) -> &[u8] {
        &self.throws
    }

    pub fn period(&self) -> usize {
        self.throws.len()
    }

    pub fn max_throw(&self) -> u8 {
        self.throws.iter().copied().max().unwrap_or(0)
    }

    /// Throw at an arbitrary (possibly negative) beat.
    pub fn throw_at(&self, beat: i64) -> u8 {
        let n = self.period() as i64;
        self.throws[beat.rem_euclid(n) as usize]
    }

    pub fn validate(&self) -> ValidityReport {
        validate(self)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().valid
    }
}

impl FromStr for Siteswap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_siteswap(s)
    }
}

impl fmt::Display for Siteswap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_throws(&self.throws))
    }
}

/// Parses notation such as `"450"` or `"b1"`; letters are case-insensitive.
pub fn parse_siteswap(text: &str) -> Result<Siteswap> {
    if text.is_empty() {
        return Err(Error::EmptyInput);
    }
    let throws = text
        .chars()
        .enumerate()
        .map(|(position, ch)| throw_from_char(ch).ok_or(Error::InvalidCharacter { position, ch }))
        .collect::<Result<Vec<_>>>()?;
    Siteswap::new(throws)
}

/// Outcome of [`validate`]. Invalid notation is reported here rather than as an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub valid: bool,
    /// `Some` exactly when `valid`.
    pub particle_count: Option<u32>,
    /// Every pair of beat indices `(i, j)`, `i < j`, whose landings share a residue.
    pub collisions: Vec<(usize, usize)>,
}

pub fn validate(pattern: &Siteswap) -> ValidityReport {
    let n = pattern.period();
    let residues: Vec<usize> = pattern
        .throws
        .iter()
        .enumerate()
        .map(|(i, &t)| (i + t as usize) % n)
        .collect();

    let mut by_residue: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &r) in residues.iter().enumerate() {
        by_residue[r].push(i);
    }
    let mut collisions = Vec::new();
    for beats in &by_residue {
        for (a, &i) in beats.iter().enumerate() {
            for &j in &beats[a + 1..] {
                collisions.push((i, j));
            }
        }
    }
    collisions.sort_unstable();

    let valid = collisions.is_empty();
    let particle_count = valid.then(|| {
        let sum: u32 = pattern.throws.iter().map(|&t| t as u32).sum();
        debug_assert_eq!(sum % n as u32, 0);
        sum / n as u32
    });
    ValidityReport {
        valid,
        particle_count,
        collisions,
    }
}

/// Average throw of a valid pattern, which equals its number of particles.
pub fn particle_count(pattern: &Siteswap) -> Result<u32> {
    let report = validate(pattern);
    report
        .particle_count
        .ok_or_else(|| Error::InvalidPattern(format!("{pattern} has colliding throws")))
}

/// Lexicographically smallest rotation of the throw sequence.
pub fn canonical_rotation(pattern: &Siteswap) -> Siteswap {
    let n = pattern.period();
    let best = (0..n)
        .map(|r| pattern.throws[r..].iter().chain(&pattern.throws[..r]).copied().collect::<Vec<_>>())
        .min()
        .expect("period is at least one");
    Siteswap { throws: best }
}
