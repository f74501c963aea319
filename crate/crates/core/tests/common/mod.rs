//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the code paths it is used to check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Every throw sequence of length `1..=max_period` over `0..=max_throw`.
pub fn all_patterns(max_period: usize, max_throw: u8) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..max_period {
        layer = layer
            .iter()
            .flat_map(|p| {
                (0..=max_throw).map(move |t| {
                    let mut q = p.clone();
                    q.push(t);
                    q
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub struct Simulation {
    /// Pairs of beat indices within one period whose particles land together.
    pub collisions: Vec<(usize, usize)>,
    /// Particles in the air at a beat boundary well inside the window.
    pub particles: u32,
}

/// Throws the pattern at every beat of a long window and records who lands where.
///
/// The window spans enough periods that any two beats with colliding
/// landing residues meet inside it.
pub fn simulate_landings(throws: &[u8]) -> Simulation {
    let n = throws.len();
    let max = *throws.iter().max().unwrap() as usize;
    let periods = 3 + max;
    let beats = n * periods;
    let mut landings: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for j in 0..beats {
        landings.entry(j + throws[j % n] as usize).or_default().push(j % n);
    }
    let mut pairs = BTreeSet::new();
    for sources in landings.values() {
        for (a, &i) in sources.iter().enumerate() {
            for &j in &sources[a + 1..] {
                if i != j {
                    pairs.insert((i.min(j), i.max(j)));
                }
            }
        }
    }
    let t = max + n;
    let particles = (0..t)
        .filter(|&j| j + throws[j % n] as usize >= t && throws[j % n] > 0)
        .count() as u32;
    Simulation {
        collisions: pairs.into_iter().collect(),
        particles,
    }
}

/// Toss transition rule written directly on sorted vectors.
pub fn step_state(state: &[u8], throw: u8, m: u8) -> Option<Vec<u8>> {
    if throw > m {
        return None;
    }
    let lands_now = state.first() == Some(&0);
    let mut next: Vec<u8> = state.iter().filter(|&&x| x != 0).map(|&x| x - 1).collect();
    match (lands_now, throw) {
        (false, 0) => {}
        (true, t) if t > 0 && !next.contains(&(t - 1)) => next.push(t - 1),
        _ => return None,
    }
    next.sort_unstable();
    Some(next)
}

/// All `k`-subsets of `0..m` by bitmask enumeration, sorted.
pub fn subsets(k: u8, m: u8) -> Vec<Vec<u8>> {
    let mut v: Vec<Vec<u8>> = (0u64..1 << m)
        .filter(|mask| mask.count_ones() == k as u32)
        .map(|mask| (0..m).filter(|&x| mask & (1 << x) != 0).collect())
        .collect();
    v.sort();
    v
}

/// Adjacency of the `(k, m)` toss graph: state -> [(throw, successor)].
pub fn oracle_graph(k: u8, m: u8) -> BTreeMap<Vec<u8>, Vec<(u8, Vec<u8>)>> {
    subsets(k, m)
        .into_iter()
        .map(|s| {
            let out = (0..=m).filter_map(|t| step_state(&s, t, m).map(|n| (t, n))).collect();
            (s, out)
        })
        .collect()
}

pub fn reachable_from(graph: &BTreeMap<Vec<u8>, Vec<(u8, Vec<u8>)>>, start: &[u8]) -> BTreeSet<Vec<u8>> {
    let mut seen = BTreeSet::from([start.to_vec()]);
    let mut queue = VecDeque::from([start.to_vec()]);
    while let Some(s) = queue.pop_front() {
        for (_, t) in &graph[&s] {
            if seen.insert(t.clone()) {
                queue.push_back(t.clone());
            }
        }
    }
    seen
}

/// Lexicographically first shortest throw sequence, by trying every sequence
/// of each length in lexicographic order.
pub fn brute_force_transition(from: &[u8], to: &[u8], m: u8, max_len: usize) -> Option<Vec<u8>> {
    let base = m as u64 + 1;
    for len in 0..=max_len as u32 {
        for code in 0..base.pow(len) {
            // most significant digit first, so codes run in lexicographic order
            let seq: Vec<u8> = (0..len)
                .rev()
                .map(|i| (code / base.pow(i) % base) as u8)
                .collect();
            let mut s = Some(from.to_vec());
            for &t in &seq {
                s = s.and_then(|s| step_state(&s, t, m));
            }
            if s.as_deref() == Some(to) {
                return Some(seq);
            }
        }
    }
    None
}

/// Number of partitions of an `n`-set into `j` nonempty blocks, by
/// enumerating restricted growth strings.
pub fn count_set_partitions(n: usize, j: usize) -> u64 {
    fn go(pos: usize, n: usize, used: usize, j: usize) -> u64 {
        if pos == n {
            return (used == j) as u64;
        }
        if used + (n - pos) < j {
            return 0;
        }
        let mut total = 0;
        for block in 0..=used {
            if block < j {
                total += go(pos + 1, n, used.max(block + 1), j);
            }
        }
        total
    }
    if n == 0 {
        return (j == 0) as u64;
    }
    go(0, n, 0, j)
}
