//! Random walks on state graphs.
//!
//! A [`TransitionKernel`] attaches an exact rational probability to every
//! edge of a graph. Its stationary distribution can be obtained three ways:
//! by an exact rational linear solve ([`stationary_exact`]), by power
//! iteration ([`stationary_numeric`]) and, for the uniform kernel on a toss
//! graph, by the closed product formula ([`warrington_distribution`]).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::StateGraph;
use crate::toss::{all_states, build_state_graph, TossState};

/// Name of the pseudo-random generator used by [`sample_walk`], recorded in every trace.
///
/// ChaCha with 8 rounds, seeded through `SeedableRng::seed_from_u64`; each
/// step consumes one `f64` in `[0, 1)` built from 53 random bits.
pub const GENERATOR: &str = "chacha8 (rand_chacha 0.9, seed_from_u64, f64 inversion)";

/// Per-node probabilities over a graph's out-edges, aligned with
/// [`StateGraph::out_edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionKernel<S, L> {
    graph: StateGraph<S, L>,
    probabilities: Vec<Vec<BigRational>>,
}

impl<S, L> TransitionKernel<S, L>
where
    S: Clone + Ord + fmt::Display,
    L: Copy + Ord + fmt::Display,
{
    /// Every out-edge of a node gets probability `1 / out-degree`.
    pub fn uniform(graph: StateGraph<S, L>) -> Self {
        let probabilities = (0..graph.node_count())
            .map(|i| {
                let d = graph.out_degree(i);
                vec![BigRational::new(BigInt::one(), BigInt::from(d)); d]
            })
            .collect();
        TransitionKernel {
            graph,
            probabilities,
        }
    }

    /// Checks that each row is non-negative and sums to exactly one.
    pub fn new(graph: StateGraph<S, L>, probabilities: Vec<Vec<BigRational>>) -> Result<Self> {
        if probabilities.len() != graph.node_count() {
            return Err(Error::BadKernel(format!(
                "{} probability rows for {} nodes",
                probabilities.len(),
                graph.node_count()
            )));
        }
        for (i, row) in probabilities.iter().enumerate() {
            let node = graph.node(i);
            if row.len() != graph.out_degree(i) {
                return Err(Error::BadKernel(format!(
                    "state {node}: {} probabilities for {} edges",
                    row.len(),
                    graph.out_degree(i)
                )));
            }
            if let Some(p) = row.iter().find(|p| p.is_negative()) {
                return Err(Error::BadKernel(format!("state {node}: negative probability {p}")));
            }
            let total: BigRational = row.iter().cloned().sum();
            if !total.is_one() {
                return Err(Error::BadKernel(format!(
                    "state {node}: probabilities sum to {total}, not 1"
                )));
            }
        }
        Ok(TransitionKernel {
            graph,
            probabilities,
        })
    }

    /// Builds a kernel by asking `prob(state, label)` for every edge.
    pub fn from_fn(graph: StateGraph<S, L>, prob: impl Fn(&S, L) -> BigRational) -> Result<Self> {
        let rows = (0..graph.node_count())
            .map(|i| {
                graph
                    .out_edges(i)
                    .iter()
                    .map(|e| prob(graph.node(i), e.label))
                    .collect()
            })
            .collect();
        Self::new(graph, rows)
    }

    pub fn graph(&self) -> &StateGraph<S, L> {
        &self.graph
    }

    pub fn row(&self, node: usize) -> &[BigRational] {
        &self.probabilities[node]
    }

    pub fn probability(&self, node: usize, label: L) -> BigRational {
        self.graph
            .out_edges(node)
            .iter()
            .position(|e| e.label == label)
            .map(|pos| self.probabilities[node][pos].clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// `(source, target, probability)` over edges with positive probability.
    fn support(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> + '_ {
        (0..self.graph.node_count()).flat_map(move |i| {
            self.graph
                .out_edges(i)
                .iter()
                .zip(&self.probabilities[i])
                .filter(|(_, p)| p.is_positive())
                .map(move |(e, p)| (i, e.target, p))
        })
    }

    /// Closed communicating classes of the support graph, each sorted.
    pub fn closed_classes(&self) -> Vec<Vec<usize>> {
        let n = self.graph.node_count();
        let mut g = DiGraph::<(), ()>::with_capacity(n, 0);
        let ix: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for (s, t, _) in self.support() {
            g.add_edge(ix[s], ix[t], ());
        }
        let mut component = vec![0usize; n];
        let sccs = tarjan_scc(&g);
        for (c, members) in sccs.iter().enumerate() {
            for v in members {
                component[v.index()] = c;
            }
        }
        let mut open = vec![false; sccs.len()];
        for (s, t, _) in self.support() {
            if component[s] != component[t] {
                open[component[s]] = true;
            }
        }
        let mut closed: Vec<Vec<usize>> = sccs
            .iter()
            .enumerate()
            .filter(|(c, _)| !open[*c])
            .map(|(_, members)| {
                let mut v: Vec<usize> = members.iter().map(|x| x.index()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        closed.sort();
        closed
    }

    fn single_closed_class(&self) -> Result<Vec<usize>> {
        let mut classes = self.closed_classes();
        if classes.len() == 1 {
            return Ok(classes.pop().unwrap());
        }
        Err(Error::NotIrreducible(
            classes
                .iter()
                .map(|c| c.iter().map(|&i| self.graph.node(i).to_string()).collect())
                .collect(),
        ))
    }
}

pub fn uniform_kernel<S, L>(graph: StateGraph<S, L>) -> TransitionKernel<S, L>
where
    S: Clone + Ord + fmt::Display,
    L: Copy + Ord + fmt::Display,
{
    TransitionKernel::uniform(graph)
}

/// A probability vector over states, exact or floating.
#[derive(Debug, Clone, PartialEq)]
pub enum StateDistribution<S> {
    Exact(BTreeMap<S, BigRational>),
    Approx(BTreeMap<S, f64>),
}

impl<S: Ord + Clone> StateDistribution<S> {
    pub fn is_exact(&self) -> bool {
        matches!(self, StateDistribution::Exact(_))
    }

    /// `"rational"` or `"float"`, as written to exports.
    pub fn mode(&self) -> &'static str {
        match self {
            StateDistribution::Exact(_) => "rational",
            StateDistribution::Approx(_) => "float",
        }
    }

    pub fn len(&self) -> usize {
        match self {
            StateDistribution::Exact(w) => w.len(),
            StateDistribution::Approx(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn states(&self) -> Vec<S> {
        match self {
            StateDistribution::Exact(w) => w.keys().cloned().collect(),
            StateDistribution::Approx(w) => w.keys().cloned().collect(),
        }
    }

    pub fn exact(&self, state: &S) -> Option<&BigRational> {
        match self {
            StateDistribution::Exact(w) => w.get(state),
            StateDistribution::Approx(_) => None,
        }
    }

    /// Weight of `state` as a float; zero for states not listed.
    pub fn weight(&self, state: &S) -> f64 {
        match self {
            StateDistribution::Exact(w) => w.get(state).map(to_f64).unwrap_or(0.0),
            StateDistribution::Approx(w) => w.get(state).copied().unwrap_or(0.0),
        }
    }

    pub fn to_f64(&self) -> BTreeMap<S, f64> {
        self.states().into_iter().map(|s| {
            let w = self.weight(&s);
            (s, w)
        }).collect()
    }

    fn union_states(&self, other: &Self) -> Vec<S> {
        let mut all = self.states();
        all.extend(other.states());
        all.sort();
        all.dedup();
        all
    }

    /// Half the L1 distance; states missing from one side count as zero.
    pub fn total_variation(&self, other: &Self) -> f64 {
        0.5 * self
            .union_states(other)
            .iter()
            .map(|s| (self.weight(s) - other.weight(s)).abs())
            .sum::<f64>()
    }

    /// L-infinity distance.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.union_states(other)
            .iter()
            .map(|s| (self.weight(s) - other.weight(s)).abs())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact stationary distribution by rational Gaussian elimination.
///
/// Solves `pi P = pi` with the last balance equation replaced by `sum(pi) = 1`.
/// Requires a single closed communicating class; transient states get weight 0.
pub fn stationary_exact<S, L>(kernel: &TransitionKernel<S, L>) -> Result<StateDistribution<S>>
where
    S: Clone + Ord + fmt::Display,
    L: Copy + Ord + fmt::Display,
{
    kernel.single_closed_class()?;
    let n = kernel.graph.node_count();

    // Row j: sum_i pi_i P[i][j] - pi_j = 0
    let mut a: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n + 1]; n];
    for (i, j, p) in kernel.support() {
        a[j][i] += p;
    }
    for (j, row) in a.iter_mut().enumerate() {
        row[j] -= BigRational::one();
    }
    a[n - 1] = vec![BigRational::one(); n + 1];

    let pi = solve_in_place(&mut a).ok_or_else(|| {
        Error::NotIrreducible(vec![kernel.graph.nodes().iter().map(|s| s.to_string()).collect()])
    })?;
    Ok(StateDistribution::Exact(
        kernel.graph.nodes().iter().cloned().zip(pi).collect(),
    ))
}

/// Solves the square system stored as an augmented matrix; `None` if singular.
fn solve_in_place(a: &mut [Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let (head, below) = a.split_at_mut(col + 1);
        let pivot_row = &head[col];
        for row in below.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = a[i][n].clone();
        for j in i + 1..n {
            if !a[i][j].is_zero() {
                acc -= &a[i][j] * &x[j];
            }
        }
        x[i] = acc / &a[i][i];
    }
    Some(x)
}

/// Stationary distribution by power iteration from the uniform vector.
///
/// For a chain of period `d` the iterate is averaged over the last `d` steps
/// before the L1 convergence test, so deterministic cycles converge too.
pub fn stationary_numeric<S, L>(
    kernel: &TransitionKernel<S, L>,
    tolerance: f64,
    max_iterations: usize,
) -> Result<StateDistribution<S>>
where
    S: Clone + Ord + fmt::Display,
    L: Copy + Ord + fmt::Display,
{
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::BadParameters(format!("tolerance must be positive, got {tolerance}")));
    }
    let class = kernel.single_closed_class()?;
    let period = chain_period(kernel, &class);
    let n = kernel.graph.node_count();
    let edges: Vec<(usize, usize, f64)> = kernel.support().map(|(i, j, p)| (i, j, to_f64(p))).collect();

    let step = |pi: &[f64]| {
        let mut next = vec![0.0; n];
        for &(i, j, p) in &edges {
            next[j] += pi[i] * p;
        }
        next
    };
    let average = |window: &std::collections::VecDeque<Vec<f64>>| {
        let mut avg = vec![0.0; n];
        for v in window {
            for (a, x) in avg.iter_mut().zip(v) {
                *a += x;
            }
        }
        let total: f64 = avg.iter().sum();
        avg.iter_mut().for_each(|a| *a /= total);
        avg
    };

    let mut window = std::collections::VecDeque::with_capacity(period + 1);
    window.push_back(vec![1.0 / n as f64; n]);
    for _ in 1..period {
        let next = step(window.back().unwrap());
        window.push_back(next);
    }
    let mut previous = average(&window);
    for _ in 0..max_iterations {
        let next = step(window.back().unwrap());
        window.push_back(next);
        window.pop_front();
        let current = average(&window);
        let diff: f64 = current.iter().zip(&previous).map(|(a, b)| (a - b).abs()).sum();
        previous = current;
        if diff < tolerance {
            return Ok(StateDistribution::Approx(
                kernel.graph.nodes().iter().cloned().zip(previous).collect(),
            ));
        }
    }
    Err(Error::NoConvergence(max_iterations))
}

/// Period of the chain restricted to a closed class: gcd of `level(u) + 1 - level(v)` over class edges.
fn chain_period<S, L>(kernel: &TransitionKernel<S, L>, class: &[usize]) -> usize
where
    S: Clone + Ord + fmt::Display,
    L: Copy + Ord + fmt::Display,
{
    let n = kernel.graph.node_count();
    let mut in_class = vec![false; n];
    class.iter().for_each(|&i| in_class[i] = true);
    let mut adj = vec![Vec::new(); n];
    for (i, j, _) in kernel.support() {
        if in_class[i] && in_class[j] {
            adj[i].push(j);
        }
    }
    let mut level: Vec<Option<i64>> = vec![None; n];
    level[class[0]] = Some(0);
    let mut queue = std::collections::VecDeque::from([class[0]]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if level[v].is_none() {
                level[v] = Some(level[u].unwrap() + 1);
                queue.push_back(v);
            }
        }
    }
    let mut g = 0i64;
    for &u in class {
        for &v in &adj[u] {
            g = g.gcd(&(level[u].unwrap() + 1 - level[v].unwrap()));
        }
    }
    g.max(1) as usize
}

/// Stirling number of the second kind: partitions of an `n`-set into `j` nonempty blocks.
pub fn stirling2(n: usize, j: usize) -> Result<BigUint> {
    if j > n {
        return Err(Error::BadParameters(format!("stirling2 needs j <= n, got n = {n}, j = {j}")));
    }
    // row[b] = S(i, b) for the current i
    let mut row = vec![BigUint::zero(); j + 1];
    row[0] = BigUint::one();
    for _ in 1..=n {
        for b in (1..=j).rev() {
            let keep = &row[b] * BigUint::from(b);
            row[b] = keep + &row[b - 1];
        }
        row[0] = BigUint::zero();
    }
    Ok(row.swap_remove(j))
}

/// Numerator of the closed-form frequency: the product over `x` in the state of
/// the number of slots in `{x, ..., m}` not in the state.
pub fn frequency_weight(state: &TossState) -> BigUint {
    let m = state.capacity();
    state
        .elements()
        .map(|x| {
            let above = state.elements().filter(|&b| b >= x).count() as u32;
            BigUint::from((m - x + 1) as u32 - above)
        })
        .product()
}

/// Long-run visit frequency of `state` under uniform random juggling with
/// `balls` particles and maximum throw `max_throw`, as a reduced fraction.
pub fn warrington_frequency(state: &TossState, balls: u8, max_throw: u8) -> Result<BigRational> {
    if state.balls() != balls || state.capacity() != max_throw {
        return Err(Error::BadParameters(format!(
            "state {state} has {} particles and maximum throw {}, expected {balls} and {max_throw}",
            state.balls(),
            state.capacity()
        )));
    }
    let m = max_throw as usize;
    let norm = stirling2(m + 1, m + 1 - balls as usize)?;
    Ok(BigRational::new(
        BigInt::from(frequency_weight(state)),
        BigInt::from(norm),
    ))
}

/// [`warrington_frequency`] over every state of the `(balls, max_throw)` graph.
pub fn warrington_distribution(balls: u8, max_throw: u8) -> Result<StateDistribution<TossState>> {
    let states = all_states(balls, max_throw)?;
    let weights = states
        .into_iter()
        .map(|s| warrington_frequency(&s, balls, max_throw).map(|w| (s, w)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(StateDistribution::Exact(weights))
}

/// Uniform kernel on the toss graph for `(balls, max_throw)`.
pub fn uniform_toss_kernel(balls: u8, max_throw: u8) -> Result<TransitionKernel<TossState, u8>> {
    Ok(TransitionKernel::uniform(build_state_graph(balls, max_throw)?))
}

/// A seeded walk: the start state and each `(label, state)` step taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkTrace<S, L> {
    pub seed: u64,
    pub generator: &'static str,
    pub start: S,
    pub steps: Vec<(L, S)>,
}

/// Samples `steps` transitions from `start`, reproducibly for a given seed.
///
/// Each step draws `u` uniform in `[0, 1)` and takes the first out-edge (in
/// ascending label order) whose cumulative probability exceeds `u`.
pub fn sample_walk<S, L>(
    kernel: &TransitionKernel<S, L>,
    start: &S,
    steps: usize,
    seed: u64,
) -> Result<WalkTrace<S, L>>
where
    S: Clone + Ord + fmt::Display,
    L: Copy + Ord + fmt::Display,
{
    let graph = &kernel.graph;
    let mut node = graph
        .index_of(start)
        .ok_or_else(|| Error::BadStart(start.to_string()))?;
    let cumulative: Vec<Vec<(f64, usize)>> = (0..graph.node_count())
        .map(|i| {
            let mut acc = 0.0;
            graph
                .out_edges(i)
                .iter()
                .zip(&kernel.probabilities[i])
                .enumerate()
                .filter(|(_, (_, p))| p.is_positive())
                .map(|(pos, (_, p))| {
                    acc += to_f64(p);
                    (acc, pos)
                })
                .collect()
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = Vec::with_capacity(steps);
    for _ in 0..steps {
        let u: f64 = rng.random();
        let row = &cumulative[node];
        let pos = row
            .iter()
            .find(|(c, _)| u < *c)
            .or(row.last())
            .map(|&(_, pos)| pos)
            .expect("every node has an edge with positive probability");
        let edge = graph.out_edges(node)[pos];
        node = edge.target;
        trace.push((edge.label, graph.node(node).clone()));
    }
    Ok(WalkTrace {
        seed,
        generator: GENERATOR,
        start: start.clone(),
        steps: trace,
    })
}

/// Visit counts over the states entered by the walk, divided by its length.
pub fn empirical_frequencies<S: Clone + Ord, L>(trace: &WalkTrace<S, L>) -> Result<StateDistribution<S>> {
    if trace.steps.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let mut counts: BTreeMap<S, u64> = BTreeMap::new();
    for (_, s) in &trace.steps {
        *counts.entry(s.clone()).or_default() += 1;
    }
    let len = BigInt::from(trace.steps.len());
    Ok(StateDistribution::Exact(
        counts
            .into_iter()
            .map(|(s, c)| (s, BigRational::new(BigInt::from(c), len.clone())))
            .collect(),
    ))
}

/// Parses `"3/10"`, `"0.25"`, `"1"` or `"1e-3"`-free decimals into an exact rational.
pub fn parse_probability(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::BadKernel(format!("{text:?} is not a probability (use decimals or p/q)"));
    let value = if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        BigRational::new(p, q)
    } else {
        let (whole, frac) = t.split_once('.').unwrap_or((t, ""));
        let digits_ok = |s: &str| s.chars().all(|c| c.is_ascii_digit());
        if (whole.is_empty() && frac.is_empty()) || !digits_ok(whole) || !digits_ok(frac) {
            return Err(bad());
        }
        let numer: BigInt = format!("0{whole}{frac}").parse().map_err(|_| bad())?;
        BigRational::new(numer, num_traits::pow(BigInt::from(10), frac.len()))
    };
    if value.is_negative() || value > BigRational::one() {
        return Err(bad());
    }
    Ok(value)
}
