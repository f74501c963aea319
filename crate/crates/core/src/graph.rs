//! Labeled directed graphs over juggling states.
//!
//! Nodes are kept sorted by the state's canonical order and each node's
//! out-edges are sorted by label, so iteration order (and every export built
//! on it) is deterministic.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// What a graph models; carried along for exports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Toss { balls: u8, max_throw: u8 },
    Poi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge<L> {
    pub label: L,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateGraph<S, L> {
    kind: GraphKind,
    nodes: Vec<S>,
    edges: Vec<Vec<Edge<L>>>,
}

impl<S, L> StateGraph<S, L>
where
    S: Clone + Ord + fmt::Display,
    L: Copy + Ord + fmt::Display,
{
    /// Builds a graph from a node list and `(from, label, to)` triples.
    ///
    /// Fails on duplicate nodes, dangling endpoints or two edges sharing a
    /// source and label.
    pub fn from_parts(
        kind: GraphKind,
        mut nodes: Vec<S>,
        edge_list: impl IntoIterator<Item = (S, L, S)>,
    ) -> Result<Self> {
        nodes.sort();
        if let Some(w) = nodes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::BadDocument(format!("duplicate node {}", w[0])));
        }
        let mut edges: Vec<Vec<Edge<L>>> = vec![Vec::new(); nodes.len()];
        let lookup = |s: &S| {
            nodes
                .binary_search(s)
                .map_err(|_| Error::BadDocument(format!("edge endpoint {s} is not a node")))
        };
        for (from, label, to) in edge_list {
            let source = lookup(&from)?;
            let target = lookup(&to)?;
            edges[source].push(Edge { label, target });
        }
        for (i, out) in edges.iter_mut().enumerate() {
            out.sort_by_key(|e| e.label);
            if let Some(w) = out.windows(2).find(|w| w[0].label == w[1].label) {
                return Err(Error::BadDocument(format!(
                    "node {} has two edges labeled {}",
                    nodes[i], w[0].label
                )));
            }
        }
        Ok(StateGraph { kind, nodes, edges })
    }

    /// Builds the graph reachable-or-not over `nodes` using a successor function.
    pub fn from_successors<I>(kind: GraphKind, nodes: Vec<S>, successors: impl Fn(&S) -> I) -> Self
    where
        I: IntoIterator<Item = (L, S)>,
    {
        let edge_list: Vec<(S, L, S)> = nodes
            .iter()
            .flat_map(|s| successors(s).into_iter().map(move |(l, t)| (s.clone(), l, t)))
            .collect();
        Self::from_parts(kind, nodes, edge_list).expect("successor function stays inside the node set")
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn nodes(&self) -> &[S] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> &S {
        &self.nodes[index]
    }

    pub fn index_of(&self, state: &S) -> Option<usize> {
        self.nodes.binary_search(state).ok()
    }

    pub fn out_edges(&self, index: usize) -> &[Edge<L>] {
        &self.edges[index]
    }

    pub fn out_degree(&self, index: usize) -> usize {
        self.edges[index].len()
    }

    pub fn successor(&self, index: usize, label: L) -> Option<usize> {
        self.edges[index]
            .binary_search_by_key(&label, |e| e.label)
            .ok()
            .map(|pos| self.edges[index][pos].target)
    }

    /// All edges as `(source, label, target)` in node-then-label order.
    pub fn edge_triples(&self) -> impl Iterator<Item = (usize, L, usize)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .flat_map(|(i, out)| out.iter().map(move |e| (i, e.label, e.target)))
    }

    /// Shortest label sequence from `from` to `to`, lexicographically smallest
    /// among the shortest; `None` when `to` is unreachable.
    pub fn shortest_word(&self, from: usize, to: usize) -> Option<Vec<L>> {
        lex_bfs(from, |&i| {
            self.edges[i].iter().map(|e| (e.label, e.target)).collect::<Vec<_>>()
        }, |&i| i == to)
        .map(|(word, _)| word)
    }

    /// True when every node reaches every other node.
    pub fn is_strongly_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let reach = |rev: bool| {
            let mut seen = vec![false; self.nodes.len()];
            let mut stack = vec![0usize];
            seen[0] = true;
            let rev_adj = rev.then(|| {
                let mut r = vec![Vec::new(); self.nodes.len()];
                for (s, _, t) in self.edge_triples() {
                    r[t].push(s);
                }
                r
            });
            while let Some(i) = stack.pop() {
                let next: Vec<usize> = match &rev_adj {
                    Some(r) => r[i].clone(),
                    None => self.edges[i].iter().map(|e| e.target).collect(),
                };
                for j in next {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            seen.into_iter().all(|b| b)
        };
        reach(false) && reach(true)
    }
}

/// Breadth-first search over an implicit graph, expanding labels in ascending
/// order and keeping the first parent found.
///
/// Nodes of each BFS layer are dequeued in lexicographic order of their
/// discovering words, so the first hit on a goal node carries the
/// lexicographically smallest shortest word. Returns that word together with
/// the goal node reached.
pub fn lex_bfs<N, L, I>(
    start: N,
    successors: impl Fn(&N) -> I,
    is_goal: impl Fn(&N) -> bool,
) -> Option<(Vec<L>, N)>
where
    N: Clone + Ord,
    L: Copy + Ord,
    I: IntoIterator<Item = (L, N)>,
{
    use std::collections::BTreeMap;

    if is_goal(&start) {
        return Some((Vec::new(), start));
    }
    let mut parent: BTreeMap<N, Option<(N, L)>> = BTreeMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        let mut next: Vec<(L, N)> = successors(&node).into_iter().collect();
        next.sort_by_key(|a| a.0);
        for (label, succ) in next {
            if parent.contains_key(&succ) {
                continue;
            }
            parent.insert(succ.clone(), Some((node.clone(), label)));
            if is_goal(&succ) {
                let mut word = Vec::new();
                let mut cur = succ.clone();
                while let Some(Some((prev, l))) = parent.get(&cur) {
                    word.push(*l);
                    cur = prev.clone();
                }
                word.reverse();
                return Some((word, succ));
            }
            queue.push_back(succ);
        }
    }
    None
}
