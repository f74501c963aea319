//! File formats: DOT and JSON exports, and the JSON kernel configuration file.
//!
//! Every JSON document carries `schema_version` (currently 1). Toss states are
//! written as comma-separated sorted offsets (`"0,2,3"`), poi states as
//! `up=L;L@l;R@r;c=0`, throw labels as their notation character.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::combine::CombinedPattern;
use crate::error::{Error, Result};
use crate::graph::{GraphKind, StateGraph};
use crate::poi::{MoveLabel, PoiGraph, PoiState};
use crate::siteswap::{throw_from_char, throw_to_char, MAX_THROW};
use crate::toss::{TossGraph, TossState};
use crate::walk::{parse_probability, to_f64, StateDistribution, TransitionKernel, WalkTrace};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Dot,
    Json,
    Table,
}

/// Rendered output in one of the supported formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExportDocument {
    pub format: Format,
    pub payload: String,
}

/// Edge labels as they appear in exports.
pub trait ExportLabel: Copy + Ord + fmt::Display {
    fn export(&self) -> String;
    fn parse_export(text: &str) -> Option<Self>;
}

impl ExportLabel for u8 {
    fn export(&self) -> String {
        throw_to_char(*self).to_string()
    }

    /// A single notation character, or a decimal number up to 35.
    fn parse_export(text: &str) -> Option<Self> {
        let mut chars = text.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => throw_from_char(c),
            _ => text.parse::<u8>().ok().filter(|&t| t <= MAX_THROW),
        }
    }
}

impl ExportLabel for MoveLabel {
    fn export(&self) -> String {
        self.to_string()
    }

    fn parse_export(text: &str) -> Option<Self> {
        let mut chars = text.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => MoveLabel::from_char(c),
            _ => None,
        }
    }
}

fn graph_name(kind: GraphKind) -> String {
    match kind {
        GraphKind::Toss { balls, max_throw } => format!("toss_k{balls}_m{max_throw}"),
        GraphKind::Poi => "poi".to_string(),
    }
}

/// DOT digraph: one quoted node per state in canonical order, then edges by
/// source state and label.
pub fn export_dot<S, L>(graph: &StateGraph<S, L>) -> ExportDocument
where
    S: Clone + Ord + fmt::Display,
    L: ExportLabel,
{
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", graph_name(graph.kind())).unwrap();
    for s in graph.nodes() {
        writeln!(out, "  \"{s}\";").unwrap();
    }
    for (from, label, to) in graph.edge_triples() {
        writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            graph.node(from),
            graph.node(to),
            label.export()
        )
        .unwrap();
    }
    out.push_str("}\n");
    ExportDocument {
        format: Format::Dot,
        payload: out,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub schema_version: u32,
    pub kind: String,
    pub parameters: BTreeMap<String, u32>,
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub from: String,
    pub to: String,
    pub label: String,
}

pub fn graph_document<S, L>(graph: &StateGraph<S, L>) -> GraphDocument
where
    S: Clone + Ord + fmt::Display,
    L: ExportLabel,
{
    let (kind, parameters) = match graph.kind() {
        GraphKind::Toss { balls, max_throw } => (
            "toss",
            BTreeMap::from([("balls".to_string(), balls as u32), ("max_throw".to_string(), max_throw as u32)]),
        ),
        GraphKind::Poi => ("poi", BTreeMap::new()),
    };
    GraphDocument {
        schema_version: SCHEMA_VERSION,
        kind: kind.to_string(),
        parameters,
        nodes: graph.nodes().iter().map(|s| s.to_string()).collect(),
        edges: graph
            .edge_triples()
            .map(|(f, l, t)| EdgeRecord {
                from: graph.node(f).to_string(),
                to: graph.node(t).to_string(),
                label: l.export(),
            })
            .collect(),
    }
}

pub fn export_graph_json<S, L>(graph: &StateGraph<S, L>) -> ExportDocument
where
    S: Clone + Ord + fmt::Display,
    L: ExportLabel,
{
    ExportDocument {
        format: Format::Json,
        payload: to_pretty(&graph_document(graph)),
    }
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn read_graph_document(text: &str, expected_kind: &str) -> Result<GraphDocument> {
    let doc: GraphDocument =
        serde_json::from_str(text).map_err(|e| Error::BadDocument(e.to_string()))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::BadDocument(format!(
            "unsupported schema_version {}",
            doc.schema_version
        )));
    }
    if doc.kind != expected_kind {
        return Err(Error::BadDocument(format!(
            "expected a {expected_kind} graph, found {:?}",
            doc.kind
        )));
    }
    Ok(doc)
}

fn rebuild<S, L>(
    kind: GraphKind,
    doc: &GraphDocument,
    parse_state: impl Fn(&str) -> Result<S>,
) -> Result<StateGraph<S, L>>
where
    S: Clone + Ord + fmt::Display,
    L: ExportLabel,
{
    let nodes = doc
        .nodes
        .iter()
        .map(|id| parse_state(id))
        .collect::<Result<Vec<_>>>()?;
    let edges = doc
        .edges
        .iter()
        .map(|e| {
            let label = L::parse_export(&e.label)
                .ok_or_else(|| Error::BadDocument(format!("bad edge label {:?}", e.label)))?;
            Ok((parse_state(&e.from)?, label, parse_state(&e.to)?))
        })
        .collect::<Result<Vec<_>>>()?;
    StateGraph::from_parts(kind, nodes, edges)
}

/// Reads a toss graph written by [`export_graph_json`].
pub fn toss_graph_from_json(text: &str) -> Result<TossGraph> {
    let doc = read_graph_document(text, "toss")?;
    let param = |name: &str| {
        doc.parameters
            .get(name)
            .and_then(|&v| u8::try_from(v).ok())
            .ok_or_else(|| Error::BadDocument(format!("missing or bad parameter {name:?}")))
    };
    let (balls, max_throw) = (param("balls")?, param("max_throw")?);
    let graph = rebuild(GraphKind::Toss { balls, max_throw }, &doc, |id| {
        TossState::parse(id, max_throw)
    })?;
    if let Some(s) = graph.nodes().iter().find(|s| s.balls() != balls) {
        return Err(Error::BadDocument(format!("state {s} does not hold {balls} particles")));
    }
    Ok(graph)
}

/// Reads a poi graph written by [`export_graph_json`].
pub fn poi_graph_from_json(text: &str) -> Result<PoiGraph> {
    let doc = read_graph_document(text, "poi")?;
    rebuild(GraphKind::Poi, &doc, |id| id.parse::<PoiState>())
}

/// `{schema_version, mode, weights}`; rational weights as `"p/q"` strings,
/// float weights as numbers. Weights follow the canonical state order.
pub fn distribution_json<S: Clone + Ord + fmt::Display>(dist: &StateDistribution<S>) -> ExportDocument {
    let weights: Map<String, Value> = match dist {
        StateDistribution::Exact(w) => w
            .iter()
            .map(|(s, p)| (s.to_string(), Value::String(p.to_string())))
            .collect(),
        StateDistribution::Approx(w) => w.iter().map(|(s, p)| (s.to_string(), json!(p))).collect(),
    };
    ExportDocument {
        format: Format::Json,
        payload: to_pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "mode": dist.mode(),
            "weights": weights,
        })),
    }
}

/// One `state → weight` row per state.
pub fn distribution_table<S: Clone + Ord + fmt::Display>(dist: &StateDistribution<S>) -> ExportDocument {
    let mut out = String::new();
    match dist {
        StateDistribution::Exact(w) => {
            for (s, p) in w {
                writeln!(out, "{s} → {p}").unwrap();
            }
        }
        StateDistribution::Approx(w) => {
            for (s, p) in w {
                writeln!(out, "{s} → {p:.12}").unwrap();
            }
        }
    }
    ExportDocument {
        format: Format::Table,
        payload: out,
    }
}

pub fn trace_json<S: fmt::Display, L: ExportLabel>(trace: &WalkTrace<S, L>) -> ExportDocument {
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|(l, s)| json!({ "label": l.export(), "state": s.to_string() }))
        .collect();
    ExportDocument {
        format: Format::Json,
        payload: to_pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "generator": trace.generator,
            "seed": trace.seed,
            "start": trace.start.to_string(),
            "steps": steps,
        })),
    }
}

pub fn timeline_json(c: &CombinedPattern) -> ExportDocument {
    let rows: Vec<Value> = c
        .timeline
        .iter()
        .map(|b| {
            json!({
                "beat": b.beat,
                "throw": b.throw.export(),
                "label": b.label.export(),
                "toss_state": b.toss.to_string(),
                "poi_state": b.poi.to_string(),
            })
        })
        .collect();
    ExportDocument {
        format: Format::Json,
        payload: to_pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "toss": c.toss.to_string(),
            "spin": c.spin.to_string(),
            "max_throw": c.max_throw,
            "notation_period": c.notation_period,
            "full_period": c.full_period,
            "poi_start": c.start_description(),
            "rows": rows,
        })),
    }
}

pub fn timeline_table(c: &CombinedPattern) -> ExportDocument {
    let mut out = String::new();
    writeln!(
        out,
        "toss {} | spin {} | notation period {} | full period {} | poi start: {}",
        c.toss,
        c.spin,
        c.notation_period,
        c.full_period,
        c.start_description()
    )
    .unwrap();
    writeln!(out, "beat\tthrow\tmove\ttoss state\tpoi state").unwrap();
    for b in &c.timeline {
        writeln!(
            out,
            "{}\t{}\t{}\t{{{}}}\t{}",
            b.beat,
            b.throw.export(),
            b.label,
            b.toss,
            b.poi
        )
        .unwrap();
    }
    ExportDocument {
        format: Format::Table,
        payload: out,
    }
}

/// Reads a kernel configuration for a toss graph.
///
/// The document maps state ids to `{label: probability}` objects; labels are
/// notation characters or decimal throws, probabilities are decimal strings,
/// `"p/q"` strings or JSON numbers. Each listed state must sum to exactly 1;
/// labels it leaves out get probability 0 and unlisted states stay uniform.
pub fn toss_kernel_from_json(graph: TossGraph, text: &str) -> Result<TransitionKernel<TossState, u8>> {
    let GraphKind::Toss { max_throw, .. } = graph.kind() else {
        return Err(Error::BadKernel("kernel files apply to toss graphs".into()));
    };
    let root: Value = serde_json::from_str(text).map_err(|e| Error::BadKernel(e.to_string()))?;
    let Value::Object(entries) = root else {
        return Err(Error::BadKernel("top level must be an object of state ids".into()));
    };

    let mut overrides: BTreeMap<usize, BTreeMap<u8, BigRational>> = BTreeMap::new();
    for (id, row) in &entries {
        let state = TossState::parse(id, max_throw).map_err(|e| Error::BadKernel(e.to_string()))?;
        let node = graph
            .index_of(&state)
            .ok_or_else(|| Error::BadKernel(format!("state {id:?} is not in the graph")))?;
        let Value::Object(row) = row else {
            return Err(Error::BadKernel(format!("state {id:?}: expected a label object")));
        };
        let mut probs = BTreeMap::new();
        for (label, value) in row {
            let throw = u8::parse_export(label)
                .ok_or_else(|| Error::BadKernel(format!("state {id:?}: bad label {label:?}")))?;
            if graph.successor(node, throw).is_none() {
                return Err(Error::BadKernel(format!(
                    "state {id:?}: throw {label} is not admissible"
                )));
            }
            let p = match value {
                Value::String(s) => parse_probability(s)?,
                Value::Number(n) => parse_probability(&n.to_string())?,
                _ => return Err(Error::BadKernel(format!("state {id:?}: bad probability {value}"))),
            };
            if probs.insert(throw, p).is_some() {
                return Err(Error::BadKernel(format!("state {id:?}: throw {label} listed twice")));
            }
        }
        overrides.insert(node, probs);
    }

    let rows = (0..graph.node_count())
        .map(|i| {
            let edges = graph.out_edges(i);
            match overrides.get(&i) {
                Some(probs) => edges
                    .iter()
                    .map(|e| probs.get(&e.label).cloned().unwrap_or_else(BigRational::zero))
                    .collect(),
                None => {
                    let d = edges.len() as i64;
                    vec![BigRational::new(1.into(), d.into()); edges.len()]
                }
            }
        })
        .collect();
    TransitionKernel::new(graph, rows)
}

/// Float rendering shared by table outputs.
pub fn format_weight(p: &BigRational) -> String {
    format!("{:.6}", to_f64(p))
}
