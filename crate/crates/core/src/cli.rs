//! Command-line frontend.
//!
//! [`run`] parses arguments and returns the exit code with captured stdout
//! and stderr, so the binary and the tests share one code path. Exit code 1
//! means invalid user input; 2 means a computation failed on valid input.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::combine::combine;
use crate::error::Error;
use crate::export::{
    distribution_json, distribution_table, export_dot, export_graph_json, timeline_json,
    timeline_table, toss_kernel_from_json, trace_json, ExportLabel,
};
use crate::poi::{build_poi_graph, find_entry, poi_kernel, run_word, Hand, PoiState, PoiWord};
use crate::siteswap::{parse_siteswap, render_throws, validate};
use crate::toss::{build_state_graph, find_transition, pattern_states, TossGraph, TossState};
use crate::walk::{
    empirical_frequencies, parse_probability, sample_walk, stationary_exact, stationary_numeric,
    warrington_distribution, TransitionKernel,
};

#[derive(Debug, Parser)]
#[command(name = "jugglestate", version, about = "Toss and poi juggling state graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TextFormat {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Formula,
    Exact,
    Numeric,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a siteswap for collisions and count its particles
    Validate { pattern: String },
    /// Print the state cycle of a siteswap
    States {
        pattern: String,
        #[arg(long)]
        max_throw: Option<u8>,
    },
    /// Export the full toss state graph
    Graph {
        #[arg(long)]
        balls: u8,
        #[arg(long)]
        max_throw: u8,
        #[arg(long, value_enum, default_value = "dot")]
        format: GraphFormat,
    },
    /// Stationary distribution of a random walk on the toss graph
    Stationary {
        #[arg(long)]
        balls: u8,
        #[arg(long)]
        max_throw: u8,
        #[arg(long)]
        kernel: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_iterations: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: TextFormat,
    },
    /// Sample a seeded walk and compare visit frequencies with the exact distribution
    Walk {
        #[arg(long)]
        balls: u8,
        #[arg(long)]
        max_throw: u8,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        kernel: Option<PathBuf>,
        /// Start state (defaults to the ground state)
        #[arg(long)]
        start: Option<String>,
        /// Write the full trace as JSON instead of the frequency table
        #[arg(long)]
        trace: bool,
    },
    /// Shortest throw sequence between two states
    Transition {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        balls: u8,
        #[arg(long)]
        max_throw: u8,
    },
    /// Poi spin state machine
    Poi {
        #[command(subcommand)]
        command: PoiCommand,
    },
    /// Layer a poi word over a siteswap
    Combine {
        pattern: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        max_throw: Option<u8>,
        #[arg(long, value_enum, default_value = "table")]
        format: TextFormat,
    },
}

#[derive(Debug, Subcommand)]
enum PoiCommand {
    /// Export the poi state graph
    Graph {
        #[arg(long, value_enum, default_value = "dot")]
        format: GraphFormat,
    },
    /// Run a move word from a state
    Run {
        #[arg(long)]
        word: String,
        /// Start state id (defaults to the left-hand-up ground state)
        #[arg(long)]
        start: Option<String>,
    },
    /// Shortest entry from the ground pattern into a word's cycle
    Entry {
        #[arg(long)]
        word: String,
    },
    /// Exact stationary distribution when R has probability P
    Stationary {
        #[arg(long = "p-r")]
        p_r: String,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(cli.command) {
        Ok(Reply { code, stdout }) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => Outcome {
            code: if e.is_computation_failure() { 2 } else { 1 },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

struct Reply {
    code: i32,
    stdout: String,
}

impl From<String> for Reply {
    fn from(stdout: String) -> Self {
        Reply { code: 0, stdout }
    }
}

fn execute(command: Command) -> Result<Reply, Error> {
    match command {
        Command::Validate { pattern } => validate_cmd(&pattern),
        Command::States { pattern, max_throw } => {
            let p = parse_siteswap(&pattern)?;
            let m = max_throw.unwrap_or_else(|| p.max_throw().max(1));
            let states = pattern_states(&p, m)?;
            let mut line = String::new();
            for (s, t) in states.iter().zip(p.throws()) {
                write!(line, "{{{s}}} →{}→ ", t.export()).unwrap();
            }
            Ok(format!("{}\n", line.trim_end()).into())
        }
        Command::Graph { balls, max_throw, format } => {
            let g = build_state_graph(balls, max_throw)?;
            Ok(match format {
                GraphFormat::Dot => export_dot(&g).payload,
                GraphFormat::Json => export_graph_json(&g).payload,
            }
            .into())
        }
        Command::Stationary { balls, max_throw, kernel, method, tolerance, max_iterations, format } => {
            let dist = match method {
                Method::Formula => {
                    if kernel.is_some() {
                        return Err(Error::BadParameters(
                            "--method formula only applies to the uniform kernel".into(),
                        ));
                    }
                    warrington_distribution(balls, max_throw)?
                }
                Method::Exact => stationary_exact(&load_kernel(balls, max_throw, kernel.as_ref())?)?,
                Method::Numeric => stationary_numeric(
                    &load_kernel(balls, max_throw, kernel.as_ref())?,
                    tolerance,
                    max_iterations,
                )?,
            };
            Ok(match format {
                TextFormat::Table => distribution_table(&dist).payload,
                TextFormat::Json => distribution_json(&dist).payload,
            }
            .into())
        }
        Command::Walk { balls, max_throw, steps, seed, kernel, start, trace } => {
            let k = load_kernel(balls, max_throw, kernel.as_ref())?;
            let start = match start {
                Some(text) => TossState::parse(&text, max_throw)?,
                None => TossState::ground(balls, max_throw)?,
            };
            let walk = sample_walk(&k, &start, steps, seed)?;
            if trace {
                return Ok(trace_json(&walk).payload.into());
            }
            let empirical = empirical_frequencies(&walk)?;
            let exact = stationary_exact(&k)?;
            let mut out = String::new();
            writeln!(out, "generator: {}", walk.generator).unwrap();
            writeln!(out, "seed: {seed}").unwrap();
            writeln!(out, "steps: {steps}").unwrap();
            writeln!(out, "start: {start}").unwrap();
            writeln!(out, "state\tempirical\texact").unwrap();
            for s in exact.states() {
                writeln!(out, "{s}\t{:.6}\t{:.6}", empirical.weight(&s), exact.weight(&s)).unwrap();
            }
            writeln!(out, "total variation distance: {:.6}", empirical.total_variation(&exact)).unwrap();
            Ok(out.into())
        }
        Command::Transition { from, to, balls, max_throw } => {
            let from = TossState::parse(&from, max_throw)?;
            let to = TossState::parse(&to, max_throw)?;
            if from.balls() != balls || to.balls() != balls {
                return Err(Error::BadParameters(format!("both states must hold {balls} particles")));
            }
            let throws = find_transition(&from, &to)?;
            let shown = if throws.is_empty() { "(none)".to_string() } else { render_throws(&throws) };
            Ok(format!("{{{from}}} → {{{to}}}: {shown}\n").into())
        }
        Command::Poi { command } => poi_cmd(command),
        Command::Combine { pattern, word, max_throw, format } => {
            let p = parse_siteswap(&pattern)?;
            let w: PoiWord = word.parse()?;
            let c = combine(&p, &w, max_throw.unwrap_or_else(|| p.max_throw().max(1)))?;
            Ok(match format {
                TextFormat::Table => timeline_table(&c).payload,
                TextFormat::Json => timeline_json(&c).payload,
            }
            .into())
        }
    }
}

fn validate_cmd(pattern: &str) -> Result<Reply, Error> {
    let p = parse_siteswap(pattern)?;
    let report = validate(&p);
    if let Some(k) = report.particle_count {
        return Ok(format!("{p}: valid, {k} particles\n").into());
    }
    let n = p.period();
    let mut out = format!("{p}: invalid\n");
    for (i, j) in report.collisions {
        let residue = (i + p.throws()[i] as usize) % n;
        writeln!(
            out,
            "collision: beats {i} and {j} both land on beats ≡ {residue} (mod {n})"
        )
        .unwrap();
    }
    Ok(Reply { code: 1, stdout: out })
}

fn load_kernel(
    balls: u8,
    max_throw: u8,
    file: Option<&PathBuf>,
) -> Result<TransitionKernel<TossState, u8>, Error> {
    let graph: TossGraph = build_state_graph(balls, max_throw)?;
    match file {
        None => Ok(TransitionKernel::uniform(graph)),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::BadKernel(format!("{}: {e}", path.display())))?;
            toss_kernel_from_json(graph, &text)
        }
    }
}

fn poi_cmd(command: PoiCommand) -> Result<Reply, Error> {
    match command {
        PoiCommand::Graph { format } => {
            let g = build_poi_graph();
            Ok(match format {
                GraphFormat::Dot => export_dot(&g).payload,
                GraphFormat::Json => export_graph_json(&g).payload,
            }
            .into())
        }
        PoiCommand::Run { word, start } => {
            let w: PoiWord = word.parse()?;
            let start = match start {
                Some(text) => text.parse()?,
                None => PoiState::ground(Hand::Left),
            };
            let (end, trajectory) = run_word(&start, w.labels());
            let mut out = format!("{start}\n");
            for (l, s) in w.labels().iter().zip(&trajectory) {
                writeln!(out, "{l} {s}").unwrap();
            }
            writeln!(
                out,
                "final: {end}{}",
                if end.is_ground() { " (ground)" } else { "" }
            )
            .unwrap();
            Ok(out.into())
        }
        PoiCommand::Entry { word } => {
            let w: PoiWord = word.parse()?;
            let e = find_entry(&w)?;
            let out = if e.starts_on_ground() {
                format!("{w}: starts on ground state {}; entry length 0\n", e.from)
            } else {
                format!(
                    "{w}: entry {} from {} reaches {}; entry length {}\n",
                    e.moves_text(),
                    e.from,
                    e.start,
                    e.moves.len()
                )
            };
            Ok(out.into())
        }
        PoiCommand::Stationary { p_r } => {
            let p = parse_probability(&p_r).map_err(|_| Error::BadProbability(p_r.clone()))?;
            let k = poi_kernel(&p)?;
            Ok(distribution_table(&stationary_exact(&k)?).payload.into())
        }
    }
}
