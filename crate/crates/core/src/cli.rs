//! Command-line front end. [`run`] takes the argument list and output sinks
//! explicitly so it can be driven from tests.

use std::io::{Read, Write};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bound::{
    default_lambda_grid, maximize_f, sweep_lambda, verify_bound, BoundReport, SearchConfig,
};
use crate::counter::{count_matchings, count_matchings_exact_mode, CountOptions};
use crate::error::{Error, Result};
use crate::hypergraph::{gen_random_33, Hypergraph};
use crate::intersection::IGraph;
use crate::numeric::{format_fixed, format_ratio, real_to_ratio, Weight};

/// Fractional digits printed for approximate counts.
pub const OUTPUT_DIGITS: usize = 15;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_STRUCTURAL: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    JsonLines,
}

/// Deterministic approximate counting of matchings in (3,3)-hypergraphs.
#[derive(Debug, Parser)]
#[command(name = "hypermatch", version)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,
    /// Print timing and diagnostics to stderr; repeat for more.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Approximate the weighted number of matchings.
    Count {
        /// Hypergraph file, or `-` for stdin.
        file: String,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value = "1")]
        lambda: String,
        /// Override the truncation depth.
        #[arg(long)]
        t: Option<usize>,
    },
    /// Exact weighted number of matchings by brute force.
    Exact {
        file: String,
        #[arg(long, default_value = "1")]
        lambda: String,
    },
    /// Validate the degree condition and the intersection-graph structure.
    Check { file: String },
    /// Emit a seeded random (3,3)-hypergraph.
    Gen {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Maximize the contraction gradient norm and certify it stays below 0.971.
    VerifyBound {
        #[arg(long, default_value_t = SearchConfig::default().grid_steps)]
        grid_steps: usize,
        #[arg(long, default_value_t = SearchConfig::default().restarts)]
        restarts: usize,
        #[arg(long, default_value_t = SearchConfig::default().tol)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the branch-and-bound certificate.
        #[arg(long)]
        no_certify: bool,
        /// Also sweep λ over (0, 1.077] against the threshold 1.
        #[arg(long)]
        lambda_sweep: bool,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    stdin: &'a mut dyn Read,
    format: Format,
}

impl Io<'_> {
    fn emit(&mut self, plain: &[String], json: Value) -> std::io::Result<()> {
        match self.format {
            Format::Plain => plain.iter().try_for_each(|l| writeln!(self.out, "{l}")),
            Format::JsonLines => writeln!(self.out, "{json}"),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Structural(_) => EXIT_STRUCTURAL,
        _ => EXIT_INVALID,
    }
}

/// Parses `args` (including the program name) and executes the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut io = Io {
        out,
        err,
        stdin,
        format: config.format,
    };
    let started = Instant::now();
    let code = match execute(&config.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            exit_code(&e)
        }
    };
    if config.verbose > 0 {
        let _ = writeln!(io.err, "elapsed: {:.3}s", started.elapsed().as_secs_f64());
    }
    code
}

fn read_hypergraph(file: &str, io: &mut Io) -> Result<Hypergraph> {
    let mut text = String::new();
    if file == "-" {
        io.stdin
            .read_to_string(&mut text)
            .map_err(|e| Error::Domain(format!("reading stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(file)
            .map_err(|e| Error::Domain(format!("reading {file}: {e}")))?;
    }
    Hypergraph::parse(&text)
}

fn io_err(e: std::io::Error) -> Error {
    Error::Domain(format!("writing output: {e}"))
}

fn execute(command: &Command, io: &mut Io) -> Result<i32> {
    match command {
        Command::Count {
            file,
            epsilon,
            lambda,
            t,
        } => {
            let lambda: Weight = lambda.parse()?;
            let h = read_hypergraph(file, io)?;
            let options = CountOptions { lambda, t: *t };
            let c = count_matchings(&h, *epsilon, &options)?;
            let value = format_fixed(&real_to_ratio(&c.value), OUTPUT_DIGITS);
            if !c.certified {
                let _ = writeln!(
                    io.err,
                    "warning: result is not certified (lambda {} or t = {} below the required depth)",
                    c.lambda, c.t_used
                );
            }
            io.emit(
                &[
                    value.clone(),
                    format!("t_used: {}", c.t_used),
                    format!("required_t: {}", c.required_t),
                    format!("certified: {}", c.certified),
                    format!("components: {}", c.components),
                ],
                json!({
                    "command": "count",
                    "value": value,
                    "epsilon": c.epsilon,
                    "lambda": c.lambda.to_string(),
                    "t_used": c.t_used,
                    "required_t": c.required_t,
                    "certified": c.certified,
                    "components": c.components,
                }),
            )
            .map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Exact { file, lambda } => {
            let lambda: Weight = lambda.parse()?;
            let h = read_hypergraph(file, io)?;
            let value = format_ratio(&count_matchings_exact_mode(&h, &lambda)?);
            io.emit(
                std::slice::from_ref(&value),
                json!({"command": "exact", "value": value, "lambda": lambda.to_string()}),
            )
            .map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Check { file } => {
            let h = read_hypergraph(file, io)?;
            let degrees = h.validate_33();
            let s = IGraph::line_graph(&h).check_structure();
            let overloaded: Vec<usize> = degrees.overloaded.iter().map(|&(v, _)| v).collect();
            io.emit(
                &[
                    format!("vertices: {}", h.num_vertices()),
                    format!("edges: {}", h.num_edges()),
                    format!("max_degree_ok: {}", degrees.passed()),
                    format!("overloaded_vertices: {overloaded:?}"),
                    format!("claw_free_4: {}", s.claw_free_4),
                    format!("intersection_max_degree: {}", s.max_degree),
                    format!("neighborhood_ok: {}", s.neighborhood_ok),
                    format!("claw_witnesses: {:?}", s.claw_witnesses),
                    format!("neighborhood_witnesses: {:?}", s.neighborhood_witnesses),
                ],
                json!({
                    "command": "check",
                    "vertices": h.num_vertices(),
                    "edges": h.num_edges(),
                    "max_degree_ok": degrees.passed(),
                    "overloaded_vertices": overloaded,
                    "claw_free_4": s.claw_free_4,
                    "intersection_max_degree": s.max_degree,
                    "neighborhood_ok": s.neighborhood_ok,
                    "claw_witnesses": s.claw_witnesses,
                    "neighborhood_witnesses": s.neighborhood_witnesses,
                }),
            )
            .map_err(io_err)?;
            Ok(if !degrees.passed() {
                EXIT_INVALID
            } else if !s.passed() {
                EXIT_STRUCTURAL
            } else {
                EXIT_OK
            })
        }
        Command::Gen {
            vertices,
            edges,
            seed,
        } => {
            let h = gen_random_33(*vertices, *edges, *seed)?;
            if h.num_edges() < *edges {
                let _ = writeln!(
                    io.err,
                    "generated {} of {} requested edges",
                    h.num_edges(),
                    edges
                );
            }
            match io.format {
                Format::Plain => write!(io.out, "{}", h.serialize()),
                Format::JsonLines => writeln!(
                    io.out,
                    "{}",
                    json!({"command": "gen", "vertices": h.num_vertices(), "edges": h.edges(), "seed": seed})
                ),
            }
            .map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::VerifyBound {
            grid_steps,
            restarts,
            tol,
            seed,
            no_certify,
            lambda_sweep,
        } => {
            if *grid_steps < 2 || *restarts < 1 || tol.is_nan() || *tol <= 0.0 {
                return Err(Error::Domain(
                    "need grid-steps >= 2, restarts >= 1, tol > 0".into(),
                ));
            }
            let config = SearchConfig {
                grid_steps: *grid_steps,
                restarts: *restarts,
                tol: *tol,
                seed: *seed,
            };
            let report = if *no_certify {
                maximize_f(&config)
            } else {
                verify_bound(&config)
            };
            emit_bound(io, &report, "verify-bound")?;
            let mut ok = report.passed();
            if *lambda_sweep {
                for r in sweep_lambda(&default_lambda_grid(), &config) {
                    emit_bound(io, &r, "lambda-sweep")?;
                    ok &= r.passed();
                }
            }
            Ok(if ok { EXIT_OK } else { EXIT_BOUND })
        }
    }
}

fn emit_bound(io: &mut Io, r: &BoundReport, command: &str) -> Result<()> {
    let argmax: Vec<String> = r.argmax.iter().map(|x| format!("{x:.6}")).collect();
    let mut plain = vec![
        format!("lambda {}", r.lambda),
        format!("max {:.15}", r.max_value),
        format!("argmax {}", argmax.join(" ")),
        format!("threshold {}", r.threshold),
        format!("margin {:.15}", r.margin),
        format!("evaluations {}", r.evaluations),
    ];
    if let Some(c) = &r.certificate {
        plain.push(format!("certified {}", c.certified));
        plain.push(format!("certified_upper_bound {:.15}", c.upper_bound));
        plain.push(format!("cells {}", c.cells_processed));
        if let Some(cell) = &c.failed_cell {
            plain.push(format!("failed_cell {cell:?}"));
        }
    }
    plain.push(format!("passed {}", r.passed()));
    let mut json = serde_json::to_value(r).map_err(|e| Error::Domain(e.to_string()))?;
    json["command"] = json!(command);
    json["passed"] = json!(r.passed());
    io.emit(&plain, json).map_err(io_err)
}
