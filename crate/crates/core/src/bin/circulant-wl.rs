use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use circulant_wl::counterexample::reproduce_counterexample;
use circulant_wl::cr::{cr_stabilize, individualize_all, VertexColoring};
use circulant_wl::par::with_jobs;
use circulant_wl::ring::{refine_to_stable, RefinementOperator};
use circulant_wl::spectral::{eigenvalue_classes, numeric_spectrum, stabilizer_subgroup};
use circulant_wl::sweep::{run_sweep, write_csv, write_json, SweepConfig, SweepMode};
use circulant_wl::tinhofer::{canonical_form_prime_circulant, has_tinhofer_property, TinhoferVerdict};
use circulant_wl::wl::{induced_smodule, initial_smodule, wl2_stabilize};
use circulant_wl::{CayleyGraph, DiGraph, Error, Execution, OrderedPartition};

#[derive(Parser)]
#[command(name = "circulant-wl", version, about = "Weisfeiler-Leman refinement on Cayley graphs of abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Generic 2-WL to the stable pair coloring.
    Wl2 { graph: String },
    /// Color refinement, optionally after individualizing vertices.
    Cr {
        graph: String,
        #[arg(long = "individualize", value_delimiter = ',')]
        individualize: Vec<usize>,
    },
    /// Group-ring refinement of the initial S-module of a Cayley graph.
    Smodule { graph: String },
    /// Eigenvalues of a prime circulant and their exact classes.
    Spectrum {
        graph: String,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Exhaustive check of the Tinhofer property against a copy.
    TinhoferCheck {
        graph: String,
        #[arg(long, default_value_t = 1_000_000)]
        max_nodes: usize,
    },
    /// Canonical code of a prime circulant.
    Canon { graph: String },
    /// Round-bound sweep over connection sets of Z_n.
    Sweep {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 16)]
        n_max: usize,
        #[arg(long, conflicts_with = "sample")]
        exhaustive: bool,
        /// Number of distinct connection sets per n.
        #[arg(long, requires = "seed")]
        sample: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also run generic 2-WL and require agreement.
        #[arg(long)]
        cross_check: bool,
        #[arg(long)]
        sequential: bool,
    },
    /// Replay the Z4xZ4 counterexample.
    Counterexample,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Violation(_) | Error::Overflow) { 2 } else { 1 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(format!("i/o error: {e}"))
    }
}

enum Input {
    Cayley(CayleyGraph),
    Plain(DiGraph),
}

impl Input {
    fn digraph(&self) -> DiGraph {
        match self {
            Input::Cayley(c) => c.to_digraph(),
            Input::Plain(g) => g.clone(),
        }
    }

    fn cayley(&self, command: &str) -> Result<&CayleyGraph, Failure> {
        match self {
            Input::Cayley(c) => Ok(c),
            Input::Plain(_) => Err(Failure::usage(format!("{command} needs a Cayley graph such as Z7:1,6"))),
        }
    }
}

/// A Cayley graph string, or else a path to an adjacency-list file.
fn read_graph(arg: &str) -> Result<Input, Failure> {
    if arg.contains(':') || !std::path::Path::new(arg).exists() {
        return arg.parse::<CayleyGraph>().map(Input::Cayley).map_err(|e| match e {
            Error::Parse { column, .. } => Failure::usage(format!(
                "{e}\n  {arg}\n  {:>width$}",
                "^",
                width = column
            )),
            other => other.into(),
        });
    }
    let text = fs::read_to_string(arg)?;
    Ok(Input::Plain(DiGraph::parse_adjacency(&text)?))
}

fn prime_con(c: &CayleyGraph) -> Result<usize, Failure> {
    if !c.spec.is_cyclic() {
        return Err(Error::NotPrime(c.spec.order()).into());
    }
    Ok(c.spec.order())
}

fn classes_json(p: &OrderedPartition) -> serde_json::Value {
    json!(p.classes())
}

fn rounds_line(rounds: usize, classes: &impl std::fmt::Display) -> String {
    format!("rounds: {rounds}, classes: {classes}\n")
}

fn clean(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

fn run(cli: Cli) -> Result<Vec<u8>, Failure> {
    let format = cli.format;
    let fmt = |default: Format| format.unwrap_or(default);
    let mut out = Vec::new();
    match cli.command {
        Command::Wl2 { graph } => {
            let input = read_graph(&graph)?;
            let trace = wl2_stabilize(&input.digraph());
            let classes = match &input {
                Input::Cayley(c) => Some(induced_smodule(&trace.final_state, &c.spec)?),
                Input::Plain(_) => None,
            };
            match fmt(Format::Text) {
                Format::Json => {
                    let v = json!({
                        "rounds": trace.rounds,
                        "class_counts": trace.class_counts,
                        "classes": classes.as_ref().map(classes_json),
                    });
                    writeln!(out, "{v}")?;
                }
                _ => match classes {
                    Some(p) => out.extend(rounds_line(trace.rounds, &p).bytes()),
                    None => writeln!(
                        out,
                        "rounds: {}, pair classes: {}",
                        trace.rounds,
                        trace.final_state.class_count()
                    )?,
                },
            }
        }
        Command::Cr { graph, individualize } => {
            let g = read_graph(&graph)?.digraph();
            if let Some(&v) = individualize.iter().find(|&&v| v >= g.n()) {
                return Err(Failure::usage(format!("vertex {v} out of range 0..{}", g.n())));
            }
            let mut start = VertexColoring::uniform(g.n());
            for &v in &individualize {
                start = individualize_all(&start, &[v]);
            }
            let trace = cr_stabilize(&g, &start);
            let p = trace.final_state.to_partition();
            match fmt(Format::Text) {
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({"rounds": trace.rounds, "class_counts": trace.class_counts, "classes": classes_json(&p)})
                )?,
                _ => out.extend(rounds_line(trace.rounds, &p).bytes()),
            }
        }
        Command::Smodule { graph } => {
            let input = read_graph(&graph)?;
            let c = input.cayley("smodule")?;
            let start = initial_smodule(&c.spec, &c.con);
            let trace = refine_to_stable(&c.spec, &start, RefinementOperator::Full)?;
            match fmt(Format::Text) {
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({
                        "rounds": trace.rounds,
                        "class_counts": trace.class_counts,
                        "classes": classes_json(&trace.final_state),
                    })
                )?,
                _ => out.extend(rounds_line(trace.rounds, &trace.final_state).bytes()),
            }
        }
        Command::Spectrum { graph, tolerance } => {
            let input = read_graph(&graph)?;
            let c = input.cayley("spectrum")?;
            let sd = stabilizer_subgroup(prime_con(c)?, &c.con)?;
            let exact = eigenvalue_classes(&sd);
            let numeric = numeric_spectrum(&sd, tolerance);
            let labels = exact.labels();
            match fmt(Format::Csv) {
                Format::Json => {
                    let rows: Vec<_> = numeric
                        .values
                        .iter()
                        .enumerate()
                        .map(|(k, z)| json!({"k": k, "re": clean(z.re), "im": clean(z.im), "class": labels[k]}))
                        .collect();
                    let v = json!({
                        "p": sd.p,
                        "h_con": sd.h_elements,
                        "d_con": sd.d_con,
                        "values": rows,
                        "numeric_grouping_agrees": numeric.grouping == exact,
                    });
                    writeln!(out, "{v}")?;
                }
                Format::Csv => {
                    writeln!(out, "k,re,im,class")?;
                    for (k, z) in numeric.values.iter().enumerate() {
                        writeln!(out, "{k},{:.12},{:.12},{}", clean(z.re), clean(z.im), labels[k])?;
                    }
                }
                Format::Text => {
                    writeln!(out, "H_Con: {:?}, d_Con: {}", sd.h_elements, sd.d_con)?;
                    writeln!(out, "eigenvalue classes: {exact}")?;
                }
            }
        }
        Command::TinhoferCheck { graph, max_nodes } => {
            let g = read_graph(&graph)?.digraph();
            let report = with_jobs(cli.jobs, || has_tinhofer_property(&g, max_nodes));
            let (certificate, reason) = match &report.verdict {
                TinhoferVerdict::Fails { certificate, reason } => (Some(certificate.clone()), Some(*reason)),
                _ => (None, None),
            };
            match fmt(Format::Text) {
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({
                        "property": report.property(),
                        "certificate": certificate,
                        "reason": reason,
                        "nodes": report.nodes,
                    })
                )?,
                _ => {
                    let property = report.property().map_or("unknown (budget exceeded)".into(), |b| b.to_string());
                    writeln!(out, "property: {property}, nodes: {}", report.nodes)?;
                    if let Some(c) = certificate {
                        writeln!(out, "certificate: {c:?}")?;
                    }
                }
            }
        }
        Command::Canon { graph } => {
            let input = read_graph(&graph)?;
            let c = input.cayley("canon")?;
            let form = canonical_form_prime_circulant(prime_con(c)?, &c.con)?;
            match fmt(Format::Text) {
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({"code": form.code_hex(), "order": form.order, "individualizations": form.individualizations})
                )?,
                _ => writeln!(out, "code: {}\norder: {:?}", form.code_hex(), form.order)?,
            }
        }
        Command::Sweep {
            n_min,
            n_max,
            exhaustive: _,
            sample,
            seed,
            cross_check,
            sequential,
        } => {
            let mut cfg = match (sample, seed) {
                (Some(count), Some(seed)) => SweepConfig::sampled(n_min, n_max, seed, count),
                _ => SweepConfig::exhaustive(n_min, n_max),
            };
            cfg.cross_check = cross_check;
            if sequential {
                cfg.execution = Execution::Sequential;
            }
            if matches!(cfg.mode, SweepMode::Exhaustive) && seed.is_some() {
                return Err(Failure::usage("--seed only applies with --sample"));
            }
            let records = with_jobs(cli.jobs, || run_sweep(&cfg))?;
            match fmt(Format::Csv) {
                Format::Json => write_json(&records, &mut out)?,
                Format::Csv => write_csv(&records, &mut out)?,
                Format::Text => {
                    let worst = records.iter().map(|r| r.rounds_smodule).max().unwrap_or(0);
                    writeln!(out, "instances: {}, violations: 0, max rounds: {worst}", records.len())?;
                }
            }
        }
        Command::Counterexample => {
            let report = with_jobs(cli.jobs, reproduce_counterexample);
            match fmt(Format::Text) {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report).map_err(io::Error::from)?)?,
                _ => {
                    for (k, p) in report.computed_history.iter().enumerate() {
                        let classes: Vec<String> = p.iter().map(|c| format!("{{{}}}", c.join(", "))).collect();
                        writeln!(out, "{k}. {}", classes.join(" "))?;
                    }
                    let property = report.tinhofer.property().map_or("unknown".into(), |b| b.to_string());
                    writeln!(out, "tinhofer property: {property}")?;
                    if let TinhoferVerdict::Fails { certificate, reason } = &report.tinhofer.verdict {
                        writeln!(out, "certificate: {certificate:?} ({reason:?})")?;
                    }
                }
            }
            if let Err(e) = report.verify() {
                emit(&cli.out, &out)?;
                return Err(e.into());
            }
        }
    }
    Ok(out)
}

fn emit(path: &Option<PathBuf>, bytes: &[u8]) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, bytes),
        None => io::stdout().write_all(bytes),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let path = cli.out.clone();
    match run(cli).and_then(|bytes| emit(&path, &bytes).map_err(Failure::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
