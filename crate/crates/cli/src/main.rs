use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use regnet::bisection::{heuristic_bisection, min_bisection};
use regnet::bounds::BoundsError;
use regnet::enumerate::{self, EnumerateError};
use regnet::graph::{format_ratio4, Graph};
use regnet::graph6::{self, Graph6Error};
use regnet::pipeline::{self, Format, OptimizeOptions, PipelineError, DEFAULT_MEMORY_CAP};
use regnet::symmetry::{self, SymmetryError};

/// Optimal regular graphs for interconnection networks.
#[derive(Parser)]
#[command(name = "regnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Moore bound, minimum diameter and minimum mean path length for (N, K).
    Bounds { n: usize, k: usize },
    /// All connected K-regular graphs on N vertices, one graph6 line each.
    Enumerate {
        n: usize,
        k: usize,
        /// Print only the number of graphs.
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diameter and mean path length of each graph in a graph6 file.
    Metrics { file: PathBuf },
    /// Minimum bisection width of each graph in a graph6 file.
    Bisect(BisectArgs),
    /// Automorphism group of each graph in a graph6 file.
    Aut { file: PathBuf },
    /// Exhaustive search for the optimal graphs with parameters (N, K).
    Optimize(OptimizeArgs),
    /// Full score and bound flags of each graph in a graph6 file.
    Evaluate {
        file: PathBuf,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Cartesian products of every graph in FILE1 with every graph in FILE2.
    Product {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BisectArgs {
    file: PathBuf,
    /// Certified minimum (the default).
    #[arg(long, conflicts_with = "heuristic")]
    exact: bool,
    /// Kernighan-Lin local search only.
    #[arg(long)]
    heuristic: bool,
    #[arg(long, default_value_t = 16, requires = "heuristic")]
    restarts: usize,
    #[arg(long, default_value_t = 0, requires = "heuristic")]
    seed: u64,
}

#[derive(Args)]
struct OptimizeArgs {
    n: usize,
    k: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Adjacency rows fixed per parallel task.
    #[arg(long, default_value_t = 4)]
    split_depth: usize,
    /// Directory for survivors beyond the memory cap and for the checkpoint.
    #[arg(long)]
    spill: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MEMORY_CAP)]
    memory_cap: usize,
    #[arg(long, default_value = "text")]
    format: String,
    /// Report zero wall time so output is reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
    /// Where to write the checkpoint on interruption.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from a checkpoint written by an interrupted run.
    #[arg(long)]
    resume: Option<PathBuf>,
}

fn read_graphs(path: &Path) -> Result<Vec<Graph>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let graphs = graph6::decode_lines(&text).with_context(|| format!("parsing {}", path.display()))?;
    if graphs.is_empty() {
        bail!(PipelineError::NoGraphs);
    }
    Ok(graphs)
}

fn output<'a>(path: Option<&Path>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(stdout),
    })
}

/// A command-line value that clap accepts syntactically but the command rejects.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn parse_format(s: &str) -> Result<Format> {
    Ok(s.parse::<Format>().map_err(UsageError)?)
}

fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Bounds { n, k } => {
            let b = pipeline::bounds_for(n, k)?;
            writeln!(stdout, "n {n}  k {k}")?;
            writeln!(stdout, "minimum diameter  {}", b.d_min)?;
            writeln!(stdout, "moore bound       {}", b.moore_at_dmin)?;
            writeln!(
                stdout,
                "minimum mpl       {} ({}/{})",
                format_ratio4(&b.mpl_min),
                b.mpl_min.numer(),
                b.mpl_min.denom()
            )?;
        }
        Command::Enumerate { n, k, count_only, out } => {
            if count_only {
                let stats = enumerate::enumerate(n, k, |_| {})?;
                writeln!(stdout, "{}", stats.generated)?;
            } else {
                let mut w = output(out.as_deref(), stdout)?;
                let mut failure = None;
                enumerate::enumerate(n, k, |g| {
                    if failure.is_none() {
                        let line = graph6::encode(g).expect("enumerated graphs fit graph6");
                        if let Err(e) = writeln!(w, "{line}") {
                            failure = Some(e);
                        }
                    }
                })?;
                if let Some(e) = failure {
                    return Err(e.into());
                }
                w.flush()?;
            }
        }
        Command::Metrics { file } => {
            let graphs = read_graphs(&file)?;
            writeln!(stdout, "index,n,edges,degree,connected,diameter,distance_sum,mpl")?;
            for (i, g) in graphs.iter().enumerate() {
                let m = g.metrics();
                let degree = g.degree_profile().1.map_or("-".to_string(), |k| k.to_string());
                let diameter = m.diameter.map_or("inf".to_string(), |d| d.to_string());
                let mpl = m.mpl().map_or("inf".to_string(), |r| format_ratio4(&r));
                writeln!(
                    stdout,
                    "{i},{},{},{degree},{},{diameter},{},{mpl}",
                    m.n,
                    g.edge_count(),
                    m.connected,
                    m.distance_sum
                )?;
            }
        }
        Command::Bisect(args) => {
            for (i, g) in read_graphs(&args.file)?.iter().enumerate() {
                let r =
                    if args.heuristic { heuristic_bisection(g, args.restarts, args.seed) } else { min_bisection(g) };
                let (a, b) = r.parts();
                let kind = if r.exact { "exact" } else { "heuristic" };
                writeln!(stdout, "{i}: width {} ({kind})  {a:?} | {b:?}", r.width)?;
            }
        }
        Command::Aut { file } => {
            for (i, g) in read_graphs(&file)?.iter().enumerate() {
                let s = symmetry::automorphisms(g)?;
                writeln!(stdout, "{i}: order {}", s.order)?;
                writeln!(stdout, "  vertex_transitive {}  edge_transitive {}", s.vertex_transitive, s.edge_transitive)?;
                writeln!(stdout, "  orbits {:?}", s.orbits)?;
                for gen in &s.generators {
                    writeln!(stdout, "  generator {gen:?}")?;
                }
            }
        }
        Command::Optimize(args) => {
            let format = parse_format(&args.format)?;
            let cancel = Arc::new(AtomicBool::new(false));
            let flag = Arc::clone(&cancel);
            ctrlc::set_handler(move || flag.store(true, Ordering::SeqCst)).context("installing interrupt handler")?;
            let options = OptimizeOptions {
                jobs: args.jobs.max(1),
                split_depth: args.split_depth,
                spill_dir: args.spill,
                memory_cap: args.memory_cap,
                record_timing: !args.no_timing,
                cancel: Some(cancel),
                checkpoint: args.checkpoint,
                resume: args.resume,
            };
            let set = pipeline::optimize(args.n, args.k, &options)?;
            stdout.write_all(pipeline::render(&set, format).as_bytes())?;
        }
        Command::Evaluate { file, format } => {
            let format = parse_format(&format)?;
            let graphs = read_graphs(&file)?;
            let evaluations = pipeline::evaluate(&graphs)?;
            stdout.write_all(render_evaluations(&evaluations, format)?.as_bytes())?;
        }
        Command::Product { file1, file2, out } => {
            let left = read_graphs(&file1)?;
            let right = read_graphs(&file2)?;
            let mut w = output(out.as_deref(), stdout)?;
            for g in &left {
                for h in &right {
                    writeln!(w, "{}", graph6::encode(&g.cartesian_product(h))?)?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct EvaluationRow {
    graph6: String,
    n: usize,
    k: usize,
    diameter: u32,
    mpl: String,
    mpl_exact: [u64; 2],
    distance_sum: u64,
    bisection: usize,
    aut_order: String,
    diameter_meets_bound: bool,
    mpl_meets_bound: bool,
}

fn render_evaluations(evaluations: &[pipeline::Evaluation], format: Format) -> Result<String> {
    let rows: Vec<EvaluationRow> = evaluations
        .iter()
        .map(|e| {
            let mpl = e.score.mpl();
            Ok(EvaluationRow {
                graph6: graph6::encode(&e.graph)?,
                n: e.score.n,
                k: e.graph.degree(0),
                diameter: e.score.diameter,
                mpl: format_ratio4(&mpl),
                mpl_exact: [*mpl.numer(), *mpl.denom()],
                distance_sum: e.score.distance_sum,
                bisection: e.score.bisection,
                aut_order: e.score.aut_order.to_string(),
                diameter_meets_bound: e.diameter_meets_bound,
                mpl_meets_bound: e.mpl_meets_bound,
            })
        })
        .collect::<Result<_>>()?;
    if format == Format::Json {
        return Ok(serde_json::to_string(&rows)? + "\n");
    }
    let mut out = String::from(
        "index,n,k,diameter,mpl,bisection,aut_order,diameter_meets_bound,mpl_meets_bound,mpl_exact,graph6\n",
    );
    for (i, r) in rows.iter().enumerate() {
        let flag = |met: bool| if met { "true" } else { "false*" };
        let (dflag, mflag) = if format == Format::Text {
            (flag(r.diameter_meets_bound), flag(r.mpl_meets_bound))
        } else {
            (if r.diameter_meets_bound { "true" } else { "false" }, if r.mpl_meets_bound { "true" } else { "false" })
        };
        out += &format!(
            "{i},{},{},{},{},{},{},{dflag},{mflag},{}/{},{}\n",
            r.n, r.k, r.diameter, r.mpl, r.bisection, r.aut_order, r.mpl_exact[0], r.mpl_exact[1], r.graph6
        );
    }
    Ok(out)
}

/// 3 for a parity violation, 2 for any other invalid parameter or input
/// graph, 1 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<PipelineError>() {
            if e.is_parity_violation() {
                return 3;
            }
            if e.is_invalid_parameters() {
                return 2;
            }
        }
        if let Some(e) = cause.downcast_ref::<EnumerateError>() {
            return if matches!(e, EnumerateError::ParityViolation { .. }) { 3 } else { 2 };
        }
        if cause.is::<UsageError>()
            || cause.is::<BoundsError>()
            || cause.is::<Graph6Error>()
            || cause.is::<SymmetryError>()
        {
            return 2;
        }
    }
    1
}

fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().any(|c| c.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = BufWriter::new(io::stdout().lock());
    let result = run(cli, &mut stdout).and_then(|()| Ok(stdout.flush()?));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
