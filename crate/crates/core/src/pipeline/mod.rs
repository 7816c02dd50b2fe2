//! The ranking pipeline: enumerate all connected `k`-regular graphs on `n`
//! vertices, keep those with minimum diameter and then minimum mean path
//! length, and among them those with maximum bisection width and then maximum
//! automorphism group order.
//!
//! Phase 1 streams the enumeration through a [`SurvivorStore`], so only graphs
//! tied on `(diameter, distance_sum)` are ever retained. Phase 2 computes the
//! expensive criteria on the survivors only, and skips the group computation
//! for graphs that already lose on bisection width.

mod checkpoint;
pub mod report;
mod score;
mod store;

use std::collections::BTreeMap;
use std::io;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{mpsc, Arc, Mutex};
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::Ratio;
use thiserror::Error;

use crate::bisection::min_bisection;
use crate::bounds::{self, BoundsError, BoundsRecord};
use crate::enumerate::{self, EnumerateError, GenStats, GenTask};
use crate::graph::{families, Graph};
use crate::symmetry::{self, CanonicalForm, SymmetryError, SymmetryResult};

pub use checkpoint::Checkpoint;
pub use report::{render, Format, ReportDoc};
pub use score::Score;
pub use store::{SurvivorStore, DEFAULT_MEMORY_CAP};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error("no input graphs")]
    NoGraphs,
    #[error("graph {index} has parameters ({n},{k}), expected ({expected_n},{expected_k})")]
    MixedParameters { index: usize, n: usize, k: usize, expected_n: usize, expected_k: usize },
    #[error("graph {0} is not regular")]
    NotRegular(usize),
    #[error("graph {0} is disconnected")]
    Disconnected(usize),
    #[error("interrupted; checkpoint written to {}", .0.display())]
    Interrupted(PathBuf),
    #[error("invalid checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl PipelineError {
    pub fn is_parity_violation(&self) -> bool {
        matches!(self, PipelineError::Enumerate(EnumerateError::ParityViolation { .. }))
    }

    /// Errors caused by the requested `(n, k)` or by malformed input graphs.
    pub fn is_invalid_parameters(&self) -> bool {
        matches!(
            self,
            PipelineError::Enumerate(EnumerateError::InvalidDegree { .. } | EnumerateError::TooLarge(_))
                | PipelineError::Bounds(_)
                | PipelineError::Symmetry(_)
                | PipelineError::NoGraphs
                | PipelineError::MixedParameters { .. }
                | PipelineError::NotRegular(_)
                | PipelineError::Disconnected(_)
        )
    }
}

#[derive(Debug, Clone)]
pub struct OptimizeOptions {
    /// Worker threads for both phases.
    pub jobs: usize,
    /// Number of adjacency rows fixed per enumeration task.
    pub split_depth: usize,
    /// Directory for the survivor spill file and the default checkpoint.
    pub spill_dir: Option<PathBuf>,
    pub memory_cap: usize,
    /// When false, `wall_seconds` is reported as zero so reports are reproducible.
    pub record_timing: bool,
    /// Setting this flag stops workers after their current task.
    pub cancel: Option<Arc<AtomicBool>>,
    pub checkpoint: Option<PathBuf>,
    pub resume: Option<PathBuf>,
}

impl Default for OptimizeOptions {
    fn default() -> OptimizeOptions {
        OptimizeOptions {
            jobs: 1,
            split_depth: 4,
            spill_dir: None,
            memory_cap: DEFAULT_MEMORY_CAP,
            record_timing: true,
            cancel: None,
            checkpoint: None,
            resume: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunStats {
    pub visited: u64,
    pub generated: u64,
    pub rejected_iso: u64,
    /// Graphs retained after phase 1.
    pub survivors: u64,
    pub wall_seconds: f64,
}

/// One optimal graph with everything computed about it.
#[derive(Debug, Clone)]
pub struct Member {
    pub graph: Graph,
    pub score: Score,
    pub form: CanonicalForm,
    pub symmetry: SymmetryResult,
    pub bisection_witness: Vec<u8>,
}

/// The co-optimal graphs for one `(n, k)`, ordered by canonical form.
#[derive(Debug, Clone)]
pub struct OptimalSet {
    pub n: usize,
    pub k: usize,
    pub graphs: Vec<Member>,
    pub bounds: BoundsRecord,
    /// False when the optimal diameter exceeds the theoretical minimum.
    pub diameter_meets_bound: bool,
    /// False when the optimal mean path length exceeds the theoretical minimum.
    pub mpl_meets_bound: bool,
    pub tie_count: usize,
    pub stats: RunStats,
}

impl OptimalSet {
    pub fn score(&self) -> &Score {
        &self.graphs[0].score
    }
}

/// Bounds for `(n, k)`. Degree 2 is outside the general formulas' stated
/// range, but their `k = 2` forms describe cycles exactly and are used here.
pub fn bounds_for(n: usize, k: usize) -> Result<BoundsRecord, BoundsError> {
    if k != 2 {
        return BoundsRecord::new(n, k);
    }
    if n < 3 {
        return Err(BoundsError::TooFewVertices { n, k });
    }
    let d = (n / 2) as u32;
    let moore = bounds::moore_bound(2, d)?;
    let d64 = u64::from(d);
    let per_vertex = d64 * (d64 + 1) - (moore - n as u64) * d64;
    Ok(BoundsRecord { n, k, moore_at_dmin: moore, d_min: d, mpl_min: Ratio::new(per_vertex, n as u64 - 1) })
}

/// Full score of one graph plus the bound flags.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub graph: Graph,
    pub score: Score,
    pub symmetry: SymmetryResult,
    pub diameter_meets_bound: bool,
    pub mpl_meets_bound: bool,
}

fn common_parameters(graphs: &[Graph]) -> Result<(usize, usize), PipelineError> {
    let first = graphs.first().ok_or(PipelineError::NoGraphs)?;
    let n = first.order();
    let k = first.degree_profile().1.ok_or(PipelineError::NotRegular(0))?;
    for (index, g) in graphs.iter().enumerate() {
        let gk = g.degree_profile().1.ok_or(PipelineError::NotRegular(index))?;
        if g.order() != n || gk != k {
            return Err(PipelineError::MixedParameters { index, n: g.order(), k: gk, expected_n: n, expected_k: k });
        }
        if !g.is_connected() {
            return Err(PipelineError::Disconnected(index));
        }
    }
    Ok((n, k))
}

/// Scores every graph with all four criteria. All graphs must be connected
/// and regular with the same `(n, k)`; output order follows input order.
pub fn evaluate(graphs: &[Graph]) -> Result<Vec<Evaluation>, PipelineError> {
    let (n, k) = common_parameters(graphs)?;
    let bounds = bounds_for(n, k)?;
    graphs
        .iter()
        .map(|g| {
            let m = g.metrics();
            let diameter = m.diameter.expect("connectivity checked");
            let symmetry = symmetry::automorphisms(g)?;
            let score = Score {
                n,
                diameter,
                distance_sum: m.distance_sum,
                bisection: min_bisection(g).width,
                aut_order: symmetry.order.clone(),
            };
            Ok(Evaluation {
                graph: g.clone(),
                diameter_meets_bound: diameter == bounds.d_min,
                mpl_meets_bound: score.mpl() == bounds.mpl_min,
                score,
                symmetry,
            })
        })
        .collect()
}

/// Applies the ranking to an explicit candidate list instead of a full
/// enumeration. Isomorphic duplicates among the candidates collapse.
pub fn optimize_candidates(graphs: &[Graph], options: &OptimizeOptions) -> Result<OptimalSet, PipelineError> {
    let started = Instant::now();
    let (n, k) = common_parameters(graphs)?;
    let mut store = SurvivorStore::new(options.memory_cap, options.spill_dir.as_deref())?;
    for g in graphs {
        let m = g.metrics();
        store.offer(g.clone(), m.diameter.expect("connectivity checked"), m.distance_sum)?;
    }
    let stats = RunStats { generated: graphs.len() as u64, ..RunStats::default() };
    finish(n, k, store.into_graphs()?, stats, options, started)
}

/// Finds the optimal connected `k`-regular graphs on `n` vertices by exhaustive
/// enumeration.
pub fn optimize(n: usize, k: usize, options: &OptimizeOptions) -> Result<OptimalSet, PipelineError> {
    let started = Instant::now();
    if k == 2 && n >= 3 {
        let stats = RunStats { visited: 1, generated: 1, ..RunStats::default() };
        return finish(n, k, vec![families::cycle(n)], stats, options, started);
    }
    // parameter errors take precedence over a stale resume file
    enumerate::split_tasks(n, k, 0)?;

    let (tasks, mut store, mut gen_stats) = match &options.resume {
        Some(path) => {
            let ckpt = Checkpoint::load(path)?;
            if (ckpt.n, ckpt.k) != (n, k) {
                return Err(PipelineError::Checkpoint(format!(
                    "checkpoint is for ({},{}), not ({n},{k})",
                    ckpt.n, ckpt.k
                )));
            }
            let mut store = SurvivorStore::new(options.memory_cap, options.spill_dir.as_deref())?;
            if let Some((d, s)) = ckpt.best {
                for g in ckpt.survivors {
                    store.offer(g, d, s)?;
                }
            }
            (ckpt.pending, store, ckpt.stats)
        }
        None => {
            let store = SurvivorStore::new(options.memory_cap, options.spill_dir.as_deref())?;
            let (tasks, prefix) = enumerate::split_tasks_counted(n, k, options.split_depth)?;
            (tasks, store, prefix)
        }
    };

    let done = run_phase_one(&tasks, options, &mut store, &mut gen_stats)?;
    if done.iter().any(|d| !d) {
        let pending: Vec<GenTask> = tasks.iter().zip(&done).filter(|(_, d)| !**d).map(|(t, _)| t.clone()).collect();
        let path = options
            .checkpoint
            .clone()
            .or_else(|| options.spill_dir.as_ref().map(|d| d.join("checkpoint.txt")))
            .unwrap_or_else(|| PathBuf::from(format!("regnet-{n}-{k}.checkpoint")));
        let ckpt = Checkpoint { n, k, stats: gen_stats, best: store.best(), pending, survivors: store.into_graphs()? };
        ckpt.save(&path)?;
        return Err(PipelineError::Interrupted(path));
    }
    let stats = RunStats {
        visited: gen_stats.visited,
        generated: gen_stats.generated,
        rejected_iso: gen_stats.rejected_iso,
        ..RunStats::default()
    };
    finish(n, k, store.into_graphs()?, stats, options, started)
}

enum Message {
    Candidate(Graph, u32, u64),
    Finished(usize, GenStats),
}

/// Runs the tasks on `options.jobs` workers. Each worker forwards only graphs
/// that tie or beat the best `(diameter, distance_sum)` it has seen itself;
/// the calling thread owns the store. Returns which tasks ran to completion.
fn run_phase_one(
    tasks: &[GenTask],
    options: &OptimizeOptions,
    store: &mut SurvivorStore,
    stats: &mut GenStats,
) -> Result<Vec<bool>, PipelineError> {
    let next = AtomicUsize::new(0);
    let cancel = options.cancel.clone();
    let (tx, rx) = mpsc::channel::<Message>();
    let mut done = vec![false; tasks.len()];
    let mut failure: Option<PipelineError> = None;
    std::thread::scope(|scope| {
        for _ in 0..options.jobs.max(1) {
            let tx = tx.clone();
            let next = &next;
            let cancel = cancel.clone();
            scope.spawn(move || {
                let mut local_best: Option<(u32, u64)> = None;
                loop {
                    if cancel.as_ref().is_some_and(|c| c.load(Ordering::SeqCst)) {
                        break;
                    }
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    let Some(task) = tasks.get(i) else { break };
                    let result = enumerate::run_task(task, |g| {
                        let m = g.metrics();
                        let key = (m.diameter.expect("generated graphs are connected"), m.distance_sum);
                        if local_best.is_none_or(|b| key <= b) {
                            local_best = Some(key);
                            let _ = tx.send(Message::Candidate(g.clone(), key.0, key.1));
                        }
                    });
                    match result {
                        Ok(st) => {
                            let _ = tx.send(Message::Finished(i, st));
                        }
                        Err(_) => break,
                    }
                }
            });
        }
        drop(tx);
        for message in rx {
            match message {
                Message::Candidate(g, d, s) => {
                    if failure.is_none() {
                        if let Err(e) = store.offer(g, d, s) {
                            failure = Some(e.into());
                            if let Some(c) = &cancel {
                                c.store(true, Ordering::SeqCst);
                            }
                        }
                    }
                }
                Message::Finished(i, st) => {
                    stats.merge(&st);
                    done[i] = true;
                }
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(done),
    }
}

/// Maps `f` over `items` on up to `jobs` threads, preserving order.
fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(items.len()));
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(items.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(item) = items.get(i) else { break };
                let r = f(item);
                results.lock().expect("no worker panicked").push((i, r));
            });
        }
    });
    let mut results = results.into_inner().expect("no worker panicked");
    results.sort_by_key(|(i, _)| *i);
    results.into_iter().map(|(_, r)| r).collect()
}

/// Phase 2 on the survivors of phase 1, which all share one diameter and
/// total distance.
fn finish(
    n: usize,
    k: usize,
    survivors: Vec<Graph>,
    mut stats: RunStats,
    options: &OptimizeOptions,
    started: Instant,
) -> Result<OptimalSet, PipelineError> {
    if survivors.is_empty() {
        return Err(PipelineError::NoGraphs);
    }
    stats.survivors = survivors.len() as u64;
    let bounds = bounds_for(n, k)?;
    let jobs = options.jobs.max(1);

    let cuts = par_map(&survivors, jobs, min_bisection);
    let widest = cuts.iter().map(|c| c.width).max().expect("non-empty");
    let contenders: Vec<(&Graph, Vec<u8>)> =
        survivors.iter().zip(cuts).filter(|(_, c)| c.width == widest).map(|(g, c)| (g, c.witness)).collect();

    let analysed = par_map(&contenders, jobs, |(g, _)| symmetry::analyze(g));
    let mut members: BTreeMap<CanonicalForm, Member> = BTreeMap::new();
    let mut top = BigUint::from(0u32);
    for ((g, witness), result) in contenders.into_iter().zip(analysed) {
        let (form, sym) = result?;
        if sym.order < top {
            continue;
        }
        if sym.order > top {
            top = sym.order.clone();
            members.clear();
        }
        let m = g.metrics();
        let score = Score {
            n,
            diameter: m.diameter.expect("survivors are connected"),
            distance_sum: m.distance_sum,
            bisection: widest,
            aut_order: sym.order.clone(),
        };
        members.entry(form.clone()).or_insert(Member {
            graph: g.clone(),
            score,
            form,
            symmetry: sym,
            bisection_witness: witness,
        });
    }
    let graphs: Vec<Member> = members.into_values().collect();
    let score = graphs[0].score.clone();
    stats.wall_seconds = if options.record_timing { started.elapsed().as_secs_f64() } else { 0.0 };
    Ok(OptimalSet {
        n,
        k,
        tie_count: graphs.len(),
        diameter_meets_bound: score.diameter == bounds.d_min,
        mpl_meets_bound: score.mpl() == bounds.mpl_min,
        graphs,
        bounds,
        stats,
    })
}
