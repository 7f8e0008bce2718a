//! Stage-based parallel execution with per-thread queues and work stealing.
//!
//! Seeds are processed in degeneracy order in stages of `M` (one seed per
//! worker per stage). Each worker builds its seed subgraph, generates that
//! seed's tasks into its own deque, and drains it newest-first; a worker
//! whose queue runs dry steals the oldest task from another queue in the
//! same stage. A stage ends when every queue is empty and no task is in
//! flight, which also releases the stage's subgraphs. Tasks that outlive the
//! configured time budget requeue their remaining branches as fresh tasks,
//! so stragglers cannot serialize a stage.

use crate::branch::{run_task_impl, BranchConfig, BranchCtx};
use crate::graph::{degeneracy_order, reduce_to_core, Graph};
use crate::seed::{build_pair_matrix, build_seed_subgraph, PairMatrix, SeedBuild};
use crate::state::Task;
use crate::tasks::generate_tasks;
use crossbeam_deque::{Steal, Stealer, Worker};
use std::io::Write;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::{Arc, Barrier, Mutex};
use std::time::{Duration, Instant};

/// What the run delivers.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    /// Deliver every plex to the sink.
    List,
    /// Only count results; the sink is never called.
    Count,
}

/// Parallel run parameters.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Worker thread count, at least 1.
    pub threads: usize,
    /// Per-task time budget before straggler decomposition; `None` disables
    /// the mechanism. Overrides `branch.deadline` for the run.
    pub timeout: Option<Duration>,
    pub branch: BranchConfig,
    pub mode: Mode,
}

impl RunConfig {
    pub fn new(k: usize, q: usize) -> RunConfig {
        RunConfig {
            threads: 1,
            timeout: Some(DEFAULT_TIMEOUT),
            branch: BranchConfig::new(k, q),
            mode: Mode::List,
        }
    }
}

/// Default task time budget: 0.1 ms.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_micros(100);

/// Counters reported by [`run`].
#[derive(Clone, Debug, Default)]
pub struct RunStats {
    pub plex_count: u64,
    pub tasks_created: u64,
    pub tasks_completed: u64,
    pub tasks_stolen: u64,
    pub stages: u64,
    pub wall_time: Duration,
}

/// Consumer of enumerated plexes. `emit` receives the members as original
/// input ids, sorted ascending, and must tolerate concurrent calls.
pub trait PlexSink: Sync {
    fn emit(&self, plex: &[u64]);
}

/// Collects everything into a vector; intended for tests and small runs.
#[derive(Default)]
pub struct CollectSink {
    results: Mutex<Vec<Vec<u64>>>,
}

impl CollectSink {
    pub fn new() -> CollectSink {
        CollectSink::default()
    }

    pub fn into_results(self) -> Vec<Vec<u64>> {
        self.results.into_inner().unwrap()
    }
}

impl PlexSink for CollectSink {
    fn emit(&self, plex: &[u64]) {
        self.results.lock().unwrap().push(plex.to_vec());
    }
}

/// Writes one line per plex through a serialized buffered writer.
pub struct LineSink<W: Write + Send> {
    writer: Mutex<std::io::BufWriter<W>>,
}

impl<W: Write + Send> LineSink<W> {
    pub fn new(writer: W) -> LineSink<W> {
        LineSink {
            writer: Mutex::new(std::io::BufWriter::new(writer)),
        }
    }

    pub fn finish(self) -> std::io::Result<W> {
        let buf = self.writer.into_inner().unwrap();
        buf.into_inner().map_err(|e| e.into_error())
    }
}

impl<W: Write + Send> PlexSink for LineSink<W> {
    fn emit(&self, plex: &[u64]) {
        let mut line = String::with_capacity(plex.len() * 8);
        for (i, v) in plex.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&v.to_string());
        }
        line.push('\n');
        let mut w = self.writer.lock().unwrap();
        let _ = w.write_all(line.as_bytes());
    }
}

/// Ignores everything (count-mode companion).
pub struct NullSink;

impl PlexSink for NullSink {
    fn emit(&self, _plex: &[u64]) {}
}

/// Enumerates all maximal k-plexes with at least `q` vertices of `g`.
///
/// Preprocessing (core reduction to minimum degree `q - k`, then degeneracy
/// ordering) happens here; results reach the sink as original input ids. The
/// result set is independent of thread count and time budget.
pub fn run(g: &Graph, cfg: &RunConfig, sink: &dyn PlexSink) -> RunStats {
    run_impl(g, cfg, sink, false)
}

pub(crate) fn run_impl(
    g: &Graph,
    cfg: &RunConfig,
    sink: &dyn PlexSink,
    validate: bool,
) -> RunStats {
    assert!(cfg.threads >= 1, "need at least one worker");
    let k = cfg.branch.k;
    let q = cfg.branch.q;
    assert!(k >= 1 && q >= 2 * k - 1, "require k >= 1 and q >= 2k-1");

    let start = Instant::now();
    let reduced = reduce_to_core(g, q.saturating_sub(k));
    let ord = degeneracy_order(&reduced);
    let n = reduced.n();
    let n_seeds = if n >= q { n - q + 1 } else { 0 };

    let mut branch_cfg = cfg.branch.clone();
    branch_cfg.deadline = cfg.timeout;

    let m = cfg.threads;
    let shared = Shared {
        outstanding: AtomicUsize::new(0),
        barrier: Barrier::new(m),
        plex_count: AtomicU64::new(0),
        tasks_created: AtomicU64::new(0),
        tasks_completed: AtomicU64::new(0),
        tasks_stolen: AtomicU64::new(0),
        stages: AtomicU64::new(0),
    };

    let mut queues: Vec<Worker<Task>> = (0..m).map(|_| Worker::new_lifo()).collect();
    let stealers: Vec<Stealer<Task>> = queues.iter().map(|w| w.stealer()).collect();

    std::thread::scope(|scope| {
        for wid in (0..m).rev() {
            let queue = queues.pop().unwrap();
            let shared = &shared;
            let stealers = &stealers;
            let reduced = &reduced;
            let ord = &ord;
            let branch_cfg = &branch_cfg;
            scope.spawn(move || {
                worker_loop(
                    wid, m, n_seeds, queue, stealers, reduced, ord, branch_cfg, cfg.mode, sink,
                    shared, validate,
                );
            });
        }
    });

    let stats = RunStats {
        plex_count: shared.plex_count.load(Ordering::Relaxed),
        tasks_created: shared.tasks_created.load(Ordering::Relaxed),
        tasks_completed: shared.tasks_completed.load(Ordering::Relaxed),
        tasks_stolen: shared.tasks_stolen.load(Ordering::Relaxed),
        stages: shared.stages.load(Ordering::Relaxed),
        wall_time: start.elapsed(),
    };
    debug_assert_eq!(stats.tasks_created, stats.tasks_completed);
    stats
}

struct Shared {
    /// Unfinished work in the current stage: pending seed builds plus queued
    /// or in-flight tasks. Zero means the stage is over.
    outstanding: AtomicUsize,
    barrier: Barrier,
    plex_count: AtomicU64,
    tasks_created: AtomicU64,
    tasks_completed: AtomicU64,
    tasks_stolen: AtomicU64,
    stages: AtomicU64,
}

#[allow(clippy::too_many_arguments)]
fn worker_loop(
    wid: usize,
    m: usize,
    n_seeds: usize,
    queue: Worker<Task>,
    stealers: &[Stealer<Task>],
    g: &Graph,
    ord: &crate::graph::DegeneracyOrder,
    branch_cfg: &BranchConfig,
    mode: Mode,
    sink: &dyn PlexSink,
    shared: &Shared,
    validate: bool,
) {
    let ctx = BranchCtx {
        g,
        cfg: branch_cfg,
        validate,
    };
    let mut local_plexes = 0u64;
    let mut stage = 0usize;
    loop {
        let base = stage * m;
        if base >= n_seeds {
            break;
        }
        shared.barrier.wait();
        if wid == 0 {
            let builds = (n_seeds - base).min(m);
            shared.outstanding.store(builds, Ordering::SeqCst);
            shared.stages.fetch_add(1, Ordering::Relaxed);
        }
        shared.barrier.wait();

        let seed_pos = base + wid;
        if seed_pos < n_seeds {
            if let SeedBuild::Built(sg) =
                build_seed_subgraph(g, ord, seed_pos, branch_cfg.k, branch_cfg.q)
            {
                let pm = if branch_cfg.use_pair_prune {
                    build_pair_matrix(&sg, branch_cfg.k, branch_cfg.q)
                } else {
                    PairMatrix::all_true(sg.len())
                };
                let sg = Arc::new(sg);
                let pm = Arc::new(pm);
                generate_tasks(
                    &sg,
                    &pm,
                    branch_cfg.k,
                    branch_cfg.q,
                    branch_cfg.use_pair_prune,
                    &mut |task| {
                        shared.tasks_created.fetch_add(1, Ordering::Relaxed);
                        shared.outstanding.fetch_add(1, Ordering::SeqCst);
                        queue.push(task);
                    },
                );
            }
            shared.outstanding.fetch_sub(1, Ordering::SeqCst);
        }

        // Drain own queue, then steal until the stage is exhausted.
        loop {
            if let Some(task) = queue.pop() {
                execute(&ctx, task, &queue, g, mode, sink, shared, &mut local_plexes);
                continue;
            }
            if shared.outstanding.load(Ordering::SeqCst) == 0 {
                break;
            }
            match steal_from_any(wid, stealers) {
                Some(task) => {
                    shared.tasks_stolen.fetch_add(1, Ordering::Relaxed);
                    execute(&ctx, task, &queue, g, mode, sink, shared, &mut local_plexes);
                }
                None => std::thread::yield_now(),
            }
        }
        stage += 1;
    }
    shared.plex_count.fetch_add(local_plexes, Ordering::Relaxed);
}

fn steal_from_any(wid: usize, stealers: &[Stealer<Task>]) -> Option<Task> {
    let m = stealers.len();
    for off in 1..m {
        let victim = (wid + off) % m;
        loop {
            match stealers[victim].steal() {
                Steal::Success(task) => return Some(task),
                Steal::Empty => break,
                Steal::Retry => continue,
            }
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn execute(
    ctx: &BranchCtx<'_>,
    task: Task,
    queue: &Worker<Task>,
    g: &Graph,
    mode: Mode,
    sink: &dyn PlexSink,
    shared: &Shared,
    local_plexes: &mut u64,
) {
    let mut resolved: Vec<u64> = Vec::new();
    let mut emit = |sg: &crate::seed::SeedSubgraph, locals: &[u32]| {
        *local_plexes += 1;
        if mode == Mode::List {
            resolved.clear();
            resolved.extend(locals.iter().map(|&l| g.original_id(sg.global(l))));
            resolved.sort_unstable();
            sink.emit(&resolved);
        }
    };
    let mut respawn = |t: Task| {
        shared.tasks_created.fetch_add(1, Ordering::Relaxed);
        shared.outstanding.fetch_add(1, Ordering::SeqCst);
        queue.push(t);
    };
    run_task_impl(ctx, task, &mut emit, &mut respawn);
    shared.tasks_completed.fetch_add(1, Ordering::Relaxed);
    shared.outstanding.fetch_sub(1, Ordering::SeqCst);
}
