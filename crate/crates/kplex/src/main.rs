use clap::{Parser, ValueEnum};
use kplex::graph::{parse_edge_list, Graph};
use kplex::scheduler::{run, LineSink, Mode, NullSink, RunConfig, RunStats};
use kplex::{BranchConfig, Variant};
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

/// List all maximal k-plexes with at least q vertices in an undirected graph.
#[derive(Parser, Debug)]
#[command(name = "kplex", version, about)]
struct Args {
    /// Edge-list file; `#`/`%` lines are comments, one `u v` pair per line.
    #[arg(long, short = 'i')]
    input: PathBuf,

    /// Non-neighbor budget per vertex (k >= 1).
    #[arg(short = 'k')]
    k: usize,

    /// Minimum result size (q >= 2k-1).
    #[arg(short = 'q')]
    q: usize,

    /// Worker threads; defaults to the available cores.
    #[arg(long, short = 't')]
    threads: Option<usize>,

    /// Task time budget in milliseconds before straggler decomposition;
    /// 0 disables the mechanism.
    #[arg(long, default_value_t = 0.1)]
    timeout_ms: f64,

    /// What to write: every plex, or just how many there are.
    #[arg(long, value_enum, default_value_t = OutputMode::List)]
    mode: OutputMode,

    /// Write results here instead of standard output.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,

    /// Branching strategy.
    #[arg(long, value_enum, default_value_t = VariantArg::Ours)]
    variant: VariantArg,

    /// Disable upper-bound pruning of include branches.
    #[arg(long)]
    disable_ub: bool,

    /// Disable pair co-occurrence pruning.
    #[arg(long)]
    disable_pair_prune: bool,

    /// Print run statistics to standard error.
    #[arg(long)]
    stats: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum OutputMode {
    List,
    Count,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum VariantArg {
    Ours,
    OursP,
    Basic,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Ours => Variant::Ours,
            VariantArg::OursP => Variant::OursP,
            VariantArg::Basic => Variant::Basic,
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            // Let clap print help/version itself; everything else is exit 1.
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run_cli(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run_cli(args: Args) -> Result<(), String> {
    if args.k < 1 {
        return Err("k must be at least 1".into());
    }
    if args.q + 1 < 2 * args.k {
        return Err(format!(
            "q must be at least 2k-1 = {} so that every result is connected \
             with diameter at most 2 (got q = {})",
            2 * args.k - 1,
            args.q
        ));
    }
    let threads = args
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));
    if threads == 0 {
        return Err("threads must be at least 1".into());
    }
    if args.timeout_ms < 0.0 {
        return Err("timeout-ms must be non-negative".into());
    }
    let timeout = if args.timeout_ms == 0.0 {
        None
    } else {
        Some(Duration::from_secs_f64(args.timeout_ms / 1000.0))
    };

    let load_start = Instant::now();
    let file = File::open(&args.input)
        .map_err(|e| format!("cannot open {}: {e}", args.input.display()))?;
    let graph = parse_edge_list(BufReader::new(file)).map_err(|e| e.to_string())?;
    let load_time = load_start.elapsed();

    let mut branch = BranchConfig::new(args.k, args.q);
    branch.variant = args.variant.into();
    branch.use_ub = !args.disable_ub;
    branch.use_pair_prune = !args.disable_pair_prune;
    let cfg = RunConfig {
        threads,
        timeout,
        branch,
        mode: match args.mode {
            OutputMode::List => Mode::List,
            OutputMode::Count => Mode::Count,
        },
    };

    let stats = match (&args.output, args.mode) {
        (_, OutputMode::Count) => {
            let stats = run(&graph, &cfg, &NullSink);
            write_count(&args.output, stats.plex_count)?;
            stats
        }
        (Some(path), OutputMode::List) => {
            let out = File::create(path)
                .map_err(|e| format!("cannot create {}: {e}", path.display()))?;
            let sink = LineSink::new(out);
            let stats = run(&graph, &cfg, &sink);
            sink.finish().map_err(|e| e.to_string())?;
            stats
        }
        (None, OutputMode::List) => {
            let sink = LineSink::new(io::stdout());
            let stats = run(&graph, &cfg, &sink);
            sink.finish().map_err(|e| e.to_string())?;
            stats
        }
    };

    if args.stats {
        print_stats(&graph, &stats, load_time);
    }
    Ok(())
}

fn write_count(output: &Option<PathBuf>, count: u64) -> Result<(), String> {
    match output {
        Some(path) => {
            let mut f =
                File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
            writeln!(f, "{count}").map_err(|e| e.to_string())
        }
        None => {
            println!("{count}");
            Ok(())
        }
    }
}

fn print_stats(graph: &Graph, stats: &RunStats, load_time: Duration) {
    eprintln!(
        "plexes={} tasks_created={} tasks_stolen={} stages={} \
         enumeration_ms={:.3} graph_load_ms={:.3} n={} m={}",
        stats.plex_count,
        stats.tasks_created,
        stats.tasks_stolen,
        stats.stages,
        stats.wall_time.as_secs_f64() * 1e3,
        load_time.as_secs_f64() * 1e3,
        graph.n(),
        graph.m()
    );
}
