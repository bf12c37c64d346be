//! Command-line front end: instance generation, single chains, replicated
//! studies, the exhaustive oracle and trace plots.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 refused by the
//! enumeration cap.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use densest::config::RunConfigDocument;
use densest::generators::planted_instance;
use densest::harness::{
    brute_force_densest_capped, first_hit_iteration, run_replication_study, StudyConfig,
};
use densest::plot::plot_trace_csv;
use densest::saa::{self, SaaSettings};
use densest::samplers::{fmt_sig17, run_chain, Algorithm, SamplerConfig};
use densest::{Error, Graph};

#[derive(Parser)]
#[command(
    name = "densest",
    version,
    about = "Densest k-subgraph search with SM, SA and SAA chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate G(n, p) with a planted k-clique; writes an edge list and a JSON sidecar.
    Generate(GenerateArgs),
    /// Run one chain and write its trace CSV.
    Run(RunArgs),
    /// Replicated planted-clique study; writes a JSON summary.
    Bench(BenchArgs),
    /// Render a trace CSV as an SVG line plot.
    Plot(PlotArgs),
    /// Exact densest k-subgraph by exhaustive enumeration.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_probability)]
    p: f64,
    /// Planted clique size; 0 disables planting.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Graph stream uses this seed, clique placement uses seed ^ 0x9E3779B97F4A7C15.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge-list output path.
    #[arg(long)]
    out: PathBuf,
    /// Metadata JSON path [default: <out>.meta.json]
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SaaArgs {
    /// SAA: number of density regions.
    #[arg(long, default_value_t = saa::DEFAULT_REGIONS)]
    n_regions: usize,
    /// SAA: first threshold a_1.
    #[arg(long, default_value_t = saa::DEFAULT_A_FIRST)]
    a_first: f64,
    /// SAA: last threshold a_{N-1}.
    #[arg(long, default_value_t = saa::DEFAULT_A_LAST)]
    a_last: f64,
    /// SAA: explicit comma-separated thresholds, overriding the grid.
    #[arg(long, value_delimiter = ',')]
    thresholds: Option<Vec<f64>>,
    /// SAA: iterations before temperature and gain start to decay.
    #[arg(long, default_value_t = saa::DEFAULT_PLATEAU)]
    plateau: u64,
    /// SAA: base temperature of the square-root schedule.
    #[arg(long, default_value_t = saa::DEFAULT_BASE_TEMPERATURE)]
    base_temperature: f64,
}

impl SaaArgs {
    fn settings(&self) -> SaaSettings {
        SaaSettings {
            n_regions: self.n_regions,
            a_first: self.a_first,
            a_last: self.a_last,
            thresholds: self.thresholds.clone(),
            plateau: self.plateau,
            base_temperature: self.base_temperature,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// JSON run-config document; replaces the graph, algorithm and chain flags.
    #[arg(long, conflicts_with_all = ["graph", "algo", "k"])]
    config: Option<PathBuf>,
    /// Edge-list file.
    #[arg(long, required_unless_present = "config")]
    graph: Option<PathBuf>,
    /// One of sm, sa, saa.
    #[arg(long, value_parser = parse_algorithm, required_unless_present = "config")]
    algo: Option<Algorithm>,
    /// Subgraph size.
    #[arg(long, required_unless_present = "config")]
    k: Option<usize>,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    iters: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Local-move probability (SA and SAA).
    #[arg(long, default_value_t = densest::samplers::DEFAULT_ALPHA, value_parser = parse_probability)]
    alpha: f64,
    /// Density counted as a hit when reporting the first-hit iteration.
    #[arg(long, default_value_t = 1.0, value_parser = parse_probability)]
    target: f64,
    /// Stop once the best density reaches --target.
    #[arg(long)]
    stop_at_target: bool,
    /// Trace CSV output path.
    #[arg(long)]
    trace_out: PathBuf,
    #[command(flatten)]
    saa: SaaArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    replicates: u64,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0.05, value_parser = parse_probability)]
    p: f64,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    iters: u64,
    /// Comma-separated subset of sm, sa, saa.
    #[arg(long, default_value = "sm,sa,saa", value_parser = parse_algorithms)]
    algos: AlgorithmList,
    /// Master seed; replicate r uses seed + r, chains add a per-algorithm offset.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = densest::samplers::DEFAULT_ALPHA, value_parser = parse_probability)]
    alpha: f64,
    /// End chains once they hold the clique (timing studies).
    #[arg(long)]
    stop_at_target: bool,
    /// Worker threads; 0 uses all cores. Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    saa: SaaArgs,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Plot title [default: trace file name]
    #[arg(long)]
    title: Option<String>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    k: usize,
    /// Largest number of k-subsets to enumerate.
    #[arg(long, default_value_t = 10_000_000)]
    cap: u128,
}

#[derive(Clone)]
struct AlgorithmList(Vec<Algorithm>);

fn parse_probability(s: &str) -> std::result::Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("{p} is outside [0, 1]"))
    }
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_algorithms(s: &str) -> std::result::Result<AlgorithmList, String> {
    let mut list = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let alg = parse_algorithm(part)?;
        if !list.contains(&alg) {
            list.push(alg);
        }
    }
    if list.is_empty() {
        return Err("at least one of sm, sa, saa is required".into());
    }
    Ok(AlgorithmList(list))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(args) => generate(args),
        Command::Run(args) => run(args),
        Command::Bench(args) => bench(args),
        Command::Plot(args) => plot(args),
        Command::Oracle(args) => oracle(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<Error>() {
                Some(Error::CapExceeded { .. }) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn generate(args: GenerateArgs) -> Result<()> {
    let inst = planted_instance(args.n, args.p, args.k, args.seed)?;
    let meta = args
        .meta
        .unwrap_or_else(|| PathBuf::from(format!("{}.meta.json", args.out.display())));
    inst.save(&args.out, &meta)
        .with_context(|| format!("writing {} and {}", args.out.display(), meta.display()))?;
    println!("n {}", inst.graph.n());
    println!("m {}", inst.graph.m());
    println!("planted {:?}", inst.planted);
    Ok(())
}

fn load_graph(path: &Path) -> Result<Graph> {
    Graph::load_edge_list(path).with_context(|| format!("reading graph {}", path.display()))
}

fn run(args: RunArgs) -> Result<()> {
    let (graph, mut cfg, saa_cfg) = match &args.config {
        Some(path) => {
            let (doc, base) = RunConfigDocument::load(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            (doc.graph(&base)?, doc.sampler_config(), doc.saa_config()?)
        }
        None => {
            let graph = load_graph(args.graph.as_deref().expect("required by clap"))?;
            let cfg = SamplerConfig {
                alpha: args.alpha,
                ..SamplerConfig::new(
                    args.algo.expect("required by clap"),
                    args.k.expect("required by clap"),
                    args.iters,
                    args.seed,
                )
            };
            (graph, cfg, args.saa.settings().build()?)
        }
    };
    if args.config.is_none() || cfg.target_density.is_none() {
        cfg.target_density = Some(args.target);
    }
    cfg.stop_at_target |= args.stop_at_target;
    let target = cfg.target_density.unwrap_or(1.0);

    let (trace, state) = run_chain(&graph, &cfg, Some(&saa_cfg))?;
    let mut file = std::io::BufWriter::new(
        fs::File::create(&args.trace_out)
            .with_context(|| format!("creating {}", args.trace_out.display()))?,
    );
    trace.write_csv(&mut file)?;
    file.flush()?;

    let first_hit = first_hit_iteration(&trace, target)
        .map(|i| i.to_string())
        .unwrap_or_else(|| "none".into());
    println!("algorithm {}", cfg.algorithm);
    println!("best_density {}", fmt_sig17(state.best_density));
    println!("best_selection {:?}", state.best.nodes());
    println!("first_hit {first_hit}");
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let cfg = StudyConfig {
        replicates: args.replicates as usize,
        n: args.n,
        p: args.p,
        k: args.k,
        max_iterations: args.iters,
        algorithms: args.algos.0,
        master_seed: args.seed,
        alpha: args.alpha,
        saa: args.saa.settings(),
        stop_at_target: args.stop_at_target,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()?;
    let summary = pool.install(|| run_replication_study(&cfg))?;
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    fs::write(&args.out, json).with_context(|| format!("writing {}", args.out.display()))?;
    print!("{}", summary.table());
    Ok(())
}

fn plot(args: PlotArgs) -> Result<()> {
    let bytes =
        fs::read(&args.trace).with_context(|| format!("reading {}", args.trace.display()))?;
    let title = args.title.unwrap_or_else(|| {
        args.trace
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    let svg =
        plot_trace_csv(&bytes, &title).with_context(|| format!("in {}", args.trace.display()))?;
    fs::write(&args.out, svg).with_context(|| format!("writing {}", args.out.display()))?;
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<()> {
    let graph = load_graph(&args.graph)?;
    let (density, witness) = brute_force_densest_capped(&graph, args.k, args.cap)?;
    println!("{density:.6} {:?}", witness.nodes());
    Ok(())
}
