use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multihook::growth::grow;
use multihook::io::{self, parse_seed, TraceFile};
use multihook::montecarlo::{self, SimConfig, Statistic, TrackedVertex};
use multihook::theory;
use multihook::verify::{self, VerifyConfig};
use multihook::{profile_seed, BuildingSequence, Gamma, GrowthOptions, Rational, SeedProfile, SeedSpec, VertexId};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Default output directory when `--out` is not given.
const OUT_DIR_ENV: &str = "MULTIHOOK_OUT_DIR";

const K2_SEED: &str = include_str!("../../core/data/k2.seed");
const PS_SEED: &str = include_str!("../../core/data/ps.seed");
const TRIANGLE_SEED: &str = include_str!("../../core/data/triangle.seed");

#[derive(Parser)]
#[command(name = "multihook", version, about = "Grow, simulate and check random multi-hooking networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow one realisation and write its trace and edge list.
    Grow(GrowArgs),
    /// Monte Carlo estimates compared against the exact expectations.
    Simulate(SimulateArgs),
    /// Print exact values.
    Theory(TheoryArgs),
    /// Check every incremental recurrence against brute force.
    Verify(VerifyArgs),
    /// Replay a trace and diff the recomputed scalars.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BuiltinSeed {
    K2,
    Ps,
    Triangle,
}

#[derive(Args)]
struct SeedArgs {
    /// Seed file (`hook <name>`, `edge <u> <v>`, `#` comments).
    #[arg(long, conflicts_with = "seed")]
    seed_file: Option<PathBuf>,
    /// A bundled seed instead of a file.
    #[arg(long, value_enum)]
    seed: Option<BuiltinSeed>,
    /// const:<k>, linear, takeall or explicit:<k0>,<k1>,...
    #[arg(long, default_value = "linear")]
    sequence: String,
}

#[derive(Args)]
struct GrowArgs {
    #[command(flatten)]
    seed: SeedArgs,
    #[arg(long)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Maintain eccentricities and the diameter; recorded in the trace.
    #[arg(long)]
    track_ecc: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    seed: SeedArgs,
    #[arg(long)]
    steps: usize,
    #[arg(long, default_value_t = 1000)]
    replicates: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Comma-separated: degree, mindeg, tpl, depth, tracked:<j>[:<role>].
    #[arg(long, default_value = "degree,mindeg,tpl,depth")]
    stats: String,
    #[arg(long, default_value_t = montecarlo::DEFAULT_Z_THRESHOLD)]
    z_threshold: f64,
    /// Run replicates on one thread (results are identical).
    #[arg(long)]
    serial: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    Order,
    Edges,
    Avgdeg,
    AvgdegLimit,
    Mindeg,
    MindegPmf,
    MindegPropLimit,
    Tpl,
    Depth,
    Tracked,
    Limits,
    DegreeCoefficient,
    DepthCoefficient,
}

#[derive(Args)]
struct TheoryArgs {
    #[command(flatten)]
    seed: SeedArgs,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, value_enum)]
    quantity: Quantity,
    /// Birth step of the tracked vertex.
    #[arg(long, default_value_t = 0)]
    j: usize,
    /// Seed role of the tracked vertex (defaults to 1 at j = 0, else 2).
    #[arg(long)]
    role: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Grid {
    /// K2, ps and triangle under const:1, const:2, linear, takeall.
    Default,
    /// The ps seed under linear only.
    Small,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "default")]
    grid: Grid,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long)]
    trace_file: PathBuf,
    /// Needed only if the trace carries no embedded seed.
    #[arg(long)]
    seed_file: Option<PathBuf>,
}

/// Exit status classes: 1 for bad input, 2 for a failed check.
enum Failure {
    Input(String),
    Check(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Grow(a) => cmd_grow(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Theory(a) => cmd_theory(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Replay(a) => cmd_replay(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_seed(args: &SeedArgs) -> Result<(SeedSpec, Arc<SeedProfile>, BuildingSequence), Failure> {
    let text = match (&args.seed_file, args.seed) {
        (Some(path), _) => read(path)?,
        (None, Some(BuiltinSeed::K2)) => K2_SEED.to_owned(),
        (None, Some(BuiltinSeed::Ps)) => PS_SEED.to_owned(),
        (None, Some(BuiltinSeed::Triangle)) => TRIANGLE_SEED.to_owned(),
        (None, None) => return Err(Failure::Input("one of --seed-file or --seed is required".into())),
    };
    let spec = parse_seed(&text)?.spec;
    let profile = Arc::new(profile_seed(&spec)?);
    let sequence: BuildingSequence = args.sequence.parse()?;
    Ok((spec, profile, sequence))
}

fn out_dir(out: Option<PathBuf>) -> Result<PathBuf, Failure> {
    let dir = out
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

fn write(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn cmd_grow(args: GrowArgs) -> CmdResult {
    let (spec, profile, sequence) = load_seed(&args.seed)?;
    let options = GrowthOptions {
        track_ecc: args.track_ecc,
        ..GrowthOptions::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.rng_seed);
    let (state, trace) = grow(profile, sequence.clone(), args.steps, options, &mut rng)?;
    let dir = out_dir(args.out)?;
    write(&dir.join("trace.json"), &(TraceFile::new(&spec, &sequence, &trace).to_json() + "\n"))?;
    write(&dir.join("edges.txt"), &io::edge_list(state.graph()))?;
    let last = trace.recorded.last().expect("seed row");
    println!("vertices {}", last.order);
    println!("edges {}", last.edges);
    println!("min_degree_count {}", last.min_degree_count);
    println!("total_path_length {}", last.total_path_length);
    if let Some(d) = last.diameter {
        println!("diameter {d}");
    }
    println!("wrote {}", dir.display());
    Ok(())
}

fn parse_stats(spec: &str, steps: usize) -> Result<(Vec<Statistic>, Option<TrackedVertex>), Failure> {
    let mut stats = Vec::new();
    let mut tracked = None;
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "degree" => stats.extend([Statistic::Order, Statistic::Edges, Statistic::AvgDegree]),
            "mindeg" => stats.extend([Statistic::MinDegreeCount, Statistic::MinDegreeProportion]),
            "tpl" => stats.push(Statistic::TotalPathLength),
            "depth" => stats.push(Statistic::Depth),
            other => {
                let rest = other
                    .strip_prefix("tracked:")
                    .ok_or_else(|| Failure::Input(format!("unknown statistic `{other}`")))?;
                let mut parts = rest.split(':');
                let bad = || Failure::Input(format!("bad tracked statistic `{other}`"));
                let j: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
                let role = match parts.next() {
                    Some(r) => r.parse().map_err(|_| bad())?,
                    None => default_role(j),
                };
                if parts.next().is_some() {
                    return Err(bad());
                }
                if j > steps {
                    return Err(Failure::Input(format!("tracked birth step {j} exceeds --steps {steps}")));
                }
                tracked = Some(TrackedVertex {
                    birth_step: j,
                    role: VertexId(role),
                });
                stats.push(Statistic::TrackedDegree);
            }
        }
    }
    stats.sort();
    stats.dedup();
    if stats.is_empty() {
        return Err(Failure::Input("no statistics selected".into()));
    }
    Ok((stats, tracked))
}

fn default_role(j: usize) -> u32 {
    if j == 0 {
        1
    } else {
        2
    }
}

fn cmd_simulate(args: SimulateArgs) -> CmdResult {
    if args.replicates == 0 {
        return Err(Failure::Input("--replicates must be at least 1".into()));
    }
    let (_, profile, sequence) = load_seed(&args.seed)?;
    let (stats, tracked) = parse_stats(&args.stats, args.steps)?;
    let mut config = SimConfig::new(profile, sequence, args.steps, args.replicates);
    config.stats = stats;
    config.tracked = tracked;
    config.master_seed = args.rng_seed;
    config.parallel = !args.serial;
    config.z_threshold = args.z_threshold;
    let report = montecarlo::run(&config)?;
    let dir = out_dir(args.out)?;
    write(&dir.join("report.csv"), &io::report_csv(&report))?;
    write(&dir.join("summary.json"), &(io::report_json(&report) + "\n"))?;

    let comparison = montecarlo::compare(&report, args.z_threshold);
    println!(
        "{} rows, {} replicates, {} failures; wrote {}",
        comparison.checked,
        report.replicates,
        comparison.failures.len(),
        dir.display()
    );
    if comparison.passed() {
        Ok(())
    } else {
        let mut msg = String::new();
        for f in &comparison.failures {
            let _ = write!(msg, "\n  {f}");
        }
        Err(Failure::Check(format!("{} rows disagree with theory:{msg}", comparison.failures.len())))
    }
}

fn show(value: &Rational) -> String {
    format!("{value}\t{}", io::float17(multihook::to_f64(value)))
}

fn cmd_theory(args: TheoryArgs) -> CmdResult {
    let (_, seed, seq) = load_seed(&args.seed)?;
    let n = args.n;
    let int = |v: u64| Rational::from_integer(v.into());
    match args.quantity {
        Quantity::Order => println!("{}", show(&int(seq.tau(n, &seed)?))),
        Quantity::Edges => println!("{}", show(&int(theory::edge_count(&seed, &seq, n)?))),
        Quantity::Avgdeg => println!("{}", show(&theory::exact_average_degree(&seed, &seq, n)?)),
        Quantity::AvgdegLimit => println!("{}", show(&theory::limiting_average_degree(&seed))),
        Quantity::Mindeg => println!("{}", show(&theory::expected_min_degree_count(&seed, &seq, n)?)),
        Quantity::MindegPmf => {
            let pmf = theory::min_degree_pmf(&seed, &seq, n, theory::DEFAULT_STATE_CAP)?;
            for (x, p) in &pmf.support {
                println!("{x}\t{}", show(p));
            }
        }
        Quantity::MindegPropLimit => println!("{}", show(&theory::limiting_min_degree_proportion(&seed))),
        Quantity::Tpl => println!("{}", show(&theory::expected_total_path_length(&seed, &seq, n)?)),
        Quantity::Depth => println!("{}", show(&theory::expected_depth(&seed, &seq, n)?)),
        Quantity::Tracked => {
            let role = VertexId(args.role.unwrap_or_else(|| default_role(args.j)));
            if !seed.graph.contains(role) || (args.j > 0 && role == VertexId::REFERENCE) {
                return Err(Failure::Input(format!("seed role {role} cannot be tracked from step {}", args.j)));
            }
            let value = theory::expected_tracked_degree(&seed, &seq, args.j, n, seed.degree_of(role))?;
            println!("{}", show(&value));
        }
        Quantity::Limits => {
            let limits = seq.limits(&seed);
            println!("a\t{}", show(&limits.a));
            println!("b\t{}", show(&limits.b));
            match &limits.gamma {
                Gamma::Finite(g) => println!("gamma\t{}", show(g)),
                Gamma::Infinite => println!("gamma\tinf"),
            }
            println!("exact\t{}", limits.known_exactly);
        }
        Quantity::DegreeCoefficient => {
            let c = theory::degree_growth_coefficient(&seed, &seq.limits(&seed))?;
            println!("{}{}", show(&c.value), if c.degenerate { "\tdegenerate" } else { "" });
        }
        Quantity::DepthCoefficient => {
            let c = theory::depth_asymptotic_coefficient(&seed, &seq.limits(&seed))?;
            println!("{}{}", show(&c.value), if c.degenerate { "\tdegenerate" } else { "" });
        }
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    let mut config = match args.grid {
        Grid::Default => VerifyConfig::default_grid(),
        Grid::Small => VerifyConfig::small(SeedSpec::ps(), BuildingSequence::Linear, args.max_n),
    };
    config.max_n = args.max_n;
    config.runs = args.runs;
    config.rng_seed = args.rng_seed;
    config.inject_ecc_fault = args.inject_fault;
    let report = verify::run(&config)?;
    for p in &report.properties {
        let status = if p.failures.is_empty() { "ok" } else { "FAILED" };
        println!("{:<32} {:>8} checks  {status}", p.name, p.checks);
        for f in &p.failures {
            println!("    {f}");
        }
    }
    println!("{} properties, {} checks", report.properties.len(), report.total_checks());
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report
            .properties
            .iter()
            .filter(|p| !p.failures.is_empty())
            .map(|p| p.name)
            .collect();
        Err(Failure::Check(names.join(", ")))
    }
}

fn cmd_replay(args: ReplayArgs) -> CmdResult {
    let file = TraceFile::from_json(&read(&args.trace_file)?)?;
    let spec = match &args.seed_file {
        Some(path) => parse_seed(&read(path)?)?.spec,
        None => file.embedded_seed()?,
    };
    let outcome = io::replay_trace(&file, &spec)?;
    println!("n\torder\tedges\tX\tT\tdiameter\tC(ref)");
    for row in &outcome.trace.recorded {
        let opt = |v: Option<u32>| v.map_or_else(|| "-".to_owned(), |d| d.to_string());
        println!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            row.n,
            row.order,
            row.edges,
            row.min_degree_count,
            row.total_path_length,
            opt(row.diameter),
            opt(row.reference_ecc)
        );
    }
    if outcome.mismatches.is_empty() {
        println!("all recorded values reproduced");
        return Ok(());
    }
    let mut msg = String::new();
    for m in &outcome.mismatches {
        let _ = write!(msg, "\n  n = {}: {} recorded {} replayed {}", m.n, m.field, m.recorded, m.replayed);
    }
    Err(Failure::Check(format!("{} mismatches:{msg}", outcome.mismatches.len())))
}
