//! Command-line surface: compile rule files, scan inputs, benchmark,
//! inspect region decisions, and differentially test the engines.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hfx::{
    assemble, compile_pattern_set, deserialize, detect_with_report, dot::dfa_to_dot,
    parse_rule_file, rng::Rng, rule_line_numbers, scan_stream, serialize, workload, CompileConfig,
    CompileError, DetectorConfig, Dfa, Engine, EngineParams, HybridDb, MatchEvent, RegionMode,
    StreamState,
};

const SCAN_CHUNK: usize = 1 << 20;
const BENCH_SYNTH_BYTES: usize = 8 << 20;

#[derive(Parser)]
#[command(
    name = "hfx",
    version,
    about = "Hybrid-DFA multi-pattern regex scanner"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile a rule file into a ".hfxd" database.
    Compile(CompileArgs),
    /// Scan input files against a compiled database.
    Scan(ScanArgs),
    /// Measure scan throughput.
    Bench(BenchArgs),
    /// Report the automaton structure and region decision.
    Inspect(InspectArgs),
    /// Compare the hybrid engine against the scalar oracle on random inputs.
    Difftest(DifftestArgs),
}

#[derive(Args, Clone)]
struct DetectorArgs {
    /// Stickiness-sum threshold an SCC must exceed.
    #[arg(long, default_value_t = 30)]
    sigma: u32,
    /// Leakiness acceptance threshold in [0, 1].
    #[arg(long, default_value_t = 0.05)]
    lambda: f64,
    /// Leakiness evaluation depth.
    #[arg(long = "leak-depth", default_value_t = 9)]
    leak_depth: u32,
    /// Batch length for in-region transitions.
    #[arg(long, default_value_t = 9)]
    batch: u32,
    /// Region detection mode.
    #[arg(long = "region-mode", value_enum, default_value_t = RegionModeArg::Hyper)]
    region_mode: RegionModeArg,
    /// Seed for random region mode and synthetic inputs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CompileArgs {
    /// Rule file: one regex per line, '#' comments and blanks ignored.
    #[arg(long)]
    rules: PathBuf,
    /// Output database path (defaults to the rule file with ".hfxd").
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    detector: DetectorArgs,
}

#[derive(Args)]
struct ScanArgs {
    /// Compiled ".hfxd" database.
    #[arg(long)]
    db: PathBuf,
    /// Input file(s) to scan.
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = EngineArg::Hybrid)]
    engine: EngineArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Jsonl)]
    format: FormatArg,
    /// Ablation: batch through the raw shuffle vectors (incorrect by
    /// design; reproduces the out-region error).
    #[arg(long = "no-gutter", hide = true)]
    no_gutter: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    db: PathBuf,
    /// Input payload; without it a seeded region-circulating synthetic
    /// workload is generated in memory.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Timed passes per engine (after one warm-up).
    #[arg(long, default_value_t = 5)]
    repeat: usize,
    /// Bench only this engine; default benches hybrid and scalar.
    #[arg(long, value_enum)]
    engine: Option<EngineArg>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct InspectArgs {
    /// Rule file to compile and analyze.
    #[arg(long, conflicts_with = "db")]
    rules: Option<PathBuf>,
    /// Existing database to analyze.
    #[arg(long)]
    db: Option<PathBuf>,
    /// Write a DOT graph here (hyper-region nodes marked).
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[command(flatten)]
    detector: DetectorArgs,
}

#[derive(Args)]
struct DifftestArgs {
    #[arg(long)]
    rules: PathBuf,
    /// Number of random cases.
    #[arg(long, default_value_t = 1000)]
    cases: usize,
    #[arg(long = "no-gutter", hide = true)]
    no_gutter: bool,
    #[command(flatten)]
    detector: DetectorArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegionModeArg {
    Hyper,
    Random,
    None,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Hybrid,
    Scalar,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Jsonl,
    Text,
}

impl From<RegionModeArg> for RegionMode {
    fn from(mode: RegionModeArg) -> RegionMode {
        match mode {
            RegionModeArg::Hyper => RegionMode::Hyper,
            RegionModeArg::Random => RegionMode::Random,
            RegionModeArg::None => RegionMode::None,
        }
    }
}

/// Failure carrying its process exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> CliError {
        CliError {
            code: 1,
            message: msg.into(),
        }
    }
    fn compile(msg: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: msg.into(),
        }
    }
    fn io(msg: impl Into<String>) -> CliError {
        CliError {
            code: 3,
            message: msg.into(),
        }
    }
    fn divergence(msg: impl Into<String>) -> CliError {
        CliError {
            code: 4,
            message: msg.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Compile(args) => cmd_compile(args),
        Cmd::Scan(args) => cmd_scan(args),
        Cmd::Bench(args) => cmd_bench(args),
        Cmd::Inspect(args) => cmd_inspect(args),
        Cmd::Difftest(args) => cmd_difftest(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn detector_config(args: &DetectorArgs) -> Result<DetectorConfig, CliError> {
    let cfg = DetectorConfig {
        sigma: args.sigma,
        lambda: args.lambda,
        depth: args.leak_depth,
        mode: args.region_mode.into(),
        seed: args.seed,
        ..DetectorConfig::default()
    };
    cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
    if args.batch < 1 {
        return Err(CliError::usage("batch length must be at least 1"));
    }
    Ok(cfg)
}

fn engine_params(args: &DetectorArgs) -> EngineParams {
    EngineParams {
        batch: args.batch,
        sigma: args.sigma,
        lambda: args.lambda,
        depth: args.leak_depth,
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("reading {}: {e}", path.display())))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::io(format!("reading {}: {e}", path.display())))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes)
        .map_err(|e| CliError::io(format!("writing {}: {e}", path.display())))
}

/// Compiles the rule file into (patterns, DFA), mapping parse failures to
/// line-numbered compile errors.
fn compile_rules(path: &Path) -> Result<(Vec<String>, Dfa), CliError> {
    let text = read_text(path)?;
    let patterns: Vec<String> = parse_rule_file(&text)
        .into_iter()
        .map(String::from)
        .collect();
    let lines = rule_line_numbers(&text);
    if patterns.is_empty() {
        return Err(CliError::compile(format!(
            "{}: no patterns",
            path.display()
        )));
    }
    match compile_pattern_set(&patterns, &CompileConfig::default()) {
        Ok(dfa) => Ok((patterns, dfa)),
        Err(CompileError::Parse(errors)) => {
            let mut msg = format!(
                "{}: {} pattern(s) failed to parse",
                path.display(),
                errors.len()
            );
            for e in errors {
                let line = lines.get(e.index).copied().unwrap_or(0);
                let _ = write!(msg, "\n  line {line}: {}", e.error);
            }
            Err(CliError::compile(msg))
        }
        Err(other) => Err(CliError::compile(other.to_string())),
    }
}

fn build_db(
    dfa: &Dfa,
    cfg: &DetectorConfig,
    params: EngineParams,
) -> (HybridDb, String, Option<f64>, Option<u64>) {
    let (plan, report) = detect_with_report(dfa, cfg);
    let leakiness = plan.as_ref().map(|p| p.leakiness);
    let stickiness = plan.as_ref().map(|p| p.stickiness_sum);
    let db = assemble(dfa, plan.as_ref(), params).expect("accepted plan fits capacity");
    (db, report.decision, leakiness, stickiness)
}

fn cmd_compile(args: CompileArgs) -> Result<(), CliError> {
    let cfg = detector_config(&args.detector)?;
    let (patterns, dfa) = compile_rules(&args.rules)?;
    let (db, decision, leakiness, stickiness) = build_db(&dfa, &cfg, engine_params(&args.detector));
    let out = args
        .out
        .unwrap_or_else(|| args.rules.with_extension("hfxd"));
    write_bytes(&out, &serialize(&db))?;

    println!("patterns: {}", patterns.len());
    println!("dfa states: {}", dfa.state_count());
    match &db.region {
        Some(region) => {
            println!("region: {} states (s_limit {})", region.k, region.s_limit);
            println!("region leakiness: {:.6}", leakiness.unwrap_or(0.0));
            println!("region stickiness sum: {}", stickiness.unwrap_or(0));
        }
        None => println!("region: none ({decision})"),
    }
    println!("database: {}", out.display());
    Ok(())
}

fn load_db(path: &Path) -> Result<HybridDb, CliError> {
    let bytes = read_bytes(path)?;
    deserialize(&bytes).map_err(|e| CliError::compile(format!("{}: {e}", path.display())))
}

fn pick_engine(engine: EngineArg, no_gutter: bool) -> Engine {
    match (engine, no_gutter) {
        (EngineArg::Scalar, _) => Engine::Scalar,
        (EngineArg::Hybrid, false) => Engine::Hybrid,
        (EngineArg::Hybrid, true) => Engine::HybridNoGutter,
    }
}

/// Scans one file in streaming chunks, returning (events, bytes, seconds).
fn scan_file(
    db: &HybridDb,
    path: &Path,
    engine: Engine,
) -> Result<(Vec<MatchEvent>, u64, f64), CliError> {
    let data = read_bytes(path)?;
    let mut events = Vec::new();
    let started = Instant::now();
    let mut st = StreamState::start_of(db);
    for chunk in data.chunks(SCAN_CHUNK) {
        st = scan_stream(db, st, chunk, engine, &mut |ev| events.push(ev))
            .map_err(|e| CliError::compile(e.to_string()))?;
    }
    Ok((events, data.len() as u64, started.elapsed().as_secs_f64()))
}

fn cmd_scan(args: ScanArgs) -> Result<(), CliError> {
    let db = load_db(&args.db)?;
    let engine = pick_engine(args.engine, args.no_gutter);
    let mut out = String::new();
    let mut total_bytes = 0u64;
    let mut total_events = 0u64;
    let mut total_elapsed = 0.0f64;
    for path in &args.input {
        let (events, bytes, elapsed) = scan_file(&db, path, engine)?;
        total_bytes += bytes;
        total_events += events.len() as u64;
        total_elapsed += elapsed;
        let throughput = if elapsed > 0.0 {
            8.0 * bytes as f64 / elapsed
        } else {
            0.0
        };
        match args.format {
            FormatArg::Jsonl => {
                for ev in &events {
                    let _ = writeln!(
                        out,
                        "{{\"pattern\":{},\"offset\":{}}}",
                        ev.pattern, ev.offset
                    );
                }
                let _ = writeln!(
                    out,
                    "{{\"file\":{},\"bytes\":{},\"events\":{},\"elapsed_seconds\":{:.6},\"throughput_bps\":{:.0}}}",
                    serde_json::to_string(&path.display().to_string()).unwrap(),
                    bytes,
                    events.len(),
                    elapsed,
                    throughput
                );
            }
            FormatArg::Text => {
                for ev in &events {
                    let _ = writeln!(out, "pattern={} offset={}", ev.pattern, ev.offset);
                }
                let _ = writeln!(
                    out,
                    "file={} bytes={} events={} elapsed_seconds={:.6} throughput_bps={:.0}",
                    path.display(),
                    bytes,
                    events.len(),
                    elapsed,
                    throughput
                );
            }
        }
    }
    if args.input.len() > 1 {
        let throughput = if total_elapsed > 0.0 {
            8.0 * total_bytes as f64 / total_elapsed
        } else {
            0.0
        };
        match args.format {
            FormatArg::Jsonl => {
                let _ = writeln!(
                    out,
                    "{{\"total_bytes\":{total_bytes},\"total_events\":{total_events},\"elapsed_seconds\":{total_elapsed:.6},\"throughput_bps\":{throughput:.0}}}"
                );
            }
            FormatArg::Text => {
                let _ = writeln!(
                    out,
                    "total bytes={total_bytes} events={total_events} elapsed_seconds={total_elapsed:.6} throughput_bps={throughput:.0}"
                );
            }
        }
    }
    match &args.out {
        Some(path) => write_bytes(path, out.as_bytes())?,
        None => print!("{out}"),
    }
    Ok(())
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn bench_engine(db: &HybridDb, data: &[u8], engine: Engine, repeat: usize) -> f64 {
    let run = || {
        let mut count = 0u64;
        let started = Instant::now();
        let mut st = StreamState::start_of(db);
        for chunk in data.chunks(SCAN_CHUNK) {
            st = scan_stream(db, st, chunk, engine, &mut |_| count += 1).unwrap();
        }
        let elapsed = started.elapsed().as_secs_f64();
        std::hint::black_box((st, count));
        8.0 * data.len() as f64 / elapsed / 1e9
    };
    run(); // warm-up
    let samples: Vec<f64> = (0..repeat.max(1)).map(|_| run()).collect();
    median(samples)
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let db = load_db(&args.db)?;
    let data = match &args.input {
        Some(path) => read_bytes(path)?,
        None => {
            println!(
                "workload: synthetic region-circulating ({BENCH_SYNTH_BYTES} bytes, seed {})",
                args.seed
            );
            workload::region_circulating(&db, BENCH_SYNTH_BYTES, args.seed)
        }
    };
    let engines: Vec<(&str, Engine)> = match args.engine {
        Some(EngineArg::Hybrid) => vec![("hybrid", Engine::Hybrid)],
        Some(EngineArg::Scalar) => vec![("scalar", Engine::Scalar)],
        None => vec![("hybrid", Engine::Hybrid), ("scalar", Engine::Scalar)],
    };
    let mut results = Vec::new();
    for (name, engine) in &engines {
        let gbps = bench_engine(&db, &data, *engine, args.repeat);
        println!(
            "{name}: median {gbps:.3} Gbit/s over {} runs",
            args.repeat.max(1)
        );
        results.push((*name, gbps));
    }
    if results.len() == 2 {
        let hybrid = results.iter().find(|(n, _)| *n == "hybrid").unwrap().1;
        let scalar = results.iter().find(|(n, _)| *n == "scalar").unwrap().1;
        if scalar > 0.0 {
            println!("ratio hybrid/scalar: {:.3}", hybrid / scalar);
        }
    }
    Ok(())
}

/// Rebuilds a dense DFA view over the live states of a database so the
/// graph analyses can run on it. Returns the DFA plus the runtime id of
/// each dense state.
fn dfa_from_db(db: &HybridDb) -> (Dfa, Vec<u32>) {
    let rows = db.outer.rows();
    let live: Vec<u32> = match &db.region {
        Some(region) => (0..region.k).chain(64..rows).collect(),
        None => (0..rows).collect(),
    };
    let dense_of: std::collections::HashMap<u32, u32> = live
        .iter()
        .enumerate()
        .map(|(i, &rt)| (rt, i as u32))
        .collect();
    let mut table = Vec::with_capacity(live.len() * 256);
    for &rt in &live {
        for b in 0..=255u8 {
            table.push(dense_of[&db.outer.next(rt, b)]);
        }
    }
    let mut accepts: std::collections::BTreeMap<u32, std::collections::BTreeSet<hfx::PatternId>> =
        Default::default();
    for (rt, pats) in db.accepts.iter().enumerate() {
        if !pats.is_empty() {
            accepts.insert(dense_of[&(rt as u32)], pats.iter().copied().collect());
        }
    }
    (
        Dfa::from_parts(live.len() as u32, table, dense_of[&db.start], accepts),
        live,
    )
}

fn cmd_inspect(args: InspectArgs) -> Result<(), CliError> {
    let cfg = detector_config(&args.detector)?;
    let params;
    let dfa;
    let region_members: Option<Vec<u32>>;
    let decision;
    let leakiness;
    match (&args.rules, &args.db) {
        (Some(rules), None) => {
            let (_, compiled) = compile_rules(rules)?;
            dfa = compiled;
            let (plan, report) = detect_with_report(&dfa, &cfg);
            decision = report.decision.clone();
            leakiness = plan.as_ref().map(|p| p.leakiness);
            region_members = plan.map(|p| p.members);
            params = engine_params(&args.detector);
        }
        (None, Some(db_path)) => {
            let db = load_db(db_path)?;
            params = db.params;
            let (dense, live) = dfa_from_db(&db);
            region_members = db.region.as_ref().map(|r| {
                (0..r.k)
                    .map(|rt| live.iter().position(|&x| x == rt).unwrap() as u32)
                    .collect()
            });
            decision = match &db.region {
                Some(r) => format!("database carries a region of {} states", r.k),
                None => "database is scalar-only".to_string(),
            };
            leakiness = None;
            dfa = dense;
        }
        _ => {
            return Err(CliError::usage(
                "inspect needs exactly one of --rules or --db",
            ))
        }
    }

    let (_, report) = detect_with_report(
        &dfa,
        &DetectorConfig {
            mode: RegionMode::None,
            ..cfg.clone()
        },
    );
    let accept_states: Vec<u32> = dfa.accept_map().keys().copied().collect();

    if let Some(dot_path) = &args.dot {
        let dot = dfa_to_dot(&dfa, region_members.as_deref());
        write_bytes(dot_path, dot.as_bytes())?;
    }

    match args.format {
        FormatArg::Jsonl => {
            let value = serde_json::json!({
                "states": dfa.state_count(),
                "scc_count": report.scc_count,
                "sccs": report.sccs,
                "accept_states": accept_states,
                "region": region_members.as_ref().map(|members| serde_json::json!({
                    "size": members.len(),
                    "members": members,
                    "leakiness": leakiness,
                })),
                "decision": decision,
                "params": {
                    "sigma": params.sigma,
                    "lambda": params.lambda,
                    "leak_depth": params.depth,
                    "batch": params.batch,
                },
            });
            println!("{}", serde_json::to_string(&value).unwrap());
        }
        FormatArg::Text => {
            println!("states: {}", dfa.state_count());
            println!("scc count: {}", report.scc_count);
            for scc in &report.sccs {
                println!(
                    "  scc min_state={} size={} distance={} stickiness_sum={} non_accept_sum={}",
                    scc.min_state,
                    scc.size,
                    scc.distance,
                    scc.stickiness_sum,
                    scc.stickiness_sum_non_accept
                );
            }
            println!(
                "accept states: [{}]",
                accept_states
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            match &region_members {
                Some(members) => {
                    println!(
                        "region: {} states [{}]",
                        members.len(),
                        members
                            .iter()
                            .map(u32::to_string)
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                    if let Some(leak) = leakiness {
                        println!("leakiness: {leak:.6}");
                    }
                }
                None => println!("region: none"),
            }
            println!("decision: {decision}");
            println!(
                "params: sigma={} lambda={} leak_depth={} batch={}",
                params.sigma, params.lambda, params.depth, params.batch
            );
        }
    }
    Ok(())
}

fn events_equal(a: &(StreamState, Vec<MatchEvent>), b: &(StreamState, Vec<MatchEvent>)) -> bool {
    a.0 == b.0 && a.1 == b.1
}

fn run_pair(
    db: &HybridDb,
    input: &[u8],
    fast: Engine,
) -> (
    (StreamState, Vec<MatchEvent>),
    (StreamState, Vec<MatchEvent>),
) {
    let mut fast_events = Vec::new();
    let fast_state = scan_stream(db, StreamState::start_of(db), input, fast, &mut |ev| {
        fast_events.push(ev)
    })
    .unwrap();
    let mut ref_events = Vec::new();
    let ref_state = scan_stream(
        db,
        StreamState::start_of(db),
        input,
        Engine::Scalar,
        &mut |ev| ref_events.push(ev),
    )
    .unwrap();
    ((fast_state, fast_events), (ref_state, ref_events))
}

/// Shrinks a diverging input by repeatedly dropping chunks while the
/// divergence persists.
fn shrink_case(db: &HybridDb, fast: Engine, input: Vec<u8>) -> Vec<u8> {
    let diverges = |bytes: &[u8]| {
        let (f, r) = run_pair(db, bytes, fast);
        !events_equal(&f, &r)
    };
    let mut current = input;
    let mut chunk = (current.len() / 2).max(1);
    loop {
        let mut shrunk = false;
        let mut start = 0;
        while start < current.len() {
            let mut candidate = Vec::with_capacity(current.len());
            candidate.extend_from_slice(&current[..start]);
            candidate.extend_from_slice(&current[(start + chunk).min(current.len())..]);
            if !candidate.is_empty() && diverges(&candidate) {
                current = candidate;
                shrunk = true;
            } else {
                start += chunk;
            }
        }
        if chunk == 1 {
            if !shrunk {
                break;
            }
        } else {
            chunk /= 2;
        }
    }
    current
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn cmd_difftest(args: DifftestArgs) -> Result<(), CliError> {
    let cfg = detector_config(&args.detector)?;
    let (_, dfa) = compile_rules(&args.rules)?;
    let (db, decision, _, _) = build_db(&dfa, &cfg, engine_params(&args.detector));
    let fast = if args.no_gutter {
        Engine::HybridNoGutter
    } else {
        Engine::Hybrid
    };
    println!(
        "difftest: {} cases, seed {}, region {}",
        args.cases,
        args.detector.seed,
        match &db.region {
            Some(r) => format!("{} states", r.k),
            None => format!("none ({decision})"),
        }
    );
    let mut rng = Rng::seeded(args.detector.seed);
    let gen = workload::CaseGen::new(&db);
    for case in 0..args.cases {
        let input = gen.gen(&mut rng, 512);
        let (fast_out, ref_out) = run_pair(&db, &input, fast);
        if !events_equal(&fast_out, &ref_out) {
            let minimized = shrink_case(&db, fast, input);
            let (f, r) = run_pair(&db, &minimized, fast);
            let mut msg = format!(
                "case {case}: engines diverge; minimized to {} bytes\n  input hex: {}\n",
                minimized.len(),
                hex(&minimized)
            );
            let _ = write!(
                msg,
                "  scalar: final state {} events {:?}\n  fast:   final state {} events {:?}",
                r.0.state,
                r.1.iter()
                    .map(|e| (e.pattern.0, e.offset))
                    .collect::<Vec<_>>(),
                f.0.state,
                f.1.iter()
                    .map(|e| (e.pattern.0, e.offset))
                    .collect::<Vec<_>>()
            );
            return Err(CliError::divergence(msg));
        }
    }
    println!("difftest: {} cases ok", args.cases);
    Ok(())
}
