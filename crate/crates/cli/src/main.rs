//! `netlock` command-line front end.
//!
//! Every subcommand prints a JSON document carrying `schema_version`
//! (or a text table with `--table`). Exit codes: 0 success, 1 parse or
//! usage error, 2 nothing lockable, 3 I/O, 4 port mismatch, 5 size limits.

mod error;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use error::CliError;
use netlock::aig::to_aig;
use netlock::attack::{
    brute_force_attack, dip_attack, hill_climb, sweep_attack, AttackResult, HillOptions, SweepOptions,
};
use netlock::key::KeyBits;
use netlock::lock::{complexity_stats, lock_netlist, xor_lock, ComplexityStats, LockOptions};
use netlock::metrics::{metrics_report, sample_wrong_keys, t3_metric, MetricsOptions, DEFAULT_WRONG_KEYS};
use netlock::netlist::{emit_bench, parse_bench, random_netlist, Netlist, RandomCircuit};
use netlock::opt::{overhead, DEFAULT_POWER_PATTERNS};
use netlock::partition::{build_hypergraph, compute_partition_size, cut_size, partition, DEFAULT_BALANCE_TOL};
use netlock::sim::{default_mode, equivalence_check, PatternMode, DEFAULT_SAMPLED_PATTERNS};
use netlock::SCHEMA_VERSION;

#[derive(Parser)]
#[command(name = "netlock", version, about = "Partition-based logic locking toolkit for BENCH netlists")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lock a netlist, writing the locked BENCH, key and manifest.
    Lock(LockArgs),
    /// Scatter, coverage and formality indexes of a locked netlist.
    Metrics(MetricsArgs),
    /// Run a key-recovery attack against a locked netlist.
    Attack(AttackArgs),
    /// Truth-table space sizes per (n, k, d) or per locked partition.
    Stats(StatsArgs),
    /// Compare two netlists by simulation.
    Equiv(EquivArgs),
    /// Partition a netlist's gate hypergraph.
    Partition(PartitionArgs),
    /// Area, delay and power estimates of a locked netlist against its original.
    Overhead(OverheadArgs),
    /// Rewrite a netlist into 2-input ANDs and inverters.
    Aig(AigArgs),
    /// Conventional random XOR/XNOR key-gate locking.
    XorLock(XorLockArgs),
    /// Generate a random combinational netlist.
    Gen(GenArgs),
    /// SWEEP over a generated corpus, XOR-locked against partition-locked.
    SweepCorpus(SweepCorpusArgs),
}

#[derive(Args)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long = "report", value_name = "FILE")]
    report: Option<PathBuf>,
    /// Print a text table instead of JSON.
    #[arg(long)]
    table: bool,
}

#[derive(Args)]
struct LockArgs {
    input: PathBuf,
    #[arg(long)]
    key_size: usize,
    /// Gates per partition; defaults to floor(gates / key size).
    #[arg(long)]
    partition_size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Convert to an and-inverter graph before partitioning.
    #[arg(long)]
    aig: bool,
    #[arg(long, default_value_t = netlock::lock::DEFAULT_MIN_DEPTH)]
    min_depth: u32,
    #[arg(long, default_value_t = netlock::lock::DEFAULT_MIN_COVERAGE)]
    min_coverage: f64,
    #[arg(long, default_value_t = netlock::lock::DEFAULT_DUMMY_MAX)]
    dummy_max: usize,
    #[arg(long, default_value_t = DEFAULT_BALANCE_TOL)]
    balance_tol: f64,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    key_out: PathBuf,
    #[arg(long)]
    manifest: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    golden: Option<PathBuf>,
    locked: Option<PathBuf>,
    /// Measure F under this key.
    #[arg(long, value_name = "FILE")]
    key: Option<PathBuf>,
    /// Measure F under N random keys (excluding `--key` when given).
    #[arg(long, value_name = "N")]
    random_wrong_keys: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SAMPLED_PATTERNS)]
    patterns: usize,
    /// `auto` or a level count.
    #[arg(long, default_value = "auto")]
    max_depth: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also report coverage with overlapping cones counted once per entry
    /// node (`c_index_summed`, may exceed 100).
    #[arg(long)]
    summed_coverage: bool,
    /// Only combine three given indexes: F T C.
    #[arg(long, num_args = 3, value_names = ["F", "T", "C"], allow_negative_numbers = true)]
    compose: Option<Vec<f64>>,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum AttackKind {
    Dip,
    Hill,
    Sweep,
    Brute,
}

#[derive(Args)]
struct AttackArgs {
    locked: PathBuf,
    /// Unlocked reference; not needed for sweep.
    oracle: Option<PathBuf>,
    #[arg(long)]
    attack: AttackKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Scores the per-bit guesses.
    #[arg(long, value_name = "FILE")]
    true_key: Option<PathBuf>,
    /// DIP query budget.
    #[arg(long, default_value_t = u64::MAX)]
    max_queries: u64,
    #[arg(long, default_value_t = HillOptions::default().iterations)]
    iterations: u64,
    #[arg(long, default_value_t = HillOptions::default().restarts)]
    restarts: u32,
    /// Patterns per fitness or power estimate.
    #[arg(long, default_value_t = 256)]
    patterns: usize,
    /// SWEEP minimum deciding delta.
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    /// Append a tab-separated result row to this file.
    #[arg(long, value_name = "FILE")]
    append: Option<PathBuf>,
    /// Include wall time in the result.
    #[arg(long)]
    wall_time: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct StatsArgs {
    /// Comma-separated; rows are the cross product with --k and --d.
    #[arg(long, value_delimiter = ',')]
    n: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    k: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    d: Vec<u32>,
    #[arg(long, value_name = "FILE", conflicts_with_all = ["n", "k"])]
    from_manifest: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct EquivArgs {
    golden: PathBuf,
    dut: PathBuf,
    #[arg(long, value_name = "FILE")]
    key: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SAMPLED_PATTERNS)]
    patterns: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct PartitionArgs {
    input: PathBuf,
    #[arg(long, conflicts_with = "key_size")]
    size: Option<usize>,
    /// Derive the size as floor(gates / key size).
    #[arg(long)]
    key_size: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BALANCE_TOL)]
    balance_tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write one partition index per gate, in gate order.
    #[arg(long, value_name = "FILE")]
    assignment: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct OverheadArgs {
    original: PathBuf,
    locked: PathBuf,
    #[arg(long, value_name = "FILE")]
    key: PathBuf,
    #[arg(long, default_value_t = DEFAULT_POWER_PATTERNS)]
    patterns: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct AigArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct XorLockArgs {
    input: PathBuf,
    #[arg(long)]
    key_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    key_out: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    inputs: usize,
    #[arg(long)]
    gates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SweepCorpusArgs {
    #[arg(long, default_value_t = 20)]
    circuits: usize,
    #[arg(long, default_value_t = 12)]
    inputs: usize,
    #[arg(long, default_value_t = 150)]
    gates: usize,
    #[arg(long, default_value_t = 16)]
    key_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: Output,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Lock(a) => cmd_lock(a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Attack(a) => cmd_attack(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Equiv(a) => cmd_equiv(a),
        Command::Partition(a) => cmd_partition(a),
        Command::Overhead(a) => cmd_overhead(a),
        Command::Aig(a) => cmd_aig(a),
        Command::XorLock(a) => cmd_xor_lock(a),
        Command::Gen(a) => cmd_gen(a),
        Command::SweepCorpus(a) => cmd_sweep_corpus(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("netlock: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn read_netlist(path: &Path) -> Result<Netlist, CliError> {
    let text = read_text(path)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("circuit");
    parse_bench(&text)
        .map(|n| n.with_name(stem))
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn read_key(path: &Path, width: usize) -> Result<KeyBits, CliError> {
    Ok(KeyBits::from_hex(&read_text(path)?, Some(width))?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// JSON, or `table()` with `--table`, to stdout or `--report`.
fn emit<T: Serialize>(out: &Output, value: &T, table: impl FnOnce() -> String) -> Result<(), CliError> {
    let text = if out.table { table() } else { to_json(value) };
    match &out.report {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn rows(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in pairs {
        let _ = writeln!(s, "{k:<width$}  {v}");
    }
    s
}

fn cmd_lock(a: LockArgs) -> Result<(), CliError> {
    if a.key_size == 0 {
        return Err(CliError::usage("--key-size must be at least 1"));
    }
    let original = read_netlist(&a.input)?;
    let opts = LockOptions {
        key_size: a.key_size,
        partition_size: a.partition_size,
        seed: a.seed,
        aig: a.aig,
        min_depth: a.min_depth,
        min_coverage: a.min_coverage,
        dummy_max: a.dummy_max,
        balance_tol: a.balance_tol,
        kinds: None,
    };
    let result = lock_netlist(&original, &opts)?;
    write_text(&a.output, &emit_bench(&result.netlist))?;
    write_text(&a.key_out, &format!("{}\n", result.key.to_hex()))?;
    write_text(&a.manifest, &to_json(&result.manifest))?;
    let ov = overhead(&original, &result.netlist, result.key.bits(), DEFAULT_POWER_PATTERNS, a.seed)?;
    let m = &result.manifest;
    println!(
        "locked {} of {} partitions ({} skipped), {} key bits, gates {} -> {}, area {:+.1}% delay {:+.1}% power {:+.1}%",
        m.locked_partitions,
        m.partition_count,
        m.skipped_partitions,
        m.key_size,
        original.gate_count(),
        result.netlist.gate_count(),
        ov.area_pct,
        ov.delay_pct,
        ov.power_pct
    );
    Ok(())
}

#[derive(Serialize)]
struct Composed {
    schema_version: u32,
    f_index: f64,
    t_index: f64,
    c_index: f64,
    t3_metric: f64,
}

fn cmd_metrics(a: MetricsArgs) -> Result<(), CliError> {
    if let Some(v) = &a.compose {
        let (f, t, c) = (v[0], v[1], v[2]);
        let r = Composed { schema_version: SCHEMA_VERSION, f_index: f, t_index: t, c_index: c, t3_metric: t3_metric(t, c, f)? };
        return emit(&a.out, &r, || format!("{:.2}\n", r.t3_metric));
    }
    let (Some(gp), Some(lp)) = (&a.golden, &a.locked) else {
        return Err(CliError::usage("metrics needs GOLDEN and LOCKED netlists, or --compose F T C"));
    };
    let golden = read_netlist(gp)?;
    let locked = read_netlist(lp)?;
    let k = locked.key_inputs().len();
    let given = a.key.as_deref().map(|p| read_key(p, k)).transpose()?;
    let keys = match (a.random_wrong_keys, given) {
        (Some(count), Some(correct)) => sample_wrong_keys(&correct, count, a.seed),
        (Some(count), None) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            (0..count).map(|_| KeyBits::random(k, &mut rng)).collect()
        }
        (None, Some(key)) => vec![key],
        (None, None) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            (0..DEFAULT_WRONG_KEYS).map(|_| KeyBits::random(k, &mut rng)).collect()
        }
    };
    let max_depth = match a.max_depth.as_str() {
        "auto" => None,
        s => Some(s.parse().map_err(|_| CliError::usage(format!("--max-depth: `{s}` is not `auto` or a number")))?),
    };
    let opts = MetricsOptions { max_depth, patterns: a.patterns, seed: a.seed };
    let r = metrics_report(&golden, &locked, &keys, &opts)?;
    let summed = 100.0 * r.summed_cone_gates as f64 / r.g_total.max(1) as f64;
    let mut doc = serde_json::to_value(&r).expect("report serializes");
    if a.summed_coverage {
        doc["c_index_summed"] = summed.into();
    }
    emit(&a.out, &doc, || {
        let mut t = vec![
            ("T_index", format!("{:.2}", r.t_index)),
            ("C_index", format!("{:.2}", r.c_index)),
            ("F_index", format!("{:.2}", r.f_index)),
            ("T3_metric", format!("{:.2}", r.t3_metric)),
            ("max_depth", r.max_depth.to_string()),
            ("patterns", r.p_total.to_string()),
            ("key_entry_nodes", r.key_entry_nodes.len().to_string()),
        ];
        if a.summed_coverage {
            t.push(("C_index_summed", format!("{summed:.2}")));
        }
        rows(&t)
    })
}

fn cmd_attack(a: AttackArgs) -> Result<(), CliError> {
    let locked = read_netlist(&a.locked)?;
    let truth = a.true_key.as_deref().map(|p| read_key(p, locked.key_inputs().len())).transpose()?;
    let oracle = || -> Result<Netlist, CliError> {
        let p = a.oracle.as_deref().ok_or_else(|| CliError::usage("this attack needs an ORACLE netlist"))?;
        read_netlist(p)
    };
    let start = Instant::now();
    let mut result: AttackResult = match a.attack {
        AttackKind::Brute => brute_force_attack(&locked, &oracle()?)?,
        AttackKind::Dip => dip_attack(&locked, &oracle()?, a.max_queries)?.result,
        AttackKind::Hill => {
            let opts = HillOptions { patterns: a.patterns, iterations: a.iterations, restarts: a.restarts, seed: a.seed };
            hill_climb(&locked, &oracle()?, &opts)?.result
        }
        AttackKind::Sweep => {
            let opts = SweepOptions { threshold: a.threshold, patterns: a.patterns, seed: a.seed };
            sweep_attack(&locked, truth.as_ref(), &opts)?.result
        }
    };
    if let Some(t) = &truth {
        result.score(t);
    }
    if a.wall_time {
        result.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    if let Some(path) = &a.append {
        append_row(path, &a.locked, &result)?;
    }
    let guesses: String = result
        .per_bit_guess
        .iter()
        .map(|g| serde_json::to_value(g).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default())
        .collect();
    emit(&a.out, &result, || {
        let pct = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.1}"));
        rows(&[
            ("attack", result.attack.to_string()),
            ("recovered_key", result.recovered_key.clone().unwrap_or_else(|| "-".into())),
            ("guesses", guesses.clone()),
            ("accuracy", pct(result.accuracy)),
            ("accuracy_with_unknown", pct(result.accuracy_with_unknown)),
            ("iterations", result.iterations.to_string()),
            ("queries", result.queries.to_string()),
            ("timed_out", result.timed_out.to_string()),
        ])
    })
}

/// Tab-separated corpus table, header written when the file is new.
fn append_row(path: &Path, circuit: &Path, r: &AttackResult) -> Result<(), CliError> {
    use std::io::Write;
    let fresh = !path.exists();
    let mut f = fs::OpenOptions::new().create(true).append(true).open(path).map_err(|e| CliError::io(path, e))?;
    let mut line = String::new();
    if fresh {
        line.push_str("circuit\tattack\taccuracy\taccuracy_with_unknown\tqueries\ttimed_out\n");
    }
    let pct = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.4}"));
    let _ = writeln!(
        line,
        "{}\t{}\t{}\t{}\t{}\t{}",
        circuit.display(),
        r.attack,
        pct(r.accuracy),
        pct(r.accuracy_with_unknown),
        r.queries,
        r.timed_out
    );
    f.write_all(line.as_bytes()).map_err(|e| CliError::io(path, e))
}

#[derive(Serialize)]
struct StatsRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    partition: Option<u64>,
    #[serde(flatten)]
    stats: ComplexityStats,
    f_display: String,
}

#[derive(Serialize)]
struct StatsReport {
    schema_version: u32,
    rows: Vec<StatsRow>,
}

fn cmd_stats(a: StatsArgs) -> Result<(), CliError> {
    let mut out = Vec::new();
    if let Some(path) = &a.from_manifest {
        let v: Value = serde_json::from_str(&read_text(path)?)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        let parts = v["partitions"].as_array().ok_or_else(|| CliError::usage("manifest has no `partitions` array"))?;
        for p in parts.iter().filter(|p| p["locked"].as_bool() == Some(true)) {
            let field = |name: &str| -> Result<u32, CliError> {
                p[name].as_u64().map(|x| x as u32).ok_or_else(|| CliError::usage(format!("partition missing `{name}`")))
            };
            let d = p["dummies"].as_array().map_or(0, |d| d.len() as u32);
            let stats = complexity_stats(field("n")?, field("key_width")?, d);
            out.push(StatsRow { partition: p["index"].as_u64(), f_display: stats.f_display(), stats });
        }
    } else {
        if a.n.is_empty() || a.k.is_empty() {
            return Err(CliError::usage("stats needs --n and --k, or --from-manifest"));
        }
        for &k in &a.k {
            for &d in &a.d {
                for &n in &a.n {
                    let stats = complexity_stats(n, k, d);
                    out.push(StatsRow { partition: None, f_display: stats.f_display(), stats });
                }
            }
        }
    }
    let report = StatsReport { schema_version: SCHEMA_VERSION, rows: out };
    emit(&a.out, &report, || {
        let mut s = String::from("partition  n   k   d   E                      F_count\n");
        for r in &report.rows {
            let part = r.partition.map_or("-".to_string(), |p| p.to_string());
            let _ = writeln!(
                s,
                "{:<10} {:<3} {:<3} {:<3} {:<22} {}",
                part, r.stats.n, r.stats.k, r.stats.d, r.stats.e, r.f_display
            );
        }
        s
    })
}

fn cmd_equiv(a: EquivArgs) -> Result<(), CliError> {
    let golden = read_netlist(&a.golden)?;
    let dut = read_netlist(&a.dut)?;
    let k = dut.key_inputs().len();
    let key = match &a.key {
        Some(p) => read_key(p, k)?,
        None if k == 0 => KeyBits::zeros(0),
        None => return Err(CliError::usage("DUT has key inputs; pass --key")),
    };
    let mode = match default_mode(golden.primary_inputs().len(), netlock::sim::EXHAUSTIVE_INPUT_LIMIT, a.seed) {
        PatternMode::Sampled { seed, .. } => PatternMode::Sampled { patterns: a.patterns, seed },
        m => m,
    };
    let r = equivalence_check(&golden, &dut, key.bits(), mode)?;
    #[derive(Serialize)]
    struct Report<'a> {
        schema_version: u32,
        equivalent: bool,
        #[serde(flatten)]
        report: &'a netlock::sim::EquivReport,
    }
    let doc = Report { schema_version: SCHEMA_VERSION, equivalent: r.equivalent(), report: &r };
    emit(&a.out, &doc, || {
        rows(&[
            ("equivalent", r.equivalent().to_string()),
            ("patterns", r.patterns_applied.to_string()),
            ("mismatched", r.mismatched_patterns.to_string()),
            ("exhaustive", r.exhaustive.to_string()),
        ])
    })
}

fn cmd_partition(a: PartitionArgs) -> Result<(), CliError> {
    let n = read_netlist(&a.input)?;
    let size = match (a.size, a.key_size) {
        (Some(s), _) => s,
        (None, Some(k)) => compute_partition_size(n.gate_count(), k)?.max(1),
        (None, None) => return Err(CliError::usage("partition needs --size or --key-size")),
    };
    let h = build_hypergraph(&n);
    let ps = partition(&h, size, a.balance_tol, a.seed)?;
    let cut = cut_size(&h, &ps)?;
    if let Some(p) = &a.assignment {
        write_text(p, &ps.to_partition_file())?;
    }
    #[derive(Serialize)]
    struct Report {
        schema_version: u32,
        gates: usize,
        partitions: usize,
        target_size: usize,
        max_size: usize,
        balance_tol: f64,
        sizes: Vec<usize>,
        cut_size: u64,
        bisection_cut_initial: u64,
        warning: bool,
    }
    let r = Report {
        schema_version: SCHEMA_VERSION,
        gates: n.gate_count(),
        partitions: ps.p,
        target_size: ps.target_size,
        max_size: ps.max_size(),
        balance_tol: ps.balance_tol,
        sizes: ps.sizes(),
        cut_size: cut,
        bisection_cut_initial: ps.bisection_cut_initial,
        warning: ps.warning,
    };
    emit(&a.out, &r, || {
        rows(&[
            ("gates", r.gates.to_string()),
            ("partitions", r.partitions.to_string()),
            ("target_size", r.target_size.to_string()),
            ("cut_size", r.cut_size.to_string()),
        ])
    })
}

fn cmd_overhead(a: OverheadArgs) -> Result<(), CliError> {
    let original = read_netlist(&a.original)?;
    let locked = read_netlist(&a.locked)?;
    let key = read_key(&a.key, locked.key_inputs().len())?;
    let r = overhead(&original, &locked, key.bits(), a.patterns, a.seed)?;
    emit(&a.out, &r, || {
        rows(&[
            ("area", format!("{} -> {} ({:+.2}%)", r.original.area, r.locked.area, r.area_pct)),
            ("delay", format!("{} -> {} ({:+.2}%)", r.original.delay, r.locked.delay, r.delay_pct)),
            ("power", format!("{:.3} -> {:.3} ({:+.2}%)", r.original.power, r.locked.power, r.power_pct)),
        ])
    })
}

fn cmd_aig(a: AigArgs) -> Result<(), CliError> {
    let n = read_netlist(&a.input)?;
    write_text(&a.output, &emit_bench(&to_aig(&n)))
}

fn cmd_xor_lock(a: XorLockArgs) -> Result<(), CliError> {
    let n = read_netlist(&a.input)?;
    let x = xor_lock(&n, a.key_size, a.seed)?;
    write_text(&a.output, &emit_bench(&x.netlist))?;
    write_text(&a.key_out, &format!("{}\n", x.key.to_hex()))
}

fn cmd_gen(a: GenArgs) -> Result<(), CliError> {
    if a.inputs == 0 || a.gates == 0 {
        return Err(CliError::usage("--inputs and --gates must be positive"));
    }
    let n = random_netlist(RandomCircuit::new(a.inputs, a.gates), a.seed);
    write_text(&a.output, &emit_bench(&n))
}

#[derive(Serialize)]
struct CorpusRow {
    circuit: usize,
    technique: &'static str,
    accuracy: f64,
    accuracy_with_unknown: f64,
}

fn cmd_sweep_corpus(a: SweepCorpusArgs) -> Result<(), CliError> {
    let mut corpus = Vec::new();
    let opts = SweepOptions { seed: a.seed, ..SweepOptions::default() };
    for c in 0..a.circuits {
        let seed = a.seed.wrapping_add(c as u64);
        let n = random_netlist(RandomCircuit::new(a.inputs, a.gates), seed);
        let x = xor_lock(&n, a.key_size, seed)?;
        let s = lock_netlist(&n, &LockOptions::new(a.key_size).seed(seed))?;
        for (technique, locked, key) in [("xor", &x.netlist, &x.key), ("partition", &s.netlist, &s.key)] {
            let r = sweep_attack(locked, Some(key), &opts)?.result;
            corpus.push(CorpusRow {
                circuit: c,
                technique,
                accuracy: r.accuracy.unwrap_or(0.0),
                accuracy_with_unknown: r.accuracy_with_unknown.unwrap_or(0.0),
            });
        }
    }
    let mean = |t: &str| {
        let v: Vec<f64> = corpus.iter().filter(|r| r.technique == t).map(|r| r.accuracy).collect();
        if v.is_empty() {
            0.0
        } else {
            v.iter().sum::<f64>() / v.len() as f64
        }
    };
    #[derive(Serialize)]
    struct Report {
        schema_version: u32,
        circuits: usize,
        mean_accuracy_xor: f64,
        mean_accuracy_partition: f64,
        rows: Vec<CorpusRow>,
    }
    let r = Report {
        schema_version: SCHEMA_VERSION,
        circuits: a.circuits,
        mean_accuracy_xor: mean("xor"),
        mean_accuracy_partition: mean("partition"),
        rows: corpus,
    };
    emit(&a.out, &r, || {
        rows(&[
            ("technique", "mean SWEEP accuracy (%)".to_string()),
            ("xor", format!("{:.1}", r.mean_accuracy_xor)),
            ("partition", format!("{:.1}", r.mean_accuracy_partition)),
        ])
    })
}
