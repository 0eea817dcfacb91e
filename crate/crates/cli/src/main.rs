//! `shiftedprime`: sieves, invariant suites, solvers and increment runs.

mod config;
mod output;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use shifted_prime::arith::sieve_lambda_with_max;
use shifted_prime::characters::{character_group, primitive_characters_up_to, DirichletCharacter};
use shifted_prime::diffsets::{density_bound, greedy_set, max_set_exact_with_ceiling, DensityRow, ScanOrder, Solver};
use shifted_prime::increment::{compute_parameters, energy_profile, run_iteration};
use shifted_prime::zerodata::{detect_dichotomy, load_zeros, ZeroDatabase, ZeroFormat};

use config::{InitialSet, RunConfig};
use output::{csv_preamble, json_header, write_file, CliError, EXIT_BUDGET, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use suites::Suite;

#[derive(Parser)]
#[command(name = "shiftedprime", version, about = "Shifted-prime difference sets: sieves, exponential sums, solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Greedy,
}

#[derive(Subcommand)]
enum Command {
    /// Sieve the von Mangoldt function and write psi checkpoints.
    Sieve {
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run an invariant suite; exit 0 iff every check passes.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest subset of [N] with no difference of the form (p - 1)/d.
    Maxset {
        #[arg(long = "N")]
        n: u64,
        #[arg(long = "d", default_value_t = 1)]
        d: u64,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        /// CSV summary; the witness goes to the same path with a .json extension.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Iterate the density increment from a seeded greedy set.
    Increment {
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Trajectory as JSON lines.
        #[arg(long)]
        out: PathBuf,
        /// Energy profile of the starting set as CSV.
        #[arg(long)]
        energy: Option<PathBuf>,
    },
    /// Decide the exceptional/unexceptional regime from zero data.
    Dichotomy {
        #[arg(long = "D")]
        big_d: f64,
        #[arg(long = "T")]
        t: f64,
        /// Zero file or fixture directory; repeat to merge sources.
        #[arg(long)]
        zeros: Vec<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate Dirichlet characters.
    Characters {
        #[arg(long = "max-q")]
        max_q: u64,
        #[arg(long)]
        primitive_only: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    ZetaHeights,
    Tabular,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Sieve { limit, out, config } => sieve(limit, &out, &load(config)?),
        Command::Verify { suite, config, out } => verify(suite, &load(config)?, out.as_deref()),
        Command::Maxset { n, d, mode, out, config } => maxset(n, d, mode, out.as_deref(), &load(config)?),
        Command::Increment { n, steps, config, out, energy } => {
            increment(n, steps, &load(config)?, &out, energy.as_deref())
        }
        Command::Dichotomy { big_d, t, zeros, format, config, out } => {
            dichotomy(big_d, t, &zeros, format, &load(config)?, out.as_deref())
        }
        Command::Characters { max_q, primitive_only, out, config } => {
            characters(max_q, primitive_only, &out, &load(config)?)
        }
    }
}

fn load(path: Option<PathBuf>) -> Result<RunConfig, CliError> {
    Ok(RunConfig::load_or_default(path.as_deref())?)
}

/// `1, 2, 5` times powers of ten up to `limit`, then `limit` itself.
fn checkpoints(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 1u64;
    'outer: loop {
        for m in [1u64, 2, 5] {
            let x = p.saturating_mul(m);
            if x > limit {
                break 'outer;
            }
            out.push(x);
        }
        p = match p.checked_mul(10) {
            Some(p) => p,
            None => break,
        };
    }
    if out.last() != Some(&limit) {
        out.push(limit);
    }
    out
}

fn sieve(limit: u64, out: &Path, cfg: &RunConfig) -> Result<u8, CliError> {
    if limit == 0 {
        return Err(CliError::Usage("--limit must be at least 1".into()));
    }
    let lambda = sieve_lambda_with_max(limit, cfg.sieve_max)?;
    let mut csv = csv_preamble("sieve", cfg);
    csv.push_str("x,psi,psi_minus_x,prime_powers\n");
    let points = checkpoints(limit);
    let (mut psi, mut count, mut next) = (0.0f64, 0u64, 0usize);
    for n in 1..=limit {
        let w = lambda.get(n);
        if w > 0.0 {
            psi += w;
            count += 1;
        }
        if points[next] == n {
            csv.push_str(&format!("{n},{psi:.10},{:.10},{count}\n", psi - n as f64));
            next += 1;
        }
    }
    write_file(&cfg.output_path(out), &csv)?;
    println!("psi({limit}) = {psi:.10}");
    Ok(EXIT_OK)
}

fn verify(suite: Suite, cfg: &RunConfig, out: Option<&Path>) -> Result<u8, CliError> {
    let mut report = json_header("verify", cfg);
    report.insert("suite".into(), json!(suite.name()));
    let (code, status) = match suites::run(suite, cfg) {
        Ok(checks) => {
            let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            let verdict = if failed.is_empty() { (EXIT_OK, "pass") } else { (EXIT_FAILURE, "fail") };
            report.insert("failed".into(), json!(failed));
            report.insert("checks".into(), serde_json::to_value(&checks).expect("checks serialize"));
            verdict
        }
        Err(e) => {
            report.insert("error".into(), json!(e.to_string()));
            let e = CliError::Core(e);
            (e.code(), e.kind())
        }
    };
    report.insert("status".into(), json!(status));
    let text = Value::Object(report).to_string();
    println!("{text}");
    if let Some(p) = out {
        write_file(&cfg.output_path(p), &(text + "\n"))?;
    }
    Ok(code)
}

fn maxset(n: u64, d: u64, mode: Mode, out: Option<&Path>, cfg: &RunConfig) -> Result<u8, CliError> {
    if n == 0 || d == 0 {
        return Err(CliError::Usage("--N and --d must be positive".into()));
    }
    let (set, solver, optimal, nodes) = match mode {
        Mode::Exact => {
            let r = max_set_exact_with_ceiling(n, d, cfg.node_budget, cfg.exact_ceiling)?;
            (r.set, Solver::Exact, r.optimal, Some(r.nodes))
        }
        Mode::Greedy => (greedy_set(n, d, ScanOrder::Ascending), Solver::Greedy, false, None),
    };
    let row = DensityRow {
        n,
        d,
        solver,
        size: set.len(),
        density: set.density(),
        bound: density_bound(n, cfg.density_big_c, cfg.density_c),
        optimal,
    };
    println!("size {} (N = {n}, d = {d}, solver = {solver}, optimal = {optimal})", set.len());
    if let Some(out) = out {
        let out = cfg.output_path(out);
        let mut csv = csv_preamble("maxset", cfg);
        csv.push_str(DensityRow::CSV_HEADER);
        csv.push('\n');
        csv.push_str(&row.csv_row());
        csv.push('\n');
        write_file(&out, &csv)?;
        let mut witness = json_header("maxset", cfg);
        witness.insert("N".into(), json!(n));
        witness.insert("d".into(), json!(d));
        witness.insert("solver".into(), json!(solver));
        witness.insert("size".into(), json!(set.len()));
        witness.insert("optimal".into(), json!(optimal));
        witness.insert("nodes".into(), json!(nodes));
        witness.insert("elements".into(), json!(set.elements));
        write_file(&out.with_extension("json"), &(Value::Object(witness).to_string() + "\n"))?;
    }
    if mode == Mode::Exact && !optimal {
        eprintln!("node budget {} exhausted; the set is the best found", cfg.node_budget);
        return Ok(EXIT_BUDGET);
    }
    Ok(EXIT_OK)
}

fn increment(n: u64, steps: usize, cfg: &RunConfig, out: &Path, energy: Option<&Path>) -> Result<u8, CliError> {
    if n < 2 {
        return Err(CliError::Usage("--N must be at least 2".into()));
    }
    let order = match cfg.initial_set {
        InitialSet::GreedyAscending => ScanOrder::Ascending,
        InitialSet::GreedyRandom => ScanOrder::Random(cfg.seed),
    };
    let a0 = greedy_set(n, 1, order);
    let constants = cfg.increment();
    let lambda = sieve_lambda_with_max(4 * n + 10_000, cfg.sieve_max)?;
    let trajectory = run_iteration(&a0.elements, n, &constants, steps, &lambda, cfg.grid_factor)?;

    let hash = cfg.hash();
    let mut header = json_header("increment", cfg);
    header.insert("record".into(), json!("config"));
    header.insert("N".into(), json!(n));
    header.insert("steps".into(), json!(steps));
    header.insert("initial_size".into(), json!(a0.len()));
    let mut lines = vec![Value::Object(header).to_string()];
    for step in &trajectory.steps {
        let mut v = serde_json::to_value(step).expect("step records serialize");
        let obj = v.as_object_mut().expect("step record is an object");
        obj.insert("record".into(), json!("step"));
        obj.insert("config_hash".into(), json!(hash));
        lines.push(v.to_string());
    }
    lines.push(
        json!({
            "record": "halt",
            "config_hash": hash,
            "halt": trajectory.halt,
            "steps": trajectory.steps.len(),
        })
        .to_string(),
    );
    let mut text = lines.join("\n");
    text.push('\n');
    write_file(&cfg.output_path(out), &text)?;

    if let Some(path) = energy {
        let params = compute_parameters(n, 1, a0.density(), &constants)?;
        let profile = energy_profile(&a0.elements, &params, &lambda, cfg.grid_factor * n as usize)?;
        let mut csv = csv_preamble("increment", cfg);
        csv.push_str(&profile.csv());
        write_file(&cfg.output_path(path), &csv)?;
    }
    println!(
        "{} step(s), halt = {}",
        trajectory.steps.len(),
        serde_json::to_value(trajectory.halt).expect("halt serializes").as_str().unwrap_or("")
    );
    Ok(EXIT_OK)
}

/// Tabular when data lines have three or more fields.
fn sniff_format(path: &Path) -> Result<ZeroFormat, CliError> {
    let text = std::fs::read_to_string(path).map_err(shifted_prime::Error::from)?;
    let tabular = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.split(|c: char| c.is_whitespace() || c == ',').filter(|w| !w.is_empty()).count() >= 3);
    Ok(if tabular { ZeroFormat::Tabular } else { ZeroFormat::ZetaHeights })
}

fn dichotomy(
    big_d: f64,
    t: f64,
    zeros: &[PathBuf],
    format: Option<FormatArg>,
    cfg: &RunConfig,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let mut db: Option<ZeroDatabase> = None;
    let sources: Vec<PathBuf> = if zeros.is_empty() { vec![cfg.zeros_dir()] } else { zeros.to_vec() };
    for path in &sources {
        let part = if path.is_dir() {
            ZeroDatabase::load_fixtures(path)?
        } else {
            let fmt = match format {
                Some(FormatArg::ZetaHeights) => ZeroFormat::ZetaHeights,
                Some(FormatArg::Tabular) => ZeroFormat::Tabular,
                None => sniff_format(path)?,
            };
            load_zeros(path, fmt)?
        };
        match db.as_mut() {
            Some(db) => db.merge(part),
            None => db = Some(part),
        }
    }
    let db = db.expect("at least one zero source");
    let verdict = detect_dichotomy(&db, big_d, t, &cfg.dichotomy())?;
    let mut report = json_header("dichotomy", cfg);
    report.insert("D".into(), json!(big_d));
    report.insert("T".into(), json!(t));
    report.insert("regime".into(), json!(verdict.kind));
    report.insert("threshold".into(), json!(verdict.threshold));
    report.insert("witness".into(), json!(verdict.witness));
    report.insert(
        "sources".into(),
        json!(sources.iter().map(|p| p.display().to_string()).collect::<Vec<_>>()),
    );
    let text = Value::Object(report).to_string();
    println!("{text}");
    if let Some(p) = out {
        write_file(&cfg.output_path(p), &(text + "\n"))?;
    }
    Ok(EXIT_OK)
}

fn phases(chi: &DirichletCharacter) -> String {
    (0..chi.modulus())
        .map(|n| match chi.phase(n) {
            Some((num, den)) => format!("{num}/{den}"),
            None => "*".to_string(),
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn characters(max_q: u64, primitive_only: bool, out: &Path, cfg: &RunConfig) -> Result<u8, CliError> {
    if max_q == 0 {
        return Err(CliError::Usage("--max-q must be at least 1".into()));
    }
    let chars: Vec<DirichletCharacter> = if primitive_only {
        primitive_characters_up_to(max_q)?
    } else {
        let mut all = Vec::new();
        for q in 1..=max_q {
            all.extend(character_group(q)?.characters().iter().cloned());
        }
        all
    };
    let mut csv = csv_preamble("characters", cfg);
    csv.push_str("q,index,conductor,primitive,real,parity,phases\n");
    for chi in &chars {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            chi.modulus(),
            chi.index(),
            chi.conductor(),
            chi.is_primitive(),
            chi.is_real(),
            chi.parity(),
            phases(chi)
        ));
    }
    write_file(&cfg.output_path(out), &csv)?;
    println!("{} character(s)", chars.len());
    Ok(EXIT_OK)
}
