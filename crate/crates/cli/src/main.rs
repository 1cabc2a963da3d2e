//! `lincent`: simulate protocol instances, attack them, self-check, benchmark.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lincent::bench::{self, Suite};
use lincent::io::instance_from_str;
use lincent::protocols::Protocol;
use lincent::runner::{self, AttackOptions, GroupArg, RunError, SimulateConfig};
use serde_json::{json, Value};

const EXIT_INPUT: u8 = 2;
const EXIT_ATTACK: u8 = 3;

#[derive(Parser)]
#[command(name = "lincent", version, about = "Linear centralizer attacks on group-based key exchange")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an honest protocol instance.
    Simulate {
        #[arg(long)]
        protocol: String,
        /// `braid:N` or `matrix:n`.
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Prime modulus for matrix groups.
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include secrets and the shared key, so that `attack` can verify.
        #[arg(long)]
        with_secrets: bool,
    },
    /// Recover the shared key of an instance.
    Attack {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        max_draws: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the built-in invariant suites.
    Selfcheck,
    /// Time a suite at several sizes and write CSV.
    Bench {
        /// `matrix-attacks`, `braid-core` or `lk`.
        #[arg(long)]
        suite: String,
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn input(kind: &'static str, message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, kind, message: message.into() }
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        let code = match e {
            RunError::AttackFailed(_) => EXIT_ATTACK,
            _ => EXIT_INPUT,
        };
        Failure { code, kind: e.kind(), message: e.to_string() }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::input("io_error", format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn echo_config(cfg: Value) {
    eprintln!("{}", json!({ "config": cfg }));
}

fn simulate(
    protocol: &str,
    group: &str,
    k: usize,
    m: usize,
    ell: usize,
    seed: u64,
    prime: Option<u64>,
    out: Option<&Path>,
    with_secrets: bool,
) -> Result<(), Failure> {
    let protocol = Protocol::from_name(protocol)
        .ok_or_else(|| Failure::input("invalid_configuration", format!("unknown protocol {protocol:?}")))?;
    let group: GroupArg = group.parse().map_err(|e: String| Failure::input("invalid_configuration", e))?;
    let mut cfg = SimulateConfig { protocol, group, k, m, ell, seed, ..SimulateConfig::default() };
    if let Some(p) = prime {
        cfg.prime = p;
    }
    echo_config(json!({
        "verb": "simulate", "protocol": protocol.name(), "group": group.to_string(),
        "k": k, "m": m, "ell": ell, "seed": seed, "with_secrets": with_secrets,
        "prime": matches!(group, GroupArg::Matrix(_)).then_some(cfg.prime),
    }));
    let inst = runner::simulate(&cfg)?;
    let text = serde_json::to_string_pretty(&inst.to_json(with_secrets)).expect("serializable");
    emit(out, &text)
}

fn attack(instance: &Path, out: Option<&Path>, max_draws: Option<usize>, seed: u64) -> Result<(), Failure> {
    let mut opts = AttackOptions { seed, ..AttackOptions::default() };
    if let Some(d) = max_draws {
        opts.max_draws = d;
    }
    echo_config(json!({
        "verb": "attack", "instance": instance.display().to_string(),
        "max_draws": opts.max_draws, "seed": seed,
    }));
    let text = fs::read_to_string(instance)
        .map_err(|e| Failure::input("io_error", format!("{}: {e}", instance.display())))?;
    let inst = instance_from_str(&text).map_err(RunError::from)?;
    let report = runner::attack(&inst, &opts)?;
    emit(out, &serde_json::to_string_pretty(&report.to_json()).expect("serializable"))?;
    if report.verified == Some(false) {
        return Err(Failure {
            code: EXIT_ATTACK,
            kind: "verification_failed",
            message: "recovered key differs from the instance's shared key".into(),
        });
    }
    Ok(())
}

fn selfcheck() -> Result<(), Failure> {
    echo_config(json!({ "verb": "selfcheck" }));
    let results = lincent::selfcheck::run_all();
    for r in &results {
        println!("{}", json!({ "name": r.name, "pass": r.pass, "detail": r.detail }));
    }
    let failed: Vec<_> = results.iter().filter(|r| !r.pass).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure { code: EXIT_ATTACK, kind: "selfcheck_failed", message: failed.join(", ") })
    }
}

fn run_bench(suite: &str, sizes: &[usize], out: Option<&Path>, seed: u64) -> Result<(), Failure> {
    let s = Suite::from_name(suite)
        .ok_or_else(|| Failure::input("invalid_configuration", format!("unknown suite {suite:?}")))?;
    echo_config(json!({ "verb": "bench", "suite": s.name(), "sizes": sizes, "seed": seed }));
    let rows = bench::run(s, sizes, seed).map_err(|e| Failure::input("invalid_configuration", e))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r).expect("in-memory CSV");
    }
    let bytes = w.into_inner().expect("in-memory CSV");
    emit(out, String::from_utf8(bytes).expect("utf-8").trim_end())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", json!({ "error": "invalid_arguments", "message": msg.trim() }));
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let res = match cli.cmd {
        Cmd::Simulate { protocol, group, k, m, ell, seed, prime, out, with_secrets } => {
            simulate(&protocol, &group, k, m, ell, seed, prime, out.as_deref(), with_secrets)
        }
        Cmd::Attack { instance, out, max_draws, seed } => attack(&instance, out.as_deref(), max_draws, seed),
        Cmd::Selfcheck => selfcheck(),
        Cmd::Bench { suite, sizes, out, seed } => run_bench(&suite, &sizes, out.as_deref(), seed),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", json!({ "error": f.kind, "message": f.message }));
            ExitCode::from(f.code)
        }
    }
}
