//! Command-line front end (`robust-pir params|encode|simulate|audit|rates`).
//!
//! Exit codes: 0 success, 1 protocol failure (decoding or audit), 2 usage
//! error, 3 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::adversary::{
    audit_scheme, privacy_audit, run_session, sweep_adversary_placements, AdversaryConfig,
    AuditMode, ByzantineStrategy,
};
use crate::analysis::{emit_csv, emit_gnuplot, rate_table};
use crate::error::Error;
use crate::field::{Fp, PrimeField};
use crate::grs::GenMatrix;
use crate::pir::{build_e, compute_params, stream_rng, Scheme, SchemeParams};
use crate::storage::{distribute, shares_to_text, Database};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROTOCOL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Environment variable overriding the default seed.
pub const SEED_ENV: &str = "ROBUST_PIR_SEED";

/// RNG stream used for generating random databases.
const STREAM_DATABASE: u64 = 1 << 32;

#[derive(Parser, Debug)]
#[command(name = "robust-pir", version, about = "Robust PIR over GRS-coded storage")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derive ν, n', d⋆ and the rate for a system.
    Params {
        #[command(flatten)]
        sys: SystemArgs,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Encode a database and print every server's share.
    Encode {
        #[command(flatten)]
        sys: SystemArgs,
        #[command(flatten)]
        data: DataArgs,
        /// Write shares here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the (possibly generated) database here.
        #[arg(long)]
        db_out: Option<PathBuf>,
    },
    /// Run a retrieval session (or a placement sweep) against simulated servers.
    Simulate(SimulateArgs),
    /// Check t-privacy of the query construction.
    Audit(AuditArgs),
    /// Rate comparison table (CSV by default).
    Rates(RatesArgs),
}

#[derive(Args, Debug, Clone)]
struct SystemArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = 0)]
    b: usize,
    #[arg(long, default_value_t = 0)]
    r: usize,
    /// Field modulus; defaults to 17 for n <= 16, else the smallest prime above n.
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Args, Debug, Clone)]
struct DataArgs {
    /// Database file (header `p m nu k`, then rows).
    #[arg(long, conflicts_with = "random_db")]
    db: Option<PathBuf>,
    /// Generate a random database with this many files.
    #[arg(long)]
    random_db: Option<usize>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    sys: SystemArgs,
    #[command(flatten)]
    data: DataArgs,
    /// Requested file, 1-indexed.
    #[arg(long, default_value_t = 1)]
    index: usize,
    #[arg(long, value_delimiter = ',')]
    byzantine: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    silent: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    collude: Vec<usize>,
    /// uniform | fixed:V | offset:D | flip:A,B
    #[arg(long)]
    strategy: Option<String>,
    /// TOML adversary config; replaces --byzantine/--silent/--collude/--strategy.
    #[arg(long)]
    adversary: Option<PathBuf>,
    #[arg(long)]
    symmetric: bool,
    /// Sweep every placement of exactly b byzantine and r silent servers.
    #[arg(long)]
    sweep: bool,
    /// Transcript destination (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[command(flatten)]
    sys: SystemArgs,
    /// Number of files.
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Explicit evaluation points for the queried servers (not validated).
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<u64>,
    /// Enumerate every randomness matrix.
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Sampled histogram comparison with this many draws per file index.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct RatesArgs {
    #[arg(long, default_value_t = 12)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    t: usize,
    #[arg(long, value_delimiter = ',', default_values_t = vec![2, 0])]
    b_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0, 2])]
    r_list: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    m_max: u64,
    /// Whitespace table for gnuplot instead of CSV.
    #[arg(long)]
    gnuplot: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Protocol(String),
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Protocol(_) => EXIT_PROTOCOL,
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Protocol(m) | Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::RetrievalFailed | Error::DecodingFailure | Error::AuditFailed(_) => {
                Failure::Protocol(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Params { sys, json } => cmd_params(&sys, json, out),
        Command::Encode {
            sys,
            data,
            out: path,
            db_out,
        } => cmd_encode(&sys, &data, path.as_deref(), db_out.as_deref(), out),
        Command::Simulate(args) => cmd_simulate(&args, out, err),
        Command::Audit(args) => cmd_audit(&args, out),
        Command::Rates(args) => cmd_rates(&args, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn field_for(sys: &SystemArgs) -> std::result::Result<PrimeField, Failure> {
    match sys.p {
        Some(p) => Ok(PrimeField::new(p)?),
        None if sys.n <= 16 => Ok(PrimeField::new(17)?),
        None => Ok(PrimeField::smallest_above(sys.n as u64)),
    }
}

fn params_for(sys: &SystemArgs) -> std::result::Result<SchemeParams, Failure> {
    Ok(compute_params(sys.n, sys.k, sys.t, sys.b, sys.r)?)
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_database(
    data: &DataArgs,
    field: PrimeField,
    params: &SchemeParams,
) -> std::result::Result<Database, Failure> {
    match (&data.db, data.random_db) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let db: Database = text.parse()?;
            if db.field() != field {
                return Err(Failure::Usage(format!(
                    "database is over {} but the scheme uses {field}",
                    db.field()
                )));
            }
            if db.k() != params.k || db.nu() != params.nu {
                return Err(Failure::Usage(format!(
                    "database files are {}x{}, scheme needs {}x{}",
                    db.nu(),
                    db.k(),
                    params.nu,
                    params.k
                )));
            }
            Ok(db)
        }
        (None, Some(m)) if m >= 1 => {
            let mut rng = stream_rng(data.seed, STREAM_DATABASE);
            Ok(Database::random(field, m, params.nu, params.k, &mut rng)?)
        }
        _ => Err(Failure::Usage("need --db PATH or --random-db M (M >= 1)".into())),
    }
}

fn cmd_params(sys: &SystemArgs, as_json: bool, out: &mut dyn Write) -> CmdResult {
    let p = params_for(sys)?;
    let field = field_for(sys)?;
    if as_json {
        let v = json!({
            "n": p.n, "k": p.k, "t": p.t, "b": p.b, "r": p.r,
            "nu": p.nu, "n_prime": p.n_prime, "d_star": p.d_star,
            "star_dim": p.star_dim,
            "star_code": [p.n_prime, p.star_dim, p.d_star],
            "rate": p.rate().to_string(),
            "field": field.modulus(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
    } else {
        writeln!(out, "n={} k={} t={} b={} r={}", p.n, p.k, p.t, p.b, p.r)?;
        writeln!(out, "field: {field}")?;
        writeln!(out, "nu (rows per round): {}", p.nu)?;
        writeln!(out, "n' (servers queried): {}", p.n_prime)?;
        writeln!(out, "response code: [{},{},{}]", p.n_prime, p.star_dim, p.d_star)?;
        writeln!(out, "d*: {}", p.d_star)?;
        writeln!(out, "rate: {}", p.rate())?;
    }
    Ok(EXIT_OK)
}

fn cmd_encode(
    sys: &SystemArgs,
    data: &DataArgs,
    path: Option<&Path>,
    db_out: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let p = params_for(sys)?;
    let field = field_for(sys)?;
    let scheme = Scheme::standard(field, p)?;
    let db = load_database(data, field, &p)?;
    if let Some(dp) = db_out {
        fs::write(dp, db.to_string())?;
    }
    let shares = distribute(&db, scheme.storage_code())?;
    emit(path, &shares_to_text(field, &shares), out)?;
    Ok(EXIT_OK)
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let p = params_for(&args.sys)?;
    let field = field_for(&args.sys)?;
    let scheme = Scheme::standard(field, p)?;
    let db = load_database(&args.data, field, &p)?;
    let strategy = args
        .strategy
        .as_deref()
        .map(str::parse::<ByzantineStrategy>)
        .transpose()?;

    if args.sweep {
        let strategies = match strategy {
            Some(s) => vec![s],
            None => ByzantineStrategy::catalogue(),
        };
        let mut all_ok = true;
        for s in strategies {
            let sum = sweep_adversary_placements(&db, &scheme, args.index, s, args.data.seed, args.symmetric)?;
            writeln!(
                out,
                "sweep strategy={s} placements={} correct={}",
                sum.total, sum.correct
            )?;
            for (byz, silent) in &sum.failures {
                writeln!(out, "  failed byzantine={byz:?} silent={silent:?}")?;
            }
            all_ok &= sum.correct == sum.total;
        }
        return Ok(if all_ok { EXIT_OK } else { EXIT_PROTOCOL });
    }

    let adv = match &args.adversary {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            AdversaryConfig::from_toml(&text)?
        }
        None => AdversaryConfig {
            byzantine: args.byzantine.clone(),
            strategy: strategy.unwrap_or(ByzantineStrategy::UniformRandom),
            silent: args.silent.clone(),
            colluding: args.collude.clone(),
            seed: args.data.seed,
        },
    };
    if adv.byzantine.len() > p.b || adv.silent.len() > p.r {
        writeln!(
            err,
            "warning: adversary ({} byzantine, {} silent) exceeds the budget b={}, r={}",
            adv.byzantine.len(),
            adv.silent.len(),
            p.b,
            p.r
        )?;
    }
    if adv.colluding.len() > p.t {
        writeln!(
            err,
            "warning: {} colluding servers exceed the privacy threshold t={}",
            adv.colluding.len(),
            p.t
        )?;
    }
    let report = run_session(&db, &scheme, args.index, &adv, args.symmetric)?;
    let text = report.to_string();
    match &args.out {
        Some(path) => {
            fs::write(path, &text)?;
            writeln!(
                out,
                "file {}: {}",
                report.target,
                if report.correct { "recovered" } else { "NOT recovered" }
            )?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(if report.correct { EXIT_OK } else { EXIT_PROTOCOL })
}

fn cmd_audit(args: &AuditArgs, out: &mut dyn Write) -> CmdResult {
    let p = params_for(&args.sys)?;
    let field = field_for(&args.sys)?;
    let mode = match (args.exhaustive, args.samples) {
        (true, _) => AuditMode::Exhaustive,
        (false, Some(s)) => AuditMode::Sampled(s),
        (false, None) => AuditMode::Algebraic,
    };
    let result = if args.alpha.is_empty() {
        let scheme = Scheme::standard(field, p)?;
        audit_scheme(&scheme, args.m, mode, args.seed)
    } else {
        // Raw construction so malformed point sets reach the audit.
        if args.alpha.len() != p.n_prime {
            return Err(Failure::Usage(format!(
                "--alpha needs {} points, got {}",
                p.n_prime,
                args.alpha.len()
            )));
        }
        let alpha: Vec<Fp> = field.vec_from(&args.alpha);
        let gd = GenMatrix::new(
            (0..p.t)
                .map(|j| alpha.iter().map(|a| a.pow(j as u64)).collect())
                .collect(),
        );
        let e = build_e(&p, &alpha, &field.ones(p.n_prime))?;
        privacy_audit(field, &gd, &e, p.t, args.m, mode, args.seed)
    };
    match result {
        Ok(rep) => {
            writeln!(
                out,
                "PASS: all {} {}-column submatrices of G_D invertible",
                rep.submatrices_checked, p.t
            )?;
            if rep.exhaustive_identical == Some(true) {
                writeln!(
                    out,
                    "PASS: exact query distributions identical for all {} file indices (uniform: {})",
                    args.m,
                    rep.exhaustive_uniform.unwrap_or(false)
                )?;
            }
            if let Some((stat, crit)) = rep.sampled_chi_square {
                writeln!(out, "PASS: max chi-square {stat:.3} below critical value {crit:.3}")?;
            }
            Ok(EXIT_OK)
        }
        Err(Error::AuditFailed(subset)) => {
            writeln!(out, "FAIL: server subset {subset:?} leaks the file index")?;
            Ok(EXIT_PROTOCOL)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_rates(args: &RatesArgs, out: &mut dyn Write) -> CmdResult {
    if args.b_list.len() != args.r_list.len() {
        return Err(Failure::Usage("--b-list and --r-list must have equal length".into()));
    }
    if args.m_max == 0 {
        return Err(Failure::Usage("--m-max must be at least 1".into()));
    }
    let pairs: Vec<(usize, usize)> = args
        .b_list
        .iter()
        .copied()
        .zip(args.r_list.iter().copied())
        .collect();
    let table = rate_table(args.n, args.k, args.t, &pairs, args.m_max);
    let text = if args.gnuplot {
        emit_gnuplot(&table)
    } else {
        emit_csv(&table)
    };
    emit(args.out.as_deref(), &text, out)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["robust-pir"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn params_text_and_json() {
        let (code, out, _) = call(&["params", "--n", "13", "--k", "2", "--t", "3", "--b", "2", "--r", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("nu (rows per round): 2"));
        assert!(out.contains("response code: [13,8,6]"));
        assert!(out.contains("rate: 4/13"));

        let (code, out, _) = call(&[
            "params", "--n", "13", "--k", "2", "--t", "3", "--b", "2", "--r", "1", "--json",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rate"], "4/13");
        assert_eq!(v["d_star"], 6);
    }

    #[test]
    fn infeasible_params_exit_usage() {
        let (code, _, err) = call(&["params", "--n", "6", "--k", "2", "--t", "3", "--b", "2", "--r", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("infeasible"));
        let (code, _, _) = call(&["params", "--bogus"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn simulate_over_budget_warns() {
        let (code, _, err) = call(&[
            "simulate", "--n", "13", "--k", "2", "--t", "3", "--b", "2", "--r", "1",
            "--random-db", "2", "--byzantine", "1,2,3", "--strategy", "offset:1", "--seed", "4",
        ]);
        assert!(err.contains("warning"));
        assert!(code == EXIT_OK || code == EXIT_PROTOCOL);
    }

    #[test]
    fn simulate_needs_database() {
        let (code, _, err) = call(&["simulate", "--n", "13", "--k", "2", "--t", "3"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--random-db"));
        let (code, _, _) = call(&[
            "simulate", "--n", "13", "--k", "2", "--t", "3", "--db", "/nonexistent/db.txt",
        ]);
        assert_eq!(code, EXIT_IO);
    }

    #[test]
    fn audit_default_and_malformed() {
        let (code, out, _) = call(&["audit", "--n", "13", "--k", "2", "--t", "3", "--b", "2", "--r", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("all 286 3-column"));
        let (code, out, _) = call(&[
            "audit", "--n", "4", "--k", "1", "--t", "2", "--p", "5", "--alpha", "1,2,2,3",
        ]);
        assert_eq!(code, EXIT_PROTOCOL);
        assert!(out.contains("FAIL"));
    }

    #[test]
    fn rates_defaults_and_single_m() {
        let (code, out, _) = call(&["rates"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 401);
        let (_, out, _) = call(&["rates", "--m-max", "1"]);
        assert_eq!(out.lines().count(), 5);
        let (_, out, _) = call(&["rates", "--n", "6", "--b-list", "2", "--r-list", "1", "--m-max", "1"]);
        assert!(out.contains("infeasible"));
        let (code, _, _) = call(&["rates", "--b-list", "1,2", "--r-list", "0"]);
        assert_eq!(code, EXIT_USAGE);
    }
}
