//! Command-line front end. [`dispatch`] parses arguments, runs one
//! subcommand and returns the process exit code: 0 on success, 2 on bad
//! parameters or input, 3 when a trace violates its constraint, 1 otherwise.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{bounds, count_2d_arrays, emit_table, evaluate_grid, parse_grid};
use crate::cell::{CellState, WriteSequence};
use crate::code::{simulate, RewritingCode};
use crate::constraint::{check_constraint, ConstraintParams, Verdict};
use crate::constructions::{
    rs_wom, BitPerWrite, DiluteSpace, DiluteTime, SpaceCode, TableWom, TimeCode, TimePCode,
    TrivialCode, WomCode,
};
use crate::cosets::{CosetCode, GoodCodeSearch, ScanMode, SearchStep, DEFAULT_MAX_BITS};
use crate::error::{Error, Result};
use crate::wwl::{capacity, count_wwl, Enumerator, WwlParams, DEFAULT_TOLERANCE};

pub const STATE_BITS_VAR: &str = "TSCC_MAX_STATE_BITS";

#[derive(Debug, Parser)]
#[command(name = "tscc", version, about = "Time-space constrained rewriting codes")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Capacity of a one-dimensional constraint
    Capacity {
        #[command(subcommand)]
        kind: CapacityKind,
    },
    /// Number of (beta, p)-WWL vectors of length n
    Count(CountArgs),
    /// Rank of a WWL vector among all vectors of its length
    Rank(RankArgs),
    /// WWL vector of a given rank
    Unrank(UnrankArgs),
    /// Drive a construction with seeded random messages and check the trace
    Simulate(SimulateArgs),
    /// Check a write-sequence file against an (alpha, beta, p) constraint
    Verify(VerifyArgs),
    /// Lower and upper capacity bounds
    Bounds(BoundsArgs),
    /// CSV of bounds over a parameter grid
    Table(TableArgs),
    /// Exact count of small 2D arrays under an a x b window budget
    Count2d(Count2dArgs),
    /// Greedy search for an S-good linear code
    Findgood(FindGoodArgs),
}

#[derive(Debug, Subcommand)]
enum CapacityKind {
    /// Capacity of the (beta, p)-WWL constraint
    Wwl {
        #[arg(long)]
        beta: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long)]
    beta: usize,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Debug, Args)]
struct RankArgs {
    #[arg(long)]
    beta: usize,
    #[arg(long)]
    p: usize,
    /// 01-string, cell 1 first
    #[arg(long)]
    vector: String,
}

#[derive(Debug, Args)]
struct UnrankArgs {
    #[arg(long)]
    beta: usize,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    n: usize,
    /// Rank in [1 : M_n], decimal
    #[arg(long)]
    m: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Construction {
    Trivial,
    Space,
    Time,
    Timep,
    DiluteTime,
    DiluteSpace,
    Coset,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    construction: Construction,
    #[arg(long, default_value_t = 1)]
    alpha: usize,
    #[arg(long, default_value_t = 1)]
    beta: usize,
    #[arg(long, default_value_t = 1)]
    p: usize,
    /// Cell count (trivial, coset)
    #[arg(long)]
    n: Option<usize>,
    /// WWL half length (space, dilute-time)
    #[arg(long)]
    nprime: Option<usize>,
    /// WOM writes (bitper)
    #[arg(long)]
    t: Option<usize>,
    /// rs, bitper or file:PATH
    #[arg(long, default_value = "rs")]
    wom: String,
    /// Use the period-pt schedule for timep
    #[arg(long)]
    remark: bool,
    #[arg(long)]
    writes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the trace to this file
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    alpha: usize,
    #[arg(long)]
    beta: usize,
    #[arg(long)]
    p: usize,
    /// Write-sequence file: one 01-string per line, initial state first
    #[arg(long)]
    file: PathBuf,
    /// Accept a nonzero initial state
    #[arg(long)]
    allow_nonzero_initial: bool,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long)]
    alpha: usize,
    #[arg(long)]
    beta: usize,
    #[arg(long)]
    p: usize,
    /// Use the coset-code lower bound for alpha = 1
    #[arg(long)]
    coset: bool,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// e.g. alpha=4:8,beta=1,p=1
    #[arg(long)]
    grid: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    coset: bool,
}

#[derive(Debug, Args)]
struct Count2dArgs {
    #[arg(long)]
    a: usize,
    #[arg(long)]
    b: usize,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Debug, Args)]
struct FindGoodArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    beta: usize,
    #[arg(long)]
    p: usize,
    /// Pick each generator among sampled candidates
    #[arg(long)]
    sample: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn max_state_bits() -> Result<usize> {
    match std::env::var(STATE_BITS_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{STATE_BITS_VAR}={v} is not an integer"))),
        Err(_) => Ok(DEFAULT_MAX_BITS),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Anomaly(_) | Error::Convergence { .. } | Error::RoundTrip { .. } => 1,
        _ => 2,
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

/// Runs the command line and returns the exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match run(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn run(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Capacity {
            kind: CapacityKind::Wwl { beta, p, tol },
        } => {
            let report = capacity(WwlParams::new(beta, p)?, tol)?;
            writeln!(out, "{}", to_json(&report))?;
        }
        Command::Count(a) => {
            writeln!(out, "{}", count_wwl(WwlParams::new(a.beta, a.p)?, a.n)?)?;
        }
        Command::Rank(a) => {
            let v: CellState = a.vector.parse()?;
            let e = Enumerator::new(WwlParams::new(a.beta, a.p)?, v.len())?;
            writeln!(out, "{}", e.rank(&v)?)?;
        }
        Command::Unrank(a) => {
            let m: BigUint = a
                .m
                .parse()
                .map_err(|_| Error::Parse(format!("`{}` is not a decimal integer", a.m)))?;
            let e = Enumerator::new(WwlParams::new(a.beta, a.p)?, a.n)?;
            writeln!(out, "{}", e.unrank(&m)?)?;
        }
        Command::Simulate(a) => return simulate_cmd(&a, out),
        Command::Verify(a) => {
            let params = ConstraintParams::new(a.alpha, a.beta, a.p)?;
            let text = fs::read_to_string(&a.file)?;
            let ws = WriteSequence::parse(&text, a.allow_nonzero_initial)?;
            let verdict = check_constraint(&ws, params)?;
            writeln!(out, "{}", to_json(&verdict))?;
            return Ok(verdict_code(&verdict));
        }
        Command::Bounds(a) => {
            let report = bounds(ConstraintParams::new(a.alpha, a.beta, a.p)?, a.coset)?;
            writeln!(out, "{}", to_json(&report))?;
        }
        Command::Table(a) => {
            let points = parse_grid(&a.grid)?;
            let csv = emit_table(&evaluate_grid(&points, a.coset, a.workers)?);
            match a.out {
                Some(path) => fs::write(path, csv)?,
                None => write!(out, "{csv}")?,
            }
        }
        Command::Count2d(a) => {
            let c = count_2d_arrays(a.a, a.b, a.p, a.m, a.n, max_state_bits()?)?;
            writeln!(out, "{}", to_json(&c))?;
        }
        Command::Findgood(a) => {
            let mode = if a.sample {
                ScanMode::Sampled { seed: a.seed }
            } else {
                ScanMode::Exhaustive
            };
            let mut search =
                GoodCodeSearch::new(a.n, WwlParams::new(a.beta, a.p)?, mode, max_state_bits()?)?;
            let (n0, q0) = (search.covered(), search.q());
            search.run()?;
            let basis: Vec<String> = search
                .basis()
                .iter()
                .map(|&z| CellState::from_u64(z, a.n).to_string())
                .collect();
            let j = search.dimension();
            let report = FindGoodReport {
                n: a.n,
                beta: a.beta,
                p: a.p,
                mode,
                wwl_vectors: search.wwl().len() as u64,
                initial_covered: n0,
                initial_q: q0,
                j,
                j_bound: search.dimension_bound(),
                basis,
                rate: (a.n - j) as f64 / a.n as f64,
                steps: search.steps().to_vec(),
            };
            writeln!(out, "{}", to_json(&report))?;
        }
    }
    Ok(0)
}

fn verdict_code(v: &Verdict) -> i32 {
    if v.is_satisfied() {
        0
    } else {
        3
    }
}

fn load_wom(a: &SimulateArgs) -> Result<Arc<dyn WomCode>> {
    let wom: Arc<dyn WomCode> = match a.wom.as_str() {
        "rs" => Arc::new(rs_wom()),
        "bitper" => {
            let t = a
                .t
                .ok_or_else(|| Error::InvalidParams("--wom bitper needs --t".into()))?;
            Arc::new(BitPerWrite::new(t)?)
        }
        other => match other.strip_prefix("file:") {
            Some(path) => Arc::new(TableWom::parse(path, &fs::read_to_string(path)?)?),
            None => {
                return Err(Error::InvalidParams(format!(
                    "unknown WOM `{other}` (rs, bitper, file:PATH)"
                )))
            }
        },
    };
    if let Some(t) = a.t {
        if t != wom.writes() {
            return Err(Error::InvalidParams(format!(
                "--t {t} does not match the {}-write WOM code `{}`",
                wom.writes(),
                wom.name()
            )));
        }
    }
    Ok(wom)
}

fn need(value: Option<usize>, flag: &str, what: &str) -> Result<usize> {
    value.ok_or_else(|| Error::InvalidParams(format!("{what} needs --{flag}")))
}

fn time_family(a: &SimulateArgs, alpha: usize) -> Result<Box<dyn RewritingCode>> {
    let wom = load_wom(a)?;
    Ok(if a.remark {
        Box::new(TimePCode::remark_variant(alpha, a.p, wom)?)
    } else if a.p == 1 && a.construction != Construction::Timep {
        Box::new(TimeCode::new(alpha, wom)?)
    } else {
        Box::new(TimePCode::new(alpha, a.p, wom)?)
    })
}

fn space_code(a: &SimulateArgs) -> Result<SpaceCode> {
    let half = need(a.nprime, "nprime", "space code")?;
    SpaceCode::new(WwlParams::new(a.beta, a.p)?, half)
}

fn coset_code(a: &SimulateArgs) -> Result<CosetCode> {
    let n = need(a.n, "n", "coset code")?;
    let mut search = GoodCodeSearch::new(
        n,
        WwlParams::new(a.beta, a.p)?,
        ScanMode::Exhaustive,
        max_state_bits()?,
    )?;
    search.run()?;
    CosetCode::from_search(&search)
}

fn build_code(a: &SimulateArgs) -> Result<Box<dyn RewritingCode>> {
    Ok(match a.construction {
        Construction::Trivial => {
            let n = need(a.n, "n", "trivial code")?;
            Box::new(TrivialCode::new(
                ConstraintParams::new(a.alpha, a.beta, a.p)?,
                n,
            )?)
        }
        Construction::Space => Box::new(space_code(a)?),
        Construction::Time => {
            if a.p != 1 {
                return Err(Error::InvalidParams(
                    "time construction is for p = 1; use timep".into(),
                ));
            }
            Box::new(TimeCode::new(a.alpha, load_wom(a)?)?)
        }
        Construction::Timep => time_family(a, a.alpha)?,
        Construction::DiluteTime => {
            let inner: Box<dyn RewritingCode> = if a.n.is_some() && a.nprime.is_none() {
                Box::new(coset_code(a)?)
            } else {
                Box::new(space_code(a)?)
            };
            Box::new(DiluteTime::new(inner, a.alpha)?)
        }
        Construction::DiluteSpace => Box::new(DiluteSpace::new(time_family(a, a.alpha)?, a.beta)?),
        Construction::Coset => Box::new(coset_code(a)?),
    })
}

#[derive(Serialize)]
struct FindGoodReport {
    n: usize,
    beta: usize,
    p: usize,
    mode: ScanMode,
    #[serde(rename = "S")]
    wwl_vectors: u64,
    #[serde(rename = "N_B0")]
    initial_covered: u64,
    #[serde(rename = "Q_B0")]
    initial_q: f64,
    j: usize,
    j_bound: usize,
    basis: Vec<String>,
    rate: f64,
    steps: Vec<SearchStep>,
}

#[derive(Serialize)]
struct SimulateReport {
    construction: String,
    alpha: usize,
    beta: usize,
    p: usize,
    cells: usize,
    writes: usize,
    seed: u64,
    #[serde(flatten)]
    verdict: Verdict,
    achieved_rate: f64,
    theoretical_rate: f64,
    period: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
}

fn simulate_cmd(a: &SimulateArgs, out: &mut dyn Write) -> Result<i32> {
    if a.writes == 0 {
        return Err(Error::InvalidParams("--writes must be positive".into()));
    }
    let code = build_code(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let sim = simulate(code.as_ref(), a.writes, &mut rng)?;
    if let Some(path) = &a.trace {
        fs::write(path, sim.trace.to_text())?;
    }
    let c = code.constraint();
    let report = SimulateReport {
        construction: code.name(),
        alpha: c.alpha,
        beta: c.beta,
        p: c.p,
        cells: code.cells(),
        writes: a.writes,
        seed: a.seed,
        verdict: sim.verdict,
        achieved_rate: sim.rate.rate,
        theoretical_rate: code.theoretical_rate(),
        period: code.period(),
        warning: sim.rate.warning,
    };
    writeln!(out, "{}", to_json(&report))?;
    Ok(verdict_code(&sim.verdict))
}
