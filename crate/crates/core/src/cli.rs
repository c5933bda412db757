//! Command-line front end. `run` returns the process exit code: 0 when every
//! requested check passes, 1 on a check failure, 2 on usage or domain errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::extrema::{inclusion_chain_holds, localization_windows};
use crate::jacobi::{eval_jacobi, eval_m, eval_orthonormal, eval_z, EvalResult};
use crate::lemmas::{certify_random, DEFAULT_CORNER_BIAS};
use crate::osc::{eval_w, osc_window};
use crate::params::{delta_interval, derive_params, parse_real, JacobiParams};
use crate::report::{format_text, to_json, write_csv};
use crate::signed_log::SignedLog;
use crate::sonin::{find_x0, sonin_s, X0Path};
use crate::verifier::{conjecture_metrics, sonin_analysis, sweep, Check, GridSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Grid cells used by single-point commands that search for a maximum.
const DEFAULT_SAMPLES: usize = 4000;

#[derive(Debug, Parser)]
#[command(name = "jacobi-envelope", version, about = "Envelopes of orthonormal Jacobi polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one quantity at a point.
    Eval(EvalArgs),
    /// Print δ±1, γ±1, N±1, N′±1, x₀ and θ.
    Window(ParamArgs),
    /// Run a check over a parameter grid and write a JSON (and CSV) report.
    Verify(VerifyArgs),
    /// Locate x₀ and compare S(x₀) with max |Z|.
    Sonin(ParamArgs),
    /// Exact rational certification at seeded random points.
    Lemmas(LemmaArgs),
    /// Plateau ratio and mass on [δ₋₁, δ₁].
    Conjecture(ConjectureArgs),
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long)]
    k: u32,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<JacobiParams> {
        JacobiParams::new(self.k, self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum What {
    #[value(name = "poly")]
    Poly,
    #[value(name = "ortho")]
    Ortho,
    #[value(name = "M")]
    M,
    #[value(name = "Z")]
    Z,
    #[value(name = "W")]
    W,
    #[value(name = "S")]
    S,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    #[arg(long, value_enum, default_value = "poly")]
    what: What,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CheckArg {
    Theorem1,
    Theorem2,
    Identities,
    Grmax,
    Sonin,
    Oscillatory,
}

impl From<CheckArg> for Check {
    fn from(c: CheckArg) -> Self {
        match c {
            CheckArg::Theorem1 => Check::Theorem1,
            CheckArg::Theorem2 => Check::Theorem2,
            CheckArg::Identities => Check::Identities,
            CheckArg::Grmax => Check::Grmax,
            CheckArg::Sonin => Check::Sonin,
            CheckArg::Oscillatory => Check::Oscillatory,
        }
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: CheckArg,
    /// Inclusive degree range `LO:HI`.
    #[arg(long = "k-range")]
    k_range: String,
    /// Comma-separated α values.
    #[arg(long = "alpha-set", allow_hyphen_values = true)]
    alpha_set: String,
    /// Comma-separated β values.
    #[arg(long = "beta-set", allow_hyphen_values = true)]
    beta_set: String,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LemmaArgs {
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long = "corner-bias", default_value_t = DEFAULT_CORNER_BIAS)]
    corner_bias: f64,
}

#[derive(Debug, Args)]
struct ConjectureArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Fail unless plateau_ratio ≥ this.
    #[arg(long = "min-plateau")]
    min_plateau: Option<f64>,
    /// Fail unless plateau_ratio ≤ this.
    #[arg(long = "max-plateau")]
    max_plateau: Option<f64>,
    /// Fail unless mass ≥ this.
    #[arg(long = "min-mass")]
    min_mass: Option<f64>,
}

/// Parses `LO:HI` (inclusive).
pub fn parse_k_range(s: &str) -> Result<Vec<u32>> {
    let bad = || Error::Invalid(format!("malformed range `{s}`: expected LO:HI with LO ≤ HI"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

pub fn parse_real_list(s: &str) -> Result<Vec<f64>> {
    let values = s
        .split(',')
        .map(parse_real)
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(Error::Invalid("empty list".into()));
    }
    Ok(values)
}

fn fmt_signed(v: SignedLog) -> String {
    let f = v.to_f64();
    if f.is_finite() && (f != 0.0 || v.is_zero()) {
        format_text(f)
    } else {
        let sign = if v.sign < 0 { "-" } else { "" };
        format!("{sign}exp({})", format_text(v.ln_abs))
    }
}

fn print_eval(out: &mut dyn Write, r: &EvalResult) -> std::io::Result<()> {
    writeln!(out, "value = {}", fmt_signed(r.value))?;
    writeln!(out, "derivative = {}", fmt_signed(r.deriv))
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<i32> {
    let p = a.params.params()?;
    let x = a.x;
    match a.what {
        What::Poly => print_eval(out, &eval_jacobi(&p, x)?)?,
        What::Ortho => print_eval(out, &eval_orthonormal(&p, x)?)?,
        What::M => writeln!(out, "M = {}", format_text(eval_m(&p, x)?))?,
        What::Z => writeln!(out, "Z = {}", format_text(eval_z(&p, x)?))?,
        What::W => {
            let w = eval_w(&p, x)?;
            writeln!(out, "W = {}", format_text(w.raw))?;
            writeln!(out, "weighted = {}", format_text(w.weighted))?;
        }
        What::S => writeln!(out, "S = {}", format_text(sonin_s(&p, x)?))?,
    }
    Ok(EXIT_OK)
}

fn cmd_window(a: &ParamArgs, out: &mut dyn Write) -> Result<i32> {
    let p = a.params()?;
    if !p.in_theorem1_domain() {
        return Err(Error::domain(format!("{}; got {p}", Check::Theorem1.hypothesis())));
    }
    let dp = derive_params(&p);
    let delta = delta_interval(&dp)?;
    let gamma = osc_window(&dp)?;
    let w = localization_windows(&dp)?;
    let x0 = find_x0(&dp)?;
    let rows = [
        ("delta_-1", delta.lo),
        ("delta_1", delta.hi),
        ("gamma_-1", gamma.gamma_minus),
        ("gamma_1", gamma.gamma_plus),
        ("N_-1", w.n.lo),
        ("N_1", w.n.hi),
        ("N'_-1", w.n_prime.lo),
        ("N'_1", w.n_prime.hi),
        ("x0", x0.x0),
        ("theta", x0.theta),
    ];
    for (name, v) in rows {
        writeln!(out, "{name} = {}", format_text(v))?;
    }
    writeln!(out, "inclusion_chain = {}", inclusion_chain_holds(&dp, &w)?)?;
    Ok(EXIT_OK)
}

fn cmd_sonin(a: &ParamArgs, out: &mut dyn Write) -> Result<i32> {
    let p = a.params()?;
    let r = sonin_analysis(&p, DEFAULT_SAMPLES)?;
    let path = find_x0(&derive_params(&p))?.path;
    let path = match path {
        X0Path::Bracket => "bracket",
        X0Path::Degenerate => "degenerate",
        X0Path::FullScan => "full-scan",
    };
    writeln!(out, "x0 = {}", format_text(r.x0))?;
    writeln!(out, "theta = {}", format_text(r.theta))?;
    writeln!(out, "S(x0) = {}", format_text(r.s_at_x0))?;
    writeln!(out, "max|Z| = {}", format_text(r.max_abs_z()))?;
    writeln!(out, "max Z^2 = {}", format_text(r.max_z_sq))?;
    writeln!(
        out,
        "bracket = {path} ({}, {})",
        format_text(r.bracket_lo),
        format_text(r.bracket_hi)
    )?;
    writeln!(out, "fd_sign_mismatches = {} of {}", r.fd_mismatches, r.fd_checked)?;
    let ok = r.max_z_sq <= r.s_at_x0 * (1.0 + crate::verifier::SONIN_ENVELOPE_SLACK) && r.fd_mismatches == 0;
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_lemmas(a: &LemmaArgs, out: &mut dyn Write) -> Result<i32> {
    let s = certify_random(a.trials, a.seed, a.corner_bias)?;
    writeln!(out, "trials = {}", s.trials)?;
    writeln!(out, "passed = {}", s.passed)?;
    writeln!(out, "failed = {}", s.failed)?;
    writeln!(out, "corner_trials = {}", s.corner_trials)?;
    writeln!(out, "certification = {}", s.certification)?;
    for t in s.failures.iter().take(10) {
        writeln!(out, "failure #{}: q̄ = {}, s̄ = {}: {}", t.index, t.qbar, t.sbar, t.failures.join(", "))?;
    }
    Ok(if s.failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_conjecture(a: &ConjectureArgs, out: &mut dyn Write) -> Result<i32> {
    let p = a.params.params()?;
    let m = conjecture_metrics(&p, DEFAULT_SAMPLES)?;
    writeln!(out, "plateau_ratio = {}", format_text(m.plateau_ratio))?;
    writeln!(out, "mass = {}", format_text(m.mass))?;
    let ok = a.min_plateau.is_none_or(|t| m.plateau_ratio >= t)
        && a.max_plateau.is_none_or(|t| m.plateau_ratio <= t)
        && a.min_mass.is_none_or(|t| m.mass >= t);
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let check: Check = a.check.into();
    let grid = GridSpec {
        k_values: parse_k_range(&a.k_range)?,
        alpha_values: parse_real_list(&a.alpha_set)?,
        beta_values: parse_real_list(&a.beta_set)?,
        checks: vec![check],
        samples: a.samples,
        seed: a.seed,
    };
    let report = sweep(&grid)?;
    fs::write(&a.out, to_json(&grid, &report)?)
        .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", a.out.display())))?;
    if let Some(path) = &a.csv {
        let f = fs::File::create(path)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
        write_csv(f, &report)?;
    }
    let s = &report.summary;
    writeln!(
        out,
        "{check}: total {} passed {} failed {} skipped {} filtered {}",
        s.total, s.passed, s.failed, s.skipped, s.filtered
    )?;
    if let Some(m) = s.min_margin {
        writeln!(out, "min_margin = {}", format_text(m))?;
    }
    for item in report.items.iter().filter(|i| !i.skipped && !i.pass) {
        writeln!(
            out,
            "FAIL {} {}: lhs {} rhs {} at x = {}{}",
            item.check,
            item.params,
            format_text(item.lhs),
            format_text(item.rhs),
            item.witness_x.map(format_text).unwrap_or_else(|| "-".into()),
            item.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default(),
        )?;
    }
    if s.empty {
        writeln!(err, "error: no grid point satisfies the hypothesis: {}", check.hypothesis())?;
        return Ok(EXIT_USAGE);
    }
    Ok(if s.failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Invalid(_) | Error::EmptyInterval { .. } => EXIT_USAGE,
        Error::Inconsistent { .. } | Error::Overflow { .. } => EXIT_CHECK_FAILED,
    }
}

/// Runs the tool with explicit output streams. `argv[0]` is the program name.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a, out),
        Command::Window(a) => cmd_window(a, out),
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Sonin(a) => cmd_sonin(a, out),
        Command::Lemmas(a) => cmd_lemmas(a, out),
        Command::Conjecture(a) => cmd_conjecture(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Invalid(format!("i/o: {e}"))
    }
}
