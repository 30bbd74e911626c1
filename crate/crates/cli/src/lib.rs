//! Command-line front end for the `staircase` library.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns
//! the process exit status: 0 on success, 1 when a statistical gate or
//! verification check fails, 2 for usage and argument errors, 3 when
//! adaptive quadrature fails to converge.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};
use staircase::counting::{
    closed_form_gn, mean_count, mean_count_signed_binomial, oracle_pmf, pgf_eval, pgf_oracle, pmf,
    pmf_for,
};
use staircase::exact_dist::{atom_at_one, joint_survival, marginal_cdf, moment};
use staircase::martingale::{
    build_family, martingale_residual, mc_martingale_check, MartingaleFamily, SeedFunction,
    P_ONE_DOMAIN_CAP,
};
use staircase::scalar::{format_f64, format_rational, parse_rational};
use staircase::simulate::{simulate_batch, write_paths_csv, write_paths_json};
use staircase::transform::{
    ck, gf_closed_form, gf_partial_sum, gf_tail_bound, laplace_oracle_grid, laplace_partial_sums,
    LaplaceQuery,
};
use staircase::verify::run_verification;
use staircase::{Config, Error, ModelParams, NumericMode, Rational, Scalar};

pub mod ops;
pub mod table;

pub use table::Table;

/// Default ensemble size for `verify`.
pub const DEFAULT_VERIFY_PATHS: usize = 200_000;

#[derive(Debug, Parser)]
#[command(
    name = "staircase",
    version,
    about = "Simulate and evaluate the discrete-time Poisson hyperbolic staircase"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Jump coefficient in (0, 1]: a ratio `a/b`, an integer, or (float mode) a decimal.
    #[arg(long, global = true)]
    pub p: Option<String>,
    /// Horizon (number of steps).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Master seed for simulation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of simulated paths.
    #[arg(long, global = true)]
    pub paths: Option<usize>,
    /// Arithmetic backend. Inferred from `--p` when omitted: ratios and
    /// integers select exact mode, decimals select float mode.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON config file with `p`, `mode`, `tolerances` and `seed`. Flags override it.
    #[arg(long, global = true, env = "STAIRCASE_CONFIG")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for NumericMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => NumericMode::ExactRational,
            ModeArg::Float => NumericMode::Float64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Closed-form family seeded by `-ln(1 - p x) / p`.
    Example,
    /// The same seed integrated numerically.
    LogSeed,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump simulated paths (JSON lines or CSV `path,step,state,jump`).
    Simulate,
    /// Marginal CDF of X_n, its atom at 1, or its moments.
    Cdf {
        /// Threshold in (0, 1]; repeatable. Defaults to 0.1, 0.2, ..., 1.
        #[arg(long = "x")]
        x: Vec<String>,
        /// Emit the atom P(X_n = 1) instead.
        #[arg(long, conflicts_with_all = ["x", "moment"])]
        atom: bool,
        /// Emit E[X_n^m] for this order instead; repeatable.
        #[arg(long, conflicts_with = "x")]
        moment: Vec<u32>,
    },
    /// Joint survival P(X_1 > x_1, ..., X_n > x_n).
    Joint {
        /// Threshold x_i in [0, 1); repeat once per step.
        #[arg(long = "x")]
        x: Vec<String>,
        /// Comma-separated thresholds, an alternative to repeated `--x`.
        #[arg(long, value_delimiter = ',', conflicts_with = "x")]
        thresholds: Vec<String>,
    },
    /// PMF of the jump count N_n.
    Pmf {
        /// Read the PMF off the bivariate recursion oracle (exact mode only).
        #[arg(long)]
        oracle: bool,
        /// Emit E[N_n] by three routes instead.
        #[arg(long, conflicts_with = "oracle")]
        mean: bool,
    },
    /// Generating function E[z^{N_n}], or the polynomial G_n(x) at fixed z.
    Pgf {
        /// Argument z; repeatable.
        #[arg(long = "z", required = true, allow_hyphen_values = true)]
        z: Vec<String>,
        /// Emit the x-coefficients of G_n(x) at each z instead.
        #[arg(long)]
        closed_form: bool,
    },
    /// Laplace transform W_k(x) = E[exp(-t (X_1 + ... + X_k)) | X_0 = x], k <= n.
    Laplace {
        #[arg(long)]
        t: f64,
        /// Starting state in (0, 1].
        #[arg(long = "x", default_value_t = 1.0)]
        x: f64,
        /// Add a column from the grid recursion with this many nodes (x = 1 only).
        #[arg(long)]
        grid: Option<usize>,
        /// Emit the integral coefficients c_k(x), k = 1..n, instead.
        #[arg(long, conflicts_with_all = ["grid", "z"])]
        ck: bool,
        /// Emit the generating function sum_k W_k z^k against its truncation; repeatable.
        #[arg(long = "z", conflicts_with = "grid", allow_hyphen_values = true)]
        z: Vec<f64>,
    },
    /// Martingale family values and residuals, or a Monte Carlo check with `--paths`.
    Martingale {
        #[arg(long, value_enum, default_value_t = FamilyArg::Example)]
        family: FamilyArg,
        /// Evaluation point; repeatable. Defaults to 0.1, ..., 0.9.
        #[arg(long = "x")]
        x: Vec<f64>,
    },
    /// Run the full verification suite and emit its report.
    Verify,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::QuadratureFailure { .. }) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return e.exit_code();
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command, returning 0 or 1 (gate failure).
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    let g = &cli.global;
    let cfg = resolve_config(g)?;
    let mut sink: Box<dyn Write + '_> = match &g.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(&mut *stdout),
    };
    let code = match &cli.command {
        Command::Simulate => {
            let n = need_n(g)?;
            let paths = simulate_batch(&cfg.p, n, g.paths.unwrap_or(1), cfg.seed);
            match g.format {
                Format::Json => write_paths_json(&mut sink, &paths)?,
                Format::Csv => write_paths_csv(&mut sink, &paths)?,
            }
            0
        }
        Command::Verify => {
            let paths = g.paths.unwrap_or(DEFAULT_VERIFY_PATHS);
            let report = run_verification(&cfg, paths);
            match g.format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut sink, &report).map_err(std::io::Error::from)?;
                    writeln!(sink)?;
                }
                Format::Csv => verification_table(&report).write_csv(&mut sink)?,
            }
            let total: usize = report.sections.iter().map(|s| s.checks.len()).sum();
            let failed = report.failures().count();
            for (section, check) in report.failures() {
                writeln!(stderr, "FAIL {section}: {}", check.name)?;
            }
            writeln!(
                stderr,
                "verify: {total} checks, {failed} failed, overall {}",
                if report.overall_pass { "PASS" } else { "FAIL" }
            )?;
            i32::from(!report.overall_pass)
        }
        Command::Martingale { family, .. } if g.paths.is_some() => {
            let n = need_n(g)?;
            if n == 0 {
                return Err(CliError::Usage("martingale --paths needs --n >= 1".into()));
            }
            let fam = make_family(*family, cfg.p.p_f64(), n, cfg.tolerances.quad_rel_tol)?;
            let report = mc_martingale_check(
                &fam,
                &cfg.p,
                n,
                g.paths.unwrap_or_default(),
                cfg.seed,
                cfg.tolerances.quad_rel_tol,
            )?;
            match g.format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut sink, &report).map_err(std::io::Error::from)?;
                    writeln!(sink)?;
                }
                Format::Csv => {
                    let gate = &report.mean_gate;
                    let mut t = Table::new(["n", "paths_used", "observed", "expected", "statistic", "threshold", "pass"]);
                    t.push(vec![
                        json!(report.n),
                        json!(report.paths_used),
                        json!(gate.observed.map(format_f64)),
                        json!(gate.expected.map(format_f64)),
                        json!(format_f64(gate.statistic)),
                        json!(format_f64(gate.threshold)),
                        json!(report.pass),
                    ]);
                    t.write_csv(&mut sink)?;
                }
            }
            i32::from(!report.pass)
        }
        other => {
            let table = value_table(other, g, &cfg, stderr)?;
            match g.format {
                Format::Json => table.write_json(&mut sink)?,
                Format::Csv => table.write_csv(&mut sink)?,
            }
            0
        }
    };
    sink.flush()?;
    Ok(code)
}

fn need_n(g: &GlobalArgs) -> CliResult<usize> {
    g.n.ok_or_else(|| CliError::Usage("missing required flag --n".into()))
}

/// Exact mode for ratio and integer literals, float mode for anything else.
pub fn infer_mode(literal: &str) -> NumericMode {
    if parse_rational(literal).is_some() {
        NumericMode::ExactRational
    } else {
        NumericMode::Float64
    }
}

/// Merges flags over the optional config file.
pub fn resolve_config(g: &GlobalArgs) -> CliResult<Config> {
    let base = g.config.as_deref().map(Config::load).transpose()?;
    let flag_mode = g.mode.map(NumericMode::from);
    let (p, mode) = match (&g.p, &base) {
        (Some(lit), _) => {
            let mode = flag_mode.unwrap_or_else(|| infer_mode(lit));
            (ModelParams::parse(lit, mode)?, mode)
        }
        (None, Some(cfg)) => {
            let mode = flag_mode.unwrap_or(cfg.mode);
            if mode == NumericMode::ExactRational && cfg.p.mode() == NumericMode::Float64 {
                return Err(Error::NonRational(cfg.p.to_string()).into());
            }
            (cfg.p.clone(), mode)
        }
        (None, None) => {
            return Err(CliError::Usage(
                "missing required flag --p (or a config file via --config / STAIRCASE_CONFIG)".into(),
            ))
        }
    };
    Ok(Config {
        p,
        mode,
        tolerances: base.as_ref().map(|c| c.tolerances).unwrap_or_default(),
        seed: g.seed.or(base.as_ref().map(|c| c.seed)).unwrap_or(0),
    })
}

/// Reads a decimal literal such as `0.9`, `-2.5e-3` or `7` as the exact
/// rational it denotes. Ratios `a/b` are accepted too.
pub fn parse_exact_literal(s: &str) -> Option<Rational> {
    if let Some(r) = parse_rational(s) {
        return Some(r);
    }
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits_ok = |d: &str| d.chars().all(|c| c.is_ascii_digit());
    let unsigned = int_part.trim_start_matches(['+', '-']);
    if unsigned.is_empty() && frac_part.is_empty()
        || !digits_ok(unsigned)
        || !digits_ok(frac_part)
        || int_part.len() - unsigned.len() > 1
    {
        return None;
    }
    let negative = int_part.starts_with('-');
    let mut value: BigInt = format!("{unsigned}{frac_part}").parse().ok()?;
    if negative {
        value = -value;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        Rational::from_integer(value * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(value, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}

/// A scalar that can appear in a value table.
trait Cell: Scalar {
    /// `[float]` or `[float, exact]`.
    fn cells(&self) -> Vec<Value>;
    fn parse_arg(s: &str) -> CliResult<Self>;
}

impl Cell for f64 {
    fn cells(&self) -> Vec<Value> {
        vec![json!(format_f64(*self))]
    }

    fn parse_arg(s: &str) -> CliResult<Self> {
        parse_rational(s)
            .map(|r| r.to_f64())
            .or_else(|| s.trim().parse::<f64>().ok())
            .ok_or_else(|| Error::Parse(s.to_string()).into())
    }
}

impl Cell for Rational {
    fn cells(&self) -> Vec<Value> {
        vec![json!(format_f64(self.to_f64())), json!(format_rational(self))]
    }

    fn parse_arg(s: &str) -> CliResult<Self> {
        parse_exact_literal(s).ok_or_else(|| Error::Parse(s.to_string()).into())
    }
}

/// `[name]` in float mode, `[name, name_exact]` in exact mode.
fn value_columns(name: &str, exact: bool) -> Vec<String> {
    if exact {
        vec![name.to_string(), format!("{name}_exact")]
    } else {
        vec![name.to_string()]
    }
}

fn columns(lead: &[&str], value: &str, exact: bool) -> Vec<String> {
    lead.iter().map(|s| s.to_string()).chain(value_columns(value, exact)).collect()
}

fn row(lead: Vec<Value>, value: Vec<Value>) -> Vec<Value> {
    lead.into_iter().chain(value).collect()
}

fn decile_literals(upto: usize) -> Vec<String> {
    (1..=upto).map(|i| if i == 10 { "1".into() } else { format!("0.{i}") }).collect()
}

fn value_table(cmd: &Command, g: &GlobalArgs, cfg: &Config, stderr: &mut dyn Write) -> CliResult<Table> {
    match cfg.mode {
        NumericMode::ExactRational => {
            let p = cfg.p.p_exact()?.clone();
            value_table_in(&p, cmd, g, cfg, stderr)
        }
        NumericMode::Float64 => value_table_in(&cfg.p.p_f64(), cmd, g, cfg, stderr),
    }
}

fn value_table_in<S: Cell>(
    p: &S,
    cmd: &Command,
    g: &GlobalArgs,
    cfg: &Config,
    stderr: &mut dyn Write,
) -> CliResult<Table> {
    let exact = S::EXACT;
    match cmd {
        Command::Cdf { x, atom, moment: orders } => {
            let n = need_n(g)? as u32;
            if *atom {
                let mut t = Table::new(columns(&["n"], "atom", exact));
                t.push(row(vec![json!(n)], atom_at_one(p, n).cells()));
                Ok(t)
            } else if !orders.is_empty() {
                let mut t = Table::new(columns(&["m"], "moment", exact));
                for &m in orders {
                    if m == 0 {
                        return Err(Error::Domain("moment order must be >= 1".into()).into());
                    }
                    t.push(row(vec![json!(m)], moment(p, n, m).cells()));
                }
                Ok(t)
            } else {
                let xs = if x.is_empty() { decile_literals(10) } else { x.clone() };
                let mut t = Table::new(columns(&["x"], "cdf", exact));
                for lit in &xs {
                    let v = marginal_cdf(p, n, &S::parse_arg(lit)?)?;
                    t.push(row(vec![json!(lit)], v.cells()));
                }
                Ok(t)
            }
        }
        Command::Joint { x, thresholds } => {
            let lits = if x.is_empty() { thresholds } else { x };
            if lits.is_empty() {
                return Err(CliError::Usage("joint needs thresholds via --x or --thresholds".into()));
            }
            if let Some(n) = g.n {
                if n != lits.len() {
                    return Err(CliError::Usage(format!(
                        "--n {n} does not match the {} thresholds given",
                        lits.len()
                    )));
                }
            }
            let xs = lits.iter().map(|s| S::parse_arg(s)).collect::<CliResult<Vec<S>>>()?;
            let mut t = Table::new(columns(&["n", "thresholds"], "survival", exact));
            t.push(row(
                vec![json!(xs.len()), json!(lits.join(","))],
                joint_survival(p, &xs)?.cells(),
            ));
            Ok(t)
        }
        Command::Pmf { oracle, mean } => {
            let n = need_n(g)?;
            if *mean {
                let mut t = Table::new(columns(&["route"], "mean", exact));
                t.push(row(vec![json!("telescoped")], mean_count(p, n).cells()));
                t.push(row(vec![json!("pmf")], pmf(p, n).mean().cells()));
                t.push(row(vec![json!("signed_binomial")], mean_count_signed_binomial(p, n).cells()));
                return Ok(t);
            }
            let rows = if *oracle {
                oracle_pmf(&pgf_oracle(&cfg.p, n)?, n).rows()
            } else if exact {
                pmf(&cfg.p.p_exact()?.clone(), n).rows()
            } else {
                let table = pmf_for(&cfg.p, n);
                if table.cancellation_warning {
                    writeln!(
                        stderr,
                        "warning: float PMF at n = {n} may lose accuracy to cancellation; use exact mode"
                    )?;
                }
                table.rows()
            };
            let mut t = Table::new(columns(&["k"], "prob", exact || *oracle));
            for r in rows {
                let mut v = vec![json!(r.k), json!(r.prob)];
                v.extend(r.prob_exact.map(Value::from));
                t.push(v);
            }
            Ok(t)
        }
        Command::Pgf { z, closed_form } => {
            let n = need_n(g)?;
            if *closed_form {
                let mut t = Table::new(columns(&["z", "power"], "coeff", exact));
                for lit in z {
                    let poly = closed_form_gn(p, n, &S::parse_arg(lit)?);
                    for k in 0..=n {
                        t.push(row(vec![json!(lit), json!(k)], poly.coeff(k).cells()));
                    }
                }
                Ok(t)
            } else {
                let mut t = Table::new(columns(&["z"], "pgf", exact));
                for lit in z {
                    t.push(row(vec![json!(lit)], pgf_eval(p, n, &S::parse_arg(lit)?).cells()));
                }
                Ok(t)
            }
        }
        Command::Laplace { t: tt, x, grid, ck: want_ck, z } => {
            let n = need_n(g)?;
            let pf = cfg.p.p_f64();
            let tol = cfg.tolerances.quad_rel_tol;
            let fmt = |v: f64| json!(format_f64(v));
            if *want_ck {
                let mut t = Table::new(["k", "ck"]);
                for k in 1..=n {
                    t.push(vec![json!(k), fmt(ck(pf, *tt, *x, k, tol)?)]);
                }
                return Ok(t);
            }
            if !z.is_empty() {
                let mut t = Table::new(["z", "h", "partial_sum", "tail_bound"]);
                for &zv in z {
                    t.push(vec![
                        json!(zv),
                        fmt(gf_closed_form(pf, *tt, *x, zv, tol)?),
                        fmt(gf_partial_sum(pf, *tt, *x, zv, n, tol)?),
                        fmt(gf_tail_bound(zv, n)),
                    ]);
                }
                return Ok(t);
            }
            let w = laplace_partial_sums(&LaplaceQuery::new(pf, *tt, n).at(*x), tol)?;
            match grid {
                Some(nodes) => {
                    if *x != 1.0 {
                        return Err(CliError::Usage("--grid compares at x = 1 only".into()));
                    }
                    let sol = laplace_oracle_grid(pf, *tt, n, *nodes)?;
                    let mut t = Table::new(["n", "w", "w_grid", "difference"]);
                    for (k, wk) in w.iter().enumerate() {
                        let gk = sol.at_one(k);
                        t.push(vec![json!(k), fmt(*wk), fmt(gk), fmt((wk - gk).abs())]);
                    }
                    Ok(t)
                }
                None => {
                    let mut t = Table::new(["n", "w"]);
                    for (k, wk) in w.iter().enumerate() {
                        t.push(vec![json!(k), fmt(*wk)]);
                    }
                    Ok(t)
                }
            }
        }
        Command::Martingale { family, x } => {
            let n = need_n(g)?;
            let pf = cfg.p.p_f64();
            let tol = cfg.tolerances.quad_rel_tol;
            let fam = make_family(*family, pf, n, tol)?;
            let xs: Vec<f64> = if x.is_empty() {
                (1..=9).map(|i| i as f64 / 10.0).collect()
            } else {
                x.clone()
            };
            let mut t = Table::new(["n", "x", "f", "residual"]);
            for k in 0..=n {
                for &xv in &xs {
                    let residual = if k == 0 {
                        Value::Null
                    } else {
                        json!(format_f64(martingale_residual(&fam, k, xv, tol)?))
                    };
                    t.push(vec![json!(k), json!(xv), json!(format_f64(fam.eval(k, xv)?)), residual]);
                }
            }
            Ok(t)
        }
        Command::Simulate | Command::Verify => unreachable!("handled by execute"),
    }
}

fn make_family(kind: FamilyArg, p: f64, n_max: usize, rel_tol: f64) -> CliResult<MartingaleFamily> {
    Ok(match kind {
        FamilyArg::Example => MartingaleFamily::example(p)?,
        FamilyArg::LogSeed => {
            let cap = if p >= 1.0 { P_ONE_DOMAIN_CAP } else { 1.0 };
            build_family(SeedFunction::log_seed(p), p, n_max, cap, rel_tol)?
        }
    })
}

fn verification_table(report: &staircase::verify::VerificationReport) -> Table {
    let mut t = Table::new([
        "section", "name", "pass", "skipped", "observed", "reference", "tolerance", "detail",
    ]);
    for s in &report.sections {
        for c in &s.checks {
            t.push(vec![
                json!(s.name),
                json!(c.name),
                json!(c.pass),
                json!(c.skipped),
                json!(c.observed),
                json!(c.reference),
                json!(c.tolerance.map(format_f64)),
                json!(c.detail),
            ]);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_literals() {
        assert_eq!(parse_exact_literal("0.9"), Some(Rational::from_ratio(9, 10)));
        assert_eq!(parse_exact_literal("-2.5e-3"), Some(Rational::from_ratio(-1, 400)));
        assert_eq!(parse_exact_literal("1.25E2"), Some(Rational::from_ratio(125, 1)));
        assert_eq!(parse_exact_literal(".5"), Some(Rational::from_ratio(1, 2)));
        assert_eq!(parse_exact_literal("3/4"), Some(Rational::from_ratio(3, 4)));
        assert_eq!(parse_exact_literal("7"), Some(Rational::from_ratio(7, 1)));
        for bad in ["", ".", "1.2.3", "--1", "abc", "1e", "0x10"] {
            assert_eq!(parse_exact_literal(bad), None, "{bad}");
        }
    }

    #[test]
    fn mode_inference() {
        assert_eq!(infer_mode("1/2"), NumericMode::ExactRational);
        assert_eq!(infer_mode("1"), NumericMode::ExactRational);
        assert_eq!(infer_mode("0.3"), NumericMode::Float64);
    }
}
