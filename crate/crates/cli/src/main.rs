//! `coulomb-sharp`: spectra, sharp constants, verification sweeps and figure
//! data for the shifted Coulomb Hamiltonian.
//!
//! Exit codes: 0 success, 1 mathematical failure or inconclusive check,
//! 2 usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use coulomb_sharp::exact::hpr::{self, digits_to_bits};
use coulomb_sharp::exact::{decimal_string, fraction_string, parse_rational};
use coulomb_sharp::figures::{self, FigureId, Grid};
use coulomb_sharp::optima::{a_star, locate_t_star, q_star, StarResult};
use coulomb_sharp::spectrum::{counting_function, levels, SpectrumParams};
use coulomb_sharp::verification::{self, check_lt_general_gamma, CheckRecord, Suite, SuiteOptions};
use coulomb_sharp::{BigRational, Error, HighPrecisionReal, RootBracket, DEFAULT_PRECISION};

const PRECISION_ENV: &str = "COULOMB_SHARP_PRECISION";

#[derive(Parser, Debug)]
#[command(name = "coulomb-sharp", version, about = "Exact spectral inequalities for the shifted Coulomb Hamiltonian")]
struct Cli {
    /// JSON file with sweep settings (d_values, eta_grid, gamma, suites, output_path, precision).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Significant digits for non-rational quantities.
    #[arg(long, global = true)]
    precision: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Negative eigenvalues, multiplicities and the counting function.
    Spectrum {
        #[arg(long)]
        d: u32,
        /// `κ/√Λ` as "P/Q" or an exact decimal.
        #[arg(long, value_parser = rational_arg)]
        eta: BigRational,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Sharp constants and the maximizer bracket.
    Constants {
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum)]
        which: Which,
        /// Bracket width for t-star.
        #[arg(long, value_parser = rational_arg, default_value = "1/1000")]
        tol: BigRational,
    },
    /// Run a verification suite and write a JSON-lines report.
    Verify {
        #[arg(long, value_parser = suite_arg)]
        suite: Option<String>,
        /// Dimension range "A..B" (inclusive).
        #[arg(long, value_parser = range_arg)]
        d_range: Option<(u32, u32)>,
        /// Step of the η grids.
        #[arg(long, value_parser = rational_arg)]
        eta_step: Option<BigRational>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export figure data as CSV.
    Figure {
        #[arg(long, value_parser = figure_arg)]
        which: FigureId,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = rational_arg)]
        start: Option<BigRational>,
        #[arg(long, value_parser = rational_arg)]
        stop: Option<BigRational>,
        #[arg(long, value_parser = rational_arg)]
        step: Option<BigRational>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    QStar,
    AStar,
    TStar,
}

fn rational_arg(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn suite_arg(s: &str) -> Result<String, String> {
    s.parse::<Suite>()
        .map(|_| s.to_string())
        .map_err(|_| format!("unknown suite {s:?}; expected one of {}", Suite::NAMES.join(", ")))
}

fn figure_arg(s: &str) -> Result<FigureId, String> {
    s.parse()
        .map_err(|_| format!("unknown figure {s:?}; expected one of {}", FigureId::NAMES.join(", ")))
}

fn range_arg(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let a: u32 = a.trim().parse().map_err(|_| format!("bad lower bound {a:?}"))?;
    let b: u32 = b.trim().parse().map_err(|_| format!("bad upper bound {b:?}"))?;
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok((a, b))
}

/// An exact rational given in JSON either as a string or as a number literal.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RationalField {
    Text(String),
    Number(serde_json::Number),
}

impl RationalField {
    fn value(&self) -> Result<BigRational, Error> {
        match self {
            RationalField::Text(s) => parse_rational(s),
            RationalField::Number(n) => parse_rational(&n.to_string()),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EtaGrid {
    start: RationalField,
    stop: RationalField,
    step: RationalField,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SweepConfig {
    d_values: Vec<u32>,
    eta_grid: Option<EtaGrid>,
    gamma: Option<RationalField>,
    suites: Vec<String>,
    output_path: Option<PathBuf>,
    precision: Option<u32>,
}

struct Usage(String);

enum Failure {
    Usage(String),
    Math(String),
}

impl From<Usage> for Failure {
    fn from(u: Usage) -> Self {
        Failure::Usage(u.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Precondition(_) => Failure::Usage(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

fn load_config(path: &Path) -> Result<SweepConfig, Usage> {
    let text = fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    let cfg: SweepConfig =
        serde_json::from_str(&text).map_err(|e| Usage(format!("bad config {}: {e}", path.display())))?;
    if let Some(g) = &cfg.eta_grid {
        grid_from(g)?;
    }
    for s in &cfg.suites {
        suite_arg(s).map_err(Usage)?;
    }
    Ok(cfg)
}

fn grid_from(g: &EtaGrid) -> Result<Grid, Usage> {
    let v = |f: &RationalField| f.value().map_err(|e| Usage(e.to_string()));
    Grid::new(v(&g.start)?, v(&g.stop)?, v(&g.step)?).map_err(|e| Usage(e.to_string()))
}

fn env_precision() -> Result<Option<u32>, Usage> {
    match std::env::var(PRECISION_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Usage(format!("{PRECISION_ENV} must be a positive integer, got {s:?}"))),
        Err(_) => Ok(None),
    }
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::Usage(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_atomic(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn cmd_spectrum(d: u32, eta: BigRational, format: Format) -> Result<String, Failure> {
    let p = SpectrumParams::new(d, eta.clone())?;
    let lv = levels(&p);
    let n = counting_function(&p);
    Ok(match format {
        Format::Json => {
            let rows: Vec<Value> = lv
                .iter()
                .map(|l| {
                    json!({
                        "j": l.j,
                        "mu": l.mu.to_string(),
                        "lambda": fraction_string(&l.lambda),
                        "lambda_decimal": decimal_string(&l.lambda, 15),
                    })
                })
                .collect();
            let v = json!({"d": d, "eta": fraction_string(&eta), "levels": rows, "N": n.to_string()});
            format!("{}\n", serde_json::to_string(&v).expect("json"))
        }
        Format::Text => {
            let mut s = format!("d = {d}, eta = {}\n", fraction_string(&eta));
            if lv.is_empty() {
                s.push_str("empty spectrum\n");
            } else {
                s.push_str("j\tmu\tlambda/Lambda\n");
                for l in &lv {
                    s.push_str(&format!("{}\t{}\t{}\n", l.j, l.mu, fraction_string(&l.lambda)));
                }
            }
            s.push_str(&format!("N = {n}\n"));
            s
        }
    })
}

fn bracket_json(b: &RootBracket) -> Value {
    json!({
        "lower": fraction_string(&b.lower),
        "upper": fraction_string(&b.upper),
        "lower_decimal": decimal_string(&b.lower, 15),
        "upper_decimal": decimal_string(&b.upper, 15),
    })
}

fn star_json(which: &str, r: &StarResult, precision: u32) -> Result<Value, Failure> {
    let (value_decimal, value_hp) = match &r.value {
        Some(v) => (decimal_string(v, 15), None),
        None => {
            let sq = r.value_squared.clone();
            let h = HighPrecisionReal::evaluate(precision.max(15), |digits| Ok(hpr::sqrt(&sq, digits_to_bits(digits))))?;
            let hp = HighPrecisionReal::evaluate(precision, |digits| Ok(hpr::sqrt(&sq, digits_to_bits(digits))))?;
            (decimal_string(h.value(), 15), Some(hp.to_decimal()))
        }
    };
    Ok(json!({
        "d": r.d,
        "which": which,
        "argmax_ell": r.argmax_ell,
        "value": r.value.as_ref().map(fraction_string),
        "value_decimal": value_decimal,
        "value_hp": value_hp,
        "value_squared": fraction_string(&r.value_squared),
        "value_squared_decimal": decimal_string(&r.value_squared, 15),
        "candidate_window": [r.candidate_window.0, r.candidate_window.1],
        "maximizer_bracket": r.maximizer_bracket.as_ref().map(bracket_json),
        "ties": r.ties,
        "notes": r.notes,
    }))
}

fn cmd_constants(d: u32, which: Which, tol: &BigRational, precision: u32) -> Result<String, Failure> {
    if d < 3 {
        return Err(Failure::Usage(format!("d must be at least 3, got {d}")));
    }
    let v = match which {
        Which::QStar => star_json("q-star", &q_star(d)?, precision)?,
        Which::AStar => star_json("a-star", &a_star(d)?, precision)?,
        Which::TStar => {
            let b = locate_t_star(d, tol)?;
            json!({
                "d": d,
                "which": "t-star",
                "tol": fraction_string(tol),
                "bracket": bracket_json(&b),
                "width": fraction_string(&b.width()),
            })
        }
    };
    Ok(format!("{}\n", serde_json::to_string(&v).expect("json")))
}

struct VerifyPlan {
    suites: Vec<Suite>,
    opts: SuiteOptions,
    gamma: Option<BigRational>,
    d_values: Vec<u32>,
    eta_points: Vec<BigRational>,
    out: Option<PathBuf>,
}

fn run_verify(plan: &VerifyPlan) -> Result<(String, usize, usize), Failure> {
    let mut records: Vec<CheckRecord> = Vec::new();
    for s in &plan.suites {
        records.extend(verification::run_suite(*s, &plan.opts)?);
    }
    if let Some(g) = &plan.gamma {
        for &d in &plan.d_values {
            for eta in &plan.eta_points {
                records.push(check_lt_general_gamma(d, eta, g, plan.opts.precision)?);
            }
        }
    }
    let mut text = String::new();
    for r in &records {
        text.push_str(&r.to_json_line());
        text.push('\n');
    }
    let failed = records.iter().filter(|r| !r.passed()).count();
    Ok((text, failed, records.len()))
}

fn precision_for(cli: &Cli, cfg: &SweepConfig) -> Result<u32, Usage> {
    let p = cli
        .precision
        .or(cfg.precision)
        .or(env_precision()?)
        .unwrap_or(DEFAULT_PRECISION);
    if p == 0 {
        return Err(Usage("precision must be positive".into()));
    }
    Ok(p)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => SweepConfig::default(),
    };
    let precision = precision_for(&cli, &cfg)?;
    match cli.command {
        Command::Spectrum { d, eta, format } => {
            print!("{}", cmd_spectrum(d, eta, format)?);
            Ok(true)
        }
        Command::Constants { d, which, tol } => {
            print!("{}", cmd_constants(d, which, &tol, precision)?);
            Ok(true)
        }
        Command::Verify {
            suite,
            d_range,
            eta_step,
            out,
        } => {
            let names: Vec<String> = match suite {
                Some(s) => vec![s],
                None if !cfg.suites.is_empty() => cfg.suites.clone(),
                None => vec!["all".to_string()],
            };
            let suites = names.iter().map(|s| s.parse::<Suite>()).collect::<Result<Vec<_>, _>>()?;
            let (d_lo, d_hi) = match d_range {
                Some(r) => r,
                None if !cfg.d_values.is_empty() => (
                    *cfg.d_values.iter().min().expect("nonempty"),
                    *cfg.d_values.iter().max().expect("nonempty"),
                ),
                None => (SuiteOptions::default().d_lo, SuiteOptions::default().d_hi),
            };
            let grid = cfg.eta_grid.as_ref().map(grid_from).transpose()?;
            let eta_step = eta_step
                .or_else(|| grid.as_ref().map(|g| g.step.clone()))
                .unwrap_or_else(|| SuiteOptions::default().eta_step);
            let gamma = cfg.gamma.as_ref().map(|g| g.value()).transpose()?;
            let plan = VerifyPlan {
                suites,
                opts: SuiteOptions {
                    d_lo,
                    d_hi,
                    eta_step,
                    precision,
                },
                gamma,
                d_values: if cfg.d_values.is_empty() { (d_lo..=d_hi).collect() } else { cfg.d_values.clone() },
                eta_points: grid.map(|g| g.points()).unwrap_or_default(),
                out: out.or(cfg.output_path.clone()),
            };
            let (text, failed, n) = run_verify(&plan)?;
            emit(plan.out.as_deref(), &text)?;
            eprintln!("{n} records, {failed} not passing");
            Ok(failed == 0)
        }
        Command::Figure {
            which,
            out,
            start,
            stop,
            step,
        } => {
            let base = match &cfg.eta_grid {
                Some(g) if which == FigureId::LtD3 => grid_from(g)?,
                _ => Grid::default_for(which),
            };
            let grid = Grid::new(
                start.unwrap_or(base.start),
                stop.unwrap_or(base.stop),
                step.unwrap_or(base.step),
            )?;
            let ds = figures::build(which, &grid)?;
            let out = out.or(cfg.output_path.clone());
            emit(out.as_deref(), &ds.to_csv())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Math(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
