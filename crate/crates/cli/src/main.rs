//! Command-line surface: bond and option quoting, the four-variant price
//! table, path export, and the verification suites.

mod config;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{resolve, FileConfig};
use output::{emit, g17, sig6};
use sfmerton::model::{Contract, MarketState, ModelParams, OptionKind};
use sfmerton::simulate::{self, RngStream};
use sfmerton::{bond, pricing, verify};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(sfmerton::Error),
    Io(String),
    ChecksFailed,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Validation(e) => write!(f, "{e}"),
            CliError::Io(msg) => write!(f, "{msg}"),
            CliError::ChecksFailed => write!(f, "one or more check suites failed"),
        }
    }
}

impl From<sfmerton::Error> for CliError {
    fn from(e: sfmerton::Error) -> Self {
        CliError::Validation(e)
    }
}

#[derive(Parser)]
#[command(
    name = "sfmerton",
    version,
    about = "Bond and European option pricing under a subdiffusive fractional short-rate model",
    after_help = "Parameters may also come from a flat TOML config (--config); flags override file values."
)]
struct Cli {
    /// Flat key = value TOML file with the parameter keys (alpha, hurst,
    /// mu_r, sigma_r, mu_s, sigma_s, rho, r0, s0, strike, maturity, t).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Price a zero-coupon bond
    Bond(BondArgs),
    /// Price a European option (both t = 0 closed forms when t = 0)
    Price(PriceArgs),
    /// Four-variant call-price grid in the standard comparison layout
    Table(TableArgs),
    /// Simulate subordinated sample paths and export them as CSV
    Paths(PathsArgs),
    /// Run the verification suites (parity, reduction, oracle, PDE,
    /// boundary, Monte Carlo, table, morphology)
    Check(CheckArgs),
}

/// Model, market and contract flags shared by the pricing subcommands.
/// All of them mirror config-file keys one-to-one.
#[derive(Args, Default, Clone)]
struct ParamFlags {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    hurst: Option<f64>,
    #[arg(long)]
    mu_r: Option<f64>,
    #[arg(long)]
    sigma_r: Option<f64>,
    #[arg(long)]
    mu_s: Option<f64>,
    #[arg(long)]
    sigma_s: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long)]
    s0: Option<f64>,
    #[arg(long)]
    strike: Option<f64>,
    #[arg(long)]
    maturity: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Call,
    Put,
}

#[derive(Args)]
struct BondArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PriceArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[arg(long, value_enum, default_value = "call")]
    kind: KindArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// Stock grid: s-min..s-max in steps of s-step
    #[arg(long, default_value_t = 2.0)]
    s_min: f64,
    #[arg(long, default_value_t = 4.0)]
    s_max: f64,
    #[arg(long, default_value_t = 0.25)]
    s_step: f64,
    /// Comma-separated maturity column groups
    #[arg(long, default_value = "0.2,1")]
    maturities: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PathsArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// Physical-time horizon of each path
    #[arg(long, default_value_t = 1.0)]
    horizon: f64,
    /// Number of uniform physical-time steps (grid has n-steps + 1 points)
    #[arg(long, default_value_t = 256)]
    n_steps: usize,
    #[arg(long, default_value_t = 1)]
    n_paths: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Operational-time lattice step (default horizon / 2000)
    #[arg(long)]
    resolution: Option<f64>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Comma-separated suite names to run (default: all).
    /// Names: parity, reduction, oracle, pde-residual, boundary,
    /// monte-carlo, table, morphology.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = 20260810)]
    seed: u64,
}

/// Flags merged over the optional config file.
struct Resolved {
    flags: ParamFlags,
    file: FileConfig,
}

impl Resolved {
    fn get(&self, key: &str, default: Option<f64>) -> Result<f64, CliError> {
        let (flag, file) = match key {
            "alpha" => (self.flags.alpha, self.file.alpha),
            "hurst" => (self.flags.hurst, self.file.hurst),
            "mu_r" => (self.flags.mu_r, self.file.mu_r),
            "sigma_r" => (self.flags.sigma_r, self.file.sigma_r),
            "mu_s" => (self.flags.mu_s, self.file.mu_s),
            "sigma_s" => (self.flags.sigma_s, self.file.sigma_s),
            "rho" => (self.flags.rho, self.file.rho),
            "r0" => (self.flags.r0, self.file.r0),
            "s0" => (self.flags.s0, self.file.s0),
            "strike" => (self.flags.strike, self.file.strike),
            "maturity" => (self.flags.maturity, self.file.maturity),
            "t" => (self.flags.t, self.file.t),
            other => unreachable!("unknown key {other}"),
        };
        resolve(flag, file, default, key)
    }

    /// Model parameters with the rate/stock dynamics defaulting to zero;
    /// `alpha` and `hurst` are always required.
    fn raw_model_params(&self) -> Result<ModelParams, CliError> {
        Ok(ModelParams {
            alpha: self.get("alpha", None)?,
            hurst: self.get("hurst", None)?,
            mu_r: self.get("mu_r", Some(0.0))?,
            sigma_r: self.get("sigma_r", Some(0.0))?,
            mu_s: self.get("mu_s", Some(0.0))?,
            sigma_s: self.get("sigma_s", Some(0.0))?,
            rho: self.get("rho", Some(0.0))?,
        })
    }

    fn model_params(&self) -> Result<ModelParams, CliError> {
        Ok(self.raw_model_params()?.validated()?)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::ChecksFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Bond(args) => run_bond(Resolved { flags: args.params.clone(), file }, &args),
        Command::Price(args) => run_price(Resolved { flags: args.params.clone(), file }, &args),
        Command::Table(args) => run_table(Resolved { flags: args.params.clone(), file }, &args),
        Command::Paths(args) => run_paths(Resolved { flags: args.params.clone(), file }, &args),
        Command::Check(args) => run_check(&args),
    }
}

fn run_bond(resolved: Resolved, args: &BondArgs) -> Result<(), CliError> {
    let params = resolved.model_params()?;
    let r0 = resolved.get("r0", None)?;
    let maturity = resolved.get("maturity", None)?;
    let t = resolved.get("t", Some(0.0))?;
    let quote = bond::bond_price(&params, r0, t, maturity)?;
    let text = match args.format {
        Format::Text => format!(
            "price = {}\nf1    = {}\ntau   = {}\n",
            sig6(quote.price),
            sig6(quote.f1),
            sig6(quote.tau)
        ),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({
                "price": quote.price,
                "f1": quote.f1,
                "tau": quote.tau,
            }))
            .expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => format!(
            "price,f1,tau\n{},{},{}\n",
            g17(quote.price),
            g17(quote.f1),
            g17(quote.tau)
        ),
    };
    emit(args.out.as_deref(), &text)
}

fn run_price(resolved: Resolved, args: &PriceArgs) -> Result<(), CliError> {
    let params = resolved.model_params()?;
    let state = MarketState {
        short_rate: resolved.get("r0", None)?,
        stock: resolved.get("s0", None)?,
    };
    let contract = Contract {
        strike: resolved.get("strike", None)?,
        maturity: resolved.get("maturity", None)?,
        valuation_time: resolved.get("t", Some(0.0))?,
        kind: match args.kind {
            KindArg::Call => OptionKind::Call,
            KindArg::Put => OptionKind::Put,
        },
    };
    let quote = pricing::price(&params, &state, &contract)?;
    let text = match args.format {
        Format::Text => {
            let mut s = format!(
                "variant        = {}\nkind           = {}\nprice          = {}\nd1             = {}\nd2             = {}\nbond_price     = {}\ntotal_variance = {}\n",
                quote.variant,
                quote.kind,
                sig6(quote.price),
                sig6(quote.d1),
                sig6(quote.d2),
                sig6(quote.bond.price),
                sig6(quote.variance.total_variance),
            );
            if contract.valuation_time == 0.0 {
                let origin = pricing::price_at_origin(&params, &state, &contract)?;
                s.push_str(&format!(
                    "t=0 closed forms:\n  P0           = {}\n  r_bar        = {}\n  sigma_bar_sq = {}  (integral-backed, sigma_bar_sq * T = total variance)\n  price        = {}\n  alt form without the factor-2 cross/quadratic terms (see NOTES.md):\n  sigma_bar_sq = {}  ->  price = {}\n",
                    sig6(origin.p0),
                    sig6(origin.r_bar),
                    sig6(origin.sigma_bar_sq),
                    sig6(origin.price_bs_form),
                    sig6(origin.sigma_bar_sq_alt),
                    sig6(origin.price_alt),
                ));
            }
            s
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({
                "price": quote.price,
                "d1": quote.d1,
                "d2": quote.d2,
                "bond_price": quote.bond.price,
                "total_variance": quote.variance.total_variance,
                "variant": quote.variant.to_string(),
            }))
            .expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => format!(
            "price,d1,d2,bond_price,total_variance,variant\n{},{},{},{},{},{}\n",
            g17(quote.price),
            g17(quote.d1),
            g17(quote.d2),
            g17(quote.bond.price),
            g17(quote.variance.total_variance),
            quote.variant
        ),
    };
    emit(args.out.as_deref(), &text)
}

fn run_table(resolved: Resolved, args: &TableArgs) -> Result<(), CliError> {
    let params = resolved.model_params()?;
    let strike = resolved.get("strike", None)?;
    let r0 = resolved.get("r0", None)?;
    let t = resolved.get("t", Some(0.0))?;
    if !(args.s_step > 0.0 && args.s_max >= args.s_min) {
        return Err(CliError::Usage("need s-min <= s-max and s-step > 0".into()));
    }
    let n = ((args.s_max - args.s_min) / args.s_step + 0.5).floor() as usize + 1;
    let s_values: Vec<f64> = (0..n).map(|i| args.s_min + args.s_step * i as f64).collect();
    let maturities: Vec<f64> = args
        .maturities
        .split(',')
        .map(|m| {
            m.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad maturity `{m}`")))
        })
        .collect::<Result<_, _>>()?;
    let table = pricing::price_table(&params, &s_values, &maturities, strike, r0, t)?;
    let text = match args.format {
        Format::Text => table.to_text(),
        Format::Csv => table.to_csv(),
        Format::Json => {
            return Err(CliError::Usage(
                "table supports --format text or csv".into(),
            ))
        }
    };
    emit(args.out.as_deref(), &text)
}

fn run_paths(resolved: Resolved, args: &PathsArgs) -> Result<(), CliError> {
    // Simulation admits the wider alpha range, so skip pricing validation.
    let params = resolved.raw_model_params()?;
    let r0 = resolved.get("r0", None)?;
    let s0 = resolved.get("s0", None)?;
    if args.n_steps < 1 || args.n_paths < 1 {
        return Err(CliError::Usage("need n-steps >= 1 and n-paths >= 1".into()));
    }
    let t_grid: Vec<f64> = (0..=args.n_steps)
        .map(|i| args.horizon * i as f64 / args.n_steps as f64)
        .collect();
    let mut out = String::from(sfmerton::simulate::PathBundle::CSV_HEADER);
    out.push('\n');
    for path_id in 0..args.n_paths {
        let bundle = simulate::model_paths(
            &params,
            r0,
            s0,
            &t_grid,
            RngStream::with_stream(args.seed, path_id as u64),
            args.resolution,
        )?;
        bundle.write_csv_rows(path_id, &mut out);
    }
    emit(args.out.as_deref(), &out)
}

fn run_check(args: &CheckArgs) -> Result<(), CliError> {
    let selected: Vec<String> = match &args.suite {
        None => verify::SUITE_NAMES.iter().map(|s| s.to_string()).collect(),
        Some(list) => {
            let names: Vec<String> = list.split(',').map(|s| s.trim().to_string()).collect();
            for n in &names {
                if !verify::SUITE_NAMES.contains(&n.as_str()) {
                    return Err(CliError::Usage(format!(
                        "unknown suite `{n}` (expected one of {})",
                        verify::SUITE_NAMES.join(", ")
                    )));
                }
            }
            names
        }
    };
    let mut all_passed = true;
    for name in &selected {
        let report = match name.as_str() {
            "parity" => verify::parity_suite(args.seed),
            "reduction" => verify::reduction_suite(),
            "oracle" => verify::oracle_suite(args.seed ^ 0x51ce),
            "pde-residual" => verify::pde_suite(),
            "boundary" => verify::boundary_suite(),
            "monte-carlo" => verify::monte_carlo_suite(args.seed ^ 0x3c17),
            "table" => verify::table_suite(),
            "morphology" => verify::morphology_suite(args.seed ^ 0x6f17),
            _ => unreachable!("validated above"),
        };
        println!("{}", report.summary());
        for line in &report.details {
            println!("    {line}");
        }
        all_passed &= report.passed;
    }
    if all_passed {
        Ok(())
    } else {
        Err(CliError::ChecksFailed)
    }
}
