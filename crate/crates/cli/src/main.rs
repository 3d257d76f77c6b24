use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use qblue_core::estimators::{
    estimate_dc_known_sigma, estimate_dc_unknown_sigma, estimate_sine, fold_coherent,
};
use qblue_core::montecarlo::{
    crlb_sweep, fmt_sig, linear_grid, run_sweep, with_pool, write_crlb_csv, EstimatorKind,
    ModelKind, Stimulus, SweepConfig,
};
use qblue_core::quantizer::infer_step;
use qblue_core::rng::derive_seed;
use qblue_core::{
    CodeHistogram, DcModelKnownSigma, EstimateReport, InlProfile, QuantizerSpec, SineDesign,
};

/// Stream index of the INL realization under a sweep's master seed.
const INL_STREAM: u64 = u64::MAX;

#[derive(Parser)]
#[command(
    name = "qblue",
    version,
    about = "Quantile-based estimation from quantized records"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the transition levels of a uniform quantizer, optionally with INL.
    GenQuantizer(GenQuantizerArgs),
    /// Estimate model parameters from a record of output codes.
    Estimate(EstimateArgs),
    /// Run a Monte Carlo sweep and write summary statistics.
    Sweep(SweepArgs),
    /// Tabulate the square root of the Cramér–Rao bound for a DC input.
    Crlb(CrlbArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Dc1,
    Dc2,
    Sine3,
}

impl From<Model> for ModelKind {
    fn from(m: Model) -> Self {
        match m {
            Model::Dc1 => ModelKind::Dc1,
            Model::Dc2 => ModelKind::Dc2,
            Model::Sine3 => ModelKind::Sine3,
        }
    }
}

#[derive(Args)]
struct GenQuantizerArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=24))]
    bits: u32,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    range_lo: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    range_hi: f64,
    /// INL half-width in units of Δ.
    #[arg(long, default_value_t = 0.0)]
    inl_half_width: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// Transition levels, `index,transition_volts` CSV.
    #[arg(long)]
    levels: PathBuf,
    /// Output codes, `index,code` CSV.
    #[arg(long)]
    samples: PathBuf,
    /// Noise standard deviation in volts (dc1, sine3).
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    samples_per_period: Option<usize>,
    #[arg(long)]
    periods: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=24))]
    bits: u32,
    /// σ/Δ.
    #[arg(long)]
    sigma_norm: f64,
    /// `lo:hi:step` or a comma-separated list of θ/Δ; three values for sine3.
    #[arg(long, allow_hyphen_values = true)]
    theta_grid: String,
    /// Record lengths for dc models, comma-separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long)]
    samples_per_period: Option<usize>,
    #[arg(long)]
    periods: Option<usize>,
    #[arg(long, default_value_t = qblue_core::montecarlo::DEFAULT_RECORDS, value_parser = at_least_one)]
    records: usize,
    /// INL half-width in units of Δ.
    #[arg(long, default_value_t = 0.0)]
    inl_half_width: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Comma-separated subset of quantile, mean, lse.
    #[arg(long, value_delimiter = ',')]
    estimators: Vec<String>,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CrlbArgs {
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=24))]
    bits: u32,
    #[arg(long)]
    sigma_norm: f64,
    #[arg(long)]
    n: u64,
    #[arg(long, allow_hyphen_values = true)]
    theta_grid: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn at_least_one(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected an integer >= 1, got `{s}`")),
    }
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| {
        f64::from_str(s.trim()).map_err(|_| anyhow!("invalid number `{s}` in theta grid"))
    };
    match parts.len() {
        1 => text.split(',').map(num).collect(),
        3 => Ok(linear_grid(num(parts[0])?, num(parts[1])?, num(parts[2])?)?),
        _ => bail!("theta grid must be lo:hi:step or a comma-separated list"),
    }
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var("QBLUE_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => bail!("QBLUE_THREADS must be an integer >= 1, got `{v}`"),
        },
        Err(_) => Ok(None),
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(
            std::fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

/// Read an `index,code` CSV, checking every code against `levels`.
fn read_samples(path: &Path, levels: usize) -> Result<Vec<usize>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let headers = reader.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "index" || &headers[1] != "code" {
        bail!("{}: header must be `index,code`", path.display());
    }
    let mut codes = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let line = row + 2;
        let record = record.with_context(|| format!("{}: line {line}", path.display()))?;
        let code: i64 = record
            .get(1)
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| anyhow!("{}: line {line}: bad code", path.display()))?;
        if code < 0 || code as usize >= levels {
            bail!(
                "{}: line {line}: code {code} outside [0, {}]",
                path.display(),
                levels - 1
            );
        }
        codes.push(code as usize);
    }
    if codes.is_empty() {
        bail!("{}: no samples", path.display());
    }
    Ok(codes)
}

fn gen_quantizer(args: GenQuantizerArgs) -> Result<()> {
    let nominal = QuantizerSpec::uniform(args.bits, args.range_lo, args.range_hi)?;
    let spec = nominal.with_inl(&InlProfile::uniform(args.inl_half_width, args.seed))?;
    spec.save_transitions(&args.out)?;
    println!("levels={} step={}", spec.levels(), fmt_sig(spec.step()));
    Ok(())
}

fn print_report(names: &[&str], report: &EstimateReport) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "parameter,estimate,std_dev,fallback,lambda")?;
    for ((name, v), s) in names.iter().zip(&report.theta_hat).zip(report.std_devs()) {
        writeln!(
            out,
            "{name},{},{},{},{}",
            fmt_sig(*v),
            fmt_sig(s),
            report.fallback,
            report.lambda_used
        )?;
    }
    Ok(())
}

fn estimate(args: EstimateArgs) -> Result<()> {
    let transitions = qblue_core::quantizer::read_transition_file(&args.levels)?;
    let step = infer_step(&transitions).unwrap_or(1.0);
    let spec = QuantizerSpec::from_transitions(step, transitions)?;
    let codes = read_samples(&args.samples, spec.levels())?;
    let need_sigma = || {
        args.sigma
            .ok_or_else(|| anyhow!("--sigma is required for this model"))
    };
    match args.model {
        Model::Dc1 => {
            let model = DcModelKnownSigma::new(need_sigma()?)?;
            let hist = CodeHistogram::from_codes(codes, spec.levels())?;
            print_report(&["theta1"], &estimate_dc_known_sigma(&hist, &spec, &model)?)
        }
        Model::Dc2 => {
            let hist = CodeHistogram::from_codes(codes, spec.levels())?;
            print_report(
                &["theta1", "theta2"],
                &estimate_dc_unknown_sigma(&hist, &spec)?,
            )
        }
        Model::Sine3 => {
            let sigma = need_sigma()?;
            let m = args
                .samples_per_period
                .ok_or_else(|| anyhow!("--samples-per-period is required for sine3"))?;
            let periods = args
                .periods
                .ok_or_else(|| anyhow!("--periods is required for sine3"))?;
            let design = SineDesign::canonical(m, periods, sigma)?;
            let folded = fold_coherent(&codes, m, periods, spec.levels())?;
            print_report(
                &["theta0", "theta1", "theta2"],
                &estimate_sine(&folded, &design, &spec)?,
            )
        }
    }
}

fn sweep(args: SweepArgs) -> Result<()> {
    let model: ModelKind = args.model.into();
    let grid = parse_grid(&args.theta_grid)?;
    let stimulus = match model {
        ModelKind::Sine3 => {
            let [a, b, c] = grid[..] else {
                bail!("sine3 needs exactly three theta values");
            };
            Stimulus::Sine {
                theta: [a, b, c],
                samples_per_period: args
                    .samples_per_period
                    .ok_or_else(|| anyhow!("--samples-per-period is required for sine3"))?,
                periods: args
                    .periods
                    .ok_or_else(|| anyhow!("--periods is required for sine3"))?,
            }
        }
        _ => {
            if args.n.is_empty() {
                bail!("--n is required for dc models");
            }
            Stimulus::Dc {
                theta_grid: grid,
                record_lengths: args.n.clone(),
            }
        }
    };
    let estimators = if args.estimators.is_empty() {
        match model {
            ModelKind::Sine3 => vec![EstimatorKind::Quantile, EstimatorKind::Lse],
            _ => vec![EstimatorKind::Quantile, EstimatorKind::Mean],
        }
    } else {
        args.estimators
            .iter()
            .map(|e| e.parse::<EstimatorKind>())
            .collect::<Result<_, _>>()?
    };
    let config = SweepConfig {
        model,
        bits: args.bits,
        sigma_norm: args.sigma_norm,
        stimulus,
        records: args.records,
        inl: InlProfile::uniform(args.inl_half_width, derive_seed(args.seed, &[INL_STREAM])),
        seed: args.seed,
        estimators,
    };
    config.validate()?;
    let threads = threads_from_env()?;
    let result = with_pool(threads, || run_sweep(&config))?;
    result.write_csv(output(&args.out)?)?;
    Ok(())
}

fn crlb(args: CrlbArgs) -> Result<()> {
    let grid = parse_grid(&args.theta_grid)?;
    if args.n == 0 {
        bail!("--n must be positive");
    }
    let rows = crlb_sweep(args.bits, args.sigma_norm, args.n, &grid)?;
    write_crlb_csv(&rows, output(&args.out)?)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", line.trim());
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::GenQuantizer(a) => gen_quantizer(a),
        Command::Estimate(a) => estimate(a),
        Command::Sweep(a) => sweep(a),
        Command::Crlb(a) => crlb(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let chain: Vec<String> = e.chain().map(|c| c.to_string()).collect();
            eprintln!("error: {}", chain.join(": ").replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
