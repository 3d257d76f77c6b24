//! Reproducible Monte Carlo sweeps over DC levels, record lengths and
//! coherent sinewave records.
//!
//! Record `r` of grid point `g` and record length `j` draws its noise from
//! the stream `derive_seed(seed, [g, j, r])` (see [`crate::rng`]). Records
//! are simulated and estimated in parallel, collected in record order and
//! summed sequentially, so a sweep gives bit-identical results for any
//! number of worker threads.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::counting::CodeHistogram;
use crate::error::{Error, Result};
use crate::estimators::{
    arithmetic_mean, crlb_dc, estimate_dc_known_sigma, estimate_dc_unknown_sigma, estimate_sine,
    fold_coherent, lse_sinefit, DcModelKnownSigma, EstimateReport, SineDesign,
};
use crate::quantizer::{InlProfile, QuantizerSpec};
use crate::rng::{derive_seed, NoiseSource};

/// Records per grid point used when a caller does not choose.
pub const DEFAULT_RECORDS: usize = 2000;

/// Full-scale interval of the simulated quantizer.
pub const FULL_SCALE: (f64, f64) = (-1.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// DC level, known noise σ.
    Dc1,
    /// DC level and noise σ.
    Dc2,
    /// Coherent sinewave, known noise σ.
    Sine3,
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dc1" => Ok(Self::Dc1),
            "dc2" => Ok(Self::Dc2),
            "sine3" => Ok(Self::Sine3),
            other => Err(Error::InvalidArgument(format!(
                "unknown model `{other}` (expected dc1, dc2 or sine3)"
            ))),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Dc1 => "dc1",
            Self::Dc2 => "dc2",
            Self::Sine3 => "sine3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorKind {
    Quantile,
    Mean,
    Lse,
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quantile" => Ok(Self::Quantile),
            "mean" => Ok(Self::Mean),
            "lse" => Ok(Self::Lse),
            other => Err(Error::InvalidArgument(format!(
                "unknown estimator `{other}` (expected quantile, mean or lse)"
            ))),
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Quantile => "quantile",
            Self::Mean => "mean",
            Self::Lse => "lse",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stimulus {
    /// Constant inputs θ/Δ, each simulated at every record length.
    Dc {
        theta_grid: Vec<f64>,
        record_lengths: Vec<usize>,
    },
    /// Coherent sinewave with parameters θ/Δ = (offset, cos, sin).
    Sine {
        theta: [f64; 3],
        samples_per_period: usize,
        periods: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub model: ModelKind,
    pub bits: u32,
    /// σ/Δ.
    pub sigma_norm: f64,
    pub stimulus: Stimulus,
    pub records: usize,
    /// INL applied once per sweep; every record sees the same transitions,
    /// which the quantile estimator is assumed to know.
    pub inl: InlProfile,
    pub seed: u64,
    pub estimators: Vec<EstimatorKind>,
}

impl SweepConfig {
    /// DC sweep with desk-scale defaults and no INL.
    pub fn dc(
        model: ModelKind,
        sigma_norm: f64,
        theta_grid: Vec<f64>,
        record_lengths: Vec<usize>,
    ) -> Self {
        Self {
            model,
            bits: 10,
            sigma_norm,
            stimulus: Stimulus::Dc {
                theta_grid,
                record_lengths,
            },
            records: DEFAULT_RECORDS,
            inl: InlProfile::none(),
            seed: 1,
            estimators: vec![EstimatorKind::Quantile, EstimatorKind::Mean],
        }
    }

    pub fn sine(
        sigma_norm: f64,
        theta: [f64; 3],
        samples_per_period: usize,
        periods: usize,
    ) -> Self {
        Self {
            model: ModelKind::Sine3,
            bits: 10,
            sigma_norm,
            stimulus: Stimulus::Sine {
                theta,
                samples_per_period,
                periods,
            },
            records: DEFAULT_RECORDS,
            inl: InlProfile::none(),
            seed: 1,
            estimators: vec![EstimatorKind::Quantile, EstimatorKind::Lse],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.records < 1 {
            return bad("records must be at least 1".into());
        }
        if !(self.sigma_norm.is_finite() && self.sigma_norm > 0.0) {
            return bad(format!(
                "sigma_norm must be positive, got {}",
                self.sigma_norm
            ));
        }
        if self.estimators.is_empty() {
            return bad("no estimator selected".into());
        }
        let allowed: &[EstimatorKind] = match self.model {
            ModelKind::Dc1 | ModelKind::Dc2 => &[EstimatorKind::Quantile, EstimatorKind::Mean],
            ModelKind::Sine3 => &[EstimatorKind::Quantile, EstimatorKind::Lse],
        };
        if let Some(e) = self.estimators.iter().find(|e| !allowed.contains(e)) {
            return bad(format!(
                "estimator {e} is not available for model {}",
                self.model
            ));
        }
        match (&self.stimulus, self.model) {
            (
                Stimulus::Dc {
                    theta_grid,
                    record_lengths,
                },
                ModelKind::Dc1 | ModelKind::Dc2,
            ) => {
                if theta_grid.is_empty() || theta_grid.iter().any(|t| !t.is_finite()) {
                    return bad("theta grid must be non-empty and finite".into());
                }
                if record_lengths.is_empty() || record_lengths.contains(&0) {
                    return bad("record lengths must be non-empty and positive".into());
                }
            }
            (
                Stimulus::Sine {
                    theta,
                    samples_per_period,
                    periods,
                },
                ModelKind::Sine3,
            ) => {
                if theta.iter().any(|t| !t.is_finite()) {
                    return bad("sine parameters must be finite".into());
                }
                SineDesign::canonical(*samples_per_period, *periods, 1.0)?;
            }
            _ => return bad(format!("stimulus does not match model {}", self.model)),
        }
        QuantizerSpec::uniform(self.bits, FULL_SCALE.0, FULL_SCALE.1)?;
        self.inl.validate()
    }

    /// Nominal quantizer with the sweep's INL applied.
    pub fn quantizer(&self) -> Result<QuantizerSpec> {
        QuantizerSpec::uniform(self.bits, FULL_SCALE.0, FULL_SCALE.1)?.with_inl(&self.inl)
    }
}

/// One line of a sweep summary. Errors are normalized to Δ, `mse` to Δ².
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// DC level (grid point) or true sine parameter, over Δ.
    pub theta_over_delta: f64,
    /// Record length (DC) or samples per phase (sine).
    pub n: usize,
    /// Estimator label, e.g. `quantile`, `mean`, `lse_theta1`. Rows
    /// labelled `quantile_sigma` hold the error of the dc2 noise estimate,
    /// (θ̂₂ − σ)/Δ, over records that did not fall back.
    pub estimator: String,
    pub mean_error: f64,
    pub std_error: f64,
    pub mse: f64,
    pub fallback_rate: f64,
    /// Records whose estimator returned an error; excluded from the
    /// statistics.
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn find(&self, estimator: &str, theta_over_delta: f64, n: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| {
            r.estimator == estimator
                && r.n == n
                && (r.theta_over_delta - theta_over_delta).abs() < 1e-9
        })
    }

    pub fn rows_for<'a>(&'a self, estimator: &'a str) -> impl Iterator<Item = &'a SweepRow> + 'a {
        self.rows.iter().filter(move |r| r.estimator == estimator)
    }

    /// CSV with header `theta_over_delta,n,estimator,mean_error,std_error,mse,fallback_rate`.
    pub fn write_csv<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "theta_over_delta",
            "n",
            "estimator",
            "mean_error",
            "std_error",
            "mse",
            "fallback_rate",
        ])?;
        for r in &self.rows {
            w.write_record([
                fmt_sig(r.theta_over_delta),
                r.n.to_string(),
                r.estimator.clone(),
                fmt_sig(r.mean_error),
                fmt_sig(r.std_error),
                fmt_sig(r.mse),
                fmt_sig(r.fallback_rate),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.write_csv(std::io::BufWriter::new(file))
            .map_err(|source| Error::Csv {
                path: path.to_path_buf(),
                source,
            })
    }
}

/// Format with 12 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{:.11e}", x);
    let v: f64 = s.parse().expect("formatted float");
    format!("{v}")
}

/// `lo, lo + step, …` up to `hi` inclusive, with points rounded to 12
/// decimal places so that e.g. `-0.45:0.45:0.05` contains `0` exactly.
pub fn linear_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && step.is_finite() && step > 0.0 && hi >= lo) {
        return Err(Error::InvalidArgument(format!(
            "invalid grid {lo}:{hi}:{step}"
        )));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| {
            let v = lo + i as f64 * step;
            let r = (v * 1e12).round() / 1e12;
            if r == 0.0 {
                0.0
            } else {
                r
            }
        })
        .collect())
}

/// `n` quantized samples of `theta + sigma·η`.
pub fn simulate_dc_record(
    theta: f64,
    sigma: f64,
    spec: &QuantizerSpec,
    n: usize,
    record_seed: u64,
) -> Vec<usize> {
    let mut src = NoiseSource::new(record_seed);
    (0..n)
        .map(|_| spec.quantize(theta + sigma * src.standard_normal()))
        .collect()
}

/// Coherent record: sample `m` is `s[m mod M] + σ·η[m]`, quantized.
pub fn simulate_sine_record(
    design: &SineDesign,
    theta: &[f64; 3],
    spec: &QuantizerSpec,
    record_seed: u64,
) -> Vec<usize> {
    let m = design.samples_per_period();
    let sigma = design.sigma();
    let signal: Vec<f64> = (0..m).map(|n| design.signal(theta, n)).collect();
    let mut src = NoiseSource::new(record_seed);
    (0..design.record_len())
        .map(|i| spec.quantize(signal[i % m] + sigma * src.standard_normal()))
        .collect()
}

/// Per-record outcome for one estimator output: error over Δ, or a failure.
#[derive(Debug, Clone, Copy)]
enum Outcome {
    Value {
        error: f64,
        fallback: bool,
    },
    Failed,
    /// No value for this output in the record (θ₂ under fallback).
    Missing,
}

#[derive(Default)]
struct Accumulator {
    sum: f64,
    sum_sq: f64,
    count: usize,
    fallbacks: usize,
    failures: usize,
    records: usize,
}

impl Accumulator {
    fn push(&mut self, o: Outcome) {
        self.records += 1;
        match o {
            Outcome::Value { error, fallback } => {
                self.sum += error;
                self.sum_sq += error * error;
                self.count += 1;
                self.fallbacks += usize::from(fallback);
            }
            Outcome::Failed => self.failures += 1,
            Outcome::Missing => self.fallbacks += 1,
        }
    }

    fn row(&self, theta_over_delta: f64, n: usize, estimator: String) -> SweepRow {
        let c = self.count as f64;
        let (mean, std, mse) = if self.count == 0 {
            (f64::NAN, f64::NAN, f64::NAN)
        } else {
            let mean = self.sum / c;
            let mse = self.sum_sq / c;
            let var = if self.count > 1 {
                ((self.sum_sq - c * mean * mean) / (c - 1.0)).max(0.0)
            } else {
                0.0
            };
            (mean, var.sqrt(), mse.max(mean * mean))
        };
        SweepRow {
            theta_over_delta,
            n,
            estimator,
            mean_error: mean,
            std_error: std,
            mse,
            fallback_rate: self.fallbacks as f64 / self.records as f64,
            failures: self.failures,
        }
    }
}

fn dc_outcomes(
    config: &SweepConfig,
    spec: &QuantizerSpec,
    theta: f64,
    codes: &[usize],
) -> Vec<Outcome> {
    let d = spec.step();
    let sigma = config.sigma_norm * d;
    let mut out = Vec::with_capacity(3);
    let hist = CodeHistogram::from_codes(codes.iter().copied(), spec.levels());
    for &est in &config.estimators {
        match est {
            EstimatorKind::Mean => out.push(match arithmetic_mean(codes, spec) {
                Ok(v) => Outcome::Value {
                    error: (v - theta) / d,
                    fallback: false,
                },
                Err(_) => Outcome::Failed,
            }),
            EstimatorKind::Quantile => {
                let report = hist.as_ref().map_err(|_| ()).and_then(|h| {
                    match config.model {
                        ModelKind::Dc1 => {
                            estimate_dc_known_sigma(h, spec, &DcModelKnownSigma { sigma })
                        }
                        _ => estimate_dc_unknown_sigma(h, spec),
                    }
                    .map_err(|_| ())
                });
                match report {
                    Ok(r) => {
                        out.push(Outcome::Value {
                            error: (r.theta_hat[0] - theta) / d,
                            fallback: r.fallback,
                        });
                        if config.model == ModelKind::Dc2 {
                            out.push(match r.theta_hat.get(1) {
                                Some(s) => Outcome::Value {
                                    error: (s - sigma) / d,
                                    fallback: false,
                                },
                                None => Outcome::Missing,
                            });
                        }
                    }
                    Err(()) => {
                        out.push(Outcome::Failed);
                        if config.model == ModelKind::Dc2 {
                            out.push(Outcome::Failed);
                        }
                    }
                }
            }
            EstimatorKind::Lse => {}
        }
    }
    out
}

fn dc_labels(config: &SweepConfig) -> Vec<String> {
    let mut labels = Vec::new();
    for e in &config.estimators {
        labels.push(e.to_string());
        if *e == EstimatorKind::Quantile && config.model == ModelKind::Dc2 {
            labels.push("quantile_sigma".into());
        }
    }
    labels
}

/// Per-record estimates of the three sine parameters.
#[derive(Debug, Clone)]
pub struct SineRecordEstimate {
    pub quantile: Option<EstimateReport>,
    pub lse: Option<[f64; 3]>,
}

fn sine_estimate(
    config: &SweepConfig,
    design: &SineDesign,
    spec: &QuantizerSpec,
    codes: &[usize],
) -> SineRecordEstimate {
    let want = |k| config.estimators.contains(&k);
    let quantile = want(EstimatorKind::Quantile)
        .then(|| {
            fold_coherent(
                codes,
                design.samples_per_period(),
                design.periods(),
                spec.levels(),
            )
            .and_then(|f| estimate_sine(&f, design, spec))
            .ok()
        })
        .flatten();
    let lse = want(EstimatorKind::Lse)
        .then(|| lse_sinefit(codes, spec, design).ok())
        .flatten();
    SineRecordEstimate { quantile, lse }
}

fn sine_setup(config: &SweepConfig) -> Result<(SineDesign, [f64; 3], QuantizerSpec)> {
    let Stimulus::Sine {
        theta,
        samples_per_period,
        periods,
    } = config.stimulus
    else {
        return Err(Error::InvalidArgument("not a sine configuration".into()));
    };
    let spec = config.quantizer()?;
    let d = spec.step();
    let design = SineDesign::canonical(samples_per_period, periods, config.sigma_norm * d)?;
    Ok((design, [theta[0] * d, theta[1] * d, theta[2] * d], spec))
}

fn sine_records(
    config: &SweepConfig,
) -> Result<(SineDesign, [f64; 3], QuantizerSpec, Vec<SineRecordEstimate>)> {
    let (design, theta, spec) = sine_setup(config)?;
    let estimates = (0..config.records)
        .into_par_iter()
        .map(|r| {
            let codes = simulate_sine_record(
                &design,
                &theta,
                &spec,
                derive_seed(config.seed, &[0, 0, r as u64]),
            );
            sine_estimate(config, &design, &spec, &codes)
        })
        .collect();
    Ok((design, theta, spec, estimates))
}

/// Run a sweep on the current rayon pool.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    match &config.stimulus {
        Stimulus::Dc {
            theta_grid,
            record_lengths,
        } => run_dc_sweep(config, theta_grid, record_lengths),
        Stimulus::Sine { .. } => run_sine_sweep(config),
    }
}

/// Run a sweep on a dedicated pool of `threads` workers (all cores when
/// `None`). The result does not depend on the choice.
pub fn run_sweep_with_threads(config: &SweepConfig, threads: Option<usize>) -> Result<SweepResult> {
    with_pool(threads, || run_sweep(config))
}

/// Run `f` inside a rayon pool of `threads` workers.
pub fn with_pool<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> Result<T> + Send,
) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(Error::InvalidArgument(
                "thread count must be at least 1".into(),
            ));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    pool.install(f)
}

fn run_dc_sweep(config: &SweepConfig, grid: &[f64], lengths: &[usize]) -> Result<SweepResult> {
    let spec = config.quantizer()?;
    let d = spec.step();
    let sigma = config.sigma_norm * d;
    let labels = dc_labels(config);
    let mut rows = Vec::new();
    for (g, &t) in grid.iter().enumerate() {
        for (j, &n) in lengths.iter().enumerate() {
            let theta = t * d;
            let outcomes: Vec<Vec<Outcome>> = (0..config.records)
                .into_par_iter()
                .map(|r| {
                    let seed = derive_seed(config.seed, &[g as u64, j as u64, r as u64]);
                    let codes = simulate_dc_record(theta, sigma, &spec, n, seed);
                    dc_outcomes(config, &spec, theta, &codes)
                })
                .collect();
            let mut acc: Vec<Accumulator> = labels.iter().map(|_| Accumulator::default()).collect();
            for rec in outcomes {
                for (a, o) in acc.iter_mut().zip(rec) {
                    a.push(o);
                }
            }
            for (a, label) in acc.iter().zip(&labels) {
                rows.push(a.row(t, n, label.clone()));
            }
        }
    }
    Ok(SweepResult { rows })
}

fn run_sine_sweep(config: &SweepConfig) -> Result<SweepResult> {
    let (design, theta, spec, estimates) = sine_records(config)?;
    let d = spec.step();
    let n = design.periods();
    let mut rows = Vec::new();
    for &est in &config.estimators {
        for p in 0..3 {
            let mut acc = Accumulator::default();
            for e in &estimates {
                acc.push(match est {
                    EstimatorKind::Quantile => match &e.quantile {
                        Some(r) => Outcome::Value {
                            error: (r.theta_hat[p] - theta[p]) / d,
                            fallback: r.fallback,
                        },
                        None => Outcome::Failed,
                    },
                    _ => match &e.lse {
                        Some(v) => Outcome::Value {
                            error: (v[p] - theta[p]) / d,
                            fallback: false,
                        },
                        None => Outcome::Failed,
                    },
                });
            }
            rows.push(acc.row(theta[p] / d, n, format!("{est}_theta{p}")));
        }
    }
    Ok(SweepResult { rows })
}

/// Mean over records of the reconstructed-signal error ŝ[n] − s[n] at each
/// phase, over Δ.
#[derive(Debug, Clone, PartialEq)]
pub struct SineResidualProfile {
    pub quantile: Vec<f64>,
    pub lse: Vec<f64>,
    pub quantile_fallback_rate: f64,
    pub failures: usize,
}

impl SineResidualProfile {
    pub fn max_abs_quantile(&self) -> f64 {
        self.quantile.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_lse(&self) -> f64 {
        self.lse.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Residual profile of a sine sweep using both estimators.
pub fn sine_residual_profile(config: &SweepConfig) -> Result<SineResidualProfile> {
    let mut config = config.clone();
    config.estimators = vec![EstimatorKind::Quantile, EstimatorKind::Lse];
    config.validate()?;
    let (design, theta, spec, estimates) = sine_records(&config)?;
    let d = spec.step();
    let m = design.samples_per_period();
    let mut q = vec![0.0; m];
    let mut l = vec![0.0; m];
    let (mut nq, mut nl, mut fallbacks, mut failures) = (0usize, 0usize, 0usize, 0usize);
    for e in &estimates {
        match &e.quantile {
            Some(r) => {
                let t = [r.theta_hat[0], r.theta_hat[1], r.theta_hat[2]];
                for (n, acc) in q.iter_mut().enumerate() {
                    *acc += (design.signal(&t, n) - design.signal(&theta, n)) / d;
                }
                nq += 1;
                fallbacks += usize::from(r.fallback);
            }
            None => failures += 1,
        }
        match &e.lse {
            Some(t) => {
                for (n, acc) in l.iter_mut().enumerate() {
                    *acc += (design.signal(t, n) - design.signal(&theta, n)) / d;
                }
                nl += 1;
            }
            None => failures += 1,
        }
    }
    q.iter_mut().for_each(|v| *v /= nq.max(1) as f64);
    l.iter_mut().for_each(|v| *v /= nl.max(1) as f64);
    Ok(SineResidualProfile {
        quantile: q,
        lse: l,
        quantile_fallback_rate: fallbacks as f64 / estimates.len() as f64,
        failures,
    })
}

/// `(θ/Δ, √CRLB/Δ)` over a grid for an ideal `bits`-bit quantizer.
pub fn crlb_sweep(bits: u32, sigma_norm: f64, n: u64, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let spec = QuantizerSpec::uniform(bits, FULL_SCALE.0, FULL_SCALE.1)?;
    let d = spec.step();
    grid.iter()
        .map(|&t| Ok((t, crlb_dc(t * d, sigma_norm * d, &spec, n)?.sqrt() / d)))
        .collect()
}

/// CSV with header `theta_over_delta,sqrt_crlb_over_delta`.
pub fn write_crlb_csv<W: Write>(
    rows: &[(f64, f64)],
    out: W,
) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["theta_over_delta", "sqrt_crlb_over_delta"])?;
    for &(t, c) in rows {
        w.write_record([fmt_sig(t), fmt_sig(c)])?;
    }
    w.flush()?;
    Ok(())
}
