//! DC and sinewave parameter estimators from quantized records.
//!
//! The quantile estimators rest on the identity
//! `T[k] = s + σ·Φ⁻¹(cp[k])` between each transition level, the input value
//! `s` and the probability `cp[k]` that the output code is below `k`. With
//! `cp[k]` replaced by its empirical value the identity becomes a linear
//! model whose noise covariance is estimated from the same record, and the
//! parameters follow from the Gauss–Markov solver.
//!
//! | model | unknowns | rows | regressors | observation |
//! |-------|----------|------|-----------|-------------|
//! | DC, known σ | θ₁ | active k | `1` | `T[k] − σ·Φ⁻¹(ĉp[k])` |
//! | DC, unknown σ | γ = (1/θ₂, θ₁/θ₂) | active k | `(T[k], −1)` | `Φ⁻¹(ĉp[k])` |
//! | coherent sine | (θ₀, θ₁, θ₂) | active k per phase n | `(1, x₁[n], x₂[n])` | `T[k] − σ·Φ⁻¹(ĉp[k][n])` |
//!
//! When too few cumulative probabilities fall strictly inside (0, 1) for the
//! model to be identifiable, the estimators switch to the arithmetic mean
//! (DC) or the least-squares sine fit, and flag the report.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::blue::{solve_gauss_markov, GaussMarkovProblem};
use crate::counting::{
    histogram_observations, quantile_observations, CodeHistogram, CovarianceMatrix,
    EmpiricalProbabilities, QuantileObservations,
};
use crate::error::{Error, Result};
use crate::gaussian::{self, std_normal_interval, std_normal_pdf};
use crate::quantizer::QuantizerSpec;

/// Cumulative probabilities closer than this to 0 or 1 are treated as
/// saturated when probabilities are supplied directly rather than counted.
pub const INJECTED_CP_FLOOR: f64 = 1e-9;

/// Probabilities below this are skipped in the Fisher information sum.
pub const FISHER_CUTOFF: f64 = 1e-300;

/// DC input in Gaussian noise of known standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcModelKnownSigma {
    pub sigma: f64,
}

impl DcModelKnownSigma {
    pub fn new(sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        Ok(Self { sigma })
    }
}

/// DC input in Gaussian noise of unknown standard deviation; both the level
/// θ₁ and the noise θ₂ are estimated.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DcModelUnknownSigma;

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "noise standard deviation must be positive, got {sigma}"
        )))
    }
}

/// Coherently sampled input `s[n] = θ₀ + θ₁·x₁[n] + θ₂·x₂[n]` repeated over
/// `periods` periods of `samples_per_period` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SineDesign {
    samples_per_period: usize,
    periods: usize,
    x1: Vec<f64>,
    x2: Vec<f64>,
    sigma: f64,
}

impl SineDesign {
    pub fn new(
        samples_per_period: usize,
        periods: usize,
        x1: Vec<f64>,
        x2: Vec<f64>,
        sigma: f64,
    ) -> Result<Self> {
        if samples_per_period < 3 {
            return Err(Error::InvalidArgument(format!(
                "samples per period must be at least 3, got {samples_per_period}"
            )));
        }
        if periods < 1 {
            return Err(Error::InvalidArgument(
                "at least one period is required".into(),
            ));
        }
        if x1.len() != samples_per_period || x2.len() != samples_per_period {
            return Err(Error::InvalidArgument(format!(
                "regressor sequences must have {samples_per_period} samples"
            )));
        }
        check_sigma(sigma)?;
        Ok(Self {
            samples_per_period,
            periods,
            x1,
            x2,
            sigma,
        })
    }

    /// x₁[n] = cos(2πn/M), x₂[n] = sin(2πn/M).
    pub fn canonical(samples_per_period: usize, periods: usize, sigma: f64) -> Result<Self> {
        let w = 2.0 * PI / samples_per_period as f64;
        let (x1, x2) = (0..samples_per_period)
            .map(|n| ((w * n as f64).cos(), (w * n as f64).sin()))
            .unzip();
        Self::new(samples_per_period, periods, x1, x2, sigma)
    }

    pub fn samples_per_period(&self) -> usize {
        self.samples_per_period
    }

    pub fn periods(&self) -> usize {
        self.periods
    }

    pub fn record_len(&self) -> usize {
        self.samples_per_period * self.periods
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn x1(&self) -> &[f64] {
        &self.x1
    }

    pub fn x2(&self) -> &[f64] {
        &self.x2
    }

    /// Regressor row `[1, x₁[n], x₂[n]]` of phase `n`.
    pub fn regressors(&self, phase: usize) -> [f64; 3] {
        [1.0, self.x1[phase], self.x2[phase]]
    }

    /// Noise-free input at phase `n`.
    pub fn signal(&self, theta: &[f64; 3], phase: usize) -> f64 {
        let a = self.regressors(phase);
        theta[0] * a[0] + theta[1] * a[1] + theta[2] * a[2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FallbackEstimator {
    None,
    ArithmeticMean,
    LseSinefit,
}

#[derive(Debug, Clone)]
pub struct EstimateReport {
    /// Model parameters: `[θ₁]`, `[θ₁, θ₂]` or `[θ₀, θ₁, θ₂]`. A DC
    /// unknown-σ fallback reports only `[θ₁]`.
    pub theta_hat: Vec<f64>,
    pub covariance: DMatrix<f64>,
    /// Quantile rows used by the solve, after deduplication (summed over
    /// phases for the sine model).
    pub lambda_used: usize,
    pub fallback: bool,
    pub fallback_estimator: FallbackEstimator,
    pub ridge_used: f64,
}

impl EstimateReport {
    /// Standard deviation of each parameter from the covariance diagonal.
    pub fn std_devs(&self) -> Vec<f64> {
        (0..self.theta_hat.len())
            .map(|i| self.covariance[(i, i)].max(0.0).sqrt())
            .collect()
    }

    fn fallback(
        theta_hat: Vec<f64>,
        covariance: DMatrix<f64>,
        lambda_used: usize,
        estimator: FallbackEstimator,
    ) -> Self {
        Self {
            theta_hat,
            covariance,
            lambda_used,
            fallback: true,
            fallback_estimator: estimator,
            ridge_used: 0.0,
        }
    }
}

/// Arithmetic mean of the output levels of a record.
pub fn arithmetic_mean(codes: &[usize], spec: &QuantizerSpec) -> Result<f64> {
    if codes.is_empty() {
        return Err(Error::InvalidArgument("empty record".into()));
    }
    let sum: f64 = codes.iter().map(|&c| spec.output_level(c)).sum();
    Ok(sum / codes.len() as f64)
}

/// Comparator estimate θ̂ = −σ·Φ⁻¹(1 − p̂₁), where p̂₁ is the fraction of
/// samples at or above the threshold 0.
pub fn single_bit_estimate(p_one: f64, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if p_one <= 0.0 || p_one >= 1.0 {
        return Err(Error::DegenerateRecord(p_one));
    }
    Ok(-sigma * gaussian::std_normal_inv_cdf(1.0 - p_one)?)
}

fn check_levels(levels: usize, spec: &QuantizerSpec) -> Result<()> {
    if levels != spec.levels() {
        return Err(Error::InvalidArgument(format!(
            "histogram has {levels} codes, quantizer has {}",
            spec.levels()
        )));
    }
    Ok(())
}

/// Occupied-range observations of supplied probabilities, with cumulative
/// values within [`INJECTED_CP_FLOOR`] of 0 or 1 dropped.
fn injected_observations(
    p: &EmpiricalProbabilities,
    n: f64,
) -> Result<Option<QuantileObservations>> {
    let mut active = p.cumulative_and_active();
    let keep: Vec<bool> = active
        .values
        .iter()
        .map(|v| (INJECTED_CP_FLOOR..=1.0 - INJECTED_CP_FLOOR).contains(v))
        .collect();
    let mut it = keep.iter();
    active.indices.retain(|_| *it.next().unwrap());
    let mut it = keep.iter();
    active.values.retain(|_| *it.next().unwrap());
    quantile_observations(p, &active, n)
}

fn mean_from_probabilities(p: &EmpiricalProbabilities, spec: &QuantizerSpec) -> f64 {
    p.as_slice()
        .iter()
        .enumerate()
        .map(|(k, &pk)| pk * spec.output_level(k))
        .sum()
}

fn variance_from_probabilities(p: &EmpiricalProbabilities, spec: &QuantizerSpec) -> f64 {
    let m = mean_from_probabilities(p, spec);
    p.as_slice()
        .iter()
        .enumerate()
        .map(|(k, &pk)| pk * (spec.output_level(k) - m).powi(2))
        .sum()
}

fn known_sigma_solve(
    obs: &QuantileObservations,
    spec: &QuantizerSpec,
    sigma: f64,
) -> Result<EstimateReport> {
    let rows = obs.len();
    let x = DVector::from_iterator(
        rows,
        obs.active
            .indices
            .iter()
            .zip(&obs.quantiles)
            .map(|(&k, &y)| spec.transition(k) - sigma * y),
    );
    let problem = GaussMarkovProblem::new(
        DMatrix::from_element(rows, 1, 1.0),
        x,
        obs.covariance.scaled(sigma * sigma),
    )?;
    let sol = solve_gauss_markov(&problem)?;
    Ok(EstimateReport {
        theta_hat: sol.theta_hat.iter().cloned().collect(),
        covariance: sol.covariance,
        lambda_used: rows,
        fallback: false,
        fallback_estimator: FallbackEstimator::None,
        ridge_used: sol.ridge_used,
    })
}

/// Quantile-based BLUE of a DC level in noise of known σ.
pub fn estimate_dc_known_sigma(
    hist: &CodeHistogram,
    spec: &QuantizerSpec,
    model: &DcModelKnownSigma,
) -> Result<EstimateReport> {
    check_levels(hist.levels(), spec)?;
    match histogram_observations(hist)? {
        Some(obs) => known_sigma_solve(&obs, spec, model.sigma),
        None => Ok(EstimateReport::fallback(
            vec![hist.mean_output(spec)],
            DMatrix::from_element(1, 1, hist.output_variance(spec) / hist.total() as f64),
            0,
            FallbackEstimator::ArithmeticMean,
        )),
    }
}

/// [`estimate_dc_known_sigma`] for code probabilities supplied directly,
/// e.g. exact probabilities of a known input; `n` sets the covariance scale.
pub fn estimate_dc_known_sigma_from_probabilities(
    p: &EmpiricalProbabilities,
    n: f64,
    spec: &QuantizerSpec,
    model: &DcModelKnownSigma,
) -> Result<EstimateReport> {
    check_levels(p.as_slice().len(), spec)?;
    match injected_observations(p, n)? {
        Some(obs) => known_sigma_solve(&obs, spec, model.sigma),
        None => Ok(EstimateReport::fallback(
            vec![mean_from_probabilities(p, spec)],
            DMatrix::from_element(1, 1, variance_from_probabilities(p, spec) / n),
            0,
            FallbackEstimator::ArithmeticMean,
        )),
    }
}

fn unknown_sigma_solve(obs: &QuantileObservations, spec: &QuantizerSpec) -> Result<EstimateReport> {
    let rows = obs.len();
    let ts: Vec<f64> = obs
        .active
        .indices
        .iter()
        .map(|&k| spec.transition(k))
        .collect();
    // centre the transition column; θ₁ is recovered relative to `centre`
    let centre = ts.iter().sum::<f64>() / rows as f64;
    let h = DMatrix::from_fn(rows, 2, |i, j| if j == 0 { ts[i] - centre } else { -1.0 });
    let problem = GaussMarkovProblem::new(
        h,
        DVector::from_vec(obs.quantiles.clone()),
        obs.covariance.clone(),
    )?;
    let sol = solve_gauss_markov(&problem)?;
    let (g1, g2) = (sol.theta_hat[0], sol.theta_hat[1]);
    if g1.is_nan() || g1 <= 0.0 {
        return Err(Error::NonPhysicalSigma(g1));
    }
    let theta1 = centre + g2 / g1;
    let theta2 = 1.0 / g1;
    let jac = DMatrix::from_row_slice(2, 2, &[-g2 / (g1 * g1), 1.0 / g1, -1.0 / (g1 * g1), 0.0]);
    let cov = &jac * &sol.covariance * jac.transpose();
    Ok(EstimateReport {
        theta_hat: vec![theta1, theta2],
        covariance: (&cov + cov.transpose()) * 0.5,
        lambda_used: rows,
        fallback: false,
        fallback_estimator: FallbackEstimator::None,
        ridge_used: sol.ridge_used,
    })
}

/// Quantile-based BLUE of a DC level θ₁ and noise standard deviation θ₂,
/// through the reparametrization γ = (1/θ₂, θ₁/θ₂).
///
/// With fewer than two distinct cumulative probabilities the arithmetic mean
/// of θ₁ is returned alone and the report is flagged.
pub fn estimate_dc_unknown_sigma(
    hist: &CodeHistogram,
    spec: &QuantizerSpec,
) -> Result<EstimateReport> {
    check_levels(hist.levels(), spec)?;
    match histogram_observations(hist)? {
        Some(obs) if obs.len() >= 2 => unknown_sigma_solve(&obs, spec),
        other => Ok(EstimateReport::fallback(
            vec![hist.mean_output(spec)],
            DMatrix::from_element(1, 1, hist.output_variance(spec) / hist.total() as f64),
            other.map_or(0, |o| o.len()),
            FallbackEstimator::ArithmeticMean,
        )),
    }
}

/// [`estimate_dc_unknown_sigma`] for directly supplied code probabilities.
pub fn estimate_dc_unknown_sigma_from_probabilities(
    p: &EmpiricalProbabilities,
    n: f64,
    spec: &QuantizerSpec,
) -> Result<EstimateReport> {
    check_levels(p.as_slice().len(), spec)?;
    match injected_observations(p, n)? {
        Some(obs) if obs.len() >= 2 => unknown_sigma_solve(&obs, spec),
        other => Ok(EstimateReport::fallback(
            vec![mean_from_probabilities(p, spec)],
            DMatrix::from_element(1, 1, variance_from_probabilities(p, spec) / n),
            other.map_or(0, |o| o.len()),
            FallbackEstimator::ArithmeticMean,
        )),
    }
}

/// Split a coherent record into one histogram per phase: phase `n` collects
/// samples `n, n + M, …, n + (N − 1)·M`.
pub fn fold_coherent(
    codes: &[usize],
    samples_per_period: usize,
    periods: usize,
    levels: usize,
) -> Result<Vec<CodeHistogram>> {
    let expected = samples_per_period * periods;
    if codes.len() != expected || samples_per_period == 0 {
        return Err(Error::IncoherentRecord {
            len: codes.len(),
            expected,
        });
    }
    (0..samples_per_period)
        .map(|phase| {
            CodeHistogram::from_codes(
                codes
                    .iter()
                    .skip(phase)
                    .step_by(samples_per_period)
                    .copied(),
                levels,
            )
        })
        .collect()
}

fn sine_solve(
    per_phase: &[Option<QuantileObservations>],
    design: &SineDesign,
    spec: &QuantizerSpec,
) -> Result<Option<EstimateReport>> {
    let sigma = design.sigma;
    let rows: usize = per_phase.iter().flatten().map(|o| o.len()).sum();
    if rows < 3 {
        return Ok(None);
    }
    let mut h = DMatrix::zeros(rows, 3);
    let mut x = DVector::zeros(rows);
    let mut cov = DMatrix::zeros(rows, rows);
    let mut r0 = 0;
    for (phase, obs) in per_phase.iter().enumerate() {
        // phases with a single excited bin contribute no rows
        let Some(obs) = obs else { continue };
        let a = design.regressors(phase);
        let block = obs.covariance.as_matrix();
        for (i, (&k, &y)) in obs.active.indices.iter().zip(&obs.quantiles).enumerate() {
            for (j, &aj) in a.iter().enumerate() {
                h[(r0 + i, j)] = aj;
            }
            x[r0 + i] = spec.transition(k) - sigma * y;
            for c in 0..obs.len() {
                cov[(r0 + i, r0 + c)] = sigma * sigma * block[(i, c)];
            }
        }
        r0 += obs.len();
    }
    let problem = GaussMarkovProblem::new(h, x, CovarianceMatrix::new(cov)?)?;
    match solve_gauss_markov(&problem) {
        Ok(sol) => Ok(Some(EstimateReport {
            theta_hat: sol.theta_hat.iter().cloned().collect(),
            covariance: sol.covariance,
            lambda_used: rows,
            fallback: false,
            fallback_estimator: FallbackEstimator::None,
            ridge_used: sol.ridge_used,
        })),
        Err(Error::RankDeficient) => Ok(None),
        Err(e) => Err(e),
    }
}

fn check_folded(len: usize, design: &SineDesign) -> Result<()> {
    if len != design.samples_per_period {
        return Err(Error::InvalidArgument(format!(
            "expected {} phase histograms, got {len}",
            design.samples_per_period
        )));
    }
    Ok(())
}

/// Quantile-based BLUE of the three sinewave parameters from per-phase
/// histograms. Falls back to the least-squares fit when fewer than three
/// rows survive or the stacked design is rank deficient.
pub fn estimate_sine(
    folded: &[CodeHistogram],
    design: &SineDesign,
    spec: &QuantizerSpec,
) -> Result<EstimateReport> {
    check_folded(folded.len(), design)?;
    for h in folded {
        check_levels(h.levels(), spec)?;
    }
    let per_phase = folded
        .iter()
        .map(histogram_observations)
        .collect::<Result<Vec<_>>>()?;
    if let Some(report) = sine_solve(&per_phase, design, spec)? {
        return Ok(report);
    }
    let rows = per_phase.iter().flatten().map(|o| o.len()).sum();
    let weighted: Vec<(f64, f64, f64)> = folded
        .iter()
        .map(|h| {
            let ss = h.output_variance(spec) * (h.total().saturating_sub(1)) as f64;
            (h.total() as f64, h.mean_output(spec), ss)
        })
        .collect();
    let (theta, cov) = weighted_sinefit(&weighted, design)?;
    Ok(EstimateReport::fallback(
        theta.to_vec(),
        cov,
        rows,
        FallbackEstimator::LseSinefit,
    ))
}

/// [`estimate_sine`] for directly supplied per-phase code probabilities,
/// each phase standing for `n` samples.
pub fn estimate_sine_from_probabilities(
    per_phase: &[EmpiricalProbabilities],
    n: f64,
    design: &SineDesign,
    spec: &QuantizerSpec,
) -> Result<EstimateReport> {
    check_folded(per_phase.len(), design)?;
    let obs = per_phase
        .iter()
        .map(|p| {
            check_levels(p.as_slice().len(), spec)?;
            injected_observations(p, n)
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(report) = sine_solve(&obs, design, spec)? {
        return Ok(report);
    }
    let rows = obs.iter().flatten().map(|o| o.len()).sum();
    let weighted: Vec<(f64, f64, f64)> = per_phase
        .iter()
        .map(|p| {
            (
                n,
                mean_from_probabilities(p, spec),
                n * variance_from_probabilities(p, spec),
            )
        })
        .collect();
    let (theta, cov) = weighted_sinefit(&weighted, design)?;
    Ok(EstimateReport::fallback(
        theta.to_vec(),
        cov,
        rows,
        FallbackEstimator::LseSinefit,
    ))
}

/// Least squares on per-phase (count, mean, within-phase sum of squares).
/// Equivalent to ordinary least squares on every sample, since samples of
/// one phase share their regressors.
fn weighted_sinefit(
    phases: &[(f64, f64, f64)],
    design: &SineDesign,
) -> Result<([f64; 3], DMatrix<f64>)> {
    let mut ata = DMatrix::<f64>::zeros(3, 3);
    let mut aty = DVector::<f64>::zeros(3);
    let mut total = 0.0;
    for (phase, &(w, mean, _)) in phases.iter().enumerate() {
        let a = design.regressors(phase);
        for i in 0..3 {
            aty[i] += w * a[i] * mean;
            for j in 0..3 {
                ata[(i, j)] += w * a[i] * a[j];
            }
        }
        total += w;
    }
    let chol = ata.clone().cholesky().ok_or(Error::RankDeficient)?;
    let theta = chol.solve(&aty);
    let mut rss = 0.0;
    for (phase, &(w, mean, ss)) in phases.iter().enumerate() {
        let fit = design.signal(&[theta[0], theta[1], theta[2]], phase);
        rss += ss + w * (mean - fit).powi(2);
    }
    let dof = total - 3.0;
    let s2 = if dof > 0.0 { rss / dof } else { 0.0 };
    let cov = chol.inverse() * s2;
    Ok(([theta[0], theta[1], theta[2]], cov))
}

/// Three-parameter least-squares sine fit on arbitrary sample values
/// (sample `m` belongs to phase `m mod M`).
pub fn lse_sinefit_values(values: &[f64], design: &SineDesign) -> Result<[f64; 3]> {
    let m = design.samples_per_period;
    if values.len() < 3 {
        return Err(Error::InvalidArgument("need at least 3 samples".into()));
    }
    let a = DMatrix::from_fn(values.len(), 3, |i, j| design.regressors(i % m)[j]);
    let y = DVector::from_column_slice(values);
    let qr = a.qr();
    let r = qr.r();
    let rmax = (0..3).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    if (0..3).any(|i| r[(i, i)].abs() <= 1e-12 * rmax) {
        return Err(Error::RankDeficient);
    }
    let theta = r
        .solve_upper_triangular(&(qr.q().transpose() * y))
        .ok_or(Error::RankDeficient)?;
    Ok([theta[0], theta[1], theta[2]])
}

/// Least-squares sine fit on the output levels of a record.
pub fn lse_sinefit(codes: &[usize], spec: &QuantizerSpec, design: &SineDesign) -> Result<[f64; 3]> {
    let values: Vec<f64> = codes.iter().map(|&c| spec.output_level(c)).collect();
    lse_sinefit_values(&values, design)
}

/// Code probabilities p[k] = Φ((T[k+1] − θ)/σ) − Φ((T[k] − θ)/σ) for a
/// constant input θ.
pub fn code_probabilities(theta: f64, sigma: f64, spec: &QuantizerSpec) -> EmpiricalProbabilities {
    let levels = spec.levels();
    EmpiricalProbabilities(
        (0..levels)
            .map(|k| {
                let a = (spec.transition(k) - theta) / sigma;
                let b = (spec.transition(k + 1) - theta) / sigma;
                std_normal_interval(a, b)
            })
            .collect(),
    )
}

/// Expected output E[y] = Σ y[k]·p[k](θ) of the quantizer for input θ in
/// Gaussian noise; the arithmetic mean converges to this value.
pub fn mean_output_oracle(theta: f64, sigma: f64, spec: &QuantizerSpec) -> f64 {
    code_probabilities(theta, sigma, spec)
        .as_slice()
        .iter()
        .enumerate()
        .map(|(k, &p)| p * spec.output_level(k))
        .sum()
}

/// Cramér–Rao bound 1/I(θ) for unbiased estimators of a DC input from `n`
/// quantized samples, with I(θ) = n·Σ (dp[k]/dθ)² / p[k].
pub fn crlb_dc(theta: f64, sigma: f64, spec: &QuantizerSpec, n: u64) -> Result<f64> {
    check_sigma(sigma)?;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "record length must be positive".into(),
        ));
    }
    let density = |t: f64| {
        if t.is_finite() {
            std_normal_pdf((t - theta) / sigma)
        } else {
            0.0
        }
    };
    let mut info = 0.0;
    for k in 0..spec.levels() {
        let (lo, hi) = (spec.transition(k), spec.transition(k + 1));
        let p = std_normal_interval((lo - theta) / sigma, (hi - theta) / sigma);
        if p < FISHER_CUTOFF {
            continue;
        }
        let dp = (density(lo) - density(hi)) / sigma;
        info += dp * dp / p;
    }
    info *= n as f64;
    if info.is_nan() || info <= 0.0 {
        return Err(Error::ZeroInformation);
    }
    Ok(1.0 / info)
}
