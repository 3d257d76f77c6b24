//! Code histograms and the plug-in covariance chain
//! Σ_Π̂ → Σ_CΠ̂ = A·Σ_Π̂·Aᵀ → Σ_Y = J·Σ_CΠ̂·Jᵀ.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussian;
use crate::quantizer::QuantizerSpec;

/// Per-code occurrence counts of a record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeHistogram {
    counts: Vec<u64>,
    total: u64,
}

impl CodeHistogram {
    pub fn from_codes<I>(codes: I, levels: usize) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut counts = vec![0u64; levels];
        for code in codes {
            match counts.get_mut(code) {
                Some(c) => *c += 1,
                None => {
                    return Err(Error::CodeOutOfRange {
                        code: code as i64,
                        max: levels.saturating_sub(1),
                    })
                }
            }
        }
        Self::from_counts(counts)
    }

    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidArgument(
                "histogram must contain at least one sample".into(),
            ));
        }
        Ok(Self { counts, total })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn levels(&self) -> usize {
        self.counts.len()
    }

    /// p̂[k] = ĉ[k] / N.
    pub fn probabilities(&self) -> EmpiricalProbabilities {
        let n = self.total as f64;
        EmpiricalProbabilities(self.counts.iter().map(|&c| c as f64 / n).collect())
    }

    /// Mean of the output levels, i.e. the arithmetic-mean estimate.
    pub fn mean_output(&self, spec: &QuantizerSpec) -> f64 {
        let sum: f64 = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| c as f64 * spec.output_level(k))
            .sum();
        sum / self.total as f64
    }

    /// Unbiased sample variance of the output levels.
    pub fn output_variance(&self, spec: &QuantizerSpec) -> f64 {
        if self.total < 2 {
            return 0.0;
        }
        let mean = self.mean_output(spec);
        let ss: f64 = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| c as f64 * (spec.output_level(k) - mean).powi(2))
            .sum();
        ss / (self.total - 1) as f64
    }

    /// Number of distinct codes observed.
    pub fn occupied_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Empirical cumulative probabilities strictly inside (0, 1).
    pub fn cumulative_and_active(&self) -> ActiveQuantileSet {
        let n = self.total as f64;
        let mut indices = Vec::new();
        let mut values = Vec::new();
        let mut cum = 0u64;
        for k in 1..self.counts.len() {
            cum += self.counts[k - 1];
            if cum > 0 && cum < self.total {
                indices.push(k);
                values.push(cum as f64 / n);
            }
        }
        ActiveQuantileSet { indices, values }
    }
}

/// Code probabilities p̂[0..L-1], summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalProbabilities(pub Vec<f64>);

impl EmpiricalProbabilities {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// First and last code with positive probability.
    pub fn support(&self) -> Option<(usize, usize)> {
        let lo = self.0.iter().position(|&p| p > 0.0)?;
        let hi = self.0.iter().rposition(|&p| p > 0.0)?;
        Some((lo, hi))
    }

    /// Cumulative probabilities ĉp[k] = Σ_{n<k} p̂[n] that fall strictly
    /// inside (0, 1).
    pub fn cumulative_and_active(&self) -> ActiveQuantileSet {
        let mut indices = Vec::new();
        let mut values = Vec::new();
        let mut cum = 0.0;
        for k in 1..self.0.len() {
            cum += self.0[k - 1];
            if cum > 0.0 && cum < 1.0 {
                indices.push(k);
                values.push(cum);
            }
        }
        ActiveQuantileSet { indices, values }
    }
}

/// Transition indices whose empirical cumulative probability is strictly
/// inside (0, 1), together with those probabilities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ActiveQuantileSet {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl ActiveQuantileSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Keep only the lowest transition index of every run of equal
    /// cumulative values (runs come from empty interior bins).
    pub fn dedup(&self) -> Self {
        let mut out = Self::default();
        for (&k, &v) in self.indices.iter().zip(&self.values) {
            if out.values.last() != Some(&v) {
                out.indices.push(k);
                out.values.push(v);
            }
        }
        out
    }
}

/// Square symmetric covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix(DMatrix<f64>);

impl CovarianceMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidArgument(format!(
                "covariance must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// Principal submatrix on the given rows/columns.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        Self(DMatrix::from_fn(idx.len(), idx.len(), |i, j| {
            self.0[(idx[i], idx[j])]
        }))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(&self.0 * s)
    }
}

/// Σ_Π̂ with plug-in entries p̂ᵢ(1−p̂ᵢ)/N on the diagonal and −p̂ᵢp̂ⱼ/N off it.
pub fn multinomial_covariance(p: &EmpiricalProbabilities, n: f64) -> CovarianceMatrix {
    let p = p.as_slice();
    CovarianceMatrix(DMatrix::from_fn(p.len(), p.len(), |i, j| {
        if i == j {
            p[i] * (1.0 - p[i]) / n
        } else {
            -p[i] * p[j] / n
        }
    }))
}

/// A·Σ·Aᵀ with A the lower-triangular matrix of ones, computed as a
/// two-dimensional prefix sum: out(i, j) = Σ_{a≤i, b≤j} Σ(a, b).
pub fn cumulative_covariance(sigma: &CovarianceMatrix) -> CovarianceMatrix {
    let s = sigma.as_matrix();
    let n = s.nrows();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += s[(i, j)];
            out[(i, j)] = row + if i > 0 { out[(i - 1, j)] } else { 0.0 };
        }
    }
    // the prefix sum of a symmetric matrix is symmetric up to rounding
    let out = (&out + out.transpose()) * 0.5;
    CovarianceMatrix(out)
}

/// Σ_Y = J·Σ_CΠ̂·Jᵀ, J = diag(dΦ⁻¹/dp at each active ĉp).
pub fn quantile_covariance(
    active: &ActiveQuantileSet,
    restricted: &CovarianceMatrix,
) -> Result<CovarianceMatrix> {
    if restricted.dim() != active.len() {
        return Err(Error::InvalidArgument(format!(
            "restricted covariance is {0}x{0}, active set has {1} entries",
            restricted.dim(),
            active.len()
        )));
    }
    let jac = active
        .values
        .iter()
        .map(|&v| gaussian::inv_cdf_derivative(v))
        .collect::<Result<Vec<_>>>()?;
    let s = restricted.as_matrix();
    Ok(CovarianceMatrix(DMatrix::from_fn(
        jac.len(),
        jac.len(),
        |i, j| jac[i] * s[(i, j)] * jac[j],
    )))
}

/// Pre-distorted quantile observations of one record: deduplicated active
/// transitions, Y = Φ⁻¹(ĉp) and the plug-in covariance Σ_Y.
#[derive(Debug, Clone)]
pub struct QuantileObservations {
    pub active: ActiveQuantileSet,
    pub quantiles: Vec<f64>,
    pub covariance: CovarianceMatrix,
}

impl QuantileObservations {
    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }
}

/// Run the covariance chain for a record of `n` samples with code
/// probabilities `p`. Returns `None` when no cumulative probability lies
/// strictly inside (0, 1).
///
/// Codes outside the occupied range carry zero probability and contribute
/// only zero rows to Σ_Π̂, so the chain is evaluated on the occupied range.
pub fn quantile_observations(
    p: &EmpiricalProbabilities,
    active: &ActiveQuantileSet,
    n: f64,
) -> Result<Option<QuantileObservations>> {
    let active = active.dedup();
    if active.is_empty() {
        return Ok(None);
    }
    let (lo, hi) = p
        .support()
        .ok_or_else(|| Error::InvalidArgument("probability vector has no positive entry".into()))?;
    let sub = EmpiricalProbabilities(p.as_slice()[lo..=hi].to_vec());
    let cum = cumulative_covariance(&multinomial_covariance(&sub, n));
    // transition k is the cumulative sum through code k-1
    let offset = lo + 1;
    let positions: Vec<usize> = active
        .indices
        .iter()
        .map(|&k| {
            k.checked_sub(offset)
                .filter(|&j| j < cum.dim())
                .ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "active transition {k} outside the occupied code range {lo}..={hi}"
                    ))
                })
        })
        .collect::<Result<_>>()?;
    let covariance = quantile_covariance(&active, &cum.restrict(&positions))?;
    let quantiles = active
        .values
        .iter()
        .map(|&v| gaussian::std_normal_inv_cdf(v))
        .collect::<Result<_>>()?;
    Ok(Some(QuantileObservations {
        active,
        quantiles,
        covariance,
    }))
}

/// [`quantile_observations`] for an observed histogram.
pub fn histogram_observations(hist: &CodeHistogram) -> Result<Option<QuantileObservations>> {
    quantile_observations(
        &hist.probabilities(),
        &hist.cumulative_and_active(),
        hist.total() as f64,
    )
}
