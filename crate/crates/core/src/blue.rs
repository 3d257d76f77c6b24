//! Gauss–Markov (BLUE) solver for X = H·θ + W with Cov(W) = Σ.
//!
//! Σ is Cholesky-factored as L·Lᵀ, the system is whitened with L⁻¹ and the
//! resulting ordinary least-squares problem is solved by QR on
//! column-normalized regressors. Σ is never inverted explicitly.

use nalgebra::{DMatrix, DVector};

use crate::counting::CovarianceMatrix;
use crate::error::{Error, Result};

/// First ridge factor tried, relative to trace(Σ)/Λ.
pub const RIDGE_START: f64 = 1e-10;
/// Largest ridge factor tried, relative to trace(Σ)/Λ.
pub const RIDGE_MAX: f64 = 1e-4;
/// Smallest squared Cholesky pivot accepted for the correlation matrix of Σ.
pub const PIVOT_FLOOR: f64 = 1e-13;
/// Relative threshold on the diagonal of R below which H is rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct GaussMarkovProblem {
    h: DMatrix<f64>,
    x: DVector<f64>,
    sigma: CovarianceMatrix,
}

impl GaussMarkovProblem {
    pub fn new(h: DMatrix<f64>, x: DVector<f64>, sigma: CovarianceMatrix) -> Result<Self> {
        let rows = h.nrows();
        if x.len() != rows || sigma.dim() != rows {
            return Err(Error::InvalidArgument(format!(
                "inconsistent dimensions: H is {}x{}, X has {}, Σ is {}x{}",
                rows,
                h.ncols(),
                x.len(),
                sigma.dim(),
                sigma.dim()
            )));
        }
        if h.ncols() == 0 {
            return Err(Error::InvalidArgument("H has no columns".into()));
        }
        Ok(Self { h, x, sigma })
    }

    pub fn h(&self) -> &DMatrix<f64> {
        &self.h
    }

    pub fn x(&self) -> &DVector<f64> {
        &self.x
    }

    pub fn sigma(&self) -> &CovarianceMatrix {
        &self.sigma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionFlag {
    Clean,
    Ridged,
}

#[derive(Debug, Clone)]
pub struct BlueSolution {
    pub theta_hat: DVector<f64>,
    pub covariance: DMatrix<f64>,
    pub ridge_used: f64,
    pub condition_flag: ConditionFlag,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    pub min_eig_estimate: f64,
    /// Ridge the solver will add; `None` when no ridge up to the maximum
    /// yields an acceptable factor.
    pub ridge_recommended: Option<f64>,
}

/// Lower Cholesky factor of `m`, accepted only when the factor of the
/// correlation matrix D^{-1/2}·m·D^{-1/2} has every squared pivot at or
/// above [`PIVOT_FLOOR`]. The test is invariant to rescaling individual
/// observations.
fn accept_factor(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = m.nrows();
    let d: Vec<f64> = (0..n).map(|i| m[(i, i)].sqrt()).collect();
    if d.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
        return None;
    }
    let corr = DMatrix::from_fn(n, n, |i, j| m[(i, j)] / (d[i] * d[j]));
    let lc = corr.cholesky()?.unpack();
    let min_pivot = (0..n)
        .map(|i| lc[(i, i)] * lc[(i, i)])
        .fold(f64::INFINITY, f64::min);
    if !(min_pivot.is_finite() && min_pivot >= PIVOT_FLOOR) {
        return None;
    }
    let mut l = lc;
    for (i, &di) in d.iter().enumerate() {
        l.row_mut(i).scale_mut(di);
    }
    Some(l)
}

/// Walk the ridge ladder 0, 1e-10·s, 1e-9·s, …, 1e-4·s with s = trace(Σ)/Λ.
fn factor_with_ridge(sigma: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    let n = sigma.nrows();
    let scale = sigma.trace() / n as f64;
    if let Some(l) = accept_factor(sigma) {
        return Ok((l, 0.0));
    }
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::NotFactorizable { ridge: 0.0 });
    }
    let mut factor = RIDGE_START;
    loop {
        let ridge = factor * scale;
        let shifted = sigma + DMatrix::identity(n, n) * ridge;
        if let Some(l) = accept_factor(&shifted) {
            return Ok((l, ridge));
        }
        if factor >= RIDGE_MAX * (1.0 - 1e-9) {
            return Err(Error::NotFactorizable { ridge });
        }
        factor *= 10.0;
    }
}

/// Smallest eigenvalue of Σ and the ridge the solver would apply.
pub fn condition_report(sigma: &CovarianceMatrix) -> ConditionReport {
    let m = sigma.as_matrix();
    let min_eig_estimate = if m.nrows() == 0 {
        f64::NAN
    } else {
        m.clone()
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    };
    ConditionReport {
        min_eig_estimate,
        ridge_recommended: factor_with_ridge(m).ok().map(|(_, r)| r),
    }
}

/// θ̂ = (HᵀΣ⁻¹H)⁻¹HᵀΣ⁻¹X and its covariance (HᵀΣ⁻¹H)⁻¹.
pub fn solve_gauss_markov(problem: &GaussMarkovProblem) -> Result<BlueSolution> {
    let rows = problem.h.nrows();
    let cols = problem.h.ncols();
    if rows < cols {
        return Err(Error::RankDeficient);
    }
    let (l, ridge_used) = factor_with_ridge(problem.sigma.as_matrix())?;
    let hw = l
        .solve_lower_triangular(&problem.h)
        .ok_or(Error::NotFactorizable { ridge: ridge_used })?;
    let xw = l
        .solve_lower_triangular(&problem.x)
        .ok_or(Error::NotFactorizable { ridge: ridge_used })?;

    let norms: Vec<f64> = hw.column_iter().map(|c| c.norm()).collect();
    if norms.iter().any(|&n| !(n.is_finite() && n > 0.0)) {
        return Err(Error::RankDeficient);
    }
    let mut hn = hw;
    for (j, &n) in norms.iter().enumerate() {
        hn.column_mut(j).scale_mut(1.0 / n);
    }
    let qr = hn.qr();
    let r = qr.r();
    let rmax = (0..cols).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    if (0..cols).any(|i| r[(i, i)].abs() <= RANK_TOLERANCE * rmax) {
        return Err(Error::RankDeficient);
    }
    let qtx = qr.q().transpose() * xw;
    let scaled = r.solve_upper_triangular(&qtx).ok_or(Error::RankDeficient)?;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(cols, cols))
        .ok_or(Error::RankDeficient)?;
    let mut covariance = &r_inv * r_inv.transpose();
    for i in 0..cols {
        for j in 0..cols {
            covariance[(i, j)] /= norms[i] * norms[j];
        }
    }
    let covariance = (&covariance + covariance.transpose()) * 0.5;
    let theta_hat = DVector::from_iterator(cols, scaled.iter().zip(&norms).map(|(t, n)| t / n));
    Ok(BlueSolution {
        theta_hat,
        covariance,
        ridge_used,
        condition_flag: if ridge_used > 0.0 {
            ConditionFlag::Ridged
        } else {
            ConditionFlag::Clean
        },
    })
}
