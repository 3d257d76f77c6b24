//! Quantile-based best linear unbiased estimation of DC and sinewave
//! parameters from the output of a noisy quantizer.
//!
//! The crate models a quantizer by its transition levels ([`QuantizerSpec`]),
//! turns a record of output codes into empirical cumulative probabilities and
//! their covariance ([`counting`]), and solves the resulting Gauss–Markov
//! problems ([`blue`]) for three input models ([`estimators`]). The
//! [`montecarlo`] module runs reproducible simulation sweeps.

pub mod blue;
pub mod counting;
pub mod error;
pub mod estimators;
pub mod gaussian;
pub mod montecarlo;
pub mod quantizer;
pub mod rng;

pub use blue::{BlueSolution, ConditionFlag, ConditionReport, GaussMarkovProblem};
pub use counting::{ActiveQuantileSet, CodeHistogram, CovarianceMatrix, EmpiricalProbabilities};
pub use error::{Error, Result};
pub use estimators::{
    DcModelKnownSigma, DcModelUnknownSigma, EstimateReport, FallbackEstimator, SineDesign,
};
pub use montecarlo::{EstimatorKind, ModelKind, SweepConfig, SweepResult, SweepRow};
pub use quantizer::{InlKind, InlProfile, QuantizerSpec};
