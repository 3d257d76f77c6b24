//! L-level quantizer with known, possibly non-uniform, transition levels.
//!
//! Code `k` is produced when the input lies in `[T[k], T[k+1])`, with
//! `T[0] = -inf` and `T[L] = +inf`, and its output level is
//! `y[k] = -(L/2 - 1)·Δ + k·Δ`.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rng::{derive_seed, NoiseSource};

/// Highest resolution accepted by [`QuantizerSpec::uniform`].
pub const MAX_BITS: u32 = 24;

/// Number of full redraws attempted by [`QuantizerSpec::with_inl`].
pub const INL_MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantizerSpec {
    step: f64,
    /// `transitions[i]` is `T[i + 1]`.
    transitions: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InlKind {
    #[default]
    None,
    Uniform,
}

/// Random integral nonlinearity applied to nominal transition levels.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InlProfile {
    pub kind: InlKind,
    /// Half width of the uniform law, in units of Δ.
    pub half_width: f64,
    pub seed: u64,
}

impl InlProfile {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn uniform(half_width: f64, seed: u64) -> Self {
        Self {
            kind: InlKind::Uniform,
            half_width,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width.is_finite() && self.half_width >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "INL half width must be finite and non-negative, got {}",
                self.half_width
            )));
        }
        Ok(())
    }
}

fn check_strictly_increasing(ts: &[f64]) -> Result<()> {
    if let Some(i) = ts.iter().position(|t| !t.is_finite()) {
        return Err(Error::NonMonotoneTransitions { index: i + 1 });
    }
    match ts.windows(2).position(|w| w[1] <= w[0]) {
        Some(i) => Err(Error::NonMonotoneTransitions { index: i + 2 }),
        None => Ok(()),
    }
}

impl QuantizerSpec {
    /// Build a quantizer from explicit transition levels `T[1..L-1]`.
    pub fn from_transitions(step: f64, transitions: Vec<f64>) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "quantization step must be positive, got {step}"
            )));
        }
        let levels = transitions.len() + 1;
        if levels < 2 || !levels.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "level count must be an even integer >= 2, got {levels}"
            )));
        }
        check_strictly_increasing(&transitions)?;
        Ok(Self { step, transitions })
    }

    /// Uniform mid-tread quantizer of `bits` bits; Δ = width / 2^bits.
    ///
    /// Only the width of `[lo, hi)` matters: output levels are fixed by the
    /// level formula, and transitions sit halfway between adjacent levels so
    /// that input `[-Δ/2, Δ/2)` maps to the output level 0.
    pub fn uniform(bits: u32, lo: f64, hi: f64) -> Result<Self> {
        if bits == 0 || bits > MAX_BITS {
            return Err(Error::InvalidArgument(format!(
                "bits must be in 1..={MAX_BITS}, got {bits}"
            )));
        }
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::InvalidArgument(format!(
                "invalid full-scale interval [{lo}, {hi})"
            )));
        }
        let levels = 1usize << bits;
        let step = (hi - lo) / levels as f64;
        let base = -((levels / 2) as f64 - 1.0);
        let transitions = (1..levels)
            .map(|k| (base + k as f64 - 0.5) * step)
            .collect();
        Self::from_transitions(step, transitions)
    }

    pub fn levels(&self) -> usize {
        self.transitions.len() + 1
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// `T[1..L-1]`.
    pub fn transitions(&self) -> &[f64] {
        &self.transitions
    }

    /// Transition level `T[k]` for `k` in `1..L`, with `T[0] = -inf` and
    /// `T[L] = +inf`.
    pub fn transition(&self, k: usize) -> f64 {
        if k == 0 {
            f64::NEG_INFINITY
        } else if k >= self.levels() {
            f64::INFINITY
        } else {
            self.transitions[k - 1]
        }
    }

    /// Output level `y[k]`.
    #[inline]
    pub fn output_level(&self, code: usize) -> f64 {
        (-((self.levels() / 2) as f64 - 1.0) + code as f64) * self.step
    }

    pub fn output_levels(&self) -> Vec<f64> {
        (0..self.levels()).map(|k| self.output_level(k)).collect()
    }

    /// Code of input `x`; saturates to 0 and L-1 outside the transition span.
    #[inline]
    pub fn quantize(&self, x: f64) -> usize {
        self.transitions.partition_point(|&t| t <= x)
    }

    /// Perturb every transition by an independent U(-w·Δ, w·Δ) draw.
    ///
    /// If the result is not strictly increasing the whole vector is redrawn
    /// from a seed derived from the attempt number, up to
    /// [`INL_MAX_ATTEMPTS`] times.
    pub fn with_inl(&self, profile: &InlProfile) -> Result<Self> {
        profile.validate()?;
        if profile.kind == InlKind::None || profile.half_width == 0.0 {
            return Ok(self.clone());
        }
        let amplitude = profile.half_width * self.step;
        for attempt in 0..INL_MAX_ATTEMPTS {
            let mut src = NoiseSource::new(derive_seed(profile.seed, &[attempt as u64]));
            let perturbed: Vec<f64> = self
                .transitions
                .iter()
                .map(|&t| t + (2.0 * src.uniform_open() - 1.0) * amplitude)
                .collect();
            if check_strictly_increasing(&perturbed).is_ok() {
                return Ok(Self {
                    step: self.step,
                    transitions: perturbed,
                });
            }
        }
        Err(Error::InlRetriesExhausted {
            attempts: INL_MAX_ATTEMPTS,
        })
    }

    /// Write the transition levels as `index,transition_volts` CSV.
    pub fn save_transitions(&self, path: &Path) -> Result<()> {
        let io_err = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut out = std::io::BufWriter::new(File::create(path).map_err(io_err)?);
        writeln!(out, "index,transition_volts").map_err(io_err)?;
        for (i, t) in self.transitions.iter().enumerate() {
            writeln!(out, "{},{:.16e}", i + 1, t).map_err(io_err)?;
        }
        out.flush().map_err(io_err)
    }

    /// Read an `index,transition_volts` CSV.
    ///
    /// `levels`, when given, must equal the number of rows plus one.
    pub fn load_transitions(path: &Path, step: f64, levels: Option<usize>) -> Result<Self> {
        let transitions = read_transition_file(path)?;
        if let Some(levels) = levels {
            if transitions.len() + 1 != levels {
                return Err(Error::TransitionCountMismatch {
                    expected: levels.saturating_sub(1),
                    found: transitions.len(),
                });
            }
        }
        Self::from_transitions(step, transitions)
    }
}

/// Nominal step implied by a transition list, `(T[L-1] - T[1]) / (L - 2)`.
pub fn infer_step(transitions: &[f64]) -> Option<f64> {
    if transitions.len() < 2 {
        return None;
    }
    let span = transitions[transitions.len() - 1] - transitions[0];
    Some(span / (transitions.len() - 1) as f64)
}

/// Parse a transition CSV without building a spec.
pub fn read_transition_file(path: &Path) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
    let malformed = |line: usize, reason: String| Error::MalformedRow {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let headers = reader
        .headers()
        .map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?
        .clone();
    if headers.len() != 2 || &headers[0] != "index" || &headers[1] != "transition_volts" {
        return Err(malformed(
            1,
            "header must be `index,transition_volts`".to_string(),
        ));
    }
    let mut transitions = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let line = row + 2;
        let record = record.map_err(|e| malformed(line, e.to_string()))?;
        if record.len() != 2 {
            return Err(malformed(
                line,
                format!("expected 2 fields, got {}", record.len()),
            ));
        }
        let index: usize = record[0]
            .parse()
            .map_err(|_| malformed(line, format!("bad index `{}`", &record[0])))?;
        if index != row + 1 {
            return Err(malformed(
                line,
                format!("index {index} out of sequence, expected {}", row + 1),
            ));
        }
        let value: f64 = record[1]
            .parse()
            .map_err(|_| malformed(line, format!("bad transition level `{}`", &record[1])))?;
        transitions.push(value);
    }
    Ok(transitions)
}
