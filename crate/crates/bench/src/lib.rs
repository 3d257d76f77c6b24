//! Fixed inputs shared by the benchmarks.

use qblue_core::montecarlo::{simulate_dc_record, simulate_sine_record};
use qblue_core::{CodeHistogram, QuantizerSpec, SineDesign};

pub fn ten_bit() -> QuantizerSpec {
    QuantizerSpec::uniform(10, -1.0, 1.0).expect("valid quantizer")
}

/// Histogram of a DC record at θ = 0.2Δ with σ = `sigma_norm`·Δ.
pub fn dc_histogram(spec: &QuantizerSpec, sigma_norm: f64, n: usize, seed: u64) -> CodeHistogram {
    let d = spec.step();
    let codes = simulate_dc_record(0.2 * d, sigma_norm * d, spec, n, seed);
    CodeHistogram::from_codes(codes, spec.levels()).expect("codes in range")
}

/// Record of the coherent sine configuration with M = 20 and 50 periods.
pub fn sine_record(spec: &QuantizerSpec, seed: u64) -> (SineDesign, Vec<usize>) {
    let d = spec.step();
    let design = SineDesign::canonical(20, 50, 0.3 * d).expect("valid design");
    let theta = [3.7 * d, 11.4 * d, 23.1 * d];
    let codes = simulate_sine_record(&design, &theta, spec, seed);
    (design, codes)
}
