use num_complex::Complex64;
use rayon::prelude::*;

/// Empirical Fourier coefficient with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierEstimate {
    pub frequency: f64,
    pub value: Complex64,
    pub stderr: f64,
    pub n_samples: usize,
}

impl FourierEstimate {
    pub fn magnitude(&self) -> f64 {
        self.value.norm()
    }
}

const CHUNK: usize = 4096;

/// `ν̂(k) = mean of e^{2ikθ}` over sample angles in `[0, π)`.
///
/// Chunked sums are combined in a fixed order, so the result does not depend
/// on the thread count. The standard error of each component is at most
/// `1/√n`; that bound is reported.
pub fn fourier_coefficient(angles: &[f64], k: i64) -> FourierEstimate {
    let freq = 2.0 * k as f64;
    let partial: Vec<Complex64> = angles
        .par_chunks(CHUNK)
        .map(|c| c.iter().map(|&t| Complex64::from_polar(1.0, freq * t)).sum())
        .collect();
    let n = angles.len();
    let total: Complex64 = partial.into_iter().sum();
    FourierEstimate { frequency: k as f64, value: total / n as f64, stderr: 1.0 / (n as f64).sqrt(), n_samples: n }
}

/// Magnitudes over a frequency block `[lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayBlock {
    pub lo: i64,
    pub hi: i64,
    pub magnitudes: Vec<f64>,
    pub max: f64,
    pub median: f64,
    pub noise_floor: f64,
}

/// Block maxima and medians of `|ν̂(k)|` for each block `[lo, hi)`.
///
/// Within a block the phases are advanced by multiplying with `e^{2iθ}`, which
/// keeps the cost at one complex product per sample and frequency.
pub fn decay_profile(angles: &[f64], blocks: &[(i64, i64)]) -> Vec<DecayBlock> {
    let n = angles.len();
    blocks
        .iter()
        .map(|&(lo, hi)| {
            let width = (hi - lo).max(0) as usize;
            let partial: Vec<Vec<Complex64>> = angles
                .par_chunks(CHUNK)
                .map(|c| {
                    let mut acc = vec![Complex64::new(0.0, 0.0); width];
                    for &t in c {
                        let step = Complex64::from_polar(1.0, 2.0 * t);
                        let mut z = Complex64::from_polar(1.0, 2.0 * lo as f64 * t);
                        for a in acc.iter_mut() {
                            *a += z;
                            z *= step;
                        }
                    }
                    acc
                })
                .collect();
            let mut sums = vec![Complex64::new(0.0, 0.0); width];
            for p in partial {
                for (s, v) in sums.iter_mut().zip(p) {
                    *s += v;
                }
            }
            let magnitudes: Vec<f64> = sums.iter().map(|s| s.norm() / n as f64).collect();
            DecayBlock {
                lo,
                hi,
                max: magnitudes.iter().copied().fold(0.0, f64::max),
                median: crate::stats::median(&magnitudes),
                noise_floor: 1.0 / (n as f64).sqrt(),
                magnitudes,
            }
        })
        .collect()
}

/// CSV with header `block_or_n,frequency,magnitude,noise_floor`, one row per frequency.
pub fn decay_csv(blocks: &[DecayBlock]) -> String {
    let mut out = String::from("block_or_n,frequency,magnitude,noise_floor\n");
    for (b, blk) in blocks.iter().enumerate() {
        for (j, m) in blk.magnitudes.iter().enumerate() {
            out.push_str(&format!("{b},{},{:.16e},{:.16e}\n", blk.lo + j as i64, m, blk.noise_floor));
        }
    }
    out
}
