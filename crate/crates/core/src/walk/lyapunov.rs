use super::StepDistribution;
use crate::rng::{map_paths, SeedKey};
use crate::stats::{linear_fit, mean_stderr, wilson, LinearFit};
use crate::{GroupElement, ProjectivePoint};

/// Monte Carlo estimate of the top Lyapunov exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n_steps: usize,
    pub n_paths: usize,
}

/// `σ(Xₙ, e₁) / n` averaged over independent paths.
pub fn lyapunov_estimate(mu: &StepDistribution, n_steps: usize, n_paths: usize, key: SeedKey) -> LyapunovEstimate {
    lyapunov_estimate_from(mu, ProjectivePoint::e1(), n_steps, n_paths, key)
}

pub fn lyapunov_estimate_from(
    mu: &StepDistribution,
    base: ProjectivePoint,
    n_steps: usize,
    n_paths: usize,
    key: SeedKey,
) -> LyapunovEstimate {
    let rates = map_paths(key, n_paths, |_, rng| {
        let mut pos = base;
        let mut sigma = 0.0;
        for _ in 0..n_steps {
            let g = mu.sample(rng);
            sigma += g.cocycle(&pos);
            pos = g.act(&pos);
        }
        sigma / n_steps as f64
    });
    let (value, stderr) = mean_stderr(&rates);
    LyapunovEstimate { value, stderr, n_steps, n_paths }
}

/// Tail frequencies at one walk length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationRow {
    pub n: usize,
    /// Frequency of `|σ(Xₙ, x)/n − σ̂| > ε` with its Wilson interval.
    pub cocycle: (f64, f64, f64),
    /// Frequency of `|κ(Xₙ)/n − σ̂| > ε` with its Wilson interval.
    pub kappa: (f64, f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviationProfile {
    pub rows: Vec<DeviationRow>,
    /// Fitted exponential rate `−d log p / dn` for the cocycle and for κ.
    pub rate_cocycle: LinearFit,
    pub rate_kappa: LinearFit,
}

impl DeviationProfile {
    /// Rate minus 1.96 standard errors; positive when the decay is significant.
    pub fn lower_rate_bound(fit: &LinearFit) -> f64 {
        -fit.slope - 1.96 * fit.slope_stderr
    }
}

/// Large-deviation frequencies at each `n` in `lengths` (increasing).
pub fn deviation_profile(
    mu: &StepDistribution,
    base: ProjectivePoint,
    eps: f64,
    lengths: &[usize],
    n_paths: usize,
    sigma_hat: f64,
    key: SeedKey,
) -> DeviationProfile {
    let max_n = lengths.iter().copied().max().unwrap_or(0);
    let hits = map_paths(key, n_paths, |_, rng| {
        let mut product = GroupElement::identity();
        let mut pos = base;
        let mut sigma = 0.0;
        let mut out = Vec::with_capacity(lengths.len());
        let mut next = 0;
        for n in 1..=max_n {
            let g = mu.sample(rng);
            sigma += g.cocycle(&pos);
            pos = g.act(&pos);
            product = g.mul(&product);
            if next < lengths.len() && lengths[next] == n {
                let nf = n as f64;
                out.push(((sigma / nf - sigma_hat).abs() > eps, (product.kappa() / nf - sigma_hat).abs() > eps));
                next += 1;
            }
        }
        out
    });
    let rows: Vec<DeviationRow> = lengths
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            let kc = hits.iter().filter(|h| h[j].0).count();
            let kk = hits.iter().filter(|h| h[j].1).count();
            let freq = |k: usize| {
                let (lo, hi) = wilson(k, n_paths, 1.96);
                (k as f64 / n_paths as f64, lo, hi)
            };
            DeviationRow { n, cocycle: freq(kc), kappa: freq(kk) }
        })
        .collect();
    let xs: Vec<f64> = lengths.iter().map(|&n| n as f64).collect();
    // Half-count continuity correction keeps empty tails finite on the log scale.
    let smoothed = |p: f64| ((p * n_paths as f64 + 0.5) / (n_paths as f64 + 1.0)).ln();
    let rate_cocycle = linear_fit(&xs, &rows.iter().map(|r| smoothed(r.cocycle.0)).collect::<Vec<_>>());
    let rate_kappa = linear_fit(&xs, &rows.iter().map(|r| smoothed(r.kappa.0)).collect::<Vec<_>>());
    DeviationProfile { rows, rate_cocycle, rate_kappa }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_dirac_has_exact_exponent() {
        let mu = StepDistribution::dirac(GroupElement::hyperbolic(0.7), "diag");
        let est = lyapunov_estimate_from(&mu, ProjectivePoint::from_angle(0.4), 200, 10, SeedKey::new(1));
        // σ(gⁿ, x)/n → 0.7 with an O(1/n) boundary term.
        assert!((est.value - 0.7).abs() < 0.01);
        assert!(est.stderr < 1e-12);
    }

    #[test]
    fn zariski_free_exponent_is_positive() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let est = lyapunov_estimate(&mu, 1_000, 200, SeedKey::new(2));
        assert!(est.value > 5.0 * est.stderr && est.value > 0.5);
    }

    #[test]
    fn base_point_does_not_matter() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let vals: Vec<f64> = [0.0, 1.0, 2.5]
            .iter()
            .map(|&t| lyapunov_estimate_from(&mu, ProjectivePoint::from_angle(t), 2_000, 200, SeedKey::new(3)).value)
            .collect();
        assert!((vals[0] - vals[1]).abs() < 5e-3 && (vals[1] - vals[2]).abs() < 5e-3, "{vals:?}");
    }

    #[test]
    fn deviations_decay() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let sigma = lyapunov_estimate(&mu, 2_000, 500, SeedKey::new(4)).value;
        let prof = deviation_profile(&mu, ProjectivePoint::e1(), 0.02, &[10, 20, 40, 80], 4_000, sigma, SeedKey::new(5));
        assert!(DeviationProfile::lower_rate_bound(&prof.rate_cocycle) > 0.0, "{prof:?}");
        assert!(DeviationProfile::lower_rate_bound(&prof.rate_kappa) > 0.0);
        let dirac = StepDistribution::dirac(GroupElement::hyperbolic(0.5), "d");
        let p = deviation_profile(&dirac, ProjectivePoint::from_angle(0.3), 0.1, &[20, 40], 100, 0.5, SeedKey::new(6));
        assert!(p.rows.iter().all(|r| r.kappa.0 == 0.0));
    }
}
