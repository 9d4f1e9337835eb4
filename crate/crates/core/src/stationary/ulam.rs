use super::GridMeasure;
use crate::error::{LabError, Result};
use crate::walk::StepDistribution;
use crate::ProjectivePoint;
use std::f64::consts::PI;

/// Ulam transition matrix in sparse row form: `rows[b]` lists `(target, p)`.
pub type SparseRows = Vec<Vec<(usize, f64)>>;

/// Outcome of the Ulam fixed-point iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct UlamStationary {
    pub measure: GridMeasure,
    pub iterations: usize,
    pub residual: f64,
    /// Set when every atom acts trivially; the uniform measure is returned.
    pub identity_kernel: bool,
}

/// Fraction of bin `b` (uniform within the bin) sent into each bin by `μ`.
///
/// Images are exact: the image of a bin is the arc between the images of its
/// endpoints, and target-bin edges are pulled back through `g⁻¹`.
pub fn ulam_transition(mu: &StepDistribution, m: usize) -> SparseRows {
    let h = PI / m as f64;
    (0..m)
        .map(|b| {
            let lo = b as f64 * h;
            let hi = lo + h;
            let mut row: Vec<(usize, f64)> = Vec::new();
            for (w, g) in mu.atoms() {
                let ginv = g.inverse();
                let start = g.act(&ProjectivePoint::from_angle(lo));
                let end = g.act(&ProjectivePoint::from_angle(hi));
                let span = start.ccw_to(&end);
                let a = start.angle();
                let first = (a / h).floor() as usize % m;
                // Source-coordinate cut points at each target edge inside the image.
                let mut cuts = vec![lo];
                let mut edge = (first + 1) as f64 * h;
                while edge < a + span {
                    let pre = ginv.act(&ProjectivePoint::from_angle(edge)).angle();
                    let pre = if pre < lo - 0.5 * h { pre + PI } else { pre };
                    cuts.push(pre.clamp(*cuts.last().unwrap(), hi));
                    edge += h;
                }
                cuts.push(hi);
                for (k, pair) in cuts.windows(2).enumerate() {
                    let frac = (pair[1] - pair[0]) / h;
                    if frac > 0.0 {
                        row.push(((first + k) % m, w * frac));
                    }
                }
            }
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
            for (t, p) in row {
                match merged.last_mut() {
                    Some(last) if last.0 == t => last.1 += p,
                    _ => merged.push((t, p)),
                }
            }
            merged
        })
        .collect()
}

/// Stationary vector of the Ulam chain by power iteration from uniform.
///
/// Iterates the lazy chain `p ← ½(p + pT)`, which has the same fixed point and
/// no periodic part. Stops at L¹ residual `1e-12`; fails with `NoConvergence`
/// if the residual still exceeds `1e-10` after `max_iter` iterations.
pub fn ulam_stationary(mu: &StepDistribution, m: usize, max_iter: usize) -> Result<UlamStationary> {
    if m < 16 {
        return Err(LabError::InvalidInput(format!("grid of {m} bins; need at least 16")));
    }
    if mu.is_identity() {
        return Ok(UlamStationary { measure: GridMeasure::uniform(m), iterations: 0, residual: 0.0, identity_kernel: true });
    }
    let rows = ulam_transition(mu, m);
    let mut p = vec![1.0 / m as f64; m];
    let mut next = vec![0.0; m];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        next.iter_mut().for_each(|v| *v = 0.0);
        for (b, row) in rows.iter().enumerate() {
            for &(t, q) in row {
                next[t] += p[b] * q;
            }
        }
        let total: f64 = next.iter().sum();
        residual = next.iter().zip(&p).map(|(a, b)| (a / total - b).abs()).sum();
        for (pi, ni) in p.iter_mut().zip(&next) {
            *pi = 0.5 * (*pi + ni / total);
        }
        if residual < 1e-12 {
            return Ok(UlamStationary { measure: GridMeasure::new(p), iterations: it, residual, identity_kernel: false });
        }
    }
    if residual > 1e-10 {
        return Err(LabError::NoConvergence { iterations: max_iter, residual });
    }
    Ok(UlamStationary { measure: GridMeasure::new(p), iterations: max_iter, residual, identity_kernel: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GroupElement;

    #[test]
    fn rows_are_stochastic() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        for row in ulam_transition(&mu, 64) {
            let s: f64 = row.iter().map(|e| e.1).sum();
            assert!((s - 1.0).abs() < 1e-12, "row sum {s}");
        }
    }

    #[test]
    fn rotation_by_whole_bins_permutes() {
        let m = 32;
        let mu = StepDistribution::dirac(GroupElement::rotation(3.0 * PI / m as f64), "rot");
        for (b, row) in ulam_transition(&mu, m).iter().enumerate() {
            let mass_on_target: f64 = row.iter().filter(|e| e.0 == (b + 3) % m).map(|e| e.1).sum();
            assert!(mass_on_target > 1.0 - 1e-9);
        }
    }

    #[test]
    fn identity_kernel_is_flagged() {
        let mu = StepDistribution::dirac(GroupElement::identity(), "id");
        let u = ulam_stationary(&mu, 32, 1000).unwrap();
        assert!(u.identity_kernel);
        assert!(u.measure.weights().iter().all(|&w| (w - 1.0 / 32.0).abs() < 1e-15));
    }

    #[test]
    fn diag_symmetric_weights_are_symmetric() {
        let mu = StepDistribution::preset("diag-symmetric").unwrap();
        let m = 64;
        let u = ulam_stationary(&mu, m, 100_000).unwrap();
        let w = u.measure.weights();
        for j in 0..m {
            assert!((w[j] - w[(j + m / 2) % m]).abs() < 1e-10);
            assert!((w[j] - w[m - 1 - j]).abs() < 1e-10);
        }
    }

    #[test]
    fn too_coarse_grid_is_rejected() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        assert!(ulam_stationary(&mu, 8, 10).is_err());
    }

    #[test]
    fn refinement_is_consistent_at_matching_resolution() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let coarse = ulam_stationary(&mu, 256, 100_000).unwrap();
        let fine = ulam_stationary(&mu, 512, 100_000).unwrap();
        let d = crate::stationary::kolmogorov_distance(&coarse.measure, &fine.measure.coarsen(2));
        assert!(d < 0.01, "KS {d}");
    }
}
