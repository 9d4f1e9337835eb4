//! Discretised complex transfer operators: leading eigenvalue, the Lyapunov
//! exponent from its derivative, and a scan for eigenvalues of modulus one on
//! the imaginary axis.

mod transfer;

pub use transfer::{assemble_transfer, growth_rate, leading_eigen, CircleGrid, EigenEstimate, TransferMatrix, EIGEN_MAX_ITER, EIGEN_TOL};

use crate::error::{LabError, Result};
use crate::stationary::GridMeasure;
use crate::walk::StepDistribution;
use num_complex::Complex64;

/// Leading real eigenvalue `k(s)` of `P(s)` for real `s`.
pub fn leading_real(mu: &StepDistribution, grid: CircleGrid, s: f64) -> Result<f64> {
    Ok(leading_eigen(&assemble_transfer(mu, Complex64::new(s, 0.0), grid))?.value.re)
}

/// `σ` as `−k'(0)/k(0)` by central differences, with a Richardson check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSigma {
    /// `−(log k(h) − log k(−h)) / 2h`.
    pub value: f64,
    /// The same at `h/2`.
    pub half_step: f64,
    /// `(4 · half_step − value) / 3`.
    pub richardson: f64,
}

pub fn sigma_from_eigen(mu: &StepDistribution, grid: CircleGrid, h: f64) -> Result<SpectralSigma> {
    if !(1e-3..=0.1).contains(&h) {
        return Err(LabError::InvalidInput(format!("step {h} outside [1e-3, 0.1]")));
    }
    let diff = |h: f64| -> Result<f64> {
        let up = leading_real(mu, grid, h)?;
        let down = leading_real(mu, grid, -h)?;
        Ok(-(up.ln() - down.ln()) / (2.0 * h))
    };
    let value = diff(h)?;
    let half_step = diff(0.5 * h)?;
    Ok(SpectralSigma { value, half_step, richardson: (4.0 * half_step - value) / 3.0 })
}

/// Modulus of the dominant eigenvalue of `P(iξ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonarithRow {
    pub xi: f64,
    pub modulus: f64,
    /// Set when the modulus is at least `1 − 1e-6`.
    pub flag: bool,
    /// Whether power iteration converged; otherwise the modulus is a growth-rate estimate.
    pub converged: bool,
}

pub const NEAR_ONE: f64 = 1e-6;

pub fn nonarith_scan(mu: &StepDistribution, grid: CircleGrid, xi_list: &[f64]) -> Result<Vec<NonarithRow>> {
    xi_list
        .iter()
        .map(|&xi| {
            if xi == 0.0 || xi.abs() > 50.0 {
                return Err(LabError::InvalidInput(format!("frequency {xi} outside 0 < |ξ| ≤ 50")));
            }
            let t = assemble_transfer(mu, Complex64::new(0.0, xi), grid);
            let (modulus, converged) = match leading_eigen(&t) {
                Ok(e) => (e.value.norm(), true),
                Err(LabError::NoConvergence { .. }) => (growth_rate(&t, 20_000, 5_000), false),
                Err(e) => return Err(e),
            };
            Ok(NonarithRow { xi, modulus, flag: modulus >= 1.0 - NEAR_ONE, converged })
        })
        .collect()
}

/// CSV with header `xi,modulus,flag`.
pub fn nonarith_csv(rows: &[NonarithRow]) -> String {
    let mut out = String::from("xi,modulus,flag\n");
    for r in rows {
        out.push_str(&format!("{:.16e},{:.16e},{}\n", r.xi, r.modulus, r.flag));
    }
    out
}

/// Left dominant eigenvector of `P(0)`, normalised to a probability: the
/// stationary law of the interpolated chain. Node `j` carries a hat function
/// centred at `θⱼ`, so its mass is split evenly between the two adjacent bins.
pub fn stationary_from_transfer(t: &TransferMatrix) -> Result<GridMeasure> {
    let m = t.grid.len();
    let mut p = vec![Complex64::new(1.0 / m as f64, 0.0); m];
    let mut residual = f64::INFINITY;
    for _ in 0..EIGEN_MAX_ITER {
        let next = t.apply_left(&p);
        let total: f64 = next.iter().map(|c| c.re).sum();
        residual = next.iter().zip(&p).map(|(a, b)| (a.re / total - b.re).abs()).sum();
        // Lazy step: same fixed point, no periodic part.
        for (pi, ni) in p.iter_mut().zip(&next) {
            *pi = (*pi + ni / total) * 0.5;
        }
        if residual < 1e-12 {
            let mut bins = vec![0.0; m];
            for (j, c) in p.iter().enumerate() {
                let mass = 0.5 * c.re.max(0.0);
                bins[j] += mass;
                bins[(j + m - 1) % m] += mass;
            }
            return Ok(GridMeasure::new(bins));
        }
    }
    Err(LabError::NoConvergence { iterations: EIGEN_MAX_ITER, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedKey;
    use crate::stationary::{kolmogorov_distance, ulam_stationary};
    use crate::walk::lyapunov_estimate;
    use crate::GroupElement;

    fn zf() -> StepDistribution {
        StepDistribution::preset("zariski-free").unwrap()
    }

    #[test]
    fn identity_has_zero_exponent() {
        let mu = StepDistribution::dirac(GroupElement::identity(), "id");
        let s = sigma_from_eigen(&mu, CircleGrid::new(64).unwrap(), 0.05).unwrap();
        assert!(s.value.abs() < 1e-12);
    }

    #[test]
    fn symmetric_walk_has_zero_exponent() {
        let mu = StepDistribution::preset("diag-symmetric").unwrap();
        let s = sigma_from_eigen(&mu, CircleGrid::new(128).unwrap(), 0.05).unwrap();
        assert!(s.value.abs() < 1e-3, "{s:?}");
    }

    #[test]
    fn spectral_exponent_matches_walk() {
        let mu = zf();
        let s = sigma_from_eigen(&mu, CircleGrid::new(256).unwrap(), 0.01).unwrap();
        let mc = lyapunov_estimate(&mu, 2000, 500, SeedKey::new(8));
        assert!((s.value - mc.value).abs() <= (0.02 * mc.value).max(3.0 * mc.stderr), "{s:?} vs {mc:?}");
        // Small positive s: k(s) < 1 and log k(s) ≈ −sσ.
        let k = leading_real(&mu, CircleGrid::new(256).unwrap(), 0.05).unwrap();
        assert!(k < 1.0);
        assert!((k.ln() / 0.05 + s.value).abs() < 0.05);
    }

    #[test]
    fn arithmetic_control_is_flagged() {
        let mu = StepDistribution::preset("arithmetic-control").unwrap();
        let rows = nonarith_scan(&mu, CircleGrid::new(64).unwrap(), &[2.0 * std::f64::consts::PI]).unwrap();
        assert!(rows[0].modulus > 1.0 - 1e-6);
        assert!(rows[0].flag);
    }

    #[test]
    fn moduli_approach_one_near_zero() {
        let rows = nonarith_scan(&zf(), CircleGrid::new(128).unwrap(), &[1e-3, 1.0]).unwrap();
        assert!(rows[0].modulus > rows[1].modulus);
        assert!(rows[0].modulus > 0.999);
        assert!(nonarith_scan(&zf(), CircleGrid::new(128).unwrap(), &[0.0]).is_err());
    }

    #[test]
    fn left_eigenvector_matches_ulam() {
        let mu = zf();
        // The measure is Cantor-like with near-atoms, so the two discretisations
        // agree only at fine resolution.
        let m = 4096;
        let t = assemble_transfer(&mu, Complex64::new(0.0, 0.0), CircleGrid::new(m).unwrap());
        let nu = stationary_from_transfer(&t).unwrap();
        let ulam = ulam_stationary(&mu, m, 100_000).unwrap();
        let d = kolmogorov_distance(&nu, &ulam.measure);
        assert!(d < 0.03, "KS {d}");
    }
}
