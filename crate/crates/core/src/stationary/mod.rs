//! Stationary measures on the projective line: Monte Carlo samples, the Ulam
//! grid fixed point, regularity probes and circular distances.

mod measure;
mod ulam;

pub use measure::{holder_probe, kolmogorov_distance, AtomicMeasure, CircleMeasure, GridMeasure, HolderFit};
pub use ulam::{ulam_stationary, ulam_transition, UlamStationary};

use crate::rng::{map_paths, SeedKey};
use crate::walk::StepDistribution;
use crate::ProjectivePoint;

/// Whether samples target the stationary measure of `μ` or of `μ̌`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DirectionFlag {
    Forward,
    /// Stationary measure of the pushforward of `μ` under inversion.
    Reversed,
}

/// Independent draws from an approximate stationary measure.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    samples: Vec<ProjectivePoint>,
    atoms: AtomicMeasure,
    pub direction: DirectionFlag,
    pub burn_in: usize,
}

impl EmpiricalMeasure {
    pub fn from_samples(samples: Vec<ProjectivePoint>, direction: DirectionFlag, burn_in: usize) -> Self {
        let atoms = AtomicMeasure::uniform_atoms(&samples.iter().map(|p| p.angle()).collect::<Vec<_>>());
        Self { samples, atoms, direction, burn_in }
    }

    /// Samples in draw order.
    pub fn samples(&self) -> &[ProjectivePoint] {
        &self.samples
    }

    pub fn angles(&self) -> Vec<f64> {
        self.samples.iter().map(|p| p.angle()).collect()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Mean of `f` with its standard error.
    pub fn mean_of<F: Fn(&ProjectivePoint) -> f64>(&self, f: F) -> (f64, f64) {
        let v: Vec<f64> = self.samples.iter().map(f).collect();
        crate::stats::mean_stderr(&v)
    }
}

impl CircleMeasure for EmpiricalMeasure {
    fn mass_before(&self, theta: f64) -> f64 {
        self.atoms.mass_before(theta)
    }
    fn mass_through(&self, theta: f64) -> f64 {
        self.atoms.mass_through(theta)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.atoms.breakpoints()
    }
}

/// Burn-in long enough for the walk to forget its start: `⌈30 / σ̂⌉`.
pub fn default_burn_in(sigma_hat: f64) -> usize {
    (30.0 / sigma_hat).ceil() as usize
}

/// Generic start point, away from the special axes of the presets.
pub const DEFAULT_BASE: f64 = 1.0;

/// One sample per independent path: the position `Xₙ x` after `burn_in`
/// left-extension steps from a fixed base point.
pub fn mc_stationary(
    mu: &StepDistribution,
    direction: DirectionFlag,
    burn_in: usize,
    n_samples: usize,
    key: SeedKey,
) -> EmpiricalMeasure {
    mc_stationary_from(mu, direction, ProjectivePoint::from_angle(DEFAULT_BASE), burn_in, n_samples, key)
}

pub fn mc_stationary_from(
    mu: &StepDistribution,
    direction: DirectionFlag,
    base: ProjectivePoint,
    burn_in: usize,
    n_samples: usize,
    key: SeedKey,
) -> EmpiricalMeasure {
    let walk = match direction {
        DirectionFlag::Forward => mu.clone(),
        DirectionFlag::Reversed => mu.inverse(),
    };
    let samples = map_paths(key, n_samples, |_, rng| {
        (0..burn_in).fold(base, |x, _| walk.sample(rng).act(&x))
    });
    EmpiricalMeasure::from_samples(samples, direction, burn_in)
}

/// Ergodic-average variant: a single path, recording every position after
/// `burn_in` steps. Needed when `μ` is a Dirac mass, where independent paths
/// coincide.
pub fn orbit_samples(
    mu: &StepDistribution,
    base: ProjectivePoint,
    burn_in: usize,
    n_samples: usize,
    key: SeedKey,
) -> EmpiricalMeasure {
    let mut rng = key.path_rng(0);
    let mut x = base;
    for _ in 0..burn_in {
        x = mu.sample(&mut rng).act(&x);
    }
    let samples = (0..n_samples)
        .map(|_| {
            x = mu.sample(&mut rng).act(&x);
            x
        })
        .collect();
    EmpiricalMeasure::from_samples(samples, DirectionFlag::Forward, burn_in)
}

/// Push samples forward by one independent step of `μ`.
pub fn convolve_once(mu: &StepDistribution, nu: &EmpiricalMeasure, key: SeedKey) -> EmpiricalMeasure {
    let samples = map_paths(key, nu.len(), |i, rng| mu.sample(rng).act(&nu.samples()[i as usize]));
    EmpiricalMeasure::from_samples(samples, nu.direction, nu.burn_in + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GroupElement;
    use std::f64::consts::PI;

    #[test]
    fn hyperbolic_dirac_concentrates_on_attracting_point() {
        let g = GroupElement::from_matrix(2.0, 1.0, 1.0, 1.0).unwrap();
        let mu = StepDistribution::dirac(g, "g");
        let nu = mc_stationary(&mu, DirectionFlag::Forward, 100, 50, SeedKey::new(1));
        let target = g.cartan().attracting;
        assert!(nu.samples().iter().all(|p| p.distance(&target) < 1e-6));
    }

    #[test]
    fn irrational_rotation_orbit_equidistributes() {
        let theta = PI * (2f64.sqrt() - 1.0);
        let mu = StepDistribution::dirac(GroupElement::rotation(theta), "rot");
        let n = 100_000;
        let nu = orbit_samples(&mu, ProjectivePoint::from_angle(0.0), 0, n, SeedKey::new(2));
        // Direct orbit: kθ mod π.
        for (k, p) in nu.samples().iter().enumerate().step_by(9973) {
            let direct = ((k + 1) as f64 * theta).rem_euclid(PI);
            assert!(p.distance(&ProjectivePoint::from_angle(direct)) < 1e-8);
        }
        assert!(kolmogorov_distance(&nu, &GridMeasure::uniform(1024)) < 0.02);
    }

    #[test]
    fn reversed_direction_is_forward_for_inverse_measure() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let a = mc_stationary(&mu, DirectionFlag::Reversed, 40, 200, SeedKey::new(3));
        let b = mc_stationary(&mu.inverse(), DirectionFlag::Forward, 40, 200, SeedKey::new(3));
        assert_eq!(a.samples(), b.samples());
    }

    #[test]
    fn one_step_convolution_is_stationary() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let n = 20_000;
        let nu = mc_stationary(&mu, DirectionFlag::Forward, 40, n, SeedKey::new(4));
        let pushed = convolve_once(&mu, &nu, SeedKey::new(5));
        let d = kolmogorov_distance(&nu, &pushed);
        assert!(d < 3.0 * 1.63 / (n as f64).sqrt(), "KS {d}");
    }

    #[test]
    fn seeds_give_identical_samples() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let a = mc_stationary(&mu, DirectionFlag::Forward, 30, 100, SeedKey::new(9));
        let b = mc_stationary(&mu, DirectionFlag::Forward, 30, 100, SeedKey::new(9));
        assert_eq!(a, b);
    }
}
