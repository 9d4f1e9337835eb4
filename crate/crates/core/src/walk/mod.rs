//! Random walks driven by a finitely supported step distribution.

mod distribution;
mod lyapunov;
mod state;

pub use distribution::{StepDistribution, GOLDEN};
pub use lyapunov::{deviation_profile, lyapunov_estimate, lyapunov_estimate_from, DeviationProfile, DeviationRow, LyapunovEstimate};
pub use state::{Side, WalkState};

use crate::rng::SeedKey;
use crate::ProjectivePoint;

/// Which paths to draw and how.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPlan {
    pub key: SeedKey,
    pub n_paths: usize,
    pub max_steps: usize,
    pub side: Side,
}

/// Stream the states `0..=max_steps` of every path in order, as
/// `(path_index, state)`. Path `i` depends only on `(plan.key, i)`.
pub fn sample_path<'a>(
    mu: &'a StepDistribution,
    plan: PathPlan,
    base: ProjectivePoint,
) -> impl Iterator<Item = (usize, WalkState)> + 'a {
    (0..plan.n_paths).flat_map(move |i| {
        let mut rng = plan.key.path_rng(i as u64);
        let mut state = WalkState::new(base);
        (0..=plan.max_steps).map(move |n| {
            if n > 0 {
                state.extend(mu.sample(&mut rng), plan.side);
            }
            (i, state)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::ks_two_sample;

    fn plan(side: Side, n_paths: usize, max_steps: usize) -> PathPlan {
        PathPlan { key: SeedKey::new(42), n_paths, max_steps, side }
    }

    #[test]
    fn same_seed_same_paths() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let x = ProjectivePoint::from_angle(0.2);
        let a: Vec<_> = sample_path(&mu, plan(Side::Left, 3, 20), x).collect();
        let b: Vec<_> = sample_path(&mu, plan(Side::Left, 3, 20), x).collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 63);
    }

    #[test]
    fn left_and_right_products_share_kappa_law() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let x = ProjectivePoint::e1();
        let n = 30;
        let kappas = |side, seed| -> Vec<f64> {
            let p = PathPlan { key: SeedKey::new(seed), n_paths: 10_000, max_steps: n, side };
            sample_path(&mu, p, x).filter(|(_, s)| s.steps() == n).map(|(_, s)| s.product().kappa()).collect()
        };
        let d = ks_two_sample(&kappas(Side::Left, 1), &kappas(Side::Right, 2));
        assert!(d < 0.05, "KS {d}");
    }
}
