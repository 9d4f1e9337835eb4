use super::process::{PathTotal, RenewalPlan, summarize};
use crate::error::Result;
use crate::fourier::Window;
use crate::rng::map_paths;
use crate::stationary::EmpiricalMeasure;
use crate::walk::StepDistribution;
use crate::{GroupElement, ProjectivePoint};
use std::f64::consts::PI;

/// Bounded test functions on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleFunction {
    Cos2,
    Sin2,
    One,
    Bump(Window),
}

impl CircleFunction {
    pub fn value(&self, x: &ProjectivePoint) -> f64 {
        let th = x.angle();
        match self {
            Self::Cos2 => (2.0 * th).cos(),
            Self::Sin2 => (2.0 * th).sin(),
            Self::One => 1.0,
            Self::Bump(w) => w.value(th),
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name.trim() {
            "cos2" => Some(Self::Cos2),
            "sin2" => Some(Self::Sin2),
            "one" | "1" => Some(Self::One),
            "bump" => Some(Self::Bump(Window::Bump { center: PI / 4.0, half_width: 0.4 })),
            _ => None,
        }
    }
}

/// Both sides of the stopping identity and their discrepancy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingCheck {
    pub lhs: f64,
    pub lhs_stderr: f64,
    pub rhs: f64,
    pub rhs_stderr: f64,
    /// `|lhs − rhs|` in units of the combined standard error; zero when both
    /// sides agree exactly.
    pub z_score: f64,
    pub cap_hit_fraction: f64,
}

impl StoppingCheck {
    pub fn combined_stderr(&self) -> f64 {
        self.lhs_stderr.hypot(self.rhs_stderr)
    }

    pub fn passes(&self, z: f64) -> bool {
        (self.lhs - self.rhs).abs() <= z * self.combined_stderr()
    }
}

/// Compare `∫ f dν` with the signed sum of `f(gx)` over the upward and
/// downward crossings of level `t` by `κ` along right-extended paths.
///
/// `lhs_pool` gives the left side; path `i` starts from `start_pool[i]`, a
/// pool drawn independently from the same measure.
pub fn stopping_identity_check(
    mu: &StepDistribution,
    test_fn: CircleFunction,
    t: f64,
    lhs_pool: &EmpiricalMeasure,
    start_pool: &EmpiricalMeasure,
    plan: &RenewalPlan,
) -> Result<StoppingCheck> {
    let (lhs, lhs_stderr) = lhs_pool.mean_of(|x| test_fn.value(x));
    let trunc = plan.truncation(t);
    let n_paths = plan.n_paths.min(start_pool.len());
    let starts = start_pool.samples();
    let totals = map_paths(plan.key, n_paths, |i, rng| {
        let x = starts[i as usize];
        let mut g = GroupElement::identity();
        let mut kappa = 0.0;
        let mut n = 0;
        let mut sum = 0.0;
        loop {
            if n >= trunc.floor && kappa > trunc.stop_above {
                return PathTotal { sum, steps: n, hit_cap: false };
            }
            if n >= trunc.cap {
                return PathTotal { sum, steps: n, hit_cap: true };
            }
            g = g.mul(mu.sample(rng));
            n += 1;
            let next = g.kappa();
            if kappa < t && t <= next {
                sum += test_fn.value(&g.act(&x));
            } else if next < t && t <= kappa {
                sum -= test_fn.value(&g.act(&x));
            }
            kappa = next;
        }
    });
    let rhs = summarize(&totals)?;
    let se = lhs_stderr.hypot(rhs.stderr);
    let gap = (lhs - rhs.value).abs();
    let z_score = if gap == 0.0 { 0.0 } else { gap / se };
    Ok(StoppingCheck { lhs, lhs_stderr, rhs: rhs.value, rhs_stderr: rhs.stderr, z_score, cap_hit_fraction: rhs.cap_hit_fraction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedKey;
    use crate::stationary::{mc_stationary, DirectionFlag};

    #[test]
    fn monotone_walk_matches_exactly() {
        let g = GroupElement::from_matrix(2.0, 1.0, 1.0, 1.0).unwrap();
        let mu = StepDistribution::dirac(g, "g");
        let nu = mc_stationary(&mu, DirectionFlag::Forward, 60, 200, SeedKey::new(1));
        let plan = RenewalPlan::new(SeedKey::new(2), 200, g.kappa());
        let c = stopping_identity_check(&mu, CircleFunction::Cos2, 10.0, &nu, &nu, &plan).unwrap();
        assert!((c.lhs - c.rhs).abs() < 1e-9, "{c:?}");
    }

    #[test]
    fn constant_function_counts_net_crossings() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let nu = mc_stationary(&mu, DirectionFlag::Forward, 40, 300, SeedKey::new(3));
        let plan = RenewalPlan::new(SeedKey::new(4), 300, 0.5);
        let c = stopping_identity_check(&mu, CircleFunction::One, 6.0, &nu, &nu, &plan).unwrap();
        assert_eq!((c.lhs, c.rhs, c.rhs_stderr), (1.0, 1.0, 0.0));
        assert!(c.passes(3.0));
    }
}
