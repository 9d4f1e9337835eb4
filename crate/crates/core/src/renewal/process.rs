use super::target::{Arity, TargetFunction};
use crate::error::{LabError, Result};
use crate::rng::{map_paths, SeedKey};
use crate::stats::mean_stderr;
use crate::walk::StepDistribution;
use crate::{GroupElement, ProjectivePoint};
use rand_chacha::ChaCha8Rng;

/// Paths, seed and truncation parameters shared by the path estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenewalPlan {
    pub key: SeedKey,
    pub n_paths: usize,
    /// Lyapunov estimate used to size the step cap.
    pub sigma_hat: f64,
    /// A path stops once its scalar exceeds the last relevant level by this much.
    pub margin: f64,
}

impl RenewalPlan {
    pub fn new(key: SeedKey, n_paths: usize, sigma_hat: f64) -> Self {
        Self { key, n_paths, sigma_hat, margin: 5.0 }
    }

    /// Step cap `max(⌈4 level / σ̂⌉, 64)` and floor `⌈level / σ̂⌉` for a
    /// path that must climb to `level`.
    pub fn truncation(&self, level: f64) -> Truncation {
        let expected = (level.max(0.0) / self.sigma_hat).ceil() as usize;
        Truncation { cap: (4 * expected).max(64), floor: expected, stop_above: level + self.margin }
    }
}

/// When a single path is abandoned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub cap: usize,
    pub floor: usize,
    pub stop_above: f64,
}

impl Truncation {
    fn done(&self, n: usize, scalar: f64) -> bool {
        n >= self.floor && scalar > self.stop_above
    }
}

/// Monte Carlo estimate with truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenewalEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n_paths: usize,
    pub max_steps: usize,
    /// Fraction of paths stopped by the cap rather than by the level.
    pub cap_hit_fraction: f64,
}

/// Cap hits at or above this fraction make an estimate unsound.
pub const CAP_HIT_LIMIT: f64 = 1e-3;

#[derive(Debug, Clone, Copy)]
pub(crate) struct PathTotal {
    pub sum: f64,
    pub steps: usize,
    pub hit_cap: bool,
}

pub(crate) fn summarize(totals: &[PathTotal]) -> Result<RenewalEstimate> {
    let sums: Vec<f64> = totals.iter().map(|p| p.sum).collect();
    let (value, stderr) = mean_stderr(&sums);
    let hits = totals.iter().filter(|p| p.hit_cap).count();
    let fraction = hits as f64 / totals.len().max(1) as f64;
    if fraction >= CAP_HIT_LIMIT {
        return Err(LabError::TruncationUnsound { fraction });
    }
    Ok(RenewalEstimate {
        value,
        stderr,
        n_paths: totals.len(),
        max_steps: totals.iter().map(|p| p.steps).max().unwrap_or(0),
        cap_hit_fraction: fraction,
    })
}

/// Which scalar drives a renewal sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarKind {
    /// `Σₙ E f(gx, σ(g,x) − t)`.
    Cocycle,
    /// `Σₙ E f(gx, κ(g) − t)`.
    Cartan,
    /// `Σₙ E f(g⁻¹x_o, σ(g,x) − t)`.
    CartanInverse { origin: ProjectivePoint },
}

/// State of a left-extended walk: `gₙ = bₙ ⋯ b₁` with `σ(gₙ, x)` and `gₙx`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LeftWalk {
    pub n: usize,
    pub product: GroupElement,
    pub sigma: f64,
    pub position: ProjectivePoint,
}

impl LeftWalk {
    pub fn new(x: ProjectivePoint) -> Self {
        Self { n: 0, product: GroupElement::identity(), sigma: 0.0, position: x }
    }

    pub fn step(&mut self, h: &GroupElement) {
        self.sigma += h.cocycle(&self.position);
        self.position = h.act(&self.position);
        self.product = h.mul(&self.product);
        self.n += 1;
    }
}

/// `Rf(x, t)` and its Cartan and inverse variants.
///
/// Every path contributes the `n = 0` term (empty product) and then one term
/// per left extension until the driving scalar clears `t + u_hi + margin`
/// after at least the floor number of steps.
pub fn renewal_sum(
    mu: &StepDistribution,
    f: &TargetFunction,
    x: ProjectivePoint,
    t: f64,
    kind: ScalarKind,
    plan: &RenewalPlan,
) -> Result<RenewalEstimate> {
    f.require(Arity::Scalar)?;
    let (_, u_hi) = f.u_support();
    let trunc = plan.truncation(t + u_hi);
    let totals = map_paths(plan.key, plan.n_paths, |_, rng| {
        let mut w = LeftWalk::new(x);
        let mut sum = 0.0;
        loop {
            let (y, scalar) = match kind {
                ScalarKind::Cocycle => (w.position, w.sigma),
                ScalarKind::Cartan => (w.position, w.product.kappa()),
                ScalarKind::CartanInverse { origin } => (w.product.inverse().act(&origin), w.sigma),
            };
            sum += f.eval(None, &y, 0.0, scalar - t);
            if trunc.done(w.n, scalar) {
                return PathTotal { sum, steps: w.n, hit_cap: false };
            }
            if w.n >= trunc.cap {
                return PathTotal { sum, steps: w.n, hit_cap: true };
            }
            w.step(mu.sample(rng));
        }
    });
    summarize(&totals)
}

/// Residue processes and their cut-off variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResidueVariant {
    /// Every index: `f(hgx, σ(h,gx), σ(g,x) − t)`.
    Full,
    /// `σ(g,x) < t ≤ σ(hg,x)`.
    Cutoff,
    /// `σ(hg,x) ≤ t < σ(g,x)`.
    CutoffMinus,
    /// `κ(g) < t ≤ κ(hg)` with `f((hg)⁻¹x′, hgx, κ(hg) − κ(g), κ(g) − t)`.
    Cartan,
    /// `κ(hg) < t ≤ κ(g)`.
    CartanMinus,
}

impl ResidueVariant {
    pub fn arity(self) -> Arity {
        match self {
            Self::Cartan | Self::CartanMinus => Arity::Full,
            _ => Arity::Jump,
        }
    }

    pub fn uses_kappa(self) -> bool {
        matches!(self, Self::Cartan | Self::CartanMinus)
    }

    /// Whether the step with residue `u` and jump `v` is counted.
    pub fn admits(self, v: f64, u: f64) -> bool {
        match self {
            Self::Full => true,
            Self::Cutoff | Self::Cartan => u < 0.0 && u >= -v,
            Self::CutoffMinus => u > 0.0 && u <= -v,
            Self::CartanMinus => u >= 0.0 && u < -v,
        }
    }

    pub fn is_minus(self) -> bool {
        matches!(self, Self::CutoffMinus | Self::CartanMinus)
    }
}

/// One counted step of a residue process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingRecord {
    pub n: usize,
    /// `hgx`.
    pub position: ProjectivePoint,
    /// `(hg)⁻¹x′`, for the Cartan variants.
    pub inverse_position: Option<ProjectivePoint>,
    pub jump: f64,
    pub residue: f64,
}

/// Scan one path and report every counted step; returns whether the cap hit.
fn scan_residue<F: FnMut(CrossingRecord)>(
    mu: &StepDistribution,
    variant: ResidueVariant,
    x: ProjectivePoint,
    x_prime: ProjectivePoint,
    t: f64,
    trunc: &Truncation,
    rng: &mut ChaCha8Rng,
    mut emit: F,
) -> (usize, bool) {
    let mut w = LeftWalk::new(x);
    let mut scalar = 0.0;
    loop {
        if trunc.done(w.n, scalar) {
            return (w.n, false);
        }
        if w.n >= trunc.cap {
            return (w.n, true);
        }
        let n = w.n;
        w.step(mu.sample(rng));
        let next = if variant.uses_kappa() { w.product.kappa() } else { w.sigma };
        let (v, u) = (next - scalar, scalar - t);
        if variant.admits(v, u) {
            let inverse_position = variant.uses_kappa().then(|| w.product.inverse().act(&x_prime));
            emit(CrossingRecord { n, position: w.position, inverse_position, jump: v, residue: u });
        }
        scalar = next;
    }
}

/// Counted steps of path `path_index`, for inspection.
pub fn crossing_records(
    mu: &StepDistribution,
    variant: ResidueVariant,
    x: ProjectivePoint,
    x_prime: ProjectivePoint,
    t: f64,
    level: f64,
    plan: &RenewalPlan,
    path_index: u64,
) -> Vec<CrossingRecord> {
    let trunc = plan.truncation(level);
    let mut rng = plan.key.path_rng(path_index);
    let mut out = Vec::new();
    scan_residue(mu, variant, x, x_prime, t, &trunc, &mut rng, |r| out.push(r));
    out
}

/// Monte Carlo estimate of a residue process at `(x′, x, t)`.
pub fn residue_crossing(
    mu: &StepDistribution,
    f: &TargetFunction,
    x: ProjectivePoint,
    x_prime: ProjectivePoint,
    t: f64,
    variant: ResidueVariant,
    plan: &RenewalPlan,
) -> Result<RenewalEstimate> {
    f.require(variant.arity())?;
    if !(t > 0.0) {
        return Err(LabError::InvalidInput(format!("level {t} must be positive")));
    }
    let (_, u_hi) = f.u_support();
    let trunc = plan.truncation(t + u_hi.max(f.v_bound()).max(0.0));
    let totals = map_paths(plan.key, plan.n_paths, |_, rng| {
        let mut sum = 0.0;
        let (steps, hit_cap) = scan_residue(mu, variant, x, x_prime, t, &trunc, rng, |r| {
            sum += f.eval(r.inverse_position.as_ref(), &r.position, r.jump, r.residue);
        });
        PathTotal { sum, steps, hit_cap }
    });
    summarize(&totals)
}

/// Per-path count of up-crossings minus down-crossings of level `t` by the
/// cocycle (or by `κ`), with the final scalar.
pub fn crossing_balance(
    mu: &StepDistribution,
    x: ProjectivePoint,
    t: f64,
    use_kappa: bool,
    plan: &RenewalPlan,
) -> Vec<(i64, f64)> {
    let trunc = plan.truncation(t);
    map_paths(plan.key, plan.n_paths, |_, rng| {
        let mut w = LeftWalk::new(x);
        let mut scalar = 0.0;
        let mut balance = 0i64;
        while !trunc.done(w.n, scalar) && w.n < trunc.cap {
            w.step(mu.sample(rng));
            let next = if use_kappa { w.product.kappa() } else { w.sigma };
            if scalar < t && t <= next {
                balance += 1;
            } else if next < t && t <= scalar {
                balance -= 1;
            }
            scalar = next;
        }
        (balance, scalar)
    })
}

#[cfg(test)]
mod tests {
    use super::super::target::Profile;
    use super::*;
    use crate::fourier::Window;
    use crate::walk::lyapunov_estimate;

    fn plan(n: usize, sigma: f64) -> RenewalPlan {
        RenewalPlan::new(SeedKey::new(11), n, sigma)
    }

    #[test]
    fn empty_product_term_is_included() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let x = ProjectivePoint::from_angle(0.4);
        let f = TargetFunction::scalar(Window::Constant, Profile::Bump { center: 3.0, half_width: 0.5 }).unwrap();
        // At t = -3 only the empty product sees u = 3.
        let r = renewal_sum(&mu, &f, x, -3.0, ScalarKind::Cocycle, &plan(200, 0.5)).unwrap();
        assert!(r.value >= 1.0 - 1e-12);
    }

    #[test]
    fn cutoff_records_satisfy_interval_exactly() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let x = ProjectivePoint::from_angle(1.0);
        let p = plan(50, 0.5);
        for i in 0..50 {
            for r in crossing_records(&mu, ResidueVariant::Cutoff, x, x, 7.0, 12.0, &p, i) {
                assert!(r.residue < 0.0 && r.residue >= -r.jump);
            }
            for r in crossing_records(&mu, ResidueVariant::Cartan, x, x, 7.0, 12.0, &p, i) {
                assert!(r.residue < 0.0 && r.residue >= -r.jump);
                assert!(r.inverse_position.is_some());
            }
        }
    }

    #[test]
    fn monotone_walk_has_no_down_crossings() {
        let g = GroupElement::hyperbolic(0.7);
        let mu = StepDistribution::dirac(g, "g");
        let f = TargetFunction::jump(Window::Constant, Profile::indicator(-50.0, 50.0), Profile::indicator(-50.0, 50.0)).unwrap();
        let x = ProjectivePoint::from_angle(0.3);
        let p = plan(20, 0.7);
        let minus = residue_crossing(&mu, &f, x, x, 10.0, ResidueVariant::CutoffMinus, &p).unwrap();
        assert_eq!(minus.value, 0.0);
        let plus = residue_crossing(&mu, &f, x, x, 10.0, ResidueVariant::Cutoff, &p).unwrap();
        assert!((plus.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crossing_balance_is_one_above_level() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let sigma = lyapunov_estimate(&mu, 500, 100, SeedKey::new(1)).value;
        let x = ProjectivePoint::from_angle(0.2);
        for use_kappa in [false, true] {
            for (balance, last) in crossing_balance(&mu, x, 8.0, use_kappa, &plan(500, sigma)) {
                assert!(last > 8.0);
                assert_eq!(balance, 1);
            }
        }
    }

    #[test]
    fn wrong_arity_is_rejected() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let f = TargetFunction::scalar(Window::Constant, Profile::indicator(0.0, 1.0)).unwrap();
        let x = ProjectivePoint::from_angle(0.2);
        assert!(residue_crossing(&mu, &f, x, x, 5.0, ResidueVariant::Cutoff, &plan(10, 0.5)).is_err());
    }

    #[test]
    fn truncation_rule() {
        let p = plan(1, 0.5);
        let tr = p.truncation(40.0);
        assert_eq!((tr.cap, tr.floor), (320, 80));
        assert_eq!(p.truncation(-5.0).cap, 64);
    }
}
