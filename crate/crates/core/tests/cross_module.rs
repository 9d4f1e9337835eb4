//! Checks that tie several modules together: independent evaluations of the
//! same quantity must agree.

use approx::assert_abs_diff_eq;
use furstenberg::fourier::{bernoulli_fourier, BernoulliParams, Window};
use furstenberg::renewal::{residue_crossing, Profile, RenewalPlan, ResidueVariant, TargetFunction};
use furstenberg::rng::SeedKey;
use furstenberg::spectral::{leading_real, sigma_from_eigen, CircleGrid};
use furstenberg::walk::{lyapunov_estimate, StepDistribution};
use furstenberg::{GroupElement, ProjectivePoint};
use proptest::prelude::*;

fn zf() -> StepDistribution {
    StepDistribution::preset("zariski-free").unwrap()
}

#[test]
fn kappa_of_cat_map() {
    // gᵀg = [[5,3],[3,2]] has top eigenvalue (7 + 3√5)/2.
    let g = GroupElement::from_matrix(2.0, 1.0, 1.0, 1.0).unwrap();
    let expected = 0.5 * ((7.0 + 3.0 * 5f64.sqrt()) / 2.0).ln();
    assert_abs_diff_eq!(g.kappa(), expected, epsilon = 1e-12);
    assert_abs_diff_eq!(g.kappa(), 0.9624236501192069, epsilon = 1e-12);
}

#[test]
fn dyadic_bernoulli_transform() {
    let p = BernoulliParams::new(0.5).unwrap();
    assert_abs_diff_eq!(bernoulli_fourier(&p, 1.0), 2f64.sin() / 2.0, epsilon = 1e-10);
}

#[test]
fn spectral_and_monte_carlo_exponents_agree() {
    let mu = zf();
    let mc = lyapunov_estimate(&mu, 5_000, 400, SeedKey::new(11));
    let spec = sigma_from_eigen(&mu, CircleGrid::new(256).unwrap(), 0.02).unwrap();
    let tol = (0.02 * mc.value).max(3.0 * mc.stderr);
    assert!((spec.richardson - mc.value).abs() <= tol, "{} vs {}", spec.richardson, mc.value);

    // log k(s) = −sσ + O(s²)
    let s = 0.05;
    let k = leading_real(&mu, CircleGrid::new(256).unwrap(), s).unwrap();
    assert!(k < 1.0);
    assert!((k.ln() / s + spec.richardson).abs() < 0.05, "log k(s)/s = {}", k.ln() / s);
}

// Near-lattice jumps make the start point linger: at t = 20 the two bases
// below still differ by 0.07. By t = 100 the process has settled.
#[test]
fn residue_process_forgets_its_base_point() {
    let mu = zf();
    let f = TargetFunction::jump(
        Window::Constant,
        Profile::indicator(-20.0, 20.0),
        Profile::Bump { center: -0.3, half_width: 0.3 },
    )
    .unwrap();
    let sigma = 0.9154;
    let run = |angle: f64, seed: u64| {
        let plan = RenewalPlan::new(SeedKey::new(seed), 20_000, sigma);
        let x = ProjectivePoint::from_angle(angle);
        residue_crossing(&mu, &f, x, x, 100.0, ResidueVariant::Cutoff, &plan).unwrap()
    };
    let (a, b) = (run(0.3, 1), run(2.0, 2));
    assert!((a.value - b.value).abs() <= 3.0 * (a.stderr + b.stderr), "{a:?} vs {b:?}");
}

#[test]
fn same_seed_same_estimates() {
    let mu = zf();
    let a = lyapunov_estimate(&mu, 500, 64, SeedKey::derive(7, "walk", "x"));
    let b = lyapunov_estimate(&mu, 500, 64, SeedKey::derive(7, "walk", "x"));
    let c = lyapunov_estimate(&mu, 500, 64, SeedKey::derive(7, "walk", "y"));
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_ne!(a.value.to_bits(), c.value.to_bits());
}

proptest! {
    // Cocycle of a word = sum of the step cocycles along it.
    #[test]
    fn cocycle_telescopes_along_words(word in prop::collection::vec(0usize..2, 1..60), theta in 0.0..std::f64::consts::PI) {
        let mu = zf();
        let x = ProjectivePoint::from_angle(theta);
        let (mut g, mut y, mut sum) = (GroupElement::identity(), x, 0.0);
        for &i in &word {
            let h = mu.atom(i);
            sum += h.cocycle(&y);
            y = h.act(&y);
            g = h.mul(&g);
        }
        prop_assert!((g.cocycle(&x) - sum).abs() <= 1e-9 * (1.0 + sum.abs()));
        prop_assert!(g.act(&x).distance(&y) <= 1e-9);
        prop_assert!(g.cocycle(&x) <= g.kappa() + 1e-9);
    }
}
