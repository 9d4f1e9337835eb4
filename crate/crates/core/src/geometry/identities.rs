//! Residuals of the exact geometric identities, evaluated on random instances.
//!
//! Every function returns a nonnegative residual that vanishes in exact
//! arithmetic; inequality checks return the amount by which they are violated.

use super::{orientation_sign, small_arc_sign, GroupElement, ProjectivePoint};
use rand::Rng;
use std::f64::consts::PI;

/// `k(a) · diag(e^κ, e^-κ) · k(b)` with uniform angles and `κ ∈ [0, kappa_max]`.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, kappa_max: f64) -> GroupElement {
    let a = rng.gen_range(0.0..2.0 * PI);
    let b = rng.gen_range(0.0..2.0 * PI);
    let k = rng.gen_range(0.0..kappa_max);
    GroupElement::rotation(a).mul(&GroupElement::hyperbolic(k)).mul(&GroupElement::rotation(b))
}

pub fn random_point<R: Rng + ?Sized>(rng: &mut R) -> ProjectivePoint {
    ProjectivePoint::from_angle(rng.gen_range(0.0..PI))
}

/// `|σ(gh, x) − σ(g, hx) − σ(h, x)|`.
pub fn cocycle_additivity(g: &GroupElement, h: &GroupElement, x: &ProjectivePoint) -> f64 {
    (g.mul(h).cocycle(x) - g.cocycle(&h.act(x)) - h.cocycle(x)).abs()
}

/// `|log d(gx, gy) − log d(x, y) + σ(g, x) + σ(g, y)|`.
pub fn distortion(g: &GroupElement, x: &ProjectivePoint, y: &ProjectivePoint) -> f64 {
    let lhs = g.act(x).distance(&g.act(y)).ln() - x.distance(y).ln();
    (lhs + g.cocycle(x) + g.cocycle(y)).abs()
}

/// Violation of `d(x_g^m, x) ≤ e^{σ−κ} ≤ d(x_g^m, x) + e^{−2κ}`.
pub fn sandwich_violation(g: &GroupElement, x: &ProjectivePoint) -> f64 {
    let c = g.cartan();
    let d = c.density.distance(x);
    let e = (g.cocycle(x) - c.kappa).exp();
    (d - e).max(e - d - (-2.0 * c.kappa).exp()).max(0.0)
}

/// Violation of the cocycle approximation
/// `|σ(g,x) − κ − log d(g⁻¹x', x)| ≤ 2 (e^{−2κ} + d(x_g^m, g⁻¹x')) / d(g⁻¹x', x)`,
/// or `None` when its hypothesis fails.
pub fn cocycle_approximation_violation(g: &GroupElement, x: &ProjectivePoint, x_prime: &ProjectivePoint) -> Option<f64> {
    let c = g.cartan();
    let pre = g.inverse().act(x_prime);
    let dist = pre.distance(x);
    let near = (-2.0 * c.kappa).exp() + c.density.distance(&pre);
    if near > 0.5 * dist {
        return None;
    }
    let lhs = (g.cocycle(x) - c.kappa - dist.ln()).abs();
    Some((lhs - 2.0 * near / dist).max(0.0))
}

/// `d(x_g^m, x_{g⁻¹}^M)`.
pub fn duality(g: &GroupElement) -> f64 {
    g.cartan().density.distance(&g.inverse().cartan().attracting)
}

/// Whether `sign(gx, gy) = sign(x, y, x_g^m)`, or `None` outside the hypothesis
/// `κ > 2`, `d(x_g^m, x), d(x_g^m, y) > e^{−κ}`.
pub fn sign_equality(g: &GroupElement, x: &ProjectivePoint, y: &ProjectivePoint) -> Option<bool> {
    let c = g.cartan();
    let floor = (-c.kappa).exp();
    if c.kappa <= 2.0 || c.density.distance(x) <= floor || c.density.distance(y) <= floor {
        return None;
    }
    let lhs = small_arc_sign(&g.act(x), &g.act(y)).ok()?;
    Some(lhs == orientation_sign(x, y, &c.density))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn element() -> impl Strategy<Value = GroupElement> {
        (0.0..2.0 * PI, 0.0..2.0 * PI, 0.0..5.0f64).prop_map(|(a, b, k)| {
            GroupElement::rotation(a).mul(&GroupElement::hyperbolic(k)).mul(&GroupElement::rotation(b))
        })
    }

    fn point() -> impl Strategy<Value = ProjectivePoint> {
        (0.0..PI).prop_map(ProjectivePoint::from_angle)
    }

    proptest! {
        #[test]
        fn cocycle_is_additive(g in element(), h in element(), x in point()) {
            prop_assert!(cocycle_additivity(&g, &h, &x) < 1e-9);
        }

        #[test]
        fn distortion_identity(g in element(), x in point(), y in point()) {
            prop_assume!(x.distance(&y) > 1e-3);
            prop_assert!(distortion(&g, &x, &y) < 1e-9);
        }

        #[test]
        fn sandwich_bound(g in element(), x in point()) {
            prop_assert!(sandwich_violation(&g, &x) < 1e-10);
        }

        #[test]
        fn approximation_bound(g in element(), x in point(), xp in point()) {
            if let Some(v) = cocycle_approximation_violation(&g, &x, &xp) {
                prop_assert!(v < 1e-10);
            }
        }

        #[test]
        fn density_point_is_inverse_attracting_point(g in element()) {
            prop_assume!(g.kappa() > 1e-6);
            prop_assert!(duality(&g) < 1e-9);
        }

        #[test]
        fn orientation_is_transported(g in element(), x in point(), y in point()) {
            if let Some(ok) = sign_equality(&g, &x, &y) {
                prop_assert!(ok);
            }
        }

        #[test]
        fn operator_norm_is_submultiplicative(g in element(), h in element()) {
            prop_assert!(g.mul(&h).kappa() <= g.kappa() + h.kappa() + 1e-12);
        }
    }

    #[test]
    fn random_element_is_unimodular() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let g = random_element(&mut rng, 3.0);
            assert!((g.det() - 1.0).abs() < 1e-9);
        }
    }
}
