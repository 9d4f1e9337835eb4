use crate::scalar::{wrap, Real};

/// A point of the projective line, stored as its angle in `[0, π)`.
///
/// The angle θ corresponds to the line through `(cos θ, sin θ)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ProjectivePoint<T: Real = f64> {
    theta: T,
}

impl<T: Real> ProjectivePoint<T> {
    pub fn from_angle(theta: T) -> Self {
        Self { theta: wrap(theta, T::PI()) }
    }

    /// Line spanned by a nonzero vector.
    pub fn from_vector(x: T, y: T) -> Self {
        Self::from_angle(y.atan2(x))
    }

    /// The point `[r : 1]`.
    pub fn from_affine(r: T) -> Self {
        Self::from_vector(r, T::one())
    }

    pub fn e1() -> Self {
        Self { theta: T::zero() }
    }

    pub fn e2() -> Self {
        Self { theta: T::FRAC_PI_2() }
    }

    pub fn angle(&self) -> T {
        self.theta
    }

    /// Unit representative `(cos θ, sin θ)`.
    pub fn unit(&self) -> [T; 2] {
        [self.theta.cos(), self.theta.sin()]
    }

    /// Affine coordinate `v₁ / v₂`; infinite at `e₁`.
    pub fn affine(&self) -> T {
        self.theta.cos() / self.theta.sin()
    }

    /// Orthogonal line.
    pub fn perp(&self) -> Self {
        Self::from_angle(self.theta + T::FRAC_PI_2())
    }

    /// Counterclockwise displacement from `self` to `other`, in `[0, π)`.
    pub fn ccw_to(&self, other: &Self) -> T {
        wrap(other.theta - self.theta, T::PI())
    }

    /// `|det(v, w)| / (‖v‖‖w‖) = |sin(θ − θ')|`.
    pub fn distance(&self, other: &Self) -> T {
        (self.theta - other.theta).sin().abs()
    }

    /// Circular coincidence within the angle tolerance.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let a = self.ccw_to(other);
        a.min(T::PI() - a) <= T::angle_tol()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn canonical_angle_range() {
        let p = ProjectivePoint::from_angle(-0.25);
        assert_abs_diff_eq!(p.angle(), PI - 0.25, epsilon = 1e-15);
        assert_eq!(ProjectivePoint::from_angle(PI).angle(), 0.0);
        let q = ProjectivePoint::from_vector(-1.0, -1.0);
        assert_abs_diff_eq!(q.angle(), PI / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn affine_round_trip() {
        let p = ProjectivePoint::from_affine(2.0);
        assert_abs_diff_eq!(p.affine(), 2.0, epsilon = 1e-14);
        assert!(ProjectivePoint::<f64>::from_affine(0.0).approx_eq(&ProjectivePoint::e2()));
    }

    #[test]
    fn distance_is_sine_of_gap() {
        let a = ProjectivePoint::from_angle(0.1);
        let b = ProjectivePoint::from_angle(3.0);
        assert_abs_diff_eq!(a.distance(&b), (2.9f64).sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(a.distance(&a.perp()), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let a = ProjectivePoint::<f32>::from_angle(0.5);
        let b = ProjectivePoint::<f32>::from_angle(0.5 + std::f32::consts::PI);
        assert!(a.distance(&b) < 1e-6);
    }
}
