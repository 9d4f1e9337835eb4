use super::point::ProjectivePoint;
use crate::error::{LabError, Result};
use crate::scalar::Real;

/// Orientation of a configuration of points on the projective circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrientationSign {
    Positive,
    Negative,
    /// Two of the points coincide within the angle tolerance.
    Zero,
}

impl OrientationSign {
    pub fn value(self) -> i8 {
        match self {
            Self::Positive => 1,
            Self::Negative => -1,
            Self::Zero => 0,
        }
    }

    pub fn as_real<T: Real>(self) -> T {
        T::lit(f64::from(self.value()))
    }

    pub fn flip(self) -> Self {
        match self {
            Self::Positive => Self::Negative,
            Self::Negative => Self::Positive,
            Self::Zero => Self::Zero,
        }
    }
}

/// `+1` when moving counterclockwise from `x` one meets `y` before `z`.
pub fn orientation_sign<T: Real>(
    x: &ProjectivePoint<T>,
    y: &ProjectivePoint<T>,
    z: &ProjectivePoint<T>,
) -> OrientationSign {
    if x.approx_eq(y) || y.approx_eq(z) || z.approx_eq(x) {
        return OrientationSign::Zero;
    }
    if x.ccw_to(y) < x.ccw_to(z) {
        OrientationSign::Positive
    } else {
        OrientationSign::Negative
    }
}

/// `+1` when `x` is the start of the short arc from `x` to `y` in the
/// counterclockwise sense. Antipodal pairs have no short arc.
pub fn small_arc_sign<T: Real>(x: &ProjectivePoint<T>, y: &ProjectivePoint<T>) -> Result<OrientationSign> {
    if x.approx_eq(y) {
        return Ok(OrientationSign::Zero);
    }
    let a = x.ccw_to(y);
    if (a - T::FRAC_PI_2()).abs() <= T::angle_tol() {
        return Err(LabError::AmbiguousArc);
    }
    Ok(if a < T::FRAC_PI_2() { OrientationSign::Positive } else { OrientationSign::Negative })
}

/// Signed short-arc displacement from `x` to `y`, in `(-π/2, π/2)`.
pub fn signed_gap<T: Real>(x: &ProjectivePoint<T>, y: &ProjectivePoint<T>) -> T {
    let a = x.ccw_to(y);
    if a < T::FRAC_PI_2() {
        a
    } else {
        a - T::PI()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(t: f64) -> ProjectivePoint {
        ProjectivePoint::from_angle(t)
    }

    #[test]
    fn three_point_orientation() {
        assert_eq!(orientation_sign(&p(0.1), &p(0.3), &p(1.5)), OrientationSign::Positive);
        assert_eq!(orientation_sign(&p(0.1), &p(1.5), &p(0.3)), OrientationSign::Negative);
        assert_eq!(orientation_sign(&p(0.1), &p(0.1), &p(0.3)), OrientationSign::Zero);
    }

    #[test]
    fn antipodal_pair_is_ambiguous() {
        let r = small_arc_sign(&p(0.2), &p(0.2 + std::f64::consts::FRAC_PI_2));
        assert_eq!(r, Err(LabError::AmbiguousArc));
        assert_eq!(small_arc_sign(&p(3.1), &p(0.1)).unwrap(), OrientationSign::Positive);
    }

    proptest! {
        #[test]
        fn cyclic_and_antisymmetric(a in 0.0..std::f64::consts::PI, b in 0.0..std::f64::consts::PI, c in 0.0..std::f64::consts::PI) {
            let (x, y, z) = (p(a), p(b), p(c));
            let s = orientation_sign(&x, &y, &z);
            prop_assert_eq!(s, orientation_sign(&y, &z, &x));
            prop_assert_eq!(s.flip(), orientation_sign(&y, &x, &z));
        }
    }
}
