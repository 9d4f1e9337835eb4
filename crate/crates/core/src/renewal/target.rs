use crate::error::{LabError, Result};
use crate::fourier::Window;
use crate::ProjectivePoint;
use std::f64::consts::PI;

/// Width of the raised-cosine shoulders of a smoothed indicator.
pub const SHOULDER: f64 = 0.1;

/// Compactly supported profile on the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// Raised cosine `½(1 + cos(π(u − c)/w))` on `|u − c| < w`.
    Bump { center: f64, half_width: f64 },
    /// Smoothed `1_[lo, hi]`: equal to 1 on `[lo + w/2, hi − w/2]`, with
    /// raised-cosine shoulders of width `w` centred on the endpoints, so the
    /// integral is exactly `hi − lo`.
    Plateau { lo: f64, hi: f64, shoulder: f64 },
}

impl Profile {
    /// Smoothed indicator with the default shoulder width.
    pub fn indicator(lo: f64, hi: f64) -> Self {
        Self::Plateau { lo, hi, shoulder: SHOULDER }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Bump { center, half_width } => center.is_finite() && half_width > 0.0 && half_width.is_finite(),
            Self::Plateau { lo, hi, shoulder } => lo.is_finite() && hi.is_finite() && shoulder > 0.0 && hi - lo >= shoulder,
        };
        if ok {
            Ok(())
        } else {
            Err(LabError::InvalidInput(format!("degenerate profile {self:?}")))
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match *self {
            Self::Bump { center, half_width } => (center - half_width, center + half_width),
            Self::Plateau { lo, hi, shoulder } => (lo - 0.5 * shoulder, hi + 0.5 * shoulder),
        }
    }

    /// Points where the profile is not smooth, in increasing order.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Self::Bump { center, half_width } => vec![center - half_width, center, center + half_width],
            Self::Plateau { lo, hi, shoulder } => {
                let w = 0.5 * shoulder;
                vec![lo - w, lo + w, hi - w, hi + w]
            }
        }
    }

    pub fn value(&self, u: f64) -> f64 {
        match *self {
            Self::Bump { center, half_width } => {
                let z = (u - center) / half_width;
                if z.abs() >= 1.0 {
                    0.0
                } else {
                    0.5 * (1.0 + (PI * z).cos())
                }
            }
            Self::Plateau { lo, hi, shoulder } => {
                let w = 0.5 * shoulder;
                // Distance past the nearer endpoint, positive outside.
                let out = (lo - u).max(u - hi);
                if out >= w {
                    0.0
                } else if out <= -w {
                    1.0
                } else {
                    0.5 * (1.0 - (PI * out / shoulder).sin())
                }
            }
        }
    }

    /// Exact integral over the whole line.
    pub fn integral(&self) -> f64 {
        match *self {
            Self::Bump { half_width, .. } => half_width,
            Self::Plateau { lo, hi, .. } => hi - lo,
        }
    }

    pub fn lipschitz(&self) -> f64 {
        match *self {
            Self::Bump { half_width, .. } => 0.5 * PI / half_width,
            Self::Plateau { shoulder, .. } => 0.5 * PI / shoulder,
        }
    }
}

fn window_lipschitz(w: &Window) -> f64 {
    match *w {
        Window::Constant => 0.0,
        Window::Bump { half_width, .. } => 0.5 * PI / half_width,
    }
}

/// Which arguments a target function takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arity {
    /// `f(y, u)`.
    Scalar,
    /// `f(y, v, u)`.
    Jump,
    /// `f(y′, y, v, u)`.
    Full,
}

/// Tensor-product test function `f(y′, y, v, u) = a(y′) b(y) c(v) d(u)`.
///
/// Every factor is bounded by 1, so `|f| ≤ 1`. The `u` factor is always
/// compactly supported; the `v` factor is present exactly for jump and full
/// arity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetFunction {
    pub arity: Arity,
    pub y: Window,
    pub y_prime: Window,
    pub v: Option<Profile>,
    pub u: Profile,
}

impl TargetFunction {
    pub fn scalar(y: Window, u: Profile) -> Result<Self> {
        u.validate()?;
        Ok(Self { arity: Arity::Scalar, y, y_prime: Window::Constant, v: None, u })
    }

    pub fn jump(y: Window, v: Profile, u: Profile) -> Result<Self> {
        u.validate()?;
        v.validate()?;
        Ok(Self { arity: Arity::Jump, y, y_prime: Window::Constant, v: Some(v), u })
    }

    pub fn full(y_prime: Window, y: Window, v: Profile, u: Profile) -> Result<Self> {
        u.validate()?;
        v.validate()?;
        Ok(Self { arity: Arity::Full, y, y_prime, v: Some(v), u })
    }

    pub fn u_support(&self) -> (f64, f64) {
        self.u.support()
    }

    /// `K = sup |v|` over the `v`-support; zero for scalar arity.
    pub fn v_bound(&self) -> f64 {
        self.v.map_or(0.0, |p| {
            let (lo, hi) = p.support();
            lo.abs().max(hi.abs())
        })
    }

    /// Certified Lipschitz constant: each factor is bounded by 1, so the sum
    /// of the factor constants bounds the product.
    pub fn lipschitz(&self) -> f64 {
        window_lipschitz(&self.y) + window_lipschitz(&self.y_prime) + self.v.map_or(0.0, |p| p.lipschitz()) + self.u.lipschitz()
    }

    /// Everything except the `u` factor.
    pub fn outer(&self, y_prime: Option<&ProjectivePoint>, y: &ProjectivePoint, v: f64) -> f64 {
        let a = match (self.arity, y_prime) {
            (Arity::Full, Some(p)) => self.y_prime.value(p.angle()),
            _ => 1.0,
        };
        let c = self.v.map_or(1.0, |p| p.value(v));
        a * self.y.value(y.angle()) * c
    }

    pub fn eval(&self, y_prime: Option<&ProjectivePoint>, y: &ProjectivePoint, v: f64, u: f64) -> f64 {
        let d = self.u.value(u);
        if d == 0.0 {
            return 0.0;
        }
        d * self.outer(y_prime, y, v)
    }

    pub(crate) fn require(&self, arity: Arity) -> Result<()> {
        if self.arity == arity {
            Ok(())
        } else {
            Err(LabError::InvalidInput(format!("target has arity {:?}, expected {arity:?}", self.arity)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, QuadratureOptions};
    use proptest::prelude::*;

    #[test]
    fn plateau_integral_is_exact() {
        let p = Profile::indicator(0.0, 2.0);
        let q = integrate(|u| p.value(u), -1.0, 3.0, QuadratureOptions::default()).unwrap();
        assert!((q.value - 2.0).abs() < 1e-9);
        assert_eq!(p.value(1.0), 1.0);
        assert_eq!(p.value(2.05), 0.0);
        assert!((p.value(0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let f = TargetFunction::scalar(Window::Constant, Profile::indicator(0.0, 1.0)).unwrap();
        assert!(f.require(Arity::Jump).is_err());
        assert!(TargetFunction::scalar(Window::Constant, Profile::indicator(0.0, 0.01)).is_err());
    }

    proptest! {
        #[test]
        fn vanishes_outside_support(u in -50.0..50.0f64, v in -50.0..50.0f64, th in 0.0..std::f64::consts::PI) {
            let f = TargetFunction::jump(
                Window::Bump { center: 1.0, half_width: 0.3 },
                Profile::indicator(1.0, 4.0),
                Profile::Bump { center: -1.0, half_width: 0.5 },
            ).unwrap();
            let y = ProjectivePoint::from_angle(th);
            let val = f.eval(None, &y, v, u);
            prop_assert!(val.abs() <= 1.0);
            let (ulo, uhi) = f.u_support();
            if u <= ulo || u >= uhi || v.abs() > f.v_bound() {
                prop_assert_eq!(val, 0.0);
            }
        }

        #[test]
        fn profiles_are_lipschitz(a in -5.0..5.0f64, h in -0.05..0.05f64) {
            for p in [Profile::indicator(-1.0, 1.0), Profile::Bump { center: 0.3, half_width: 0.7 }] {
                prop_assert!((p.value(a + h) - p.value(a)).abs() <= p.lipschitz() * h.abs() + 1e-15);
            }
        }
    }
}
