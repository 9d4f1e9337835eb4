use super::FourierEstimate;
use crate::error::{LabError, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Phase functions: lifts of circle maps with `φ(θ + π) = φ(θ) + π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    /// `φ(θ) = θ`.
    Identity,
    /// `φ(θ) = θ + a sin 2θ`, monotone for `|a| < 1/2`.
    Warp { amplitude: f64 },
}

impl Phase {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Self::Identity => t,
            Self::Warp { amplitude } => t + amplitude * (2.0 * t).sin(),
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        match *self {
            Self::Identity => 1.0,
            Self::Warp { amplitude } => 1.0 + 2.0 * amplitude * (2.0 * t).cos(),
        }
    }

    pub fn second_deriv(&self, t: f64) -> f64 {
        match *self {
            Self::Identity => 0.0,
            Self::Warp { amplitude } => -4.0 * amplitude * (2.0 * t).sin(),
        }
    }

    /// `φ(t + h) − φ(t)`, accurate to full relative precision for tiny `h`.
    pub fn increment(&self, t: f64, h: f64) -> f64 {
        match *self {
            Self::Identity => h,
            Self::Warp { amplitude } => h + 2.0 * amplitude * (2.0 * t + h).cos() * h.sin(),
        }
    }

    /// `φ'(t + h) − φ'(t)`, accurate for tiny `h`.
    pub fn deriv_increment(&self, t: f64, h: f64) -> f64 {
        match *self {
            Self::Identity => 0.0,
            Self::Warp { amplitude } => -4.0 * amplitude * (2.0 * t + h).sin() * h.sin(),
        }
    }

    /// `φ(t + h) − φ(t) − φ'(t) h`, accurate for tiny `h`.
    pub fn increment_defect(&self, t: f64, h: f64) -> f64 {
        match *self {
            Self::Identity => 0.0,
            Self::Warp { amplitude } => {
                // a [sin 2t (cos 2h − 1) + cos 2t (sin 2h − 2h)]
                let (s, c) = (2.0 * t).sin_cos();
                let cos_m1 = -2.0 * h.sin().powi(2);
                amplitude * (s * cos_m1 + c * sin_minus_x(2.0 * h))
            }
        }
    }
}

/// `sin x − x` without cancellation for small `x`.
pub fn sin_minus_x(x: f64) -> f64 {
    if x.abs() < 1e-2 {
        let x2 = x * x;
        -x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    } else {
        x.sin() - x
    }
}

/// Amplitude functions on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    Constant,
    /// Raised cosine `½(1 + cos(π(θ − c)/w))` on `|θ − c| < w`, with `w < π/2`.
    Bump { center: f64, half_width: f64 },
}

impl Window {
    /// Offset of `t` from the centre, reduced to `[-π/2, π/2)`.
    fn offset(center: f64, t: f64) -> f64 {
        (t - center + PI / 2.0).rem_euclid(PI) - PI / 2.0
    }

    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Self::Constant => 1.0,
            Self::Bump { center, half_width } => {
                let u = Self::offset(center, t);
                if u.abs() >= half_width {
                    0.0
                } else {
                    0.5 * (1.0 + (PI * u / half_width).cos())
                }
            }
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        match *self {
            Self::Constant => 0.0,
            Self::Bump { center, half_width } => {
                let u = Self::offset(center, t);
                if u.abs() >= half_width {
                    0.0
                } else {
                    -0.5 * PI / half_width * (PI * u / half_width).sin()
                }
            }
        }
    }

    /// `r(t + h) − r(t)` for tiny `h`, inside the support.
    pub fn increment(&self, t: f64, h: f64) -> f64 {
        match *self {
            Self::Constant => 0.0,
            Self::Bump { center, half_width } => {
                let u = Self::offset(center, t);
                if u.abs() >= half_width || (u + h).abs() >= half_width {
                    return self.value(t + h) - self.value(t);
                }
                let k = PI / half_width;
                // ½[cos(k(u+h)) − cos(ku)] = −sin(k(u + h/2)) sin(kh/2)
                -(k * (u + 0.5 * h)).sin() * (0.5 * k * h).sin()
            }
        }
    }

    /// Lift `t` into a fundamental domain centred on the support.
    pub fn lift(&self, t: f64) -> f64 {
        match *self {
            Self::Constant => t,
            Self::Bump { center, .. } => center + Self::offset(center, t),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        1.0
    }
}

/// `θ ↦ e^{iξφ(θ)} r(θ)` with a validated regularity constant `C₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatoryIntegrand {
    pub phase: Phase,
    pub window: Window,
    /// Bounds `‖r‖_{C¹}`, `‖φ‖_{C²}` on the lifted support, and `1/min |φ'|` on the support.
    pub c1: f64,
}

impl OscillatoryIntegrand {
    /// Validate on a 10⁴-node grid: `φ'` must stay away from 0 on the support.
    pub fn new(phase: Phase, window: Window) -> Result<Self> {
        let nodes = 10_000;
        let (mut r_c1, mut phi_c2, mut min_dphi) = (0.0f64, 0.0f64, f64::INFINITY);
        for j in 0..nodes {
            let t = window.lift(j as f64 * PI / nodes as f64);
            let r = window.value(t);
            r_c1 = r_c1.max(r.abs() + window.deriv(t).abs());
            if r > 0.0 {
                phi_c2 = phi_c2.max(phase.value(t).abs() + phase.deriv(t).abs() + phase.second_deriv(t).abs());
                min_dphi = min_dphi.min(phase.deriv(t));
            }
        }
        if !(min_dphi > 1e-6) {
            return Err(LabError::InvalidInput("phase is not increasing on the support".into()));
        }
        let c1 = r_c1.max(phi_c2).max(1.0 / min_dphi) * 1.01;
        Ok(Self { phase, window, c1 })
    }

    pub fn eval(&self, t: f64, xi: f64) -> Complex64 {
        let u = self.window.lift(t);
        let r = self.window.value(u);
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(r, xi * self.phase.value(u))
    }
}

/// `mean of e^{iξφ(θ)} r(θ)` over sample angles, with a `‖r‖∞/√n` error bar.
pub fn oscillatory_integral(angles: &[f64], integrand: &OscillatoryIntegrand, xi: f64) -> FourierEstimate {
    let partial: Vec<Complex64> = angles.par_chunks(4096).map(|c| c.iter().map(|&t| integrand.eval(t, xi)).sum()).collect();
    let n = angles.len();
    let total: Complex64 = partial.into_iter().sum();
    FourierEstimate { frequency: xi, value: total / n as f64, stderr: integrand.window.sup_norm() / (n as f64).sqrt(), n_samples: n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::fourier_coefficient;

    #[test]
    fn reduces_to_fourier_coefficient() {
        let angles: Vec<f64> = (0..2000).map(|j| (j as f64 * 0.611).rem_euclid(PI)).collect();
        let f = OscillatoryIntegrand::new(Phase::Identity, Window::Constant).unwrap();
        let a = oscillatory_integral(&angles, &f, 6.0).value;
        let b = fourier_coefficient(&angles, 3).value;
        assert_eq!(a, b);
    }

    #[test]
    fn warp_increment_matches_difference() {
        let p = Phase::Warp { amplitude: 0.3 };
        for &(t, h) in &[(0.4, 0.2), (1.1, -0.05), (2.0, 1e-3)] {
            assert!((p.increment(t, h) - (p.value(t + h) - p.value(t))).abs() < 1e-14);
            let d = p.value(t + h) - p.value(t) - p.deriv(t) * h;
            assert!((p.increment_defect(t, h) - d).abs() < 1e-13);
            assert!((p.deriv_increment(t, h) - (p.deriv(t + h) - p.deriv(t))).abs() < 1e-14);
        }
        // Tiny steps keep relative precision.
        let h = 1e-30;
        assert!((p.increment_defect(0.7, h) / (0.5 * p.second_deriv(0.7) * h * h) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn bump_increment_matches_difference() {
        let w = Window::Bump { center: 0.8, half_width: 0.4 };
        for &(t, h) in &[(0.7, 0.05), (1.0, -0.1)] {
            assert!((w.increment(t, h) - (w.value(t + h) - w.value(t))).abs() < 1e-14);
        }
        assert_eq!(w.value(0.8 + PI), 1.0);
        assert_eq!(w.value(1.3), 0.0);
    }

    #[test]
    fn non_monotone_phase_rejected() {
        assert!(OscillatoryIntegrand::new(Phase::Warp { amplitude: 0.6 }, Window::Constant).is_err());
        let ok = OscillatoryIntegrand::new(Phase::Warp { amplitude: 0.3 }, Window::Bump { center: 0.8, half_width: 0.45 }).unwrap();
        // min φ' on the support is 1 + 0.6 cos 2.5 ≈ 0.519.
        assert!(ok.c1 >= 1.0 / (1.0 + 0.6 * 2.5f64.cos()));
    }
}
