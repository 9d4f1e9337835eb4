use crate::error::{LabError, Result};
use crate::quadrature::{integrate_complex, QuadratureOptions};
use num_complex::Complex64;

/// Modulus of `∫_{b₁}^{b₂} e^{iλ e^{−u}} du` against `2(e^{b₁} + e^{b₂})/|λ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscBound {
    pub integral: Complex64,
    pub modulus: f64,
    pub bound: f64,
    pub nodes: usize,
}

/// Quadrature tolerance of the check.
pub const OSC_TOL: f64 = 1e-10;

impl OscBound {
    pub fn passes(&self) -> bool {
        self.modulus <= self.bound + OSC_TOL
    }
}

fn opts() -> QuadratureOptions {
    QuadratureOptions { abs_tol: 0.25 * OSC_TOL, rel_tol: 1e-13, max_nodes: 1_000_000 }
}

/// `∫_c^∞ e^{iw}/w dw` for `c ≥ 1`, by rotating the contour to `w = c + iy`:
/// `i e^{ic} ∫_0^∞ e^{−y}/(c + iy) dy`.
fn exp_integral_tail(c: f64) -> Result<(Complex64, usize)> {
    let q = integrate_complex(|y: f64| Complex64::new(c, y).inv() * (-y).exp(), 0.0, 64.0, opts())?;
    Ok((Complex64::i() * Complex64::from_polar(1.0, c) * q.value, q.nodes))
}

/// Integrand in the original variable.
fn direct(lambda: f64, a: f64, b: f64) -> Result<(Complex64, usize)> {
    let q = integrate_complex(|u: f64| Complex64::from_polar(1.0, lambda * (-u).exp()), a, b, opts())?;
    Ok((q.value, q.nodes))
}

/// Evaluate the integral and the bound.
///
/// With `w = |λ|e^{−u}` the integral becomes `∫_A^B e^{iw}/w dw`. Few
/// oscillations are integrated directly; otherwise the part with `w ≥ 10`
/// uses the rotated-contour tails, which are smooth.
pub fn osc_bound_check(b1: f64, b2: f64, lambda: f64) -> Result<OscBound> {
    if !(b1 <= b2) || lambda == 0.0 || !lambda.is_finite() {
        return Err(LabError::InvalidInput(format!("need b1 ≤ b2 and finite λ ≠ 0, got ({b1}, {b2}, {lambda})")));
    }
    let bound = 2.0 * (b1.exp() + b2.exp()) / lambda.abs();
    let mag = lambda.abs();
    let (lo_w, hi_w) = (mag * (-b2).exp(), mag * (-b1).exp());
    let (value, nodes) = if b1 == b2 {
        (Complex64::new(0.0, 0.0), 0)
    } else if hi_w - lo_w <= 100.0 {
        direct(mag, b1, b2)?
    } else {
        let split = lo_w.max(10.0);
        let (near, n0) = if split > lo_w { direct(mag, (mag / split).ln(), b2)? } else { (Complex64::new(0.0, 0.0), 0) };
        let (fa, n1) = exp_integral_tail(split)?;
        let (fb, n2) = exp_integral_tail(hi_w)?;
        (near + fa - fb, n0 + n1 + n2)
    };
    let integral = if lambda > 0.0 { value } else { value.conj() };
    Ok(OscBound { integral, modulus: integral.norm(), bound, nodes })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson rule in `u` with `panels` panels.
    fn simpson(b1: f64, b2: f64, lambda: f64, panels: usize) -> Complex64 {
        let h = (b2 - b1) / panels as f64;
        let f = |u: f64| Complex64::from_polar(1.0, lambda * (-u).exp());
        let mut acc = f(b1) + f(b2);
        for j in 1..panels {
            acc += f(b1 + j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn agrees_with_fine_simpson() {
        let got = osc_bound_check(-1.0, 1.0, 1.0).unwrap();
        let fine = simpson(-1.0, 1.0, 1.0, 200_000);
        assert!((got.integral - fine).norm() < 1e-8);
        assert!(got.passes());
    }

    #[test]
    fn contour_route_agrees_with_simpson() {
        // 2300 oscillations: both routes are feasible.
        let got = osc_bound_check(0.0, 1.0, 2e4).unwrap();
        let fine = simpson(0.0, 1.0, 2e4, 4_000_000);
        assert!((got.integral - fine).norm() < 1e-8, "{} vs {}", got.integral, fine);
    }

    #[test]
    fn huge_frequency_meets_bound() {
        let got = osc_bound_check(0.0, 1.0, 1e8).unwrap();
        assert!(got.modulus < 2.0 * (1.0 + 1f64.exp()) / 1e8 + 1e-9);
        let neg = osc_bound_check(0.0, 1.0, -1e8).unwrap();
        assert_eq!(neg.integral, got.integral.conj());
    }

    #[test]
    fn empty_interval() {
        let got = osc_bound_check(0.3, 0.3, 5.0).unwrap();
        assert_eq!(got.modulus, 0.0);
        assert!(got.bound > 0.0);
        assert!(osc_bound_check(1.0, 0.0, 5.0).is_err());
    }
}
