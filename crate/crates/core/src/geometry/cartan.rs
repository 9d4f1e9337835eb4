use super::point::ProjectivePoint;
use crate::scalar::Real;

/// Cartan decomposition `g = k · diag(e^κ, e^-κ) · l` with `k, l ∈ SO(2)`.
///
/// `attracting` is `k e₁`, the top left-singular direction. `density` is
/// `l⁻¹ e₂`, the direction contracted most by `g`; it equals the attracting
/// point of `g⁻¹`. Below `κ = 1e-12` the axes are not determined and the
/// conventional axes `e₁`, `e₂` are returned with `degenerate` set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartanTriple<T: Real = f64> {
    pub kappa: T,
    pub attracting: ProjectivePoint<T>,
    pub density: ProjectivePoint<T>,
    /// Angle of the rotation `k`.
    pub k_angle: T,
    /// Angle of the rotation `l`, in `[0, 2π)`.
    pub l_angle: T,
    pub degenerate: bool,
}

impl<T: Real> CartanTriple<T> {
    pub(crate) fn of(m: [[T; 2]; 2], log_scale: T) -> Self {
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        let [[a, b], [c, d]] = m;
        // mᵀm = [[p, q], [q, r]]
        let p = a * a + c * c;
        let q = a * b + c * d;
        let r = b * b + d * d;
        let spread = ((p - r) * half).hypot(q);
        // The spread equals e^{-2 log_scale} · sinh 2κ; asinh keeps small κ accurate.
        let kappa = if log_scale < T::lit(20.0) {
            half * ((two * log_scale).exp() * spread).asinh()
        } else {
            log_scale + half * ((p + r) * half + spread).ln()
        };
        if !(kappa >= T::lit(1e-12)) {
            return Self {
                kappa: kappa.max(T::zero()),
                attracting: ProjectivePoint::e1(),
                density: ProjectivePoint::e2(),
                k_angle: T::zero(),
                l_angle: T::zero(),
                degenerate: true,
            };
        }
        let top_right = half * (two * q).atan2(p - r);
        let density = ProjectivePoint::from_angle(top_right + T::FRAC_PI_2());
        let mmt_q = a * c + b * d;
        let mmt_diff = (a * a + b * b) - (c * c + d * d);
        let k_angle = half * (two * mmt_q).atan2(mmt_diff);
        let attracting = ProjectivePoint::from_angle(k_angle);
        // l = R(α) with l⁻¹ e₂ ∥ density; fix the sign so that g l⁻¹ e₁ is a
        // positive multiple of k e₁.
        let mut l_angle = T::FRAC_PI_2() - density.angle();
        let (s, co) = l_angle.sin_cos();
        let w = [a * co - b * s, c * co - d * s];
        let (ks, kc) = k_angle.sin_cos();
        if w[0] * kc + w[1] * ks < T::zero() {
            l_angle = l_angle + T::PI();
        }
        let tau = T::PI() + T::PI();
        l_angle = l_angle - tau * (l_angle / tau).floor();
        Self { kappa, attracting, density, k_angle, l_angle, degenerate: false }
    }

    /// Reassemble `k · diag(e^κ, e^-κ) · l`.
    pub fn reconstruct(&self) -> [[T; 2]; 2] {
        let (ks, kc) = self.k_angle.sin_cos();
        let (ls, lc) = self.l_angle.sin_cos();
        let e = self.kappa.exp();
        let ei = (-self.kappa).exp();
        // a · l
        let al = [[e * lc, -e * ls], [ei * ls, ei * lc]];
        [
            [kc * al[0][0] - ks * al[1][0], kc * al[0][1] - ks * al[1][1]],
            [ks * al[0][0] + kc * al[1][0], ks * al[0][1] + kc * al[1][1]],
        ]
    }

    /// Signed angular offset of `gx` from the attracting point:
    /// `-atan(e^{-2κ} cot(θ_x - θ_density))`. Accurate to full relative
    /// precision for arbitrarily large `κ`.
    pub fn image_offset(&self, x: &ProjectivePoint<T>) -> T {
        let delta = x.angle() - self.density.angle();
        let (s, c) = delta.sin_cos();
        -((-(self.kappa + self.kappa)).exp() * c / s).atan()
    }

    /// Signed angular offset of `g⁻¹x` from the density point:
    /// `-atan(e^{-2κ} cot(θ_x - θ_attracting))`.
    pub fn preimage_offset(&self, x: &ProjectivePoint<T>) -> T {
        let delta = x.angle() - self.attracting.angle();
        let (s, c) = delta.sin_cos();
        -((-(self.kappa + self.kappa)).exp() * c / s).atan()
    }

    /// `σ(g, x) - κ(g) = ½ log(sin²δ + e^{-4κ} cos²δ)` with `δ = θ_x - θ_density`.
    pub fn cocycle_defect(&self, x: &ProjectivePoint<T>) -> T {
        let delta = x.angle() - self.density.angle();
        let (s, c) = delta.sin_cos();
        let k4 = (-(T::lit(4.0) * self.kappa)).exp();
        T::lit(0.5) * (s * s + k4 * c * c).ln()
    }
}
