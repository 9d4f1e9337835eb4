use super::cartan::CartanTriple;
use super::point::ProjectivePoint;
use crate::error::{LabError, Result};
use crate::scalar::Real;

/// An element of SL₂(ℝ) stored as `exp(log_scale) · mat`.
///
/// `mat` is renormalised by a power of two after every product so that its
/// operator norm stays in `[1/2, 2]`; long products therefore never overflow.
/// The determinant of `mat` is `exp(-2 log_scale)` by construction and is
/// never recomputed from the entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement<T: Real = f64> {
    mat: [[T; 2]; 2],
    log_scale: T,
}

impl<T: Real> GroupElement<T> {
    /// Build from explicit entries; the determinant must equal 1 within `1e-9`.
    pub fn from_matrix(a: T, b: T, c: T, d: T) -> Result<Self> {
        let det = a * d - b * c;
        let tol = T::lit(1e-9).max(T::epsilon() * T::lit(16.0));
        if !(det - T::one()).abs().le(&tol) {
            return Err(LabError::InvalidInput(format!(
                "determinant {det} is not 1"
            )));
        }
        Ok(Self::from_parts(
            [[a, b], [c, d]],
            T::zero(),
        ))
    }

    /// Normalise a raw representation. `mat` is assumed to satisfy the
    /// determinant invariant for the given `log_scale`.
    pub(crate) fn from_parts(mat: [[T; 2]; 2], log_scale: T) -> Self {
        let mut g = Self { mat, log_scale };
        g.renormalize();
        g
    }

    pub fn identity() -> Self {
        Self { mat: [[T::one(), T::zero()], [T::zero(), T::one()]], log_scale: T::zero() }
    }

    /// Counterclockwise rotation by `theta`: maps the point at angle `φ` to `φ + theta`.
    pub fn rotation(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_parts([[c, -s], [s, c]], T::zero())
    }

    /// `diag(e^a, e^-a)`, built in log form so large `a` is exact.
    pub fn hyperbolic(a: T) -> Self {
        let small = (-(a + a)).exp();
        if a >= T::zero() {
            Self::from_parts([[T::one(), T::zero()], [T::zero(), small]], a)
        } else {
            Self::from_parts([[(a + a).exp(), T::zero()], [T::zero(), T::one()]], -a)
        }
    }

    pub fn log_scale(&self) -> T {
        self.log_scale
    }

    pub fn normalized_matrix(&self) -> [[T; 2]; 2] {
        self.mat
    }

    /// Full entries `exp(log_scale) · mat`; may overflow for long products.
    pub fn matrix(&self) -> [[T; 2]; 2] {
        let s = self.log_scale.exp();
        let m = self.mat;
        [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]]
    }

    /// Determinant recomputed from the entries. Only meaningful while
    /// `log_scale` is moderate; use it as a diagnostic.
    pub fn det(&self) -> T {
        let m = self.mat;
        (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * (self.log_scale + self.log_scale).exp()
    }

    /// Same element with `log_scale` shifted by `shift` and `mat` compensated.
    /// The entries are not renormalised.
    pub fn rescaled(&self, shift: T) -> Self {
        let f = (-shift).exp();
        let m = self.mat;
        Self {
            mat: [[m[0][0] * f, m[0][1] * f], [m[1][0] * f, m[1][1] * f]],
            log_scale: self.log_scale + shift,
        }
    }

    fn renormalize(&mut self) {
        let m = self.mat;
        let frob2 = m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1];
        if frob2 >= T::one() && frob2 < T::lit(4.0) {
            return;
        }
        if !(frob2 > T::zero()) || !frob2.is_finite() {
            return;
        }
        // Exact power-of-two scaling: frob ∈ [1, 2) ⇒ operator norm ∈ [1/√2, 2).
        let e = (frob2.log2() * T::lit(0.5)).floor();
        if e == T::zero() {
            return;
        }
        let f = T::lit(2.0).powf(-e);
        for row in self.mat.iter_mut() {
            for v in row.iter_mut() {
                *v = *v * f;
            }
        }
        self.log_scale = self.log_scale + e * T::LN_2();
    }

    /// Product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let a = self.mat;
        let b = rhs.mat;
        let mat = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        Self::from_parts(mat, self.log_scale + rhs.log_scale)
    }

    /// Inverse via the adjugate; exact in floating point.
    pub fn inverse(&self) -> Self {
        let m = self.mat;
        Self { mat: [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]], log_scale: self.log_scale }
    }

    fn apply_unit(&self, x: &ProjectivePoint<T>) -> [T; 2] {
        let [c, s] = x.unit();
        let m = self.mat;
        [m[0][0] * c + m[0][1] * s, m[1][0] * c + m[1][1] * s]
    }

    /// Projective action `x ↦ gx`.
    pub fn act(&self, x: &ProjectivePoint<T>) -> ProjectivePoint<T> {
        let [u, v] = self.apply_unit(x);
        ProjectivePoint::from_vector(u, v)
    }

    /// Norm cocycle `σ(g, x) = log(‖gv‖ / ‖v‖)`.
    ///
    /// Near-isometric `m` goes through `½ log1p(vᵀ(mᵀm − I)v / ‖v‖²)`, so isometries give
    /// exactly 0.
    pub fn cocycle(&self, x: &ProjectivePoint<T>) -> T {
        let [c, s] = x.unit();
        let [[a, b], [cc, d]] = self.mat;
        let p = a * a + cc * cc - T::one();
        let q = a * b + cc * d;
        let r = b * b + d * d - T::one();
        let norm2 = c * c + s * s;
        let excess = (p * c * c + (q + q) * c * s + r * s * s) / norm2;
        let log_ratio = if excess.abs() < T::lit(0.5) {
            excess.ln_1p()
        } else {
            let [u, v] = self.apply_unit(x);
            ((u * u + v * v) / norm2).ln()
        };
        self.log_scale + log_ratio * T::lit(0.5)
    }

    pub fn cartan(&self) -> CartanTriple<T> {
        CartanTriple::of(self.mat, self.log_scale)
    }

    /// `κ(g) = log ‖g‖`.
    pub fn kappa(&self) -> T {
        self.cartan().kappa
    }
}
