//! Projective line, SL₂(ℝ) action, norm cocycle and Cartan decomposition.

mod cartan;
mod group;
pub mod identities;
mod orientation;
mod point;

pub use cartan::CartanTriple;
pub use group::GroupElement;
pub use orientation::{orientation_sign, signed_gap, small_arc_sign, OrientationSign};
pub use point::ProjectivePoint;

use crate::error::Result;
use crate::quadrature::{integrate, QuadratureOptions};
use crate::scalar::Real;

/// Newton–Leibniz on the circle: `sign(x, y) · ∫ φ'` over the short arc from
/// `x` to `y`, which equals `φ(y) − φ(x)` for a lift `φ` with derivative `dphi`.
pub fn arc_integral<T: Real, F: FnMut(T) -> T>(dphi: F, x: &ProjectivePoint<T>, y: &ProjectivePoint<T>) -> Result<T> {
    let sign = small_arc_sign(x, y)?;
    let gap = signed_gap(x, y);
    let (lo, hi) = if gap >= T::zero() { (x.angle(), x.angle() + gap) } else { (y.angle(), y.angle() - gap) };
    let q = integrate(dphi, lo, hi, QuadratureOptions::default())?;
    Ok(sign.as_real::<T>() * q.value)
}
