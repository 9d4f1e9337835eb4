//! Random products in SL₂(ℝ): projective geometry, random walks, stationary
//! measures, Fourier decay, renewal estimators and transfer operators.
//!
//! The geometry kernel is generic over [`scalar::Real`]; the stochastic layers
//! work in `f64`. Concrete aliases are exported at the crate root.

pub mod error;
pub mod fourier;
pub mod geometry;
pub mod quadrature;
pub mod renewal;
pub mod rng;
pub mod scalar;
pub mod spectral;
pub mod stationary;
pub mod stats;
pub mod walk;

pub use error::{LabError, Result};
pub use geometry::OrientationSign;

/// Projective point in double precision.
pub type ProjectivePoint = geometry::ProjectivePoint<f64>;
/// Group element in double precision.
pub type GroupElement = geometry::GroupElement<f64>;
/// Cartan decomposition in double precision.
pub type CartanTriple = geometry::CartanTriple<f64>;
