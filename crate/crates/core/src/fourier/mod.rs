//! Fourier coefficients of measures on the projective line, oscillatory
//! integrals, and the Bernoulli-convolution characteristic function.

mod bernoulli;
mod coefficients;
mod oscillatory;

pub use bernoulli::{bernoulli_fourier, pisot_scan, BernoulliParams, PisotRow};
pub use coefficients::{decay_csv, decay_profile, fourier_coefficient, DecayBlock, FourierEstimate};
pub use oscillatory::{oscillatory_integral, sin_minus_x, OscillatoryIntegrand, Phase, Window};
