use super::process::{RenewalEstimate, ResidueVariant};
use super::target::{Arity, Profile, TargetFunction};
use crate::error::{LabError, Result};
use crate::quadrature::{integrate, QuadratureOptions};
use crate::stationary::EmpiricalMeasure;
use crate::stats::mean_stderr;
use crate::walk::StepDistribution;
use rayon::prelude::*;

/// Which limit to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitVariant {
    /// `(1/σ) ∫ ∫_{-t}^∞ f(y, u) du dν(y)`.
    Renewal { t: f64 },
    /// `(1/σ) ∫ ∫ ∫_{-t}^∞ f(hy, σ(h,y), u) du dμ(h) dν(y)`.
    Residue { t: f64 },
    /// Cut-off residue limits; `u` runs over `[−σ(h,y), 0]` for the plus
    /// variants and `[0, −σ(h,y)]` for the minus variants, empty when the
    /// orientation is wrong.
    Crossing(ResidueVariant),
}

/// `∫_a^b d(u) du` for the `u` profile, split at its breakpoints.
pub fn profile_integral(p: &Profile, a: f64, b: f64) -> Result<f64> {
    if !(b > a) {
        return Ok(0.0);
    }
    let (lo, hi) = p.support();
    let (a, b) = (a.max(lo), b.min(hi));
    if !(b > a) {
        return Ok(0.0);
    }
    let opts = QuadratureOptions { abs_tol: 1e-8, rel_tol: 1e-12, ..QuadratureOptions::default() };
    let mut cuts = vec![a];
    cuts.extend(p.breakpoints().into_iter().filter(|&c| c > a && c < b));
    cuts.push(b);
    cuts.windows(2).map(|w| integrate(|u| p.value(u), w[0], w[1], opts).map(|q| q.value)).sum()
}

/// Monte Carlo evaluation of the limit of a renewal or residue estimator.
///
/// Each `y` sample of `nu` (and the matching `y′` sample of `nu_check` for
/// full arity) contributes an exact average over the atoms `h` of `μ`; the
/// inner `u`-integral is done by quadrature at tolerance `1e-8`. The result
/// carries the factor `1/σ̂`.
pub fn limit_oracle(
    mu: &StepDistribution,
    f: &TargetFunction,
    variant: LimitVariant,
    nu: &EmpiricalMeasure,
    nu_check: Option<&EmpiricalMeasure>,
    sigma_hat: f64,
) -> Result<RenewalEstimate> {
    let expected = match variant {
        LimitVariant::Renewal { .. } => Arity::Scalar,
        LimitVariant::Residue { .. } => Arity::Jump,
        LimitVariant::Crossing(v) => v.arity(),
    };
    f.require(expected)?;
    let y_prime = match (expected, nu_check) {
        (Arity::Full, Some(m)) if m.len() >= nu.len() => Some(m.samples()),
        (Arity::Full, _) => return Err(LabError::InvalidInput("full arity needs a reversed sample pool of matching size".into())),
        _ => None,
    };
    let per_sample: Vec<f64> = nu
        .samples()
        .par_iter()
        .enumerate()
        .map(|(i, y)| -> Result<f64> {
            let yp = y_prime.map(|s| &s[i]);
            if let LimitVariant::Renewal { t } = variant {
                return Ok(f.outer(None, y, 0.0) * profile_integral(&f.u, -t, f64::INFINITY)?);
            }
            let mut acc = 0.0;
            for (w, h) in mu.atoms() {
                let v = h.cocycle(y);
                let hy = h.act(y);
                let outer = f.outer(yp, &hy, v);
                if outer == 0.0 {
                    continue;
                }
                let (a, b) = match variant {
                    LimitVariant::Residue { t } => (-t, f64::INFINITY),
                    LimitVariant::Crossing(c) if c.is_minus() => (0.0, -v),
                    LimitVariant::Crossing(ResidueVariant::Full) => (f64::NEG_INFINITY, f64::INFINITY),
                    _ => (-v, 0.0),
                };
                acc += w * outer * profile_integral(&f.u, a, b)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let (mean, stderr) = mean_stderr(&per_sample);
    Ok(RenewalEstimate {
        value: mean / sigma_hat,
        stderr: stderr / sigma_hat,
        n_paths: per_sample.len(),
        max_steps: 0,
        cap_hit_fraction: 0.0,
    })
}
