use crate::error::{LabError, Result};
use crate::fourier::{Phase, Window};
use crate::geometry::orientation_sign;
use crate::rng::map_paths;
use crate::walk::StepDistribution;
use crate::{CartanTriple, GroupElement, ProjectivePoint};
use num_complex::Complex64;

use super::process::RenewalPlan;

/// Parameters of the phase-linearisation check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSetup {
    pub x: ProjectivePoint,
    pub y: ProjectivePoint,
    pub s: f64,
    pub t: f64,
    /// `+1` or `−1`; the frequency is `sign · e^{2t+s}`.
    pub sign: f64,
    /// Relative scale of the regularity margins.
    pub eps3: f64,
    pub phase: Phase,
    pub window: Window,
}

impl LambdaSetup {
    pub fn xi(&self) -> f64 {
        self.sign * (2.0 * self.t + self.s).exp()
    }

    /// Lower bound `2e^{−ε₃ s}` on the distances from `g⁻¹x` to `x` and `y`.
    pub fn separation(&self) -> f64 {
        2.0 * (-self.eps3 * self.s).exp()
    }

    fn validate(&self) -> Result<()> {
        if !(self.t > 10.0 * self.s && self.s > 0.0) {
            return Err(LabError::InvalidInput(format!("need t > 10 s > 0, got s={}, t={}", self.s, self.t)));
        }
        if !(self.x.distance(&self.y) > self.separation()) {
            return Err(LabError::InvalidInput("x and y are closer than the separation margin".into()));
        }
        Ok(())
    }
}

/// One retained element of the filtered crossing set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaRow {
    pub path: usize,
    pub n: usize,
    pub kappa: f64,
    /// `|Λ₀(g) − Λ₁(g)|`.
    pub gap: f64,
    pub lambda0_modulus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaTable {
    pub rows: Vec<LambdaRow>,
    /// Up-crossings seen before filtering.
    pub crossings: usize,
    pub max_gap: f64,
    pub mean_gap: f64,
}

/// `atan(w)/w − 1` without cancellation.
fn atan_ratio_m1(w: f64) -> f64 {
    if w.abs() < 1e-4 {
        let w2 = w * w;
        -w2 / 3.0 + w2 * w2 / 5.0
    } else {
        w.atan() / w - 1.0
    }
}

/// `sin(a − o)/sin a − 1 = (cos o − 1) − cot a · sin o`.
fn shift_ratio_m1(a: f64, o: f64) -> f64 {
    -2.0 * (0.5 * o).sin().powi(2) - o.sin() * a.cos() / a.sin()
}

/// Membership of `g` (with `κ(Tg)` given) in the filtered crossing set.
pub fn in_filtered_set(c: &CartanTriple, kappa_prev: f64, setup: &LambdaSetup) -> bool {
    let o_pre = c.preimage_offset(&setup.x);
    let ginv_x = ProjectivePoint::from_angle(c.density.angle() + o_pre);
    kappa_prev < setup.t
        && setup.t <= c.kappa
        && (c.kappa - kappa_prev).abs() < setup.eps3 * setup.s
        && o_pre.sin().abs() < (-setup.t).exp()
        && ginv_x.distance(&setup.x) > setup.separation()
        && ginv_x.distance(&setup.y) > setup.separation()
}

/// `(|Λ₀ − Λ₁|, |Λ₀|)` for the element with Cartan frame `c`.
///
/// Both `gx` and `gy` lie within `e^{−2κ}` of the attracting point, far below
/// double resolution, so all quantities are expressed through their offsets
/// from the frame and the phase difference `Λ₀ − Λ₁` is assembled from terms
/// that are each computed to full relative precision. The result is exact
/// for the element `R(θ_M) diag(e^κ, e^{−κ}) l` defined by the computed frame.
pub fn lambda_gap(c: &CartanTriple, setup: &LambdaSetup) -> (f64, f64) {
    let (x, y) = (&setup.x, &setup.y);
    let xi = setup.xi();
    let base = c.attracting.angle();
    let e2k = (-2.0 * c.kappa).exp();
    let (ox, oy) = (c.image_offset(x), c.image_offset(y));
    let o_pre = c.preimage_offset(x);
    let (ax, ay) = (x.angle() - c.density.angle(), y.angle() - c.density.angle());
    let (sx, sy) = (ax.sin(), ay.sin());
    let sxy = (x.angle() - y.angle()).sin();

    let phase = setup.phase;
    let d0 = phase.deriv(base);
    let (px, py) = (e2k * ax.cos() / sx, e2k * ay.cos() / sy);
    let w = e2k * sxy / (sx * sy * (1.0 + px * py));
    // Λ₀ phase: ξ(φ(gx) − φ(gy)) = L (1 + e₁)(1 + e₃) + ξ (defect_x − defect_y).
    let lead = xi * d0 * e2k * sxy / (sx * sy);
    let e1 = atan_ratio_m1(w);
    let e3 = -px * py / (1.0 + px * py);
    let defects = xi * (phase.increment_defect(base, ox) - phase.increment_defect(base, oy));

    // Λ₁ phase: −sign(g⁻¹x, x, y) ξ φ'(gx) d(x,y) e^{−2κ} / (d(g⁻¹x,x) d(g⁻¹x,y)).
    let ginv_x = ProjectivePoint::from_angle(c.density.angle() + o_pre);
    let sign = -orientation_sign(&ginv_x, x, y).as_real::<f64>();
    let e4 = phase.deriv_increment(base, ox) / d0;
    let (ux, uy) = (shift_ratio_m1(ax, o_pre), shift_ratio_m1(ay, o_pre));
    let agrees = sign * (sxy / (sx * sy)).signum() > 0.0;
    let diff = if agrees {
        let ea = e1 + e3 + e1 * e3;
        let eb = (e4 - ux - uy - ux * uy) / ((1.0 + ux) * (1.0 + uy));
        lead * (ea - eb) + defects
    } else {
        let a = lead * (1.0 + e1) * (1.0 + e3) + defects;
        let b = -lead * (1.0 + e4) / ((1.0 + ux) * (1.0 + uy));
        a - b
    };

    // |Λ₀ − Λ₁| = r(gx) |(e^{iD} − 1) r(gy) + (r(gy) − r(gx))|.
    let r = setup.window;
    let rx = r.value(base) + r.increment(base, ox);
    let dr = r.increment(base, oy) - r.increment(base, ox);
    let ry = rx + dr;
    let rot_m1 = Complex64::new(-2.0 * (0.5 * diff).sin().powi(2), diff.sin());
    let gap = rx * (rot_m1 * ry + dr).norm();
    (gap, (rx * ry).abs())
}

/// Sample right-extended paths, keep the up-crossings of level `t` by `κ`
/// that pass the regularity filter, and tabulate `|Λ₀ − Λ₁|` on them.
pub fn lambda_approx_check(mu: &StepDistribution, setup: &LambdaSetup, plan: &RenewalPlan) -> Result<LambdaTable> {
    setup.validate()?;
    let trunc = plan.truncation(setup.t);
    let per_path = map_paths(plan.key, plan.n_paths, |i, rng| {
        let mut g = GroupElement::identity();
        let mut kappa = 0.0;
        let mut rows = Vec::new();
        let mut crossings = 0;
        for n in 1..=trunc.cap {
            g = g.mul(mu.sample(rng));
            let c = g.cartan();
            if kappa < setup.t && setup.t <= c.kappa {
                crossings += 1;
                if in_filtered_set(&c, kappa, setup) {
                    let (gap, lambda0_modulus) = lambda_gap(&c, setup);
                    rows.push(LambdaRow { path: i as usize, n, kappa: c.kappa, gap, lambda0_modulus });
                }
            }
            kappa = c.kappa;
            if n >= trunc.floor && kappa > trunc.stop_above {
                break;
            }
        }
        (rows, crossings)
    });
    let crossings = per_path.iter().map(|p| p.1).sum();
    let rows: Vec<LambdaRow> = per_path.into_iter().flat_map(|p| p.0).collect();
    if rows.is_empty() {
        return Err(LabError::EmptyFilter);
    }
    let max_gap = rows.iter().map(|r| r.gap).fold(0.0, f64::max);
    let mean_gap = rows.iter().map(|r| r.gap).sum::<f64>() / rows.len() as f64;
    Ok(LambdaTable { rows, crossings, max_gap, mean_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedKey;

    fn setup(s: f64, t: f64, phase: Phase) -> LambdaSetup {
        LambdaSetup {
            x: ProjectivePoint::from_angle(0.1),
            y: ProjectivePoint::from_angle(1.4),
            s,
            t,
            sign: 1.0,
            eps3: 0.3,
            phase,
            window: Window::Bump { center: 0.6, half_width: 0.5 },
        }
    }

    /// Letters of the deterministic word shared with the high-precision oracle.
    fn word(len: usize) -> Vec<usize> {
        let mut state: u64 = 12345;
        (0..len)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) & 1) as usize
            })
            .collect()
    }

    #[test]
    fn matches_high_precision_oracle() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let st = setup(5.0, 60.0, Phase::Warp { amplitude: 0.3 });
        let mut g = GroupElement::identity();
        let mut prev = 0.0;
        let mut found = None;
        for &l in &word(400) {
            g = g.mul(mu.atom(l));
            let c = g.cartan();
            if prev < st.t && st.t <= c.kappa {
                found = Some(c);
                break;
            }
            prev = c.kappa;
        }
        let (gap, modulus) = lambda_gap(&found.unwrap(), &st);
        // Frozen from a 250-digit evaluation of Λ₀ and Λ₁ along the same word.
        let expected = 4.481_975_343_364_423e-51;
        assert!((gap / expected - 1.0).abs() < 1e-6, "gap {gap:e}");
        assert!(modulus <= 1.0);
    }

    #[test]
    fn gaps_shrink_with_scale() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let plan = RenewalPlan::new(SeedKey::new(5), 400, 0.45);
        let a = lambda_approx_check(&mu, &setup(5.0, 60.0, Phase::Identity), &plan).unwrap();
        let b = lambda_approx_check(&mu, &setup(10.0, 120.0, Phase::Identity), &plan).unwrap();
        assert!(a.rows.iter().all(|r| r.lambda0_modulus <= 1.0));
        assert!(b.max_gap < a.max_gap, "{} vs {}", b.max_gap, a.max_gap);
        assert!(a.max_gap < 1e-20);
    }

    #[test]
    fn invalid_scales_are_rejected() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let plan = RenewalPlan::new(SeedKey::new(5), 10, 0.45);
        assert!(lambda_approx_check(&mu, &setup(5.0, 30.0, Phase::Identity), &plan).is_err());
    }
}
