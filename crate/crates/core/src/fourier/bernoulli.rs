use crate::error::{LabError, Result};
use crate::walk::GOLDEN;
use std::f64::consts::PI;

/// Law of `Σ ±λʲ` truncated after `n_terms` digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernoulliParams {
    pub lambda: f64,
    pub n_terms: usize,
}

impl BernoulliParams {
    /// Default truncation: the smallest `N` with `λᴺ < 1e-14`.
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(LabError::InvalidInput(format!("contraction {lambda} outside (0, 1)")));
        }
        let n_terms = ((1e-14f64).ln() / lambda.ln()).floor() as usize + 1;
        Ok(Self { lambda, n_terms })
    }

    pub fn with_terms(self, n_terms: usize) -> Self {
        Self { n_terms, ..self }
    }

    fn is_golden(&self) -> bool {
        (self.lambda - GOLDEN).abs() < 1e-15
    }
}

/// `ν̂_λ(ξ) = Π_{j<N} cos(ξ λʲ)`.
pub fn bernoulli_fourier(p: &BernoulliParams, xi: f64) -> f64 {
    let mut scale = 1.0;
    let mut prod = 1.0;
    for _ in 0..p.n_terms {
        prod *= (xi * scale).cos();
        scale *= p.lambda;
    }
    prod
}

/// One row of the scan along `ξₙ = π λ⁻ⁿ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PisotRow {
    pub n: usize,
    pub xi: f64,
    pub value: f64,
}

/// `ν̂_λ(π λ⁻ⁿ)` for `n = 0..=n_max`.
///
/// Factors `cos(π λ⁻ᵐ)` with large arguments are reduced modulo 2π without
/// forming the raw product: for the golden ratio through the Lucas identity
/// `λ⁻ᵐ = Lₘ − (−λ)ᵐ`, otherwise in double-double arithmetic.
pub fn pisot_scan(p: &BernoulliParams, n_max: usize) -> Vec<PisotRow> {
    (0..=n_max)
        .map(|n| {
            let mut prod = 1.0;
            for m in 1..=n {
                prod *= cos_pi_inverse_power(p, m);
            }
            let mut scale = 1.0;
            for _ in 0..p.n_terms {
                prod *= (PI * scale).cos();
                scale *= p.lambda;
            }
            PisotRow { n, xi: PI * p.lambda.powi(-(n as i32)), value: prod }
        })
        .collect()
}

/// `cos(π λ⁻ᵐ)` with careful argument reduction.
fn cos_pi_inverse_power(p: &BernoulliParams, m: usize) -> f64 {
    if p.is_golden() && m <= 80 {
        let lucas = lucas(m);
        let parity = if lucas.is_multiple_of(2) { 1.0 } else { -1.0 };
        let small = if m.is_multiple_of(2) { GOLDEN.powi(m as i32) } else { -GOLDEN.powi(m as i32) };
        // π λ⁻ᵐ = π Lₘ − π (−λ)ᵐ
        return parity * (PI * small).cos();
    }
    cos_pi_inverse_power_dd(p.lambda, m)
}

fn cos_pi_inverse_power_dd(lambda: f64, m: usize) -> f64 {
    let inv = Dd::one().div(Dd::from(lambda));
    let mut x = Dd::one();
    for _ in 0..m {
        x = x.mul(inv);
    }
    let arg = x.mul(Dd::PI);
    let two_pi = Dd::PI.mul(Dd::from(2.0));
    let q = (arg.hi / two_pi.hi).round();
    let r = arg.sub(two_pi.mul(Dd::from(q)));
    r.hi.cos() - r.hi.sin() * r.lo
}

fn lucas(m: usize) -> u128 {
    let (mut a, mut b) = (2u128, 1u128);
    for _ in 0..m {
        let c = a + b;
        a = b;
        b = c;
    }
    a
}

/// Minimal double-double arithmetic for argument reduction.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const PI: Dd = Dd { hi: std::f64::consts::PI, lo: 1.224_646_799_147_353_2e-16 };

    fn one() -> Self {
        Self::from(1.0)
    }

    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Self { hi: s, lo: lo - (s - hi) }
    }

    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Self::renorm(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    fn sub(self, o: Self) -> Self {
        let (s, e) = Self::two_sum(self.hi, -o.hi);
        Self::renorm(s, e + self.lo - o.lo)
    }

    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Self::from(q1)));
        let q2 = r.hi / o.hi;
        Self::renorm(q1, q2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_case_has_closed_form() {
        let p = BernoulliParams::new(0.5).unwrap();
        let v = bernoulli_fourier(&p, 1.0);
        assert!((v - 2f64.sin() / 2.0).abs() < 1e-12);
        assert!((v - 0.454_648_713_412_840_85).abs() < 1e-12);
    }

    #[test]
    fn truncation_is_stable() {
        let p = BernoulliParams::new(0.9).unwrap();
        for &xi in &[1.0, 1e3, 1e6] {
            let a = bernoulli_fourier(&p, xi);
            let b = bernoulli_fourier(&p.with_terms(p.n_terms + 20), xi);
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn golden_scan_matches_high_precision_oracle() {
        // Frozen from a 60-digit evaluation of the infinite product.
        let expected = [(0, 0.081_323_385_537_888_93), (1, 0.029_469_552_895_265_008), (5, 0.006_780_166_677_892_405), (18, 0.006_613_493_639_512_495)];
        let rows = pisot_scan(&BernoulliParams::new(GOLDEN).unwrap(), 18);
        for (n, v) in expected {
            assert!((rows[n].value.abs() / v - 1.0).abs() < 1e-9, "n={n}: {}", rows[n].value);
        }
        let min = rows.iter().map(|r| r.value.abs()).fold(f64::INFINITY, f64::min);
        assert!(min >= 0.0066);
    }

    #[test]
    fn non_pisot_scan_decays() {
        let rows = pisot_scan(&BernoulliParams::new(0.7).unwrap(), 20);
        // Frozen from the same oracle.
        assert!((rows[20].value.abs() / 1.307_481_434_658_027_7e-10 - 1.0).abs() < 1e-6);
        assert!((rows[6].value.abs() / 3.866_611_233_742_173_5e-7 - 1.0).abs() < 1e-6);
        assert!(rows[20].value.abs() < 1e-3);
    }

    #[test]
    fn generic_reduction_agrees_with_lucas_reduction() {
        let golden = BernoulliParams::new(GOLDEN).unwrap();
        // The two agree up to the rounding of λ itself, about m·φᵐ·1e-16.
        for m in [1, 5, 12, 20, 30] {
            let lucas_form = cos_pi_inverse_power(&golden, m);
            let generic = cos_pi_inverse_power_dd(GOLDEN, m);
            assert!((lucas_form - generic).abs() < 1e-8, "m={m}");
        }
    }
}
