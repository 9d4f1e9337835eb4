//! Adaptive Gauss–Kronrod (7/15) quadrature for real and complex integrands.

use crate::error::{LabError, Result};
use crate::scalar::Real;
use num_complex::Complex;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Stopping rule for [`integrate_complex`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_nodes: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-12, max_nodes: 1_000_000 }
    }
}

/// Integral value with its error estimate and the number of evaluations used.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature<V> {
    pub value: V,
    pub error: f64,
    pub nodes: usize,
}

struct Panel<T: Real> {
    a: T,
    b: T,
    value: Complex<T>,
    error: T,
}

fn kronrod<T: Real, F: FnMut(T) -> Complex<T>>(f: &mut F, a: T, b: T) -> Panel<T> {
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let mut k = Complex::new(T::zero(), T::zero());
    let mut g = Complex::new(T::zero(), T::zero());
    for i in 0..8 {
        let x = T::lit(XGK[i]);
        let wk = T::lit(WGK[i]);
        let pair = if i == 7 { f(mid) } else { f(mid - half * x) + f(mid + half * x) };
        k = k + pair * wk;
        if i % 2 == 1 {
            g = g + pair * T::lit(WG[i / 2]);
        }
    }
    let value = k * half;
    let error = ((k - g) * half).norm();
    Panel { a, b, value, error }
}

/// Integrate a complex-valued function over `[a, b]` by global adaptive bisection.
pub fn integrate_complex<T: Real, F: FnMut(T) -> Complex<T>>(
    mut f: F,
    a: T,
    b: T,
    opts: QuadratureOptions,
) -> Result<Quadrature<Complex<T>>> {
    if a == b {
        return Ok(Quadrature { value: Complex::new(T::zero(), T::zero()), error: 0.0, nodes: 0 });
    }
    let mut panels = vec![kronrod(&mut f, a, b)];
    let mut nodes = 15;
    loop {
        let total = panels.iter().fold(Complex::new(T::zero(), T::zero()), |s, p| s + p.value);
        let err = panels.iter().fold(T::zero(), |s, p| s + p.error);
        let target = T::lit(opts.abs_tol).max(T::lit(opts.rel_tol) * total.norm());
        if err <= target {
            return Ok(Quadrature { value: total, error: err.to_f64().unwrap_or(f64::NAN), nodes });
        }
        if nodes + 30 > opts.max_nodes {
            return Err(LabError::QuadratureFailure { nodes: opts.max_nodes });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, p)| if p.error > best.1 { (i, p.error) } else { best });
        let p = panels.swap_remove(worst);
        let mid = (p.a + p.b) * T::lit(0.5);
        panels.push(kronrod(&mut f, p.a, mid));
        panels.push(kronrod(&mut f, mid, p.b));
        nodes += 30;
    }
}

/// Real-valued wrapper around [`integrate_complex`].
pub fn integrate<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    opts: QuadratureOptions,
) -> Result<Quadrature<T>> {
    let q = integrate_complex(|x| Complex::new(f(x), T::zero()), a, b, opts)?;
    Ok(Quadrature { value: q.value.re, error: q.error, nodes: q.nodes })
}
