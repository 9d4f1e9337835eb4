use crate::error::{LabError, Result};
use crate::walk::StepDistribution;
use crate::ProjectivePoint;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Uniform nodes `θⱼ = jπ/m` on the projective line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CircleGrid {
    m: usize,
}

impl CircleGrid {
    pub fn new(m: usize) -> Result<Self> {
        if m < 32 {
            return Err(LabError::InvalidInput(format!("grid of {m} nodes; need at least 32")));
        }
        Ok(Self { m })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        PI / self.m as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    /// Linear interpolation weights of the angle `theta` on the periodic grid.
    pub fn interpolation(&self, theta: f64) -> [(usize, f64); 2] {
        let pos = theta.rem_euclid(PI) / self.spacing();
        // Snap images that land on a node up to rounding.
        let near = pos.round();
        let pos = if (pos - near).abs() < 1e-9 { near } else { pos };
        let lo = pos.floor();
        let frac = pos - lo;
        let j = lo as usize % self.m;
        [(j, 1.0 - frac), ((j + 1) % self.m, frac)]
    }
}

/// Discretised `P(z)f(x) = Σᵢ wᵢ e^{−zσ(gᵢ,x)} f(gᵢx)` with linear
/// interpolation, stored as sparse rows.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    pub z: Complex64,
    pub grid: CircleGrid,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl TransferMatrix {
    pub fn rows(&self) -> &[Vec<(usize, Complex64)>] {
        &self.rows
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![Complex64::new(0.0, 0.0); self.grid.len()];
                for &(k, v) in row {
                    d[k] += v;
                }
                d
            })
            .collect()
    }

    /// `T v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.rows.iter().map(|row| row.iter().map(|&(k, a)| a * v[k]).sum()).collect()
    }

    /// `vᵀ T`.
    pub fn apply_left(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        for (row, &vj) in self.rows.iter().zip(v) {
            for &(k, a) in row {
                out[k] += vj * a;
            }
        }
        out
    }
}

/// Assemble `P(z)` on `grid` by an exact sum over the atoms of `μ`.
pub fn assemble_transfer(mu: &StepDistribution, z: Complex64, grid: CircleGrid) -> TransferMatrix {
    let rows = (0..grid.len())
        .into_par_iter()
        .map(|j| {
            let x = ProjectivePoint::from_angle(grid.node(j));
            let mut row: Vec<(usize, Complex64)> = Vec::with_capacity(2 * mu.len());
            for (w, g) in mu.atoms() {
                let weight = (-z * g.cocycle(&x)).exp() * w;
                for (k, c) in grid.interpolation(g.act(&x).angle()) {
                    if c != 0.0 {
                        row.push((k, weight * c));
                    }
                }
            }
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, Complex64)> = Vec::with_capacity(row.len());
            for (k, v) in row {
                match merged.last_mut() {
                    Some(last) if last.0 == k => last.1 += v,
                    _ => merged.push((k, v)),
                }
            }
            merged
        })
        .collect();
    TransferMatrix { z, grid, rows }
}

/// Dominant eigenvalue with its eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenEstimate {
    pub value: Complex64,
    /// `‖Tv − λv‖∞ / ‖v‖∞` at the returned vector.
    pub residual: f64,
    pub iterations: usize,
    pub vector: Vec<Complex64>,
}

pub const EIGEN_TOL: f64 = 1e-10;
pub const EIGEN_MAX_ITER: usize = 100_000;

fn sup_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Start vector: a smooth non-constant function, so convergence to the
/// constant eigenvector at `z = 0` is actually exercised.
fn start_vector(grid: &CircleGrid) -> Vec<Complex64> {
    (0..grid.len()).map(|j| Complex64::new(1.0 + 0.5 * (2.0 * grid.node(j)).cos(), 0.3 * (2.0 * grid.node(j)).sin())).collect()
}

/// Power iteration normalised by the entry of largest modulus.
///
/// The eigenvalue estimate is `(Tv)ₖ / vₖ` at that entry; the iteration stops
/// once the residual `‖Tv − λv‖∞ / ‖v‖∞` falls below `1e-10`.
pub fn leading_eigen(t: &TransferMatrix) -> Result<EigenEstimate> {
    let mut v = start_vector(&t.grid);
    let mut residual = f64::INFINITY;
    for it in 1..=EIGEN_MAX_ITER {
        let tv = t.apply(&v);
        let (k, _) = v.iter().enumerate().fold((0, 0.0), |b, (i, c)| if c.norm() > b.1 { (i, c.norm()) } else { b });
        let lambda = tv[k] / v[k];
        let scale = sup_norm(&v);
        residual = tv.iter().zip(&v).map(|(a, b)| (a - lambda * b).norm()).fold(0.0, f64::max) / scale;
        if residual < EIGEN_TOL {
            return Ok(EigenEstimate { value: lambda, residual, iterations: it, vector: v });
        }
        let norm = sup_norm(&tv);
        if norm == 0.0 {
            return Ok(EigenEstimate { value: Complex64::new(0.0, 0.0), residual: 0.0, iterations: it, vector: v });
        }
        v = tv.into_iter().map(|c| c / norm).collect();
    }
    Err(LabError::NoConvergence { iterations: EIGEN_MAX_ITER, residual })
}

/// Spectral radius from the average growth `‖Tv‖/‖v‖` over the last
/// `window` of `iterations` normalised steps; robust when the dominant
/// eigenvalue is not isolated in modulus.
pub fn growth_rate(t: &TransferMatrix, iterations: usize, window: usize) -> f64 {
    let mut v = start_vector(&t.grid);
    let mut log_sum = 0.0;
    for it in 0..iterations {
        let tv = t.apply(&v);
        let norm = sup_norm(&tv) / sup_norm(&v);
        if norm == 0.0 {
            return 0.0;
        }
        if it + window >= iterations {
            log_sum += norm.ln();
        }
        let s = sup_norm(&tv);
        v = tv.into_iter().map(|c| c / s).collect();
    }
    (log_sum / window as f64).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GroupElement;

    fn zf() -> StepDistribution {
        StepDistribution::preset("zariski-free").unwrap()
    }

    #[test]
    fn stochastic_at_zero() {
        let t = assemble_transfer(&zf(), Complex64::new(0.0, 0.0), CircleGrid::new(128).unwrap());
        let ones = vec![Complex64::new(1.0, 0.0); 128];
        assert!(t.apply(&ones).iter().all(|c| (c - 1.0).norm() < 1e-12));
    }

    #[test]
    fn identity_measure_gives_identity_matrix() {
        let mu = StepDistribution::dirac(GroupElement::identity(), "id");
        let grid = CircleGrid::new(64).unwrap();
        let t = assemble_transfer(&mu, Complex64::new(0.3, 1.0), grid);
        for (j, row) in t.to_dense().iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                let expected = if j == k { 1.0 } else { 0.0 };
                assert!((v - expected).norm() < 1e-15);
            }
        }
        let e = leading_eigen(&t).unwrap();
        assert!((e.value - 1.0).norm() < 1e-12);
    }

    #[test]
    fn real_parameter_rows_match_direct_sum() {
        let mu = zf();
        let grid = CircleGrid::new(64).unwrap();
        let t = assemble_transfer(&mu, Complex64::new(0.1, 0.0), grid);
        for (j, row) in t.rows().iter().enumerate() {
            assert!(row.iter().all(|e| e.1.im == 0.0 && e.1.re > 0.0));
            let x = ProjectivePoint::from_angle(grid.node(j));
            let direct: f64 = mu.atoms().map(|(w, g)| w * (-0.1 * g.cocycle(&x)).exp()).sum();
            let sum: f64 = row.iter().map(|e| e.1.re).sum();
            assert!((sum - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn leading_eigenvalue_at_zero_is_one() {
        let t = assemble_transfer(&zf(), Complex64::new(0.0, 0.0), CircleGrid::new(256).unwrap());
        let e = leading_eigen(&t).unwrap();
        assert!((e.value - 1.0).norm() < 1e-10);
        let v0 = e.vector[0];
        assert!(e.vector.iter().all(|c| (c / v0 - 1.0).norm() < 1e-8));
    }

    #[test]
    fn interpolation_wraps() {
        let g = CircleGrid::new(32).unwrap();
        let w = g.interpolation(PI - 0.25 * g.spacing());
        assert_eq!(w[0].0, 31);
        assert_eq!(w[1].0, 0);
        assert!((w[1].1 - 0.75).abs() < 1e-12);
        assert!(CircleGrid::new(16).is_err());
    }
}
