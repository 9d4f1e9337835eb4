use std::f64::consts::PI;

/// A probability measure on the projective circle `[0, π)`.
pub trait CircleMeasure {
    /// Mass of `[0, θ)` for `θ ∈ [0, π]`.
    fn mass_before(&self, theta: f64) -> f64;
    /// Mass of `[0, θ]` for `θ ∈ [0, π)`.
    fn mass_through(&self, theta: f64) -> f64;
    /// Points where the distribution function is not affine.
    fn breakpoints(&self) -> Vec<f64>;

    /// Mass of the open arc `(start, start + len)`, `0 ≤ len ≤ π`.
    fn open_arc_mass(&self, start: f64, len: f64) -> f64 {
        let lifted_before = |x: f64| {
            let k = (x / PI).floor();
            k + self.mass_before(x - k * PI)
        };
        let lifted_through = |x: f64| {
            let k = (x / PI).floor();
            k + self.mass_through(x - k * PI)
        };
        (lifted_before(start + len) - lifted_through(start)).clamp(0.0, 1.0)
    }
}

/// Weighted atoms on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    points: Vec<f64>,
    cumulative: Vec<f64>,
}

impl AtomicMeasure {
    /// Atoms at angles in `[0, π)`; weights are normalised to total mass 1.
    pub fn new(mut atoms: Vec<(f64, f64)>) -> Self {
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        let mut acc = 0.0;
        let (points, cumulative) = atoms
            .into_iter()
            .map(|(p, w)| {
                acc += w / total;
                (p, acc)
            })
            .unzip();
        Self { points, cumulative }
    }

    pub fn uniform_atoms(points: &[f64]) -> Self {
        Self::new(points.iter().map(|&p| (p, 1.0)).collect())
    }

    fn mass_upto(&self, idx: usize) -> f64 {
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }
}

impl CircleMeasure for AtomicMeasure {
    fn mass_before(&self, theta: f64) -> f64 {
        self.mass_upto(self.points.partition_point(|&p| p < theta))
    }

    fn mass_through(&self, theta: f64) -> f64 {
        self.mass_upto(self.points.partition_point(|&p| p <= theta))
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.points.clone()
    }
}

/// Piecewise-uniform measure on `m` equal bins of `[0, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMeasure {
    weights: Vec<f64>,
    cumulative: Vec<f64>,
}

impl GridMeasure {
    pub fn new(weights: Vec<f64>) -> Self {
        let total: f64 = weights.iter().sum();
        let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Self { weights, cumulative }
    }

    pub fn uniform(m: usize) -> Self {
        Self::new(vec![1.0; m])
    }

    pub fn bins(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bin_width(&self) -> f64 {
        PI / self.bins() as f64
    }

    /// Histogram of sample angles on `m` bins, for comparisons at matching
    /// resolution.
    pub fn from_angles(angles: &[f64], m: usize) -> Self {
        let mut w = vec![0.0; m];
        for &a in angles {
            w[((a.rem_euclid(PI) / PI * m as f64) as usize).min(m - 1)] += 1.0;
        }
        Self::new(w)
    }

    /// Merge groups of `factor` consecutive bins.
    pub fn coarsen(&self, factor: usize) -> Self {
        Self::new(self.weights.chunks(factor.max(1)).map(|c| c.iter().sum()).collect())
    }

    /// CSV with header `bin_index,theta_lo,theta_hi,weight`.
    pub fn to_csv(&self) -> String {
        let h = self.bin_width();
        let mut out = String::from("bin_index,theta_lo,theta_hi,weight\n");
        for (j, w) in self.weights.iter().enumerate() {
            out.push_str(&format!("{j},{:.16e},{:.16e},{:.16e}\n", j as f64 * h, (j + 1) as f64 * h, w));
        }
        out
    }

    /// Parse the output of [`GridMeasure::to_csv`].
    pub fn from_csv(text: &str) -> Option<Self> {
        let weights: Option<Vec<f64>> = text.lines().skip(1).filter(|l| !l.is_empty()).map(|l| l.split(',').nth(3)?.trim().parse().ok()).collect();
        weights.map(|w| Self { cumulative: cumulate(&w), weights: w })
    }
}

fn cumulate(w: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    w.iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect()
}

impl CircleMeasure for GridMeasure {
    fn mass_before(&self, theta: f64) -> f64 {
        let h = self.bin_width();
        let pos = (theta / h).clamp(0.0, self.bins() as f64);
        let j = (pos.floor() as usize).min(self.bins() - 1);
        let below = if j == 0 { 0.0 } else { self.cumulative[j - 1] };
        below + self.weights[j] * (pos - j as f64).clamp(0.0, 1.0)
    }

    fn mass_through(&self, theta: f64) -> f64 {
        self.mass_before(theta)
    }

    fn breakpoints(&self) -> Vec<f64> {
        let h = self.bin_width();
        (0..self.bins()).map(|j| j as f64 * h).collect()
    }
}

/// Offset-minimised circular Kolmogorov distance.
///
/// For each of the 64 offsets `o = kπ/64` the distribution functions are read
/// from `o` around the circle and the sup-distance is taken; the minimum over
/// offsets is returned. With `H = F_a − F_b`, the distance at offset `o` is
/// `max(sup H − H(o), H(o) − inf H)`, so one sweep over the breakpoints of
/// both measures suffices.
pub fn kolmogorov_distance(a: &dyn CircleMeasure, b: &dyn CircleMeasure) -> f64 {
    let mut pts = a.breakpoints();
    pts.extend(b.breakpoints());
    pts.push(0.0);
    let mut hmax = f64::NEG_INFINITY;
    let mut hmin = f64::INFINITY;
    for &p in &pts {
        for h in [a.mass_before(p) - b.mass_before(p), a.mass_through(p) - b.mass_through(p)] {
            hmax = hmax.max(h);
            hmin = hmin.min(h);
        }
    }
    (0..64)
        .map(|k| {
            let o = k as f64 * PI / 64.0;
            let h = a.mass_before(o) - b.mass_before(o);
            (hmax - h).max(h - hmin)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Result of the Hölder regularity probe.
#[derive(Debug, Clone, PartialEq)]
pub struct HolderFit {
    pub exponent: f64,
    pub constant: f64,
    /// `(radius, max ball mass)` pairs used in the fit.
    pub masses: Vec<(f64, f64)>,
}

/// Fit `sup_c ν(B(c, r)) ≈ C rᵅ` by least squares on the log-log scale over
/// `n_centers` evenly spaced centres; radii are projective distances in `(0, 1)`.
pub fn holder_probe(measure: &dyn CircleMeasure, radii: &[f64], n_centers: usize) -> HolderFit {
    let masses: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| {
            let half = r.min(1.0).asin();
            let m = (0..n_centers)
                .map(|j| {
                    let c = j as f64 * PI / n_centers as f64;
                    measure.open_arc_mass(c - half + PI, 2.0 * half)
                })
                .fold(0.0, f64::max);
            (r, m)
        })
        .collect();
    let xs: Vec<f64> = masses.iter().map(|(r, _)| r.ln()).collect();
    let ys: Vec<f64> = masses.iter().map(|(_, m)| m.max(f64::MIN_POSITIVE).ln()).collect();
    let fit = crate::stats::linear_fit(&xs, &ys);
    HolderFit { exponent: fit.slope, constant: fit.intercept.exp(), masses }
}
