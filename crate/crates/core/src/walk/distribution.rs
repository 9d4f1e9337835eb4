use crate::error::{LabError, Result};
use crate::GroupElement;
use rand::Rng;

/// Finitely supported probability measure on SL₂(ℝ).
#[derive(Debug, Clone, PartialEq)]
pub struct StepDistribution {
    atoms: Vec<GroupElement>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
    moment_exponent: f64,
    label: String,
}

/// Golden-ratio contraction `(√5 − 1) / 2`.
pub const GOLDEN: f64 = 0.618_033_988_749_894_9;

impl StepDistribution {
    /// Weights must be positive and sum to 1 within `1e-12`.
    pub fn new(atoms: Vec<(f64, GroupElement)>, label: impl Into<String>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(LabError::InvalidInput("empty support".into()));
        }
        if atoms.iter().any(|(w, _)| !(*w > 0.0)) {
            return Err(LabError::InvalidInput("weights must be positive".into()));
        }
        let total: f64 = atoms.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(LabError::InvalidInput(format!("weights sum to {total}")));
        }
        let (weights, atoms): (Vec<f64>, Vec<GroupElement>) = atoms.into_iter().unzip();
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Ok(Self { atoms, weights, cumulative, moment_exponent: 0.5, label: label.into() })
    }

    pub fn dirac(g: GroupElement, label: impl Into<String>) -> Self {
        Self::new(vec![(1.0, g)], label).expect("single atom")
    }

    /// Named presets: `zariski-free`, `diag-symmetric`,
    /// `bernoulli-solvable(λ)` (λ numeric or `golden`),
    /// `rotation-hyperbolic(θ, a)` and `arithmetic-control`.
    pub fn preset(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, args) = match spec.find('(') {
            Some(i) if spec.ends_with(')') => {
                let inner = &spec[i + 1..spec.len() - 1];
                let args: Vec<f64> = inner
                    .split(',')
                    .map(|a| match a.trim() {
                        "golden" => Ok(GOLDEN),
                        t => t.parse::<f64>().map_err(|_| LabError::InvalidInput(format!("bad preset argument {t:?}"))),
                    })
                    .collect::<Result<_>>()?;
                (&spec[..i], args)
            }
            _ => (spec, Vec::new()),
        };
        let m = |a, b, c, d| GroupElement::from_matrix(a, b, c, d);
        let half = |g: GroupElement, h: GroupElement| Self::new(vec![(0.5, g), (0.5, h)], spec);
        match (name, args.as_slice()) {
            ("zariski-free", []) => half(m(2.0, 1.0, 1.0, 1.0)?, m(1.0, 1.0, 1.0, 2.0)?),
            ("diag-symmetric", []) => half(m(2.0, 0.0, 0.0, 0.5)?, m(0.5, 0.0, 0.0, 2.0)?),
            ("arithmetic-control", []) => half(GroupElement::hyperbolic(1.0), GroupElement::hyperbolic(2.0)),
            ("bernoulli-solvable", [lam]) if *lam > 0.0 && *lam < 1.0 => {
                let r = lam.sqrt();
                half(m(r, -1.0 / r, 0.0, 1.0 / r)?, m(r, 1.0 / r, 0.0, 1.0 / r)?)
            }
            ("rotation-hyperbolic", [theta, a]) => half(GroupElement::rotation(*theta), GroupElement::hyperbolic(*a)),
            _ => Err(LabError::InvalidInput(format!("unknown preset {spec:?}"))),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, &GroupElement)> {
        self.weights.iter().copied().zip(self.atoms.iter())
    }

    pub fn atom(&self, i: usize) -> &GroupElement {
        &self.atoms[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Inverse-CDF draw of an atom index.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.cumulative.iter().position(|&c| u < c).unwrap_or(self.atoms.len() - 1)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &GroupElement {
        &self.atoms[self.sample_index(rng)]
    }

    /// Pushforward under `g ↦ g⁻¹`, atoms in the same order.
    pub fn inverse(&self) -> Self {
        Self {
            atoms: self.atoms.iter().map(GroupElement::inverse).collect(),
            weights: self.weights.clone(),
            cumulative: self.cumulative.clone(),
            moment_exponent: self.moment_exponent,
            label: format!("inverse of {}", self.label),
        }
    }

    pub fn moment_exponent(&self) -> f64 {
        self.moment_exponent
    }

    pub fn with_moment_exponent(mut self, eps: f64) -> Self {
        self.moment_exponent = eps;
        self
    }

    /// `Σ w ‖g‖^ε`; finite for every finitely supported measure.
    pub fn moment(&self) -> f64 {
        self.atoms().map(|(w, g)| w * (self.moment_exponent * g.kappa()).exp()).sum()
    }

    /// True when every atom acts trivially on the projective line.
    pub fn is_identity(&self) -> bool {
        self.atoms.iter().all(|g| {
            let m = g.matrix();
            (m[0][1]).abs() < 1e-12 && (m[1][0]).abs() < 1e-12 && (m[0][0] - m[1][1]).abs() < 1e-12
        })
    }
}
