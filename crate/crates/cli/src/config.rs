//! Experiment configuration: `key = value` lines grouped under `[section]`
//! headers. `#` starts a comment. Every key has a default, so an empty file is
//! a valid configuration.

use furstenberg::walk::StepDistribution;
use furstenberg::GroupElement;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid configuration field `{field}`: {message}")]
pub struct ConfigInvalid {
    pub field: String,
    pub message: String,
}

impl ConfigInvalid {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

/// The step distribution under study: a named preset or explicit atoms.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    Preset(String),
    /// `(weight, [a, b, c, d])` per atom.
    Atoms(Vec<(f64, [f64; 4])>),
}

impl MeasureSpec {
    pub fn build(&self) -> Result<StepDistribution, ConfigInvalid> {
        let invalid = |e: furstenberg::LabError| ConfigInvalid::new("general.measure", e.to_string());
        match self {
            Self::Preset(name) => StepDistribution::preset(name).map_err(invalid),
            Self::Atoms(atoms) => {
                let atoms = atoms
                    .iter()
                    .map(|&(w, [a, b, c, d])| GroupElement::from_matrix(a, b, c, d).map(|g| (w, g)))
                    .collect::<furstenberg::Result<Vec<_>>>()
                    .map_err(invalid)?;
                StepDistribution::new(atoms, "inline").map_err(invalid)
            }
        }
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Preset(name) => f.write_str(name),
            Self::Atoms(atoms) => {
                let parts: Vec<String> = atoms
                    .iter()
                    .map(|(w, m)| format!("{w} {} {} {} {}", m[0], m[1], m[2], m[3]))
                    .collect();
                write!(f, "atoms: {}", parts.join("; "))
            }
        }
    }
}

impl FromStr for MeasureSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let Some(rest) = s.strip_prefix("atoms:") else {
            return Ok(Self::Preset(s.to_string()));
        };
        rest.split(';')
            .map(|atom| {
                let nums: Vec<f64> = atom
                    .split_whitespace()
                    .map(|t| t.parse::<f64>().map_err(|_| format!("bad number {t:?}")))
                    .collect::<Result<_, _>>()?;
                match nums.as_slice() {
                    &[w, a, b, c, d] => Ok((w, [a, b, c, d])),
                    _ => Err(format!("atom {atom:?} needs `weight a b c d`")),
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::Atoms)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralParams {
    pub measure: MeasureSpec,
    pub seed: u64,
    /// Multiplies every path and sample count.
    pub paths_scale: f64,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometryParams {
    /// Instances per identity (hypothesis-conditioned identities count only
    /// instances where the hypothesis holds).
    pub instances: usize,
    pub kappa_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkParams {
    pub steps: usize,
    pub paths: usize,
    pub symmetric: MeasureSpec,
    pub spectral_grid: usize,
    pub spectral_step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryParams {
    pub samples: usize,
    pub ulam_bins: usize,
    pub ulam_max_iter: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierParams {
    pub samples: usize,
    pub low_block: (i64, i64),
    pub high_block: (i64, i64),
    pub xi_low: f64,
    pub xi_high: f64,
    pub warp: f64,
    pub bump_center: f64,
    pub bump_half_width: f64,
    pub pisot_lambda: String,
    pub pisot_n: usize,
    pub pisot_threshold: f64,
    pub control_lambda: f64,
    pub control_n: usize,
    pub control_threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenewalParams {
    pub paths: usize,
    pub pool: usize,
    /// Walk with widely spread jumps, for the jump-tail decay.
    pub tail_measure: MeasureSpec,
    /// Walk with frequent downward jumps, for the minus variant and a
    /// non-monotone crossing count.
    pub minus_measure: MeasureSpec,
    pub a: f64,
    pub limit_t: Vec<f64>,
    pub regularity_s: Vec<f64>,
    pub regularity_t: Vec<f64>,
    pub cartan_s: Vec<f64>,
    pub residue_t: Vec<f64>,
    pub tail_s: Vec<f64>,
    pub tail_t: f64,
    pub oracle_t: f64,
    pub stopping_t: f64,
    pub lambda_paths: usize,
    pub lambda_low: (f64, f64),
    pub lambda_high: (f64, f64),
    pub lambda_threshold_low: f64,
    pub lambda_threshold_high: f64,
    pub osc_triples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralParams {
    pub grid: usize,
    pub refined_grid: usize,
    pub xi: Vec<f64>,
    pub control: MeasureSpec,
    pub control_xi: f64,
    pub control_grid: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub general: GeneralParams,
    pub geometry: GeometryParams,
    pub walk: WalkParams,
    pub stationary: StationaryParams,
    pub fourier: FourierParams,
    pub renewal: RenewalParams,
    pub spectral: SpectralParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let preset = |s: &str| MeasureSpec::Preset(s.to_string());
        Self {
            general: GeneralParams { measure: preset("zariski-free"), seed: 20_240_601, paths_scale: 1.0, out: None },
            geometry: GeometryParams { instances: 10_000, kappa_max: 8.0 },
            walk: WalkParams {
                steps: 10_000,
                paths: 1_000,
                symmetric: preset("diag-symmetric"),
                spectral_grid: 256,
                spectral_step: 0.02,
            },
            stationary: StationaryParams { samples: 100_000, ulam_bins: 512, ulam_max_iter: 200_000 },
            fourier: FourierParams {
                samples: 1_000_000,
                low_block: (16, 32),
                high_block: (512, 1024),
                xi_low: 32.0,
                xi_high: 2048.0,
                warp: 0.3,
                bump_center: 0.8,
                bump_half_width: 0.45,
                pisot_lambda: "golden".into(),
                pisot_n: 18,
                pisot_threshold: 0.0066,
                control_lambda: 0.7,
                control_n: 20,
                control_threshold: 1e-3,
            },
            renewal: RenewalParams {
                paths: 20_000,
                pool: 20_000,
                tail_measure: preset("rotation-hyperbolic(1.2, 4.0)"),
                minus_measure: preset("rotation-hyperbolic(1.5, 1.0)"),
                a: 2.0,
                limit_t: vec![10.0, 20.0, 40.0],
                regularity_s: vec![0.3, 1.0, 5.0, 20.0],
                regularity_t: vec![-5.0, 0.0, 10.0, 40.0],
                cartan_s: vec![0.5, 2.0, 8.0],
                residue_t: vec![5.0, 10.0, 20.0, 40.0],
                tail_s: vec![1.0, 2.0, 4.0],
                tail_t: 20.0,
                oracle_t: 30.0,
                stopping_t: 15.0,
                lambda_paths: 2_000,
                lambda_low: (5.0, 60.0),
                lambda_high: (10.0, 120.0),
                lambda_threshold_low: 1e-40,
                lambda_threshold_high: 1e-80,
                osc_triples: 100,
            },
            spectral: SpectralParams {
                grid: 256,
                refined_grid: 512,
                xi: vec![0.5, 1.0, 2.0, 5.0, 10.0],
                control: preset("arithmetic-control"),
                control_xi: 2.0 * std::f64::consts::PI,
                control_grid: 64,
            },
        }
    }
}

fn parse_scalar<T: FromStr>(field: &str, v: &str) -> Result<T, ConfigInvalid> {
    v.parse().map_err(|_| ConfigInvalid::new(field, format!("cannot parse {v:?}")))
}

fn parse_list(field: &str, v: &str) -> Result<Vec<f64>, ConfigInvalid> {
    let list: Vec<f64> = v.split(',').map(|p| parse_scalar(field, p.trim())).collect::<Result<_, _>>()?;
    if list.is_empty() {
        return Err(ConfigInvalid::new(field, "empty list"));
    }
    Ok(list)
}

fn parse_pair<T: FromStr + Copy>(field: &str, v: &str) -> Result<(T, T), ConfigInvalid> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((parse_scalar(field, a)?, parse_scalar(field, b)?)),
        _ => Err(ConfigInvalid::new(field, "expected two comma-separated values")),
    }
}

fn parse_measure(field: &str, v: &str) -> Result<MeasureSpec, ConfigInvalid> {
    v.parse().map_err(|m: String| ConfigInvalid::new(field, m))
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigInvalid> {
        let mut cfg = Self::default();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigInvalid::new(format!("line {}", lineno + 1), "expected `key = value`"));
            };
            cfg.set(&section, key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, section: &str, key: &str, v: &str) -> Result<(), ConfigInvalid> {
        let field = format!("{section}.{key}");
        let f = field.as_str();
        match (section, key) {
            ("general", "measure") => self.general.measure = parse_measure(f, v)?,
            ("general", "seed") => self.general.seed = parse_scalar(f, v)?,
            ("general", "paths_scale") => self.general.paths_scale = parse_scalar(f, v)?,
            ("general", "out") => self.general.out = Some(PathBuf::from(v)),
            ("geometry", "instances") => self.geometry.instances = parse_scalar(f, v)?,
            ("geometry", "kappa_max") => self.geometry.kappa_max = parse_scalar(f, v)?,
            ("walk", "steps") => self.walk.steps = parse_scalar(f, v)?,
            ("walk", "paths") => self.walk.paths = parse_scalar(f, v)?,
            ("walk", "symmetric") => self.walk.symmetric = parse_measure(f, v)?,
            ("walk", "spectral_grid") => self.walk.spectral_grid = parse_scalar(f, v)?,
            ("walk", "spectral_step") => self.walk.spectral_step = parse_scalar(f, v)?,
            ("stationary", "samples") => self.stationary.samples = parse_scalar(f, v)?,
            ("stationary", "ulam_bins") => self.stationary.ulam_bins = parse_scalar(f, v)?,
            ("stationary", "ulam_max_iter") => self.stationary.ulam_max_iter = parse_scalar(f, v)?,
            ("fourier", "samples") => self.fourier.samples = parse_scalar(f, v)?,
            ("fourier", "low_block") => self.fourier.low_block = parse_pair(f, v)?,
            ("fourier", "high_block") => self.fourier.high_block = parse_pair(f, v)?,
            ("fourier", "xi_low") => self.fourier.xi_low = parse_scalar(f, v)?,
            ("fourier", "xi_high") => self.fourier.xi_high = parse_scalar(f, v)?,
            ("fourier", "warp") => self.fourier.warp = parse_scalar(f, v)?,
            ("fourier", "bump_center") => self.fourier.bump_center = parse_scalar(f, v)?,
            ("fourier", "bump_half_width") => self.fourier.bump_half_width = parse_scalar(f, v)?,
            ("fourier", "pisot_lambda") => self.fourier.pisot_lambda = v.to_string(),
            ("fourier", "pisot_n") => self.fourier.pisot_n = parse_scalar(f, v)?,
            ("fourier", "pisot_threshold") => self.fourier.pisot_threshold = parse_scalar(f, v)?,
            ("fourier", "control_lambda") => self.fourier.control_lambda = parse_scalar(f, v)?,
            ("fourier", "control_n") => self.fourier.control_n = parse_scalar(f, v)?,
            ("fourier", "control_threshold") => self.fourier.control_threshold = parse_scalar(f, v)?,
            ("renewal", "paths") => self.renewal.paths = parse_scalar(f, v)?,
            ("renewal", "pool") => self.renewal.pool = parse_scalar(f, v)?,
            ("renewal", "tail_measure") => self.renewal.tail_measure = parse_measure(f, v)?,
            ("renewal", "minus_measure") => self.renewal.minus_measure = parse_measure(f, v)?,
            ("renewal", "a") => self.renewal.a = parse_scalar(f, v)?,
            ("renewal", "limit_t") => self.renewal.limit_t = parse_list(f, v)?,
            ("renewal", "regularity_s") => self.renewal.regularity_s = parse_list(f, v)?,
            ("renewal", "regularity_t") => self.renewal.regularity_t = parse_list(f, v)?,
            ("renewal", "cartan_s") => self.renewal.cartan_s = parse_list(f, v)?,
            ("renewal", "residue_t") => self.renewal.residue_t = parse_list(f, v)?,
            ("renewal", "tail_s") => self.renewal.tail_s = parse_list(f, v)?,
            ("renewal", "tail_t") => self.renewal.tail_t = parse_scalar(f, v)?,
            ("renewal", "oracle_t") => self.renewal.oracle_t = parse_scalar(f, v)?,
            ("renewal", "stopping_t") => self.renewal.stopping_t = parse_scalar(f, v)?,
            ("renewal", "lambda_paths") => self.renewal.lambda_paths = parse_scalar(f, v)?,
            ("renewal", "lambda_low") => self.renewal.lambda_low = parse_pair(f, v)?,
            ("renewal", "lambda_high") => self.renewal.lambda_high = parse_pair(f, v)?,
            ("renewal", "lambda_threshold_low") => self.renewal.lambda_threshold_low = parse_scalar(f, v)?,
            ("renewal", "lambda_threshold_high") => self.renewal.lambda_threshold_high = parse_scalar(f, v)?,
            ("renewal", "osc_triples") => self.renewal.osc_triples = parse_scalar(f, v)?,
            ("spectral", "grid") => self.spectral.grid = parse_scalar(f, v)?,
            ("spectral", "refined_grid") => self.spectral.refined_grid = parse_scalar(f, v)?,
            ("spectral", "xi") => self.spectral.xi = parse_list(f, v)?,
            ("spectral", "control") => self.spectral.control = parse_measure(f, v)?,
            ("spectral", "control_xi") => self.spectral.control_xi = parse_scalar(f, v)?,
            ("spectral", "control_grid") => self.spectral.control_grid = parse_scalar(f, v)?,
            _ => return Err(ConfigInvalid::new(field, "unknown key")),
        }
        Ok(())
    }

    /// Checks that do not depend on running anything: measures build,
    /// counts are positive, grids are large enough.
    pub fn validate(&self) -> Result<(), ConfigInvalid> {
        self.general.measure.build()?;
        for (field, spec) in [
            ("walk.symmetric", &self.walk.symmetric),
            ("renewal.tail_measure", &self.renewal.tail_measure),
            ("renewal.minus_measure", &self.renewal.minus_measure),
            ("spectral.control", &self.spectral.control),
        ] {
            spec.build().map_err(|e| ConfigInvalid::new(field, e.message))?;
        }
        if !(self.general.paths_scale > 0.0 && self.general.paths_scale.is_finite()) {
            return Err(ConfigInvalid::new("general.paths_scale", "must be positive"));
        }
        let counts = [
            ("geometry.instances", self.geometry.instances),
            ("walk.steps", self.walk.steps),
            ("walk.paths", self.walk.paths),
            ("stationary.samples", self.stationary.samples),
            ("fourier.samples", self.fourier.samples),
            ("renewal.paths", self.renewal.paths),
            ("renewal.pool", self.renewal.pool),
            ("renewal.lambda_paths", self.renewal.lambda_paths),
            ("renewal.osc_triples", self.renewal.osc_triples),
        ];
        if let Some((field, _)) = counts.iter().find(|(_, n)| *n == 0) {
            return Err(ConfigInvalid::new(*field, "must be positive"));
        }
        for (field, m) in [
            ("walk.spectral_grid", self.walk.spectral_grid),
            ("spectral.grid", self.spectral.grid),
            ("spectral.refined_grid", self.spectral.refined_grid),
            ("spectral.control_grid", self.spectral.control_grid),
            ("stationary.ulam_bins", self.stationary.ulam_bins),
        ] {
            if m < 32 {
                return Err(ConfigInvalid::new(field, "grid needs at least 32 nodes"));
            }
        }
        for (field, (lo, hi)) in [("fourier.low_block", self.fourier.low_block), ("fourier.high_block", self.fourier.high_block)] {
            if !(0 < lo && lo < hi) {
                return Err(ConfigInvalid::new(field, "need 0 < lo < hi"));
            }
        }
        if self.fourier.pisot_lambda != "golden" {
            parse_scalar::<f64>("fourier.pisot_lambda", &self.fourier.pisot_lambda)?;
        }
        Ok(())
    }

    /// Scale a path or sample count by `paths_scale`, keeping at least `floor`.
    pub fn scaled(&self, n: usize, floor: usize) -> usize {
        ((n as f64 * self.general.paths_scale).round() as usize).max(floor)
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (g, geo, w, s, fo, r, sp) =
            (&self.general, &self.geometry, &self.walk, &self.stationary, &self.fourier, &self.renewal, &self.spectral);
        writeln!(f, "[general]")?;
        writeln!(f, "measure = {}", g.measure)?;
        writeln!(f, "seed = {}", g.seed)?;
        writeln!(f, "paths_scale = {}", g.paths_scale)?;
        if let Some(out) = &g.out {
            writeln!(f, "out = {}", out.display())?;
        }
        writeln!(f, "\n[geometry]\ninstances = {}\nkappa_max = {}", geo.instances, geo.kappa_max)?;
        writeln!(
            f,
            "\n[walk]\nsteps = {}\npaths = {}\nsymmetric = {}\nspectral_grid = {}\nspectral_step = {}",
            w.steps, w.paths, w.symmetric, w.spectral_grid, w.spectral_step
        )?;
        writeln!(f, "\n[stationary]\nsamples = {}\nulam_bins = {}\nulam_max_iter = {}", s.samples, s.ulam_bins, s.ulam_max_iter)?;
        writeln!(f, "\n[fourier]\nsamples = {}", fo.samples)?;
        writeln!(f, "low_block = {}, {}\nhigh_block = {}, {}", fo.low_block.0, fo.low_block.1, fo.high_block.0, fo.high_block.1)?;
        writeln!(f, "xi_low = {}\nxi_high = {}\nwarp = {}", fo.xi_low, fo.xi_high, fo.warp)?;
        writeln!(f, "bump_center = {}\nbump_half_width = {}", fo.bump_center, fo.bump_half_width)?;
        writeln!(f, "pisot_lambda = {}\npisot_n = {}\npisot_threshold = {}", fo.pisot_lambda, fo.pisot_n, fo.pisot_threshold)?;
        writeln!(
            f,
            "control_lambda = {}\ncontrol_n = {}\ncontrol_threshold = {}",
            fo.control_lambda, fo.control_n, fo.control_threshold
        )?;
        writeln!(f, "\n[renewal]\npaths = {}\npool = {}\na = {}", r.paths, r.pool, r.a)?;
        writeln!(f, "tail_measure = {}\nminus_measure = {}", r.tail_measure, r.minus_measure)?;
        writeln!(f, "limit_t = {}", join(&r.limit_t))?;
        writeln!(f, "regularity_s = {}\nregularity_t = {}", join(&r.regularity_s), join(&r.regularity_t))?;
        writeln!(f, "cartan_s = {}\nresidue_t = {}", join(&r.cartan_s), join(&r.residue_t))?;
        writeln!(f, "tail_s = {}\ntail_t = {}", join(&r.tail_s), r.tail_t)?;
        writeln!(f, "oracle_t = {}\nstopping_t = {}\nlambda_paths = {}", r.oracle_t, r.stopping_t, r.lambda_paths)?;
        writeln!(f, "lambda_low = {}, {}\nlambda_high = {}, {}", r.lambda_low.0, r.lambda_low.1, r.lambda_high.0, r.lambda_high.1)?;
        writeln!(
            f,
            "lambda_threshold_low = {:e}\nlambda_threshold_high = {:e}\nosc_triples = {}",
            r.lambda_threshold_low, r.lambda_threshold_high, r.osc_triples
        )?;
        writeln!(f, "\n[spectral]\ngrid = {}\nrefined_grid = {}\nxi = {}", sp.grid, sp.refined_grid, join(&sp.xi))?;
        writeln!(f, "control = {}\ncontrol_xi = {}\ncontrol_grid = {}", sp.control, sp.control_xi, sp.control_grid)
    }
}
