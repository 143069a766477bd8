use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::IoError;
use crate::geom::{check_general_position_within, GeneralPosition, PointCloud};
use crate::scalar::Rational;

/// Coordinates are rounded to this many decimals so they are exact in
/// decimal text.
const DECIMALS: i32 = 9;
const RETRIES: u64 = 8;
/// Largest number of subset tests spent on certifying general position.
const CHECK_BUDGET: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Uniform in `[0, 1]^2`.
    UniformSquare,
    /// Uniform in `[0, 1]^3`.
    UniformCube,
    /// Uniform in the disk of the given radius centered in the unit square.
    Disk,
    /// The circle of the given radius centered in the unit square, each
    /// coordinate perturbed uniformly by at most `err`.
    Annulus,
    /// An annulus sample with `p` percent of the points replaced by uniform
    /// noise in the unit square.
    NoisyAnnulus,
}

impl GeneratorKind {
    pub fn dim(self) -> usize {
        match self {
            GeneratorKind::UniformCube => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorKind::UniformSquare => "uniform-square",
            GeneratorKind::UniformCube => "uniform-cube",
            GeneratorKind::Disk => "disk",
            GeneratorKind::Annulus => "annulus",
            GeneratorKind::NoisyAnnulus => "noisy-annulus",
        })
    }
}

impl FromStr for GeneratorKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform-square" => Ok(GeneratorKind::UniformSquare),
            "uniform-cube" => Ok(GeneratorKind::UniformCube),
            "disk" => Ok(GeneratorKind::Disk),
            "annulus" => Ok(GeneratorKind::Annulus),
            "noisy-annulus" => Ok(GeneratorKind::NoisyAnnulus),
            _ => Err(format!("unknown generator `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    /// Circle or disk radius.
    pub radius: f64,
    /// Percentage of uniform noise points.
    pub noise_percent: f64,
    /// Per-coordinate perturbation bound.
    pub err: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize, seed: u64) -> Self {
        GeneratorSpec {
            kind,
            n,
            radius: 0.25,
            noise_percent: 0.0,
            err: 0.05,
            seed,
        }
    }

    fn validate(&self) -> Result<(), IoError> {
        if !(0.0..=100.0).contains(&self.noise_percent) {
            return Err(IoError::Generator(format!(
                "noise percentage {} is outside [0, 100]",
                self.noise_percent
            )));
        }
        if !(self.err >= 0.0) || !self.err.is_finite() {
            return Err(IoError::Generator(format!("perturbation bound {} is negative", self.err)));
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(IoError::Generator(format!("radius {} is not positive", self.radius)));
        }
        Ok(())
    }
}

fn sample(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let unit = |rng: &mut ChaCha8Rng, d: usize| (0..d).map(|_| rng.gen::<f64>()).collect::<Vec<_>>();
    let ring = |rng: &mut ChaCha8Rng| {
        let t = rng.gen::<f64>() * std::f64::consts::TAU;
        let mut p = vec![0.5 + spec.radius * t.cos(), 0.5 + spec.radius * t.sin()];
        if spec.err > 0.0 {
            for x in &mut p {
                *x += rng.gen_range(-spec.err..=spec.err);
            }
        }
        p
    };
    match spec.kind {
        GeneratorKind::UniformSquare => (0..spec.n).map(|_| unit(rng, 2)).collect(),
        GeneratorKind::UniformCube => (0..spec.n).map(|_| unit(rng, 3)).collect(),
        GeneratorKind::Disk => (0..spec.n)
            .map(|_| {
                let t = rng.gen::<f64>() * std::f64::consts::TAU;
                let s = spec.radius * rng.gen::<f64>().sqrt();
                vec![0.5 + s * t.cos(), 0.5 + s * t.sin()]
            })
            .collect(),
        GeneratorKind::Annulus => (0..spec.n).map(|_| ring(rng)).collect(),
        GeneratorKind::NoisyAnnulus => {
            let noise = (spec.n as f64 * spec.noise_percent / 100.0).round() as usize;
            let mut pts: Vec<Vec<f64>> = (0..spec.n - noise).map(|_| ring(rng)).collect();
            pts.extend((0..noise).map(|_| unit(rng, 2)));
            pts
        }
    }
}

fn round_exact(x: f64) -> Rational {
    let scale = 10f64.powi(DECIMALS);
    Rational::new(((x * scale).round() as i64).into(), (scale as i64).into())
}

/// Draw a sample. The output depends only on `spec`; samples that fail
/// the general-position check are redrawn a bounded number of times. Large
/// samples whose full check exceeds the budget are returned unchecked and
/// left to the local checks of tiling enumeration.
pub fn generate(spec: &GeneratorSpec) -> Result<PointCloud, IoError> {
    spec.validate()?;
    let dim = spec.kind.dim();
    let mut last = None;
    for attempt in 0..RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9)));
        let sites = sample(spec, &mut rng)
            .into_iter()
            .map(|p| p.into_iter().map(round_exact).collect())
            .collect();
        let cloud = PointCloud::new(dim, sites)?;
        match check_general_position_within(&cloud, CHECK_BUDGET) {
            Some(GeneralPosition::Violated(v)) => last = Some(v),
            _ => return Ok(cloud),
        }
    }
    Err(IoError::Generator(format!(
        "no sample in general position after {RETRIES} attempts; last violation: {}",
        last.map(|v| v.to_string()).unwrap_or_default()
    )))
}
