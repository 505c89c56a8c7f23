//! Seeded random test families shared by the verification suites.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fock_rep::{FockConfig, FockOperator};
use crate::phase_space::PhasePoint;
use crate::transforms::{PhaseFunction, PhaseGrid};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_normal(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniform point in the ball `|z| ≤ radius` of `ℝ^{2n}`.
pub fn random_point(n: usize, radius: f64, rng: &mut ChaCha8Rng) -> PhasePoint {
    let dim = 2 * n;
    let dir: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let r = radius * rng.gen::<f64>().powf(1.0 / dim as f64);
    PhasePoint::from_coords(&dir.iter().map(|v| v * r / norm).collect::<Vec<_>>())
        .expect("coordinate count is even")
}

/// `count` points in `|z| ≤ radius` with pairwise distance at least
/// `separation`, by rejection sampling.
pub fn separated_points(
    n: usize,
    count: usize,
    separation: f64,
    radius: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<PhasePoint>> {
    let mut pts: Vec<PhasePoint> = Vec::with_capacity(count);
    for _ in 0..100_000 {
        if pts.len() == count {
            break;
        }
        let z = random_point(n, radius, rng);
        if pts.iter().all(|p| p.distance(&z).is_ok_and(|d| d >= separation)) {
            pts.push(z);
        }
    }
    if pts.len() < count {
        return Err(Error::InvalidArgument(format!(
            "could not place {count} points with separation {separation} in radius {radius}"
        )));
    }
    Ok(pts)
}

/// Random vector supported on basis states whose every per-mode level is
/// below `cutoff`.
fn low_level_vector(cfg: &FockConfig, cutoff: usize, rng: &mut ChaCha8Rng) -> DVector<C64> {
    let levels = cfg.levels();
    let v = DVector::from_fn(cfg.dim(), |i, _| {
        let mut rest = i;
        let mut inside = true;
        for _ in 0..cfg.n() {
            inside &= rest % levels < cutoff;
            rest /= levels;
        }
        if inside {
            complex_normal(rng)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let norm = v.norm();
    v / C64::from(norm)
}

/// `Σ_k c_k u_k v_k^*` with unit vectors on levels below `N/4` and
/// `c_k ∈ [0.5, 1]`.
pub fn low_rank_operator(cfg: &FockConfig, rank: usize, rng: &mut ChaCha8Rng) -> Result<FockOperator> {
    if rank == 0 {
        return Err(Error::InvalidArgument("rank must be >= 1".into()));
    }
    let cutoff = (cfg.levels() / 4).max(1);
    let mut m = nalgebra::DMatrix::zeros(cfg.dim(), cfg.dim());
    for _ in 0..rank {
        let u = low_level_vector(cfg, cutoff, rng);
        let v = low_level_vector(cfg, cutoff, rng);
        let c: f64 = rng.gen_range(0.5..1.0);
        m += u * v.adjoint() * C64::from(c);
    }
    FockOperator::from_matrix(*cfg, m)
}

/// Parameters of `c·e^{−πa|w − w0|²}·e^{2πi k·w}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianEnvelope {
    pub amplitude: C64,
    pub width: f64,
    pub centre: Vec<f64>,
    pub frequency: Vec<f64>,
}

impl GaussianEnvelope {
    /// Width `a ∈ [1, 2]`, centre in `|w0| ≤ 1`, frequency in `|k| ≤ 1/2`.
    pub fn random(n: usize, rng: &mut ChaCha8Rng) -> Self {
        let amplitude = complex_normal(rng);
        let width = rng.gen_range(1.0..2.0);
        let centre = random_point(n, 1.0, rng).coords();
        let frequency = random_point(n, 0.5, rng).coords();
        Self { amplitude, width, centre, frequency }
    }

    pub fn eval(&self, w: &[f64]) -> C64 {
        let r2: f64 = w.iter().zip(&self.centre).map(|(a, b)| (a - b).powi(2)).sum();
        let phase: f64 = w.iter().zip(&self.frequency).map(|(a, b)| a * b).sum();
        self.amplitude * (-PI * self.width * r2).exp() * C64::from_polar(1.0, 2.0 * PI * phase)
    }

    pub fn sample(&self, grid: PhaseGrid) -> Result<PhaseFunction> {
        PhaseFunction::from_fn(grid, |w| self.eval(w))
    }
}

/// Smooth radial bump `e^{1 − 1/(1 − s²)}`, `s = |w − c|/r`, supported in the
/// cube `[−1, 1]^{2n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bump {
    pub centre: Vec<f64>,
    pub radius: f64,
}

impl Bump {
    /// Radius in `[0.3, 0.5]`, centre in `[−1/2, 1/2]^{2n}`.
    pub fn random(n: usize, rng: &mut ChaCha8Rng) -> Self {
        let centre = (0..2 * n).map(|_| rng.gen_range(-0.5..0.5)).collect();
        Self { centre, radius: rng.gen_range(0.3..0.5) }
    }

    pub fn eval(&self, w: &[f64]) -> f64 {
        let s2: f64 = w.iter().zip(&self.centre).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / self.radius.powi(2);
        if s2 < 1.0 {
            (1.0 - 1.0 / (1.0 - s2)).exp()
        } else {
            0.0
        }
    }

    pub fn sample(&self, grid: PhaseGrid) -> Result<PhaseFunction> {
        PhaseFunction::from_fn(grid, |w| C64::new(self.eval(w), 0.0))
    }
}
