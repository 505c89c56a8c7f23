//! Fourier-Wigner transform, Weyl transform, Fourier transforms on phase
//! space and the Gaussian damping map `β(X) = g·α(X)`.
//!
//! Phase-space functions are sampled on a centered uniform grid with axes
//! ordered `(x_1, …, x_n, y_1, …, y_n)`, row-major with axis 0 slowest.
//! Integrals are plain Riemann sums on that grid.

use std::f64::consts::PI;

use log::warn;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::fock_rep::{for_each_displacement_entry, rho_matrix, FockConfig, FockOperator};
use crate::phase_space::PhasePoint;

/// Upper bound on `points^{2n}` for a phase grid.
pub const MAX_GRID_POINTS: usize = 1 << 24;

/// Boundary mass above this fraction of the total triggers the aliasing check.
pub const BOUNDARY_MASS_THRESHOLD: f64 = 1e-10;

/// `‖W(f)‖_{S²} / ‖f‖_{L²}`.
///
/// Measured on the ground state: `α(P_0) = e^{−π|w|²/2}` has unit `L²` norm
/// and `W(α(P_0)) = P_0` has unit Hilbert-Schmidt norm.
pub const WEYL_PLANCHEREL: f64 = 1.0;

/// What to do when a function handed to the Weyl transform has not decayed
/// at the grid boundary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BoundaryPolicy {
    #[default]
    Warn,
    Strict,
}

/// Centered uniform grid on `ℝ^{2n}`: `points` nodes per axis with spacing
/// `side / points`, coordinates `(i − points/2)·spacing`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseGrid {
    n: usize,
    side: f64,
    points: usize,
}

impl PhaseGrid {
    pub fn new(n: usize, side: f64, points: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidConfig("grid dimension n must be >= 1".into()));
        }
        if !(side > 0.0) || !side.is_finite() {
            return Err(Error::InvalidConfig(format!("grid side must be positive, got {side}")));
        }
        if points < 2 || points % 2 != 0 {
            return Err(Error::InvalidConfig(format!("points per axis must be even, got {points}")));
        }
        let total = u32::try_from(2 * n).ok().and_then(|e| points.checked_pow(e));
        if total.is_none_or(|t| t > MAX_GRID_POINTS) {
            return Err(Error::InvalidConfig(format!(
                "grid with {points}^{} nodes exceeds the cap {MAX_GRID_POINTS}",
                2 * n
            )));
        }
        Ok(Self { n, side, points })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn axes(&self) -> usize {
        2 * self.n
    }

    pub fn spacing(&self) -> f64 {
        self.side / self.points as f64
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.axes() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Volume element `h^{2n}`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.axes() as i32)
    }

    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 - (self.points / 2) as f64) * self.spacing()
    }

    /// Grid of the discrete Fourier transform: spacing `1/side`, same node count.
    pub fn reciprocal(&self) -> Self {
        Self { n: self.n, side: self.points as f64 / self.side, points: self.points }
    }

    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes()];
        let mut rest = flat;
        for slot in idx.iter_mut().rev() {
            *slot = rest % self.points;
            rest /= self.points;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.points + i)
    }

    pub fn node_coords(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat).into_iter().map(|i| self.coord(i)).collect()
    }

    pub fn node(&self, flat: usize) -> PhasePoint {
        PhasePoint::from_coords(&self.node_coords(flat)).expect("grid nodes are finite")
    }

    pub fn is_boundary(&self, flat: usize) -> bool {
        self.multi_index(flat).into_iter().any(|i| i == 0 || i == self.points - 1)
    }
}

/// Complex samples of a function on a [`PhaseGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseFunction {
    grid: PhaseGrid,
    values: Vec<C64>,
}

impl PhaseFunction {
    pub fn new(grid: PhaseGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: values.len() });
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("phase function samples"));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every node; `f` receives the `2n` coordinates.
    pub fn from_fn(grid: PhaseGrid, f: impl Fn(&[f64]) -> C64 + Sync) -> Result<Self> {
        let values = (0..grid.len()).into_par_iter().map(|i| f(&grid.node_coords(i))).collect();
        Self::new(grid, values)
    }

    pub fn zeros(grid: PhaseGrid) -> Self {
        Self { grid, values: vec![C64::new(0.0, 0.0); grid.len()] }
    }

    /// Discrete delta at the origin: one node of height `1/h^{2n}`.
    pub fn delta(grid: PhaseGrid) -> Self {
        let mut f = Self::zeros(grid);
        let centre = grid.flat_index(&vec![grid.points() / 2; grid.axes()]);
        f.values[centre] = C64::new(1.0 / grid.cell_volume(), 0.0);
        f
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(&[f64], C64) -> C64 + Sync) -> Self {
        let grid = self.grid;
        let values = self
            .values
            .par_iter()
            .enumerate()
            .map(|(i, &v)| f(&grid.node_coords(i), v))
            .collect();
        Self { grid, values }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { grid: self.grid, values })
    }

    /// Riemann-sum `L^p` norm; `p = ∞` gives the max modulus.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        }
        let sum: f64 = self.values.iter().map(|z| z.norm().powf(p)).sum();
        (sum * self.grid.cell_volume()).powf(1.0 / p)
    }

    pub fn l2_norm(&self) -> f64 {
        self.lp_norm(2.0)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_grid(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Sum of `|f|` on the outermost layer of nodes over the sum of `|f|`.
    pub fn boundary_mass_ratio(&self) -> f64 {
        let total: f64 = self.values.iter().map(|z| z.norm()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let edge: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|(i, _)| self.grid.is_boundary(*i))
            .map(|(_, z)| z.norm())
            .sum();
        edge / total
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument("phase functions live on different grids".into()));
        }
        Ok(())
    }
}

/// Finite positive measure given by weighted nodes in `ℝ^{2n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceMeasure {
    nodes: Vec<PhasePoint>,
    weights: Vec<f64>,
    tangents: Option<Vec<Vec<f64>>>,
}

impl SurfaceMeasure {
    pub fn new(nodes: Vec<PhasePoint>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("measure needs at least one node".into()));
        }
        if nodes.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: nodes.len(), found: weights.len() });
        }
        let n = nodes[0].dim();
        if let Some(bad) = nodes.iter().find(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidArgument("measure weights must be positive and finite".into()));
        }
        Ok(Self { nodes, weights, tangents: None })
    }

    pub fn with_tangents(mut self, tangents: Vec<Vec<f64>>) -> Result<Self> {
        if tangents.len() != self.nodes.len() {
            return Err(Error::DimensionMismatch { expected: self.nodes.len(), found: tangents.len() });
        }
        self.tangents = Some(tangents);
        Ok(self)
    }

    /// Unit point mass.
    pub fn atom(z: PhasePoint) -> Self {
        Self { nodes: vec![z], weights: vec![1.0], tangents: None }
    }

    pub fn n(&self) -> usize {
        self.nodes[0].dim()
    }

    pub fn nodes(&self) -> &[PhasePoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn tangents(&self) -> Option<&[Vec<f64>]> {
        self.tangents.as_deref()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Component-wise bound on points the truncation at `cfg` can represent:
/// `√π·|z| ≤ √levels`.
pub fn representable_bound(cfg: &FockConfig) -> f64 {
    (cfg.levels() as f64 / PI).sqrt()
}

fn check_grid_dim(grid: &PhaseGrid, cfg: &FockConfig) -> Result<()> {
    if grid.n() != cfg.n() {
        return Err(Error::DimensionMismatch { expected: cfg.n(), found: grid.n() });
    }
    Ok(())
}

/// `Σ coeff_i · ρ(z_i)`, summed in fixed chunks so the result does not depend
/// on the thread count.
fn accumulate_rho(cfg: &FockConfig, terms: &[(Vec<f64>, C64)]) -> Result<DMatrix<C64>> {
    let dim = cfg.dim();
    let bytes_per_partial = dim * dim * std::mem::size_of::<C64>();
    let chunks = (256usize << 20).div_ceil(bytes_per_partial).clamp(1, 64);
    let chunk_len = terms.len().div_ceil(chunks).max(1);

    let partials: Vec<Result<Vec<C64>>> = terms
        .par_chunks(chunk_len)
        .map(|chunk| {
            let mut acc = vec![C64::new(0.0, 0.0); dim * dim];
            for (coords, coeff) in chunk {
                if cfg.n() == 1 {
                    for_each_displacement_entry(dim, coords[0], coords[1], |r, c, v| {
                        acc[c * dim + r] += coeff * v;
                    });
                } else {
                    let z = PhasePoint::from_coords(coords)?;
                    let m = rho_matrix(&z, cfg)?;
                    for (slot, v) in acc.iter_mut().zip(m.matrix().iter()) {
                        *slot += coeff * v;
                    }
                }
            }
            Ok(acc)
        })
        .collect();

    let mut total = vec![C64::new(0.0, 0.0); dim * dim];
    for partial in partials {
        for (slot, v) in total.iter_mut().zip(partial?) {
            *slot += v;
        }
    }
    Ok(DMatrix::from_vec(dim, dim, total))
}

/// `tr(ρ(z) X)` for every `z` in `points`.
fn pair_with_rho(x: &FockOperator, points: &[Vec<f64>]) -> Result<Vec<C64>> {
    let cfg = x.config();
    let dim = x.dim();
    let m = x.matrix();
    points
        .par_iter()
        .map(|coords| {
            if cfg.n() == 1 {
                let mut acc = C64::new(0.0, 0.0);
                for_each_displacement_entry(dim, coords[0], coords[1], |r, c, v| {
                    acc += v * m[(c, r)];
                });
                Ok(acc)
            } else {
                let rho = rho_matrix(&PhasePoint::from_coords(coords)?, &cfg)?;
                Ok(rho.matrix().iter().zip(m.transpose().iter()).map(|(a, b)| a * b).sum())
            }
        })
        .collect()
}

/// `α(X)(x, y) = tr(ρ(−x, −y, 1) X)` on every grid node.
pub fn fourier_wigner(x: &FockOperator, grid: &PhaseGrid) -> Result<PhaseFunction> {
    check_grid_dim(grid, &x.config())?;
    let points: Vec<Vec<f64>> =
        (0..grid.len()).map(|i| grid.node_coords(i).into_iter().map(|c| -c).collect()).collect();
    PhaseFunction::new(*grid, pair_with_rho(x, &points)?)
}

/// `α(X)` at arbitrary points.
pub fn fourier_wigner_at(x: &FockOperator, points: &[PhasePoint]) -> Result<Vec<C64>> {
    let coords: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            if p.dim() != x.config().n() {
                return Err(Error::DimensionMismatch { expected: x.config().n(), found: p.dim() });
            }
            Ok(p.neg().coords())
        })
        .collect::<Result<_>>()?;
    pair_with_rho(x, &coords)
}

fn check_boundary(f: &PhaseFunction, policy: BoundaryPolicy) -> Result<()> {
    let ratio = f.boundary_mass_ratio();
    if ratio > BOUNDARY_MASS_THRESHOLD {
        match policy {
            BoundaryPolicy::Strict => {
                return Err(Error::BoundaryMass { ratio, threshold: BOUNDARY_MASS_THRESHOLD })
            }
            BoundaryPolicy::Warn => {
                warn!("boundary mass ratio {ratio:.3e} exceeds {BOUNDARY_MASS_THRESHOLD:.0e}; expect aliasing")
            }
        }
    }
    Ok(())
}

/// `W(f) = ∫ f(z) ρ(z) dz` as a Riemann sum over the grid.
pub fn weyl_transform(
    f: &PhaseFunction,
    cfg: &FockConfig,
    policy: BoundaryPolicy,
) -> Result<FockOperator> {
    let grid = f.grid();
    check_grid_dim(grid, cfg)?;
    check_boundary(f, policy)?;
    let vol = grid.cell_volume();
    let terms: Vec<(Vec<f64>, C64)> = f
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != C64::new(0.0, 0.0))
        .map(|(i, v)| (grid.node_coords(i), v * vol))
        .collect();
    FockOperator::from_matrix(*cfg, accumulate_rho(cfg, &terms)?)
}

/// `W(μ) = Σ_i w_i ρ(z_i)`.
pub fn weyl_of_measure(mu: &SurfaceMeasure, cfg: &FockConfig) -> Result<FockOperator> {
    if mu.n() != cfg.n() {
        return Err(Error::DimensionMismatch { expected: cfg.n(), found: mu.n() });
    }
    let bound = representable_bound(cfg);
    let terms: Vec<(Vec<f64>, C64)> = mu
        .nodes()
        .iter()
        .zip(mu.weights())
        .map(|(z, &w)| {
            let coords = z.coords();
            if coords.iter().any(|c| c.abs() > bound) {
                return Err(Error::InvalidArgument(format!(
                    "measure node {z} lies outside the representable region |component| <= {bound:.3}"
                )));
            }
            Ok((coords, C64::new(w, 0.0)))
        })
        .collect::<Result<_>>()?;
    FockOperator::from_matrix(*cfg, accumulate_rho(cfg, &terms)?)
}

/// Centered 1-D DFT along `axis` with kernel `e^{sign·2πi·u·v}` and spacing
/// factor `scale`.
fn transform_axis(values: &mut [C64], grid: &PhaseGrid, axis: usize, sign: i32, scale: f64) {
    let m = grid.points();
    let axes = grid.axes();
    let stride = m.pow((axes - 1 - axis) as u32);
    let outer = values.len() / (m * stride);
    let mut planner = FftPlanner::<f64>::new();
    let fft = if sign < 0 { planner.plan_fft_forward(m) } else { planner.plan_fft_inverse(m) };
    let half_sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let alt = |i: usize| if i % 2 == 0 { 1.0 } else { -1.0 };

    let mut line = vec![C64::new(0.0, 0.0); m];
    for o in 0..outer {
        for s in 0..stride {
            let base = o * m * stride + s;
            for (j, slot) in line.iter_mut().enumerate() {
                *slot = values[base + j * stride] * alt(j);
            }
            fft.process(&mut line);
            for (k, v) in line.iter().enumerate() {
                values[base + k * stride] = v * (alt(k) * half_sign * scale);
            }
        }
    }
}

fn transform_all(f: &PhaseFunction, signs: &[i32]) -> Vec<C64> {
    let grid = *f.grid();
    let mut values = f.values().to_vec();
    for (axis, &sign) in signs.iter().enumerate() {
        transform_axis(&mut values, &grid, axis, sign, grid.spacing());
    }
    values
}

/// `f̂(ζ) = ∫ f(w) e^{−2πi ζ·w} dw`, on the reciprocal grid.
pub fn ordinary_fourier(f: &PhaseFunction) -> PhaseFunction {
    let values = transform_all(f, &vec![-1; f.grid().axes()]);
    PhaseFunction { grid: f.grid().reciprocal(), values }
}

/// `F^{-1}f(w) = ∫ f(ζ) e^{2πi ζ·w} dζ`, on the reciprocal grid.
pub fn inverse_ordinary_fourier(f: &PhaseFunction) -> PhaseFunction {
    let values = transform_all(f, &vec![1; f.grid().axes()]);
    PhaseFunction { grid: f.grid().reciprocal(), values }
}

/// `f̌(ξ, η) = ∫∫ f(x, y) e^{2πi(ξ·y − η·x)} dx dy`, on the reciprocal grid.
///
/// The `x` axes are transformed with kernel `e^{−2πi η·x}` and the `y` axes
/// with `e^{2πi ξ·y}`; the two axis blocks are then swapped so the output is
/// indexed `(ξ, η)`.
pub fn symplectic_fourier(f: &PhaseFunction) -> PhaseFunction {
    let grid = *f.grid();
    let n = grid.n();
    let signs: Vec<i32> = (0..2 * n).map(|a| if a < n { -1 } else { 1 }).collect();
    let swapped = transform_all(f, &signs);
    let out_grid = grid.reciprocal();
    let values = (0..out_grid.len())
        .map(|i| {
            let idx = out_grid.multi_index(i);
            let mut src = idx[n..].to_vec();
            src.extend_from_slice(&idx[..n]);
            swapped[out_grid.flat_index(&src)]
        })
        .collect();
    PhaseFunction { grid: out_grid, values }
}

/// `(T_z f)(w) = f(w + z)` by a Fourier phase shift (exact for band-limited
/// samples).
pub fn translate_samples(f: &PhaseFunction, z: &PhasePoint) -> Result<PhaseFunction> {
    if z.dim() != f.grid().n() {
        return Err(Error::DimensionMismatch { expected: f.grid().n(), found: z.dim() });
    }
    let shift = z.coords();
    let spectrum = ordinary_fourier(f);
    let rgrid = *spectrum.grid();
    let nyquist = 0;
    let shifted = spectrum.map(|zeta, v| {
        let angle: f64 = 2.0 * PI * zeta.iter().zip(&shift).map(|(a, b)| a * b).sum::<f64>();
        v * C64::from_polar(1.0, angle)
    });
    // the unpaired Nyquist bin keeps only the symmetric (cosine) part
    let values = shifted
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if rgrid.multi_index(i).contains(&nyquist) {
                let angle: f64 =
                    2.0 * PI * rgrid.node_coords(i).iter().zip(&shift).map(|(a, b)| a * b).sum::<f64>();
                spectrum.values()[i] * angle.cos()
            } else {
                v
            }
        })
        .collect();
    let shifted = PhaseFunction { grid: rgrid, values };
    let back = inverse_ordinary_fourier(&shifted);
    Ok(PhaseFunction { grid: *f.grid(), values: back.values })
}

/// Weyl correspondence `W(F^{-1}f)`.
///
/// The inverse Fourier transform here is the symplectic one, which is its own
/// inverse; with it `Weyl(T_z f) = z·Weyl(f)` holds for the quantum translate
/// by the same `z`.
pub fn weyl_correspondence(
    f: &PhaseFunction,
    cfg: &FockConfig,
    policy: BoundaryPolicy,
) -> Result<FockOperator> {
    weyl_transform(&symplectic_fourier(f), cfg, policy)
}

/// `g(x, y) = e^{−π(|x|² + |y|²)/2}`.
pub fn damping_gaussian(coords: &[f64]) -> f64 {
    (-0.5 * PI * coords.iter().map(|c| c * c).sum::<f64>()).exp()
}

/// `β(X) = g·α(X)`.
pub fn beta_damp(x: &FockOperator, grid: &PhaseGrid) -> Result<PhaseFunction> {
    Ok(fourier_wigner(x, grid)?.map(|w, v| v * damping_gaussian(w)))
}

/// `‖W(f)‖_{S²} / ‖f‖_{L²}`; compare against [`WEYL_PLANCHEREL`].
pub fn plancherel_ratio(f: &PhaseFunction, cfg: &FockConfig, policy: BoundaryPolicy) -> Result<f64> {
    let w = weyl_transform(f, cfg, policy)?;
    Ok(w.frobenius_norm() / f.l2_norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(a: f64) -> impl Fn(&[f64]) -> C64 + Sync {
        move |w: &[f64]| C64::new((-PI * a * w.iter().map(|c| c * c).sum::<f64>()).exp(), 0.0)
    }

    /// Direct O(M⁴) evaluation of the symplectic transform for n = 1.
    fn brute_symplectic(f: &PhaseFunction) -> PhaseFunction {
        let g = *f.grid();
        let r = g.reciprocal();
        let h2 = g.cell_volume();
        let values = (0..r.len())
            .map(|o| {
                let out = r.node_coords(o);
                let (xi, eta) = (out[0], out[1]);
                (0..g.len())
                    .map(|i| {
                        let w = g.node_coords(i);
                        f.values()[i] * C64::from_polar(h2, 2.0 * PI * (xi * w[1] - eta * w[0]))
                    })
                    .sum()
            })
            .collect();
        PhaseFunction::new(r, values).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(PhaseGrid::new(1, 12.0, 95).is_err());
        assert!(PhaseGrid::new(1, 0.0, 96).is_err());
        assert!(PhaseGrid::new(0, 1.0, 8).is_err());
        assert!(PhaseGrid::new(3, 1.0, 64).is_err());
        let g = PhaseGrid::new(1, 12.0, 96).unwrap();
        assert_eq!(g.spacing(), 0.125);
        assert_eq!(g.coord(48), 0.0);
        assert_eq!(g.reciprocal().spacing(), 1.0 / 12.0);
        assert_eq!(g.flat_index(&g.multi_index(1234)), 1234);
    }

    #[test]
    fn fourier_wigner_examples() {
        let cfg = FockConfig::new(1, 32).unwrap();
        let grid = PhaseGrid::new(1, 4.0, 16).unwrap();
        let id = fourier_wigner(&FockOperator::identity(cfg), &grid).unwrap();
        let centre = grid.flat_index(&[8, 8]);
        assert!((id.values()[centre] - 32.0).norm() < 1e-12);

        let zero = fourier_wigner(&FockOperator::zeros(cfg), &grid).unwrap();
        assert!(zero.values().iter().all(|v| v.norm() == 0.0));

        let p0 = fourier_wigner(&FockOperator::ground_state(cfg), &grid).unwrap();
        let expected = PhaseFunction::from_fn(grid, gaussian(0.5)).unwrap();
        assert!(p0.max_abs_diff(&expected).unwrap() < 1e-6);
    }

    #[test]
    fn weyl_of_delta_is_identity() {
        let cfg = FockConfig::new(1, 16).unwrap();
        let grid = PhaseGrid::new(1, 4.0, 16).unwrap();
        let w = weyl_transform(&PhaseFunction::delta(grid), &cfg, BoundaryPolicy::Warn).unwrap();
        let dev = w.sub(&FockOperator::identity(cfg)).unwrap().max_abs_entry();
        assert!(dev < 1e-12);
    }

    #[test]
    fn strict_boundary_policy_rejects_wide_functions() {
        let cfg = FockConfig::new(1, 8).unwrap();
        let grid = PhaseGrid::new(1, 4.0, 16).unwrap();
        let wide = PhaseFunction::from_fn(grid, gaussian(0.01)).unwrap();
        assert!(matches!(
            weyl_transform(&wide, &cfg, BoundaryPolicy::Strict),
            Err(Error::BoundaryMass { .. })
        ));
        assert!(weyl_transform(&wide, &cfg, BoundaryPolicy::Warn).is_ok());
    }

    #[test]
    fn weyl_of_measure_examples() {
        let cfg = FockConfig::new(1, 12).unwrap();
        let id = weyl_of_measure(&SurfaceMeasure::atom(PhasePoint::origin(1)), &cfg).unwrap();
        assert_eq!(id, FockOperator::identity(cfg));
        let z = PhasePoint::planar(0.4, -0.3);
        let atom = weyl_of_measure(&SurfaceMeasure::atom(z.clone()), &cfg).unwrap();
        let rho = rho_matrix(&z, &cfg).unwrap();
        assert!(atom.sub(&rho).unwrap().max_abs_entry() < 1e-15);
        let far = SurfaceMeasure::atom(PhasePoint::planar(10.0, 0.0));
        assert!(weyl_of_measure(&far, &cfg).is_err());
    }

    #[test]
    fn measure_validation() {
        let z = PhasePoint::origin(1);
        assert!(SurfaceMeasure::new(vec![], vec![]).is_err());
        assert!(SurfaceMeasure::new(vec![z.clone()], vec![0.0]).is_err());
        assert!(SurfaceMeasure::new(vec![z.clone()], vec![1.0, 2.0]).is_err());
        assert!(SurfaceMeasure::new(vec![z, PhasePoint::origin(2)], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn symplectic_fourier_of_delta_is_constant() {
        let grid = PhaseGrid::new(1, 4.0, 16).unwrap();
        let out = symplectic_fourier(&PhaseFunction::delta(grid));
        assert!(out.values().iter().all(|v| (v - 1.0).norm() < 1e-12));
    }

    #[test]
    fn symplectic_fourier_of_gaussian() {
        let grid = PhaseGrid::new(1, 16.0, 256).unwrap();
        let f = PhaseFunction::from_fn(grid, gaussian(0.5)).unwrap();
        let out = symplectic_fourier(&f);
        let expected = PhaseFunction::from_fn(*out.grid(), |w| 2.0 * gaussian(2.0)(w)).unwrap();
        assert!(out.max_abs_diff(&expected).unwrap() < 1e-6);
    }

    #[test]
    fn symplectic_fourier_matches_direct_sum_and_is_an_involution() {
        let grid = PhaseGrid::new(1, 3.0, 8).unwrap();
        let f = PhaseFunction::from_fn(grid, |w| C64::new(w[0] - 0.3 * w[1] * w[1], (w[0] * w[1]).sin()))
            .unwrap();
        let fast = symplectic_fourier(&f);
        let slow = brute_symplectic(&f);
        assert!(fast.max_abs_diff(&slow).unwrap() < 1e-12);
        let twice = symplectic_fourier(&fast);
        assert_eq!(twice.grid(), f.grid());
        assert!(twice.max_abs_diff(&f).unwrap() < 1e-10);
    }

    #[test]
    fn ordinary_fourier_examples() {
        let grid = PhaseGrid::new(1, 4.0, 16).unwrap();
        let out = ordinary_fourier(&PhaseFunction::delta(grid));
        assert!(out.values().iter().all(|v| (v - 1.0).norm() < 1e-12));

        let grid = PhaseGrid::new(1, 12.0, 96).unwrap();
        let even = PhaseFunction::from_fn(grid, |w| C64::new((-w[0] * w[0] - 2.0 * w[1] * w[1]).exp() * (1.0 + w[0] * w[0]), 0.0))
            .unwrap();
        let out = ordinary_fourier(&even);
        assert!(out.values().iter().all(|v| v.im.abs() < 1e-10));

        let f = PhaseFunction::from_fn(grid, gaussian(1.0)).unwrap();
        let out = ordinary_fourier(&f);
        let expected = PhaseFunction::from_fn(*out.grid(), gaussian(1.0)).unwrap();
        assert!(out.max_abs_diff(&expected).unwrap() < 1e-8);
        let back = inverse_ordinary_fourier(&out);
        assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
    }

    #[test]
    fn translate_samples_shifts_gaussians() {
        let grid = PhaseGrid::new(1, 12.0, 96).unwrap();
        let f = PhaseFunction::from_fn(grid, gaussian(0.5)).unwrap();
        let z = PhasePoint::planar(0.37, -0.21);
        let moved = translate_samples(&f, &z).unwrap();
        let expected =
            PhaseFunction::from_fn(grid, |w| gaussian(0.5)(&[w[0] + 0.37, w[1] - 0.21])).unwrap();
        assert!(moved.max_abs_diff(&expected).unwrap() < 1e-10);
    }

    #[test]
    fn beta_damp_examples() {
        let cfg = FockConfig::new(1, 32).unwrap();
        let grid = PhaseGrid::new(1, 6.0, 24).unwrap();
        let zero = beta_damp(&FockOperator::zeros(cfg), &grid).unwrap();
        assert!(zero.values().iter().all(|v| v.norm() == 0.0));
        let b = beta_damp(&FockOperator::ground_state(cfg), &grid).unwrap();
        let expected = PhaseFunction::from_fn(grid, gaussian(1.0)).unwrap();
        assert!(b.max_abs_diff(&expected).unwrap() < 1e-6);

        let v: Vec<C64> = (0..32).map(|k| C64::new(1.0 / (1.0 + k as f64), 0.3)).collect();
        let x = FockOperator::projector(cfg, &v).unwrap();
        let a = fourier_wigner(&x, &grid).unwrap();
        let b = beta_damp(&x, &grid).unwrap();
        assert!(a.values().iter().zip(b.values()).all(|(p, q)| q.norm() <= p.norm()));
    }

    #[test]
    fn weyl_correspondence_of_constant_is_identity() {
        let cfg = FockConfig::new(1, 16).unwrap();
        let grid = PhaseGrid::new(1, 4.0, 16).unwrap();
        let one = PhaseFunction::from_fn(grid, |_| C64::new(1.0, 0.0)).unwrap();
        let w = weyl_correspondence(&one, &cfg, BoundaryPolicy::Warn).unwrap();
        assert!(w.sub(&FockOperator::identity(cfg)).unwrap().max_abs_entry() < 1e-12);
    }
}
