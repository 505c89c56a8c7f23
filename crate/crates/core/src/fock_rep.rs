//! The Schrödinger representation `ρ(x, y, 1)` as matrices in a truncated
//! Hermite basis.
//!
//! Hermite functions use the normalization `h_0(t) = 2^{1/4} e^{−πt²}`. In that
//! basis `ρ(x, y, 1)` is the displacement operator `D(β)` with
//! `β = √π(−x + iy)`, whose entries are
//!
//! ```text
//! ⟨h_{n+d}, D(β) h_n⟩ = (β/|β|)^d  f_n^{(d)}
//! ⟨h_n, D(β) h_{n+d}⟩ = (−β̄/|β|)^d f_n^{(d)}
//! f_n^{(d)} = √(n!/(n+d)!) |β|^d e^{−|β|²/2} L_n^{(d)}(|β|²)
//! ```
//!
//! `f_n^{(d)}` is generated along each diagonal with the normalized
//! three-term Laguerre recurrence, so a full `N × N` block costs `O(N²)`.
//! Entries are exact matrix elements of the infinite operator; only the
//! products of truncated matrices carry truncation error.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::PhasePoint;

/// Hard cap on the total matrix dimension `levels^n`.
pub const MAX_DIM: usize = 4096;

/// Largest Hermite index the forward recurrence is trusted for.
///
/// Above this the ground-state factor underflows inside the classically
/// allowed region of `h_k`.
pub const MAX_HERMITE_INDEX: usize = 600;

/// Truncation parameters: Heisenberg dimension `n` and basis functions per
/// coordinate `levels`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockConfig {
    n: usize,
    levels: usize,
}

impl FockConfig {
    pub fn new(n: usize, levels: usize) -> Result<Self> {
        Self::with_cap(n, levels, MAX_DIM)
    }

    pub fn with_cap(n: usize, levels: usize, cap: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if levels < 2 {
            return Err(Error::InvalidConfig("levels must be at least 2".into()));
        }
        let dim = u32::try_from(n)
            .ok()
            .and_then(|e| levels.checked_pow(e))
            .filter(|&d| d <= cap)
            .ok_or_else(|| {
                Error::InvalidConfig(format!("levels^n = {levels}^{n} exceeds the cap {cap}"))
            })?;
        debug_assert!(dim >= 2);
        Ok(Self { n, levels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn dim(&self) -> usize {
        self.levels.pow(self.n as u32)
    }
}

/// A complex `dim × dim` matrix on the truncated Hermite basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    config: FockConfig,
    matrix: DMatrix<C64>,
}

impl FockOperator {
    pub fn from_matrix(config: FockConfig, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = config.dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: matrix.nrows() });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("operator entries"));
        }
        Ok(Self { config, matrix })
    }

    pub fn zeros(config: FockConfig) -> Self {
        let dim = config.dim();
        Self { config, matrix: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(config: FockConfig) -> Self {
        let dim = config.dim();
        Self { config, matrix: DMatrix::identity(dim, dim) }
    }

    /// Rank-one projector `|v⟩⟨v| / ⟨v, v⟩`.
    pub fn projector(config: FockConfig, v: &[C64]) -> Result<Self> {
        if v.len() != config.dim() {
            return Err(Error::DimensionMismatch { expected: config.dim(), found: v.len() });
        }
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm2 == 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidArgument("projector vector must be nonzero".into()));
        }
        let col = nalgebra::DVector::from_column_slice(v);
        let matrix = &col * col.adjoint() / C64::from(norm2);
        Self::from_matrix(config, matrix)
    }

    /// Projector onto the ground state `h_0 ⊗ … ⊗ h_0`.
    pub fn ground_state(config: FockConfig) -> Self {
        let mut op = Self::zeros(config);
        op.matrix[(0, 0)] = C64::new(1.0, 0.0);
        op
    }

    pub fn config(&self) -> FockConfig {
        self.config
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self { config: self.config, matrix: self.matrix.adjoint() }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Hilbert-Schmidt inner product `tr(other* · self)`.
    pub fn hs_inner(&self, other: &Self) -> Result<C64> {
        self.check_same(other)?;
        Ok(self.matrix.iter().zip(other.matrix.iter()).map(|(a, b)| b.conj() * a).sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|z| *z == C64::new(0.0, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { config: self.config, matrix: &self.matrix + &other.matrix })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { config: self.config, matrix: &self.matrix - &other.matrix })
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { config: self.config, matrix: &self.matrix * c }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { config: self.config, matrix: &self.matrix * &other.matrix })
    }

    /// Leading `k × k` block, where accuracy claims are made.
    pub fn leading_block(&self, k: usize) -> DMatrix<C64> {
        let k = k.min(self.dim());
        self.matrix.view((0, 0), (k, k)).into_owned()
    }

    /// `‖X − X*‖_max`.
    pub fn selfadjoint_defect(&self) -> f64 {
        let m = &self.matrix;
        let mut worst = 0.0f64;
        for j in 0..m.nrows() {
            for k in 0..m.ncols() {
                worst = worst.max((m[(j, k)] - m[(k, j)].conj()).norm());
            }
        }
        worst
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.config != other.config {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }
}

/// Uniform centered 1-D grid used for Hermite samples and quadrature oracles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1d {
    start: f64,
    spacing: f64,
    len: usize,
}

impl Grid1d {
    /// `points` nodes spanning `[−half_width, half_width]` inclusive.
    pub fn centered(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() || points < 2 {
            return Err(Error::InvalidArgument("grid needs half_width > 0 and >= 2 points".into()));
        }
        Ok(Self { start: -half_width, spacing: 2.0 * half_width / (points - 1) as f64, len: points })
    }

    /// Default oracle grid: `[−8, 8]` with 4096 points.
    pub fn oracle_default() -> Self {
        Self::centered(8.0, 4096).expect("valid default grid")
    }

    pub fn shifted(&self, offset: f64) -> Self {
        Self { start: self.start + offset, ..*self }
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.spacing
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.point(i))
    }
}

/// Values `h_0(t), …, h_{count-1}(t)`.
pub fn hermite_functions_at(t: f64, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let s = (2.0 * PI).sqrt() * t;
    let h0 = 2f64.powf(0.25) * (-PI * t * t).exp();
    out.push(h0);
    if count == 1 {
        return out;
    }
    out.push(2f64.sqrt() * s * h0);
    for k in 1..count - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * s * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Samples of the `k`-th orthonormal Hermite function on `grid`.
pub fn hermite_basis_samples(k: usize, grid: &Grid1d) -> Result<Vec<f64>> {
    if k > MAX_HERMITE_INDEX {
        return Err(Error::InvalidArgument(format!(
            "Hermite index {k} exceeds the stable recurrence limit {MAX_HERMITE_INDEX}"
        )));
    }
    Ok(grid.points().map(|t| hermite_functions_at(t, k + 1)[k]).collect())
}

/// Walks every entry of the `levels × levels` block of the 1-D `ρ(x, y, 1)`,
/// calling `visit(row, col, value)`.
pub(crate) fn for_each_displacement_entry(
    levels: usize,
    x: f64,
    y: f64,
    mut visit: impl FnMut(usize, usize, C64),
) {
    let beta = C64::new(-x, y) * PI.sqrt();
    let r2 = beta.norm_sqr();
    let unit = if r2 > 0.0 { beta / r2.sqrt() } else { C64::new(1.0, 0.0) };
    let ln_r2 = r2.ln();

    let mut ln_factorial = 0.0;
    let mut phase = C64::new(1.0, 0.0);
    for d in 0..levels {
        if d > 0 {
            ln_factorial += (d as f64).ln();
            phase *= unit;
        }
        let df = d as f64;
        let head = if r2 > 0.0 {
            (-0.5 * r2 + 0.5 * df * ln_r2 - 0.5 * ln_factorial).exp()
        } else if d == 0 {
            1.0
        } else {
            0.0
        };
        let upper = phase;
        let lower = if d % 2 == 0 { phase.conj() } else { -phase.conj() };

        let mut prev = 0.0;
        let mut cur = head;
        for n in 0..levels - d {
            visit(n + d, n, upper * cur);
            if d > 0 {
                visit(n, n + d, lower * cur);
            }
            let nf = n as f64;
            let next = ((2.0 * nf + 1.0 + df - r2) * cur - (nf * (nf + df)).sqrt() * prev)
                / ((nf + 1.0) * (nf + 1.0 + df)).sqrt();
            prev = cur;
            cur = next;
        }
    }
}

/// 1-D factor of `ρ(x, y, 1)` on `levels` Hermite functions.
pub fn displacement_1d(x: f64, y: f64, levels: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(levels, levels);
    for_each_displacement_entry(levels, x, y, |r, c, v| m[(r, c)] = v);
    m
}

fn check_point(z: &PhasePoint, cfg: &FockConfig) -> Result<()> {
    if z.dim() != cfg.n() {
        return Err(Error::DimensionMismatch { expected: cfg.n(), found: z.dim() });
    }
    Ok(())
}

/// Matrix of `ρ(x, y, 1)`: Kronecker product of the per-coordinate factors,
/// first coordinate most significant.
pub fn rho_matrix(z: &PhasePoint, cfg: &FockConfig) -> Result<FockOperator> {
    check_point(z, cfg)?;
    let levels = cfg.levels();
    let mut matrix = displacement_1d(z.x()[0], z.y()[0], levels);
    for j in 1..cfg.n() {
        matrix = matrix.kronecker(&displacement_1d(z.x()[j], z.y()[j], levels));
    }
    Ok(FockOperator { config: *cfg, matrix })
}

/// Conjugate transpose of [`rho_matrix`], i.e. the truncated `ρ(x, y, 1)^{-1}`.
pub fn rho_adjoint(z: &PhasePoint, cfg: &FockConfig) -> Result<FockOperator> {
    Ok(rho_matrix(z, cfg)?.adjoint())
}
