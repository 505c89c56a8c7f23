//! The operator `A = W(σ)` for `n = 1`, where `σ` is arclength measure on the
//! closed component of `{p = 0}`, `p(x, y) = 2 − 2cos 2πx − 2cos 2πy`, that
//! passes through `(±1/4, 0)` and `(0, ±1/4)`.
//!
//! `p` is the characteristic polynomial of [`eq4_spec`](crate::qtranslate::eq4_spec),
//! so `A` solves that difference equation, while the curvature of the
//! component puts `A` in `S^p` exactly for `p > 4`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock_rep::{FockConfig, FockOperator};
use crate::phase_space::PhasePoint;
use crate::qtranslate::{difference_apply, eq4_spec};
use crate::schatten::{log_log_fit, DecayFit, SpectrumProfile};
use crate::transforms::{weyl_of_measure, SurfaceMeasure};

/// Minimum node count for [`trace_zero_component`].
pub const MIN_CURVE_NODES: usize = 64;

/// Largest arclength substep of the continuation.
const MAX_SUBSTEP: f64 = 1e-3;

/// Allowed gap between the last continuation node and the seed.
pub const CLOSURE_TOLERANCE: f64 = 1e-8;

/// Nodes are projected until `|p|` falls below this.
const PROJECTION_TOLERANCE: f64 = 1e-14;

/// Schatten exponents reported for the counterexample.
pub const REPORT_P_GRID: [f64; 5] = [2.0, 3.0, 4.0, 5.0, 8.0];

/// `2(2n−1) − 2Σ_j (cos 2πx_j + cos 2πy_j)` for coordinates `(x_1..x_n, y_1..y_n)`.
pub fn char_poly_surface(w: &[f64]) -> f64 {
    let n = w.len() / 2;
    let trig: f64 = w.iter().map(|c| (2.0 * PI * c).cos()).sum();
    2.0 * (2.0 * n as f64 - 1.0) - 2.0 * trig
}

/// Exact partial derivatives of the planar `p`.
#[derive(Clone, Copy, Debug)]
struct Jet {
    value: f64,
    px: f64,
    py: f64,
    pxx: f64,
    pyy: f64,
}

fn jet(x: f64, y: f64) -> Jet {
    let (sx, cx) = (2.0 * PI * x).sin_cos();
    let (sy, cy) = (2.0 * PI * y).sin_cos();
    Jet {
        value: 2.0 - 2.0 * cx - 2.0 * cy,
        px: 4.0 * PI * sx,
        py: 4.0 * PI * sy,
        pxx: 8.0 * PI * PI * cx,
        pyy: 8.0 * PI * PI * cy,
    }
}

/// Signed curvature of the level set through `(x, y)`:
/// `(p_xx p_y² − 2 p_xy p_x p_y + p_yy p_x²) / |∇p|³` with `p_xy = 0`.
pub fn curvature_at(x: f64, y: f64) -> Result<f64> {
    let j = jet(x, y);
    let g = j.px.hypot(j.py);
    if g < 1e-8 {
        return Err(Error::DegenerateGradient(g));
    }
    Ok((j.pxx * j.py * j.py + j.pyy * j.px * j.px) / g.powi(3))
}

/// Counter-clockwise unit tangent `(−p_y, p_x)/|∇p|`.
fn tangent(z: [f64; 2]) -> [f64; 2] {
    let j = jet(z[0], z[1]);
    let g = j.px.hypot(j.py);
    [-j.py / g, j.px / g]
}

/// Newton projection along the gradient onto `{p = 0}`.
fn project(mut z: [f64; 2]) -> Result<[f64; 2]> {
    for _ in 0..12 {
        let j = jet(z[0], z[1]);
        if j.value.abs() < PROJECTION_TOLERANCE {
            return Ok(z);
        }
        let g2 = j.px * j.px + j.py * j.py;
        if g2 < 1e-16 {
            return Err(Error::DegenerateGradient(g2.sqrt()));
        }
        z = [z[0] - j.value * j.px / g2, z[1] - j.value * j.py / g2];
    }
    let residual = jet(z[0], z[1]).value;
    if residual.abs() < 1e-12 {
        Ok(z)
    } else {
        Err(Error::Continuation(format!(
            "Newton projection stalled at ({:.6}, {:.6}) with |p| = {residual:.3e}",
            z[0], z[1]
        )))
    }
}

/// One RK4 arclength step followed by projection.
fn advance(z: [f64; 2], h: f64) -> Result<[f64; 2]> {
    let at = |p: [f64; 2], k: [f64; 2], s: f64| [p[0] + s * k[0], p[1] + s * k[1]];
    let k1 = tangent(z);
    let k2 = tangent(at(z, k1, h / 2.0));
    let k3 = tangent(at(z, k2, h / 2.0));
    let k4 = tangent(at(z, k3, h));
    let predicted = [
        z[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        z[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ];
    let drift = jet(predicted[0], predicted[1]).value.abs();
    if drift > 1e-3 {
        return Err(Error::Continuation(format!(
            "predictor left the level set (|p| = {drift:.3e}) after step {h:.3e} from ({:.6}, {:.6})",
            z[0], z[1]
        )));
    }
    project(predicted)
}

/// Advances exactly `len` in arclength using substeps no longer than
/// [`MAX_SUBSTEP`].
fn advance_by(z: [f64; 2], len: f64) -> Result<[f64; 2]> {
    let steps = (len / MAX_SUBSTEP).ceil().max(1.0) as usize;
    let h = len / steps as f64;
    (0..steps).try_fold(z, |p, _| advance(p, h))
}

const SEED: [f64; 2] = [0.25, 0.0];

/// Total length of the component by continuation from the seed until the
/// curve re-crosses the positive `x` axis.
fn component_length() -> Result<f64> {
    let mut z = SEED;
    let mut s = 0.0;
    for _ in 0..(100.0 / MAX_SUBSTEP) as usize {
        let next = advance(z, MAX_SUBSTEP)?;
        if z[1] < 0.0 && next[1] >= 0.0 && next[0] > 0.0 {
            // secant solve for the partial step landing on y = 0
            let (mut lo, mut hi) = (0.0, MAX_SUBSTEP);
            let (mut ylo, mut yhi) = (z[1], next[1]);
            let mut delta = hi;
            for _ in 0..60 {
                delta = lo - ylo * (hi - lo) / (yhi - ylo);
                let y = advance(z, delta)?[1];
                if y.abs() < 1e-16 {
                    break;
                }
                if y < 0.0 {
                    lo = delta;
                    ylo = y;
                } else {
                    hi = delta;
                    yhi = y;
                }
                if hi - lo < 1e-17 {
                    break;
                }
            }
            return Ok(s + delta);
        }
        z = next;
        s += MAX_SUBSTEP;
    }
    Err(Error::Continuation("curve did not close within the step budget".into()))
}

/// Closed polyline on the traced component with arclength trapezoid weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelCurve {
    nodes: Vec<[f64; 2]>,
    weights: Vec<f64>,
    curvatures: Vec<f64>,
}

impl LevelCurve {
    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn curvatures(&self) -> &[f64] {
        &self.curvatures
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Largest `|p|` over the nodes.
    pub fn max_level_residual(&self) -> f64 {
        self.nodes.iter().map(|z| char_poly_surface(z).abs()).fold(0.0, f64::max)
    }

    /// Arclength measure `σ` with unit tangents attached.
    pub fn to_measure(&self) -> Result<SurfaceMeasure> {
        let nodes = self.nodes.iter().map(|z| PhasePoint::planar(z[0], z[1])).collect();
        let tangents = self.nodes.iter().map(|&z| tangent(z).to_vec()).collect();
        SurfaceMeasure::new(nodes, self.weights.clone())?.with_tangents(tangents)
    }

    /// `σ̂(ξ) = Σ_i w_i e^{−2πi ξ·ζ_i}`.
    pub fn fourier_transform(&self, xi: [f64; 2]) -> C64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(z, w)| C64::from_polar(*w, -2.0 * PI * (xi[0] * z[0] + xi[1] * z[1])))
            .sum()
    }
}

/// Traces the component through `(1/4, 0)` with `nodes` points equally
/// spaced in arclength.
///
/// Continuation runs twice: once to measure the length, once with node
/// spacing `length / nodes`. The loop must close on the seed to
/// [`CLOSURE_TOLERANCE`]. The second half of the nodes is then replaced by the
/// exact point reflection of the first half (the component is symmetric under
/// `z → −z`), which keeps `W(σ)` self-adjoint to rounding.
pub fn trace_zero_component(nodes: usize) -> Result<LevelCurve> {
    if nodes < MIN_CURVE_NODES {
        return Err(Error::InvalidArgument(format!("need at least {MIN_CURVE_NODES} curve nodes, got {nodes}")));
    }
    if nodes % 2 != 0 {
        return Err(Error::InvalidArgument(format!("curve node count must be even, got {nodes}")));
    }
    let length = component_length()?;
    let step = length / nodes as f64;

    let mut pts = Vec::with_capacity(nodes);
    let mut z = SEED;
    for _ in 0..nodes {
        pts.push(z);
        z = advance_by(z, step)?;
    }
    let gap = (z[0] - SEED[0]).hypot(z[1] - SEED[1]);
    if gap > CLOSURE_TOLERANCE {
        return Err(Error::Continuation(format!("loop closes with gap {gap:.3e}")));
    }

    let half = nodes / 2;
    for i in half..nodes {
        let mirror = pts[i - half];
        let dev = (pts[i][0] + mirror[0]).hypot(pts[i][1] + mirror[1]);
        if dev > CLOSURE_TOLERANCE {
            return Err(Error::Continuation(format!("node {i} breaks point symmetry by {dev:.3e}")));
        }
        pts[i] = [-mirror[0], -mirror[1]];
    }

    let curvatures = pts.iter().map(|z| curvature_at(z[0], z[1])).collect::<Result<_>>()?;
    Ok(LevelCurve { nodes: pts, weights: vec![step; nodes], curvatures })
}

/// Curvature at every node of `curve`.
pub fn curvature_profile(curve: &LevelCurve) -> Result<Vec<f64>> {
    curve.nodes.iter().map(|z| curvature_at(z[0], z[1])).collect()
}

/// Diagnostics for `A = W(σ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub levels: usize,
    pub curve_nodes: usize,
    pub curve_length: f64,
    pub norm_s2: f64,
    /// `‖D A‖_{S²} / ‖A‖_{S²}` on the leading `N/2` block.
    pub residual_rel: f64,
    /// Same ratio over the whole truncated matrix (truncation-dominated).
    pub residual_rel_full: f64,
    pub selfadjoint_defect: f64,
    /// `Σ_i w_i |p(ζ_i)|`: bounds the pairing of `p·σ` with unit test functions.
    pub fourier_side_residual: f64,
    pub decay_exponent: f64,
    pub decay_stderr: f64,
    pub decay_range: (usize, usize),
    pub schatten_norms: BTreeMap<String, f64>,
    #[serde(skip)]
    pub spectrum: Vec<f64>,
}

fn block_frobenius(m: &nalgebra::DMatrix<C64>, k: usize) -> f64 {
    m.view((0, 0), (k, k)).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Builds `A = W(σ)` on `cfg` from a curve with `curve_nodes` nodes.
pub fn build_counterexample(cfg: &FockConfig, curve_nodes: usize) -> Result<(FockOperator, CounterexampleReport)> {
    let curve = trace_zero_component(curve_nodes)?;
    build_from_curve(cfg, &curve)
}

/// As [`build_counterexample`], reusing an already traced curve.
pub fn build_from_curve(cfg: &FockConfig, curve: &LevelCurve) -> Result<(FockOperator, CounterexampleReport)> {
    if cfg.n() != 1 {
        return Err(Error::InvalidConfig("the counterexample is built for n = 1".into()));
    }
    if cfg.levels() < 64 {
        return Err(Error::InvalidConfig("the counterexample needs at least 64 levels".into()));
    }
    let a = weyl_of_measure(&curve.to_measure()?, cfg)?;
    let residual = difference_apply(&eq4_spec(1)?, &a)?;

    let half = cfg.levels() / 2;
    let norm_s2 = a.frobenius_norm();
    let residual_rel = block_frobenius(residual.matrix(), half) / block_frobenius(a.matrix(), half);
    let residual_rel_full = residual.frobenius_norm() / norm_s2;

    let profile = SpectrumProfile::of_operator(&a)?;
    let schatten_norms = REPORT_P_GRID
        .iter()
        .map(|&p| Ok((format!("{p}"), profile.norm(p)?)))
        .collect::<Result<_>>()?;
    let fourier_side_residual = curve
        .nodes
        .iter()
        .zip(&curve.weights)
        .map(|(z, w)| w * char_poly_surface(z).abs())
        .sum();

    let report = CounterexampleReport {
        levels: cfg.levels(),
        curve_nodes: curve.len(),
        curve_length: curve.total_length(),
        norm_s2,
        residual_rel,
        residual_rel_full,
        selfadjoint_defect: a.selfadjoint_defect(),
        fourier_side_residual,
        decay_exponent: profile.fit_exponent,
        decay_stderr: profile.fit_stderr,
        decay_range: profile.fit_range,
        schatten_norms,
        spectrum: profile.values,
    };
    Ok((a, report))
}

/// Log-log fit of `|σ̂(r·u)|` along one ray.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayFit {
    pub direction: [f64; 2],
    pub exponent: f64,
    pub stderr: f64,
    /// Number of points entering the fit.
    pub fit_points: usize,
    /// Whether the fit used local maxima of the oscillating modulus.
    pub envelope: bool,
}

/// Measures the decay rate of `|σ̂|` along each ray.
///
/// `|σ̂(r·u)|` oscillates with zeros, so when the radius samples resolve at
/// least three local maxima the fit runs through those maxima (the
/// envelope); otherwise it uses every sample.
pub fn fourier_decay_probe(curve: &LevelCurve, rays: &[[f64; 2]], radii: &[f64]) -> Result<Vec<RayFit>> {
    if radii.len() < 2 || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("radii must be strictly ascending with >= 2 entries".into()));
    }
    if radii[0] <= 0.0 || *radii.last().unwrap() > 100.0 {
        return Err(Error::InvalidArgument("radii must lie in (0, 100]".into()));
    }
    rays.iter()
        .map(|&ray| {
            let norm = ray[0].hypot(ray[1]);
            if !(norm > 0.0) {
                return Err(Error::InvalidArgument("ray direction must be nonzero".into()));
            }
            let u = [ray[0] / norm, ray[1] / norm];
            let mags: Vec<f64> =
                radii.par_iter().map(|&r| curve.fourier_transform([r * u[0], r * u[1]]).norm()).collect();
            let peaks: Vec<(f64, f64)> = (1..mags.len() - 1)
                .filter(|&i| mags[i] >= mags[i - 1] && mags[i] >= mags[i + 1] && mags[i] > 0.0)
                .map(|i| (radii[i].ln(), mags[i].ln()))
                .collect();
            let (points, envelope) = if peaks.len() >= 3 {
                (peaks, true)
            } else {
                let all: Vec<(f64, f64)> = radii
                    .iter()
                    .zip(&mags)
                    .filter(|(_, m)| **m > 0.0)
                    .map(|(r, m)| (r.ln(), m.ln()))
                    .collect();
                (all, false)
            };
            if points.len() < 2 {
                return Err(Error::InvalidArgument("not enough nonzero samples to fit".into()));
            }
            let DecayFit { exponent, stderr } = log_log_fit(&points);
            Ok(RayFit { direction: u, exponent, stderr, fit_points: points.len(), envelope })
        })
        .collect()
}

/// Sign scan of `p` over the fundamental domain `[−1/2, 1/2)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroScan {
    pub resolution: usize,
    /// Fraction of samples with `p < 0`.
    pub negative_fraction: f64,
    /// Connected clusters of sign-changing cells on the torus.
    pub components: usize,
}

/// Counts components of the zero set on a periodic `resolution²` sample grid.
/// Coarse and uncertified: a component thinner than a cell can be missed.
pub fn zero_scan(resolution: usize) -> Result<ZeroScan> {
    if resolution < 4 {
        return Err(Error::InvalidArgument("zero scan needs resolution >= 4".into()));
    }
    let m = resolution;
    let coord = |i: usize| -0.5 + i as f64 / m as f64;
    let sign: Vec<bool> = (0..m * m).map(|k| char_poly_surface(&[coord(k / m), coord(k % m)]) < 0.0).collect();
    let negative_fraction = sign.iter().filter(|s| **s).count() as f64 / (m * m) as f64;

    let at = |i: usize, j: usize| sign[(i % m) * m + (j % m)];
    let crossing: Vec<bool> = (0..m * m)
        .map(|k| {
            let (i, j) = (k / m, k % m);
            let corners = [at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)];
            corners.iter().any(|&c| c != corners[0])
        })
        .collect();

    let mut label = vec![usize::MAX; m * m];
    let mut components = 0;
    for start in 0..m * m {
        if !crossing[start] || label[start] != usize::MAX {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        label[start] = components;
        while let Some(k) = stack.pop() {
            let (i, j) = (k / m, k % m);
            for (di, dj) in [(1, 0), (m - 1, 0), (0, 1), (0, m - 1)] {
                let nb = ((i + di) % m) * m + (j + dj) % m;
                if crossing[nb] && label[nb] == usize::MAX {
                    label[nb] = components;
                    stack.push(nb);
                }
            }
        }
    }
    Ok(ZeroScan { resolution, negative_fraction, components })
}
