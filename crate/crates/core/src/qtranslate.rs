//! Quantum translation `z·X = ρ(z) X ρ(z)^{-1}`, difference operators built
//! from it, their characteristic trigonometric polynomials, and Gram-matrix
//! margins for linear independence of translates.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock_rep::{rho_matrix, FockOperator};
use crate::phase_space::{cocycle, PhasePoint};

/// Points closer than this are treated as coincident.
pub const DISTINCTNESS_THRESHOLD: f64 = 1e-9;

/// Translate points with complex coefficients: `D A = Σ c_i (z_i)·A`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceSpec {
    points: Vec<PhasePoint>,
    coeffs: Vec<C64>,
}

impl DifferenceSpec {
    pub fn new(points: Vec<PhasePoint>, coeffs: Vec<C64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("difference operator needs k >= 1 terms".into()));
        }
        if points.len() != coeffs.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), found: coeffs.len() });
        }
        let n = points[0].dim();
        for p in &points {
            if p.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
            }
        }
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                let d = a.distance(b)?;
                if d <= DISTINCTNESS_THRESHOLD {
                    return Err(Error::InvalidArgument(format!(
                        "translate points {a} and {b} are not distinct (distance {d:.3e})"
                    )));
                }
            }
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("difference coefficients"));
        }
        Ok(Self { points, coeffs })
    }

    pub fn points(&self) -> &[PhasePoint] {
        &self.points
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn n(&self) -> usize {
        self.points[0].dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The lattice Laplacian-type equation
/// `2(2n−1)A = Σ_j [(e_j,0)·A + (−e_j,0)·A + (0,e_j)·A + (0,−e_j)·A]`,
/// written as `D A = 0` with coefficient `2(2n−1)` at the origin and `−1` at
/// each of the `4n` unit translates.
pub fn eq4_spec(n: usize) -> Result<DifferenceSpec> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let mut points = vec![PhasePoint::origin(n)];
    let mut coeffs = vec![C64::new(2.0 * (2.0 * n as f64 - 1.0), 0.0)];
    for j in 0..n {
        for (sx, sy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let mut x = vec![0.0; n];
            let mut y = vec![0.0; n];
            x[j] = sx;
            y[j] = sy;
            points.push(PhasePoint::new(x, y)?);
            coeffs.push(C64::new(-1.0, 0.0));
        }
    }
    DifferenceSpec::new(points, coeffs)
}

/// `ρ(z) X ρ(z)*`.
pub fn translate(z: &PhasePoint, x: &FockOperator) -> Result<FockOperator> {
    let cfg = x.config();
    let rho = rho_matrix(z, &cfg)?;
    let m = rho.matrix() * x.matrix() * rho.matrix().adjoint();
    FockOperator::from_matrix(cfg, m)
}

/// `Σ c_i · translate(z_i, A)`.
pub fn difference_apply(spec: &DifferenceSpec, a: &FockOperator) -> Result<FockOperator> {
    if spec.n() != a.config().n() {
        return Err(Error::DimensionMismatch { expected: a.config().n(), found: spec.n() });
    }
    let terms: Vec<FockOperator> = spec
        .points()
        .par_iter()
        .zip(spec.coeffs())
        .map(|(z, c)| Ok(translate(z, a)?.scale(*c)))
        .collect::<Result<_>>()?;
    let mut total = FockOperator::zeros(a.config());
    for t in &terms {
        total = total.add(t)?;
    }
    Ok(total)
}

/// `Σ c_i e(z_i, w)`.
pub fn characteristic_poly(spec: &DifferenceSpec, w: &PhasePoint) -> Result<C64> {
    spec.points()
        .iter()
        .zip(spec.coeffs())
        .map(|(z, c)| Ok(c * cocycle(z, w)?.value()))
        .sum()
}

/// `G[i][j] = ⟨z_i·A, z_j·A⟩_{HS} = tr((z_j·A)* (z_i·A))`.
///
/// Coincident points are allowed and simply produce a singular Gram matrix.
pub fn gram_matrix(points: &[PhasePoint], a: &FockOperator) -> Result<DMatrix<C64>> {
    if a.is_zero() {
        return Err(Error::InvalidArgument("Gram matrix of the zero operator".into()));
    }
    let translates: Vec<FockOperator> =
        points.par_iter().map(|z| translate(z, a)).collect::<Result<_>>()?;
    let k = translates.len();
    let mut g = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = translates[i].hs_inner(&translates[j])?;
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    Ok(g)
}

/// `λ_min(G) / ‖A‖²_{S²}`, clamped below at zero.
///
/// Positive means the translates are linearly independent at this
/// truncation; the size says how well conditioned that independence is.
pub fn independence_margin(points: &[PhasePoint], a: &FockOperator) -> Result<f64> {
    let g = gram_matrix(points, a)?;
    let norm2 = a.frobenius_norm().powi(2);
    let eig = g.symmetric_eigenvalues();
    let lambda_min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((lambda_min / norm2).max(0.0))
}
