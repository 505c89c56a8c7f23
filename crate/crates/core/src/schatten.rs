//! Singular values, Schatten norms and power-law decay fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock_rep::FockOperator;

/// Indices below this are shape-dominated and excluded from the default fit.
pub const DEFAULT_FIT_START: usize = 10;

/// Descending singular values, always sorted and nonnegative.
pub fn singular_values(x: &FockOperator) -> Result<Vec<f64>> {
    singular_values_of(x.matrix())
}

pub fn singular_values_of(m: &nalgebra::DMatrix<num_complex::Complex64>) -> Result<Vec<f64>> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Decomposition("matrix has non-finite entries".into()));
    }
    let svd = m.clone().try_svd(false, false, f64::EPSILON, 0).ok_or_else(|| {
        Error::Decomposition("SVD did not converge".into())
    })?;
    let mut s: Vec<f64> = svd.singular_values.iter().map(|v| v.max(0.0)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidArgument(format!("Schatten exponent must satisfy p >= 1, got {p}")));
    }
    Ok(())
}

/// `(Σ s_j^p)^{1/p}`, or `s_1` for `p = ∞`.
pub fn norm_from_singular_values(s: &[f64], p: f64) -> Result<f64> {
    check_p(p)?;
    let top = s.iter().copied().fold(0.0, f64::max);
    if p.is_infinite() || top == 0.0 {
        return Ok(top);
    }
    // scaled to keep s^p representable for large p
    let sum: f64 = s.iter().map(|v| (v / top).powf(p)).sum();
    Ok(top * sum.powf(1.0 / p))
}

pub fn schatten_norm(x: &FockOperator, p: f64) -> Result<f64> {
    check_p(p)?;
    if p == 2.0 {
        return Ok(x.frobenius_norm());
    }
    norm_from_singular_values(&singular_values(x)?, p)
}

/// Least-squares slope of `log s_j` against `log j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub stderr: f64,
}

/// Fits `s_j ~ j^exponent` over the 1-based inclusive index range `[lo, hi]`.
pub fn decay_exponent(s: &[f64], range: (usize, usize)) -> Result<DecayFit> {
    let (lo, hi) = range;
    if lo < 1 || hi > s.len() || lo >= hi {
        return Err(Error::InvalidArgument(format!(
            "fit range [{lo}, {hi}] invalid for {} values",
            s.len()
        )));
    }
    let points: Vec<(f64, f64)> = (lo..=hi)
        .map(|j| {
            let v = s[j - 1];
            if v > 0.0 && v.is_finite() {
                Ok(((j as f64).ln(), v.ln()))
            } else {
                Err(Error::InvalidArgument(format!("s_{j} = {v} is not positive")))
            }
        })
        .collect::<Result<_>>()?;
    Ok(log_log_fit(&points))
}

/// Ordinary least squares on `(ln t, ln v)` pairs.
pub(crate) fn log_log_fit(points: &[(f64, f64)]) -> DecayFit {
    let m = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let stderr = if points.len() > 2 {
        let rss: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
        (rss / (m - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    DecayFit { exponent: slope, stderr }
}

/// Singular values with a fitted power-law decay.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumProfile {
    pub values: Vec<f64>,
    pub fit_exponent: f64,
    pub fit_stderr: f64,
    pub fit_range: (usize, usize),
}

impl SpectrumProfile {
    /// Fit over `[10, dim/2]`: the head is shape-dominated and the upper half
    /// is truncation-dominated.
    pub fn of_operator(x: &FockOperator) -> Result<Self> {
        let values = singular_values(x)?;
        let hi = values.len() / 2;
        Self::from_values(values, (DEFAULT_FIT_START.min(hi.saturating_sub(1)).max(1), hi))
    }

    pub fn from_values(values: Vec<f64>, fit_range: (usize, usize)) -> Result<Self> {
        let fit = decay_exponent(&values, fit_range)?;
        Ok(Self { values, fit_exponent: fit.exponent, fit_stderr: fit.stderr, fit_range })
    }

    pub fn norm(&self, p: f64) -> Result<f64> {
        norm_from_singular_values(&self.values, p)
    }
}
