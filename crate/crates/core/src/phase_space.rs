//! Phase-space points, the symplectic form and the bicharacter
//! `e((x', y'), (x, y)) = exp(2πi(x'·y − y'·x))`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// A point `(x, y)` of `ℝ^{2n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl PhasePoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidArgument("phase point needs n >= 1".into()));
        }
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("phase point"));
        }
        Ok(Self { x, y })
    }

    /// One-dimensional point; panics on non-finite input.
    pub fn planar(x: f64, y: f64) -> Self {
        Self::new(vec![x], vec![y]).expect("finite planar phase point")
    }

    pub fn origin(n: usize) -> Self {
        assert!(n >= 1, "phase point needs n >= 1");
        Self { x: vec![0.0; n], y: vec![0.0; n] }
    }

    /// Builds a point from `2n` coordinates laid out as `(x_1..x_n, y_1..y_n)`.
    pub fn from_coords(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() || coords.len() % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "expected an even, nonzero number of coordinates, got {}",
                coords.len()
            )));
        }
        let n = coords.len() / 2;
        Self::new(coords[..n].to_vec(), coords[n..].to_vec())
    }

    pub fn coords(&self) -> Vec<f64> {
        self.x.iter().chain(self.y.iter()).copied().collect()
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn norm(&self) -> f64 {
        self.x.iter().chain(self.y.iter()).map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_origin(&self) -> bool {
        self.x.iter().chain(self.y.iter()).all(|&v| v == 0.0)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            x: self.x.iter().map(|v| v * factor).collect(),
            y: self.y.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(Self {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            y: self.y.iter().zip(&other.y).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

/// Unit-modulus value of the bicharacter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bicharacter(C64);

impl Bicharacter {
    pub fn from_angle(turns: f64) -> Self {
        Self(C64::from_polar(1.0, 2.0 * PI * turns))
    }

    pub fn value(self) -> C64 {
        self.0
    }
}

fn check_dims(a: &PhasePoint, b: &PhasePoint) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(())
}

/// `x_a·y_b − y_a·x_b`.
pub fn symplectic_form(a: &PhasePoint, b: &PhasePoint) -> Result<f64> {
    check_dims(a, b)?;
    let xy: f64 = a.x.iter().zip(&b.y).map(|(p, q)| p * q).sum();
    let yx: f64 = a.y.iter().zip(&b.x).map(|(p, q)| p * q).sum();
    Ok(xy - yx)
}

/// `exp(2πi · symplectic_form(a, b))`.
pub fn cocycle(a: &PhasePoint, b: &PhasePoint) -> Result<Bicharacter> {
    Ok(Bicharacter::from_angle(symplectic_form(a, b)?))
}
