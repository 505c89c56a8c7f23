//! Quantum translates of operators on `L²(ℝⁿ)` in a truncated Hermite basis:
//! the Schrödinger representation, Fourier-Wigner and Weyl transforms,
//! Schatten norms, finite difference equations `Σ c_i ρ(z_i) A ρ(z_i)* = 0`
//! and a Weyl-transformed curve measure that solves one of them.

pub mod counterexample;
pub mod error;
pub mod families;
pub mod fock_rep;
pub mod io;
pub mod phase_space;
pub mod qtranslate;
pub mod schatten;
pub mod transforms;

pub use counterexample::{build_counterexample, trace_zero_component, CounterexampleReport, LevelCurve};
pub use error::{Error, Result};
pub use fock_rep::{rho_matrix, FockConfig, FockOperator};
pub use num_complex::Complex64 as C64;
pub use phase_space::{cocycle, symplectic_form, Bicharacter, PhasePoint};
pub use qtranslate::{difference_apply, eq4_spec, independence_margin, translate, DifferenceSpec};
pub use schatten::{schatten_norm, singular_values, SpectrumProfile};
pub use transforms::{
    fourier_wigner, weyl_correspondence, weyl_of_measure, weyl_transform, BoundaryPolicy, PhaseFunction,
    PhaseGrid, SurfaceMeasure,
};
