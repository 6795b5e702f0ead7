//! Gauss–Legendre grids, real spherical-harmonic transforms and the exact
//! Dirichlet-to-Neumann and Laplace–Beltrami operators on S².
//!
//! Harmonics are normalized so that `⨍ Y² dμ = 1`; the degree-zero
//! coefficient of a field is therefore its mean.

mod coeffs;
mod field;
mod grid;
pub mod legendre;
mod operators;
mod transform;

pub use coeffs::SphCoeffs;
pub use field::BoundaryField;
pub use grid::{Grid, MIN_DEGREE};
pub use operators::{cap_kernel, cap_mean_at, cap_means, dtn_apply, gradient_norm_sq, laplace_beltrami};
pub use transform::{
    analyze, evaluate_at, evaluate_many, synthesize, synthesize_dphi, synthesize_dtheta,
};
