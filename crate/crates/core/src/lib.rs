//! Pseudospectral simulation of the volume-normalized conformal mean-curvature
//! flow on the boundary of the unit ball in R³, with checkers for the Morse and
//! symmetry hypotheses on the prescribed function.

pub mod conformal;
pub mod curvature;
pub mod error;
pub mod experiment;
pub mod flow;
pub mod morse;
pub mod selftest;
pub mod spectral;
pub mod sphere;

pub use error::{Error, Result};
