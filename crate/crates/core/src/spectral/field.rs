use std::sync::{Arc, OnceLock};

use super::coeffs::SphCoeffs;
use super::grid::Grid;
use super::transform::{analyze, synthesize};
use crate::error::{Error, Result};

/// A real function on S² held as nodal values, with its coefficients computed
/// on first request.
#[derive(Debug, Clone)]
pub struct BoundaryField {
    grid: Arc<Grid>,
    values: Vec<f64>,
    coeffs: OnceLock<SphCoeffs>,
}

impl BoundaryField {
    pub fn from_values(grid: &Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension { expected: grid.len(), got: values.len() });
        }
        Ok(BoundaryField { grid: Arc::clone(grid), values, coeffs: OnceLock::new() })
    }

    /// Synthesizes the field from coefficients (truncated to the grid band).
    pub fn from_coeffs(grid: &Arc<Grid>, coeffs: &SphCoeffs) -> Self {
        let truncated = coeffs.resized(grid.l_max());
        let values = synthesize(&truncated, grid);
        let cell = OnceLock::new();
        let _ = cell.set(truncated);
        BoundaryField { grid: Arc::clone(grid), values, coeffs: cell }
    }

    /// Samples a function of the unit vector at every node.
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn([f64; 3]) -> f64) -> Self {
        let values = grid.points().iter().map(|&p| f(p)).collect();
        BoundaryField { grid: Arc::clone(grid), values, coeffs: OnceLock::new() }
    }

    pub fn constant(grid: &Arc<Grid>, c: f64) -> Self {
        BoundaryField { grid: Arc::clone(grid), values: vec![c; grid.len()], coeffs: OnceLock::new() }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn coeffs(&self) -> &SphCoeffs {
        self.coeffs.get_or_init(|| {
            analyze(&self.values, &self.grid).expect("field length always matches its grid")
        })
    }

    /// `⨍ f dμ` by quadrature.
    pub fn mean(&self) -> f64 {
        self.grid.mean_of(&self.values)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Index and value of the smallest nodal value.
    pub fn argmin(&self) -> (usize, f64) {
        self.values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (i, v)| if v < best.1 { (i, v) } else { best })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        BoundaryField {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| f(v)).collect(),
            coeffs: OnceLock::new(),
        }
    }

    /// Pointwise combination with a field on the same grid.
    pub fn zip_map(&self, other: &BoundaryField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(BoundaryField {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
            coeffs: OnceLock::new(),
        })
    }

    /// Projection onto degrees `<= L` (analysis followed by synthesis).
    pub fn band_limited(&self) -> Self {
        BoundaryField::from_coeffs(&self.grid, self.coeffs())
    }

    /// `⨍ f·g dμ` by quadrature.
    pub fn mean_product(&self, other: &BoundaryField) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.grid.mean_weights())
            .map(|((a, b), w)| a * b * w)
            .sum())
    }

    pub(crate) fn check_same_grid(&self, other: &BoundaryField) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid.l_max() == other.grid.l_max() {
            Ok(())
        } else {
            Err(Error::Dimension { expected: self.grid.len(), got: other.grid.len() })
        }
    }
}
