use std::sync::Arc;

use crate::spectral::{evaluate_at, BoundaryField, Grid};
use crate::sphere::compass_maximize;

/// The prescribed function sampled on a grid, together with its extreme values
/// over the whole sphere (not only the nodes).
#[derive(Debug, Clone)]
pub struct PrescribedField {
    field: BoundaryField,
    max: f64,
    min: f64,
}

impl PrescribedField {
    /// Uses externally computed extrema, e.g. from a closed form.
    pub fn with_extrema(field: BoundaryField, max: f64, min: f64) -> Self {
        let max = max.max(field.max());
        let min = min.min(field.min());
        PrescribedField { field, max, min }
    }

    /// Estimates the extrema by refining the best nodes on the spectral
    /// interpolant.
    pub fn from_samples(field: BoundaryField) -> Self {
        let coeffs = field.coeffs().clone();
        let grid = Arc::clone(field.grid());
        let refine = |sign: f64| {
            let (k, _) = field
                .values()
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |b, (i, &v)| if sign * v > b.1 { (i, sign * v) } else { b });
            let start = grid.points()[k];
            let (_, best) = compass_maximize(|p| sign * evaluate_at(&coeffs, p), start, step_for(&grid));
            sign * best
        };
        let max = refine(1.0);
        let min = refine(-1.0);
        Self::with_extrema(field, max, min)
    }

    pub fn field(&self) -> &BoundaryField {
        &self.field
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max_abs(&self) -> f64 {
        self.max.abs().max(self.min.abs())
    }

    pub fn mean(&self) -> f64 {
        self.field.mean()
    }

    /// `⨍ f > 0`, with means at rounding level of `max|f|` counted as zero.
    pub fn mean_is_positive(&self) -> bool {
        self.mean() > 1e-12 * self.max_abs()
    }
}

fn step_for(grid: &Grid) -> f64 {
    std::f64::consts::PI / grid.n_lat() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refined_extrema_beat_node_values() {
        let g = Grid::new(8).unwrap();
        let f = BoundaryField::from_fn(&g, |p| 2.0 + 0.5 * p[2]);
        let pf = PrescribedField::from_samples(f.clone());
        assert!(f.max() < 2.5);
        assert!((pf.max() - 2.5).abs() < 1e-9);
        assert!((pf.min() - 1.5).abs() < 1e-9);
        assert!((pf.max_abs() - 2.5).abs() < 1e-9);
    }
}
