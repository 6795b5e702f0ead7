use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::map::ConformalMap;
use crate::curvature::{ensure_positive, Constants};
use crate::error::Result;
use crate::spectral::{evaluate_many, BoundaryField, Grid};
use crate::sphere::Vec3;

/// Bubble `u_{p,ε}`: the conformal factor `λ^{(n−1)/2}` of `φ_{p,1/ε}`. It has
/// unit volume and concentrates at `p` as `ε → 0`.
pub fn bubble(map: &ConformalMap, grid: &Arc<Grid>) -> BoundaryField {
    let inv = map.inverse();
    let k = Constants::surface();
    BoundaryField::from_fn(grid, |x| inv.factor(x).powf((k.nf() - 1.0) / 2.0))
}

/// Closed form of the bubble at an arbitrary point.
pub fn bubble_value(map: &ConformalMap, x: Vec3) -> f64 {
    let k = Constants::surface();
    map.inverse().factor(x).powf((k.nf() - 1.0) / 2.0)
}

/// Warns when the bubble's spectral tail at degree `L` is not small. The
/// coefficients decay roughly like `((1 − ε)/(1 + ε))^l`.
pub fn bubble_resolution(eps: f64, l_max: usize) -> Option<String> {
    let e = eps.min(1.0 / eps);
    let tail = ((1.0 - e) / (1.0 + e)).powi(l_max as i32);
    (tail > 1e-3).then(|| {
        format!("bubble with eps = {eps} is under-resolved at L = {l_max} (tail ratio {tail:.2e})")
    })
}

/// `(1/ω) ∫_{cap(p, r)} u_{p,ε}^{2#} dμ` in closed form, `R²/(ε² + R²)` with
/// `R = tan(r/2)`.
pub fn bubble_cap_fraction(eps: f64, radius: f64) -> f64 {
    let t = (0.5 * radius).tan();
    let r2 = t * t;
    r2 / (eps * eps + r2)
}

/// Normalized function `v = (u∘φ) λ_φ^{(n−1)/2}`, with `u∘φ` evaluated from
/// the spectral expansion of `u`.
pub fn pullback_normalized(u: &BoundaryField, map: &ConformalMap) -> Result<BoundaryField> {
    ensure_positive(u)?;
    let grid = u.grid();
    let k = Constants::surface();
    let mapped: Vec<Vec3> = grid.points().iter().map(|&x| map.apply(x)).collect();
    let composed = evaluate_many(u.coeffs(), &mapped);
    let values = composed
        .iter()
        .zip(grid.points())
        .map(|(&w, &x)| w * map.factor(x).powf((k.nf() - 1.0) / 2.0))
        .collect();
    BoundaryField::from_values(grid, values)
}

/// Center of mass `S = ⨍ x u^{2#} dμ` and its direction `Q = S/|S|` when
/// `|S| > 1e-10`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterOfMass {
    pub s: Vec3,
    pub norm: f64,
    pub direction: Option<Vec3>,
}

pub fn center_of_mass(u: &BoundaryField) -> CenterOfMass {
    let q = Constants::surface().two_sharp;
    let grid = u.grid();
    let mut s = [0.0; 3];
    for ((x, w), v) in grid.points().iter().zip(grid.mean_weights()).zip(u.values()) {
        let m = w * v.abs().powf(q);
        for i in 0..3 {
            s[i] += m * x[i];
        }
    }
    let norm = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
    let direction = (norm > 1e-10).then(|| [s[0] / norm, s[1] / norm, s[2] / norm]);
    CenterOfMass { s, norm, direction }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::volume;
    use crate::sphere::{normalized, norm, sub};

    // independent oracle: ½ ∫_{cos r}^1 λ(t)² dt by composite Simpson, with
    // λ(t) = 2ε / (ε² (1 + t) + (1 − t))
    fn simpson_cap(eps: f64, radius: f64) -> f64 {
        let lam = |t: f64| 2.0 * eps / (eps * eps * (1.0 + t) + (1.0 - t));
        let (a, b) = (radius.cos(), 1.0);
        let n = 200_000;
        let h = (b - a) / n as f64;
        let mut s = lam(a).powi(2) + lam(b).powi(2);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * lam(a + i as f64 * h).powi(2);
        }
        0.5 * s * h / 3.0
    }

    #[test]
    fn cap_fraction_closed_form_matches_quadrature() {
        for (eps, r) in [(0.3, 0.5), (0.05, 0.5), (0.03, 0.1), (1.0, 1.0)] {
            assert!((bubble_cap_fraction(eps, r) - simpson_cap(eps, r)).abs() < 1e-10);
        }
        // a unit-dilation bubble is the round metric: cap area fraction
        assert!((bubble_cap_fraction(1.0, 0.5) - 0.5 * (1.0 - f64::cos(0.5))).abs() < 1e-14);
        // moderate concentration at geodesic radius 0.5
        assert!((bubble_cap_fraction(0.3, 0.5) - 0.420_101_212).abs() < 1e-6);
    }

    #[test]
    fn bubble_has_unit_volume() {
        let g = Grid::new(63).unwrap();
        for p in [[0.0, 0.0, 1.0], [0.3, -0.4, 0.2]] {
            let m = ConformalMap::new(p, 0.3).unwrap();
            assert!((volume(&bubble(&m, &g)) - 1.0).abs() < 1e-7);
        }
        let one = bubble(&ConformalMap::new([1.0, 0.0, 0.0], 1.0).unwrap(), &g);
        assert!(one.values().iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn bubble_peaks_at_base_point() {
        let p = normalized([0.2, 0.1, -0.6]).unwrap();
        let m = ConformalMap::new(p, 0.2).unwrap();
        assert!((bubble_value(&m, p) - 0.2f64.powf(-0.5)).abs() < 1e-12);
        let com = center_of_mass(&bubble(&m, &Grid::new(31).unwrap()));
        assert!(norm(sub(com.direction.unwrap(), p)) < 1e-3);
    }

    #[test]
    fn center_of_mass_of_round_metric_vanishes() {
        let com = center_of_mass(&BoundaryField::constant(&Grid::new(8).unwrap(), 1.0));
        assert!(com.norm < 1e-14 && com.direction.is_none());
    }

    #[test]
    fn resolution_warning() {
        assert!(bubble_resolution(0.3, 63).is_none());
        assert!(bubble_resolution(0.01, 31).is_some());
    }

    #[test]
    fn pullback_by_inverse_flattens_bubble() {
        let g = Grid::new(63).unwrap();
        let p = normalized([0.5, -0.5, 0.7]).unwrap();
        let m = ConformalMap::new(p, 0.4).unwrap();
        let v = pullback_normalized(&bubble(&m, &g), &m).unwrap();
        assert!(v.values().iter().all(|x| (x - 1.0).abs() < 1e-6));
        let same = pullback_normalized(&bubble(&m, &g), &ConformalMap::new(p, 1.0).unwrap()).unwrap();
        assert!((volume(&same) - 1.0).abs() < 1e-9);
    }
}
