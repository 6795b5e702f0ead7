use super::coeffs::SphCoeffs;
use super::field::BoundaryField;
use super::legendre::legendre_all;
use super::transform::{evaluate_at, synthesize, synthesize_dphi, synthesize_dtheta};

/// Dirichlet-to-Neumann map of the unit ball: degree `l` is multiplied by `l`.
pub fn dtn_apply(coeffs: &SphCoeffs) -> SphCoeffs {
    coeffs.scale_by_degree(|l| l as f64)
}

/// Laplace–Beltrami operator of the round S²: degree `l` is multiplied by
/// `-l(l+1)`.
pub fn laplace_beltrami(coeffs: &SphCoeffs) -> SphCoeffs {
    coeffs.scale_by_degree(|l| -((l * (l + 1)) as f64))
}

/// `|∇f|²` at the grid nodes from spectral first derivatives.
pub fn gradient_norm_sq(field: &BoundaryField) -> BoundaryField {
    let grid = field.grid();
    let c = field.coeffs();
    let d_theta = synthesize_dtheta(c, grid);
    let d_phi = synthesize_dphi(c, grid);
    let n_lon = grid.n_lon();
    let sines = grid.colat_sines();
    let values = (0..grid.len())
        .map(|k| {
            let s = sines[k / n_lon];
            d_theta[k] * d_theta[k] + d_phi[k] * d_phi[k] / (s * s)
        })
        .collect();
    BoundaryField::from_values(grid, values).expect("derivative arrays match the grid")
}

/// Degree weights `κ_l = ½ ∫_{cos r}^1 P_l(t) dt` of the cap indicator.
pub fn cap_kernel(l_max: usize, radius: f64) -> Vec<f64> {
    let a = radius.cos();
    let p = legendre_all(l_max + 1, a);
    (0..=l_max)
        .map(|l| {
            if l == 0 {
                0.5 * (1.0 - a)
            } else {
                0.5 * (p[l - 1] - p[l + 1]) / (2.0 * l as f64 + 1.0)
            }
        })
        .collect()
}

/// For every node `x`, `(1/ω) ∫_{cap(x, r)} g dμ` for the band-limited part of
/// `g`, where `ω` is the area of S².
pub fn cap_means(field: &BoundaryField, radius: f64) -> Vec<f64> {
    let grid = field.grid();
    let kernel = cap_kernel(grid.l_max(), radius);
    let smoothed = field.coeffs().scale_by_degree(|l| kernel[l]);
    synthesize(&smoothed, grid)
}

/// [`cap_means`] for a single cap centered anywhere.
pub fn cap_mean_at(field: &BoundaryField, center: [f64; 3], radius: f64) -> f64 {
    let kernel = cap_kernel(field.grid().l_max(), radius);
    evaluate_at(&field.coeffs().scale_by_degree(|l| kernel[l]), center)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn dtn_multiplies_by_degree() {
        for l in [0usize, 1, 5] {
            let c = SphCoeffs::unit(8, l, 0);
            assert_eq!(dtn_apply(&c).get(l, 0), l as f64);
        }
    }

    #[test]
    fn laplacian_of_coordinates() {
        let g = Grid::new(12).unwrap();
        let z = BoundaryField::from_fn(&g, |p| p[2]);
        let lz = BoundaryField::from_coeffs(&g, &laplace_beltrami(z.coeffs()));
        for (v, p) in lz.values().iter().zip(g.points()) {
            assert!((v + 2.0 * p[2]).abs() < 1e-12);
        }
        let z2 = BoundaryField::from_fn(&g, |p| p[2] * p[2]);
        let lz2 = BoundaryField::from_coeffs(&g, &laplace_beltrami(z2.coeffs()));
        for (v, p) in lz2.values().iter().zip(g.points()) {
            assert!((v - (2.0 - 6.0 * p[2] * p[2])).abs() < 1e-11);
        }
    }

    #[test]
    fn gradient_of_coordinates() {
        let g = Grid::new(12).unwrap();
        for axis in 0..3 {
            let f = BoundaryField::from_fn(&g, |p| p[axis]);
            let gn = gradient_norm_sq(&f);
            for (v, p) in gn.values().iter().zip(g.points()) {
                assert!((v - (1.0 - p[axis] * p[axis])).abs() < 1e-10);
            }
        }
        let c = gradient_norm_sq(&BoundaryField::constant(&g, 2.0));
        assert!(c.max_abs() < 1e-14);
    }

    #[test]
    fn cap_of_constant_is_area_fraction() {
        let g = Grid::new(16).unwrap();
        let one = BoundaryField::constant(&g, 1.0);
        for r in [0.1, 0.5, 1.0] {
            let frac = (1.0 - f64::cos(r)) / 2.0;
            for v in cap_means(&one, r) {
                assert!((v - frac).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn cap_of_linear_field_matches_direct_integral() {
        // ⨍ χ_cap(N, r) z dμ = ½∫_{cos r}^1 t dt
        let g = Grid::new(16).unwrap();
        let z = BoundaryField::from_fn(&g, |p| p[2]);
        let coeffs = z.coeffs().scale_by_degree(|l| cap_kernel(16, 0.7)[l]);
        let at_north = crate::spectral::evaluate_at(&coeffs, [0.0, 0.0, 1.0]);
        let c = f64::cos(0.7);
        assert!((at_north - 0.25 * (1.0 - c * c)).abs() < 1e-14);
    }
}
