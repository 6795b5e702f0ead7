use crate::curvature::{volume, Constants};
use crate::error::{Error, Result};
use crate::spectral::BoundaryField;

/// The scale `ζ = max u_T` used to build the path.
pub fn default_zeta(u_t: &BoundaryField) -> f64 {
    u_t.max()
}

/// Point `u_s`, `s ∈ [1/2, 1]`, on the path from `ζ u_T` (at `s = 1/2`) to the
/// round metric (at `s = 1`): `w_s = [(2−2s)(ζ u_T)^{2#} + (2s−1)]^{1/2#}`,
/// rescaled to unit volume. Nodal values are kept as computed.
pub fn interpolation_path(u_t: &BoundaryField, s: f64, zeta: f64) -> Result<BoundaryField> {
    if !(0.5..=1.0).contains(&s) {
        return Err(Error::Domain(format!("path parameter s = {s} must lie in [1/2, 1]")));
    }
    if !(zeta > 0.0) {
        return Err(Error::Domain(format!("scale zeta = {zeta} must be positive")));
    }
    if u_t.min() <= 0.0 {
        return Err(Error::Domain("u_T must be positive".into()));
    }
    let q = Constants::surface().two_sharp;
    let w = u_t.map(|v| ((2.0 - 2.0 * s) * (zeta * v).powf(q) + (2.0 * s - 1.0)).powf(1.0 / q));
    let c = volume(&w).powf(-1.0 / q);
    Ok(w.map(|v| c * v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::weighted_volume;
    use crate::spectral::{Grid, SphCoeffs};

    fn field(g: &std::sync::Arc<Grid>) -> BoundaryField {
        let mut c = SphCoeffs::unit(g.l_max(), 0, 0);
        c.set(1, 0, 0.3);
        c.set(2, -2, 0.2);
        BoundaryField::from_coeffs(g, &c)
    }

    #[test]
    fn endpoints() {
        let g = Grid::new(10).unwrap();
        let u = field(&g);
        let u = u.map(|v| v * volume(&u).powf(-0.25));
        let one = interpolation_path(&u, 1.0, default_zeta(&u)).unwrap();
        assert!(one.values().iter().all(|v| (v - 1.0).abs() < 1e-14));
        let half = interpolation_path(&u, 0.5, default_zeta(&u)).unwrap();
        for (a, b) in half.values().iter().zip(u.values()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn constants_are_fixed() {
        let g = Grid::new(8).unwrap();
        let u = interpolation_path(&BoundaryField::constant(&g, 1.0), 0.75, 1.0).unwrap();
        assert!(u.values().iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn volume_and_weighted_volume_claims() {
        let g = Grid::new(10).unwrap();
        let u = field(&g);
        let f = BoundaryField::from_fn(&g, |p| 1.0 + 0.34 * (1.0 - 4.0 * (-8.0 * (1.0 + p[2])).exp()));
        assert!(f.mean() > 0.0 && weighted_volume(&u, &f).unwrap() > 0.0);
        for s in [0.5, 0.6, 0.75, 0.9, 1.0] {
            let us = interpolation_path(&u, s, 1.7).unwrap();
            assert!((volume(&us) - 1.0).abs() < 1e-14);
            assert!(weighted_volume(&us, &f).unwrap() > 0.0);
        }
    }

    #[test]
    fn parameter_outside_range_is_rejected() {
        let g = Grid::new(8).unwrap();
        let u = BoundaryField::constant(&g, 1.0);
        assert!(matches!(interpolation_path(&u, 0.4, 1.0), Err(Error::Domain(_))));
        assert!(matches!(interpolation_path(&u, 0.7, 0.0), Err(Error::Domain(_))));
    }
}
