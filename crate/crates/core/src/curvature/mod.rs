//! Scalar functionals of a conformal factor `u` on S²: mean curvature, energy,
//! the normalized energy and its multiplier, the dissipation `F₂`, the time
//! derivative of the multiplier, and the a priori bounds used by the flow.

mod bounds;
mod constants;
mod prescribed;

pub use bounds::{flow_bounds, membership, FlowBounds, Membership, DEFAULT_LAMBDA0};
pub use constants::{sphere_area, Constants};
pub use prescribed::PrescribedField;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{dtn_apply, synthesize, BoundaryField};

/// Energy, weighted volume and the quantities derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub energy: f64,
    /// `⨍ f u^{2#} dμ`.
    pub denom: f64,
    pub normalized_energy: f64,
    pub lambda: f64,
}

/// Fails on the first node where `u <= 0`.
pub fn ensure_positive(u: &BoundaryField) -> Result<()> {
    match u.values().iter().position(|&v| v <= 0.0 || v.is_nan()) {
        Some(node) => Err(Error::PositivityLoss { node, value: u.values()[node] }),
        None => Ok(()),
    }
}

/// `H = u^{-(2#-1)} (a_n ∂_η u + u)` with the normal derivative taken by the
/// exact Dirichlet-to-Neumann map.
pub fn mean_curvature(u: &BoundaryField) -> Result<BoundaryField> {
    ensure_positive(u)?;
    let k = Constants::surface();
    let grid = u.grid();
    let dtn = synthesize(&dtn_apply(u.coeffs()), grid);
    let values = u
        .values()
        .iter()
        .zip(&dtn)
        .map(|(&v, &d)| (k.a_n * d + v) * v.powf(1.0 - k.two_sharp))
        .collect();
    BoundaryField::from_values(grid, values)
}

/// `E[u] = Σ (a_n l + 1) c_lm²`.
pub fn total_energy(u: &BoundaryField) -> f64 {
    let k = Constants::surface();
    let c = u.coeffs();
    c.scale_by_degree(|l| (k.a_n * l as f64 + 1.0).sqrt()).norm_sq()
}

/// `⨍ u^{2#} dμ`.
pub fn volume(u: &BoundaryField) -> f64 {
    let p = Constants::surface().two_sharp;
    u.grid().mean_of(&u.values().iter().map(|v| v.abs().powf(p)).collect::<Vec<_>>())
}

/// `⨍ f u^{2#} dμ`.
pub fn weighted_volume(u: &BoundaryField, f: &BoundaryField) -> Result<f64> {
    let p = Constants::surface().two_sharp;
    u.map(|v| v.abs().powf(p)).mean_product(f)
}

/// `E`, `⨍ f u^{2#}`, `E_f = E / (⨍ f u^{2#})^{(n-1)/n}` and `λ = E / ⨍ f u^{2#}`.
pub fn energy_functional(u: &BoundaryField, f: &BoundaryField) -> Result<EnergyReport> {
    ensure_positive(u)?;
    let k = Constants::surface();
    let energy = total_energy(u);
    let denom = weighted_volume(u, f)?;
    let scale = weighted_volume(u, &f.map(f64::abs))?;
    // a weighted mean at rounding level of its scale counts as zero
    if denom <= 1e-12 * scale {
        return Err(Error::Inadmissible(format!(
            "mean of f u^2# is {denom:e}, so u is outside X*"
        )));
    }
    Ok(EnergyReport {
        energy,
        denom,
        normalized_energy: energy / denom.powf(2.0 / k.two_sharp),
        lambda: energy / denom,
    })
}

/// `F₂ = ⨍ (λf − H)² u^{2#} dμ`.
pub fn f2_norm(u: &BoundaryField, f: &BoundaryField, lambda: f64) -> Result<f64> {
    let h = mean_curvature(u)?;
    residual_moment(u, f, &h, lambda, 2.0)
}

/// `⨍ |λf − H|^p u^{2#} dμ` for a precomputed `H`.
pub fn residual_moment(
    u: &BoundaryField,
    f: &BoundaryField,
    h: &BoundaryField,
    lambda: f64,
    p: f64,
) -> Result<f64> {
    u.check_same_grid(f)?;
    u.check_same_grid(h)?;
    let q = Constants::surface().two_sharp;
    let w = u.grid().mean_weights();
    Ok((0..w.len())
        .map(|k| {
            let r = (lambda * f.values()[k] - h.values()[k]).abs();
            let rp = if p == 2.0 { r * r } else { r.powf(p) };
            rp * u.values()[k].powf(q) * w[k]
        })
        .sum())
}

/// `λ′ = −(⨍ f dμ_g)^{-1} [ (n−1)/2 ⨍(λf−H)² dμ_g + ½ ⨍ λf(λf−H) dμ_g ]`.
pub fn lambda_prime(u: &BoundaryField, f: &BoundaryField, lambda: f64) -> Result<f64> {
    let h = mean_curvature(u)?;
    lambda_prime_with(u, f, &h, lambda)
}

/// [`lambda_prime`] for a precomputed `H`.
pub fn lambda_prime_with(
    u: &BoundaryField,
    f: &BoundaryField,
    h: &BoundaryField,
    lambda: f64,
) -> Result<f64> {
    u.check_same_grid(f)?;
    u.check_same_grid(h)?;
    let k = Constants::surface();
    let w = u.grid().mean_weights();
    let (mut denom, mut scale, mut sq, mut cross) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..w.len() {
        let g = u.values()[i].powf(k.two_sharp) * w[i];
        let lf = lambda * f.values()[i];
        let r = lf - h.values()[i];
        denom += f.values()[i] * g;
        scale += f.values()[i].abs() * g;
        sq += r * r * g;
        cross += lf * r * g;
    }
    if denom.abs() <= 1e-12 * scale || !denom.is_finite() {
        return Err(Error::Division("mean of f with respect to the evolving metric vanishes".into()));
    }
    Ok(-((k.nf() - 1.0) / 2.0 * sq + 0.5 * cross) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Grid, SphCoeffs};

    fn grid() -> std::sync::Arc<crate::spectral::Grid> {
        Grid::new(16).unwrap()
    }

    #[test]
    fn constants_have_constant_curvature() {
        let g = grid();
        let h = mean_curvature(&BoundaryField::constant(&g, 1.0)).unwrap();
        assert!(h.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        let h = mean_curvature(&BoundaryField::constant(&g, 3.0)).unwrap();
        assert!(h.values().iter().all(|v| (v - 1.0 / 9.0).abs() < 1e-12));
    }

    #[test]
    fn nonpositive_factor_is_rejected() {
        let g = grid();
        let u = BoundaryField::from_fn(&g, |p| p[2]);
        assert!(matches!(mean_curvature(&u), Err(Error::PositivityLoss { .. })));
    }

    #[test]
    fn energy_of_perturbed_constant() {
        let g = grid();
        let mut c = SphCoeffs::unit(16, 0, 0);
        c.set(2, 1, 0.1);
        let u = BoundaryField::from_coeffs(&g, &c);
        assert!((total_energy(&u) - 1.05).abs() < 1e-14);
        // quadrature form ⨍ (a_n u ∂_η u + u²)
        let dtn = BoundaryField::from_coeffs(&g, &dtn_apply(u.coeffs()));
        let quad = 2.0 * u.mean_product(&dtn).unwrap() + u.mean_product(&u).unwrap();
        assert!((quad - 1.05).abs() < 1e-13);
    }

    #[test]
    fn energy_functional_for_round_metric() {
        let g = grid();
        let u = BoundaryField::constant(&g, 1.0);
        let f = BoundaryField::from_fn(&g, |p| 2.0 - p[2] * p[2]);
        let r = energy_functional(&u, &f).unwrap();
        assert!((r.normalized_energy - (5.0f64 / 3.0).powf(-0.5)).abs() < 1e-13);
        assert!((r.lambda - 0.6).abs() < 1e-13);
        let one = BoundaryField::constant(&g, 1.0);
        let r1 = energy_functional(&u, &one).unwrap();
        assert!((r1.normalized_energy - 1.0).abs() < 1e-14 && (r1.lambda - 1.0).abs() < 1e-14);
    }

    #[test]
    fn odd_f_is_inadmissible() {
        let g = grid();
        let u = BoundaryField::constant(&g, 1.0);
        let f = BoundaryField::from_fn(&g, |p| p[2] - 0.1);
        assert!(matches!(energy_functional(&u, &f), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn dissipation_and_multiplier_rate() {
        // (0.2 − 0.6 z²)² and (1.2 − 0.6 z²)(0.2 − 0.6 z²) averaged with ⨍z² = 1/3, ⨍z⁴ = 1/5
        let g = grid();
        let u = BoundaryField::constant(&g, 1.0);
        let f = BoundaryField::from_fn(&g, |p| 2.0 - p[2] * p[2]);
        let f2 = f2_norm(&u, &f, 0.6).unwrap();
        assert!((f2 - 0.032).abs() < 1e-14);
        let lp = lambda_prime(&u, &f, 0.6).unwrap();
        assert!((lp + 0.0192).abs() < 1e-14);
        let one = BoundaryField::constant(&g, 1.0);
        assert!(f2_norm(&u, &one, 1.0).unwrap().abs() < 1e-24);
        assert!(lambda_prime(&u, &one, 1.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn vanishing_weighted_mean_is_a_division_error() {
        let g = grid();
        let u = BoundaryField::constant(&g, 1.0);
        let f = BoundaryField::from_fn(&g, |p| p[2]);
        assert!(matches!(lambda_prime(&u, &f, 1.0), Err(Error::Division(_))));
    }
}
