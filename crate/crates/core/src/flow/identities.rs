use serde::{Deserialize, Serialize};

use super::run::{Trajectory, TrajectoryRow};
use crate::curvature::Constants;
use crate::error::{Error, Result};

/// Rows whose predicted rate is below this fraction of the largest one are
/// not compared in relative terms.
const RELATIVE_FLOOR: f64 = 1e-6;
/// Rates below this multiple of the largest sampled value are rounding noise.
const NOISE_FLOOR: f64 = 1e-9;

/// Largest violations of the flow identities and bounds along a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub rows: usize,
    /// Max relative gap between the finite-difference `dE_f/dt` and
    /// `−((n−1)/2) (⨍f dμ_g)^{−2/2#} F₂`.
    pub energy_rate_rel_error: f64,
    pub energy_rate_rows_compared: usize,
    /// Max relative gap between the finite-difference `dλ/dt` and the λ′ column.
    pub lambda_prime_rel_error: f64,
    pub lambda_prime_rows_compared: usize,
    /// Largest `max(λ₁ − λ, λ − λ₂, 0)`.
    pub lambda_bounds_violation: f64,
    pub gamma: f64,
    /// Largest `max(γ − min(H − λf), 0)`.
    pub barrier_violation: f64,
    /// `γ` recomputed with `Λ₀ = sup|λ′|` over the samples.
    pub gamma_observed: f64,
    pub barrier_violation_observed: f64,
    pub sup_f2: f64,
    /// Largest increase of `E_f` between consecutive samples.
    pub monotonicity_violation: f64,
    pub max_vol_err: f64,
}

/// Three-point derivative at the middle of unevenly spaced samples.
fn central_difference(t: [f64; 3], y: [f64; 3]) -> f64 {
    let h1 = t[1] - t[0];
    let h2 = t[2] - t[1];
    -h2 / (h1 * (h1 + h2)) * y[0] + (h2 - h1) / (h1 * h2) * y[1] + h1 / (h2 * (h1 + h2)) * y[2]
}

/// Max relative error of `predicted` against central differences of `value`
/// over interior rows, and how many rows were compared.
fn rate_error(
    rows: &[TrajectoryRow],
    value: impl Fn(&TrajectoryRow) -> f64,
    predicted: impl Fn(&TrajectoryRow) -> f64,
) -> (f64, usize) {
    let scale = rows[1..rows.len() - 1].iter().map(|r| predicted(r).abs()).fold(0.0, f64::max);
    let noise = NOISE_FLOOR * rows.iter().map(|r| value(r).abs()).fold(0.0, f64::max);
    if scale <= noise {
        return (0.0, 0);
    }
    let mut worst = 0.0f64;
    let mut compared = 0;
    for w in rows.windows(3) {
        let p = predicted(&w[1]);
        if p.abs() < (RELATIVE_FLOOR * scale).max(noise) || w[1].t <= w[0].t || w[2].t <= w[1].t {
            continue;
        }
        let fd = central_difference([w[0].t, w[1].t, w[2].t], [value(&w[0]), value(&w[1]), value(&w[2])]);
        worst = worst.max((fd - p).abs() / p.abs());
        compared += 1;
    }
    (worst, compared)
}

/// Checks the energy identity, the λ′ formula, the multiplier bounds, the
/// barrier on `H − λf`, monotonicity of `E_f` and the volume error.
pub fn check_identities(traj: &Trajectory) -> Result<IdentityReport> {
    let rows = &traj.rows;
    if rows.len() < 3 {
        return Err(Error::Input(format!("identity checks need at least 3 samples, got {}", rows.len())));
    }
    let k = Constants::surface();
    let b = &traj.bounds;
    let energy_rate = |r: &TrajectoryRow| {
        -0.5 * (k.nf() - 1.0) * r.weighted_volume().powf(-2.0 / k.two_sharp) * r.f2
    };
    let (energy_rate_rel_error, energy_rate_rows_compared) =
        rate_error(rows, |r| r.normalized_energy, energy_rate);
    let (lambda_prime_rel_error, lambda_prime_rows_compared) =
        rate_error(rows, |r| r.lambda, |r| r.lambda_prime);

    let gamma = b.gamma;
    let gamma_observed = b.gamma_with(traj.sup_abs_lambda_prime);
    let fold = |g: &dyn Fn(&TrajectoryRow) -> f64| rows.iter().map(g).fold(0.0f64, f64::max);
    Ok(IdentityReport {
        rows: rows.len(),
        energy_rate_rel_error,
        energy_rate_rows_compared,
        lambda_prime_rel_error,
        lambda_prime_rows_compared,
        lambda_bounds_violation: fold(&|r| (b.lambda1 - r.lambda).max(r.lambda - b.lambda2)),
        gamma,
        barrier_violation: fold(&|r| gamma - r.min_h_minus_lambda_f),
        gamma_observed,
        barrier_violation_observed: fold(&|r| gamma_observed - r.min_h_minus_lambda_f),
        sup_f2: fold(&|r| r.f2),
        monotonicity_violation: rows
            .windows(2)
            .map(|w| w[1].normalized_energy - w[0].normalized_energy)
            .fold(0.0, f64::max),
        max_vol_err: fold(&|r| r.vol_err),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::PrescribedField;
    use crate::flow::{init_state, run, FlowConfig};
    use crate::spectral::{BoundaryField, Grid};

    #[test]
    fn central_difference_is_exact_on_quadratics() {
        let t = [0.0, 0.3, 0.7];
        let y = t.map(|s| 2.0 - s + 3.0 * s * s);
        assert!((central_difference(t, y) - (-1.0 + 6.0 * 0.3)).abs() < 1e-13);
    }

    #[test]
    fn stationary_trajectory_has_no_violations() {
        let g = Grid::new(8).unwrap();
        let f = PrescribedField::from_samples(BoundaryField::constant(&g, 1.0));
        let cfg = FlowConfig { t_end: 0.01, conv_tol: 1e-300, dt0: 1e-3, ..FlowConfig::default() };
        let s = init_state(&BoundaryField::constant(&g, 1.0), f, &cfg).unwrap();
        let (traj, _) = run(s, &cfg).unwrap();
        let r = check_identities(&traj).unwrap();
        assert!(r.rows >= 3);
        assert_eq!(r.energy_rate_rel_error, 0.0);
        assert_eq!(r.lambda_prime_rel_error, 0.0);
        assert!(r.lambda_bounds_violation < 1e-12);
        assert!(r.barrier_violation < 1e-12);
        assert!(r.monotonicity_violation < 1e-12);
        assert!(r.sup_f2 < 1e-24);
    }

    #[test]
    fn short_trajectories_are_rejected() {
        let g = Grid::new(8).unwrap();
        let f = PrescribedField::from_samples(BoundaryField::constant(&g, 1.0));
        let cfg = FlowConfig::default();
        let s = init_state(&BoundaryField::constant(&g, 1.0), f, &cfg).unwrap();
        let (traj, _) = run(s, &cfg).unwrap();
        assert!(matches!(check_identities(&traj), Err(Error::Input(_))));
    }
}
