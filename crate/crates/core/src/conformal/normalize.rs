use nalgebra::{Matrix3, Vector3};

use super::bubble::{center_of_mass, pullback_normalized};
use super::map::ConformalMap;
use crate::curvature::{ensure_positive, Constants};
use crate::error::{Error, Result};
use crate::spectral::BoundaryField;
use crate::sphere::Vec3;

const MAX_ITERATIONS: usize = 100;
const FD_STEP: f64 = 1e-6;
/// Residual at which the solve is accepted.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// The map that balances `u` together with the normalized function.
#[derive(Debug, Clone)]
pub struct NormalizedState {
    pub map: ConformalMap,
    pub v: BoundaryField,
    /// `|⨍ x v^{2#} dμ|` recomputed from `v`.
    pub residual: f64,
    pub iterations: usize,
}

/// `⨍ x v^{2#} dμ` for `v` the pullback of `u` by the map of ball point `b`,
/// computed by change of variables as `⨍ φ⁻¹(y) u(y)^{2#} dμ(y)`.
fn balance(weights: &[f64], points: &[Vec3], b: Vec3) -> Result<Vector3<f64>> {
    let inv = ConformalMap::from_ball_point(b)?.inverse();
    let mut s = Vector3::zeros();
    for (w, &y) in weights.iter().zip(points) {
        let x = inv.apply(y);
        s += *w * Vector3::new(x[0], x[1], x[2]);
    }
    Ok(s)
}

/// Finds `φ` with `⨍ x dμ_h = 0`, `h = v^{4/(n−1)} g`, by damped Newton on the
/// ball point `b = (1 − ε) p` with a central-difference Jacobian, starting at
/// `b₀ = S(u)/2`.
pub fn normalize(u: &BoundaryField) -> Result<NormalizedState> {
    ensure_positive(u)?;
    let q = Constants::surface().two_sharp;
    let grid = u.grid();
    let weights: Vec<f64> =
        grid.mean_weights().iter().zip(u.values()).map(|(w, v)| w * v.powf(q)).collect();
    let points = grid.points();

    let s0 = center_of_mass(u).s;
    let mut b = Vector3::new(0.5 * s0[0], 0.5 * s0[1], 0.5 * s0[2]);
    let to_arr = |v: &Vector3<f64>| [v[0], v[1], v[2]];
    let mut r = balance(&weights, points, to_arr(&b))?;
    let mut iterations = 0;
    while r.norm() > 1e-14 && iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut jac = Matrix3::zeros();
        for k in 0..3 {
            let mut bp = b;
            let mut bm = b;
            bp[k] += FD_STEP;
            bm[k] -= FD_STEP;
            let col = (balance(&weights, points, to_arr(&bp))? - balance(&weights, points, to_arr(&bm))?)
                / (2.0 * FD_STEP);
            jac.set_column(k, &col);
        }
        let Some(step) = jac.lu().solve(&(-r)) else {
            break;
        };
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-8 {
            let cand = b + t * step;
            if cand.norm() < 1.0 - 1e-12 {
                let rc = balance(&weights, points, to_arr(&cand))?;
                if rc.norm() < r.norm() {
                    b = cand;
                    r = rc;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }

    let map = ConformalMap::from_ball_point(to_arr(&b))?;
    let v = pullback_normalized(u, &map)?;
    let com = center_of_mass(&v);
    let residual = com.norm;
    if residual > NORMALIZATION_TOL {
        return Err(Error::Stagnation { iterations, residual });
    }
    Ok(NormalizedState { map, v, residual, iterations })
}
