use serde::{Deserialize, Serialize};

use super::{energy_functional, volume, weighted_volume, Constants, PrescribedField};
use crate::error::{Error, Result};
use crate::spectral::BoundaryField;

/// Default for the bound on `|λ′|`, whose true value is not explicit.
pub const DEFAULT_LAMBDA0: f64 = 10.0;

/// A priori bounds for a flow started at `u0`, frozen at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowBounds {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda0: f64,
    pub gamma: f64,
    pub c_star: f64,
    pub sigma: f64,
    pub beta: f64,
    /// Whether `max|f| / ⨍f < 2^{1/n}`, i.e. `sigma > 0`.
    pub condition_two: bool,
    pub min_h0: f64,
    pub max_abs_f: f64,
    pub mean_f: f64,
    pub n: usize,
}

impl FlowBounds {
    /// Barrier `γ` for a different bound on `|λ′|`.
    pub fn gamma_with(&self, lambda0: f64) -> f64 {
        gamma(self.min_h0, self.lambda2, self.max_abs_f, lambda0)
    }
}

fn gamma(min_h0: f64, lambda2: f64, max_abs_f: f64, lambda0: f64) -> f64 {
    let a = lambda2 * max_abs_f;
    let root = ((4.0 / 3.0) * a * a + (8.0 / 3.0) * lambda0 * max_abs_f).sqrt();
    (min_h0 - a).min(-root)
}

/// Bounds `λ₁ ≤ λ ≤ λ₂`, the barrier `γ` for `H − λf`, the curvature floor
/// `C★`, and the gap parameters `σ`, `β`.
pub fn flow_bounds(
    u0: &BoundaryField,
    f: &PrescribedField,
    h0: &BoundaryField,
    lambda0: f64,
) -> Result<FlowBounds> {
    let k = Constants::surface();
    let nf = k.nf();
    let mean_f = f.mean();
    if !f.mean_is_positive() {
        return Err(Error::ConditionOne { mean_f });
    }
    let vol = volume(u0);
    let report = energy_functional(u0, f.field())?;
    let max_abs_f = f.max_abs();
    let lambda1 = vol.powf(-1.0 / nf) / f.max();
    let lambda2 = report.normalized_energy.powf(nf / (nf - 1.0)) * vol.powf(-1.0 / nf);
    let min_h0 = h0.min();
    let gamma = gamma(min_h0, lambda2, max_abs_f, lambda0);
    let sigma = 0.5 * (2f64.powf(1.0 / nf) * mean_f / max_abs_f - 1.0);
    let beta = (1.0 + sigma).powf((nf - 1.0) / nf) * mean_f.powf((1.0 - nf) / nf);
    Ok(FlowBounds {
        lambda1,
        lambda2,
        lambda0,
        gamma,
        c_star: -lambda2 * max_abs_f + gamma,
        sigma,
        beta,
        condition_two: sigma > 0.0,
        min_h0,
        max_abs_f,
        mean_f,
        n: k.n,
    })
}

/// Membership of `u` in the admissible set `X★` and in the sub-level set `X_f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub in_xstar: bool,
    pub in_xf: bool,
}

/// `X★`: `u > 0` and `⨍ f u^{2#} > 0`. `X_f`: additionally unit volume (to
/// 1e-8) and `E_f[u] ≤ β`.
pub fn membership(u: &BoundaryField, f: &BoundaryField, beta: f64) -> Membership {
    let positive = u.values().iter().all(|&v| v > 0.0);
    let denom_positive = weighted_volume(u, f).map(|d| d > 0.0).unwrap_or(false);
    let in_xstar = positive && denom_positive;
    let in_xf = in_xstar
        && (volume(u) - 1.0).abs() <= 1e-8
        && energy_functional(u, f).map(|r| r.normalized_energy <= beta + 1e-12).unwrap_or(false);
    Membership { in_xstar, in_xf }
}
