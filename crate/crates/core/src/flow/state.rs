use std::sync::Arc;

use super::config::FlowConfig;
use crate::curvature::{
    energy_functional, ensure_positive, flow_bounds, mean_curvature, volume, Constants, EnergyReport,
    FlowBounds, PrescribedField,
};
use crate::error::{Error, Result};
use crate::spectral::BoundaryField;

/// Snapshot of the flow: conformal factor, multiplier, curvature and the
/// bounds frozen at `t = 0`.
#[derive(Debug, Clone)]
pub struct FlowState {
    pub t: f64,
    pub u: BoundaryField,
    pub lambda: f64,
    pub h: BoundaryField,
    pub energy: EnergyReport,
    pub bounds: FlowBounds,
    pub f: Arc<PrescribedField>,
    /// Step size to try next.
    pub dt_next: f64,
    /// Step size of the step that produced this state (0 initially).
    pub dt_last: f64,
    pub steps: usize,
    /// `|c − 1|` for the last volume projection constant `c`.
    pub projection_deviation: f64,
}

impl FlowState {
    /// `H − λf` at the nodes.
    pub fn rate(&self) -> Vec<f64> {
        self.h.values().iter().zip(self.f.field().values()).map(|(h, f)| h - self.lambda * f).collect()
    }
}

/// Validates `u0`, projects it onto the grid band, rescales it to unit volume
/// and freezes the a priori bounds.
pub fn init_state(u0: &BoundaryField, f: PrescribedField, config: &FlowConfig) -> Result<FlowState> {
    config.validate()?;
    u0.check_same_grid(f.field())?;
    if !f.mean_is_positive() {
        return Err(Error::ConditionOne { mean_f: f.mean() });
    }
    let u = u0.band_limited();
    ensure_positive(&u).map_err(|e| Error::Inadmissible(format!("initial data is not positive: {e}")))?;
    let scale = volume(&u).powf(-1.0 / Constants::surface().two_sharp);
    let u = BoundaryField::from_coeffs(u.grid(), &u.coeffs().scale_by_degree(|_| scale));
    ensure_positive(&u).map_err(|e| Error::Inadmissible(format!("initial data is not positive: {e}")))?;
    let energy = energy_functional(&u, f.field())?;
    let h = mean_curvature(&u)?;
    let bounds = flow_bounds(&u, &f, &h, config.lambda0)?;
    Ok(FlowState {
        t: 0.0,
        lambda: energy.lambda,
        u,
        h,
        energy,
        bounds,
        f: Arc::new(f),
        dt_next: config.dt0,
        dt_last: 0.0,
        steps: 0,
        projection_deviation: 0.0,
    })
}

/// Largest step allowed by the rate and stability limits.
fn step_limit(state: &FlowState, config: &FlowConfig, rate: &[f64]) -> f64 {
    let k = Constants::surface();
    let max_rate = rate.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let min_u = state.u.min();
    let stiff = k.flow_rate() * k.a_n * state.u.grid().l_max() as f64 * min_u.powf(-(k.two_sharp - 2.0));
    let mut dt = state.dt_next.min(config.dt_max).min(config.cfl / stiff);
    if max_rate > 0.0 {
        dt = dt.min(config.max_rate_step / max_rate);
    }
    dt
}

/// One explicit Euler step of `∂_t u = −((n−1)/4)(H − λf) u` followed by
/// band-limiting and, if enabled, exact volume projection. Steps that break
/// positivity are retried with half the step size.
pub fn step(state: &FlowState, config: &FlowConfig) -> Result<FlowState> {
    let k = Constants::surface();
    let rate = state.rate();
    let mut dt = step_limit(state, config, &rate);
    let grid = state.u.grid();
    let u_new = loop {
        if dt < config.dt_min {
            return Err(Error::StepCollapse { t: state.t, dt });
        }
        let values = state
            .u
            .values()
            .iter()
            .zip(&rate)
            .map(|(u, r)| u * (1.0 - dt * k.flow_rate() * r))
            .collect();
        let candidate = BoundaryField::from_values(grid, values)?.band_limited();
        if candidate.min() > 0.0 {
            break candidate;
        }
        dt *= 0.5;
    };
    let (u_new, projection_deviation) = if config.vol_project {
        let c = volume(&u_new).powf(-1.0 / k.two_sharp);
        (BoundaryField::from_coeffs(grid, &u_new.coeffs().scale_by_degree(|_| c)), (c - 1.0).abs())
    } else {
        (u_new, 0.0)
    };
    let t = state.t + dt;
    let energy = match energy_functional(&u_new, state.f.field()) {
        Ok(e) => e,
        Err(Error::Inadmissible(_)) => {
            let denom = crate::curvature::weighted_volume(&u_new, state.f.field())?;
            return Err(Error::LeftAdmissibleSet { t, denom });
        }
        Err(e) => return Err(e),
    };
    let h = mean_curvature(&u_new)?;
    Ok(FlowState {
        t,
        lambda: energy.lambda,
        u: u_new,
        h,
        energy,
        bounds: state.bounds,
        f: Arc::clone(&state.f),
        dt_next: (dt * 1.25).min(config.dt_max),
        dt_last: dt,
        steps: state.steps + 1,
        projection_deviation,
    })
}
