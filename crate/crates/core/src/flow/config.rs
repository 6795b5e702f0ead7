use serde::{Deserialize, Serialize};

use crate::curvature::DEFAULT_LAMBDA0;
use crate::error::{Error, Result};

/// Integrator and stopping parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowConfig {
    pub dt0: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub t_end: f64,
    pub vol_project: bool,
    /// Converged once `‖λf − H‖_{L²(dμ_g)}` drops below this.
    pub conv_tol: f64,
    /// Concentrating once `max u` exceeds this.
    pub blowup_maxu: f64,
    pub record_every: usize,
    pub p_list: Vec<f64>,
    /// Bound on `|λ′|` used for the barrier `γ`.
    pub lambda0: f64,
    /// Safety factor on the diffusive step limit `1 / (κ a_n L max u^{−(2#−2)})`.
    pub cfl: f64,
    /// Largest allowed `dt · max|H − λf|`.
    pub max_rate_step: f64,
    /// Threshold parameter of the cap concentration test.
    pub concentration_tau: f64,
    pub max_steps: usize,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            dt0: 1e-3,
            dt_min: 1e-10,
            dt_max: 1e-2,
            t_end: 50.0,
            vol_project: true,
            conv_tol: 1e-4,
            blowup_maxu: 1e3,
            record_every: 1,
            p_list: vec![2.0, 4.0],
            lambda0: DEFAULT_LAMBDA0,
            cfl: 1.0,
            max_rate_step: 0.1,
            concentration_tau: 1.3,
            max_steps: 1_000_000,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if !(self.dt_min > 0.0 && self.dt_min <= self.dt0 && self.dt0 <= self.dt_max) {
            return bad("step limits must satisfy 0 < dt_min <= dt0 <= dt_max");
        }
        if !(self.conv_tol > 0.0) {
            return bad("conv_tol must be positive");
        }
        if !(self.t_end > 0.0) {
            return bad("t_end must be positive");
        }
        if !(self.blowup_maxu > 0.0) {
            return bad("blowup_maxu must be positive");
        }
        if self.record_every == 0 {
            return bad("record_every must be at least 1");
        }
        if self.p_list.iter().any(|&p| !(p > 0.0)) {
            return bad("every exponent in p_list must be positive");
        }
        if !(self.lambda0 >= 0.0) {
            return bad("lambda0 must be nonnegative");
        }
        if !(self.cfl > 0.0 && self.max_rate_step > 0.0) {
            return bad("cfl and max_rate_step must be positive");
        }
        if !(self.concentration_tau >= 1.0 && self.concentration_tau < 2f64.sqrt()) {
            return bad("concentration_tau must lie in [1, 2^(1/n))");
        }
        if self.max_steps == 0 {
            return bad("max_steps must be at least 1");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        FlowConfig::default().validate().unwrap();
    }

    #[test]
    fn step_limits_are_checked() {
        let c = FlowConfig { dt0: 1.0, dt_max: 0.1, ..FlowConfig::default() };
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let c = FlowConfig { conv_tol: 0.0, ..FlowConfig::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn partial_json_fills_defaults() {
        let c: FlowConfig = serde_json::from_str(r#"{"t_end": 5.0, "vol_project": false}"#).unwrap();
        assert_eq!(c.t_end, 5.0);
        assert!(!c.vol_project);
        assert_eq!(c.p_list, vec![2.0, 4.0]);
        assert!(serde_json::from_str::<FlowConfig>(r#"{"dtt": 1}"#).is_err());
    }
}
