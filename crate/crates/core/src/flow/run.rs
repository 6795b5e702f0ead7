use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::FlowConfig;
use super::state::{step, FlowState};
use crate::conformal::{center_of_mass, concentration_check, ConcentrationReport, CAP_RADII};
use crate::curvature::{lambda_prime_with, residual_moment, volume, Constants, FlowBounds};
use crate::error::{Error, Result};

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Converged,
    Concentrating,
    HorizonReached,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Converged => "Converged",
            Verdict::Concentrating => "Concentrating",
            Verdict::HorizonReached => "HorizonReached",
        };
        f.write_str(s)
    }
}

/// One sampled time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    /// Step that produced this sample (0 at `t = 0`).
    pub dt: f64,
    pub lambda: f64,
    pub energy: f64,
    pub normalized_energy: f64,
    /// `⨍ (λf − H)² dμ_g`.
    pub f2: f64,
    pub lambda_prime: f64,
    pub vol_err: f64,
    pub min_u: f64,
    pub max_u: f64,
    /// Center of mass `⨍ x dμ_g`.
    pub s: [f64; 3],
    pub s_norm: f64,
    /// Largest `⨍_cap |H|^n dμ_g / ω_n` over nodes at each radius of [`CAP_RADII`].
    pub cap_max: [f64; 3],
    /// `∫ |λf − H|^p dμ_g`, one per exponent in `p_list`.
    pub residuals: Vec<f64>,
    pub min_h_minus_lambda_f: f64,
}

impl TrajectoryRow {
    /// `⨍ f dμ_g`, recovered as `E / λ`.
    pub fn weighted_volume(&self) -> f64 {
        self.energy / self.lambda
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub p_list: Vec<f64>,
    pub bounds: FlowBounds,
    pub rows: Vec<TrajectoryRow>,
    /// `None` when the run stopped on an error.
    pub verdict: Option<Verdict>,
    /// `‖λf − H‖_{L²(dμ_g)}` at the last accepted state.
    pub final_residual: f64,
    pub steps: usize,
    pub sup_abs_lambda_prime: f64,
    pub max_projection_deviation: f64,
    /// Concentration report at the last sample.
    pub concentration: Option<ConcentrationReport>,
}

impl Trajectory {
    fn new(state: &FlowState, config: &FlowConfig) -> Self {
        Trajectory {
            p_list: config.p_list.clone(),
            bounds: state.bounds,
            rows: Vec::new(),
            verdict: None,
            final_residual: f64::NAN,
            steps: 0,
            sup_abs_lambda_prime: 0.0,
            max_projection_deviation: 0.0,
            concentration: None,
        }
    }

    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = [
            "t", "dt", "lambda", "E", "E_f", "F2", "lambda_prime", "vol_err", "min_u", "max_u", "S_x", "S_y",
            "S_z", "S_norm",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        h.extend(CAP_RADII.iter().map(|r| format!("cap_max_r{r}")));
        h.extend(self.p_list.iter().map(|p| format!("L{p}_residual")));
        h.push("min_H_minus_lambda_f".into());
        h
    }

    /// Writes the rows as CSV with 17 significant digits per float.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header())?;
        for r in &self.rows {
            let mut rec: Vec<f64> = vec![
                r.t,
                r.dt,
                r.lambda,
                r.energy,
                r.normalized_energy,
                r.f2,
                r.lambda_prime,
                r.vol_err,
                r.min_u,
                r.max_u,
                r.s[0],
                r.s[1],
                r.s[2],
                r.s_norm,
            ];
            rec.extend(r.cap_max);
            rec.extend(&r.residuals);
            rec.push(r.min_h_minus_lambda_f);
            w.write_record(rec.iter().map(|x| format!("{x:.16e}")))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// A hard failure together with everything recorded before it.
#[derive(Debug, Clone)]
pub struct RunFailure {
    pub error: Error,
    pub trajectory: Trajectory,
    pub last_state: FlowState,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (after {} samples)", self.error, self.trajectory.rows.len())
    }
}

impl std::error::Error for RunFailure {}

fn sample(state: &FlowState, config: &FlowConfig) -> Result<(TrajectoryRow, ConcentrationReport)> {
    let k = Constants::surface();
    let f = state.f.field();
    let f2 = residual_moment(&state.u, f, &state.h, state.lambda, 2.0)?;
    let residuals = config
        .p_list
        .iter()
        .map(|&p| Ok(k.omega_n * residual_moment(&state.u, f, &state.h, state.lambda, p)?))
        .collect::<Result<Vec<_>>>()?;
    let com = center_of_mass(&state.u);
    let conc = concentration_check(&state.u, &state.h, config.concentration_tau)?;
    let row = TrajectoryRow {
        t: state.t,
        dt: state.dt_last,
        lambda: state.lambda,
        energy: state.energy.energy,
        normalized_energy: state.energy.normalized_energy,
        f2,
        lambda_prime: lambda_prime_with(&state.u, f, &state.h, state.lambda)?,
        vol_err: (volume(&state.u) - 1.0).abs(),
        min_u: state.u.min(),
        max_u: state.u.max(),
        s: com.s,
        s_norm: com.norm,
        cap_max: conc.max_cap_fraction,
        residuals,
        min_h_minus_lambda_f: state.rate().into_iter().fold(f64::INFINITY, f64::min),
    };
    Ok((row, conc))
}

/// `‖λf − H‖_{L²(dμ_g)}`.
fn l2_residual(state: &FlowState) -> Result<f64> {
    let f2 = residual_moment(&state.u, state.f.field(), &state.h, state.lambda, 2.0)?;
    Ok((Constants::surface().omega_n * f2).sqrt())
}

/// Steps the flow until it converges, concentrates or reaches `t_end`
/// (or `max_steps`), recording every `record_every`-th state and the last one.
pub fn run(initial: FlowState, config: &FlowConfig) -> std::result::Result<(Trajectory, FlowState), RunFailure> {
    let mut traj = Trajectory::new(&initial, config);
    let mut state = initial;
    macro_rules! attempt {
        ($e:expr) => {
            match $e {
                Ok(v) => v,
                Err(error) => {
                    traj.steps = state.steps;
                    return Err(RunFailure { error, trajectory: traj, last_state: state });
                }
            }
        };
    }
    if let Err(error) = config.validate() {
        return Err(RunFailure { error, trajectory: traj, last_state: state });
    }
    loop {
        let residual = attempt!(l2_residual(&state));
        traj.final_residual = residual;
        let due = state.steps % config.record_every == 0;
        let mut verdict = None;
        if residual < config.conv_tol {
            verdict = Some(Verdict::Converged);
        } else if state.u.max() > config.blowup_maxu {
            verdict = Some(Verdict::Concentrating);
        } else if state.t >= config.t_end * (1.0 - 1e-12) || state.steps >= config.max_steps {
            verdict = Some(Verdict::HorizonReached);
        }
        if due || verdict.is_some() {
            let (row, conc) = attempt!(sample(&state, config));
            traj.sup_abs_lambda_prime = traj.sup_abs_lambda_prime.max(row.lambda_prime.abs());
            traj.rows.push(row);
            if verdict.is_none() && conc.concentrating() {
                verdict = Some(Verdict::Concentrating);
            }
            traj.concentration = Some(conc);
        }
        if let Some(v) = verdict {
            traj.verdict = Some(v);
            traj.steps = state.steps;
            return Ok((traj, state));
        }
        let mut trial = state.clone();
        trial.dt_next = trial.dt_next.min(config.t_end - state.t).max(config.dt_min);
        let next = attempt!(step(&trial, config));
        traj.max_projection_deviation = traj.max_projection_deviation.max(next.projection_deviation);
        state = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::PrescribedField;
    use crate::flow::init_state;
    use crate::spectral::{BoundaryField, Grid, SphCoeffs};

    #[test]
    fn round_metric_converges_immediately() {
        let g = Grid::new(8).unwrap();
        let f = PrescribedField::from_samples(BoundaryField::constant(&g, 1.0));
        let cfg = FlowConfig::default();
        let s = init_state(&BoundaryField::constant(&g, 1.0), f, &cfg).unwrap();
        let (traj, _) = run(s, &cfg).unwrap();
        assert_eq!(traj.verdict, Some(Verdict::Converged));
        assert_eq!(traj.rows.len(), 1);
        assert!(traj.final_residual < 1e-12);
    }

    #[test]
    fn short_horizon_is_reported() {
        let g = Grid::new(12).unwrap();
        let f = PrescribedField::from_samples(BoundaryField::constant(&g, 1.0));
        let mut c = SphCoeffs::unit(12, 0, 0);
        c.set(2, 1, 0.1);
        let cfg = FlowConfig { t_end: 0.05, record_every: 2, ..FlowConfig::default() };
        let s = init_state(&BoundaryField::from_coeffs(&g, &c), f, &cfg).unwrap();
        let (traj, last) = run(s, &cfg).unwrap();
        assert_eq!(traj.verdict, Some(Verdict::HorizonReached));
        assert!((last.t - 0.05).abs() < 1e-12);
        assert_eq!(traj.rows.last().unwrap().t, last.t);
        assert!(traj.rows.windows(2).all(|w| w[1].normalized_energy <= w[0].normalized_energy));
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let header = text.lines().next().unwrap();
        assert!(header.starts_with("t,dt,lambda,E,E_f,F2,lambda_prime,vol_err"));
        assert!(header.ends_with("L2_residual,L4_residual,min_H_minus_lambda_f"));
        assert_eq!(text.lines().count(), traj.rows.len() + 1);
    }

    #[test]
    fn amplitude_threshold_classifies_concentration() {
        let g = Grid::new(8).unwrap();
        let f = PrescribedField::from_samples(BoundaryField::constant(&g, 1.0));
        let mut c = SphCoeffs::unit(8, 0, 0);
        c.set(1, 0, 0.2);
        let cfg = FlowConfig { blowup_maxu: 1.0, ..FlowConfig::default() };
        let s = init_state(&BoundaryField::from_coeffs(&g, &c), f, &cfg).unwrap();
        let (traj, _) = run(s, &cfg).unwrap();
        assert_eq!(traj.verdict, Some(Verdict::Concentrating));
    }
}
