//! JSON-configured experiments and the reports behind the `pcflow` commands.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conformal::{
    bubble, bubble_cap_fraction, bubble_resolution, normalize, ConformalMap, CAP_RADII,
};
use crate::curvature::{mean_curvature, membership, volume, FlowBounds, Membership};
use crate::error::{Error, Result};
use crate::flow::{check_identities, init_state, run, FlowConfig, IdentityReport, Trajectory, Verdict};
use crate::morse::{check_conditions, check_symmetry, MorseReport, PrescribedFunction, Symmetry};
use crate::spectral::{cap_mean_at, BoundaryField, Grid, SphCoeffs};
use crate::sphere::{normalized, Vec3};

/// Process exit codes of the command-line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExitStatus {
    Success,
    HypothesesFail,
    Concentrating,
    SchemeFailure,
    Usage,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::HypothesesFail => 1,
            ExitStatus::Concentrating => 2,
            ExitStatus::SchemeFailure => 3,
            ExitStatus::Usage => 64,
        }
    }
}

/// A single spherical-harmonic mode `amplitude · Y_{l,m}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode {
    pub l: usize,
    pub m: i64,
    pub amplitude: f64,
}

/// Seeded random modes of degree `1..=max_degree` with amplitudes uniform in
/// `[−amplitude, amplitude]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomModes {
    pub count: usize,
    pub max_degree: usize,
    pub amplitude: f64,
}

/// Initial conformal factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    Constant {
        value: f64,
    },
    Bubble {
        p: Vec3,
        eps: f64,
    },
    Perturbation {
        #[serde(default = "one")]
        base: f64,
        #[serde(default)]
        modes: Vec<Mode>,
        #[serde(default)]
        random: Option<RandomModes>,
    },
}

fn one() -> f64 {
    1.0
}

/// Extra reports attached to an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Identities,
    Morse,
    Membership,
    Symmetry(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(rename = "L")]
    pub l_max: usize,
    #[serde(default = "two")]
    pub n: usize,
    pub f_spec: String,
    pub u0_spec: InitialData,
    #[serde(default)]
    pub flow: FlowConfig,
    #[serde(default = "default_outputs")]
    pub outputs: PathBuf,
    #[serde(default = "default_checks")]
    pub checks: Vec<Check>,
}

fn two() -> usize {
    2
}

fn default_outputs() -> PathBuf {
    PathBuf::from("out")
}

fn default_checks() -> Vec<Check> {
    vec![Check::Identities]
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks everything that can be checked without running the flow.
    pub fn validate(&self) -> Result<()> {
        if self.n != 2 {
            return Err(Error::Config(format!("only n = 2 is gridded, got n = {}", self.n)));
        }
        self.flow.validate()?;
        self.f_spec.parse::<PrescribedFunction>()?;
        for c in &self.checks {
            if let Check::Symmetry(s) = c {
                s.parse::<Symmetry>()?;
            }
        }
        match &self.u0_spec {
            InitialData::Bubble { p, eps } => {
                ConformalMap::new(normalized(*p).ok_or_else(|| Error::Config("bubble center is zero".into()))?, *eps)?;
            }
            InitialData::Perturbation { modes, random, .. } => {
                for md in modes {
                    if md.l > self.l_max || md.m.unsigned_abs() as usize > md.l {
                        return Err(Error::Config(format!("mode ({}, {}) is outside degree {}", md.l, md.m, self.l_max)));
                    }
                }
                if let Some(r) = random {
                    if r.max_degree == 0 || r.max_degree > self.l_max {
                        return Err(Error::Config("random max_degree must lie in 1..=L".into()));
                    }
                }
            }
            InitialData::Constant { .. } => {}
        }
        Ok(())
    }
}

/// Samples the initial data on `grid`; random modes come from `seed`.
pub fn initial_field(spec: &InitialData, grid: &Arc<Grid>, seed: u64) -> Result<BoundaryField> {
    match spec {
        InitialData::Constant { value } => Ok(BoundaryField::constant(grid, *value)),
        InitialData::Bubble { p, eps } => {
            let p = normalized(*p).ok_or_else(|| Error::Config("bubble center is zero".into()))?;
            Ok(bubble(&ConformalMap::new(p, *eps)?, grid))
        }
        InitialData::Perturbation { base, modes, random } => {
            let mut c = SphCoeffs::zeros(grid.l_max());
            c.set(0, 0, *base);
            for md in modes {
                c.set(md.l, md.m, c.get(md.l, md.m) + md.amplitude);
            }
            if let Some(r) = random {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..r.count {
                    let l = rng.gen_range(1..=r.max_degree);
                    let m = rng.gen_range(-(l as i64)..=l as i64);
                    let a = rng.gen_range(-r.amplitude..=r.amplitude);
                    c.set(l, m, c.get(l, m) + a);
                }
            }
            Ok(BoundaryField::from_coeffs(grid, &c))
        }
    }
}

/// Sidecar summary written next to the trajectory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictReport {
    /// `Converged`, `Concentrating`, `HorizonReached` or `SchemeFailure`.
    pub verdict: String,
    pub exit_code: i32,
    pub error: Option<String>,
    pub t_final: f64,
    pub steps: usize,
    pub samples: usize,
    pub final_residual: f64,
    pub lambda_final: f64,
    pub sup_abs_lambda_prime: f64,
    pub max_projection_deviation: f64,
    pub concentration_center: Option<Vec3>,
    pub bounds: Option<FlowBounds>,
    pub membership_initial: Option<Membership>,
    pub membership_final: Option<Membership>,
    pub morse: Option<MorseReport>,
    pub seed: u64,
    pub config: ExperimentConfig,
}

/// What [`run_experiment`] produced.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub status: ExitStatus,
    pub verdict: VerdictReport,
    pub identities: Option<std::result::Result<IdentityReport, String>>,
    pub trajectory: Option<Trajectory>,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Runs one experiment and writes `trajectory.csv`, `verdict.json` and, when
/// requested, `identities.json` into `out`. Configuration problems are
/// returned as errors; everything after the flow has started is reported
/// through the exit status.
pub fn run_experiment(config: &ExperimentConfig, out: &Path) -> Result<ExperimentOutcome> {
    config.validate()?;
    let grid = Grid::new(config.l_max)?;
    let f: PrescribedFunction = config.f_spec.parse()?;
    let u0 = initial_field(&config.u0_spec, &grid, config.seed)?;
    fs::create_dir_all(out)?;

    let morse = config.checks.iter().any(|c| matches!(c, Check::Morse | Check::Symmetry(_))).then(|| {
        let mut report = check_conditions(&f, &grid, config.n);
        if let Some(Check::Symmetry(s)) = config.checks.iter().find(|c| matches!(c, Check::Symmetry(_))) {
            let sym: Symmetry = s.parse().expect("validated above");
            report.symmetry = Some(check_symmetry(&f, &sym, &grid, config.n));
        }
        report
    });
    let want_membership = config.checks.contains(&Check::Membership);

    let mut verdict = VerdictReport {
        verdict: "SchemeFailure".into(),
        exit_code: ExitStatus::SchemeFailure.code(),
        error: None,
        t_final: 0.0,
        steps: 0,
        samples: 0,
        final_residual: f64::NAN,
        lambda_final: f64::NAN,
        sup_abs_lambda_prime: f64::NAN,
        max_projection_deviation: f64::NAN,
        concentration_center: None,
        bounds: None,
        membership_initial: None,
        membership_final: None,
        morse,
        seed: config.seed,
        config: config.clone(),
    };
    let prescribed = f.prescribed_field(&grid);
    let state = match init_state(&u0, prescribed, &config.flow) {
        Ok(s) => s,
        Err(e) => {
            verdict.error = Some(match e {
                Error::ConditionOne { .. } | Error::Inadmissible(_) => format!("left X*/condition (i): {e}"),
                other => other.to_string(),
            });
            write_json(&out.join("verdict.json"), &verdict)?;
            return Ok(ExperimentOutcome { status: ExitStatus::SchemeFailure, verdict, identities: None, trajectory: None });
        }
    };
    if want_membership {
        verdict.membership_initial = Some(membership(&state.u, state.f.field(), state.bounds.beta));
    }
    verdict.bounds = Some(state.bounds);

    let (traj, last, status) = match run(state, &config.flow) {
        Ok((traj, last)) => {
            let status = match traj.verdict {
                Some(Verdict::Concentrating) => ExitStatus::Concentrating,
                _ => ExitStatus::Success,
            };
            (traj, last, status)
        }
        Err(failure) => {
            verdict.error = Some(failure.error.to_string());
            (failure.trajectory, failure.last_state, ExitStatus::SchemeFailure)
        }
    };
    traj.write_csv(fs::File::create(out.join("trajectory.csv"))?)?;

    verdict.verdict = traj.verdict.map_or("SchemeFailure".into(), |v| v.to_string());
    verdict.exit_code = status.code();
    verdict.t_final = last.t;
    verdict.steps = last.steps;
    verdict.samples = traj.rows.len();
    verdict.final_residual = traj.final_residual;
    verdict.lambda_final = last.lambda;
    verdict.sup_abs_lambda_prime = traj.sup_abs_lambda_prime;
    verdict.max_projection_deviation = traj.max_projection_deviation;
    verdict.concentration_center =
        traj.concentration.as_ref().and_then(|c| c.clusters.first()).map(|c| c.center);
    if want_membership {
        verdict.membership_final = Some(membership(&last.u, last.f.field(), traj.bounds.beta));
    }
    write_json(&out.join("verdict.json"), &verdict)?;

    let identities = config.checks.contains(&Check::Identities).then(|| {
        check_identities(&traj).map_err(|e| e.to_string())
    });
    if let Some(ids) = &identities {
        match ids {
            Ok(r) => write_json(&out.join("identities.json"), r)?,
            Err(msg) => write_json(&out.join("identities.json"), &serde_json::json!({ "error": msg }))?,
        }
    }
    Ok(ExperimentOutcome { status, verdict, identities, trajectory: Some(traj) })
}

/// Result of `morse check`: the report and whether the requested hypotheses
/// hold. Without a symmetry the Morse-theoretic criteria are used, with one
/// the fixed-set criteria.
pub fn morse_check(f_spec: &str, sym_spec: Option<&str>, l_max: usize) -> Result<(MorseReport, bool)> {
    let f: PrescribedFunction = f_spec.parse()?;
    let grid = Grid::new(l_max)?;
    let mut report = check_conditions(&f, &grid, 2);
    let holds = match sym_spec {
        Some(s) => {
            let sym: Symmetry = s.parse()?;
            let sr = check_symmetry(&f, &sym, &grid, 2);
            let ok = sr.fixed_set_below_mean_criterion || sr.fixed_set_maximum_criterion;
            report.symmetry = Some(sr);
            ok
        }
        None => report.flags.morse_system_criterion || report.flags.index_counting_criterion,
    };
    Ok((report, holds))
}

/// Numerical checks of a single bubble against its closed forms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BubbleProbe {
    pub p: Vec3,
    pub eps: f64,
    #[serde(rename = "L")]
    pub l_max: usize,
    /// `max |H − 1|`.
    pub curvature_deviation: f64,
    pub volume: f64,
    pub cap_radii: [f64; 3],
    /// Spectral cap fractions of `u^{2#}` centered at `p`.
    pub cap_fraction_spectral: [f64; 3],
    pub cap_fraction_exact: [f64; 3],
    pub normalized_p: Option<Vec3>,
    pub normalized_eps: Option<f64>,
    pub normalization_residual: Option<f64>,
    pub normalization_error: Option<String>,
    pub warnings: Vec<String>,
}

pub fn bubble_probe(p: Vec3, eps: f64, l_max: usize) -> Result<BubbleProbe> {
    let p = normalized(p).ok_or_else(|| Error::Domain("bubble center is zero".into()))?;
    let map = ConformalMap::new(p, eps)?;
    let grid = Grid::new(l_max)?;
    let u = bubble(&map, &grid);
    let h = mean_curvature(&u)?;
    let density = u.map(|v| v.powi(4));
    let spectral = CAP_RADII.map(|r| cap_mean_at(&density, p, r));
    let (normalized_p, normalized_eps, normalization_residual, normalization_error) = match normalize(&u) {
        Ok(s) => (Some(s.map.p()), Some(s.map.eps()), Some(s.residual), None),
        Err(e) => (None, None, None, Some(e.to_string())),
    };
    Ok(BubbleProbe {
        p,
        eps,
        l_max,
        curvature_deviation: h.values().iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max),
        volume: volume(&u),
        cap_radii: CAP_RADII,
        cap_fraction_spectral: spectral,
        cap_fraction_exact: CAP_RADII.map(|r| bubble_cap_fraction(eps, r)),
        normalized_p,
        normalized_eps,
        normalization_residual,
        normalization_error,
        warnings: bubble_resolution(eps, l_max).into_iter().collect(),
    })
}
