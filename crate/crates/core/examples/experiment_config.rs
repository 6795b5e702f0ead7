//! A JSON experiment run through the same code path as `pcflow flow run`,
//! writing the trajectory CSV and sidecar reports into a temporary directory.

use prescribed_curvature::experiment::{run_experiment, ExperimentConfig};

const CONFIG: &str = r#"{
    "seed": 7,
    "L": 24,
    "f_spec": "2 - mono 1 z^2",
    "u0_spec": {
        "kind": "perturbation",
        "modes": [{"l": 2, "m": 0, "amplitude": 0.05}],
        "random": {"count": 4, "max_degree": 3, "amplitude": 0.02}
    },
    "flow": {"t_end": 5, "record_every": 10},
    "checks": ["identities", "membership", {"symmetry": "rotation z 5"}]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = ExperimentConfig::from_json(CONFIG)?;
    let out = std::env::temp_dir().join("pcflow-example");
    let outcome = run_experiment(&config, &out)?;
    let v = &outcome.verdict;
    println!("{} (exit {}) at t = {:.3}, residual {:.3e}", v.verdict, v.exit_code, v.t_final, v.final_residual);
    if let Some(Ok(ids)) = &outcome.identities {
        println!("dE_f/dt rel err {:.2e}, lambda' rel err {:.2e}", ids.energy_rate_rel_error, ids.lambda_prime_rel_error);
    }
    for name in ["trajectory.csv", "verdict.json", "identities.json"] {
        println!("wrote {}", out.join(name).display());
    }
    Ok(())
}
