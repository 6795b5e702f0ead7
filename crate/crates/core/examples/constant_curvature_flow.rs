//! Constant prescribed curvature: a perturbed round metric flows back to a
//! round one. Prints the verdict and the identity-check summary.

use prescribed_curvature::curvature::PrescribedField;
use prescribed_curvature::flow::{check_identities, init_state, run, FlowConfig};
use prescribed_curvature::spectral::{BoundaryField, Grid, SphCoeffs};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(31)?;
    let f = PrescribedField::from_samples(BoundaryField::constant(&grid, 1.0));
    let mut c = SphCoeffs::unit(31, 0, 0);
    c.set(2, 1, 0.1);
    let u0 = BoundaryField::from_coeffs(&grid, &c);

    let config = FlowConfig::default();
    let start = std::time::Instant::now();
    let (traj, last) = run(init_state(&u0, f, &config)?, &config)?;
    let report = check_identities(&traj)?;

    println!("verdict      {:?} at t = {:.3} after {} steps ({:.1?})", traj.verdict, last.t, traj.steps, start.elapsed());
    println!("residual     {:.3e}", traj.final_residual);
    let h = &last.h;
    println!("H spread     {:.3e}", (h.max() - h.min()) / h.mean());
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
