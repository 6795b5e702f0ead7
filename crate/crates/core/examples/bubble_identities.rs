//! Bubbles `u_{p,ε}`: constant mean curvature, unit volume and the closed-form
//! cap masses, checked against the spectral computations.

use prescribed_curvature::conformal::{bubble, bubble_cap_fraction, bubble_resolution, ConformalMap, CAP_RADII};
use prescribed_curvature::curvature::{mean_curvature, volume};
use prescribed_curvature::spectral::{cap_mean_at, Grid};
use prescribed_curvature::sphere::normalized;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(63)?;
    let p = normalized([1.0, 1.0, 1.0]).ok_or("zero center")?;
    for eps in [0.8, 0.3, 0.1] {
        let u = bubble(&ConformalMap::new(p, eps)?, &grid);
        let h = mean_curvature(&u)?;
        let dev = h.values().iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        println!("eps = {eps}: max|H - 1| = {dev:.2e}, volume = {:.12}", volume(&u));
        let density = u.map(|v| v.powi(4));
        for r in CAP_RADII {
            println!(
                "    cap r = {r}: spectral {:.6}, closed form {:.6}",
                cap_mean_at(&density, p, r),
                bubble_cap_fraction(eps, r)
            );
        }
        if let Some(w) = bubble_resolution(eps, grid.l_max()) {
            println!("    warning: {w}");
        }
    }
    Ok(())
}
