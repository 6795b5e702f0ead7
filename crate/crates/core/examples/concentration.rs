//! The cap-mass concentration detector on one and two bubbles.

use prescribed_curvature::conformal::{bubble, concentration_check, ConformalMap};
use prescribed_curvature::spectral::{BoundaryField, Grid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(127)?;
    let one = BoundaryField::constant(&grid, 1.0);
    let north = bubble(&ConformalMap::new([0.0, 0.0, 1.0], 0.03)?, &grid);
    let south = bubble(&ConformalMap::new([0.0, 0.0, -1.0], 0.03)?, &grid);
    let glued = north.zip_map(&south, |a, b| (a.powi(4) + b.powi(4)).powf(0.25))?;

    // H ≡ 1 for a bubble; the glued field is only used as a synthetic density
    for (name, u) in [("round", &one), ("bubble at N", &north), ("two bubbles", &glued)] {
        let r = concentration_check(u, &one, 1.3)?;
        println!(
            "{name}: threshold {:.4}, max cap fractions {:.4?}, flagged nodes {}, clusters {}, uniqueness warning {}",
            r.threshold,
            r.max_cap_fraction,
            r.flagged_nodes,
            r.clusters.len(),
            r.uniqueness_warning
        );
        for c in &r.clusters {
            println!("    center [{:+.3}, {:+.3}, {:+.3}], caps {:.4?}", c.center[0], c.center[1], c.center[2], c.cap_fractions);
        }
    }
    Ok(())
}
