//! Balancing a conformal factor: find the Möbius map that moves its center of
//! mass to the origin, then read back the bubble parameters.

use prescribed_curvature::conformal::{bubble, center_of_mass, normalize, ConformalMap};
use prescribed_curvature::curvature::volume;
use prescribed_curvature::spectral::Grid;
use prescribed_curvature::sphere::{geodesic_distance, normalized};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(63)?;
    let p = normalized([0.2, -0.5, 0.8]).ok_or("zero center")?;
    for eps in [0.7, 0.4, 0.25] {
        let u = bubble(&ConformalMap::new(p, eps)?, &grid);
        let before = center_of_mass(&u);
        let s = normalize(&u)?;
        let sup = s.v.values().iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        println!(
            "eps = {eps}: |S| {:.4} -> {:.1e} in {} Newton steps; p error {:.1e}, eps recovered {:.8}; max|v - 1| {:.1e}; volume {:.10} -> {:.10}",
            before.norm,
            s.residual,
            s.iterations,
            geodesic_distance(s.map.p(), p),
            s.map.eps(),
            sup,
            volume(&u),
            volume(&s.v)
        );
    }
    Ok(())
}
