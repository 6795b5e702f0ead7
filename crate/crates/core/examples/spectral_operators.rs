//! Transforms and exact operators on a Gauss–Legendre grid: the DtN map
//! multiplies degree `l` by `l`, Laplace–Beltrami by `−l(l+1)`.

use prescribed_curvature::spectral::{
    analyze, cap_means, dtn_apply, gradient_norm_sq, laplace_beltrami, BoundaryField, Grid, SphCoeffs,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(16)?;
    println!("L = {}, {} x {} nodes", grid.l_max(), grid.n_lat(), grid.n_lon());

    // z = Y_{1,0}/√3 under the ⨍Y² = 1 normalization
    let z = BoundaryField::from_fn(&grid, |p| p[2]);
    let c = analyze(z.values(), &grid)?;
    println!("z: c_10 = {:.15} (1/√3 = {:.15})", c.get(1, 0), 3f64.sqrt().recip());

    for l in [1usize, 4, 9] {
        let unit = SphCoeffs::unit(16, l, 2.min(l as i64));
        println!(
            "degree {l}: DtN factor {:.1}, Laplace-Beltrami factor {:.1}",
            dtn_apply(&unit).get(l, 2.min(l as i64)),
            laplace_beltrami(&unit).get(l, 2.min(l as i64))
        );
    }

    // |∇z|² = 1 − z², so its mean is 2/3
    println!("mean |grad z|^2 = {:.15}", gradient_norm_sq(&z).mean());

    // cap of radius 0.5 around every node: area fraction (1 − cos 0.5)/2
    let one = BoundaryField::constant(&grid, 1.0);
    let caps = cap_means(&one, 0.5);
    println!("cap fraction at node 0: {:.12}, exact {:.12}", caps[0], 0.5 * (1.0 - 0.5f64.cos()));
    Ok(())
}
