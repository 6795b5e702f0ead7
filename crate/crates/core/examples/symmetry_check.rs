//! Invariance and fixed-set hypotheses for mirror and rotation symmetries.

use prescribed_curvature::morse::{check_symmetry, PrescribedFunction, Symmetry};
use prescribed_curvature::spectral::Grid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(32)?;
    let cases = [
        ("2 - mono 1 z^2", "rotation z 5"),
        ("2 - mono 1 z^2", "mirror z"),
        ("3 + mono 0.4 x^2 - mono 0.2 z", "mirror y"),
        ("3 + mono 0.4 x^2 - mono 0.2 z", "rotation z 2"),
    ];
    for (spec, sym) in cases {
        let f: PrescribedFunction = spec.parse()?;
        let sym: Symmetry = sym.parse()?;
        let r = check_symmetry(&f, &sym, &grid, 2);
        println!("f = {f}, {sym}");
        println!(
            "    invariant {} (dev {:.1e}); fixed set {}; max there {:.4} vs mean {:.4}",
            r.invariant, r.max_deviation, r.fixed_set, r.max_on_fixed_set, r.mean_f
        );
        println!(
            "    below-mean criterion {}, maximum criterion {} (lap f at maximizers {:.3?})",
            r.fixed_set_below_mean_criterion, r.fixed_set_maximum_criterion, r.laplacian_at_argmax
        );
    }
    Ok(())
}
