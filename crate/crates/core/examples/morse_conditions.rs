//! Critical points, the k-system and the index count for a few prescribed
//! functions written in the term grammar.

use prescribed_curvature::morse::{check_conditions, solve_k_system, PrescribedFunction};
use prescribed_curvature::spectral::Grid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(32)?;
    for spec in [
        "4 + mono 0.3 x^2 + mono 0.6 y^2 + mono 1.05 z^2",
        "2 + mono 0.5 z",
        "2 - mono 1 z^2 + mono 0.05 x",
        "2 - mono 1 z^2",
    ] {
        let f: PrescribedFunction = spec.parse()?;
        let r = check_conditions(&f, &grid, 2);
        println!("f = {f}");
        println!("    mean {:.4}, max|f|/mean {:.4}, Morse: {}", r.mean_f, r.ratio, r.morse);
        if let Some(why) = &r.morse_failure {
            println!("    {why}");
            continue;
        }
        for p in &r.points {
            println!(
                "    x = [{:+.4}, {:+.4}, {:+.4}]  f = {:.4}  lap f = {:+.4}  index {}",
                p.location[0], p.location[1], p.location[2], p.value, p.laplacian, p.index
            );
        }
        println!("    m = {:?}, k-system {:?}, index sum {:?}", r.m, r.k_verdict, r.index_sum);
        println!(
            "    Morse-system criterion: {}, index-counting criterion: {}",
            r.flags.morse_system_criterion, r.flags.index_counting_criterion
        );
    }
    println!("k-system for m = (1, 2, 1): {:?}", solve_k_system(&[1, 2, 1]));
    Ok(())
}
