//! Built-in numerical self-checks run by `pcflow selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conformal::{pullback_normalized, ConformalMap};
use crate::curvature::{volume, Constants};
use crate::error::Result;
use crate::spectral::{analyze, dtn_apply, synthesize, BoundaryField, Grid, SphCoeffs};
use crate::sphere::{norm, normalized, sub, Vec3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestRow {
    pub name: String,
    pub passed: bool,
    /// Worst observed error (or, for inequalities, worst slack deficit).
    pub worst: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub l_max: usize,
    pub rows: Vec<SelftestRow>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelftestOptions {
    /// Runs at `L = 8` with fewer samples.
    pub quick: bool,
    /// Scales the DtN output by this factor (negative control when ≠ 1).
    pub dtn_factor: f64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions { quick: false, dtn_factor: 1.0 }
    }
}

fn row(name: &str, worst: f64, tolerance: f64) -> SelftestRow {
    SelftestRow { name: name.into(), passed: worst <= tolerance, worst, tolerance }
}

fn random_point(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        if let Some(p) = normalized(v).filter(|_| norm(v) <= 1.0) {
            return p;
        }
    }
}

/// Random positive band-limited field `1 + Σ small coefficients` of degree ≤ `deg`.
fn random_positive(grid: &std::sync::Arc<Grid>, rng: &mut ChaCha8Rng, deg: usize) -> BoundaryField {
    let mut c = SphCoeffs::zeros(grid.l_max());
    c.set(0, 0, 1.0);
    for l in 1..=deg {
        for m in -(l as i64)..=l as i64 {
            c.set(l, m, rng.gen_range(-0.3..0.3) / (l * l) as f64);
        }
    }
    BoundaryField::from_coeffs(grid, &c)
}

/// Runs the DtN exactness, Parseval, trace-inequality, conformal group-law
/// and volume-invariance suites.
pub fn run_selftest(opts: SelftestOptions) -> Result<SelftestReport> {
    let l_max = if opts.quick { 8 } else { 31 };
    let samples = if opts.quick { 20 } else { 100 };
    let grid = Grid::new(l_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let dtn = |c: &SphCoeffs| dtn_apply(c).scale_by_degree(|_| opts.dtn_factor);
    let mut rows = Vec::new();

    // DtN on every unit harmonic after a synthesis/analysis round trip
    let mut worst = 0.0f64;
    for l in 0..=l_max {
        for m in -(l as i64)..=l as i64 {
            let unit = SphCoeffs::unit(l_max, l, m);
            let back = analyze(&synthesize(&unit, &grid), &grid)?;
            let got = dtn(&back).get(l, m);
            worst = worst.max(if l == 0 { got.abs() } else { (got - l as f64).abs() / l as f64 });
        }
    }
    rows.push(row("dtn_exactness", worst, 1e-10));

    // ⨍u² by quadrature against Σ c²
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let u = random_positive(&grid, &mut rng, l_max / 2);
        let quad = grid.mean_of(&u.values().iter().map(|v| v * v).collect::<Vec<_>>());
        worst = worst.max((quad - u.coeffs().norm_sq()).abs() / quad);
    }
    rows.push(row("parseval", worst, 1e-12));

    // E[u] = ⨍ (a_n u ∂_η u + u²) ≥ (⨍ u^{2#})^{2/2#}
    let k = Constants::surface();
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let u = random_positive(&grid, &mut rng, l_max);
        let energy = k.a_n * u.coeffs().dot(&dtn(u.coeffs())) + u.coeffs().norm_sq();
        let bound = volume(&u).powf(2.0 / k.two_sharp);
        worst = worst.max(bound - energy);
    }
    rows.push(row("trace_inequality", worst, 1e-10));

    // φ_{p,a} ∘ φ_{p,b} = φ_{p,ab}
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let p = random_point(&mut rng);
        let (a, b) = (rng.gen_range(0.3..3.0), rng.gen_range(0.3..3.0));
        let (ma, mb, mab) = (ConformalMap::new(p, a)?, ConformalMap::new(p, b)?, ConformalMap::new(p, a * b)?);
        for _ in 0..100 {
            let x = random_point(&mut rng);
            worst = worst.max(norm(sub(ma.apply(mb.apply(x)), mab.apply(x))));
        }
    }
    rows.push(row("group_law", worst, 1e-10));

    // ⨍ v^{2#} = ⨍ u^{2#} for the pullback by a random map
    let mut worst = 0.0f64;
    let vol_grid = Grid::new(31)?;
    for _ in 0..if opts.quick { 3 } else { 10 } {
        let u = random_positive(&vol_grid, &mut rng, 4);
        let map = ConformalMap::new(random_point(&mut rng), rng.gen_range(0.6..1.6))?;
        let v = pullback_normalized(&u, &map)?;
        worst = worst.max((volume(&v) - volume(&u)).abs() / volume(&u));
    }
    rows.push(row("volume_invariance", worst, 1e-7));

    Ok(SelftestReport { l_max, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_selftest_passes() {
        let r = run_selftest(SelftestOptions { quick: true, ..Default::default() }).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn corrupted_dtn_is_caught() {
        let r = run_selftest(SelftestOptions { quick: true, dtn_factor: 1.001 }).unwrap();
        assert!(!r.passed());
        assert!(!r.rows[0].passed);
    }
}
