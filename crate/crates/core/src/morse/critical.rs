use serde::{Deserialize, Serialize};

use super::function::PrescribedFunction;
use crate::error::{Error, Result};
use crate::spectral::Grid;
use crate::sphere::{dot, geodesic_distance, norm, probe_grid, retract, Vec3};

/// Points closer than this (in radians) are the same critical point.
pub const MERGE_RADIUS: f64 = 1e-6;
/// Hessian eigenvalues below this in magnitude make a point degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Largest accepted `|∇f|` at a refined critical point.
pub const GRADIENT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: Vec3,
    pub value: f64,
    pub grad_norm: f64,
    pub laplacian: f64,
    /// Number of negative Hessian eigenvalues.
    pub index: usize,
    /// Tangent-Hessian eigenvalues, ascending.
    pub hessian_eigs: [f64; 2],
}

/// Refined critical points together with seeds that failed to converge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalSet {
    pub points: Vec<CriticalPoint>,
    pub warnings: Vec<String>,
}

fn sym_eigs(h: [[f64; 2]; 2]) -> [f64; 2] {
    let m = 0.5 * (h[0][0] + h[1][1]);
    let d = (0.25 * (h[0][0] - h[1][1]).powi(2) + h[0][1] * h[0][1]).sqrt();
    [m - d, m + d]
}

/// Levenberg–Marquardt on the tangential gradient, retracting onto S² after
/// every step.
fn refine(f: &PrescribedFunction, start: Vec3) -> (Vec3, f64) {
    let mut x = start;
    let mut mu = 1e-6;
    let mut jet = f.jet(x);
    let mut res = norm(jet.gradient);
    for _ in 0..200 {
        if res < 1e-14 {
            break;
        }
        let (e1, e2) = jet.frame;
        let g = [dot(jet.gradient, e1), dot(jet.gradient, e2)];
        let h = jet.hessian;
        // normal equations (HᵀH + μI) d = −Hᵀg, H symmetric
        let a11 = h[0][0] * h[0][0] + h[0][1] * h[0][1] + mu;
        let a12 = h[0][0] * h[0][1] + h[0][1] * h[1][1];
        let a22 = h[0][1] * h[0][1] + h[1][1] * h[1][1] + mu;
        let b1 = -(h[0][0] * g[0] + h[0][1] * g[1]);
        let b2 = -(h[0][1] * g[0] + h[1][1] * g[1]);
        let det = a11 * a22 - a12 * a12;
        let (mut d1, mut d2) = ((a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det);
        let len = (d1 * d1 + d2 * d2).sqrt();
        if !len.is_finite() {
            break;
        }
        if len > 0.3 {
            d1 *= 0.3 / len;
            d2 *= 0.3 / len;
        }
        let y = retract(x, e1, e2, d1, d2);
        let jy = f.jet(y);
        let ry = norm(jy.gradient);
        if ry < res {
            x = y;
            jet = jy;
            res = ry;
            mu = (mu / 3.0).max(1e-15);
        } else {
            mu *= 4.0;
            if mu > 1e12 {
                break;
            }
        }
    }
    (x, res)
}

fn classify(f: &PrescribedFunction, x: Vec3) -> Result<CriticalPoint> {
    let jet = f.jet(x);
    let eigs = sym_eigs(jet.hessian);
    if eigs.iter().any(|e| e.abs() < DEGENERACY_TOL) {
        return Err(Error::NotMorse(format!(
            "degenerate critical point at ({:.6}, {:.6}, {:.6}) with Hessian eigenvalues {:e}, {:e}",
            x[0], x[1], x[2], eigs[0], eigs[1]
        )));
    }
    Ok(CriticalPoint {
        location: x,
        value: jet.value,
        grad_norm: norm(jet.gradient),
        laplacian: jet.laplacian,
        index: eigs.iter().filter(|&&e| e < 0.0).count(),
        hessian_eigs: eigs,
    })
}

/// Seeds: local minima of `|∇f|²` on a `4L × 8L` probe grid, plus both poles.
fn seeds(f: &PrescribedFunction, l_max: usize) -> Vec<Vec3> {
    let (nt, np) = (4 * l_max, 8 * l_max);
    let probes = probe_grid(nt, np);
    let g: Vec<f64> = probes.iter().map(|&p| f.gradient_norm(p).powi(2)).collect();
    let mut out = vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]];
    for i in 0..nt {
        for j in 0..np {
            let k = i * np + j;
            let mut is_min = true;
            'nbr: for di in -1i64..=1 {
                let ii = i as i64 + di;
                if ii < 0 || ii >= nt as i64 {
                    continue;
                }
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let jj = (j as i64 + dj).rem_euclid(np as i64) as usize;
                    if g[ii as usize * np + jj] < g[k] {
                        is_min = false;
                        break 'nbr;
                    }
                }
            }
            if is_min {
                out.push(probes[k]);
            }
        }
    }
    out
}

/// Locates all critical points of `f` by Newton-type refinement from probe
/// seeds at a resolution tied to the grid's band limit. Output is sorted
/// lexicographically by location.
pub fn find_critical_points(f: &PrescribedFunction, grid: &Grid) -> Result<CriticalSet> {
    let mut points: Vec<CriticalPoint> = Vec::new();
    let mut warnings = Vec::new();
    for seed in seeds(f, grid.l_max()) {
        let (x, res) = refine(f, seed);
        if res > GRADIENT_TOL {
            // a probe minimum of |∇f| far from any zero is not a failure
            if res < 1e-4 {
                warnings.push(format!(
                    "refinement from ({:.4}, {:.4}, {:.4}) stalled at |grad f| = {res:e}",
                    seed[0], seed[1], seed[2]
                ));
            }
            continue;
        }
        if points.iter().any(|p| geodesic_distance(p.location, x) < MERGE_RADIUS) {
            continue;
        }
        points.push(classify(f, x)?);
    }
    if points.is_empty() {
        return Err(Error::NotMorse("no critical points were located".into()));
    }
    points.sort_by(|a, b| {
        a.location[0]
            .total_cmp(&b.location[0])
            .then(a.location[1].total_cmp(&b.location[1]))
            .then(a.location[2].total_cmp(&b.location[2]))
    });
    Ok(CriticalSet { points, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn crit(spec: &str) -> Result<CriticalSet> {
        let f: PrescribedFunction = spec.parse().unwrap();
        find_critical_points(&f, &Grid::new(8).unwrap())
    }

    #[test]
    fn height_function() {
        let s = crit("const 2 + mono 0.5 z").unwrap();
        assert_eq!(s.points.len(), 2);
        let (south, north) = (&s.points[0], &s.points[1]);
        assert!(north.location[2] > 0.99 && south.location[2] < -0.99);
        assert_eq!((north.index, south.index), (2, 0));
        assert!((north.laplacian + 1.0).abs() < 1e-12 && (south.laplacian - 1.0).abs() < 1e-12);
    }

    #[test]
    fn anisotropic_quadratic() {
        let s = crit("const 4 + mono 0.3 x^2 + mono 0.6 y^2 + mono 1.05 z^2").unwrap();
        assert_eq!(s.points.len(), 6);
        let c = 0.3;
        let a = [1.0, 2.0, 3.5];
        for p in &s.points {
            let axis = (0..3).max_by(|&i, &j| p.location[i].abs().total_cmp(&p.location[j].abs())).unwrap();
            assert_eq!(p.index, axis);
            let mut expect: Vec<f64> = (0..3).filter(|&j| j != axis).map(|j| 2.0 * c * (a[j] - a[axis])).collect();
            expect.sort_by(f64::total_cmp);
            assert!((p.hessian_eigs[0] - expect[0]).abs() < 1e-10);
            assert!((p.hessian_eigs[1] - expect[1]).abs() < 1e-10);
            assert!(p.grad_norm <= GRADIENT_TOL);
        }
    }

    #[test]
    fn constants_and_degenerate_circles_are_not_morse() {
        assert!(matches!(crit("const 3"), Err(Error::NotMorse(_))));
        assert!(matches!(crit("const 2 - mono 1 z^2"), Err(Error::NotMorse(_))));
    }
}
