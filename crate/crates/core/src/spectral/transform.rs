use super::coeffs::SphCoeffs;
use super::grid::Grid;
use super::legendre::{normalized_plm, packed, packed_len};
use crate::error::{Error, Result};

/// Forward transform of nodal values to coefficients up to the grid band limit.
pub fn analyze(values: &[f64], grid: &Grid) -> Result<SphCoeffs> {
    if values.len() != grid.len() {
        return Err(Error::Dimension { expected: grid.len(), got: values.len() });
    }
    let l_max = grid.l_max();
    let n_lon = grid.n_lon();
    let mut out = SphCoeffs::zeros(l_max);
    let mut cos_part = vec![0.0; l_max + 1];
    let mut sin_part = vec![0.0; l_max + 1];
    for ring in 0..grid.n_lat() {
        let row = &values[ring * n_lon..(ring + 1) * n_lon];
        for m in 0..=l_max {
            let (ct, st) = (grid.cos_row(m), grid.sin_row(m));
            let mut a = 0.0;
            let mut b = 0.0;
            for j in 0..n_lon {
                a += row[j] * ct[j];
                b += row[j] * st[j];
            }
            cos_part[m] = a / n_lon as f64;
            sin_part[m] = b / n_lon as f64;
        }
        let half_w = 0.5 * grid.colat_weights()[ring];
        let plm = grid.plm_row(ring);
        let data = out.as_mut_slice();
        for m in 0..=l_max {
            let (a, b) = (half_w * cos_part[m], half_w * sin_part[m]);
            for l in m..=l_max {
                let p = plm[packed(l, m)];
                data[l * l + l + m] += p * a;
                if m > 0 {
                    data[l * l + l - m] += p * b;
                }
            }
        }
    }
    Ok(out)
}

/// Inverse transform onto the grid nodes. Degrees above the grid band limit
/// are dropped.
pub fn synthesize(coeffs: &SphCoeffs, grid: &Grid) -> Vec<f64> {
    assemble(grid, coeffs, Table::Values, false)
}

/// `∂f/∂θ` at the grid nodes.
pub fn synthesize_dtheta(coeffs: &SphCoeffs, grid: &Grid) -> Vec<f64> {
    assemble(grid, coeffs, Table::Dtheta, false)
}

/// `∂f/∂φ` at the grid nodes.
pub fn synthesize_dphi(coeffs: &SphCoeffs, grid: &Grid) -> Vec<f64> {
    assemble(grid, coeffs, Table::Values, true)
}

#[derive(Clone, Copy)]
enum Table {
    Values,
    Dtheta,
}

fn assemble(grid: &Grid, coeffs: &SphCoeffs, table: Table, dphi: bool) -> Vec<f64> {
    let l_max = grid.l_max();
    let l_top = coeffs.l_max().min(l_max);
    let n_lon = grid.n_lon();
    let data = coeffs.as_slice();
    let mut out = vec![0.0; grid.len()];
    let mut cos_amp = vec![0.0; l_top + 1];
    let mut sin_amp = vec![0.0; l_top + 1];
    for ring in 0..grid.n_lat() {
        let rowtab = match table {
            Table::Values => grid.plm_row(ring),
            Table::Dtheta => grid.dplm_row(ring),
        };
        for m in 0..=l_top {
            let mut a = 0.0;
            let mut b = 0.0;
            for l in m..=l_top {
                let p = rowtab[packed(l, m)];
                a += data[l * l + l + m] * p;
                if m > 0 {
                    b += data[l * l + l - m] * p;
                }
            }
            cos_amp[m] = a;
            sin_amp[m] = b;
        }
        let row = &mut out[ring * n_lon..(ring + 1) * n_lon];
        for m in 0..=l_top {
            let (ct, st) = (grid.cos_row(m), grid.sin_row(m));
            let (a, b) = if dphi {
                // d/dφ of a cos + b sin is m (b cos − a sin)
                (m as f64 * sin_amp[m], -(m as f64) * cos_amp[m])
            } else {
                (cos_amp[m], sin_amp[m])
            };
            if a == 0.0 && b == 0.0 {
                continue;
            }
            for j in 0..n_lon {
                row[j] += a * ct[j] + b * st[j];
            }
        }
    }
    out
}

/// Evaluates the expansion at an arbitrary point of the unit sphere. The
/// point is normalized first.
pub fn evaluate_at(coeffs: &SphCoeffs, point: [f64; 3]) -> f64 {
    let mut scratch = vec![0.0; packed_len(coeffs.l_max())];
    evaluate_with(coeffs, point, &mut scratch)
}

/// Evaluates the expansion at many points, reusing one Legendre buffer.
pub fn evaluate_many(coeffs: &SphCoeffs, points: &[[f64; 3]]) -> Vec<f64> {
    let mut scratch = vec![0.0; packed_len(coeffs.l_max())];
    points.iter().map(|&p| evaluate_with(coeffs, p, &mut scratch)).collect()
}

fn evaluate_with(coeffs: &SphCoeffs, point: [f64; 3], plm: &mut [f64]) -> f64 {
    let l_max = coeffs.l_max();
    let r = (point[0] * point[0] + point[1] * point[1] + point[2] * point[2]).sqrt();
    let (x, y, z) = (point[0] / r, point[1] / r, point[2] / r);
    let s = (x * x + y * y).sqrt();
    normalized_plm(l_max, z, s, plm);
    let (c1, s1) = if s > 0.0 { (x / s, y / s) } else { (1.0, 0.0) };
    let data = coeffs.as_slice();
    let (mut cm, mut sm) = (1.0, 0.0);
    let mut total = 0.0;
    for m in 0..=l_max {
        let mut a = 0.0;
        let mut b = 0.0;
        for l in m..=l_max {
            let p = plm[packed(l, m)];
            a += data[l * l + l + m] * p;
            if m > 0 {
                b += data[l * l + l - m] * p;
            }
        }
        total += a * cm + b * sm;
        let next_c = cm * c1 - sm * s1;
        sm = sm * c1 + cm * s1;
        cm = next_c;
    }
    total
}
