use std::f64::consts::PI;
use std::sync::Arc;

use super::legendre::{gauss_legendre, normalized_plm, normalized_plm_dtheta, packed_len};
use crate::error::{Error, Result};

/// Smallest band limit accepted by [`Grid::new`].
pub const MIN_DEGREE: usize = 4;

/// Gauss–Legendre × uniform-longitude grid on S² with cached transform tables.
///
/// Nodes are stored ring by ring: node `ring * n_lon + j` sits at colatitude
/// `acos(colat_nodes[ring])` and longitude `2πj / n_lon`.
#[derive(Debug)]
pub struct Grid {
    l_max: usize,
    colat_nodes: Vec<f64>,
    colat_sines: Vec<f64>,
    colat_weights: Vec<f64>,
    n_lon: usize,
    points: Vec<[f64; 3]>,
    mean_weights: Vec<f64>,
    plm: Vec<f64>,
    dplm: Vec<f64>,
    cos_table: Vec<f64>,
    sin_table: Vec<f64>,
}

impl Grid {
    /// Builds the grid for band limit `l_max`, with `l_max + 1` rings and
    /// `2 l_max + 2` longitudes.
    pub fn new(l_max: usize) -> Result<Arc<Grid>> {
        if l_max < MIN_DEGREE {
            return Err(Error::Config(format!(
                "band limit L = {l_max} is below the minimum {MIN_DEGREE}"
            )));
        }
        let n_lat = l_max + 1;
        let n_lon = 2 * l_max + 2;
        let (colat_nodes, colat_weights) = gauss_legendre(n_lat);
        let colat_sines: Vec<f64> = colat_nodes.iter().map(|x| (1.0 - x * x).sqrt()).collect();

        let np = packed_len(l_max);
        let mut plm = vec![0.0; n_lat * np];
        let mut dplm = vec![0.0; n_lat * np];
        for i in 0..n_lat {
            let (x, s) = (colat_nodes[i], colat_sines[i]);
            let (row, drow) = (&mut plm[i * np..(i + 1) * np], &mut dplm[i * np..(i + 1) * np]);
            normalized_plm(l_max, x, s, row);
            normalized_plm_dtheta(l_max, x, s, row, drow);
        }

        let mut cos_table = vec![0.0; (l_max + 1) * n_lon];
        let mut sin_table = vec![0.0; (l_max + 1) * n_lon];
        for m in 0..=l_max {
            for j in 0..n_lon {
                // reduce the angle modulo 2π exactly through the integer product
                let k = (m * j) % n_lon;
                let ang = 2.0 * PI * k as f64 / n_lon as f64;
                cos_table[m * n_lon + j] = ang.cos();
                sin_table[m * n_lon + j] = ang.sin();
            }
        }

        let mut points = Vec::with_capacity(n_lat * n_lon);
        let mut mean_weights = Vec::with_capacity(n_lat * n_lon);
        for i in 0..n_lat {
            for j in 0..n_lon {
                let (c, s) = (cos_table[n_lon + j], sin_table[n_lon + j]);
                points.push([colat_sines[i] * c, colat_sines[i] * s, colat_nodes[i]]);
                mean_weights.push(colat_weights[i] / (2.0 * n_lon as f64));
            }
        }

        Ok(Arc::new(Grid {
            l_max,
            colat_nodes,
            colat_sines,
            colat_weights,
            n_lon,
            points,
            mean_weights,
            plm,
            dplm,
            cos_table,
            sin_table,
        }))
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn n_lat(&self) -> usize {
        self.colat_nodes.len()
    }

    pub fn n_lon(&self) -> usize {
        self.n_lon
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Gauss–Legendre nodes in `cos θ`, north to south.
    pub fn colat_nodes(&self) -> &[f64] {
        &self.colat_nodes
    }

    pub fn colat_weights(&self) -> &[f64] {
        &self.colat_weights
    }

    pub(crate) fn colat_sines(&self) -> &[f64] {
        &self.colat_sines
    }

    /// Unit vectors of all nodes.
    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    /// Quadrature weights for the mean `⨍`; they sum to one.
    pub fn mean_weights(&self) -> &[f64] {
        &self.mean_weights
    }

    /// Quadrature mean of nodal values.
    pub fn mean_of(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        values.iter().zip(&self.mean_weights).map(|(v, w)| v * w).sum()
    }

    pub(crate) fn plm_row(&self, ring: usize) -> &[f64] {
        let np = packed_len(self.l_max);
        &self.plm[ring * np..(ring + 1) * np]
    }

    pub(crate) fn dplm_row(&self, ring: usize) -> &[f64] {
        let np = packed_len(self.l_max);
        &self.dplm[ring * np..(ring + 1) * np]
    }

    pub(crate) fn cos_row(&self, m: usize) -> &[f64] {
        &self.cos_table[m * self.n_lon..(m + 1) * self.n_lon]
    }

    pub(crate) fn sin_row(&self, m: usize) -> &[f64] {
        &self.sin_table[m * self.n_lon..(m + 1) * self.n_lon]
    }
}
