use serde::{Deserialize, Serialize};

/// Real spherical-harmonic coefficients up to degree `l_max`.
///
/// Entry `(l, m)` with `-l <= m <= l` lives at `l² + l + m`. Non-negative `m`
/// pairs with `cos(mφ)`, negative `m` with `sin(|m|φ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphCoeffs {
    l_max: usize,
    data: Vec<f64>,
}

impl SphCoeffs {
    pub fn zeros(l_max: usize) -> Self {
        SphCoeffs { l_max, data: vec![0.0; (l_max + 1) * (l_max + 1)] }
    }

    /// Coefficient vector with a single unit entry.
    pub fn unit(l_max: usize, l: usize, m: i64) -> Self {
        let mut c = Self::zeros(l_max);
        c.set(l, m, 1.0);
        c
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn get(&self, l: usize, m: i64) -> f64 {
        if l > self.l_max {
            return 0.0;
        }
        self.data[slot(l, m)]
    }

    pub fn set(&mut self, l: usize, m: i64, value: f64) {
        assert!(l <= self.l_max, "degree {l} exceeds band limit {}", self.l_max);
        self.data[slot(l, m)] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Multiplies every degree-`l` coefficient by `factor(l)`.
    pub fn scale_by_degree(&self, factor: impl Fn(usize) -> f64) -> Self {
        let mut out = self.clone();
        for l in 0..=self.l_max {
            let f = factor(l);
            let base = l * l;
            for k in 0..(2 * l + 1) {
                out.data[base + k] *= f;
            }
        }
        out
    }

    /// `Σ c²`, which is the mean square of the synthesized field.
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|c| c * c).sum()
    }

    /// `Σ c·d` over the common band.
    pub fn dot(&self, other: &SphCoeffs) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    /// Copy truncated or zero-padded to band limit `l_max`.
    pub fn resized(&self, l_max: usize) -> Self {
        let mut out = Self::zeros(l_max);
        let n = out.data.len().min(self.data.len());
        out.data[..n].copy_from_slice(&self.data[..n]);
        out
    }

    /// Largest degree carrying a coefficient above `tol` in magnitude.
    pub fn effective_degree(&self, tol: f64) -> usize {
        (0..=self.l_max)
            .rev()
            .find(|&l| (l * l..(l + 1) * (l + 1)).any(|k| self.data[k].abs() > tol))
            .unwrap_or(0)
    }
}

#[inline]
fn slot(l: usize, m: i64) -> usize {
    debug_assert!(m.unsigned_abs() as usize <= l);
    ((l * l + l) as i64 + m) as usize
}
