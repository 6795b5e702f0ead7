use serde::{Deserialize, Serialize};

use crate::curvature::Constants;
use crate::error::{Error, Result};
use crate::spectral::{cap_means, BoundaryField};
use crate::sphere::{geodesic_distance, Vec3};

/// Cap radii probed by [`concentration_check`].
pub const CAP_RADII: [f64; 3] = [0.1, 0.2, 0.5];
/// Flagged nodes closer than this (radians) belong to the same cluster.
pub const CLUSTER_LINK: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub center: Vec3,
    pub nodes: usize,
    /// Cap fractions at the center for each radius in [`CAP_RADII`].
    pub cap_fractions: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub tau: f64,
    /// `τ^{−n}`: cap fraction needed at every radius to flag a node.
    pub threshold: f64,
    pub radii: [f64; 3],
    /// Largest cap fraction over nodes, per radius.
    pub max_cap_fraction: [f64; 3],
    /// `⨍ |H|^n dμ_g`, as a multiple of `ω_n`.
    pub total: f64,
    pub flagged_nodes: usize,
    pub clusters: Vec<Cluster>,
    pub uniqueness_warning: bool,
}

impl ConcentrationReport {
    pub fn concentrating(&self) -> bool {
        !self.clusters.is_empty()
    }
}

/// Per-node cap integrals of `|H|^n dμ_g` relative to `ω_n`. A node is flagged
/// when the fraction reaches `τ^{−n}` at every radius, i.e. when
/// `(∫_cap |H|^n dμ_g)^{1/n} ≥ ω_n^{1/n} / τ`. Requires `1 ≤ τ < 2^{1/n}`.
pub fn concentration_check(u: &BoundaryField, h: &BoundaryField, tau: f64) -> Result<ConcentrationReport> {
    let k = Constants::surface();
    let nf = k.nf();
    if !(1.0..2f64.powf(1.0 / nf)).contains(&tau) {
        return Err(Error::Domain(format!("tau = {tau} must lie in [1, 2^(1/n))")));
    }
    let density = u.zip_map(h, |uv, hv| hv.abs().powf(nf) * uv.abs().powf(k.two_sharp))?;
    let total = density.mean();
    let threshold = tau.powf(-nf);
    let fractions: Vec<Vec<f64>> = CAP_RADII.iter().map(|&r| cap_means(&density, r)).collect();
    let max_cap_fraction = [0, 1, 2].map(|i| fractions[i].iter().copied().fold(f64::NEG_INFINITY, f64::max));

    let points = u.grid().points();
    let flagged: Vec<usize> =
        (0..points.len()).filter(|&j| fractions.iter().all(|fr| fr[j] >= threshold)).collect();

    // single-linkage clustering of flagged nodes
    let mut label = vec![usize::MAX; flagged.len()];
    let mut n_clusters = 0;
    for start in 0..flagged.len() {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = n_clusters;
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            for b in 0..flagged.len() {
                if label[b] == usize::MAX
                    && geodesic_distance(points[flagged[a]], points[flagged[b]]) < CLUSTER_LINK
                {
                    label[b] = n_clusters;
                    stack.push(b);
                }
            }
        }
        n_clusters += 1;
    }
    let clusters: Vec<Cluster> = (0..n_clusters)
        .map(|c| {
            let members: Vec<usize> = (0..flagged.len()).filter(|&i| label[i] == c).map(|i| flagged[i]).collect();
            let best = *members
                .iter()
                .max_by(|&&a, &&b| fractions[0][a].total_cmp(&fractions[0][b]))
                .expect("clusters are nonempty");
            Cluster {
                center: points[best],
                nodes: members.len(),
                cap_fractions: [fractions[0][best], fractions[1][best], fractions[2][best]],
            }
        })
        .collect();
    Ok(ConcentrationReport {
        tau,
        threshold,
        radii: CAP_RADII,
        max_cap_fraction,
        total,
        flagged_nodes: flagged.len(),
        uniqueness_warning: clusters.len() >= 2,
        clusters,
    })
}
