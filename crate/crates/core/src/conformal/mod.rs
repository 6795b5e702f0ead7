//! Boundary Möbius maps, bubbles, the normalized (balanced) pullback and
//! concentration diagnostics.

mod bubble;
mod concentration;
mod map;
mod normalize;

pub use bubble::{
    bubble, bubble_cap_fraction, bubble_resolution, bubble_value, center_of_mass, pullback_normalized,
    CenterOfMass,
};
pub use concentration::{concentration_check, Cluster, ConcentrationReport, CAP_RADII, CLUSTER_LINK};
pub use map::{boundary_map, conformal_factor, ConformalMap};
pub use normalize::{normalize, NormalizedState, NORMALIZATION_TOL};
