//! Explicit time stepping of `∂_t u = −((n−1)/4)(H − λf) u` with volume
//! projection, run classification, trajectory recording and identity checks.

mod config;
mod identities;
mod path;
mod run;
mod state;

pub use config::FlowConfig;
pub use identities::{check_identities, IdentityReport};
pub use path::{default_zeta, interpolation_path};
pub use run::{run, RunFailure, Trajectory, TrajectoryRow, Verdict};
pub use state::{init_state, step, FlowState};
