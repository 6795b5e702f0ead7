//! Critical-point analysis of closed-form prescribed functions and the Morse,
//! index-counting and symmetry hypotheses built on it.

mod conditions;
mod critical;
mod function;
mod parse;
mod symmetry;

pub use conditions::{
    check_conditions, counts_mi, index_count, solve_k_system, ConditionFlags, IndexCount, KVerdict,
    MorseReport,
};
pub use critical::{
    find_critical_points, CriticalPoint, CriticalSet, DEGENERACY_TOL, GRADIENT_TOL, MERGE_RADIUS,
};
pub use function::{LocalJet, PrescribedFunction, Term};
pub use symmetry::{check_symmetry, Symmetry, SymmetryReport, INVARIANCE_TOL};
