use serde::{Deserialize, Serialize};

use super::critical::{find_critical_points, CriticalPoint, DEGENERACY_TOL};
use super::function::PrescribedFunction;
use super::symmetry::SymmetryReport;
use crate::error::Error;
use crate::spectral::Grid;

/// `m_i` = number of critical points with `f > 0`, `Δf < 0` and Morse index
/// `n − i`, for `i = 0..=n`.
pub fn counts_mi(points: &[CriticalPoint], n: usize) -> Vec<usize> {
    let mut m = vec![0; n + 1];
    for p in counted(points) {
        if p.index <= n {
            m[n - p.index] += 1;
        }
    }
    m
}

fn counted(points: &[CriticalPoint]) -> impl Iterator<Item = &CriticalPoint> {
    points.iter().filter(|p| p.value > 0.0 && p.laplacian < 0.0)
}

/// Outcome of the system `m₀ = 1 + k₀`, `m_i = k_{i−1} + k_i`, `k_n = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum KVerdict {
    Solvable { k: Vec<i64> },
    Unsolvable { k: Vec<i64>, reason: String },
}

impl KVerdict {
    pub fn is_solvable(&self) -> bool {
        matches!(self, KVerdict::Solvable { .. })
    }
}

/// Solves the system by forward recursion; the candidate is unique, so the
/// system has a nonnegative solution exactly when the candidate is one.
pub fn solve_k_system(m: &[usize]) -> KVerdict {
    let mut k = Vec::with_capacity(m.len());
    let mut prev = 0i64;
    for (i, &mi) in m.iter().enumerate() {
        let ki = if i == 0 { mi as i64 - 1 } else { mi as i64 - prev };
        k.push(ki);
        prev = ki;
    }
    if let Some(i) = k.iter().position(|&v| v < 0) {
        let reason = format!("k_{i} = {} is negative", k[i]);
        return KVerdict::Unsolvable { k, reason };
    }
    match k.last() {
        Some(&last) if last != 0 => {
            let reason = format!("k_{} = {last} is not zero", k.len() - 1);
            KVerdict::Unsolvable { k, reason }
        }
        _ => KVerdict::Solvable { k },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexCount {
    pub sum: i64,
    /// Whether `sum ≠ (−1)^n`.
    pub holds: bool,
}

/// `Σ (−1)^{ind}` over critical points with `f > 0` and `Δf < 0`.
pub fn index_count(points: &[CriticalPoint], n: usize) -> IndexCount {
    let sum = counted(points).map(|p| if p.index % 2 == 0 { 1 } else { -1 }).sum();
    let target = if n % 2 == 0 { 1 } else { -1 };
    IndexCount { sum, holds: sum != target }
}

/// Hypothesis flags. `None` means the flag could not be evaluated because `f`
/// is not Morse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionFlags {
    /// `⨍ f > 0`
    pub positive_mean: bool,
    /// `max|f| / ⨍f < 2^{1/n}`
    pub simple_bubble: bool,
    /// `|∇f|² + (Δf)² ≠ 0` everywhere
    pub nondegenerate: Option<bool>,
    /// The k-system has no nonnegative solution.
    pub morse_system_unsolvable: Option<bool>,
    pub index_counting: Option<bool>,
    /// Positive mean, simple bubble, nondegeneracy and an unsolvable k-system.
    pub morse_system_criterion: bool,
    /// Positive mean, simple bubble, nondegeneracy and the index count.
    pub index_counting_criterion: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorseReport {
    pub function: String,
    pub n: usize,
    pub mean_f: f64,
    pub max_f: f64,
    pub min_f: f64,
    pub max_abs_f: f64,
    pub ratio: f64,
    pub morse: bool,
    pub morse_failure: Option<String>,
    pub points: Vec<CriticalPoint>,
    pub m: Vec<usize>,
    pub k_verdict: Option<KVerdict>,
    pub index_sum: Option<i64>,
    pub flags: ConditionFlags,
    pub warnings: Vec<String>,
    pub symmetry: Option<SymmetryReport>,
}

/// Evaluates every hypothesis on `f`; a non-Morse `f` is recorded in the
/// report rather than returned as an error.
pub fn check_conditions(f: &PrescribedFunction, grid: &Grid, n: usize) -> MorseReport {
    let mean_f = grid.mean_of(&grid.points().iter().map(|&p| f.value(p)).collect::<Vec<_>>());
    let (max_f, min_f) = f.extrema(grid.l_max().max(16));
    let max_abs_f = max_f.abs().max(min_f.abs());
    let ratio = if mean_f > 0.0 { max_abs_f / mean_f } else { f64::INFINITY };
    let positive_mean = mean_f > 0.0;
    let simple_bubble = positive_mean && ratio < 2f64.powf(1.0 / n as f64);

    let (points, warnings, failure) = match find_critical_points(f, grid) {
        Ok(set) => (set.points, set.warnings, None),
        Err(Error::NotMorse(msg)) => (Vec::new(), Vec::new(), Some(msg)),
        Err(e) => (Vec::new(), Vec::new(), Some(e.to_string())),
    };
    let morse = failure.is_none();
    let (m, k_verdict, index, nondegenerate) = if morse {
        let m = counts_mi(&points, n);
        let k = solve_k_system(&m);
        let ic = index_count(&points, n);
        let nd = points.iter().all(|p| p.laplacian.abs() > DEGENERACY_TOL);
        (m, Some(k), Some(ic), Some(nd))
    } else {
        (Vec::new(), None, None, None)
    };
    let unsolvable = k_verdict.as_ref().map(|k| !k.is_solvable());
    let index_holds = index.map(|i| i.holds);
    let base = positive_mean && simple_bubble && nondegenerate == Some(true);
    let flags = ConditionFlags {
        positive_mean,
        simple_bubble,
        nondegenerate,
        morse_system_unsolvable: unsolvable,
        index_counting: index_holds,
        morse_system_criterion: base && unsolvable == Some(true),
        index_counting_criterion: base && index_holds == Some(true),
    };
    MorseReport {
        function: f.to_string(),
        n,
        mean_f,
        max_f,
        min_f,
        max_abs_f,
        ratio,
        morse,
        morse_failure: failure,
        points,
        m,
        k_verdict,
        index_sum: index.map(|i| i.sum),
        flags,
        warnings,
        symmetry: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(spec: &str) -> MorseReport {
        check_conditions(&spec.parse().unwrap(), &Grid::new(16).unwrap(), 2)
    }

    #[test]
    fn k_system_examples() {
        assert_eq!(solve_k_system(&[1, 0, 0]), KVerdict::Solvable { k: vec![0, 0, 0] });
        assert!(!solve_k_system(&[2, 0, 0]).is_solvable());
        match solve_k_system(&[1, 1, 0]) {
            KVerdict::Unsolvable { k, .. } => assert_eq!(k, vec![0, 1, -1]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn index_count_examples() {
        let pt = |index: usize| CriticalPoint {
            location: [0.0, 0.0, 1.0],
            value: 1.0,
            grad_norm: 0.0,
            laplacian: -1.0,
            index,
            hessian_eigs: [-1.0, -1.0],
        };
        assert_eq!(index_count(&[pt(2)], 2), IndexCount { sum: 1, holds: false });
        assert_eq!(index_count(&[pt(2), pt(2)], 2), IndexCount { sum: 2, holds: true });
        assert_eq!(index_count(&[pt(2), pt(2), pt(1)], 2), IndexCount { sum: 1, holds: false });
    }

    #[test]
    fn anisotropic_quadratic_satisfies_everything() {
        let r = report("const 4 + mono 0.3 x^2 + mono 0.6 y^2 + mono 1.05 z^2");
        assert!((r.mean_f - 4.65).abs() < 1e-12);
        assert!((r.max_abs_f - 5.05).abs() < 1e-10);
        assert_eq!(r.points.len(), 6);
        assert_eq!(r.m, vec![2, 0, 0]);
        assert_eq!(r.index_sum, Some(2));
        assert!(r.flags.morse_system_criterion && r.flags.index_counting_criterion);
    }

    #[test]
    fn height_function_fails_the_k_system() {
        let r = report("const 2 + mono 0.5 z");
        assert_eq!(r.m, vec![1, 0, 0]);
        assert_eq!(r.k_verdict, Some(KVerdict::Solvable { k: vec![0, 0, 0] }));
        assert!(r.flags.positive_mean && r.flags.simple_bubble);
        assert_eq!(r.flags.nondegenerate, Some(true));
        assert!(!r.flags.morse_system_criterion);
    }

    #[test]
    fn tilted_polar_function_counts() {
        // critical points (±1, 0, 0) and (−0.025, 0, ±0.99969)
        let r = report("const 2 - mono 1 z^2 + mono 0.05 x");
        assert_eq!(r.points.len(), 4);
        assert_eq!(r.m, vec![1, 1, 0]);
        assert!(!r.k_verdict.unwrap().is_solvable());
        assert_eq!(r.index_sum, Some(0));
    }

    #[test]
    fn sign_changing_bump_function() {
        let r = report("const 1.34 - 1.36 * bump 8 @ 0,0,-1");
        let mean = 1.34 - 1.36 * (1.0 - (-16.0f64).exp()) / 16.0;
        assert!((r.mean_f - mean).abs() < 1e-10);
        assert!(r.min_f < 0.0);
        assert!(r.flags.positive_mean && r.flags.simple_bubble);
    }

    #[test]
    fn degenerate_function_is_reported_not_raised() {
        let r = report("const 2 - mono 1 z^2");
        assert!(!r.morse && r.morse_failure.is_some());
        assert!(!r.flags.morse_system_criterion);
    }
}
