use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::function::PrescribedFunction;
use crate::error::{Error, Result};
use crate::spectral::Grid;
use crate::sphere::{add, normalized, reflect, rotate, scale, tangent_frame, Vec3};

/// Largest nodal deviation `|f∘θ − f|` accepted as invariance.
pub const INVARIANCE_TOL: f64 = 1e-8;

/// A single symmetry generator of S².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Symmetry {
    /// Reflection in the plane orthogonal to `normal`; fixes a great circle.
    Mirror { normal: Vec3 },
    /// Rotation by `2π / order` about `axis`; fixes the two poles of `axis`.
    Rotation { axis: Vec3, order: u32 },
}

impl Symmetry {
    pub fn apply(&self, x: Vec3) -> Vec3 {
        match *self {
            Symmetry::Mirror { normal } => reflect(x, normal),
            Symmetry::Rotation { axis, order } => rotate(x, axis, 2.0 * PI / order as f64),
        }
    }
}

fn parse_axis(word: &str) -> Result<Vec3> {
    let v = match word.to_ascii_lowercase().as_str() {
        "x" => [1.0, 0.0, 0.0],
        "y" => [0.0, 1.0, 0.0],
        "z" => [0.0, 0.0, 1.0],
        other => {
            let parts: Vec<f64> = other
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Input(format!("axis '{word}' is neither x, y, z nor X,Y,Z")))?;
            if parts.len() != 3 {
                return Err(Error::Input(format!("axis '{word}' needs three components")));
            }
            [parts[0], parts[1], parts[2]]
        }
    };
    normalized(v).ok_or_else(|| Error::Input("symmetry axis must be nonzero".into()))
}

impl FromStr for Symmetry {
    type Err = Error;

    /// `mirror AXIS` or `rotation AXIS K`, where `AXIS` is `x`, `y`, `z` or
    /// `X,Y,Z`.
    fn from_str(s: &str) -> Result<Self> {
        let words: Vec<&str> = s.split_whitespace().collect();
        match words.as_slice() {
            ["mirror", axis] => Ok(Symmetry::Mirror { normal: parse_axis(axis)? }),
            ["rotation", axis, k] => {
                let order: u32 =
                    k.parse().map_err(|_| Error::Input(format!("rotation order '{k}' is not an integer")))?;
                if order < 2 {
                    return Err(Error::Input("rotation order must be at least 2".into()));
                }
                Ok(Symmetry::Rotation { axis: parse_axis(axis)?, order })
            }
            _ => Err(Error::Input(format!(
                "unknown symmetry '{s}'; expected 'mirror AXIS' or 'rotation AXIS K'"
            ))),
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symmetry::Mirror { normal: a } => write!(out, "mirror {},{},{}", a[0], a[1], a[2]),
            Symmetry::Rotation { axis: a, order } => {
                write!(out, "rotation {},{},{} {order}", a[0], a[1], a[2])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub symmetry: Symmetry,
    pub invariant: bool,
    pub max_deviation: f64,
    /// `"great_circle"` or `"poles"`.
    pub fixed_set: String,
    pub max_on_fixed_set: f64,
    /// Points of the fixed set where the maximum is attained (at most 16).
    pub argmax: Vec<Vec3>,
    pub laplacian_at_argmax: Vec<f64>,
    pub mean_f: f64,
    /// `max_Σ f ≤ ⨍ f`.
    pub fixed_max_below_mean: bool,
    /// Some maximizer `y` on the fixed set has `Δf(y) > 0`.
    pub positive_laplacian_at_fixed_max: bool,
    /// Positive mean, simple bubble, invariance and `max_Σ f ≤ ⨍ f`.
    pub fixed_set_below_mean_criterion: bool,
    /// Positive mean, simple bubble, invariance and a maximizer on the fixed
    /// set with `Δf > 0`.
    pub fixed_set_maximum_criterion: bool,
}

/// Maxima of `f` on the fixed set of `sym`, as (value, maximizers).
fn fixed_set_maxima(f: &PrescribedFunction, sym: &Symmetry) -> (f64, Vec<Vec3>) {
    match *sym {
        Symmetry::Rotation { axis, .. } => {
            let cands = [axis, scale(axis, -1.0)];
            let vals = cands.map(|p| f.value(p));
            let best = vals[0].max(vals[1]);
            let arg = cands.iter().zip(vals).filter(|(_, v)| *v >= best - 1e-12).map(|(p, _)| *p).collect();
            (best, arg)
        }
        Symmetry::Mirror { normal } => {
            let (e1, e2) = tangent_frame(normal);
            let at = |t: f64| add(scale(e1, t.cos()), scale(e2, t.sin()));
            let n = 4096;
            let h = 2.0 * PI / n as f64;
            let vals: Vec<f64> = (0..n).map(|k| f.value(at(k as f64 * h))).collect();
            let mut peaks: Vec<(f64, f64)> = Vec::new();
            for k in 0..n {
                let (l, r) = (vals[(k + n - 1) % n], vals[(k + 1) % n]);
                if vals[k] >= l && vals[k] >= r {
                    let t = golden_max(|t| f.value(at(t)), k as f64 * h - h, k as f64 * h + h);
                    peaks.push((t, f.value(at(t))));
                }
            }
            let best = peaks.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
            let arg: Vec<Vec3> =
                peaks.iter().filter(|p| p.1 >= best - 1e-9).take(16).map(|p| at(p.0)).collect();
            (best, arg)
        }
    }
}

fn golden_max(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while b - a > 1e-12 {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    0.5 * (a + b)
}

/// Checks invariance of `f` under `sym` on the grid nodes and evaluates the
/// fixed-set hypotheses.
pub fn check_symmetry(f: &PrescribedFunction, sym: &Symmetry, grid: &Grid, n: usize) -> SymmetryReport {
    let max_deviation = grid
        .points()
        .iter()
        .map(|&p| (f.value(sym.apply(p)) - f.value(p)).abs())
        .fold(0.0, f64::max);
    let invariant = max_deviation <= INVARIANCE_TOL;
    let mean_f = grid.mean_of(&grid.points().iter().map(|&p| f.value(p)).collect::<Vec<_>>());
    let (max_f, min_f) = f.extrema(grid.l_max().max(16));
    let max_abs = max_f.abs().max(min_f.abs());
    let base = mean_f > 0.0 && max_abs / mean_f < 2f64.powf(1.0 / n as f64) && invariant;
    let (max_on_fixed_set, argmax) = fixed_set_maxima(f, sym);
    let laplacian_at_argmax: Vec<f64> = argmax.iter().map(|&y| f.laplacian(y)).collect();
    let fixed_max_below_mean = max_on_fixed_set <= mean_f;
    let positive_laplacian_at_fixed_max = laplacian_at_argmax.iter().any(|&l| l > 0.0);
    SymmetryReport {
        symmetry: *sym,
        invariant,
        max_deviation,
        fixed_set: match sym {
            Symmetry::Mirror { .. } => "great_circle".into(),
            Symmetry::Rotation { .. } => "poles".into(),
        },
        max_on_fixed_set,
        argmax,
        laplacian_at_argmax,
        mean_f,
        fixed_max_below_mean,
        positive_laplacian_at_fixed_max,
        fixed_set_below_mean_criterion: base && fixed_max_below_mean,
        fixed_set_maximum_criterion: base && positive_laplacian_at_fixed_max,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(f: &str, s: &str) -> SymmetryReport {
        check_symmetry(&f.parse().unwrap(), &s.parse().unwrap(), &Grid::new(16).unwrap(), 2)
    }

    #[test]
    fn polar_function_under_rotation() {
        let r = check("const 2 - mono 1 z^2", "rotation z 5");
        assert!(r.invariant);
        assert_eq!(r.fixed_set, "poles");
        assert!((r.max_on_fixed_set - 1.0).abs() < 1e-14);
        assert!(r.laplacian_at_argmax.iter().all(|l| (l - 4.0).abs() < 1e-12));
        assert!(r.fixed_set_maximum_criterion);
    }

    #[test]
    fn flatter_polar_function_has_fixed_max_below_mean() {
        let r = check("const 2 - mono 0.5 z^2", "rotation z 3");
        assert!((r.max_on_fixed_set - 1.5).abs() < 1e-14);
        assert!((r.mean_f - 11.0 / 6.0).abs() < 1e-12);
        assert!(r.fixed_set_below_mean_criterion);
    }

    #[test]
    fn tilted_function_is_not_rotation_invariant() {
        let r = check("const 2 + mono 0.5 x", "rotation z 4");
        assert!(!r.invariant && r.max_deviation > 0.1);
        assert!(!r.fixed_set_below_mean_criterion && !r.fixed_set_maximum_criterion);
    }

    #[test]
    fn mirror_fixed_circle() {
        // on the circle x = 0: f = 2 + 0.3 y², maximal at (0, ±1, 0)
        let r = check("const 2 + mono 0.3 y^2", "mirror x");
        assert!(r.invariant);
        assert!((r.max_on_fixed_set - 2.3).abs() < 1e-12);
        assert_eq!(r.argmax.len(), 2);
        for y in &r.argmax {
            assert!(y[1].abs() > 1.0 - 1e-9);
        }
    }

    #[test]
    fn bad_specs() {
        assert!(matches!("spin z 3".parse::<Symmetry>(), Err(Error::Input(_))));
        assert!(matches!("rotation z 1".parse::<Symmetry>(), Err(Error::Input(_))));
        assert!(matches!("mirror 0,0,0".parse::<Symmetry>(), Err(Error::Input(_))));
        assert_eq!(
            "rotation 0,0,2 5".parse::<Symmetry>().unwrap(),
            Symmetry::Rotation { axis: [0.0, 0.0, 1.0], order: 5 }
        );
    }
}
