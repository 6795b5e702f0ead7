use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::parse::parse_terms;
use crate::curvature::PrescribedField;
use crate::error::{Error, Result};
use crate::spectral::legendre::legendre_with_derivs;
use crate::spectral::{BoundaryField, Grid};
use crate::sphere::{compass_maximize, dot, probe_grid, tangent_frame, Vec3};

/// One summand of a prescribed function, written as a function on R³ whose
/// restriction to S² is the prescribed one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Term {
    Const { value: f64 },
    /// `coeff · x^a y^b z^c`
    Monomial { coeff: f64, powers: [u32; 3] },
    /// `amplitude · exp(−k (1 − ⟨x, center⟩))`
    Bump { amplitude: f64, sharpness: f64, center: Vec3 },
    /// `coeff · P_l(z)`
    Legendre { degree: usize, coeff: f64 },
}

type Hess = [[f64; 3]; 3];

impl Term {
    fn value_grad_hess(&self, x: Vec3) -> (f64, Vec3, Hess) {
        let mut g = [0.0; 3];
        let mut h = [[0.0; 3]; 3];
        match *self {
            Term::Const { value } => (value, g, h),
            Term::Monomial { coeff, powers } => {
                let pw = |i: usize, d: u32| -> f64 {
                    let p = powers[i];
                    if d > p {
                        return 0.0;
                    }
                    let mut falling = 1.0;
                    for k in 0..d {
                        falling *= (p - k) as f64;
                    }
                    falling * x[i].powi((p - d) as i32)
                };
                let v = coeff * pw(0, 0) * pw(1, 0) * pw(2, 0);
                for i in 0..3 {
                    let mut d = [0u32; 3];
                    d[i] = 1;
                    g[i] = coeff * pw(0, d[0]) * pw(1, d[1]) * pw(2, d[2]);
                    for j in 0..3 {
                        let mut dd = d;
                        dd[j] += 1;
                        h[i][j] = coeff * pw(0, dd[0]) * pw(1, dd[1]) * pw(2, dd[2]);
                    }
                }
                (v, g, h)
            }
            Term::Bump { amplitude, sharpness, center } => {
                let v = amplitude * (-sharpness * (1.0 - dot(x, center))).exp();
                for i in 0..3 {
                    g[i] = sharpness * center[i] * v;
                    for j in 0..3 {
                        h[i][j] = sharpness * sharpness * center[i] * center[j] * v;
                    }
                }
                (v, g, h)
            }
            Term::Legendre { degree, coeff } => {
                let (p, dp, ddp) = legendre_with_derivs(degree, x[2]);
                g[2] = coeff * dp;
                h[2][2] = coeff * ddp;
                (coeff * p, g, h)
            }
        }
    }
}

/// A closed-form prescribed function on S², parsed from the term language
/// documented in the README.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrescribedFunction {
    terms: Vec<Term>,
}

/// Value and first/second covariant derivatives at a point of S².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalJet {
    pub value: f64,
    /// Tangential gradient as a vector of R³.
    pub gradient: Vec3,
    pub laplacian: f64,
    /// Tangent frame used for `hessian`.
    pub frame: (Vec3, Vec3),
    /// Covariant Hessian in `frame`.
    pub hessian: [[f64; 2]; 2],
}

impl PrescribedFunction {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Parse { pos: 0, msg: "empty function specification".into() });
        }
        Ok(PrescribedFunction { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    fn extension(&self, x: Vec3) -> (f64, Vec3, Hess) {
        let mut v = 0.0;
        let mut g = [0.0; 3];
        let mut h = [[0.0; 3]; 3];
        for t in &self.terms {
            let (tv, tg, th) = t.value_grad_hess(x);
            v += tv;
            for i in 0..3 {
                g[i] += tg[i];
                for j in 0..3 {
                    h[i][j] += th[i][j];
                }
            }
        }
        (v, g, h)
    }

    pub fn value(&self, x: Vec3) -> f64 {
        self.terms.iter().map(|t| t.value_grad_hess(x).0).sum()
    }

    /// Value, gradient, Laplacian and Hessian of the restriction to S².
    pub fn jet(&self, x: Vec3) -> LocalJet {
        let (value, grad, hess) = self.extension(x);
        let radial = dot(x, grad);
        let gradient = [grad[0] - radial * x[0], grad[1] - radial * x[1], grad[2] - radial * x[2]];
        let trace = hess[0][0] + hess[1][1] + hess[2][2];
        let hxx = quad_form(&hess, x, x);
        let laplacian = trace - hxx - 2.0 * radial;
        let (e1, e2) = tangent_frame(x);
        let h11 = quad_form(&hess, e1, e1) - radial;
        let h22 = quad_form(&hess, e2, e2) - radial;
        let h12 = quad_form(&hess, e1, e2);
        LocalJet { value, gradient, laplacian, frame: (e1, e2), hessian: [[h11, h12], [h12, h22]] }
    }

    pub fn laplacian(&self, x: Vec3) -> f64 {
        self.jet(x).laplacian
    }

    pub fn gradient_norm(&self, x: Vec3) -> f64 {
        let g = self.jet(x).gradient;
        dot(g, g).sqrt()
    }

    /// Nodal samples on a grid.
    pub fn sample(&self, grid: &Arc<Grid>) -> BoundaryField {
        BoundaryField::from_fn(grid, |p| self.value(p))
    }

    /// Global maximum and minimum, located on a probe grid of the given
    /// density and refined on the closed form.
    pub fn extrema(&self, density: usize) -> (f64, f64) {
        let probes = probe_grid(4 * density, 8 * density);
        let values: Vec<f64> = probes.iter().map(|&p| self.value(p)).collect();
        let step = std::f64::consts::PI / (4 * density) as f64;
        let refine = |sign: f64| {
            let k = (0..values.len())
                .max_by(|&a, &b| (sign * values[a]).total_cmp(&(sign * values[b])))
                .expect("probe grid is nonempty");
            let (_, best) = compass_maximize(|p| sign * self.value(p), probes[k], step);
            sign * best
        };
        (refine(1.0), refine(-1.0))
    }

    /// Samples on `grid` with extrema refined on the closed form.
    pub fn prescribed_field(&self, grid: &Arc<Grid>) -> PrescribedField {
        let (max, min) = self.extrema(grid.l_max().max(8));
        PrescribedField::with_extrema(self.sample(grid), max, min)
    }
}

fn quad_form(h: &Hess, a: Vec3, b: Vec3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += a[i] * h[i][j] * b[j];
        }
    }
    s
}

impl FromStr for PrescribedFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PrescribedFunction::new(parse_terms(s)?)
    }
}

impl fmt::Display for PrescribedFunction {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(out, " + ")?;
            }
            match t {
                Term::Const { value } => write!(out, "const {value}")?,
                Term::Monomial { coeff, powers } => {
                    write!(out, "mono {coeff}")?;
                    for (name, p) in ["x", "y", "z"].iter().zip(powers) {
                        if *p > 0 {
                            write!(out, " {name}^{p}")?;
                        }
                    }
                }
                Term::Bump { amplitude, sharpness, center } => write!(
                    out,
                    "{amplitude} * bump {sharpness} @ {},{},{}",
                    center[0], center[1], center[2]
                )?,
                Term::Legendre { degree, coeff } => write!(out, "legendre {degree} {coeff}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> PrescribedFunction {
        s.parse().unwrap()
    }

    #[test]
    fn laplacian_of_height_and_its_square() {
        let h = f("mono 1 z");
        let z2 = f("mono 1 z^2");
        for p in [[0.0, 0.0, 1.0], [0.6, 0.0, 0.8], [0.36, 0.48, 0.8]] {
            assert!((h.laplacian(p) + 2.0 * p[2]).abs() < 1e-14);
            assert!((z2.laplacian(p) - (2.0 - 6.0 * p[2] * p[2])).abs() < 1e-14);
        }
    }

    #[test]
    fn legendre_term_is_an_eigenfunction() {
        let g = f("legendre 3 0.7");
        let p = [0.36, 0.48, 0.8];
        assert!((g.laplacian(p) + 12.0 * g.value(p)).abs() < 1e-13);
    }

    #[test]
    fn hessian_of_quadratic_at_axes() {
        let q = f("const 4 + mono 0.3 x^2 + mono 0.6 y^2 + mono 1.05 z^2");
        let jet = q.jet([0.0, 0.0, 1.0]);
        let mut eig = [jet.hessian[0][0], jet.hessian[1][1]];
        eig.sort_by(f64::total_cmp);
        assert!((eig[0] + 1.5).abs() < 1e-14 && (eig[1] + 0.9).abs() < 1e-14);
        assert!(jet.hessian[0][1].abs() < 1e-14);
    }

    #[test]
    fn covariant_derivatives_match_finite_differences() {
        let q = f("const 1.34 - 1.36 * bump 8 @ 0,0,-1 + mono 0.2 x y^2 + legendre 4 0.1");
        let x = crate::sphere::normalized([0.3, -0.5, 0.4]).unwrap();
        let jet = q.jet(x);
        let (e1, e2) = jet.frame;
        let h = 1e-4;
        let along = |a: f64, b: f64| {
            let y = crate::sphere::add(x, crate::sphere::add(crate::sphere::scale(e1, a), crate::sphere::scale(e2, b)));
            q.value(crate::sphere::normalized(y).unwrap())
        };
        let d1 = (along(h, 0.0) - along(-h, 0.0)) / (2.0 * h);
        assert!((d1 - dot(jet.gradient, e1)).abs() < 1e-7);
        // the normalized-chart second derivatives agree with the covariant Hessian at x
        let d11 = (along(h, 0.0) - 2.0 * along(0.0, 0.0) + along(-h, 0.0)) / (h * h);
        let d22 = (along(0.0, h) - 2.0 * along(0.0, 0.0) + along(0.0, -h)) / (h * h);
        assert!((d11 - jet.hessian[0][0]).abs() < 1e-5);
        assert!((d11 + d22 - jet.laplacian).abs() < 1e-5);
    }

    #[test]
    fn extrema_of_height() {
        let (max, min) = f("const 2 + mono 0.5 z").extrema(8);
        assert!((max - 2.5).abs() < 1e-12 && (min - 1.5).abs() < 1e-12);
    }

    #[test]
    fn display_round_trips() {
        let q = f("const 1.34 - 1.36 * bump 8 @ 0,0,-1 + mono 0.2 x y^2 + legendre 4 0.1");
        let again: PrescribedFunction = q.to_string().parse().unwrap();
        assert_eq!(q, again);
    }
}
