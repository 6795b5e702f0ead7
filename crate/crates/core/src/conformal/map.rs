use nalgebra::{Rotation3, Unit, Vector3};

use crate::error::{Error, Result};
use crate::sphere::{normalized, Vec3};

/// Boundary Möbius map `φ_{p,ε}`: in a frame taking `p` to the north pole it
/// is stereographic projection from the south pole, dilation `z ↦ εz`, and
/// lift back. It fixes `p` and `−p`, with conformal factor `ε` at `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalMap {
    p: Vec3,
    eps: f64,
    rotation: Rotation3<f64>,
}

const NORTH: Vec3 = [0.0, 0.0, 1.0];

fn frame_to_north(p: Vec3) -> Rotation3<f64> {
    let from = Vector3::from(p);
    let to = Vector3::from(NORTH);
    Rotation3::rotation_between(&from, &to).unwrap_or_else(|| {
        // antiparallel: half turn about the x axis
        Rotation3::from_axis_angle(&Unit::new_normalize(Vector3::x()), std::f64::consts::PI)
    })
}

impl ConformalMap {
    pub fn new(p: Vec3, eps: f64) -> Result<Self> {
        let p = normalized(p).ok_or_else(|| Error::Domain("base point must be nonzero".into()))?;
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Domain(format!("dilation must be positive and finite, got {eps}")));
        }
        Ok(ConformalMap { p, eps, rotation: frame_to_north(p) })
    }

    pub fn identity() -> Self {
        ConformalMap { p: NORTH, eps: 1.0, rotation: Rotation3::identity() }
    }

    /// Map for the ball point `b = (1 − ε) p`, `|b| < 1`; `b = 0` is the
    /// identity.
    pub fn from_ball_point(b: Vec3) -> Result<Self> {
        let r = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
        if r >= 1.0 || !r.is_finite() {
            return Err(Error::Domain(format!("ball point has norm {r}, expected < 1")));
        }
        if r == 0.0 {
            return Ok(Self::identity());
        }
        Self::new(b, 1.0 - r)
    }

    pub fn p(&self) -> Vec3 {
        self.p
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn rotation(&self) -> &Rotation3<f64> {
        &self.rotation
    }

    /// `(1 − ε) p` for `ε ≤ 1`; maps with `ε > 1` are first rewritten as
    /// `φ_{−p, 1/ε}`.
    pub fn ball_point(&self) -> Vec3 {
        let (p, e) = if self.eps > 1.0 {
            ([-self.p[0], -self.p[1], -self.p[2]], 1.0 / self.eps)
        } else {
            (self.p, self.eps)
        };
        [(1.0 - e) * p[0], (1.0 - e) * p[1], (1.0 - e) * p[2]]
    }

    /// The inverse map `φ_{p, 1/ε}`.
    pub fn inverse(&self) -> Self {
        ConformalMap { p: self.p, eps: 1.0 / self.eps, rotation: self.rotation }
    }

    fn to_frame(&self, x: Vec3) -> Vec3 {
        let y = self.rotation * Vector3::from(x);
        [y[0], y[1], y[2]]
    }

    fn from_frame(&self, y: Vec3) -> Vec3 {
        let x = self.rotation.inverse() * Vector3::from(y);
        [x[0], x[1], x[2]]
    }

    /// Image of a point of S².
    pub fn apply(&self, x: Vec3) -> Vec3 {
        let y = self.to_frame(x);
        let e = self.eps;
        let out = if y[2] >= 0.0 {
            // chart from the south pole, regular near p
            let (z1, z2) = (y[0] / (1.0 + y[2]), y[1] / (1.0 + y[2]));
            let (w1, w2) = (e * z1, e * z2);
            let w2n = w1 * w1 + w2 * w2;
            [2.0 * w1 / (1.0 + w2n), 2.0 * w2 / (1.0 + w2n), (1.0 - w2n) / (1.0 + w2n)]
        } else {
            // chart from the north pole, regular near −p
            let (s1, s2) = (y[0] / (1.0 - y[2]) / e, y[1] / (1.0 - y[2]) / e);
            let s2n = s1 * s1 + s2 * s2;
            [2.0 * s1 / (1.0 + s2n), 2.0 * s2 / (1.0 + s2n), (s2n - 1.0) / (1.0 + s2n)]
        };
        let r = self.from_frame(out);
        normalized(r).unwrap_or(r)
    }

    /// Conformal factor `λ_φ(x) = 2ε / ((1 + y₃) + ε² (1 − y₃))` with
    /// `y₃ = ⟨x, p⟩`.
    pub fn factor(&self, x: Vec3) -> f64 {
        let y3 = (x[0] * self.p[0] + x[1] * self.p[1] + x[2] * self.p[2]).clamp(-1.0, 1.0);
        let e = self.eps;
        2.0 * e / ((1.0 + y3) + e * e * (1.0 - y3))
    }
}

/// Convenience form of [`ConformalMap::apply`].
pub fn boundary_map(map: &ConformalMap, x: Vec3) -> Vec3 {
    map.apply(x)
}

/// Convenience form of [`ConformalMap::factor`].
pub fn conformal_factor(map: &ConformalMap, x: Vec3) -> f64 {
    map.factor(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{cross, dot, geodesic_distance, norm, retract, sub, tangent_frame};

    fn some_points() -> Vec<Vec3> {
        vec![
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
            normalized([0.3, -0.2, 0.9]).unwrap(),
            normalized([-0.7, 0.1, -0.2]).unwrap(),
            normalized([0.01, 0.02, -1.0]).unwrap(),
        ]
    }

    #[test]
    fn unit_dilation_is_identity() {
        let m = ConformalMap::new([0.2, 0.5, -0.3], 1.0).unwrap();
        for x in some_points() {
            assert!(norm(sub(m.apply(x), x)) < 1e-14);
            assert!((m.factor(x) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn base_point_and_antipode_are_fixed() {
        for p in some_points() {
            let m = ConformalMap::new(p, 0.37).unwrap();
            let q = [-p[0], -p[1], -p[2]];
            assert!(norm(sub(m.apply(p), p)) < 1e-14);
            assert!(norm(sub(m.apply(q), q)) < 1e-14);
            assert!((m.factor(p) - 0.37).abs() < 1e-14);
            assert!((m.factor(q) - 1.0 / 0.37).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_is_orthogonal_and_targets_north() {
        for p in some_points() {
            let m = ConformalMap::new(p, 0.5).unwrap();
            let r = m.rotation().matrix();
            let err = (r.transpose() * r - nalgebra::Matrix3::identity()).abs().max();
            assert!(err < 1e-12);
            assert!(norm(sub(m.to_frame(p), NORTH)) < 1e-12);
        }
    }

    #[test]
    fn images_are_unit_vectors() {
        let m = ConformalMap::new([1.0, 1.0, 0.0], 0.05).unwrap();
        for x in some_points() {
            assert!((norm(m.apply(x)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn factor_matches_jacobian() {
        let m = ConformalMap::new([0.1, -0.4, 0.8], 0.3).unwrap();
        let h = 1e-6;
        for x in some_points().into_iter().skip(2) {
            let (e1, e2) = tangent_frame(x);
            let d = |a: f64, b: f64| m.apply(retract(x, e1, e2, a, b));
            let j1 = sub(d(h, 0.0), d(-h, 0.0)).map(|v| v / (2.0 * h));
            let j2 = sub(d(0.0, h), d(0.0, -h)).map(|v| v / (2.0 * h));
            let area = norm(cross(j1, j2));
            assert!((area.sqrt() - m.factor(x)).abs() < 1e-6, "{} vs {}", area.sqrt(), m.factor(x));
            assert!(dot(j1, j2).abs() < 1e-6);
        }
    }

    #[test]
    fn same_axis_maps_compose() {
        let p = normalized([0.3, 0.3, -0.5]).unwrap();
        let (a, b) = (ConformalMap::new(p, 0.4).unwrap(), ConformalMap::new(p, 1.7).unwrap());
        let ab = ConformalMap::new(p, 0.4 * 1.7).unwrap();
        for x in some_points() {
            assert!(geodesic_distance(b.apply(a.apply(x)), ab.apply(x)) < 1e-12);
            assert!(norm(sub(a.inverse().apply(a.apply(x)), x)) < 1e-12);
        }
    }

    #[test]
    fn ball_point_round_trip() {
        let m = ConformalMap::new([0.0, 1.0, 0.0], 0.25).unwrap();
        let b = m.ball_point();
        let back = ConformalMap::from_ball_point(b).unwrap();
        assert!((back.eps() - 0.25).abs() < 1e-15 && norm(sub(back.p(), m.p())) < 1e-15);
        let big = ConformalMap::new([0.0, 1.0, 0.0], 4.0).unwrap();
        let swapped = ConformalMap::from_ball_point(big.ball_point()).unwrap();
        for x in some_points() {
            assert!(norm(sub(swapped.apply(x), big.apply(x))) < 1e-12);
        }
        assert!(ConformalMap::from_ball_point([1.0, 0.0, 0.0]).is_err());
        assert!(ConformalMap::new([0.0, 0.0, 1.0], 0.0).is_err());
    }
}
