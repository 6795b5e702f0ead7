//! Small vector helpers on the unit sphere.

pub type Vec3 = [f64; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// `a / |a|`; `None` for the zero vector.
pub fn normalized(a: Vec3) -> Option<Vec3> {
    let r = norm(a);
    (r > 0.0 && r.is_finite()).then(|| scale(a, 1.0 / r))
}

/// Great-circle distance between unit vectors.
pub fn geodesic_distance(a: Vec3, b: Vec3) -> f64 {
    // atan2 form stays accurate for nearly equal and nearly antipodal points
    norm(cross(a, b)).atan2(dot(a, b))
}

/// Orthonormal tangent basis `(e1, e2)` at a unit vector, with `e1 × e2 = x`.
pub fn tangent_frame(x: Vec3) -> (Vec3, Vec3) {
    let helper = if x[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = normalized(sub(helper, scale(x, dot(helper, x)))).expect("helper is never parallel to x");
    let e2 = cross(x, e1);
    (e1, e2)
}

/// Moves from `x` along the tangent vector `a e1 + b e2` and projects back.
pub fn retract(x: Vec3, e1: Vec3, e2: Vec3, a: f64, b: f64) -> Vec3 {
    let y = add(x, add(scale(e1, a), scale(e2, b)));
    normalized(y).unwrap_or(x)
}

/// Rotation of `x` about the unit `axis` by `angle` (Rodrigues).
pub fn rotate(x: Vec3, axis: Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    let k = cross(axis, x);
    let d = dot(axis, x) * (1.0 - c);
    [
        x[0] * c + k[0] * s + axis[0] * d,
        x[1] * c + k[1] * s + axis[1] * d,
        x[2] * c + k[2] * s + axis[2] * d,
    ]
}

/// Reflection of `x` in the plane orthogonal to the unit `normal`.
pub fn reflect(x: Vec3, normal: Vec3) -> Vec3 {
    sub(x, scale(normal, 2.0 * dot(x, normal)))
}

/// Maximizes `g` near `start` by a compass search in the tangent plane,
/// returning the best point and value.
pub fn compass_maximize(g: impl Fn(Vec3) -> f64, start: Vec3, mut step: f64) -> (Vec3, f64) {
    let mut x = start;
    let mut best = g(x);
    while step > 1e-11 {
        let (e1, e2) = tangent_frame(x);
        let mut improved = false;
        for (a, b) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let y = retract(x, e1, e2, step * a, step * b);
            let v = g(y);
            if v > best {
                best = v;
                x = y;
                improved = true;
                break;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, best)
}

/// Points of a `n_theta × n_phi` latitude–longitude probe grid, cell centred
/// in colatitude, row by row.
pub fn probe_grid(n_theta: usize, n_phi: usize) -> Vec<Vec3> {
    let mut pts = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let th = std::f64::consts::PI * (i as f64 + 0.5) / n_theta as f64;
        for j in 0..n_phi {
            let ph = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
            pts.push([th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]);
        }
    }
    pts
}
