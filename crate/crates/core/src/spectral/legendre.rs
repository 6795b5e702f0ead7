//! Legendre polynomials, fully normalized associated Legendre functions and
//! Gauss–Legendre quadrature.
//!
//! The associated functions use the geodesy normalization
//! `sqrt((2 - δ_{m0}) (2l + 1) (l - m)! / (l + m)!) P_l^m`, without the
//! Condon–Shortley phase. Combined with `cos(mφ)` / `sin(mφ)` this gives real
//! spherical harmonics whose square has unit mean over the sphere.

/// Packed index of `(l, m)` with `0 <= m <= l`.
#[inline]
pub fn packed(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Number of packed `(l, m)` entries up to degree `l_max`.
#[inline]
pub fn packed_len(l_max: usize) -> usize {
    (l_max + 1) * (l_max + 2) / 2
}

/// Fills `out` with the normalized associated Legendre functions at
/// `x = cos θ` (with `s = sin θ >= 0`), packed by [`packed`].
pub fn normalized_plm(l_max: usize, x: f64, s: f64, out: &mut [f64]) {
    debug_assert_eq!(out.len(), packed_len(l_max));
    out[0] = 1.0;
    if l_max == 0 {
        return;
    }
    // sectoral terms
    let mut pmm = 1.0;
    for m in 0..=l_max {
        if m == 1 {
            pmm = 3f64.sqrt() * s;
        } else if m >= 2 {
            let mf = m as f64;
            pmm *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s;
        }
        out[packed(m, m)] = pmm;
        if m < l_max {
            out[packed(m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * x * pmm;
        }
        for l in (m + 2)..=l_max {
            let lf = l as f64;
            let mf = m as f64;
            let denom = lf * lf - mf * mf;
            let a = ((4.0 * lf * lf - 1.0) / denom).sqrt();
            let b = ((2.0 * lf + 1.0) * (lf + mf - 1.0) * (lf - mf - 1.0) / ((2.0 * lf - 3.0) * denom))
                .sqrt();
            out[packed(l, m)] = a * x * out[packed(l - 1, m)] - b * out[packed(l - 2, m)];
        }
    }
}

/// Colatitude derivatives `d/dθ` of the normalized functions, given the
/// values from [`normalized_plm`]. Requires `s > 0`.
pub fn normalized_plm_dtheta(l_max: usize, x: f64, s: f64, plm: &[f64], out: &mut [f64]) {
    debug_assert!(s > 0.0);
    for m in 0..=l_max {
        for l in m..=l_max {
            let lf = l as f64;
            let mf = m as f64;
            let mut v = lf * x * plm[packed(l, m)];
            if l > m {
                let c = ((2.0 * lf + 1.0) / (2.0 * lf - 1.0)).sqrt() * ((lf - mf) * (lf + mf)).sqrt();
                v -= c * plm[packed(l - 1, m)];
            }
            out[packed(l, m)] = v / s;
        }
    }
}

/// Legendre polynomial `P_l(x)` with its first two derivatives.
pub fn legendre_with_derivs(l: usize, x: f64) -> (f64, f64, f64) {
    if l == 0 {
        return (1.0, 0.0, 0.0);
    }
    let (mut p0, mut d0, mut s0) = (1.0, 0.0, 0.0);
    let (mut p1, mut d1, mut s1) = (x, 1.0, 0.0);
    for k in 1..l {
        let kf = k as f64;
        let a = 2.0 * kf + 1.0;
        let p2 = (a * x * p1 - kf * p0) / (kf + 1.0);
        let d2 = (a * (p1 + x * d1) - kf * d0) / (kf + 1.0);
        let s2 = (a * (2.0 * d1 + x * s1) - kf * s0) / (kf + 1.0);
        p0 = p1;
        d0 = d1;
        s0 = s1;
        p1 = p2;
        d1 = d2;
        s1 = s2;
    }
    (p1, d1, s1)
}

/// `P_0(x), ..., P_{l_max}(x)`.
pub fn legendre_all(l_max: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; l_max + 1];
    p[0] = 1.0;
    if l_max >= 1 {
        p[1] = x;
    }
    for k in 1..l_max {
        let kf = k as f64;
        p[k + 1] = ((2.0 * kf + 1.0) * x * p[k] - kf * p[k - 1]) / (kf + 1.0);
    }
    p
}

/// Gauss–Legendre nodes (descending, so the first node is nearest the north
/// pole) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, pm1) = legendre_pair(n, x);
            dp = nf * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (p, pm1) = legendre_pair(n, x);
        if p.abs() > 0.0 {
            dp = nf * (x * p - pm1) / (x * x - 1.0);
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_weights_sum_to_two() {
        for n in [1, 2, 5, 32, 64] {
            let (_, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}: {s}");
        }
    }

    #[test]
    fn gauss_exact_for_high_degree() {
        let n = 8;
        let (x, w) = gauss_legendre(n);
        for k in 0..(2 * n) {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "degree {k}");
        }
    }

    #[test]
    fn low_order_normalized_values() {
        let th: f64 = 0.7;
        let (x, s) = (th.cos(), th.sin());
        let mut p = vec![0.0; packed_len(2)];
        normalized_plm(2, x, s, &mut p);
        assert!((p[packed(1, 0)] - 3f64.sqrt() * x).abs() < 1e-15);
        assert!((p[packed(1, 1)] - 3f64.sqrt() * s).abs() < 1e-15);
        assert!((p[packed(2, 0)] - 5f64.sqrt() * 0.5 * (3.0 * x * x - 1.0)).abs() < 1e-14);
        assert!((p[packed(2, 1)] - 15f64.sqrt() * x * s).abs() < 1e-14);
        assert!((p[packed(2, 2)] - (15f64 / 4.0).sqrt() * s * s).abs() < 1e-14);
    }

    #[test]
    fn dtheta_matches_finite_differences() {
        let l_max = 12;
        let th: f64 = 1.1;
        let h = 1e-6;
        let n = packed_len(l_max);
        let (mut p, mut pp, mut pm, mut d) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        normalized_plm(l_max, th.cos(), th.sin(), &mut p);
        normalized_plm(l_max, (th + h).cos(), (th + h).sin(), &mut pp);
        normalized_plm(l_max, (th - h).cos(), (th - h).sin(), &mut pm);
        normalized_plm_dtheta(l_max, th.cos(), th.sin(), &p, &mut d);
        for k in 0..n {
            let fd = (pp[k] - pm[k]) / (2.0 * h);
            assert!((fd - d[k]).abs() < 1e-6 * (1.0 + d[k].abs()), "index {k}");
        }
    }

    #[test]
    fn legendre_derivatives_match_closed_forms() {
        let x = 0.3;
        let (p, d, s) = legendre_with_derivs(3, x);
        assert!((p - 0.5 * (5.0 * x * x * x - 3.0 * x)).abs() < 1e-15);
        assert!((d - 0.5 * (15.0 * x * x - 3.0)).abs() < 1e-14);
        assert!((s - 15.0 * x).abs() < 1e-14);
    }
}
