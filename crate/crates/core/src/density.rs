//! Pointwise Frank energy densities.
//!
//! All functions use the convention `grad[i][j] = ∂n_i/∂x_j`, so that
//! `div n = tr(grad)` and `(curl n)_i = ε_ijk grad[k][j]`. With this choice the
//! helix `(cos tz, sin tz, 0)` has `n · curl n = -t`.

use crate::model::{cross, dot, Chirality, DirectorValue, ElasticConstants, Mat3, Vec3};

#[inline]
pub fn divergence(g: &Mat3) -> f64 {
    g[0][0] + g[1][1] + g[2][2]
}

#[inline]
pub fn curl(g: &Mat3) -> Vec3 {
    [g[2][1] - g[1][2], g[0][2] - g[2][0], g[1][0] - g[0][1]]
}

/// `|grad|^2`, the squared Frobenius norm.
#[inline]
pub fn frobenius_sq(g: &Mat3) -> f64 {
    g.iter().flatten().map(|x| x * x).sum()
}

/// `tr(grad^2)`.
#[inline]
pub fn trace_of_square(g: &Mat3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += g[i][j] * g[j][i];
        }
    }
    s
}

/// `tr(grad^2) - (div n)^2`, the saddle-splay integrand without its
/// coefficient.
#[inline]
pub fn saddle_splay(g: &Mat3) -> f64 {
    let d = divergence(g);
    trace_of_square(g) - d * d
}

/// Full Oseen–Frank density
/// `K1 (div n)^2 + K2 (n·curl n + t)^2 + K3 |n × curl n|^2
///  + (K2 + K4)(tr(grad^2) - (div n)^2)`.
pub fn frank_density(n: &DirectorValue, grad: &Mat3, k: &ElasticConstants, t: Chirality) -> f64 {
    frank_density_raw(n.as_array(), grad, k, t.t())
}

/// One-constant density `|grad|^2 + 2t n·curl n + t^2` (with `K = 1`).
pub fn one_constant_density(n: &DirectorValue, grad: &Mat3, t: Chirality) -> f64 {
    one_constant_density_raw(n.as_array(), grad, t.t())
}

pub(crate) fn frank_density_raw(n: &Vec3, g: &Mat3, k: &ElasticConstants, t: f64) -> f64 {
    let d = divergence(g);
    let c = curl(g);
    let s = dot(n, &c) + t;
    let b = cross(n, &c);
    k.k1 * d * d + k.k2 * s * s + k.k3 * dot(&b, &b) + (k.k2 + k.k4) * (trace_of_square(g) - d * d)
}

pub(crate) fn one_constant_density_raw(n: &Vec3, g: &Mat3, t: f64) -> f64 {
    frobenius_sq(g) + 2.0 * t * dot(n, &curl(g)) + t * t
}

/// Adds `a · ∂curl/∂grad` to `dg`.
#[inline]
fn add_curl_adjoint(dg: &mut Mat3, a: &Vec3) {
    dg[2][1] += a[0];
    dg[1][2] -= a[0];
    dg[0][2] += a[1];
    dg[2][0] -= a[1];
    dg[1][0] += a[2];
    dg[0][1] -= a[2];
}

/// Partial derivatives of [`frank_density`] with respect to `n` and `grad`,
/// treating both as unconstrained.
pub(crate) fn frank_density_partials(
    n: &Vec3,
    g: &Mat3,
    k: &ElasticConstants,
    t: f64,
) -> (Vec3, Mat3) {
    let d = divergence(g);
    let c = curl(g);
    let nc = dot(n, &c);
    let s = nc + t;
    let cc = dot(&c, &c);
    let nn = dot(n, n);

    // |n × c|^2 = |n|^2 |c|^2 - (n·c)^2
    let mut dn = [0.0; 3];
    let mut a = [0.0; 3];
    for i in 0..3 {
        dn[i] = 2.0 * k.k2 * s * c[i] + 2.0 * k.k3 * (cc * n[i] - nc * c[i]);
        a[i] = 2.0 * k.k2 * s * n[i] + 2.0 * k.k3 * (nn * c[i] - nc * n[i]);
    }

    let ks = k.k2 + k.k4;
    let mut dg = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            dg[i][j] = 2.0 * ks * g[j][i];
        }
        dg[i][i] += 2.0 * (k.k1 - ks) * d;
    }
    add_curl_adjoint(&mut dg, &a);
    (dn, dg)
}

/// Partial derivatives of [`one_constant_density`].
pub(crate) fn one_constant_partials(n: &Vec3, g: &Mat3, t: f64) -> (Vec3, Mat3) {
    let c = curl(g);
    let dn = [2.0 * t * c[0], 2.0 * t * c[1], 2.0 * t * c[2]];
    let mut dg = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            dg[i][j] = 2.0 * g[i][j];
        }
    }
    add_curl_adjoint(&mut dg, &[2.0 * t * n[0], 2.0 * t * n[1], 2.0 * t * n[2]]);
    (dn, dg)
}
