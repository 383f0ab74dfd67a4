//! Direct minimization of the discretized reduced energy over nodal values
//! of `θ`. Shares nothing with the first-integral route except the
//! coefficient functions, and serves as its oracle.

use std::f64::consts::FRAC_PI_2;

use super::{EulerProfile, ReducedCoefficients};
use crate::model::{Chirality, ElasticConstants};
use crate::numeric::CompensatedSum;
use crate::{Error, Result};

const GRAD_TOL: f64 = 1e-9;
const MAX_ITER: usize = 200_000;
const ARMIJO: f64 = 1e-4;

/// Midpoint-rule discretization: on each cell,
/// `h [ f(m) ((θ_{i+1} - θ_i)/h)² + (K2 t² - g(m)) ]` with `m` the cell mean.
fn energy(rc: &ReducedCoefficients, theta: &[f64], h: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for w in theta.windows(2) {
        let m = 0.5 * (w[0] + w[1]);
        let d = (w[1] - w[0]) / h;
        acc.add(h * (rc.f(m) * d * d + rc.deficit(m)));
    }
    acc.value()
}

fn gradient(rc: &ReducedCoefficients, theta: &[f64], h: f64, grad: &mut [f64]) {
    grad.iter_mut().for_each(|g| *g = 0.0);
    for i in 0..theta.len() - 1 {
        let m = 0.5 * (theta[i] + theta[i + 1]);
        let d = (theta[i + 1] - theta[i]) / h;
        let common = 0.5 * h * (rc.df(m) * d * d + rc.d_deficit(m));
        let stiff = 2.0 * rc.f(m) * d;
        grad[i] += common - stiff;
        grad[i + 1] += common + stiff;
    }
    let n = grad.len();
    grad[0] = 0.0;
    grad[n - 1] = 0.0;
}

/// Solves `P x = r` for the symmetric tridiagonal preconditioner
/// `P = (2/h) tridiag(-f, f_{i-1} + f_i, -f) + σ h I` on interior nodes.
fn precondition(rc: &ReducedCoefficients, theta: &[f64], h: f64, sigma: f64, r: &[f64]) -> Vec<f64> {
    let n = theta.len();
    let m = n - 2;
    let mut out = vec![0.0; n];
    if m == 0 {
        return out;
    }
    let cell_f: Vec<f64> = theta.windows(2).map(|w| rc.f(0.5 * (w[0] + w[1]))).collect();
    let diag: Vec<f64> =
        (1..n - 1).map(|i| 2.0 / h * (cell_f[i - 1] + cell_f[i]) + sigma * h).collect();
    let off: Vec<f64> = (1..n - 2).map(|i| -2.0 / h * cell_f[i]).collect();
    // Thomas algorithm
    let mut c = vec![0.0; m];
    let mut d = vec![0.0; m];
    for j in 0..m {
        let lower = if j > 0 { off[j - 1] } else { 0.0 };
        let denom = diag[j] - if j > 0 { lower * c[j - 1] } else { 0.0 };
        c[j] = if j + 1 < m { off[j] / denom } else { 0.0 };
        d[j] = (r[j + 1] - if j > 0 { lower * d[j - 1] } else { 0.0 }) / denom;
    }
    for j in (0..m).rev() {
        let next = if j + 1 < m { out[j + 2] } else { 0.0 };
        out[j + 1] = d[j] - c[j] * next;
    }
    out
}

/// Minimizes the discretized reduced energy over nodal `θ` with the end
/// values pinned at `0` and `π/2`, starting from `θ = πz/2`.
///
/// Each step moves along the gradient taken in the metric of a discrete
/// `H¹` inner product weighted by `f`, with Armijo backtracking. Iterates
/// until the Euclidean gradient satisfies `|∇E|_∞ < 1e-9`.
pub fn brute_force_1d(k: &ElasticConstants, t: Chirality, n_nodes: usize) -> Result<EulerProfile> {
    if n_nodes < 3 {
        return Err(Error::Domain(format!("n_nodes = {n_nodes}, need at least 3")));
    }
    let rc = ReducedCoefficients::new(k, t);
    let h = 1.0 / (n_nodes - 1) as f64;
    let ratio = k.k2.max(k.k3) / k.k2.min(k.k3);
    let sigma = 2.0 * rc.g_max() * ratio;

    let mut theta: Vec<f64> = (0..n_nodes).map(|i| FRAC_PI_2 * i as f64 * h).collect();
    let mut grad = vec![0.0; n_nodes];
    let mut e = energy(&rc, &theta, h);
    let mut step = 1.0;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        gradient(&rc, &theta, h, &mut grad);
        let gmax = grad.iter().fold(0.0f64, |a, g| a.max(g.abs()));
        if gmax < GRAD_TOL {
            converged = true;
            break;
        }
        let dir = precondition(&rc, &theta, h, sigma, &grad);
        let slope: f64 = grad.iter().zip(&dir).map(|(g, p)| g * p).sum();
        let mut accepted = false;
        let mut trial = theta.clone();
        for _ in 0..60 {
            for i in 1..n_nodes - 1 {
                trial[i] = theta[i] - step * dir[i];
            }
            let et = energy(&rc, &trial, h);
            if et <= e - ARMIJO * step * slope {
                theta.clone_from(&trial);
                e = et;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // no further decrease representable; accept if the gradient is
            // already at rounding level relative to its scale
            break;
        }
        step = (2.0 * step).min(1.0);
    }
    if !converged {
        gradient(&rc, &theta, h, &mut grad);
        let gmax = grad.iter().fold(0.0f64, |a, g| a.max(g.abs()));
        if gmax >= GRAD_TOL {
            return Err(Error::NotConverged {
                what: "brute-force 1d descent",
                detail: format!("gradient inf-norm {gmax:e}"),
            });
        }
    }

    // diagnostics: cell-averaged first integral and φ by the trapezoid rule
    let mut c_acc = CompensatedSum::new();
    let mut phi = Vec::with_capacity(n_nodes);
    phi.push(0.0);
    for (i, w) in theta.windows(2).enumerate() {
        let m = 0.5 * (w[0] + w[1]);
        let d = (w[1] - w[0]) / h;
        c_acc.add(rc.f(m) * d * d - rc.deficit(m));
        phi.push(phi[i] + 0.5 * h * (rc.phi_rate(w[0]) + rc.phi_rate(w[1])));
    }
    let excess = c_acc.value() / (n_nodes - 1) as f64;
    Ok(EulerProfile {
        z_nodes: (0..n_nodes).map(|i| i as f64 * h).collect(),
        theta,
        phi,
        first_integral_constant: rc.g_max() + excess,
        first_integral_excess: excess,
        energy_per_area: e,
    })
}
