//! Global minimizers among director fields that depend only on the cell
//! height `z`.
//!
//! Writing `n = (cos φ cos θ, sin φ cos θ, sin θ)`, the optimal azimuth obeys
//! `φ' = K2 t / (K2 cos²θ + K3 sin²θ)` and the elevation minimizes
//!
//! ```text
//! ∫_0^1 f(θ) θ'² - g(θ) + K2 t² dz,
//! f(θ) = K1 cos²θ + K3 sin²θ,
//! g(θ) = K2² t² cos²θ / (K2 cos²θ + K3 sin²θ),
//! ```
//!
//! with `θ(0) = 0`, `θ(1) = π/2`. The minimizer satisfies the first integral
//! `f(θ) θ'² + g(θ) = C`, where `C > K2 t²` is fixed by `η(C) = 1`.
//!
//! For large `t` the constant `C` exceeds `K2 t²` by an amount far below the
//! resolution of `C` itself (about `1e-14` against `400` at `t = 20`), so
//! every routine here works with the excess `C - K2 t²` and with
//! `K2 t² - g(θ)` evaluated in closed form.

mod brute;
mod io;

pub use brute::brute_force_1d;
pub use io::{write_profile_csv, ProfileMetadata};

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::model::{Chirality, ElasticConstants};
use crate::numeric::{adaptive_simpson, bisect_log, rk4_step, CompensatedSum};
use crate::{Error, Result};

/// Absolute tolerance of the quadrature behind [`eta`].
pub const ETA_TOL: f64 = 1e-10;

/// `|θ(end) - π/2|` accepted before clamping the last node.
pub const ENDPOINT_TOL: f64 = 1e-6;

/// Grid size used by [`restricted_minimum`].
pub const RESTRICTED_NODES: usize = 2001;

/// Split point of the quadrature for `η`; on `[0, SPLIT]` the substitution
/// `u = s²` widens the near-singular peak at `u = 0`.
const SPLIT: f64 = 0.1;

/// Minimum number of RK4 steps across the whole interval.
const MIN_STEPS: usize = 20000;

/// The reduced coefficients `f` and `g` for given constants and chirality.
#[derive(Debug, Clone, Copy)]
pub struct ReducedCoefficients {
    k: ElasticConstants,
    t: f64,
}

impl ReducedCoefficients {
    pub fn new(k: &ElasticConstants, t: Chirality) -> Self {
        Self { k: *k, t: t.t() }
    }

    /// `K1 cos²θ + K3 sin²θ`.
    #[inline]
    pub fn f(&self, th: f64) -> f64 {
        let (s, c) = th.sin_cos();
        self.k.k1 * c * c + self.k.k3 * s * s
    }

    #[inline]
    pub fn df(&self, th: f64) -> f64 {
        (self.k.k3 - self.k.k1) * (2.0 * th).sin()
    }

    /// `K2² t² cos²θ / (K2 cos²θ + K3 sin²θ)`.
    #[inline]
    pub fn g(&self, th: f64) -> f64 {
        let (s, c) = th.sin_cos();
        let k = &self.k;
        k.k2 * k.k2 * self.t * self.t * c * c / (k.k2 * c * c + k.k3 * s * s)
    }

    /// `K2 t² - g(θ) = K2 K3 t² sin²θ / (K2 cos²θ + K3 sin²θ)`, free of
    /// cancellation.
    #[inline]
    pub fn deficit(&self, th: f64) -> f64 {
        let (s, c) = th.sin_cos();
        let k = &self.k;
        k.k2 * k.k3 * self.t * self.t * s * s / (k.k2 * c * c + k.k3 * s * s)
    }

    #[inline]
    pub fn d_deficit(&self, th: f64) -> f64 {
        let (s, c) = th.sin_cos();
        let k = &self.k;
        let q = k.k2 * c * c + k.k3 * s * s;
        k.k2 * k.k2 * k.k3 * self.t * self.t * (2.0 * th).sin() / (q * q)
    }

    /// `K2 t²`, the supremum of `g`.
    #[inline]
    pub fn g_max(&self) -> f64 {
        self.k.k2 * self.t * self.t
    }

    /// Right-hand side of the azimuth equation.
    #[inline]
    pub fn phi_rate(&self, th: f64) -> f64 {
        if self.k.one_constant {
            return self.t;
        }
        let (s, c) = th.sin_cos();
        self.k.k2 * self.t / (self.k.k2 * c * c + self.k.k3 * s * s)
    }

    /// `θ' = sqrt((C - g(θ)) / f(θ))` along the first integral.
    #[inline]
    fn slope(&self, excess: f64, th: f64) -> f64 {
        ((excess + self.deficit(th)) / self.f(th)).sqrt()
    }
}

/// The first-integral constant `C = K2 t² + excess`, kept in two parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstIntegral {
    base: f64,
    excess: f64,
}

impl FirstIntegral {
    /// Splits a plain value `C`; fails unless `C > K2 t²`.
    pub fn from_value(c: f64, k: &ElasticConstants, t: Chirality) -> Result<Self> {
        let base = k.k2 * t.t() * t.t();
        if !c.is_finite() || c <= base {
            return Err(Error::Domain(format!("C = {c} must exceed K2 t^2 = {base}")));
        }
        Ok(Self { base, excess: c - base })
    }

    pub fn from_excess(excess: f64, k: &ElasticConstants, t: Chirality) -> Result<Self> {
        if !excess.is_finite() || excess <= 0.0 {
            return Err(Error::Domain(format!("C - K2 t^2 = {excess} must be positive")));
        }
        Ok(Self { base: k.k2 * t.t() * t.t(), excess })
    }

    pub fn value(&self) -> f64 {
        self.base + self.excess
    }

    /// `C - K2 t²`.
    pub fn excess(&self) -> f64 {
        self.excess
    }
}

/// A discretized minimizer `(z, θ(z), φ(z))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerProfile {
    pub z_nodes: Vec<f64>,
    pub theta: Vec<f64>,
    /// Empty until [`phi_profile`] has run.
    pub phi: Vec<f64>,
    /// `C` of the first integral (`D` in the one-constant case).
    pub first_integral_constant: f64,
    /// `C - K2 t²`, stored separately to full relative precision.
    pub first_integral_excess: f64,
    /// `∫ f(θ)θ'² - g(θ) + K2 t² dz` over the profile's interval.
    pub energy_per_area: f64,
}

impl EulerProfile {
    /// Length of the interval covered by the nodes.
    pub fn length(&self) -> f64 {
        self.z_nodes.last().copied().unwrap_or(0.0)
    }

    /// Linear interpolation of `(θ, φ)` at `z`, clamped to the node range.
    pub fn angles_at(&self, z: f64) -> (f64, f64) {
        let n = self.z_nodes.len();
        let zl = self.length();
        let s = (z / zl).clamp(0.0, 1.0) * (n - 1) as f64;
        let i = (s.floor() as usize).min(n - 2);
        let w = s - i as f64;
        let lerp = |v: &[f64]| {
            if v.is_empty() {
                0.0
            } else {
                (1.0 - w) * v[i] + w * v[i + 1]
            }
        };
        (lerp(&self.theta), lerp(&self.phi))
    }
}

/// `η(C) = ∫_0^{π/2} sqrt(f(u)) / sqrt(C - g(u)) du`, defined for `C > K2 t²`.
pub fn eta(c: f64, k: &ElasticConstants, t: Chirality) -> Result<f64> {
    let fi = FirstIntegral::from_value(c, k, t)?;
    Ok(eta_excess(fi.excess, &ReducedCoefficients::new(k, t)))
}

/// `η` as a function of `C - K2 t² > 0`.
pub fn eta_excess(excess: f64, rc: &ReducedCoefficients) -> f64 {
    let integrand = |u: f64| (rc.f(u) / (excess + rc.deficit(u))).sqrt();
    let inner = |s: f64| 2.0 * s * integrand(s * s);
    // geometric panels in s down to the width (excess / scale)^(1/4) of the
    // peak near u = 0
    let floor = 1e-2 * excess / (1.0 + rc.g_max());
    let mut cuts = vec![SPLIT.sqrt()];
    while cuts.len() < 600 && cuts[cuts.len() - 1].powi(4) > floor {
        cuts.push(0.25 * cuts[cuts.len() - 1]);
    }
    let tol = 0.5 * ETA_TOL / cuts.len() as f64;
    let mut sum = CompensatedSum::new();
    sum.add(adaptive_simpson(inner, 0.0, cuts[cuts.len() - 1], tol));
    for w in cuts.windows(2) {
        sum.add(adaptive_simpson(inner, w[1], w[0], tol));
    }
    sum.add(adaptive_simpson(integrand, SPLIT, FRAC_PI_2, 0.5 * ETA_TOL));
    sum.value()
}

/// The unique `C` with `η(C) = alpha`.
///
/// Brackets the excess `C - K2 t²` from below (shrinking by factors of 100
/// until `η` exceeds `alpha`) and from above (doubling until `η` falls below
/// `alpha`), then bisects in `ln(C - K2 t²)`.
pub fn solve_first_integral_constant(
    k: &ElasticConstants,
    t: Chirality,
    alpha: f64,
) -> Result<FirstIntegral> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
    }
    let rc = ReducedCoefficients::new(k, t);
    let eta = |x: f64| eta_excess(x, &rc);

    let mut lo = 1.0;
    while eta(lo) <= alpha {
        lo *= 1e-2;
        if lo < 1e-290 {
            return Err(Error::NotConverged {
                what: "first-integral bracket",
                detail: format!("eta stays below {alpha}"),
            });
        }
    }
    let mut hi = 1.0;
    while eta(hi) >= alpha {
        hi *= 2.0;
        if hi > 1e290 {
            return Err(Error::NotConverged {
                what: "first-integral bracket",
                detail: format!("eta stays above {alpha}"),
            });
        }
    }
    let lo = lo.min(0.5 * hi);
    let excess = bisect_log(|x| eta(x) - alpha, lo, hi, 1e-14);
    FirstIntegral::from_excess(excess, k, t)
}

/// Integrates `θ' = sqrt((C - g(θ)) / f(θ))`, `θ(0) = 0`, with RK4 on a uniform
/// grid over `[0, length]`; the energy is filled, `φ` is left empty.
fn integrate_theta(
    rc: &ReducedCoefficients,
    c: FirstIntegral,
    length: f64,
    n_nodes: usize,
) -> Result<EulerProfile> {
    if n_nodes < 2 {
        return Err(Error::Domain(format!("n_nodes = {n_nodes}, need at least 2")));
    }
    let h = length / (n_nodes - 1) as f64;
    let sub = substeps(n_nodes);
    let hs = h / sub as f64;
    let excess = c.excess;
    let rhs = |_z: f64, y: &[f64; 1]| [rc.slope(excess, y[0])];
    let mut theta = Vec::with_capacity(n_nodes);
    theta.push(0.0);
    let mut fine = Vec::with_capacity((n_nodes - 1) * sub + 1);
    fine.push(0.0);
    let mut y = [0.0];
    for i in 1..n_nodes {
        for s in 0..sub {
            y = rk4_step(&rhs, (i - 1) as f64 * h + s as f64 * hs, &y, hs);
            fine.push(y[0]);
        }
        theta.push(y[0]);
    }
    let last = theta[n_nodes - 1];
    if (last - FRAC_PI_2).abs() > ENDPOINT_TOL {
        return Err(Error::NotConverged {
            what: "theta profile",
            detail: format!("theta(end) - pi/2 = {:e}", last - FRAC_PI_2),
        });
    }
    theta[n_nodes - 1] = FRAC_PI_2;
    *fine.last_mut().unwrap() = FRAC_PI_2;

    let z_nodes: Vec<f64> = (0..n_nodes).map(|i| i as f64 * h).collect();
    let energy = trapezoid(hs, fine.iter().map(|&th| excess + 2.0 * rc.deficit(th)));
    Ok(EulerProfile {
        z_nodes,
        theta,
        phi: Vec::new(),
        first_integral_constant: c.value(),
        first_integral_excess: excess,
        energy_per_area: energy,
    })
}

/// RK4 substeps per output interval, so coarse output grids keep the
/// accuracy of a fine one.
fn substeps(n_nodes: usize) -> usize {
    MIN_STEPS.div_ceil(n_nodes - 1).max(1)
}

fn trapezoid(h: f64, values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len();
    let mut acc = CompensatedSum::new();
    for (i, v) in values.enumerate() {
        acc.add(if i == 0 || i + 1 == n { 0.5 * v } else { v });
    }
    h * acc.value()
}

/// Elevation profile on `[0, 1]` for a given first-integral constant.
pub fn theta_profile(
    c: FirstIntegral,
    k: &ElasticConstants,
    t: Chirality,
    n_nodes: usize,
) -> Result<EulerProfile> {
    integrate_theta(&ReducedCoefficients::new(k, t), c, 1.0, n_nodes)
}

/// Fills `φ` by integrating the azimuth equation jointly with the elevation
/// equation on the profile grid, so RK4 stages see consistent `θ` values.
pub fn phi_profile(
    mut profile: EulerProfile,
    k: &ElasticConstants,
    t: Chirality,
) -> EulerProfile {
    let rc = ReducedCoefficients::new(k, t);
    let excess = profile.first_integral_excess;
    let n = profile.theta.len();
    let h = profile.length() / (n - 1) as f64;
    let rhs = |_z: f64, y: &[f64; 2]| [rc.slope(excess, y[0]), rc.phi_rate(y[0])];
    let sub = substeps(n);
    let hs = h / sub as f64;
    let mut phi = Vec::with_capacity(n);
    phi.push(0.0);
    for i in 1..n {
        let mut y = [profile.theta[i - 1], phi[i - 1]];
        for s in 0..sub {
            y = rk4_step(&rhs, (i - 1) as f64 * h + s as f64 * hs, &y, hs);
        }
        phi.push(y[1]);
    }
    profile.phi = phi;
    profile
}

/// The minimizer among one-variable fields: solves for `C`, integrates `θ`
/// and then `φ`.
pub fn minimize_1d(k: &ElasticConstants, t: Chirality, n_nodes: usize) -> Result<EulerProfile> {
    let c = solve_first_integral_constant(k, t, 1.0)?;
    let profile = theta_profile(c, k, t, n_nodes)?;
    Ok(phi_profile(profile, k, t))
}

/// `min F_α` over `v(0) = 0`, `v(α) = π/2`, with
/// `F_α(v) = ∫_0^α f(v)v'² - g(v) + K2 t² dz`.
pub fn restricted_minimum(alpha: f64, k: &ElasticConstants, t: Chirality) -> Result<f64> {
    restricted_profile(alpha, k, t, RESTRICTED_NODES).map(|p| p.energy_per_area)
}

/// The minimizing profile of [`restricted_minimum`] on `[0, alpha]`.
pub fn restricted_profile(
    alpha: f64,
    k: &ElasticConstants,
    t: Chirality,
    n_nodes: usize,
) -> Result<EulerProfile> {
    let c = solve_first_integral_constant(k, t, alpha)?;
    integrate_theta(&ReducedCoefficients::new(k, t), c, alpha, n_nodes)
}

/// Nodal `θ'` by sixth-order finite differences: centered in the interior,
/// one-sided seven-point stencils at the three nodes closest to each end.
/// Needs at least seven nodes; falls back to second order otherwise.
pub fn theta_derivative(theta: &[f64], h: f64) -> Vec<f64> {
    let n = theta.len();
    if n < 7 {
        return second_order_derivative(theta, h);
    }
    // rows of the 7-point first-derivative stencils on offsets 0..=6, for the
    // node at position r = 0, 1, 2 of the window
    const ONE_SIDED: [[f64; 7]; 3] = [
        [-147.0, 360.0, -450.0, 400.0, -225.0, 72.0, -10.0],
        [-10.0, -77.0, 150.0, -100.0, 50.0, -15.0, 2.0],
        [2.0, -24.0, -35.0, 80.0, -30.0, 8.0, -1.0],
    ];
    const CENTERED: [f64; 7] = [-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0];
    let mut d = vec![0.0; n];
    for (i, di) in d.iter_mut().enumerate() {
        let (start, coeffs, sign) = if i < 3 {
            (0, &ONE_SIDED[i], 1.0)
        } else if i + 3 >= n {
            // mirror of the left stencils
            (n - 7, &ONE_SIDED[n - 1 - i], -1.0)
        } else {
            (i - 3, &CENTERED, 1.0)
        };
        let mut acc = 0.0;
        for (j, &w) in coeffs.iter().enumerate() {
            let idx = if sign > 0.0 { start + j } else { n - 1 - j };
            acc += w * theta[idx];
        }
        *di = sign * acc / (60.0 * h);
    }
    d
}

fn second_order_derivative(theta: &[f64], h: f64) -> Vec<f64> {
    let n = theta.len();
    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = (theta[1] - theta[0]) / h;
        d[1] = d[0];
        return d;
    }
    d[0] = (-3.0 * theta[0] + 4.0 * theta[1] - theta[2]) / (2.0 * h);
    d[n - 1] = (3.0 * theta[n - 1] - 4.0 * theta[n - 2] + theta[n - 3]) / (2.0 * h);
    for i in 1..n - 1 {
        d[i] = (theta[i + 1] - theta[i - 1]) / (2.0 * h);
    }
    d
}

/// `max |f(θ)θ'² + g(θ) - C|` over interior nodes, with `θ'` from
/// [`theta_derivative`].
pub fn first_integral_residual(profile: &EulerProfile, k: &ElasticConstants, t: Chirality) -> f64 {
    let rc = ReducedCoefficients::new(k, t);
    let n = profile.theta.len();
    if n < 3 {
        return 0.0;
    }
    let h = profile.length() / (n - 1) as f64;
    let d = theta_derivative(&profile.theta, h);
    (1..n - 1)
        .map(|i| {
            let th = profile.theta[i];
            (rc.f(th) * d[i] * d[i] - rc.deficit(th) - profile.first_integral_excess).abs()
        })
        .fold(0.0, f64::max)
}

/// `δ_t = D - t²` for a one-constant profile. Must lie in `(0, π²/4]`.
pub fn delta_t(profile: &EulerProfile, k: &ElasticConstants) -> Result<f64> {
    if !k.one_constant {
        return Err(Error::Domain("delta_t is defined for one-constant profiles".into()));
    }
    let delta = profile.first_integral_excess / k.k1;
    let cap = PI * PI / 4.0;
    if !(delta > 0.0 && delta <= cap * (1.0 + 1e-9)) {
        return Err(Error::NotConverged {
            what: "delta_t window",
            detail: format!("delta_t = {delta} outside (0, pi^2/4]"),
        });
    }
    Ok(delta)
}

#[cfg(test)]
mod tests;
