//! Coercivity constants for global stability of the one-dimensional
//! minimizer (frustrated anchoring) and of the unwound state `e3`
//! (homeotropic anchoring), and the quadratic functional `H` whose value is
//! the energy excess over the minimizer.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::density::{curl, frobenius_sq};
use crate::field3d::{energy_with, DirectorGrid, Operators, VectorField, ZClosure};
use crate::model::{dot, Chirality, ElasticConstants};
use crate::profile1d::{delta_t, EulerProfile};
use crate::{Error, Result};

/// Largest nodal norm a difference field may have on the plates.
pub const PLATE_TOL: f64 = 1e-10;

/// `1 - 1/(2√2)`: the share of the Dirichlet energy left after absorbing the
/// twist term with the Cauchy weight `ε = 4t`.
fn dirichlet_share() -> f64 {
    1.0 - 1.0 / (2.0 * SQRT_2)
}

/// `π²(1 - 1/(2√2)) - (π²/4 + t² + 4√2 t²)`.
pub fn gamma_frustrated(t: Chirality) -> f64 {
    let t2 = t.t() * t.t();
    PI * PI * dirichlet_share() - (PI * PI / 4.0 + t2 + 4.0 * SQRT_2 * t2)
}

/// `π²(1 - 1/(2√2)) - 4√2 t²`.
pub fn gamma_homeotropic(t: Chirality) -> f64 {
    let t2 = t.t() * t.t();
    PI * PI * dirichlet_share() - 4.0 * SQRT_2 * t2
}

/// Coefficient of `t²` in [`gamma_frustrated`].
pub fn frustrated_quadratic_coefficient() -> f64 {
    1.0 + 4.0 * SQRT_2
}

/// Positive root of [`gamma_frustrated`].
pub fn threshold_frustrated() -> f64 {
    (PI * PI * (0.75 - 1.0 / (2.0 * SQRT_2)) / frustrated_quadratic_coefficient()).sqrt()
}

/// Positive root of [`gamma_homeotropic`], `π √(2√2 - 1) / 4`.
pub fn threshold_homeotropic() -> f64 {
    PI * (2.0 * SQRT_2 - 1.0).sqrt() / 4.0
}

/// `(4√2 + 2√11)/3`, the Cauchy weight per unit `t` maximizing the
/// frustrated threshold.
pub fn optimal_cauchy_slope() -> f64 {
    (4.0 * SQRT_2 + 2.0 * 11f64.sqrt()) / 3.0
}

pub fn optimal_cauchy_eps(t: Chirality) -> f64 {
    optimal_cauchy_slope() * t.t()
}

/// Frustrated threshold obtained with Cauchy weight `ε = c t`:
/// `t² = π²(3/4 - √2/c) / (1 + √2 c)`, or 0 when the Dirichlet share is
/// not positive.
pub fn frustrated_threshold_for_slope(c: f64) -> f64 {
    let num = PI * PI * (0.75 - SQRT_2 / c);
    if !(c > 0.0) || num <= 0.0 {
        return 0.0;
    }
    (num / (1.0 + SQRT_2 * c)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityConstants {
    pub gamma_t: f64,
    pub threshold_frustrated: f64,
    pub threshold_homeotropic: f64,
    /// Optimal Cauchy weight per unit `t`.
    pub cauchy_eps_optimal: f64,
}

impl StabilityConstants {
    /// Constants at chirality `t`; `gamma_t` is the frustrated one.
    pub fn at(t: Chirality) -> Self {
        Self {
            gamma_t: gamma_frustrated(t),
            threshold_frustrated: threshold_frustrated(),
            threshold_homeotropic: threshold_homeotropic(),
            cauchy_eps_optimal: optimal_cauchy_slope(),
        }
    }
}

/// `λ(z) = δ_t - t² + 2t² sin²θ(z)` at the `nz` equally spaced levels of
/// `[0, 1]`.
pub fn lambda_field(profile: &EulerProfile, t: Chirality, nz: usize) -> Result<Vec<f64>> {
    let delta = delta_t(profile, &ElasticConstants::one_constant())?;
    let t2 = t.t() * t.t();
    Ok((0..nz)
        .map(|k| {
            let z = k as f64 / (nz - 1) as f64;
            let (th, _) = profile.angles_at(z);
            delta - t2 + 2.0 * t2 * th.sin().powi(2)
        })
        .collect())
}

/// Nodal `|∇n|² + 2t n·curl n` from the grid stencils.
pub fn lambda_discrete(nstar: &DirectorGrid, t: Chirality) -> Vec<f64> {
    lambda_discrete_with(&operators(nstar), nstar, t)
}

fn lambda_discrete_with(ops: &Operators, nstar: &DirectorGrid, t: Chirality) -> Vec<f64> {
    let d = nstar.dims();
    let v = nstar.values();
    let mut out = Vec::with_capacity(d.len());
    for k in 0..d.nz {
        for j in 0..d.ny {
            for i in 0..d.nx {
                let g = ops.gradient(v, i, j, k);
                out.push(frobenius_sq(&g) + 2.0 * t.t() * dot(&v[d.index(i, j, k)], &curl(&g)));
            }
        }
    }
    out
}

/// Multiplier `λ` for [`h_functional`].
#[derive(Debug, Clone, Copy)]
pub enum Lambda<'a> {
    Zero,
    /// One value per `z` level.
    Levels(&'a [f64]),
    /// One value per node.
    Nodes(&'a [f64]),
}

fn operators(field: &impl AsRef<VectorField>) -> Operators {
    let f = field.as_ref();
    Operators::new(f.dims(), f.domain(), ZClosure::default())
}

/// `H(v) = ∫ |∇v|² + 2t v·curl v - λ|v|² dx` with the stencils of the
/// discrete energy. `v` must vanish on the plates.
pub fn h_functional(v: &VectorField, lambda: Lambda<'_>, t: Chirality) -> Result<f64> {
    h_functional_with(&operators(v), v, lambda, t)
}

pub fn h_functional_with(ops: &Operators, v: &VectorField, lambda: Lambda<'_>, t: Chirality) -> Result<f64> {
    let plate = v.max_norm_on_plates();
    if plate > PLATE_TOL {
        return Err(Error::Domain(format!("difference field is {plate:e} on the plates")));
    }
    let d = v.dims();
    match lambda {
        Lambda::Levels(l) if l.len() != d.nz => {
            return Err(Error::InvalidGrid(format!("{} levels of lambda for nz = {}", l.len(), d.nz)))
        }
        Lambda::Nodes(l) if l.len() != d.len() => {
            return Err(Error::InvalidGrid(format!("{} nodal lambda values for {d}", l.len())))
        }
        _ => {}
    }
    let tt = t.t();
    let slab = d.slab();
    Ok(ops.integrate(v.values(), |p, x, g| {
        let l = match lambda {
            Lambda::Zero => 0.0,
            Lambda::Levels(l) => l[p / slab],
            Lambda::Nodes(l) => l[p],
        };
        frobenius_sq(g) + 2.0 * tt * dot(x, &curl(g)) - l * dot(x, x)
    }))
}

/// `∫ |∇v|² dx` with the stencils of the discrete energy.
pub fn dirichlet_integral(v: &VectorField) -> f64 {
    operators(v).integrate(v.values(), |_, _, g| frobenius_sq(g))
}

/// `∫ |v|² dx` with the trapezoid weights of the discrete energy.
pub fn l2_norm_sq(v: &VectorField) -> f64 {
    operators(v).integrate(v.values(), |_, x, _| dot(x, x))
}

/// `|H(n - n*) - (I(n) - I(n*))|` in the one-constant case, with `λ` taken
/// nodally from the stencils of `n*`.
pub fn splitting_residual(n: &DirectorGrid, nstar: &DirectorGrid, t: Chirality) -> Result<f64> {
    splitting_residual_with(&operators(n), n, nstar, t)
}

pub fn splitting_residual_with(
    ops: &Operators,
    n: &DirectorGrid,
    nstar: &DirectorGrid,
    t: Chirality,
) -> Result<f64> {
    let v = n.difference(nstar)?;
    let k = ElasticConstants::one_constant();
    let lambda = lambda_discrete_with(ops, nstar, t);
    let h = h_functional_with(ops, &v, Lambda::Nodes(&lambda), t)?;
    let excess = energy_with(ops, n, &k, t) - energy_with(ops, nstar, &k, t);
    Ok((h - excess).abs())
}

#[cfg(test)]
mod tests;
