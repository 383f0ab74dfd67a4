use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::{BoundaryCondition, Dims, DirectorGrid};
use crate::model::{dot, norm, DomainSpec, Vec3};
use crate::profile1d::EulerProfile;
use crate::Result;

/// Largest lateral wavenumber of the random modes.
pub const MAX_LATERAL_MODE: i32 = 3;
/// Largest vertical wavenumber of the random modes.
pub const MAX_VERTICAL_MODE: i32 = 2;
/// Mode amplitude used by [`smooth_periodic_sample`].
pub const SAMPLE_AMPLITUDE: f64 = 0.5;

/// `n = (cos φ cos θ, sin φ cos θ, sin θ)` with `θ`, `φ` interpolated
/// linearly from the profile. Profiles starting at `θ = π/2` are embedded with
/// homeotropic anchoring, all others with frustrated anchoring.
pub fn embed_profile(profile: &EulerProfile, dims: Dims, domain: DomainSpec) -> Result<DirectorGrid> {
    let bc = if (profile.theta[0] - FRAC_PI_2).abs() < 1e-12 {
        BoundaryCondition::Homeotropic
    } else {
        BoundaryCondition::Frustrated
    };
    DirectorGrid::from_fn(dims, domain, bc, |_, _, z| {
        let (th, ph) = profile.angles_at(z * profile.length());
        let (st, ct) = th.sin_cos();
        let (sp, cp) = ph.sin_cos();
        [cp * ct, sp * ct, st]
    })
}

/// Fields interpolating the anchoring along a great circle:
/// `(cos(πz/2), 0, sin(πz/2))` for frustrated and `e3` for homeotropic
/// anchoring.
pub fn great_circle(dims: Dims, domain: DomainSpec, bc: BoundaryCondition) -> DirectorGrid {
    match bc {
        BoundaryCondition::Homeotropic => DirectorGrid::uniform_e3(dims, domain),
        BoundaryCondition::Frustrated => {
            DirectorGrid::from_fn(dims, domain, bc, |_, _, z| {
                let (s, c) = (FRAC_PI_2 * z).sin_cos();
                [c, 0.0, s]
            })
            .expect("great circle is nonzero")
        }
    }
}

struct Mode {
    kx: i32,
    ky: i32,
    kz: i32,
    phase: f64,
    coef: Vec3,
}

/// Random vector field `Σ a_m cos(kx ξ + ky η + ψ_m) sin(π kz z)` with
/// `ξ, η` the lateral coordinates scaled to period `2π`. Coefficients decay
/// like `1/|k|²` and are normalized by `Σ |a_m|`, so the field is bounded by 1
/// on any grid.
fn random_modes(seed: u64) -> Vec<Mode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut modes = Vec::new();
    for kz in 1..=MAX_VERTICAL_MODE {
        for kx in -MAX_LATERAL_MODE..=MAX_LATERAL_MODE {
            for ky in 0..=MAX_LATERAL_MODE {
                if ky == 0 && kx < 0 {
                    continue;
                }
                let phase = rng.gen_range(0.0..2.0 * PI);
                let decay = 1.0 / (kx * kx + ky * ky + kz * kz) as f64;
                let coef = [(); 3].map(|_| decay * rng.gen_range(-1.0..1.0));
                modes.push(Mode { kx, ky, kz, phase, coef });
            }
        }
    }
    let total: f64 = modes.iter().map(|m| norm(&m.coef)).sum();
    for m in &mut modes {
        m.coef = m.coef.map(|c| c / total);
    }
    modes
}

fn eval_modes(modes: &[Mode], domain: &DomainSpec, x: f64, y: f64, z: f64) -> Vec3 {
    let xi = PI * (x + domain.l1) / domain.l1;
    let eta = PI * (y + domain.l2) / domain.l2;
    let mut v = [0.0; 3];
    for m in modes {
        let s = (m.kx as f64 * xi + m.ky as f64 * eta + m.phase).cos() * (PI * m.kz as f64 * z).sin();
        for c in 0..3 {
            v[c] += m.coef[c] * s;
        }
    }
    v
}

/// Adds `amplitude` times the tangential part of a seeded low-mode field to
/// every interior node and renormalizes. The plates are untouched.
pub fn random_perturbation(grid: &DirectorGrid, amplitude: f64, seed: u64) -> DirectorGrid {
    if amplitude == 0.0 {
        return grid.clone();
    }
    let modes = random_modes(seed);
    let d = grid.dims();
    let domain = grid.domain();
    let field = grid.field();
    let mut out = grid.clone();
    for k in 1..d.nz - 1 {
        for j in 0..d.ny {
            for i in 0..d.nx {
                let p = d.index(i, j, k);
                let v = eval_modes(&modes, &domain, field.x(i), field.y(j), field.z(k));
                let n = out.values()[p];
                let s = dot(&v, &n);
                let node = &mut out.values_mut()[p];
                for c in 0..3 {
                    node[c] = n[c] + amplitude * (v[c] - s * n[c]);
                }
            }
        }
    }
    out.project();
    out
}

/// A smooth admissible field: [`great_circle`] perturbed by
/// [`random_perturbation`] with amplitude [`SAMPLE_AMPLITUDE`].
pub fn smooth_periodic_sample(seed: u64, dims: Dims, domain: DomainSpec, bc: BoundaryCondition) -> DirectorGrid {
    random_perturbation(&great_circle(dims, domain, bc), SAMPLE_AMPLITUDE, seed)
}
