use super::grid::{DirectorGrid, VectorField};
use super::stencil::{Density, Operators, ZClosure};
use crate::density::{curl, frobenius_sq, saddle_splay};
use crate::model::{dot, norm, Chirality, ElasticConstants, Vec3};

fn operators(field: &VectorField) -> Operators {
    Operators::new(field.dims(), field.domain(), ZClosure::default())
}

/// `∫ w(n, ∇n) dx` with periodic centered differences in `x`, `y` and
/// trapezoid weights in `z`.
pub fn discrete_energy(grid: &DirectorGrid, k: &ElasticConstants, t: Chirality) -> f64 {
    energy_with(&operators(grid.field()), grid, k, t)
}

pub fn energy_with(ops: &Operators, grid: &DirectorGrid, k: &ElasticConstants, t: Chirality) -> f64 {
    let w = Density::new(k, t.t());
    ops.integrate(grid.values(), |_, n, g| w.value(n, g))
}

/// Derivative of [`discrete_energy`] with respect to the nodal values,
/// projected onto each tangent plane. Zero on the plates.
pub fn discrete_gradient(grid: &DirectorGrid, k: &ElasticConstants, t: Chirality) -> VectorField {
    let values = gradient_with(&operators(grid.field()), grid, k, t);
    VectorField::new(grid.dims(), grid.domain(), values).expect("gradient has grid shape")
}

pub fn gradient_with(ops: &Operators, grid: &DirectorGrid, k: &ElasticConstants, t: Chirality) -> Vec<Vec3> {
    let w = Density::new(k, t.t());
    let mut g = ops.integrate_derivative(grid.values(), |n, m| w.partials(n, m));
    let slab = grid.dims().slab();
    let len = g.len();
    for (p, (gp, n)) in g.iter_mut().zip(grid.values()).enumerate() {
        if p < slab || p >= len - slab {
            *gp = [0.0; 3];
        } else {
            let s = dot(gp, n);
            for a in 0..3 {
                gp[a] -= s * n[a];
            }
        }
    }
    g
}

/// `∫ tr((∇v)²) - (∇·v)² dx` with the stencils of [`discrete_energy`]. Unit
/// length is not required.
pub fn saddle_splay_integral(field: &impl AsRef<VectorField>) -> f64 {
    let field = field.as_ref();
    saddle_splay_with(&operators(field), field)
}

pub fn saddle_splay_with(ops: &Operators, field: &VectorField) -> f64 {
    ops.integrate(field.values(), |_, _, g| saddle_splay(g))
}

/// Largest interior norm of `Δn - 2t curl n + (|∇n|² + 2t n·curl n) n`,
/// with compact second differences for `Δn` and centered first differences
/// elsewhere.
pub fn el_residual(grid: &DirectorGrid, t: Chirality) -> f64 {
    let d = grid.dims();
    let ops = operators(grid.field());
    let v = grid.values();
    let t = t.t();
    let hx = 2.0 * grid.domain().l1 / d.nx as f64;
    let hy = 2.0 * grid.domain().l2 / d.ny as f64;
    let hz = d.hz();
    let mut worst = 0.0f64;
    for k in 1..d.nz - 1 {
        for j in 0..d.ny {
            for i in 0..d.nx {
                let n = v[d.index(i, j, k)];
                let at = |i: usize, j: usize, k: usize| v[d.index(i, j, k)];
                let (ip, im) = ((i + 1) % d.nx, (i + d.nx - 1) % d.nx);
                let (jp, jm) = ((j + 1) % d.ny, (j + d.ny - 1) % d.ny);
                let g = ops.gradient(v, i, j, k);
                let c = curl(&g);
                let lambda = frobenius_sq(&g) + 2.0 * t * dot(&n, &c);
                let mut r = [0.0; 3];
                for a in 0..3 {
                    let lap = (at(ip, j, k)[a] - 2.0 * n[a] + at(im, j, k)[a]) / (hx * hx)
                        + (at(i, jp, k)[a] - 2.0 * n[a] + at(i, jm, k)[a]) / (hy * hy)
                        + (at(i, j, k + 1)[a] - 2.0 * n[a] + at(i, j, k - 1)[a]) / (hz * hz);
                    r[a] = lap - 2.0 * t * c[a] + lambda * n[a];
                }
                worst = worst.max(norm(&r));
            }
        }
    }
    worst
}
