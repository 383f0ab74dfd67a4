use serde::{Deserialize, Serialize};

use super::energy::{energy_with, gradient_with};
use super::grid::DirectorGrid;
use super::stencil::{Operators, ZClosure};
use crate::model::{dot, Chirality, ElasticConstants, Vec3};
use crate::{Error, Result};

/// Largest number of step halvings per iteration.
pub const MAX_HALVINGS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxOptions {
    pub max_iter: usize,
    /// Threshold on the largest nodal norm of the tangent gradient divided
    /// by the node's quadrature weight.
    pub grad_tol: f64,
    pub step_init: f64,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        Self { max_iter: 20_000, grad_tol: 1e-6, step_init: 1e-2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxationReport {
    /// Energy before the first step and after every accepted step.
    pub energy_trace: Vec<f64>,
    pub iterations: usize,
    pub final_gradient_norm: f64,
    pub converged: bool,
    /// Set when no step within [`MAX_HALVINGS`] halvings lowered the energy.
    pub stalled: bool,
}

impl RelaxationReport {
    pub fn final_energy(&self) -> f64 {
        *self.energy_trace.last().expect("trace starts with the initial energy")
    }
}

/// Projected gradient descent on the sphere.
///
/// Each iteration moves along the negative tangent gradient (divided by the
/// nodal quadrature weights), renormalizes, and halves the trial step until
/// the energy decreases. Trial steps after the first use the
/// Barzilai–Borwein length of the previous step.
pub fn relax(
    grid: &DirectorGrid,
    k: &ElasticConstants,
    t: Chirality,
    opts: &RelaxOptions,
) -> Result<(DirectorGrid, RelaxationReport)> {
    if !(opts.grad_tol >= 0.0 && opts.step_init > 0.0 && opts.step_init.is_finite()) {
        return Err(Error::Domain(format!(
            "grad_tol must be >= 0 and step_init positive (got {}, {})",
            opts.grad_tol, opts.step_init
        )));
    }
    let ops = Operators::new(grid.dims(), grid.domain(), ZClosure::default());
    let d = grid.dims();
    let slab = d.slab();
    let inv_w: Vec<f64> = (0..d.len()).map(|p| 1.0 / ops.weight(p / slab)).collect();
    let weights: Vec<f64> = (0..d.len()).map(|p| ops.weight(p / slab)).collect();

    let direction = |g: &DirectorGrid| -> Vec<Vec3> {
        let mut v = gradient_with(&ops, g, k, t);
        for (x, w) in v.iter_mut().zip(&inv_w) {
            *x = x.map(|c| c * w);
        }
        v
    };
    let sup = |v: &[Vec3]| v.iter().map(|x| dot(x, x).sqrt()).fold(0.0, f64::max);

    let mut x = grid.clone();
    let mut e = energy_with(&ops, &x, k, t);
    let mut g = direction(&x);
    let mut gnorm = sup(&g);
    let mut trace = vec![e];
    let mut step = opts.step_init;
    let mut iterations = 0;
    let mut stalled = false;

    while gnorm >= opts.grad_tol && iterations < opts.max_iter {
        let mut a = step;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let mut trial = x.clone();
            trial.step(&g, a);
            let et = energy_with(&ops, &trial, k, t);
            if et < e {
                accepted = Some((trial, et));
                break;
            }
            a *= 0.5;
        }
        let Some((next, en)) = accepted else {
            stalled = true;
            break;
        };
        let gn = direction(&next);

        // Barzilai–Borwein length from the weighted step and gradient change
        let (mut ss, mut sy) = (0.0, 0.0);
        for p in 0..d.len() {
            let (xa, xb) = (x.values()[p], next.values()[p]);
            for c in 0..3 {
                let s = xb[c] - xa[c];
                ss += weights[p] * s * s;
                sy += weights[p] * s * (gn[p][c] - g[p][c]);
            }
        }
        step = if sy > 0.0 && ss > 0.0 { ss / sy } else { 2.0 * a };

        x = next;
        e = en;
        g = gn;
        gnorm = sup(&g);
        trace.push(e);
        iterations += 1;
    }

    let converged = gnorm < opts.grad_tol;
    let report = RelaxationReport {
        energy_trace: trace,
        iterations,
        final_gradient_norm: gnorm,
        converged,
        stalled,
    };
    Ok((x, report))
}

impl DirectorGrid {
    /// `n <- (n - a v) / |n - a v|` on interior nodes.
    pub(crate) fn step(&mut self, v: &[Vec3], a: f64) {
        for (n, d) in self.values_mut().iter_mut().zip(v) {
            for c in 0..3 {
                n[c] -= a * d[c];
            }
        }
        self.project();
    }
}
