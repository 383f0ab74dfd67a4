use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::Dims;
use crate::density::{
    frank_density_partials, frank_density_raw, one_constant_density_raw, one_constant_partials,
};
use crate::model::{DomainSpec, ElasticConstants, Mat3, Vec3};
use crate::numeric::CompensatedSum;

/// Difference formula for `∂z` on the two plates. Interior levels always use
/// the centered formula.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZClosure {
    /// Two-point one-sided differences on the plates. Together with the
    /// trapezoid weights this satisfies discrete summation by parts, so
    /// null Lagrangians integrate to zero up to rounding.
    #[default]
    Summation,
    /// Three-point second-order one-sided differences on the plates.
    SecondOrder,
}

/// Difference and quadrature operators for one grid shape.
#[derive(Debug, Clone)]
pub struct Operators {
    dims: Dims,
    inv2hx: f64,
    inv2hy: f64,
    /// `(level, coefficient)` pairs of `∂z` at each level.
    dz: Vec<Vec<(usize, f64)>>,
    /// Transpose of `dz`: for each level, the levels whose `∂z` reads it.
    dz_t: Vec<Vec<(usize, f64)>>,
    /// Quadrature weight of a node on each level.
    weight: Vec<f64>,
}

impl Operators {
    pub fn new(dims: Dims, domain: DomainSpec, closure: ZClosure) -> Self {
        let nz = dims.nz;
        let hx = 2.0 * domain.l1 / dims.nx as f64;
        let hy = 2.0 * domain.l2 / dims.ny as f64;
        let hz = dims.hz();
        let mut dz = Vec::with_capacity(nz);
        for k in 0..nz {
            let row = if k == 0 {
                match closure {
                    ZClosure::Summation => vec![(0, -1.0 / hz), (1, 1.0 / hz)],
                    ZClosure::SecondOrder => {
                        vec![(0, -1.5 / hz), (1, 2.0 / hz), (2, -0.5 / hz)]
                    }
                }
            } else if k == nz - 1 {
                match closure {
                    ZClosure::Summation => vec![(k - 1, -1.0 / hz), (k, 1.0 / hz)],
                    ZClosure::SecondOrder => {
                        vec![(k - 2, 0.5 / hz), (k - 1, -2.0 / hz), (k, 1.5 / hz)]
                    }
                }
            } else {
                vec![(k - 1, -0.5 / hz), (k + 1, 0.5 / hz)]
            };
            dz.push(row);
        }
        let mut dz_t = vec![Vec::new(); nz];
        for (k, row) in dz.iter().enumerate() {
            for &(q, c) in row {
                dz_t[q].push((k, c));
            }
        }
        let weight = (0..nz)
            .map(|k| {
                let wz = if k == 0 || k == nz - 1 { 0.5 * hz } else { hz };
                hx * hy * wz
            })
            .collect();
        Self { dims, inv2hx: 0.5 / hx, inv2hy: 0.5 / hy, dz, dz_t, weight }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// Quadrature weight of the nodes on level `k`.
    pub fn weight(&self, k: usize) -> f64 {
        self.weight[k]
    }

    #[inline]
    fn wrap(i: usize, n: usize, forward: bool) -> usize {
        if forward {
            if i + 1 == n {
                0
            } else {
                i + 1
            }
        } else if i == 0 {
            n - 1
        } else {
            i - 1
        }
    }

    /// Discrete `grad[a][b] = ∂_b v_a` at node `(i, j, k)`.
    #[inline]
    pub fn gradient(&self, v: &[Vec3], i: usize, j: usize, k: usize) -> Mat3 {
        let d = self.dims;
        let (ip, im) = (Self::wrap(i, d.nx, true), Self::wrap(i, d.nx, false));
        let (jp, jm) = (Self::wrap(j, d.ny, true), Self::wrap(j, d.ny, false));
        let xp = v[d.index(ip, j, k)];
        let xm = v[d.index(im, j, k)];
        let yp = v[d.index(i, jp, k)];
        let ym = v[d.index(i, jm, k)];
        let mut g = [[0.0; 3]; 3];
        for a in 0..3 {
            g[a][0] = (xp[a] - xm[a]) * self.inv2hx;
            g[a][1] = (yp[a] - ym[a]) * self.inv2hy;
        }
        for &(q, c) in &self.dz[k] {
            let w = v[d.index(i, j, q)];
            for a in 0..3 {
                g[a][2] += c * w[a];
            }
        }
        g
    }

    /// `Σ_p W_p density(p, v_p, grad_p)`, summed per level in parallel and
    /// combined in level order.
    pub fn integrate<F>(&self, v: &[Vec3], density: F) -> f64
    where
        F: Fn(usize, &Vec3, &Mat3) -> f64 + Sync,
    {
        let d = self.dims;
        let slabs: Vec<f64> = (0..d.nz)
            .into_par_iter()
            .map(|k| {
                let mut acc = CompensatedSum::new();
                for j in 0..d.ny {
                    for i in 0..d.nx {
                        let g = self.gradient(v, i, j, k);
                        let p = d.index(i, j, k);
                        acc.add(density(p, &v[p], &g));
                    }
                }
                self.weight[k] * acc.value()
            })
            .collect();
        slabs.into_iter().collect::<CompensatedSum>().value()
    }

    /// Derivative of [`Self::integrate`] with respect to every nodal value,
    /// given the pointwise partials of the density.
    pub fn integrate_derivative<F>(&self, v: &[Vec3], partials: F) -> Vec<Vec3>
    where
        F: Fn(&Vec3, &Mat3) -> (Vec3, Mat3) + Sync,
    {
        let d = self.dims;
        let slab = d.slab();
        let mut dn = vec![[0.0; 3]; d.len()];
        let mut dg = vec![[[0.0; 3]; 3]; d.len()];
        dn.par_chunks_mut(slab).zip(dg.par_chunks_mut(slab)).enumerate().for_each(
            |(k, (dn, dg))| {
                let w = self.weight[k];
                for j in 0..d.ny {
                    for i in 0..d.nx {
                        let p = d.index(i, j, k);
                        let (a, b) = partials(&v[p], &self.gradient(v, i, j, k));
                        let l = i + d.nx * j;
                        dn[l] = a.map(|x| w * x);
                        dg[l] = b.map(|r| r.map(|x| w * x));
                    }
                }
            },
        );

        let mut out = vec![[0.0; 3]; d.len()];
        out.par_chunks_mut(slab).enumerate().for_each(|(k, out)| {
            for j in 0..d.ny {
                let (jp, jm) = (Self::wrap(j, d.ny, true), Self::wrap(j, d.ny, false));
                for i in 0..d.nx {
                    let (ip, im) = (Self::wrap(i, d.nx, true), Self::wrap(i, d.nx, false));
                    let mut g = dn[d.index(i, j, k)];
                    let (xm, xp) = (&dg[d.index(im, j, k)], &dg[d.index(ip, j, k)]);
                    let (ym, yp) = (&dg[d.index(i, jm, k)], &dg[d.index(i, jp, k)]);
                    for a in 0..3 {
                        g[a] += (xm[a][0] - xp[a][0]) * self.inv2hx;
                        g[a] += (ym[a][1] - yp[a][1]) * self.inv2hy;
                    }
                    for &(q, c) in &self.dz_t[k] {
                        let m = &dg[d.index(i, j, q)];
                        for a in 0..3 {
                            g[a] += c * m[a][2];
                        }
                    }
                    out[i + d.nx * j] = g;
                }
            }
        });
        out
    }
}

/// Pointwise density with its partials, selecting the one-constant form when
/// the constants allow it.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Density {
    k: ElasticConstants,
    t: f64,
}

impl Density {
    pub(crate) fn new(k: &ElasticConstants, t: f64) -> Self {
        Self { k: *k, t }
    }

    #[inline]
    pub(crate) fn value(&self, n: &Vec3, g: &Mat3) -> f64 {
        if self.k.one_constant {
            self.k.k1 * one_constant_density_raw(n, g, self.t)
        } else {
            frank_density_raw(n, g, &self.k, self.t)
        }
    }

    #[inline]
    pub(crate) fn partials(&self, n: &Vec3, g: &Mat3) -> (Vec3, Mat3) {
        if self.k.one_constant {
            let (a, b) = one_constant_partials(n, g, self.t);
            let k = self.k.k1;
            (a.map(|x| k * x), b.map(|r| r.map(|x| k * x)))
        } else {
            frank_density_partials(n, g, &self.k, self.t)
        }
    }
}
