//! Domain types shared by every solver: elastic constants, chirality, the
//! cell geometry and unit director values.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Vec3 = [f64; 3];

/// Gradient matrix with `g[i][j] = ∂n_i/∂x_j`.
pub type Mat3 = [[f64; 3]; 3];

/// Tolerance on `|n| = 1` after an explicit projection.
pub const UNIT_TOL: f64 = 1e-12;

/// Tolerance on `|n| = 1` for values read back from text files.
pub const UNIT_TOL_IO: f64 = 1e-8;

/// The four Frank constants. `k1`, `k2`, `k3` are strictly positive; `k4` is
/// the saddle-splay partner and may have either sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticConstants {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub one_constant: bool,
}

impl ElasticConstants {
    /// Validates the constants. The one-constant flag is set when
    /// `k1 = k2 = k3` and `k4 = 0`.
    pub fn new(k1: f64, k2: f64, k3: f64, k4: f64) -> Result<Self> {
        for (what, v) in [("k1", k1), ("k2", k2), ("k3", k3), ("k4", k4)] {
            if !v.is_finite() {
                return Err(Error::NonFinite { what, value: v });
            }
        }
        if k1 <= 0.0 || k2 <= 0.0 || k3 <= 0.0 {
            return Err(Error::InvalidConstants(format!(
                "k1, k2, k3 must be positive (got {k1}, {k2}, {k3})"
            )));
        }
        let one_constant = k1 == k2 && k2 == k3 && k4 == 0.0;
        Ok(Self { k1, k2, k3, k4, one_constant })
    }

    /// `K1 = K2 = K3 = k`, `K4 = 0`.
    pub fn uniform(k: f64) -> Result<Self> {
        Self::new(k, k, k, 0.0)
    }

    /// The normalized one-constant model, `K = 1`.
    pub fn one_constant() -> Self {
        Self { k1: 1.0, k2: 1.0, k3: 1.0, k4: 0.0, one_constant: true }
    }
}

/// Chirality `t >= 0`. A negative input is folded onto its absolute value by
/// the reflection `x -> -x`; `reflected` records that this happened.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Chirality {
    t: f64,
    reflected: bool,
}

impl Chirality {
    pub fn new(t_raw: f64) -> Result<Self> {
        normalize_chirality(t_raw)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn reflected(&self) -> bool {
        self.reflected
    }
}

pub fn normalize_chirality(t_raw: f64) -> Result<Chirality> {
    if !t_raw.is_finite() {
        return Err(Error::NonFinite { what: "chirality", value: t_raw });
    }
    Ok(Chirality { t: t_raw.abs(), reflected: t_raw < 0.0 })
}

/// Lateral half-widths of the cell. The height is normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub l1: f64,
    pub l2: f64,
}

impl DomainSpec {
    pub fn new(l1: f64, l2: f64) -> Result<Self> {
        if !(l1.is_finite() && l2.is_finite()) || l1 <= 0.0 || l2 <= 0.0 {
            return Err(Error::Domain(format!(
                "half-widths must be positive and finite (got {l1}, {l2})"
            )));
        }
        Ok(Self { l1, l2 })
    }

    /// `4 l1 l2`, the cross-section area; equals the cell volume.
    pub fn area(&self) -> f64 {
        4.0 * self.l1 * self.l2
    }
}

impl Default for DomainSpec {
    fn default() -> Self {
        Self { l1: 0.25, l2: 0.25 }
    }
}

/// A unit vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectorValue(Vec3);

impl DirectorValue {
    /// Accepts `v` if `| |v| - 1 | <= tol`, without modifying it.
    pub fn new(v: Vec3, tol: f64) -> Result<Self> {
        let r = norm(&v);
        if !r.is_finite() || (r - 1.0).abs() > tol {
            return Err(Error::Domain(format!("|n| = {r}, expected 1")));
        }
        Ok(Self(v))
    }

    /// Projects `v` onto the sphere.
    pub fn normalized(v: Vec3) -> Result<Self> {
        let r = norm(&v);
        if !r.is_finite() || r == 0.0 {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        Ok(Self([v[0] / r, v[1] / r, v[2] / r]))
    }

    pub fn e1() -> Self {
        Self([1.0, 0.0, 0.0])
    }

    pub fn e3() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn as_array(&self) -> &Vec3 {
        &self.0
    }
}

impl From<DirectorValue> for Vec3 {
    fn from(d: DirectorValue) -> Vec3 {
        d.0
    }
}

#[inline]
pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// `(1 - cos x) / x^2`, with the removable singularity at 0 valued 1/2.
pub fn angle_ratio(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        // 1/2 - x^2/24 + O(x^4)
        0.5 - x * x / 24.0
    } else {
        let s = (0.5 * x).sin();
        2.0 * s * s / (x * x)
    }
}

/// `inf_{x ∈ [-π, π]} (1 - cos x)/x^2`, the constant `C` in
/// `|n1 - n2|^2 >= C |θ1 - θ2|^2` for unit vectors with elevation angles
/// `θ1, θ2 ∈ [-π/2, π/2]`.
///
/// The ratio is even, so the scan covers `[0, π]` including both endpoints.
pub fn angle_inequality_constant() -> f64 {
    const SAMPLES: usize = 1 << 16;
    let pi = std::f64::consts::PI;
    (0..=SAMPLES)
        .map(|i| {
            let x = if i == SAMPLES { pi } else { pi * i as f64 / SAMPLES as f64 };
            angle_ratio(x)
        })
        .fold(f64::INFINITY, f64::min)
}
