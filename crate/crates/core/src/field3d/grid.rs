use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{norm, DomainSpec, Vec3, UNIT_TOL_IO};
use crate::{Error, Result};

/// Anchoring on the plates `z = 0` and `z = 1`. Both kinds are periodic in
/// `x` and `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    /// `n = e1` at the bottom, `n = e3` at the top.
    Frustrated,
    /// `n = e3` on both plates.
    Homeotropic,
}

impl BoundaryCondition {
    pub fn bottom(self) -> Vec3 {
        match self {
            Self::Frustrated => [1.0, 0.0, 0.0],
            Self::Homeotropic => [0.0, 0.0, 1.0],
        }
    }

    pub fn top(self) -> Vec3 {
        [0.0, 0.0, 1.0]
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Frustrated => "frustrated",
            Self::Homeotropic => "homeotropic",
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frustrated" => Ok(Self::Frustrated),
            "homeotropic" => Ok(Self::Homeotropic),
            _ => Err(Error::InvalidGrid(format!("unknown boundary condition `{s}`"))),
        }
    }
}

/// Grid sizes. `x` and `y` are periodic without a duplicated seam node; the
/// `nz` levels include both plates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
}

impl Dims {
    pub fn new(nx: usize, ny: usize, nz: usize) -> Result<Self> {
        if nx < 2 || ny < 2 || nz < 3 {
            return Err(Error::InvalidGrid(format!(
                "dims {nx}x{ny}x{nz}: need nx, ny >= 2 and nz >= 3"
            )));
        }
        Ok(Self { nx, ny, nz })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes per `z` level.
    pub fn slab(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.nx * (j + self.ny * k)
    }

    pub fn hz(&self) -> f64 {
        1.0 / (self.nz - 1) as f64
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.nx, self.ny, self.nz)
    }
}

/// A 3-vector per grid node, not necessarily of unit length.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    dims: Dims,
    domain: DomainSpec,
    values: Vec<Vec3>,
}

impl VectorField {
    pub fn new(dims: Dims, domain: DomainSpec, values: Vec<Vec3>) -> Result<Self> {
        if values.len() != dims.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a {dims} grid",
                values.len()
            )));
        }
        if let Some(v) = values.iter().flatten().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "field value", value: *v });
        }
        Ok(Self { dims, domain, values })
    }

    pub fn zeros(dims: Dims, domain: DomainSpec) -> Self {
        Self { dims, domain, values: vec![[0.0; 3]; dims.len()] }
    }

    pub fn from_fn(dims: Dims, domain: DomainSpec, f: impl Fn(f64, f64, f64) -> Vec3) -> Self {
        let mut values = Vec::with_capacity(dims.len());
        for k in 0..dims.nz {
            for j in 0..dims.ny {
                for i in 0..dims.nx {
                    values.push(f(x_node(&dims, &domain, i), y_node(&dims, &domain, j), z_node(&dims, k)));
                }
            }
        }
        Self { dims, domain, values }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn domain(&self) -> DomainSpec {
        self.domain
    }

    pub fn values(&self) -> &[Vec3] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Vec3 {
        self.values[self.dims.index(i, j, k)]
    }

    pub fn x(&self, i: usize) -> f64 {
        x_node(&self.dims, &self.domain, i)
    }

    pub fn y(&self, j: usize) -> f64 {
        y_node(&self.dims, &self.domain, j)
    }

    pub fn z(&self, k: usize) -> f64 {
        z_node(&self.dims, k)
    }

    /// Largest nodal Euclidean norm.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(norm).fold(0.0, f64::max)
    }

    /// Largest nodal norm on the two plates.
    pub fn max_norm_on_plates(&self) -> f64 {
        let s = self.dims.slab();
        let n = self.values.len();
        self.values[..s].iter().chain(&self.values[n - s..]).map(norm).fold(0.0, f64::max)
    }

    pub fn into_values(self) -> Vec<Vec3> {
        self.values
    }
}

fn x_node(dims: &Dims, domain: &DomainSpec, i: usize) -> f64 {
    -domain.l1 + i as f64 * (2.0 * domain.l1 / dims.nx as f64)
}

fn y_node(dims: &Dims, domain: &DomainSpec, j: usize) -> f64 {
    -domain.l2 + j as f64 * (2.0 * domain.l2 / dims.ny as f64)
}

fn z_node(dims: &Dims, k: usize) -> f64 {
    if k + 1 == dims.nz {
        1.0
    } else {
        k as f64 * dims.hz()
    }
}

/// A unit vector field on the cell satisfying the plate anchoring exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectorGrid {
    field: VectorField,
    bc: BoundaryCondition,
}

impl AsRef<VectorField> for VectorField {
    fn as_ref(&self) -> &VectorField {
        self
    }
}

impl AsRef<VectorField> for DirectorGrid {
    fn as_ref(&self) -> &VectorField {
        &self.field
    }
}

impl DirectorGrid {
    /// Validates unit length (within `1e-8`) and the plate values, then
    /// renormalizes interior nodes and writes the plate values exactly.
    pub fn new(dims: Dims, domain: DomainSpec, bc: BoundaryCondition, values: Vec<Vec3>) -> Result<Self> {
        let field = VectorField::new(dims, domain, values)?;
        for (p, v) in field.values.iter().enumerate() {
            let r = norm(v);
            if (r - 1.0).abs() > UNIT_TOL_IO {
                return Err(Error::InvalidGrid(format!("node {p}: |n| = {r}")));
            }
        }
        let s = dims.slab();
        let n = field.values.len();
        for (layer, want) in [(0..s, bc.bottom()), (n - s..n, bc.top())] {
            for p in layer {
                let v = field.values[p];
                let d = norm(&[v[0] - want[0], v[1] - want[1], v[2] - want[2]]);
                if d > UNIT_TOL_IO {
                    return Err(Error::InvalidGrid(format!(
                        "node {p} violates the {bc} anchoring by {d:e}"
                    )));
                }
            }
        }
        let mut grid = Self { field, bc };
        grid.project();
        Ok(grid)
    }

    /// Samples `f`, normalizes every node and overwrites the plates with the
    /// anchoring values.
    pub fn from_fn(
        dims: Dims,
        domain: DomainSpec,
        bc: BoundaryCondition,
        f: impl Fn(f64, f64, f64) -> Vec3,
    ) -> Result<Self> {
        let field = VectorField::from_fn(dims, domain, f);
        if field.values.iter().any(|v| !(norm(v) > 0.0) || !norm(v).is_finite()) {
            return Err(Error::InvalidGrid("sampled vector is zero or non-finite".into()));
        }
        let mut grid = Self { field, bc };
        grid.project();
        Ok(grid)
    }

    /// The constant field `e3` (admissible for homeotropic anchoring).
    pub fn uniform_e3(dims: Dims, domain: DomainSpec) -> Self {
        Self {
            field: VectorField { dims, domain, values: vec![[0.0, 0.0, 1.0]; dims.len()] },
            bc: BoundaryCondition::Homeotropic,
        }
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Vec3] {
        &mut self.field.values
    }

    /// Renormalizes interior nodes and resets the plates.
    pub(crate) fn project(&mut self) {
        let s = self.field.dims.slab();
        let n = self.field.values.len();
        let (bottom, top) = (self.bc.bottom(), self.bc.top());
        for (p, v) in self.field.values.iter_mut().enumerate() {
            if p < s {
                *v = bottom;
            } else if p >= n - s {
                *v = top;
            } else {
                let r = norm(v);
                if (r - 1.0).abs() > f64::EPSILON {
                    *v = [v[0] / r, v[1] / r, v[2] / r];
                }
            }
        }
    }

    pub fn dims(&self) -> Dims {
        self.field.dims
    }

    pub fn domain(&self) -> DomainSpec {
        self.field.domain
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn values(&self) -> &[Vec3] {
        &self.field.values
    }

    pub fn field(&self) -> &VectorField {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Vec3 {
        self.field.get(i, j, k)
    }

    /// `self - other` on the common grid.
    pub fn difference(&self, other: &DirectorGrid) -> Result<VectorField> {
        if self.dims() != other.dims() || self.bc != other.bc || self.domain() != other.domain() {
            return Err(Error::InvalidGrid("grids differ in dims, domain or anchoring".into()));
        }
        let values = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| [a[0] - b[0], a[1] - b[1], a[2] - b[2]])
            .collect();
        Ok(VectorField { dims: self.dims(), domain: self.domain(), values })
    }

    /// Largest deviation from unit length over all nodes.
    pub fn unit_defect(&self) -> f64 {
        self.values().iter().map(|v| (norm(v) - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Writes the `OFGRID 1` text format.
    pub fn write_ofgrid<W: Write>(&self, mut w: W) -> Result<()> {
        let d = self.dims();
        let dom = self.domain();
        writeln!(w, "OFGRID 1")?;
        writeln!(w, "{} {} {} {:.16e} {:.16e} {}", d.nx, d.ny, d.nz, dom.l1, dom.l2, self.bc)?;
        for k in 0..d.nz {
            for j in 0..d.ny {
                for i in 0..d.nx {
                    let v = self.get(i, j, k);
                    writeln!(w, "{i} {j} {k} {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the `OFGRID 1` text format, renormalizing and validating the
    /// plate values.
    pub fn read_ofgrid<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let mut next = |what: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((n, l)) => Ok((n + 1, l?)),
                None => Err(Error::Parse { line: 0, msg: format!("unexpected end of file, expected {what}") }),
            }
        };
        let (n, magic) = next("header")?;
        if magic.trim() != "OFGRID 1" {
            return Err(Error::Parse { line: n, msg: format!("bad header `{magic}`") });
        }
        let (n, shape) = next("grid shape")?;
        let parts: Vec<&str> = shape.split_whitespace().collect();
        if parts.len() != 6 {
            return Err(Error::Parse { line: n, msg: "expected `nx ny nz l1 l2 bc`".into() });
        }
        let int = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse { line: n, msg: e.to_string() });
        let real = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse { line: n, msg: e.to_string() });
        let dims = Dims::new(int(parts[0])?, int(parts[1])?, int(parts[2])?)?;
        let domain = DomainSpec::new(real(parts[3])?, real(parts[4])?)?;
        let bc: BoundaryCondition = parts[5].parse()?;

        let mut values = Vec::with_capacity(dims.len());
        for k in 0..dims.nz {
            for j in 0..dims.ny {
                for i in 0..dims.nx {
                    let (n, line) = next("node record")?;
                    let f: Vec<&str> = line.split_whitespace().collect();
                    let bad = |msg: String| Error::Parse { line: n, msg };
                    if f.len() != 6 {
                        return Err(bad(format!("expected 6 fields, found {}", f.len())));
                    }
                    let idx: Vec<usize> = f[..3]
                        .iter()
                        .map(|s| s.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string())))
                        .collect::<Result<_>>()?;
                    if idx != [i, j, k] {
                        return Err(bad(format!("expected node {i} {j} {k}, found {idx:?}")));
                    }
                    let mut v = [0.0; 3];
                    for c in 0..3 {
                        v[c] = f[3 + c].parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?;
                    }
                    values.push(v);
                }
            }
        }
        Self::new(dims, domain, bc, values)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_ofgrid(std::io::BufWriter::new(f))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_ofgrid(std::io::BufReader::new(f))
    }
}
