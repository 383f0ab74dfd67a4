//! Numerical tools for the Oseen–Frank energy of cholesteric liquid crystals
//! confined to a cuboid cell `(-l1, l1) x (-l2, l2) x (0, 1)`.
//!
//! The crate is organised around four layers:
//!
//! * [`model`] and [`density`]: elastic constants, chirality, director values
//!   and the pointwise Frank energy densities.
//! * [`profile1d`]: the global minimizer among director fields depending only
//!   on the cell height, for general elastic constants, together with an
//!   independent brute-force minimizer used as an oracle.
//! * [`field3d`]: fully three-dimensional director grids, the discrete energy
//!   and its exact gradient, projected gradient relaxation and the
//!   saddle-splay and Euler–Lagrange diagnostics.
//! * [`stability`]: coercivity constants and thresholds for global stability,
//!   and the energy splitting identity.
//!
//! [`verify`] bundles fixed-seed property suites used by the command-line
//! front end.

pub mod density;
mod error;
pub mod field3d;
pub mod model;
pub mod numeric;
pub mod profile1d;
pub mod stability;
pub mod verify;

pub use error::{Error, Result};
pub use model::{
    angle_inequality_constant, normalize_chirality, Chirality, DirectorValue, DomainSpec,
    ElasticConstants, Mat3, Vec3,
};
