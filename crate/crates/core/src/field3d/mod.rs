//! Director fields on a regular grid of the cell, periodic in `x` and `y`
//! with the anchoring imposed on the plates `z = 0, 1`.
//!
//! Derivatives use centered differences with periodic wrap laterally and
//! centered differences with a one-sided closure on the plates vertically;
//! integrals use uniform weights laterally and trapezoid weights vertically.
//! [`discrete_gradient`] is the exact derivative of [`discrete_energy`].

mod energy;
mod grid;
mod relax;
mod sample;
mod stencil;

pub use energy::{
    discrete_energy, discrete_gradient, el_residual, energy_with, gradient_with, saddle_splay_integral,
    saddle_splay_with,
};
pub use grid::{BoundaryCondition, Dims, DirectorGrid, VectorField};
pub use relax::{relax, RelaxOptions, RelaxationReport, MAX_HALVINGS};
pub use sample::{
    embed_profile, great_circle, random_perturbation, smooth_periodic_sample, MAX_LATERAL_MODE,
    MAX_VERTICAL_MODE, SAMPLE_AMPLITUDE,
};
pub use stencil::{Operators, ZClosure};
