//! Small numerical building blocks: adaptive quadrature, bracketing root
//! refinement, a classical Runge–Kutta step and compensated summation.

mod quadrature;
mod rk4;
mod roots;
mod sum;

pub use quadrature::adaptive_simpson;
pub use rk4::rk4_step;
pub use roots::{bisect, bisect_log};
pub use sum::CompensatedSum;
