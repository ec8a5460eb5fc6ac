//! Small numerical kernels used across the crate: adaptive quadrature, an
//! explicit Runge-Kutta integrator, derivative-free scalar/simplex
//! optimization, root bracketing, and polynomial least squares.

pub mod fit;
pub mod minimize;
pub mod ode;
pub mod quad;
