//! Solver for the Cauchy problem
//!
//! ```text
//! p(t) u_t = u_xx + f(t, x),   u(0, x) = phi(x),
//! ```
//!
//! on the whole line, where `p` is complex with `Re p >= 0`. Wherever
//! `Re p > 0` the equation is parabolic; where `p` turns purely imaginary it
//! becomes Schrödinger-like. The solution is evaluated from its kernel
//! representation
//!
//! ```text
//! u(t, x) = int Q(omega(t), y - x) phi(y) dy
//!         + int_0^t m(tau) int Q(omega(t) - omega(tau), y - x) f(tau, y) dy dtau
//! ```
//!
//! with `omega(t) = int_0^t 1/p` and the complex Gaussian
//! `Q(w, z) = exp(-z^2 / 4w) / (2 sqrt(pi w))`.
//!
//! Modules:
//! - [`coefficients`]: profiles for `p`, the `omega` cache, hypothesis checks.
//! - [`kernel`]: branch-correct evaluation of `Q` and truncation radii.
//! - [`quadrature`]: adaptive Gauss–Kronrod integration of complex integrands.
//! - [`solver`]: problem description and evaluation on points and grids.
//! - [`verify`]: residuals, initial trace, a Crank–Nicolson oracle, MMS.

pub mod coefficients;
pub mod error;
pub mod kernel;
pub mod quadrature;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
