//! Kernel representation of the solution: the initial datum convolved with
//! `Q(omega(t), .)` plus the Duhamel superposition of source slices.

mod data;
mod field;
mod problem;
mod solve;

pub use data::{DataFn, Source};
pub use field::{Provenance, SolutionField};
pub use problem::{Axis, DuhamelForm, GridSpec, HoelderParams, ProblemSpec, Tolerances};
pub use solve::{solve, solve_duhamel, solve_grid, solve_homogeneous, Solver};
