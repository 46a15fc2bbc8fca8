//! Checks that do not go through the kernel representation: difference
//! residuals, the initial trace, a finite-difference oracle, and manufactured
//! solutions.

mod compare;
mod initial;
mod mms;
mod oracle;
mod residual;

pub use compare::{compare_fields, FieldDifference};
pub use initial::{initial_check, InitialTraceReport};
pub use mms::{manufacture, mms_source, ExactField, Manufactured};
pub use oracle::{cn_oracle, solve_tridiagonal, CnConfig};
pub use residual::{fd_residual, ResidualReport, RowWorst};
