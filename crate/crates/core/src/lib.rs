//! Exact multivariable link polynomials from enhanced R-matrices.

pub mod laurent;
pub mod tensorops;
pub mod linalg;
pub mod rmatrices;
pub mod braidrep;
pub mod invariants;
pub mod conjugacy;
pub mod isotopy_solver;
pub mod cli;
