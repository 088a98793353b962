//! Linear discrepancy of rational matrices.
//!
//! `lindisc(A) = max_{w in [0,1]^n} min_{x in {0,1}^n} ||A (w - x)||_inf`.
//! The crate computes it exactly for one-row matrices and for integer
//! matrices with two rows, brackets it for arbitrary matrices, and ships
//! brute-force oracles and reduction-based instance generators for testing.
//! All arithmetic is exact over the rationals.

pub mod approx;
pub mod cli;
pub mod error;
pub mod exec;
pub mod lowdim;
pub mod matrix;
pub mod onerow;
pub mod oracle;
pub mod rational;
pub mod reduction;

pub use approx::approx_lindisc;
pub use error::{Error, Result};
pub use exec::{Execution, Limits};
pub use lowdim::{lindisc_lowdim, leb_linf_2d, reachable_points, LowDimResult, SiteSet};
pub use matrix::{
    eval_residual, operator_inf_norm, parse_matrix, Bracket, Coloring, LowerProvenance, Matrix,
    UpperProvenance, Weight,
};
pub use onerow::{gap_profile_bruteforce, gap_recursion, lindisc_onerow, round_onerow, GapProfile};
pub use oracle::{lindisc_at, lindisc_grid_bracket, DeepHoleReport, GridBracket};
pub use rational::Rational;
pub use reduction::{
    incidence_matrix, nae_satisfiable, subset_sum_weight, MonotoneCnf, SubsetSumInstance,
};
