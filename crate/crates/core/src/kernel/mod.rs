//! Exact arithmetic: rationals, dense matrices, linear programming and root isolation.

pub mod barycentric;
pub mod lp;
pub mod matrix;
pub mod poly;
pub mod rat;

pub use lp::{lp_min_coeff, LinearProgram, LpResult, LpStatus, Relation};
pub use matrix::{affine_rank, null_basis, orth_complement, rank, QMat, QVec};
pub use poly::{isolate_roots, sturm_count, sturm_isolate, Interval, QPoly, RealRoot};
pub use rat::{format_rat, parse_rat, rat, ratio, Rat};
