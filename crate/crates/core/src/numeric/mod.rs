//! Exact rational arithmetic, dense matrices and linear-programming feasibility.
//!
//! Nothing in this module touches floating point. Every witness and every
//! infeasibility certificate it produces can be re-checked by substitution.

mod lp;
mod matrix;
mod rational;

pub use lp::{lp_feasible, Farkas, Feasibility, LinearSystem, Row};
pub use matrix::{rank, rank_nullspace, rref, RMatrix};
pub use rational::{format_rational, format_vector, parse_rational, parse_vector, rat, RVector, Rational};

pub use rational::vec_ops;
