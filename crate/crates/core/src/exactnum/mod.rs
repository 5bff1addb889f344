//! Exact rationals, rational functions in one parameter ordered at
//! `t -> +inf`, and the linear algebra / LP routines shared by both.

pub mod field;
pub mod lp;
mod poly;
pub mod rat;
pub mod ratfun;

pub use field::{nullspace, of_solve_linear, rank, solve_square, OrderedField};
pub use lp::{
    orthant_cone_dimension, polyhedron_dimension, DimensionInfo, LinearProgram, LpOutcome, Relation,
};
pub use poly::Poly;
pub use rat::{lcm_denominators, Rat};
pub use ratfun::{of_compare, record_thresholds, Evaluation, RatFun, Val};

/// Dual valuation of a rational function with exponent scale `scale`.
pub fn valstar(f: &RatFun, scale: u64) -> Val {
    f.valstar(scale)
}

/// Instantiates `f` at `t0`, reporting the sign-stability threshold.
pub fn of_eval_at(f: &RatFun, t0: &Rat) -> Result<Evaluation, crate::Error> {
    f.eval_at(t0)
}
