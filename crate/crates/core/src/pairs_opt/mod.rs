//! Exact exponent-pair calculus and the rational bookkeeping that turns an
//! exponential-sum bound into a floor-sum error exponent.
//!
//! No floating point is used here; every quantity is a reduced [`Rational`].

mod balance;
mod pair;
mod rational;
mod theorems;

pub use balance::{
    balance_auto, balance_exponents, balance_symbolic, certify, dedupe, eliminate_h, maximize_over_d, BalanceOutcome,
    BalanceProblem, BalanceResult, SymbolicBalance, TermExponent, Var,
};
pub use pair::{apply_a, apply_b, enumerate_pairs, heath_brown_pair, ExponentPair, Process, Seed, MAX_DEPTH};
pub use rational::{q, Rational};
pub use theorems::{
    constraints, error_term_problem, lambda_constraints, lambda_profile, lambda_profile_problem,
    lambda_type_one_condition, minimize_over_pairs, omega_problem, omega_terms, pipeline_exponent,
    preliminary_terms, profile_to_exponent, squarefree_problem, squarefree_terms, squarefree_u_problem,
    target_problem, tau_constraints, tau_profile, tau_profile_problem, theorem_exponent, two_omega_constraints,
    two_omega_problem, BoundProfile, Constraint, ExponentOutcome, ProfileTarget, Target,
};
