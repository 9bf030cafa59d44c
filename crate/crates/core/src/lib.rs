//! Floor-quotient sums `S_f(x) = Σ_{n≤x} f(⌊x/n⌋)` for a handful of classical
//! arithmetic functions, together with the machinery used to study their
//! error terms:
//!
//! * [`arith`]: segmented sieves, point evaluation and Dirichlet convolution.
//! * [`floorsum`]: naive and block evaluators, the main-term constant and the
//!   exact ψ-decomposition of the block sum.
//! * [`psi`]: the sawtooth ψ and Vaaler's trigonometric approximation.
//! * [`identities`]: Vaughan and hyperbola identities, checked numerically.
//! * [`expsum`]: direct exponential sums and bound sanity ratios.
//! * [`pairs_opt`]: exact exponent-pair calculus and a rational minimax balancer.

pub mod arith;
pub mod error;
pub mod expsum;
pub mod floorsum;
pub mod identities;
pub mod numeric;
pub mod pairs_opt;
pub mod psi;

pub use arith::{Budget, FunctionKind, SieveTable, TableValues};
pub use error::{Error, Result};
pub use numeric::Numeric;
