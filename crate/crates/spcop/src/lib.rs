//! Sparse Moment-SOS relaxations for linearly constrained polynomial
//! optimization over the nonnegative orthant.
//!
//! The problem class is
//!
//! ```text
//!     min  f(x) = f_1(x_{Δ1}) + ... + f_m(x_{Δm})
//!     s.t. A x = b,  C x ≥ d,  x ≥ 0,
//! ```
//!
//! where each `f_i` only involves the variables in a block `Δi ⊆ {1..n}`
//! and the blocks jointly cover all variables. The crate builds the sparse
//! moment and SOS semidefinite relaxations of this problem (plus the dense
//! baselines), solves them with an embedded primal-dual interior-point
//! method, and post-processes the optimizer: rank tests, flat truncation,
//! atom extraction, cross-block support matching, cop-SOS convexity
//! certificates, and tightness verdicts with extracted global minimizers.
//!
//! Entry points:
//! * [`poly::ProblemInstance`] — problem data (blocks, objectives, linear
//!   constraints), loadable from JSON via [`poly::ProblemFile`].
//! * [`report::solve_problem`] — build + solve + certify in one call.
//! * [`tensor::SymmetricTensor::check_copositive`] — tensor copositivity
//!   through the simplex-constrained minimization.

pub mod basis;
pub mod bench;
pub mod copsos;
pub mod extract;
pub mod moment;
pub mod poly;
pub mod relax;
pub mod report;
pub mod sdp;
pub mod tensor;

pub use poly::{LinearConstraints, Monomial, Polynomial, ProblemInstance, SparsityPattern};

pub use sdp::{ConicProgram, ConicSolution, SolveOptions, Status};
