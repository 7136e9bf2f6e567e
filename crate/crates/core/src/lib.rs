//! # brdm-core
//!
//! Decision-making as resource-costed uncertainty reduction over finite
//! option sets.
//!
//! The crate is organized around a preorder view of decision-making: a
//! decision-maker moves from a prior distribution towards a posterior by
//! elementary probability transfers, and every admissible cost function is
//! monotone with respect to that preorder. The modules build on each other:
//!
//! - [`simplex`]: validated probability vectors (float or exact-rational),
//!   rearrangements, expectations, coarse-graining partitions.
//! - [`majorization`]: the majorization preorder, its partial-sum decision
//!   procedure, and constructive witnesses (T-transform chains, doubly
//!   stochastic matrices, convex combinations of permutations).
//! - [`relative`]: majorization relative to a prior via the block lift that
//!   maps the prior to a uniform distribution, with q-stochastic witnesses.
//! - [`costs`]: generalized entropies and f-divergences (KL, Tsallis, Burg,
//!   squared l2, Renyi), superadditivity under coarse-graining, uniform
//!   monotonicity.
//! - [`bounded`]: single-task free-energy trade-offs, Boltzmann posteriors,
//!   constraint solvers, beta paths, two-step recursivity.
//! - [`multitask`]: conditional Boltzmann posteriors over world states,
//!   optimal priors via Blahut-Arimoto, mutual-information accounting and
//!   efficiency frontiers.
//! - [`inference`]: grid Bayesian inference over Gaussian-mixture world
//!   models, the Boltzmann form of Bayes rule, and a maximum-likelihood
//!   comparator.
//!
//! All operations are pure functions of their inputs; values are immutable
//! after construction and safe to share across threads.

use thiserror::Error;

pub mod bounded;
pub mod costs;
pub mod inference;
pub mod majorization;
pub mod multitask;
pub mod relative;
pub mod simplex;
pub mod weight;

/// Absolute tolerance for float probability-vector normalization.
pub const TOL_NORM: f64 = 1e-9;

/// Absolute tolerance for float partial-sum order comparisons. Two floats
/// within this distance are treated as equal; the preorder is discontinuous
/// at ties, so order tests must not distinguish values closer than this.
pub const TOL_ORD: f64 = 1e-9;

/// Absolute tolerance for float property checks (identities, superadditivity).
pub const TOL_NUM: f64 = 1e-9;

/// Absolute tolerance on constraint residuals in the bounded-rational solver.
pub const TOL_SOLVE: f64 = 1e-8;

/// Fixed-point residual tolerance for a converged optimal prior.
pub const TOL_FIX: f64 = 1e-8;

/// Default denominator bound when rationalizing float priors by continued
/// fractions.
pub const DEFAULT_DENOM_BOUND: u64 = 10_000;

/// Largest admissible size of the lifted elementary space. Lifting refuses
/// larger common denominators instead of degrading silently.
pub const MAX_ALPHA: u64 = 1_000_000;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("negative weight {value} at index {index}")]
    NegativeWeight { index: usize, value: f64 },

    #[error("weights do not sum to 1 (sum = {sum})")]
    NotNormalized { sum: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid transfer: {reason}")]
    InvalidTransfer { reason: String },

    #[error("target is not majorized by the source")]
    NotMajorized,

    #[error("target is not majorized by the source relative to the prior")]
    NotRelMajorized,

    #[error("not absolutely continuous: p[{index}] > 0 but q[{index}] = 0")]
    NotAbsolutelyContinuous { index: usize },

    #[error("lifted values are not constant within block {block}")]
    NotBlockConstant { block: usize },

    #[error("lifted space would need {alpha} elements (limit {limit})")]
    AlphaOverflow { alpha: u128, limit: u64 },

    #[error("generator undefined at {argument}: {reason}")]
    DomainError { argument: f64, reason: String },

    #[error("constraint {constraint} outside the attainable range [{low}, {high})")]
    InfeasibleConstraint {
        constraint: f64,
        low: f64,
        high: f64,
    },

    #[error("utility is constant; requested minimum utility {requested} exceeds it")]
    DegenerateUtility { requested: f64 },

    #[error("partition block {block} has zero prior mass")]
    DegeneratePartition { block: usize },

    #[error("no convergence after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("all parameter grid points have zero likelihood for the dataset")]
    ZeroEvidence,

    #[error("invalid partition: {reason}")]
    InvalidPartition { reason: String },

    #[error("invalid input: {reason}")]
    InvalidInput { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub use majorization::Relation;
pub use simplex::{Dist, ExactDist, FloatDist, Partition, UtilityVector};
pub use weight::Weight;
