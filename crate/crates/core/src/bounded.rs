//! Single-task bounded-rational decision-making with informational costs.
//!
//! The free energy `F[p] = E_p[U] - (1/β) D_KL(p ‖ q)` has the Boltzmann
//! posterior `p_β(x) = q(x) e^{βU(x)} / Z_β` as its unique maximizer, with
//! maximum value `F_β = (1/β) log Z_β`. The resource parameter `β` trades
//! expected utility against informational cost: `β = 0` stays at the prior,
//! `β → ∞` concentrates on the supported utility maximizers. Both the
//! information cost and the expected utility are monotone in `β`, which the
//! constraint solver exploits by bisection.

use crate::costs::kl_divergence;
use crate::simplex::{coarse_grain, expected_utility, Dist, FloatDist, Partition, UtilityVector};
use crate::weight::log_sum_exp;
use crate::{Error, Result, TOL_SOLVE};

/// Upper bound for the bisection bracket; beyond it the `β = ∞` limit is
/// returned with a flag instead.
pub const BETA_CAP: f64 = 1e6;

/// A resource constraint: a fixed trade-off parameter, an information
/// budget in nats, or a minimum expected utility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResourceConstraint {
    Beta(f64),
    /// Upper bound on `D_KL(p ‖ q)` in nats.
    MaxCost(f64),
    /// Lower bound on expected utility.
    MinUtility(f64),
}

/// A single-task problem: utility, prior, and one resource constraint.
///
/// The posterior search space is the full simplex (the bounded-optimal
/// case); process constraints restricting it further are out of scope.
#[derive(Debug, Clone)]
pub struct BoundedRationalProblem {
    pub utility: UtilityVector,
    pub prior: FloatDist,
    pub constraint: ResourceConstraint,
}

/// A solved trade-off point.
///
/// `free_energy = (1/β) log Z_β`, and equals
/// `expected_utility - kl_cost / β` up to float error for `β > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeEnergyResult {
    pub posterior: FloatDist,
    pub beta: f64,
    pub free_energy: f64,
    pub expected_utility: f64,
    /// `D_KL(posterior ‖ prior)` in nats.
    pub kl_cost: f64,
}

/// The Boltzmann posterior `p_β(x) = q(x) e^{βU(x)} / Z_β`.
///
/// Computed in log space with the max subtracted before exponentiation.
/// `β = 0` returns the prior exactly; `β = ∞` returns the limit posterior,
/// prior-proportional on the supported argmax set of `U`.
pub fn boltzmann_posterior(
    utility: &UtilityVector,
    prior: &FloatDist,
    beta: f64,
) -> Result<FreeEnergyResult> {
    if utility.len() != prior.len() {
        return Err(Error::LengthMismatch {
            left: utility.len(),
            right: prior.len(),
        });
    }
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::InvalidInput {
            reason: format!("beta must be >= 0, got {beta}"),
        });
    }
    let u = utility.values();
    if beta == 0.0 {
        let expected = expected_utility(prior, utility)?;
        return Ok(FreeEnergyResult {
            posterior: prior.clone(),
            beta,
            free_energy: expected,
            expected_utility: expected,
            kl_cost: 0.0,
        });
    }
    if beta.is_infinite() {
        let u_max = prior
            .weights()
            .iter()
            .zip(u)
            .filter(|(&q, _)| q > 0.0)
            .map(|(_, &v)| v)
            .fold(f64::NEG_INFINITY, f64::max);
        let mass: f64 = prior
            .weights()
            .iter()
            .zip(u)
            .filter(|(&q, &v)| q > 0.0 && v == u_max)
            .map(|(&q, _)| q)
            .sum();
        let weights = prior
            .weights()
            .iter()
            .zip(u)
            .map(|(&q, &v)| {
                if q > 0.0 && v == u_max {
                    q / mass
                } else {
                    0.0
                }
            })
            .collect();
        let posterior = Dist::from_normalized(weights);
        let kl = kl_divergence(&posterior, prior)?;
        return Ok(FreeEnergyResult {
            posterior,
            beta,
            free_energy: u_max,
            expected_utility: u_max,
            kl_cost: kl,
        });
    }

    let log_weights: Vec<f64> = prior
        .weights()
        .iter()
        .zip(u)
        .map(|(&q, &v)| if q > 0.0 { q.ln() + beta * v } else { f64::NEG_INFINITY })
        .collect();
    let log_z = log_sum_exp(&log_weights);
    let weights: Vec<f64> = log_weights.iter().map(|lw| (lw - log_z).exp()).collect();
    let posterior = Dist::from_normalized(weights);
    let expected = expected_utility(&posterior, utility)?;
    let kl = kl_divergence(&posterior, prior)?;
    Ok(FreeEnergyResult {
        posterior,
        beta,
        free_energy: log_z / beta,
        expected_utility: expected,
        kl_cost: kl,
    })
}

/// Result of constraint inversion. `beta_capped` marks targets unreachable
/// below [`BETA_CAP`], for which the `β = ∞` limit is returned instead.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSolution {
    pub result: FreeEnergyResult,
    pub beta_capped: bool,
}

/// Solve for the constraint by monotone bisection on `β`.
///
/// `MaxCost(C₀)` finds `β` with `kl_cost = C₀`; feasible for
/// `C₀ ∈ [0, D_KL(p_∞ ‖ q))`. `MinUtility(U₀)` finds `β` with
/// `expected_utility = U₀`; feasible below the supported maximum, and any
/// `U₀ <= E_q[U]` is satisfied at `β = 0`. Residuals meet [`TOL_SOLVE`].
pub fn solve_for_constraint(problem: &BoundedRationalProblem) -> Result<ConstraintSolution> {
    let utility = &problem.utility;
    let prior = &problem.prior;
    match problem.constraint {
        ResourceConstraint::Beta(beta) => Ok(ConstraintSolution {
            result: boltzmann_posterior(utility, prior, beta)?,
            beta_capped: false,
        }),
        ResourceConstraint::MaxCost(c0) => {
            if !c0.is_finite() || c0 < 0.0 {
                return Err(Error::InvalidInput {
                    reason: format!("cost bound must be finite and >= 0, got {c0}"),
                });
            }
            let limit = boltzmann_posterior(utility, prior, f64::INFINITY)?;
            if c0 >= limit.kl_cost {
                return Err(Error::InfeasibleConstraint {
                    constraint: c0,
                    low: 0.0,
                    high: limit.kl_cost,
                });
            }
            if c0 == 0.0 {
                return Ok(ConstraintSolution {
                    result: boltzmann_posterior(utility, prior, 0.0)?,
                    beta_capped: false,
                });
            }
            bisect_beta(utility, prior, c0, |r| r.kl_cost)
        }
        ResourceConstraint::MinUtility(u0) => {
            if !u0.is_finite() {
                return Err(Error::InvalidInput {
                    reason: format!("utility bound must be finite, got {u0}"),
                });
            }
            let at_zero = boltzmann_posterior(utility, prior, 0.0)?;
            if u0 <= at_zero.expected_utility {
                return Ok(ConstraintSolution {
                    result: at_zero,
                    beta_capped: false,
                });
            }
            let limit = boltzmann_posterior(utility, prior, f64::INFINITY)?;
            if limit.expected_utility <= at_zero.expected_utility {
                return Err(Error::DegenerateUtility { requested: u0 });
            }
            if u0 >= limit.expected_utility {
                return Err(Error::InfeasibleConstraint {
                    constraint: u0,
                    low: at_zero.expected_utility,
                    high: limit.expected_utility,
                });
            }
            bisect_beta(utility, prior, u0, |r| r.expected_utility)
        }
    }
}

fn bisect_beta(
    utility: &UtilityVector,
    prior: &FloatDist,
    target: f64,
    metric: impl Fn(&FreeEnergyResult) -> f64,
) -> Result<ConstraintSolution> {
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    loop {
        let r = boltzmann_posterior(utility, prior, hi)?;
        if metric(&r) >= target {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi > BETA_CAP {
            return Ok(ConstraintSolution {
                result: boltzmann_posterior(utility, prior, f64::INFINITY)?,
                beta_capped: true,
            });
        }
    }
    for _ in 0..500 {
        let mid = 0.5 * (lo + hi);
        let r = boltzmann_posterior(utility, prior, mid)?;
        let value = metric(&r);
        if (value - target).abs() <= TOL_SOLVE {
            return Ok(ConstraintSolution {
                result: r,
                beta_capped: false,
            });
        }
        if value < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence { iterations: 500 })
}

/// Boltzmann posteriors along an increasing `β` grid.
///
/// Along the path the posteriors decrease in uncertainty relative to the
/// prior: consecutive pairs satisfy `p_β' ≺_q p_β` (strictly for
/// non-constant utilities), and every divergence to the prior increases.
pub fn beta_path(
    utility: &UtilityVector,
    prior: &FloatDist,
    betas: &[f64],
) -> Result<Vec<FreeEnergyResult>> {
    if betas.is_empty() {
        return Err(Error::InvalidInput {
            reason: "empty beta grid".into(),
        });
    }
    if betas[0] < 0.0 || betas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput {
            reason: "beta grid must be strictly increasing and start >= 0".into(),
        });
    }
    betas
        .iter()
        .map(|&b| boltzmann_posterior(utility, prior, b))
        .collect()
}

/// A two-step decision decomposed along a partition.
#[derive(Debug, Clone)]
pub struct TwoStepResult {
    /// Posterior over blocks (the first decision step).
    pub block_posterior: FloatDist,
    /// One solved inner problem per block, in block order.
    pub block_results: Vec<FreeEnergyResult>,
    /// `E_{p(X)}[F_β₂[p(Y|X)]] - (1/β₁) D_KL(p(X) ‖ q(X))`.
    pub total_free_energy: f64,
}

/// Solve a decision in two steps: first over partition blocks with `β₁`,
/// then inside the chosen block with `β₂`.
///
/// The inner free energies act as the utilities of the block step, so the
/// block posterior rewards block value rather than block maximum utility.
/// With `β₁ = β₂ = β` the total free energy equals the flat single-step
/// free energy.
pub fn two_step_value(
    utility: &UtilityVector,
    part: &Partition,
    prior: &FloatDist,
    beta1: f64,
    beta2: f64,
) -> Result<TwoStepResult> {
    if utility.len() != prior.len() {
        return Err(Error::LengthMismatch {
            left: utility.len(),
            right: prior.len(),
        });
    }
    let (q_marg, q_conds) = coarse_grain(prior, part)?;
    let mut block_results = Vec::with_capacity(part.num_blocks());
    let mut block_values = Vec::with_capacity(part.num_blocks());
    for (k, block) in part.blocks().iter().enumerate() {
        let q_cond = q_conds[k]
            .as_ref()
            .ok_or(Error::DegeneratePartition { block: k })?;
        let u_block =
            UtilityVector::new(block.iter().map(|&i| utility.values()[i]).collect())?;
        let inner = boltzmann_posterior(&u_block, q_cond, beta2)?;
        block_values.push(inner.free_energy);
        block_results.push(inner);
    }
    let outer = boltzmann_posterior(&UtilityVector::new(block_values)?, &q_marg, beta1)?;
    Ok(TwoStepResult {
        block_posterior: outer.posterior,
        block_results,
        total_free_energy: outer.free_energy,
    })
}
