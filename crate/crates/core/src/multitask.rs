//! Multi-task decision-making with a shared prior over options.
//!
//! For a world-state distribution `p(W)` and utility table `U(w, x)`, the
//! multi-task free energy
//! `F = E_{p(W)} [ E_{p(X|W)}[U] - (1/β) D_KL(p(X|W) ‖ q(X)) ]`
//! is maximized per world state by conditional Boltzmann posteriors, and in
//! the prior by the posterior marginal `q*(X) = E_{p(W)}[p(X|W)]`.
//! Alternating the two updates is the Blahut-Arimoto iteration; its free
//! energy never decreases, and at the joint optimum the information cost
//! equals the mutual information `I(W; X)`.

use crate::bounded::boltzmann_posterior;
use crate::costs::kl_divergence;
use crate::simplex::{Dist, FloatDist, UtilityVector};
use crate::{Error, Result};

pub const BA_DEFAULT_MAX_ITERS: usize = 100_000;
pub const BA_DEFAULT_TOL: f64 = 1e-10;

/// A multi-task problem: world distribution over `M` states, an `M x N`
/// utility table, and a single resource parameter shared by all states.
#[derive(Debug, Clone)]
pub struct MultiTaskProblem {
    world_dist: FloatDist,
    utility_table: Vec<UtilityVector>,
    beta: f64,
}

impl MultiTaskProblem {
    pub fn new(world_dist: FloatDist, table: Vec<Vec<f64>>, beta: f64) -> Result<Self> {
        if table.len() != world_dist.len() {
            return Err(Error::LengthMismatch {
                left: table.len(),
                right: world_dist.len(),
            });
        }
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::InvalidInput {
                reason: format!("beta must be >= 0, got {beta}"),
            });
        }
        let width = table.first().map_or(0, Vec::len);
        let mut rows = Vec::with_capacity(table.len());
        for row in table {
            if row.len() != width {
                return Err(Error::InvalidInput {
                    reason: "utility table must be rectangular".into(),
                });
            }
            rows.push(UtilityVector::new(row)?);
        }
        Ok(MultiTaskProblem {
            world_dist,
            utility_table: rows,
            beta,
        })
    }

    pub fn world_dist(&self) -> &FloatDist {
        &self.world_dist
    }

    pub fn num_worlds(&self) -> usize {
        self.utility_table.len()
    }

    pub fn num_options(&self) -> usize {
        self.utility_table[0].len()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn utility_row(&self, w: usize) -> &UtilityVector {
        &self.utility_table[w]
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::InvalidInput {
                reason: format!("beta must be >= 0, got {beta}"),
            });
        }
        Ok(MultiTaskProblem {
            world_dist: self.world_dist.clone(),
            utility_table: self.utility_table.clone(),
            beta,
        })
    }
}

/// A channel `p(X|W)` together with the prior that generated it.
#[derive(Debug, Clone)]
pub struct ChannelState {
    pub prior: FloatDist,
    /// One posterior over options per world state.
    pub posteriors: Vec<FloatDist>,
    /// Multi-task free energy of the channel against `prior`.
    pub free_energy: f64,
    /// `I(W; X)` in nats, computed against the actual posterior marginal.
    pub mutual_information: f64,
}

/// Mutual information splits: against the true posterior marginal, and the
/// KL-to-prior cost term. The two agree exactly when the prior is optimal;
/// in general the prior term exceeds `I` by `D_KL(marginal ‖ prior) >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualInformation {
    pub against_marginal: f64,
    pub against_prior: f64,
}

/// The marginal `Σ_w p(w) p(x|w)` of a channel.
pub fn posterior_marginal(world_dist: &FloatDist, posteriors: &[FloatDist]) -> Result<FloatDist> {
    if posteriors.len() != world_dist.len() {
        return Err(Error::LengthMismatch {
            left: posteriors.len(),
            right: world_dist.len(),
        });
    }
    let n = posteriors[0].len();
    let mut weights = vec![0.0; n];
    for (&pw, posterior) in world_dist.weights().iter().zip(posteriors) {
        if posterior.len() != n {
            return Err(Error::LengthMismatch {
                left: posterior.len(),
                right: n,
            });
        }
        for (slot, &px) in weights.iter_mut().zip(posterior.weights()) {
            *slot += pw * px;
        }
    }
    Ok(Dist::from_normalized(weights))
}

/// `I(W; X)` against the channel's own marginal, plus the KL-to-prior term.
pub fn mutual_information(
    world_dist: &FloatDist,
    posteriors: &[FloatDist],
    prior: &FloatDist,
) -> Result<MutualInformation> {
    let marginal = posterior_marginal(world_dist, posteriors)?;
    let mut against_marginal = 0.0;
    let mut against_prior = 0.0;
    for (&pw, posterior) in world_dist.weights().iter().zip(posteriors) {
        if pw == 0.0 {
            continue;
        }
        against_marginal += pw * kl_divergence(posterior, &marginal)?;
        against_prior += pw * kl_divergence(posterior, prior)?;
    }
    Ok(MutualInformation {
        against_marginal,
        against_prior,
    })
}

/// Conditional Boltzmann posteriors `p_β(x|w) = q(x) e^{βU(w,x)} / Z_β(w)`
/// for a fixed prior, with the channel's free energy and mutual information.
pub fn conditional_posteriors(
    prob: &MultiTaskProblem,
    prior: &FloatDist,
) -> Result<ChannelState> {
    if prior.len() != prob.num_options() {
        return Err(Error::LengthMismatch {
            left: prior.len(),
            right: prob.num_options(),
        });
    }
    let beta = prob.beta();
    let mut posteriors = Vec::with_capacity(prob.num_worlds());
    let mut free_energy = 0.0;
    for (w, &pw) in prob.world_dist().weights().iter().enumerate() {
        let r = boltzmann_posterior(prob.utility_row(w), prior, beta)?;
        // Eq-form free energy: E[U] - KL/β per world state, averaged.
        let fw = if beta > 0.0 && beta.is_finite() {
            r.expected_utility - r.kl_cost / beta
        } else {
            r.expected_utility
        };
        free_energy += pw * fw;
        posteriors.push(r.posterior);
    }
    let info = mutual_information(prob.world_dist(), &posteriors, prior)?;
    Ok(ChannelState {
        prior: prior.clone(),
        posteriors,
        free_energy,
        mutual_information: info.against_marginal,
    })
}

/// Expected utility of a channel under the problem's world distribution.
pub fn channel_expected_utility(prob: &MultiTaskProblem, posteriors: &[FloatDist]) -> f64 {
    prob.world_dist()
        .weights()
        .iter()
        .enumerate()
        .map(|(w, &pw)| {
            pw * posteriors[w]
                .weights()
                .iter()
                .zip(prob.utility_row(w).values())
                .map(|(&px, &u)| px * u)
                .sum::<f64>()
        })
        .sum()
}

/// Outcome of the alternating optimization.
#[derive(Debug, Clone)]
pub struct BlahutArimotoOutcome {
    pub state: ChannelState,
    /// Free energy after each posterior update; non-decreasing.
    pub free_energy_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Alternate posterior and prior updates until the prior moves less than
/// `tol` in max norm.
///
/// Every iteration recomputes the posteriors for the current prior and then
/// replaces the prior by the posterior marginal; both half-steps are exact
/// coordinate maximizations, so the free energy trace is non-decreasing.
/// When iterations run out, the latest state is returned with
/// `converged = false`.
pub fn blahut_arimoto(
    prob: &MultiTaskProblem,
    init_prior: &FloatDist,
    max_iters: usize,
    tol: f64,
) -> Result<BlahutArimotoOutcome> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput {
            reason: format!("tolerance must be positive, got {tol}"),
        });
    }
    let mut prior = init_prior.clone();
    let mut trace = Vec::new();
    for iter in 1..=max_iters.max(1) {
        let state = conditional_posteriors(prob, &prior)?;
        trace.push(state.free_energy);
        let marginal = posterior_marginal(prob.world_dist(), &state.posteriors)?;
        let delta = prior
            .weights()
            .iter()
            .zip(marginal.weights())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if delta <= tol {
            return Ok(BlahutArimotoOutcome {
                state,
                free_energy_trace: trace,
                iterations: iter,
                converged: true,
            });
        }
        prior = marginal;
        if iter == max_iters {
            return Ok(BlahutArimotoOutcome {
                state,
                free_energy_trace: trace,
                iterations: iter,
                converged: false,
            });
        }
    }
    unreachable!("loop always returns")
}

/// Prior handling for frontier sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorMode {
    /// Fixed uniform prior.
    Uniform,
    /// Optimal prior per `β` via Blahut-Arimoto.
    Optimal,
}

/// One point on a utility-information curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierPoint {
    pub beta: f64,
    pub mutual_information_bits: f64,
    pub expected_utility: f64,
    pub free_energy: f64,
    pub iterations: usize,
}

/// Sweep `β` over a grid and report `(I, E[U])` per point.
///
/// Uniform mode evaluates conditional posteriors under the fixed uniform
/// prior; optimal mode runs Blahut-Arimoto to convergence (an unconverged
/// run is an error). Both coordinates are non-decreasing in `β`.
pub fn efficiency_frontier(
    world_dist: &FloatDist,
    table: &[Vec<f64>],
    betas: &[f64],
    mode: PriorMode,
) -> Result<Vec<FrontierPoint>> {
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
    let base = MultiTaskProblem::new(world_dist.clone(), table.to_vec(), 0.0)?;
    let uniform = FloatDist::uniform(base.num_options());
    let mut points = Vec::with_capacity(betas.len());
    for &beta in betas {
        let prob = base.with_beta(beta)?;
        let (state, iterations) = match mode {
            PriorMode::Uniform => (conditional_posteriors(&prob, &uniform)?, 0),
            PriorMode::Optimal => {
                let outcome =
                    blahut_arimoto(&prob, &uniform, BA_DEFAULT_MAX_ITERS, BA_DEFAULT_TOL)?;
                if !outcome.converged {
                    return Err(Error::NonConvergence {
                        iterations: outcome.iterations,
                    });
                }
                (outcome.state, outcome.iterations)
            }
        };
        points.push(FrontierPoint {
            beta,
            mutual_information_bits: state.mutual_information / std::f64::consts::LN_2,
            expected_utility: channel_expected_utility(&prob, &state.posteriors),
            free_energy: state.free_energy,
            iterations,
        });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagonal_problem(n: usize, beta: f64) -> MultiTaskProblem {
        let table: Vec<Vec<f64>> = (0..n)
            .map(|w| (0..n).map(|x| if w == x { 1.0 } else { 0.0 }).collect())
            .collect();
        MultiTaskProblem::new(FloatDist::uniform(n), table, beta).unwrap()
    }

    #[test]
    fn beta_zero_posteriors_equal_the_prior_with_no_information() {
        let prob = diagonal_problem(4, 0.0);
        let prior = Dist::validate(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let state = conditional_posteriors(&prob, &prior).unwrap();
        for post in &state.posteriors {
            assert_eq!(post, &prior);
        }
        assert!(state.mutual_information.abs() < 1e-15);
    }

    #[test]
    fn single_world_state_reduces_to_the_single_task_solver() {
        let world = Dist::validate(vec![1.0]).unwrap();
        let table = vec![vec![0.8, 1.0, 0.4]];
        let beta = 2.5;
        let prob = MultiTaskProblem::new(world, table, beta).unwrap();
        let prior = Dist::validate(vec![1.0 / 3.0, 0.5, 1.0 / 6.0]).unwrap();
        let state = conditional_posteriors(&prob, &prior).unwrap();

        let u = UtilityVector::new(vec![0.8, 1.0, 0.4]).unwrap();
        let single = boltzmann_posterior(&u, &prior, beta).unwrap();
        assert_eq!(state.posteriors[0], single.posterior);
        let f = single.expected_utility - single.kl_cost / beta;
        assert!((state.free_energy - f).abs() < 1e-15);
    }

    #[test]
    fn high_beta_identity_task_gives_diagonal_posteriors() {
        let prob = diagonal_problem(6, f64::INFINITY);
        let state = conditional_posteriors(&prob, &FloatDist::uniform(6)).unwrap();
        for (w, post) in state.posteriors.iter().enumerate() {
            assert_eq!(*post.get(w), 1.0);
        }
        // Deterministic distinct posteriors under a uniform world: I = log M.
        assert!((state.mutual_information - 6f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_gap_to_the_prior_term() {
        let prob = diagonal_problem(3, 2.0);
        let prior = Dist::validate(vec![0.6, 0.2, 0.2]).unwrap();
        let state = conditional_posteriors(&prob, &prior).unwrap();
        let info = mutual_information(prob.world_dist(), &state.posteriors, &prior).unwrap();
        assert!(info.against_prior >= info.against_marginal - 1e-12);

        // Identical posteriors carry no information.
        let same = vec![prior.clone(); 3];
        let info = mutual_information(prob.world_dist(), &same, &prior).unwrap();
        assert!(info.against_marginal.abs() < 1e-15);
    }

    #[test]
    fn blahut_arimoto_converges_at_beta_zero_in_one_iteration() {
        let prob = diagonal_problem(5, 0.0);
        let init = FloatDist::uniform(5);
        let out = blahut_arimoto(&prob, &init, 100, 1e-10).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
        assert!(out.state.mutual_information.abs() < 1e-15);
    }

    #[test]
    fn blahut_arimoto_trace_is_monotone() {
        let world = Dist::validate(vec![0.5, 0.3, 0.2]).unwrap();
        let table = vec![
            vec![1.0, 0.1, 0.0, 0.2],
            vec![0.0, 0.9, 0.3, 0.1],
            vec![0.2, 0.0, 0.8, 0.6],
        ];
        let prob = MultiTaskProblem::new(world, table, 3.0).unwrap();
        let out = blahut_arimoto(&prob, &FloatDist::uniform(4), 10_000, 1e-10).unwrap();
        assert!(out.converged);
        for w in out.free_energy_trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
        // Fixed point: prior equals the posterior marginal.
        let marginal =
            posterior_marginal(prob.world_dist(), &out.state.posteriors).unwrap();
        let residual = out
            .state
            .prior
            .weights()
            .iter()
            .zip(marginal.weights())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(residual <= 1e-8);
    }

    #[test]
    fn frontier_starts_at_zero_information() {
        let world = Dist::validate(vec![0.7, 0.3]).unwrap();
        let table = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let betas = [0.0, 1.0, 4.0, 16.0];
        for mode in [PriorMode::Uniform, PriorMode::Optimal] {
            let pts = efficiency_frontier(&world, &table, &betas, mode).unwrap();
            assert!(pts[0].mutual_information_bits.abs() < 1e-12);
            for w in pts.windows(2) {
                assert!(w[1].mutual_information_bits >= w[0].mutual_information_bits - 1e-9);
                assert!(w[1].expected_utility >= w[0].expected_utility - 1e-9);
            }
        }
    }
}
