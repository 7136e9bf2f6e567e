//! The majorization preorder on probability vectors: decision procedure,
//! elementary probability transfers, and constructive witnesses.
//!
//! `p' ≺ p` ("p majorizes p'", p' is more mixed) holds iff the sorted partial
//! sums of p' are dominated by those of p. Equivalent characterizations are
//! implemented as witnesses: a chain of T-transforms, a doubly stochastic
//! matrix, or a convex combination of permutations. Witness verification is
//! independent of witness synthesis so the two can cross-check each other.

use std::cmp::Ordering;

use crate::simplex::{decreasing_rearrangement, Dist};
use crate::weight::Weight;
use crate::{Error, Result};

/// Outcome of comparing two distributions under a preorder.
///
/// `Less` means the second argument is strictly below the first (`p' ≺ p` and
/// not `p ≺ p'`), i.e. the second contains strictly more uncertainty.
/// `Equivalent` means both directions hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Less,
    Greater,
    Equivalent,
    Incomparable,
}

/// A T-transform: replaces entries `m`, `n` by their weighted averages,
/// `(Tp)_m = (1-λ) p_m + λ p_n` and symmetrically for `n`.
///
/// `λ = 1` swaps the two entries; such steps are flagged as permutations
/// since a pure swap is not an elementary probability transfer.
#[derive(Debug, Clone, PartialEq)]
pub struct TTransform<T> {
    pub m: usize,
    pub n: usize,
    pub lambda: T,
    pub permutation: bool,
}

/// Moving `epsilon` probability from the more likely option `n` to the less
/// likely option `m`, which strictly increases uncertainty.
#[derive(Debug, Clone, PartialEq)]
pub struct PigouDaltonTransfer<T> {
    pub m: usize,
    pub n: usize,
    pub epsilon: T,
}

pub type Matrix<T> = Vec<Vec<T>>;

/// A constructive certificate that one distribution majorizes another.
#[derive(Debug, Clone, PartialEq)]
pub enum MajorizationWitness<T> {
    Chain(Vec<TTransform<T>>),
    DoublyStochastic(Matrix<T>),
    /// Coefficients and permutations: `p' = Σ θ_k Π_k(p)` where permutation
    /// `π` maps `p` to `(p_{π(0)}, ..., p_{π(N-1)})`.
    ConvexCombination(Vec<(T, Vec<usize>)>),
}

fn prefix_sums<T: Weight>(sorted: &Dist<T>) -> Vec<T> {
    let mut acc = T::zero();
    sorted
        .weights()
        .iter()
        .map(|w| {
            acc = acc.clone() + w.clone();
            acc.clone()
        })
        .collect()
}

/// Decide the majorization relation between `p` and `p_prime` by the sorted
/// partial-sum test.
pub fn majorizes<T: Weight>(p: &Dist<T>, p_prime: &Dist<T>) -> Result<Relation> {
    if p.len() != p_prime.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: p_prime.len(),
        });
    }
    let (sp, _) = decreasing_rearrangement(p);
    let (sq, _) = decreasing_rearrangement(p_prime);
    let sums_p = prefix_sums(&sp);
    let sums_q = prefix_sums(&sq);

    // All proper prefixes; the full sums are both 1.
    let mut below = true; // p' ≺ p
    let mut above = true; // p ≺ p'
    for k in 0..p.len().saturating_sub(1) {
        match sums_q[k].order(&sums_p[k]) {
            Ordering::Greater => below = false,
            Ordering::Less => above = false,
            Ordering::Equal => {}
        }
    }
    Ok(match (below, above) {
        (true, true) => Relation::Equivalent,
        (true, false) => Relation::Less,
        (false, true) => Relation::Greater,
        (false, false) => Relation::Incomparable,
    })
}

/// Apply a Pigou-Dalton transfer, moving `ε` from the more likely entry to
/// the less likely one. The result is strictly more uncertain than `p`.
pub fn apply_pigou_dalton<T: Weight>(
    p: &Dist<T>,
    t: &PigouDaltonTransfer<T>,
) -> Result<Dist<T>> {
    let n = p.len();
    if t.m == t.n || t.m >= n || t.n >= n {
        return Err(Error::InvalidTransfer {
            reason: format!("indices ({}, {}) invalid for length {n}", t.m, t.n),
        });
    }
    let pm = p.get(t.m).clone();
    let pn = p.get(t.n).clone();
    if pm.order(&pn) == Ordering::Greater {
        return Err(Error::InvalidTransfer {
            reason: "requires p_m <= p_n".into(),
        });
    }
    if t.epsilon.order(&T::zero()) != Ordering::Greater {
        return Err(Error::InvalidTransfer {
            reason: "transfer amount must be positive".into(),
        });
    }
    let bound = (pn.clone() - pm.clone()) / T::from_count(2);
    if t.epsilon.order(&bound) == Ordering::Greater {
        return Err(Error::InvalidTransfer {
            reason: "transfer amount exceeds (p_n - p_m)/2".into(),
        });
    }
    let mut weights = p.weights().to_vec();
    weights[t.m] = pm + t.epsilon.clone();
    weights[t.n] = pn - t.epsilon.clone();
    if weights[t.n] < T::zero() {
        // Float mode only: the tolerance on the bound check can leave a
        // residual of order TOL_ORD below zero.
        weights[t.n] = T::zero();
    }
    Ok(Dist::from_normalized(weights))
}

/// Apply a chain of T-transforms in order.
pub fn apply_chain<T: Weight>(p: &Dist<T>, chain: &[TTransform<T>]) -> Dist<T> {
    let mut w = p.weights().to_vec();
    let one = T::one();
    for step in chain {
        let a = w[step.m].clone();
        let b = w[step.n].clone();
        let keep = one.clone() - step.lambda.clone();
        w[step.m] = keep.clone() * a.clone() + step.lambda.clone() * b.clone();
        w[step.n] = step.lambda.clone() * a + keep * b;
    }
    Dist::from_normalized(w)
}

/// Build a chain of T-transforms carrying `p` to `p_prime`.
///
/// Requires `p_prime ≺ p`. The transfer part follows Muirhead's rule on the
/// sorted vectors: repeatedly take the outermost pair straddling the target
/// (the last index still above it, the first index after that still below)
/// and transfer the maximal admissible amount, which fixes at least one
/// coordinate per step. Final permutation steps (λ = 1, flagged) rearrange
/// the result into the exact order of `p_prime`. The chain has at most
/// `N - 1` transfer steps. Fails with `NotMajorized` when the construction
/// gets stuck, which happens exactly when `p_prime ⊀ p`.
pub fn synthesize_transform_chain<T: Weight>(
    p: &Dist<T>,
    p_prime: &Dist<T>,
) -> Result<Vec<TTransform<T>>> {
    if p.len() != p_prime.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: p_prime.len(),
        });
    }
    let n = p.len();
    let (sorted_p, perm_p) = decreasing_rearrangement(p);
    let (sorted_t, _) = decreasing_rearrangement(p_prime);
    let mut x: Vec<T> = sorted_p.weights().to_vec();
    let y: Vec<T> = sorted_t.weights().to_vec();

    let mut chain: Vec<TTransform<T>> = Vec::new();
    for _ in 0..n {
        // Outermost straddling pair on the sorted working vector.
        let Some(j) = (0..n).rev().find(|&i| x[i].order(&y[i]) == Ordering::Greater) else {
            break;
        };
        let Some(k) = (j + 1..n).find(|&i| x[i].order(&y[i]) == Ordering::Less) else {
            return Err(Error::NotMajorized);
        };
        let excess = x[j].clone() - y[j].clone();
        let deficit = y[k].clone() - x[k].clone();
        let delta = if excess.order(&deficit) == Ordering::Greater {
            deficit
        } else {
            excess
        };
        let gap = x[j].clone() - x[k].clone();
        let lambda = delta.clone() / gap;
        chain.push(TTransform {
            m: perm_p[j],
            n: perm_p[k],
            lambda,
            permutation: false,
        });
        x[j] = x[j].clone() - delta.clone();
        x[k] = x[k].clone() + delta;
    }
    if x.iter().zip(&y).any(|(a, b)| a.order(b) != Ordering::Equal) {
        return Err(Error::NotMajorized);
    }

    // The working vector now matches p_prime as a multiset. Emit swap steps
    // until each original position holds its target value.
    let mut w = apply_chain(p, &chain).weights().to_vec();
    for i in 0..n {
        if w[i].order(p_prime.get(i)) == Ordering::Equal {
            continue;
        }
        let Some(j) = (i + 1..n).find(|&j| w[j].order(p_prime.get(i)) == Ordering::Equal) else {
            return Err(Error::NotMajorized);
        };
        chain.push(TTransform {
            m: i,
            n: j,
            lambda: T::one(),
            permutation: true,
        });
        w.swap(i, j);
    }
    Ok(chain)
}

/// The matrix of a single T-transform on `n` options: the 2x2 block
/// `[[1-λ, λ], [λ, 1-λ]]` embedded in the identity.
pub fn t_transform_matrix<T: Weight>(step: &TTransform<T>, n: usize) -> Matrix<T> {
    let mut m = identity_matrix(n);
    let keep = T::one() - step.lambda.clone();
    m[step.m][step.m] = keep.clone();
    m[step.m][step.n] = step.lambda.clone();
    m[step.n][step.m] = step.lambda.clone();
    m[step.n][step.n] = keep;
    m
}

pub fn identity_matrix<T: Weight>(n: usize) -> Matrix<T> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect()
}

/// Product of the chain's transform matrices, a doubly stochastic matrix `A`
/// with `pA = p'` for the chain's endpoints. The empty chain gives the
/// identity.
pub fn witness_doubly_stochastic<T: Weight>(chain: &[TTransform<T>], n: usize) -> Matrix<T> {
    let mut a = identity_matrix::<T>(n);
    let one = T::one();
    for step in chain {
        // Right-multiplying by a T-transform only mixes two columns.
        let keep = one.clone() - step.lambda.clone();
        for row in a.iter_mut() {
            let cm = row[step.m].clone();
            let cn = row[step.n].clone();
            row[step.m] = keep.clone() * cm.clone() + step.lambda.clone() * cn.clone();
            row[step.n] = step.lambda.clone() * cm + keep.clone() * cn;
        }
    }
    a
}

/// Row-vector action `pA`, i.e. `(pA)_j = Σ_i p_i A_ij`.
pub fn apply_matrix<T: Weight>(p: &[T], a: &Matrix<T>) -> Vec<T> {
    let n = a.len();
    let mut out = vec![T::zero(); a.first().map_or(0, Vec::len)];
    for i in 0..n {
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = slot.clone() + p[i].clone() * a[i][j].clone();
        }
    }
    out
}

/// Check entries >= 0 and all row and column sums equal to one.
pub fn is_doubly_stochastic<T: Weight>(a: &Matrix<T>) -> bool {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return false;
    }
    let one = T::one();
    let zero = T::zero();
    for row in a {
        if row.iter().any(|v| v.order(&zero) == Ordering::Less) {
            return false;
        }
        let sum = row.iter().fold(T::zero(), |acc, v| acc + v.clone());
        if sum.order(&one) != Ordering::Equal {
            return false;
        }
    }
    for j in 0..n {
        let sum = a.iter().fold(T::zero(), |acc, row| acc + row[j].clone());
        if sum.order(&one) != Ordering::Equal {
            return false;
        }
    }
    true
}

/// Verify a witness against its claimed endpoints.
pub fn verify_witness<T: Weight>(
    witness: &MajorizationWitness<T>,
    p: &Dist<T>,
    p_prime: &Dist<T>,
) -> bool {
    let matches = |got: &[T]| {
        got.len() == p_prime.len()
            && got
                .iter()
                .zip(p_prime.weights())
                .all(|(a, b)| a.order(b) == Ordering::Equal)
    };
    match witness {
        MajorizationWitness::Chain(chain) => {
            if chain
                .iter()
                .any(|s| s.lambda < T::zero() || s.lambda > T::one())
            {
                return false;
            }
            matches(apply_chain(p, chain).weights())
        }
        MajorizationWitness::DoublyStochastic(a) => {
            is_doubly_stochastic(a) && matches(&apply_matrix(p.weights(), a))
        }
        MajorizationWitness::ConvexCombination(parts) => {
            let zero = T::zero();
            if parts.iter().any(|(th, _)| th.order(&zero) == Ordering::Less) {
                return false;
            }
            let total = parts
                .iter()
                .fold(T::zero(), |acc, (th, _)| acc + th.clone());
            if total.order(&T::one()) != Ordering::Equal {
                return false;
            }
            let mut mix = vec![T::zero(); p.len()];
            for (theta, perm) in parts {
                if perm.len() != p.len() {
                    return false;
                }
                for (j, &src) in perm.iter().enumerate() {
                    mix[j] = mix[j].clone() + theta.clone() * p.get(src).clone();
                }
            }
            matches(&mix)
        }
    }
}

/// The convex-combination witness for the uniform target: the average of all
/// cyclic permutations of `p` is uniform.
pub fn uniform_convex_combination<T: Weight>(p: &Dist<T>) -> MajorizationWitness<T> {
    let n = p.len();
    let theta = T::one() / T::from_count(n as u64);
    let parts = (0..n)
        .map(|r| {
            let perm = (0..n).map(|j| (j + r) % n).collect();
            (theta.clone(), perm)
        })
        .collect();
    MajorizationWitness::ConvexCombination(parts)
}

/// Property oracle for the minimality of the uniform distribution: every
/// distribution majorizes the uniform one.
pub fn uniform_is_minimal_check<T: Weight>(p: &Dist<T>) -> bool {
    let uniform = Dist::uniform(p.len());
    matches!(
        majorizes(p, &uniform),
        Ok(Relation::Less) | Ok(Relation::Equivalent)
    )
}
