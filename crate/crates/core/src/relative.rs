//! Majorization relative to a prior `q`.
//!
//! A prior with rational weights `q_i` lifts to a uniform distribution on an
//! elementary space of `α` options (α a common denominator), with option `i`
//! becoming a block of `α q_i` elements. A distribution `p` lifts to the
//! block-constant `P(ω) = p_i / (α q_i)`. Then `p' ≺_q p` iff the lifted
//! vectors compare under plain majorization, which this module decides
//! directly by a partial-sum test on block boundaries without materializing
//! the lifted space.

use std::cmp::Ordering;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};

use crate::majorization::{
    apply_matrix, synthesize_transform_chain, witness_doubly_stochastic, Matrix, Relation,
};
use crate::simplex::{Dist, ExactDist};
use crate::weight::Weight;
use crate::{Error, Result, MAX_ALPHA};

/// The representation of a distribution on the elementary space of the
/// prior: `block_sizes[i] = α q_i` copies of a constant value per block.
///
/// `values` stores one entry per elementary event (length `α`), so malformed
/// representations with non-constant blocks are expressible and rejected by
/// [`unlift`]. Options with zero prior weight are excluded before lifting;
/// `kept` records which original options the blocks correspond to so that
/// [`unlift`] restores them as zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedDist<T> {
    alpha: u64,
    block_sizes: Vec<u64>,
    values: Vec<T>,
    kept: Vec<usize>,
    original_len: usize,
}

impl<T: Weight> LiftedDist<T> {
    /// Assemble a lifted distribution from raw parts (blocks over the full
    /// index range). Mostly useful for tests of [`unlift`].
    pub fn new(block_sizes: Vec<u64>, values: Vec<T>) -> Result<Self> {
        if block_sizes.is_empty() || block_sizes.iter().any(|&s| s == 0) {
            return Err(Error::InvalidInput {
                reason: "block sizes must be positive".into(),
            });
        }
        let alpha: u64 = block_sizes.iter().sum();
        if values.len() as u64 != alpha {
            return Err(Error::InvalidInput {
                reason: format!("expected {alpha} lifted values, got {}", values.len()),
            });
        }
        let kept = (0..block_sizes.len()).collect();
        let original_len = block_sizes.len();
        Ok(LiftedDist {
            alpha,
            block_sizes,
            values,
            kept,
            original_len,
        })
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn block_sizes(&self) -> &[u64] {
        &self.block_sizes
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    /// The lifted values as a plain distribution on the elementary space.
    pub fn to_dist(&self) -> Dist<T> {
        Dist::from_normalized(self.values.clone())
    }
}

/// Exact prior weights plus the minimal common denominator of its support.
struct ExactPrior {
    weights: Vec<BigRational>,
    kept: Vec<usize>,
    alpha: u64,
}

fn exact_prior<T: Weight>(q: &Dist<T>) -> Result<ExactPrior> {
    let weights = T::prior_to_exact(q.weights())?;
    let kept: Vec<usize> = (0..weights.len())
        .filter(|&i| weights[i].is_positive())
        .collect();
    let mut alpha = BigInt::one();
    for &i in &kept {
        alpha = alpha.lcm(weights[i].denom());
    }
    let alpha_u64 = alpha
        .to_u64()
        .filter(|&a| a <= MAX_ALPHA)
        .ok_or_else(|| Error::AlphaOverflow {
            alpha: alpha.to_u128().unwrap_or(u128::MAX),
            limit: MAX_ALPHA,
        })?;
    Ok(ExactPrior {
        weights,
        kept,
        alpha: alpha_u64,
    })
}

fn check_absolutely_continuous<T: Weight>(p: &Dist<T>, prior: &ExactPrior) -> Result<()> {
    for (i, w) in p.weights().iter().enumerate() {
        if *w > T::zero() && !prior.weights[i].is_positive() {
            return Err(Error::NotAbsolutelyContinuous { index: i });
        }
    }
    Ok(())
}

/// Lift `p` onto the elementary space of the prior `q`, using the minimal
/// common denominator `α`. Float priors are rationalized first.
pub fn lift<T: Weight>(p: &Dist<T>, q: &Dist<T>) -> Result<LiftedDist<T>> {
    let prior = exact_prior(q)?;
    let alpha = prior.alpha;
    lift_with(p, &prior, alpha)
}

/// Lift with an explicit `α`, which must be a multiple of the minimal one.
/// The relation [`rel_majorizes`] does not depend on this choice.
pub fn lift_with_alpha<T: Weight>(p: &Dist<T>, q: &Dist<T>, alpha: u64) -> Result<LiftedDist<T>> {
    let prior = exact_prior(q)?;
    if alpha == 0 || alpha % prior.alpha != 0 {
        return Err(Error::InvalidInput {
            reason: format!(
                "alpha = {alpha} is not a multiple of the minimal denominator {}",
                prior.alpha
            ),
        });
    }
    if alpha > MAX_ALPHA {
        return Err(Error::AlphaOverflow {
            alpha: alpha as u128,
            limit: MAX_ALPHA,
        });
    }
    lift_with(p, &prior, alpha)
}

fn lift_with<T: Weight>(p: &Dist<T>, prior: &ExactPrior, alpha: u64) -> Result<LiftedDist<T>> {
    if p.len() != prior.weights.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: prior.weights.len(),
        });
    }
    check_absolutely_continuous(p, prior)?;
    let alpha_big = BigRational::from_integer(BigInt::from(alpha));
    let mut block_sizes = Vec::with_capacity(prior.kept.len());
    let mut values = Vec::with_capacity(alpha as usize);
    for &i in &prior.kept {
        let size_rat = &alpha_big * &prior.weights[i];
        debug_assert!(size_rat.is_integer());
        let size = size_rat.to_integer().to_u64().expect("block size fits u64");
        // P(ω) = p_i / (α q_i), constant on the block.
        let denom = T::from_count(alpha) * T::from_rational(&prior.weights[i]);
        let value = p.get(i).clone() / denom;
        for _ in 0..size {
            values.push(value.clone());
        }
        block_sizes.push(size);
    }
    Ok(LiftedDist {
        alpha,
        block_sizes,
        values,
        kept: prior.kept.clone(),
        original_len: p.len(),
    })
}

/// Recover the base distribution: `p_i` is the total mass of block `i`.
/// Fails if the values inside some block are not all equal. Excluded
/// zero-prior options come back as explicit zeros.
pub fn unlift<T: Weight>(lifted: &LiftedDist<T>) -> Result<Dist<T>> {
    let mut weights = vec![T::zero(); lifted.original_len];
    let mut offset = 0usize;
    for (b, &size) in lifted.block_sizes.iter().enumerate() {
        let block = &lifted.values[offset..offset + size as usize];
        let first = &block[0];
        if block[1..].iter().any(|v| v.order(first) != Ordering::Equal) {
            return Err(Error::NotBlockConstant { block: b });
        }
        let mass = block.iter().fold(T::zero(), |acc, v| acc + v.clone());
        weights[lifted.kept[b]] = mass;
        offset += size as usize;
    }
    Ok(Dist::from_normalized(weights))
}

/// One distribution's ratio-sorted view against the prior: block boundaries
/// `K_l = α Σ q↓_i` (exact integers) and weight prefix sums `Σ p↓_i`.
struct RatioSorted<T> {
    boundaries: Vec<u64>,
    prefixes: Vec<T>,
    weights: Vec<T>,
}

fn ratio_sorted<T: Weight>(p: &Dist<T>, prior: &ExactPrior, alpha: u64) -> RatioSorted<T> {
    let mut order: Vec<usize> = prior.kept.clone();
    // Sort by p_i/q_i descending; ties by q_i descending, then index.
    order.sort_by(|&a, &b| {
        let ra = p.get(a).clone() / T::from_rational(&prior.weights[a]);
        let rb = p.get(b).clone() / T::from_rational(&prior.weights[b]);
        rb.partial_cmp(&ra)
            .expect("non-finite ratio")
            .then_with(|| prior.weights[b].cmp(&prior.weights[a]))
            .then(a.cmp(&b))
    });
    let alpha_big = BigRational::from_integer(BigInt::from(alpha));
    let mut boundaries = Vec::with_capacity(order.len());
    let mut prefixes = Vec::with_capacity(order.len());
    let mut weights = Vec::with_capacity(order.len());
    let mut k_acc = 0u64;
    let mut p_acc = T::zero();
    for &i in &order {
        let size = (&alpha_big * &prior.weights[i])
            .to_integer()
            .to_u64()
            .expect("block size fits u64");
        k_acc += size;
        p_acc = p_acc + p.get(i).clone();
        boundaries.push(k_acc);
        prefixes.push(p_acc.clone());
        weights.push(p.get(i).clone());
    }
    RatioSorted {
        boundaries,
        prefixes,
        weights,
    }
}

impl<T: Weight> RatioSorted<T> {
    /// Partial sum of the first `k` elements of the decreasing rearrangement
    /// of the lifted vector. Piecewise linear in `k` with breakpoints at the
    /// block boundaries; between boundaries the interpolation coefficient is
    /// `a_q(k, l) = (k - K_{l-1}) / (K_l - K_{l-1})`.
    fn lorenz(&self, k: u64) -> T {
        if k == 0 {
            return T::zero();
        }
        let l = self.boundaries.partition_point(|&b| b < k);
        let (k_lo, p_lo) = if l == 0 {
            (0u64, T::zero())
        } else {
            (self.boundaries[l - 1], self.prefixes[l - 1].clone())
        };
        if k == self.boundaries[l] {
            return self.prefixes[l].clone();
        }
        let frac = T::from_count(k - k_lo) / T::from_count(self.boundaries[l] - k_lo);
        p_lo + frac * self.weights[l].clone()
    }
}

/// Decide `≺_q` by the partial-sum test on the lifted space.
///
/// Both sides are evaluated at every block boundary of either side; the
/// lifted partial-sum functions are piecewise linear between those points,
/// so this is equivalent to comparing the full lifted rearrangements. The
/// result equals `majorizes(lift(p, q), lift(p', q))` on every instance.
pub fn rel_majorizes<T: Weight>(p: &Dist<T>, p_prime: &Dist<T>, q: &Dist<T>) -> Result<Relation> {
    if p.len() != q.len() || p_prime.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len().max(p_prime.len()),
            right: q.len(),
        });
    }
    let prior = exact_prior(q)?;
    check_absolutely_continuous(p, &prior)?;
    check_absolutely_continuous(p_prime, &prior)?;
    let alpha = prior.alpha;
    let side_p = ratio_sorted(p, &prior, alpha);
    let side_q = ratio_sorted(p_prime, &prior, alpha);

    let mut below = true; // p' ≺_q p
    let mut above = true; // p ≺_q p'
    for &k in side_p.boundaries.iter().chain(&side_q.boundaries) {
        if k == alpha {
            continue;
        }
        match side_q.lorenz(k).order(&side_p.lorenz(k)) {
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

/// A probability transfer that increases uncertainty relative to the prior:
/// `ε` moves from option `n` to option `m` where `p_m/q_m <= p_n/q_n`, with
/// `ε <= (p_n/q_n - p_m/q_m) / (1/q_m + 1/q_n)` so the ratio ordering of the
/// two options is preserved.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeTransfer<T> {
    pub m: usize,
    pub n: usize,
    pub epsilon: T,
}

/// The largest admissible amount for a transfer from `n` to `m` relative to
/// `q`; transferring exactly this much equalizes the two ratios.
pub fn max_relative_transfer<T: Weight>(
    p: &Dist<T>,
    q: &Dist<T>,
    m: usize,
    n: usize,
) -> Result<T> {
    let (qm, qn) = (q.get(m).clone(), q.get(n).clone());
    if qm.is_zero() || qn.is_zero() {
        return Err(Error::InvalidTransfer {
            reason: "transfer endpoints must have positive prior weight".into(),
        });
    }
    let rm = p.get(m).clone() / qm.clone();
    let rn = p.get(n).clone() / qn.clone();
    if rm.order(&rn) == Ordering::Greater {
        return Err(Error::InvalidTransfer {
            reason: "requires p_m/q_m <= p_n/q_n".into(),
        });
    }
    let one = T::one();
    Ok((rn - rm) / (one.clone() / qm + one / qn))
}

/// Apply a Pigou-Dalton transfer relative to `q`. For `ε > 0` the result is
/// strictly more uncertain relative to `q` than `p`.
pub fn apply_relative_transfer<T: Weight>(
    p: &Dist<T>,
    q: &Dist<T>,
    t: &RelativeTransfer<T>,
) -> Result<Dist<T>> {
    let len = p.len();
    if q.len() != len {
        return Err(Error::LengthMismatch {
            left: len,
            right: q.len(),
        });
    }
    if t.m == t.n || t.m >= len || t.n >= len {
        return Err(Error::InvalidTransfer {
            reason: format!("indices ({}, {}) invalid for length {len}", t.m, t.n),
        });
    }
    if t.epsilon.order(&T::zero()) == Ordering::Less {
        return Err(Error::InvalidTransfer {
            reason: "transfer amount must be non-negative".into(),
        });
    }
    let bound = max_relative_transfer(p, q, t.m, t.n)?;
    if t.epsilon.order(&bound) == Ordering::Greater {
        return Err(Error::InvalidTransfer {
            reason: "transfer amount exceeds the ratio-preserving bound".into(),
        });
    }
    let mut weights = p.weights().to_vec();
    weights[t.m] = weights[t.m].clone() + t.epsilon.clone();
    weights[t.n] = weights[t.n].clone() - t.epsilon.clone();
    if weights[t.n] < T::zero() {
        weights[t.n] = T::zero();
    }
    Ok(Dist::from_normalized(weights))
}

/// A stochastic matrix (`Ae = e`) fixing the prior from the left (`qA = q`).
#[derive(Debug, Clone, PartialEq)]
pub struct QStochasticWitness {
    pub matrix: Matrix<BigRational>,
}

/// Construct a q-stochastic witness for `p' ≺_q p` in exact arithmetic.
///
/// Both distributions are lifted, a doubly stochastic matrix `B` is
/// synthesized on the elementary space from a T-transform chain, and `B` is
/// conjugated back down: `A_ij` is the total mass of the `(block_i, block_j)`
/// sub-block of `B` divided by `α q_i`. Zero-prior options get an identity
/// row so that `A` stays stochastic on the full index set.
pub fn witness_q_stochastic(
    p: &ExactDist,
    p_prime: &ExactDist,
    q: &ExactDist,
) -> Result<QStochasticWitness> {
    match rel_majorizes(p, p_prime, q)? {
        Relation::Less | Relation::Equivalent => {}
        _ => return Err(Error::NotRelMajorized),
    }
    let lifted_p = lift(p, q)?;
    let lifted_t = lift(p_prime, q)?;
    let alpha = lifted_p.alpha() as usize;
    let chain = synthesize_transform_chain(&lifted_p.to_dist(), &lifted_t.to_dist())
        .map_err(|_| Error::NotRelMajorized)?;
    let big = witness_doubly_stochastic(&chain, alpha);

    // Block offsets into the lifted index range.
    let sizes = lifted_p.block_sizes();
    let mut offsets = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0usize;
    offsets.push(0);
    for &s in sizes {
        acc += s as usize;
        offsets.push(acc);
    }

    let n = p.len();
    let mut matrix = vec![vec![BigRational::zero(); n]; n];
    for (bi, &i) in lifted_p.kept().iter().enumerate() {
        let scale = BigRational::from_integer(BigInt::from(sizes[bi]));
        for (bj, &j) in lifted_p.kept().iter().enumerate() {
            let mut total = BigRational::zero();
            for row in &big[offsets[bi]..offsets[bi + 1]] {
                for v in &row[offsets[bj]..offsets[bj + 1]] {
                    total += v;
                }
            }
            // A_ij = block mass / (α q_i), and α q_i is the block size.
            matrix[i][j] = total / &scale;
        }
    }
    for i in 0..n {
        if !q.get(i).is_positive() {
            matrix[i][i] = BigRational::one();
        }
    }
    Ok(QStochasticWitness { matrix })
}

/// Verify the three witness equations: `A_ij >= 0`, `Ae = e`, `qA = q`, and
/// `pA = p'`.
pub fn verify_q_stochastic(
    witness: &QStochasticWitness,
    p: &ExactDist,
    p_prime: &ExactDist,
    q: &ExactDist,
) -> bool {
    let a = &witness.matrix;
    let n = q.len();
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return false;
    }
    if a.iter().flatten().any(|v| v.is_negative()) {
        return false;
    }
    let one = BigRational::one();
    if a
        .iter()
        .any(|row| row.iter().fold(BigRational::zero(), |s, v| s + v) != one)
    {
        return false;
    }
    let fixed = apply_matrix(q.weights(), a);
    if fixed != q.weights() {
        return false;
    }
    apply_matrix(p.weights(), a) == p_prime.weights()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorization::majorizes;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn exact_dist(entries: &[(i64, i64)]) -> ExactDist {
        Dist::validate(entries.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
    }

    #[test]
    fn lift_reproduces_the_worked_example() {
        let q = exact_dist(&[(1, 6), (1, 2), (1, 3)]);
        let p = exact_dist(&[(1, 6), (3, 4), (1, 12)]);
        let lifted = lift(&p, &q).unwrap();
        assert_eq!(lifted.alpha(), 6);
        assert_eq!(lifted.block_sizes(), &[1, 3, 2]);
        let expected = vec![
            ratio(1, 6),
            ratio(1, 4),
            ratio(1, 4),
            ratio(1, 4),
            ratio(1, 24),
            ratio(1, 24),
        ];
        assert_eq!(lifted.values(), &expected[..]);
        assert_eq!(unlift(&lifted).unwrap(), p);
    }

    #[test]
    fn lifting_the_prior_gives_the_uniform_distribution() {
        let q = exact_dist(&[(1, 6), (1, 2), (1, 3)]);
        let lifted = lift(&q, &q).unwrap();
        assert!(lifted.values().iter().all(|v| *v == ratio(1, 6)));
    }

    #[test]
    fn lift_rejects_mass_outside_the_prior_support() {
        let q = exact_dist(&[(1, 2), (1, 2), (0, 1)]);
        let p = exact_dist(&[(1, 4), (1, 2), (1, 4)]);
        assert!(matches!(
            lift(&p, &q),
            Err(Error::NotAbsolutelyContinuous { index: 2 })
        ));
    }

    #[test]
    fn lift_drops_zero_prior_options_and_unlift_restores_them() {
        let q = exact_dist(&[(1, 2), (0, 1), (1, 2)]);
        let p = exact_dist(&[(1, 4), (0, 1), (3, 4)]);
        let lifted = lift(&p, &q).unwrap();
        assert_eq!(lifted.block_sizes(), &[1, 1]);
        assert_eq!(lifted.kept(), &[0, 2]);
        assert_eq!(unlift(&lifted).unwrap(), p);
    }

    #[test]
    fn unlift_rejects_non_constant_blocks() {
        let lifted =
            LiftedDist::new(vec![2, 1], vec![ratio(1, 4), ratio(1, 8), ratio(5, 8)]).unwrap();
        assert!(matches!(
            unlift(&lifted),
            Err(Error::NotBlockConstant { block: 0 })
        ));
    }

    #[test]
    fn prior_is_minimal_on_exact_instances() {
        let q = exact_dist(&[(1, 6), (1, 2), (1, 3)]);
        for p in [
            exact_dist(&[(1, 6), (3, 4), (1, 12)]),
            exact_dist(&[(1, 1), (0, 1), (0, 1)]),
            exact_dist(&[(1, 6), (1, 2), (1, 3)]),
        ] {
            let rel = rel_majorizes(&p, &q, &q).unwrap();
            assert!(
                rel == Relation::Less || rel == Relation::Equivalent,
                "prior not minimal under {p:?}: {rel:?}"
            );
        }
    }

    #[test]
    fn reflexivity_gives_equivalent() {
        let q = exact_dist(&[(1, 6), (1, 2), (1, 3)]);
        let p = exact_dist(&[(1, 6), (3, 4), (1, 12)]);
        assert_eq!(rel_majorizes(&p, &p, &q).unwrap(), Relation::Equivalent);
    }

    #[test]
    fn uniform_prior_reduces_to_plain_majorization() {
        let q = exact_dist(&[(1, 2), (1, 2)]);
        let cases = [
            (exact_dist(&[(3, 4), (1, 4)]), exact_dist(&[(1, 2), (1, 2)])),
            (exact_dist(&[(1, 2), (1, 2)]), exact_dist(&[(3, 4), (1, 4)])),
            (exact_dist(&[(2, 3), (1, 3)]), exact_dist(&[(1, 3), (2, 3)])),
        ];
        for (p, p2) in cases {
            assert_eq!(
                rel_majorizes(&p, &p2, &q).unwrap(),
                majorizes(&p, &p2).unwrap()
            );
        }
    }

    #[test]
    fn relative_test_agrees_with_the_lifted_definition() {
        let q = exact_dist(&[(1, 6), (1, 2), (1, 3)]);
        let candidates = [
            exact_dist(&[(1, 6), (3, 4), (1, 12)]),
            exact_dist(&[(1, 2), (1, 4), (1, 4)]),
            exact_dist(&[(1, 6), (1, 2), (1, 3)]),
            exact_dist(&[(0, 1), (1, 1), (0, 1)]),
            exact_dist(&[(1, 3), (1, 3), (1, 3)]),
        ];
        for p in &candidates {
            for p2 in &candidates {
                let direct = rel_majorizes(p, p2, &q).unwrap();
                let lifted = majorizes(
                    &lift(p, &q).unwrap().to_dist(),
                    &lift(p2, &q).unwrap().to_dist(),
                )
                .unwrap();
                assert_eq!(direct, lifted, "mismatch for {p:?} vs {p2:?}");
            }
        }
    }

    #[test]
    fn relation_is_independent_of_the_alpha_multiple() {
        let q = exact_dist(&[(1, 6), (1, 2), (1, 3)]);
        let p = exact_dist(&[(1, 6), (3, 4), (1, 12)]);
        let p2 = exact_dist(&[(1, 3), (1, 3), (1, 3)]);
        let base = majorizes(
            &lift(&p, &q).unwrap().to_dist(),
            &lift(&p2, &q).unwrap().to_dist(),
        )
        .unwrap();
        for mult in [2u64, 3, 5] {
            let a = 6 * mult;
            let scaled = majorizes(
                &lift_with_alpha(&p, &q, a).unwrap().to_dist(),
                &lift_with_alpha(&p2, &q, a).unwrap().to_dist(),
            )
            .unwrap();
            assert_eq!(base, scaled);
        }
    }

    #[test]
    fn relative_transfer_to_the_prior() {
        let q = Dist::validate(vec![0.5, 0.5]).unwrap();
        let p = Dist::validate(vec![0.25, 0.75]).unwrap();
        let bound = max_relative_transfer(&p, &q, 0, 1).unwrap();
        assert!((bound - 0.25).abs() < 1e-15);
        let t = RelativeTransfer {
            m: 0,
            n: 1,
            epsilon: bound,
        };
        let r = apply_relative_transfer(&p, &q, &t).unwrap();
        assert!((r.get(0) - 0.5).abs() < 1e-15);

        // ε = 0 leaves p unchanged.
        let t0 = RelativeTransfer {
            m: 0,
            n: 1,
            epsilon: 0.0,
        };
        assert_eq!(apply_relative_transfer(&p, &q, &t0).unwrap(), p);
    }

    #[test]
    fn maximal_transfer_equalizes_the_ratios_exactly() {
        let q = exact_dist(&[(1, 6), (1, 2), (1, 3)]);
        let p = exact_dist(&[(1, 6), (3, 4), (1, 12)]);
        let eps = max_relative_transfer(&p, &q, 2, 1).unwrap();
        assert_eq!(eps, ratio(1, 4));
        let t = RelativeTransfer {
            m: 2,
            n: 1,
            epsilon: eps,
        };
        let r = apply_relative_transfer(&p, &q, &t).unwrap();
        let r2 = r.get(2).clone() / q.get(2).clone();
        let r1 = r.get(1).clone() / q.get(1).clone();
        assert_eq!(r1, r2);
        // A positive transfer strictly increases uncertainty relative to q.
        assert_eq!(rel_majorizes(&p, &r, &q).unwrap(), Relation::Less);
    }

    #[test]
    fn transfers_violating_the_bound_are_rejected() {
        let q = Dist::validate(vec![0.5, 0.5]).unwrap();
        let p = Dist::validate(vec![0.25, 0.75]).unwrap();
        let t = RelativeTransfer {
            m: 0,
            n: 1,
            epsilon: 0.26,
        };
        assert!(matches!(
            apply_relative_transfer(&p, &q, &t),
            Err(Error::InvalidTransfer { .. })
        ));
    }

    #[test]
    fn q_stochastic_witness_for_identity_and_prior_targets() {
        let q = exact_dist(&[(1, 6), (1, 2), (1, 3)]);
        let p = exact_dist(&[(1, 6), (3, 4), (1, 12)]);

        let w = witness_q_stochastic(&p, &p, &q).unwrap();
        assert!(verify_q_stochastic(&w, &p, &p, &q));

        let w = witness_q_stochastic(&p, &q, &q).unwrap();
        assert!(verify_q_stochastic(&w, &p, &q, &q));
    }

    #[test]
    fn witness_refused_when_not_related() {
        let q = exact_dist(&[(1, 2), (1, 2)]);
        let p = exact_dist(&[(1, 2), (1, 2)]);
        let p2 = exact_dist(&[(3, 4), (1, 4)]);
        assert!(matches!(
            witness_q_stochastic(&p, &p2, &q),
            Err(Error::NotRelMajorized)
        ));
    }

    #[test]
    fn float_mode_rationalizes_the_prior() {
        let q = Dist::validate(vec![1.0 / 3.0, 0.5, 1.0 / 6.0]).unwrap();
        let p = Dist::validate(vec![0.2, 0.6, 0.2]).unwrap();
        // Prior minimality survives the float round trip.
        let rel = rel_majorizes(&p, &q, &q).unwrap();
        assert!(rel == Relation::Less || rel == Relation::Equivalent);
    }
}
