//! Validated probability vectors, rearrangements, expectations, and
//! coarse-graining partitions. Everything else in the crate builds on these.

use num::rational::BigRational;
use rand::Rng;

use crate::weight::Weight;
use crate::{Error, Result, TOL_NORM};

/// A probability distribution over a finite option set.
///
/// Weights are non-negative and sum to one: exactly in rational mode, within
/// [`TOL_NORM`] (and then renormalized) in float mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Dist<T> {
    weights: Vec<T>,
}

pub type FloatDist = Dist<f64>;
pub type ExactDist = Dist<BigRational>;

impl<T: Weight> Dist<T> {
    /// Validate a weight vector as a probability distribution.
    ///
    /// Float mode renormalizes iff the sum is within [`TOL_NORM`] of one;
    /// exact mode requires the sum to be exactly one.
    pub fn validate(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput {
                reason: "weight vector must be non-empty".into(),
            });
        }
        let zero = T::zero();
        for (index, w) in weights.iter().enumerate() {
            if !(*w >= zero) {
                return Err(Error::NegativeWeight {
                    index,
                    value: w.as_f64(),
                });
            }
        }
        let sum = weights
            .iter()
            .fold(T::zero(), |acc, w| acc + w.clone());
        if T::EXACT {
            if !sum.is_one() {
                return Err(Error::NotNormalized { sum: sum.as_f64() });
            }
            Ok(Dist { weights })
        } else {
            let s = sum.as_f64();
            if !s.is_finite() || (s - 1.0).abs() > TOL_NORM {
                return Err(Error::NotNormalized { sum: s });
            }
            let weights = weights.into_iter().map(|w| w / sum.clone()).collect();
            Ok(Dist { weights })
        }
    }

    /// Construct without validation. Only for weights that are already known
    /// to satisfy the invariants (outputs of operations on valid inputs).
    pub(crate) fn from_normalized(weights: Vec<T>) -> Self {
        Dist { weights }
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "empty option set");
        let w = T::one() / T::from_count(n as u64);
        Dist {
            weights: vec![w; n],
        }
    }

    /// Dirac distribution concentrated on option `k`.
    pub fn dirac(n: usize, k: usize) -> Self {
        assert!(k < n, "dirac index out of range");
        let mut weights = vec![T::zero(); n];
        weights[k] = T::one();
        Dist { weights }
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, i: usize) -> &T {
        &self.weights[i]
    }
}

impl Dist<f64> {
    /// Sample an option index by inverse CDF.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, w) in self.weights.iter().enumerate() {
            acc += w;
            if u < acc {
                return i;
            }
        }
        self.weights.len() - 1
    }

    /// Total variation distance to another distribution of the same length.
    pub fn total_variation(&self, other: &Dist<f64>) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        0.5 * self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }
}

/// A utility function on the option set, one real value per option.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityVector {
    values: Vec<f64>,
}

impl UtilityVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput {
                reason: "utility vector must be non-empty".into(),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput {
                reason: format!("utility entries must be finite, got {v}"),
            });
        }
        Ok(UtilityVector { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A partition of the option set `{0..n-1}` into disjoint non-empty blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    n: usize,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidPartition {
                reason: "no blocks".into(),
            });
        }
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition {
                    reason: "empty block".into(),
                });
            }
            for &i in block {
                if i >= n {
                    return Err(Error::InvalidPartition {
                        reason: format!("index {i} out of range for n = {n}"),
                    });
                }
                if seen[i] {
                    return Err(Error::InvalidPartition {
                        reason: format!("index {i} appears in more than one block"),
                    });
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidPartition {
                reason: "blocks do not cover the option set".into(),
            });
        }
        Ok(Partition { blocks, n })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Sort weights in decreasing order.
///
/// Returns the rearranged distribution and the permutation mapping sorted
/// position to original index. Ties break by ascending original index, which
/// makes every downstream witness deterministic.
pub fn decreasing_rearrangement<T: Weight>(p: &Dist<T>) -> (Dist<T>, Vec<usize>) {
    let mut perm: Vec<usize> = (0..p.len()).collect();
    perm.sort_by(|&a, &b| {
        p.get(b)
            .partial_cmp(p.get(a))
            .expect("non-finite weight")
            .then(a.cmp(&b))
    });
    let weights = perm.iter().map(|&i| p.get(i).clone()).collect();
    (Dist::from_normalized(weights), perm)
}

/// Expectation of `values` under `p`.
pub fn expectation<T: Weight>(p: &Dist<T>, values: &[T]) -> Result<T> {
    if p.len() != values.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: values.len(),
        });
    }
    Ok(p.weights()
        .iter()
        .zip(values)
        .fold(T::zero(), |acc, (w, v)| acc + w.clone() * v.clone()))
}

/// Expectation of a utility function under a float distribution.
pub fn expected_utility(p: &Dist<f64>, u: &UtilityVector) -> Result<f64> {
    expectation(p, u.values())
}

/// Conditional distributions per block; `None` marks a zero-probability
/// block whose conditional is undefined. Callers must handle the marker
/// rather than assume a fill-in.
pub type BlockConditionals<T> = Vec<Option<Dist<T>>>;

/// Split `p` along a partition into the block marginal and the conditional
/// distribution inside each block.
///
/// `marginal[k] = sum of p over block k`; the conditional on block `k` lists
/// `p_i / marginal[k]` in block order. Blocks with zero marginal yield an
/// explicit undefined-conditional marker.
pub fn coarse_grain<T: Weight>(
    p: &Dist<T>,
    part: &Partition,
) -> Result<(Dist<T>, BlockConditionals<T>)> {
    if part.n() != p.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: part.n(),
        });
    }
    let mut marginal = Vec::with_capacity(part.num_blocks());
    let mut conditionals = Vec::with_capacity(part.num_blocks());
    for block in part.blocks() {
        let mass = block
            .iter()
            .fold(T::zero(), |acc, &i| acc + p.get(i).clone());
        if mass.is_zero() {
            conditionals.push(None);
        } else {
            let cond = block
                .iter()
                .map(|&i| p.get(i).clone() / mass.clone())
                .collect();
            conditionals.push(Some(Dist::from_normalized(cond)));
        }
        marginal.push(mass);
    }
    Ok((Dist::from_normalized(marginal), conditionals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn exact_dist(entries: &[(i64, i64)]) -> ExactDist {
        Dist::validate(entries.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
    }

    #[test]
    fn validates_the_prior_from_the_worked_examples() {
        let d = Dist::validate(vec![1.0 / 3.0, 0.5, 1.0 / 6.0]).unwrap();
        assert_eq!(d.len(), 3);
        let vertex = Dist::validate(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(*vertex.get(0), 1.0);
    }

    #[test]
    fn rejects_unnormalized_and_negative_weights() {
        assert!(matches!(
            Dist::validate(vec![0.5, 0.6]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            Dist::validate(vec![-0.1, 1.1]),
            Err(Error::NegativeWeight { index: 0, .. })
        ));
        assert!(matches!(
            Dist::<f64>::validate(vec![]),
            Err(Error::InvalidInput { .. })
        ));
    }

    #[test]
    fn exact_mode_admits_no_tolerance() {
        assert!(Dist::validate(vec![ratio(1, 3), ratio(1, 2), ratio(1, 6)]).is_ok());
        assert!(matches!(
            Dist::validate(vec![ratio(1, 3), ratio(1, 2), ratio(1, 7)]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn rearrangement_sorts_and_reports_the_permutation() {
        let d = exact_dist(&[(1, 6), (1, 2), (1, 3)]);
        let (sorted, perm) = decreasing_rearrangement(&d);
        assert_eq!(sorted.weights(), &[ratio(1, 2), ratio(1, 3), ratio(1, 6)]);
        assert_eq!(perm, vec![1, 2, 0]);

        let tied = exact_dist(&[(1, 3), (1, 3), (1, 3)]);
        let (_, perm) = decreasing_rearrangement(&tied);
        assert_eq!(perm, vec![0, 1, 2]);

        let d = Dist::validate(vec![0.0, 1.0]).unwrap();
        let (sorted, perm) = decreasing_rearrangement(&d);
        assert_eq!(sorted.weights(), &[1.0, 0.0]);
        assert_eq!(perm, vec![1, 0]);
    }

    #[test]
    fn expectation_matches_the_exact_dot_product() {
        let p = Dist::validate(vec![1.0 / 3.0, 0.5, 1.0 / 6.0]).unwrap();
        let u = UtilityVector::new(vec![0.8, 1.0, 0.4]).unwrap();
        let got = expected_utility(&p, &u).unwrap();
        // 4/15 + 1/2 + 1/15 = 5/6, confirmed in rationals below.
        assert!((got - 5.0 / 6.0).abs() < 1e-15);

        let pe = exact_dist(&[(1, 3), (1, 2), (1, 6)]);
        let ue = vec![ratio(4, 5), ratio(1, 1), ratio(2, 5)];
        assert_eq!(expectation(&pe, &ue).unwrap(), ratio(5, 6));

        let uniform = FloatDist::uniform(4);
        let c = UtilityVector::new(vec![2.5; 4]).unwrap();
        assert!((expected_utility(&uniform, &c).unwrap() - 2.5).abs() < 1e-15);

        let dirac = FloatDist::dirac(3, 1);
        assert_eq!(expected_utility(&dirac, &u).unwrap(), 1.0);

        assert!(matches!(
            expected_utility(&uniform, &u),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn coarse_grain_worked_example_in_rationals() {
        let p = exact_dist(&[(1, 6), (3, 4), (1, 12)]);
        let part = Partition::new(vec![vec![0, 1], vec![2]], 3).unwrap();
        let (marginal, conds) = coarse_grain(&p, &part).unwrap();
        assert_eq!(marginal.weights(), &[ratio(11, 12), ratio(1, 12)]);
        let first = conds[0].as_ref().unwrap();
        assert_eq!(first.weights(), &[ratio(2, 11), ratio(9, 11)]);
        let second = conds[1].as_ref().unwrap();
        assert_eq!(second.weights(), &[ratio(1, 1)]);
    }

    #[test]
    fn coarse_grain_single_block_and_zero_block() {
        let p = Dist::validate(vec![0.25, 0.5, 0.25]).unwrap();
        let part = Partition::new(vec![vec![0, 1, 2]], 3).unwrap();
        let (marginal, conds) = coarse_grain(&p, &part).unwrap();
        assert_eq!(marginal.weights(), &[1.0]);
        assert_eq!(conds[0].as_ref().unwrap().weights(), p.weights());

        let p = Dist::validate(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let part = Partition::new(vec![vec![0, 1], vec![2, 3]], 4).unwrap();
        let (marginal, conds) = coarse_grain(&p, &part).unwrap();
        assert_eq!(marginal.weights(), &[1.0, 0.0]);
        assert!(conds[0].is_some());
        assert!(conds[1].is_none());
    }

    #[test]
    fn partition_rejects_overlap_gaps_and_empty_blocks() {
        assert!(Partition::new(vec![vec![0], vec![0, 1]], 2).is_err());
        assert!(Partition::new(vec![vec![0]], 2).is_err());
        assert!(Partition::new(vec![vec![0], vec![]], 1).is_err());
        assert!(Partition::new(vec![vec![0], vec![7]], 2).is_err());
    }
}
