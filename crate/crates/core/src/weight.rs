//! Scalar abstraction shared by the order modules.
//!
//! The majorization machinery runs in two modes: `f64` with tolerance-aware
//! comparisons, and exact arithmetic over [`BigRational`]. The [`Weight`]
//! trait captures exactly the surface both need; order decisions go through
//! [`Weight::order`] so that float mode treats values within [`crate::TOL_ORD`]
//! as tied while rational mode compares exactly.

use std::cmp::Ordering;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};

use crate::{Error, Result, DEFAULT_DENOM_BOUND, TOL_ORD};

/// Scalar type usable as a probability weight.
pub trait Weight:
    Clone
    + PartialEq
    + PartialOrd
    + std::fmt::Debug
    + std::fmt::Display
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + Zero
    + One
{
    /// Whether arithmetic is exact. Exact mode admits no normalization slack
    /// and no order tolerance.
    const EXACT: bool;

    /// Tolerance-aware order: in float mode values within [`TOL_ORD`] compare
    /// equal, in exact mode this is the plain rational order.
    fn order(&self, other: &Self) -> Ordering;

    fn from_count(n: u64) -> Self;

    fn from_rational(r: &BigRational) -> Self;

    fn as_f64(&self) -> f64;

    /// Convert a prior to exact rationals. Float weights are approximated by
    /// continued fractions with the default denominator bound and the sum is
    /// repaired to exactly one; rational weights pass through unchanged.
    fn prior_to_exact(weights: &[Self]) -> Result<Vec<BigRational>>;
}

impl Weight for f64 {
    const EXACT: bool = false;

    fn order(&self, other: &Self) -> Ordering {
        if (self - other).abs() <= TOL_ORD {
            Ordering::Equal
        } else {
            self.partial_cmp(other).expect("non-finite weight")
        }
    }

    fn from_count(n: u64) -> Self {
        n as f64
    }

    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().expect("rational out of f64 range")
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn prior_to_exact(weights: &[Self]) -> Result<Vec<BigRational>> {
        rationalize_weights(weights, DEFAULT_DENOM_BOUND)
    }
}

impl Weight for BigRational {
    const EXACT: bool = true;

    fn order(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn from_count(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).expect("rational out of f64 range")
    }

    fn prior_to_exact(weights: &[Self]) -> Result<Vec<BigRational>> {
        Ok(weights.to_vec())
    }
}

/// Best continued-fraction approximation of `x` with denominator at most
/// `max_denom`.
///
/// The expansion runs on the exact dyadic value of `x`, so floats that began
/// life as small fractions (1/3, 1/6, ...) are recovered exactly.
pub fn rational_approx(x: f64, max_denom: u64) -> Result<BigRational> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidInput {
            reason: format!("cannot rationalize {x}"),
        });
    }
    let bound = BigInt::from(max_denom.max(1));
    let exact = BigRational::from_float(x).expect("finite float");

    // Convergents h/k of the continued fraction of `exact`.
    let mut h_prev = BigInt::one();
    let mut h = exact.numer().div_floor(exact.denom());
    let mut k_prev = BigInt::zero();
    let mut k = BigInt::one();
    let mut num = exact.numer() - &h * exact.denom();
    let mut den = exact.denom().clone();

    while !num.is_zero() {
        // Next quotient of the expansion: invert the remainder.
        std::mem::swap(&mut num, &mut den);
        let a = num.div_floor(&den);
        num -= &a * &den;

        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if k_next > bound {
            break;
        }
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
    let _ = (h_prev, k_prev);
    Ok(BigRational::new(h, k))
}

/// Rationalize a float probability vector entrywise and repair the sum.
///
/// Each entry is approximated by [`rational_approx`]; the residual mass
/// `1 - sum` is added to the largest entry so the result is exactly
/// normalized. Fails if the repair would make an entry negative.
pub fn rationalize_weights(weights: &[f64], max_denom: u64) -> Result<Vec<BigRational>> {
    let mut out = Vec::with_capacity(weights.len());
    for &w in weights {
        out.push(rational_approx(w, max_denom)?);
    }
    let sum: BigRational = out.iter().cloned().sum();
    let diff = BigRational::one() - sum;
    if !diff.is_zero() {
        let largest = weights
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.partial_cmp(b).expect("non-finite weight"))
            .map(|(i, _)| i)
            .expect("non-empty weights");
        out[largest] += diff;
        if out[largest].is_negative() {
            return Err(Error::InvalidInput {
                reason: "rationalized weights cannot be repaired to sum to 1".into(),
            });
        }
    }
    Ok(out)
}

/// Deterministic pairwise summation. Fixed reduction order, and error growth
/// O(log n) instead of O(n) for long accumulations.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Numerically stable log(sum(exp(x_i))). Returns negative infinity for an
/// empty slice or all-negative-infinity input.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let shifted: Vec<f64> = values.iter().map(|v| (v - max).exp()).collect();
    max + pairwise_sum(&shifted).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn recovers_small_fractions_from_floats() {
        for (num, den) in [(1i64, 3i64), (1, 6), (2, 7), (5, 12), (1, 1), (0, 1)] {
            let x = num as f64 / den as f64;
            assert_eq!(rational_approx(x, 10_000).unwrap(), ratio(num, den));
        }
    }

    #[test]
    fn respects_denominator_bound() {
        let x = std::f64::consts::PI - 3.0;
        let r = rational_approx(x, 100).unwrap();
        assert!(*r.denom() <= BigInt::from(100));
        assert_eq!(r, ratio(1, 7));
        let r = rational_approx(x, 1000).unwrap();
        assert!(*r.denom() <= BigInt::from(1000));
        assert!((Weight::as_f64(&r) - x).abs() < 1e-5);
    }

    #[test]
    fn rationalized_prior_sums_to_one() {
        let w = [0.2701, 0.1299, 0.6];
        let r = rationalize_weights(&w, 10_000).unwrap();
        let sum: BigRational = r.iter().cloned().sum();
        assert!(sum.is_one());
    }

    #[test]
    fn float_order_ties_within_tolerance() {
        assert_eq!(0.5f64.order(&(0.5 + 1e-12)), Ordering::Equal);
        assert_eq!(0.5f64.order(&0.6), Ordering::Less);
    }

    #[test]
    fn log_sum_exp_matches_direct_evaluation() {
        let xs: [f64; 3] = [-1.0, 0.5, 2.0];
        let direct: f64 = xs.iter().map(|x| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&xs) - direct).abs() < 1e-14);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }
}
