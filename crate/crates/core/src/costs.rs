//! Cost functions: generalized entropies `C(p) = Σ f(p_i)` and f-divergences
//! `C_q(p) = Σ q_i f(p_i/q_i)` for convex generators `f`.
//!
//! Both families are strictly monotone with respect to the (relative)
//! majorization preorder when `f` is strictly convex, which is what makes
//! them admissible resource cost functions. The divergence form subtracts
//! `f(1)` so that `C_q(q) = 0`; the entropy form reports the raw sum
//! (Shannon's spec gives `-H(p)`, Tsallis of order 2 gives `Σ p_i²`).
//!
//! Conventions: `0·f(0/0) = 0`, and `f(0)` is the continuity limit where it
//! exists (`0` for `t log t`). Generators unbounded at zero (Burg) raise a
//! domain error when they meet a zero weight.

use std::sync::Arc;

use crate::relative::{apply_relative_transfer, RelativeTransfer};
use crate::simplex::{coarse_grain, Dist, FloatDist, Partition};
use crate::{Error, Result, TOL_NUM};

type GeneratorFn = Arc<dyn Fn(f64) -> Option<f64> + Send + Sync>;
type OuterFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An f-divergence (or generalized entropy) defined by its generator.
#[derive(Clone)]
pub struct CostFunctionSpec {
    name: String,
    generator: GeneratorFn,
    f_one: f64,
    strictly_convex: bool,
    differentiable: bool,
    /// Monotone outer composition (Renyi style). Applied to the generator
    /// sum instead of the `f(1)` shift.
    outer: Option<OuterFn>,
    /// Whether the spec is a plain `Σ q f(p/q)` form. Compositions with an
    /// outer function are order-preserving but the superadditivity results
    /// cover only the plain form.
    f_divergence: bool,
}

impl std::fmt::Debug for CostFunctionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CostFunctionSpec")
            .field("name", &self.name)
            .field("strictly_convex", &self.strictly_convex)
            .field("differentiable", &self.differentiable)
            .field("f_divergence", &self.f_divergence)
            .finish()
    }
}

impl CostFunctionSpec {
    /// Kullback-Leibler: `f(t) = t log t` (natural log), `f(0) = 0`.
    pub fn kl() -> Self {
        CostFunctionSpec {
            name: "kl".into(),
            generator: Arc::new(|t| Some(if t == 0.0 { 0.0 } else { t * t.ln() })),
            f_one: 0.0,
            strictly_convex: true,
            differentiable: true,
            outer: None,
            f_divergence: true,
        }
    }

    /// Negative Shannon entropy: the KL generator under its entropy reading,
    /// `C(p) = Σ p_i log p_i = -H(p)`.
    pub fn shannon() -> Self {
        CostFunctionSpec {
            name: "shannon".into(),
            ..Self::kl()
        }
    }

    /// Burg: `f(t) = -log t`, undefined at `t = 0`.
    pub fn burg() -> Self {
        CostFunctionSpec {
            name: "burg".into(),
            generator: Arc::new(|t| if t > 0.0 { Some(-t.ln()) } else { None }),
            f_one: 0.0,
            strictly_convex: true,
            differentiable: true,
            outer: None,
            f_divergence: true,
        }
    }

    /// Tsallis of order `alpha`: `f(t) = ±t^α`, the sign chosen so `f` is
    /// convex. `α ∈ (0, 1)` flips the sign; `α < 0` is undefined at zero.
    pub fn tsallis(alpha: f64) -> Result<Self> {
        if alpha == 0.0 || alpha == 1.0 || !alpha.is_finite() {
            return Err(Error::InvalidInput {
                reason: format!("tsallis order must be finite and outside {{0, 1}}, got {alpha}"),
            });
        }
        let sign = if alpha > 0.0 && alpha < 1.0 { -1.0 } else { 1.0 };
        let generator: GeneratorFn = Arc::new(move |t| {
            if t == 0.0 {
                if alpha < 0.0 {
                    None
                } else {
                    Some(0.0)
                }
            } else {
                Some(sign * t.powf(alpha))
            }
        });
        Ok(CostFunctionSpec {
            name: format!("tsallis:{alpha}"),
            generator,
            f_one: sign,
            strictly_convex: true,
            differentiable: true,
            outer: None,
            f_divergence: true,
        })
    }

    /// Squared l2 distance: `f(t) = (t - 1)²`, so `C_q(p) = Σ (p_i-q_i)²/q_i`.
    pub fn squared_l2() -> Self {
        CostFunctionSpec {
            name: "l2".into(),
            generator: Arc::new(|t| Some((t - 1.0) * (t - 1.0))),
            f_one: 0.0,
            strictly_convex: true,
            differentiable: true,
            outer: None,
            f_divergence: true,
        }
    }

    /// Negative Renyi of order `alpha`: the monotone composition
    /// `g(Σ q (p/q)^α)` with `g(s) = log(s) / (α - 1)`. Order-preserving but
    /// not an f-divergence, so it is excluded from superadditivity claims.
    pub fn renyi(alpha: f64) -> Result<Self> {
        if alpha <= 0.0 || alpha == 1.0 || !alpha.is_finite() {
            return Err(Error::InvalidInput {
                reason: format!("renyi order must be positive and != 1, got {alpha}"),
            });
        }
        let generator: GeneratorFn = Arc::new(move |t| Some(t.powf(alpha)));
        let outer: OuterFn = Arc::new(move |s| s.ln() / (alpha - 1.0));
        Ok(CostFunctionSpec {
            name: format!("renyi:{alpha}"),
            generator,
            f_one: 1.0,
            strictly_convex: true,
            differentiable: true,
            outer: Some(outer),
            f_divergence: false,
        })
    }

    /// A user-supplied generator. `f(1)` must be defined; convexity is
    /// checked on a midpoint grid over `[0, 4]` before acceptance.
    pub fn custom(
        name: impl Into<String>,
        generator: impl Fn(f64) -> Option<f64> + Send + Sync + 'static,
        strictly_convex: bool,
        differentiable: bool,
    ) -> Result<Self> {
        let generator: GeneratorFn = Arc::new(generator);
        let f_one = generator(1.0).ok_or_else(|| Error::DomainError {
            argument: 1.0,
            reason: "generator must be defined at 1".into(),
        })?;
        let spec = CostFunctionSpec {
            name: name.into(),
            generator,
            f_one,
            strictly_convex,
            differentiable,
            outer: None,
            f_divergence: true,
        };
        spec.check_sampled_convexity()?;
        Ok(spec)
    }

    /// Midpoint convexity on a coarse grid: `f((a+b)/2) <= (f(a)+f(b))/2`
    /// wherever both endpoints are in the domain.
    fn check_sampled_convexity(&self) -> Result<()> {
        let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.1).collect();
        for (i, &a) in grid.iter().enumerate() {
            for &b in &grid[i + 1..] {
                let (Some(fa), Some(fb), Some(fm)) = (
                    (self.generator)(a),
                    (self.generator)(b),
                    (self.generator)(0.5 * (a + b)),
                ) else {
                    continue;
                };
                if fm > 0.5 * (fa + fb) + TOL_NUM {
                    return Err(Error::InvalidInput {
                        reason: format!("generator fails midpoint convexity between {a} and {b}"),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_strictly_convex(&self) -> bool {
        self.strictly_convex
    }

    pub fn is_differentiable(&self) -> bool {
        self.differentiable
    }

    pub fn is_f_divergence(&self) -> bool {
        self.f_divergence
    }

    fn eval(&self, t: f64) -> Result<f64> {
        (self.generator)(t).ok_or_else(|| Error::DomainError {
            argument: t,
            reason: format!("generator '{}' undefined here", self.name),
        })
    }
}

/// Generalized entropy `Σ_i f(p_i)`.
pub fn entropy_cost(p: &FloatDist, spec: &CostFunctionSpec) -> Result<f64> {
    let mut sum = 0.0;
    for &w in p.weights() {
        sum += spec.eval(w)?;
    }
    Ok(match &spec.outer {
        Some(g) => g(sum),
        None => sum,
    })
}

/// f-divergence `Σ_i q_i f(p_i/q_i)`, normalized so that `C_q(q) = 0`.
pub fn divergence(p: &FloatDist, q: &FloatDist, spec: &CostFunctionSpec) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let mut sum = 0.0;
    for (i, (&pi, &qi)) in p.weights().iter().zip(q.weights()).enumerate() {
        if qi == 0.0 {
            if pi > 0.0 {
                return Err(Error::NotAbsolutelyContinuous { index: i });
            }
            continue; // 0·f(0/0) = 0
        }
        sum += qi * spec.eval(pi / qi)?;
    }
    Ok(match &spec.outer {
        Some(g) => g(sum),
        None => sum - spec.f_one,
    })
}

/// Kullback-Leibler divergence in nats, `Σ p_i log(p_i/q_i)`.
pub fn kl_divergence(p: &FloatDist, q: &FloatDist) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let mut sum = 0.0;
    for (i, (&pi, &qi)) in p.weights().iter().zip(q.weights()).enumerate() {
        if pi > 0.0 {
            if qi == 0.0 {
                return Err(Error::NotAbsolutelyContinuous { index: i });
            }
            sum += pi * (pi / qi).ln();
        }
    }
    Ok(sum)
}

/// Shannon entropy in nats.
pub fn shannon_entropy(p: &FloatDist) -> f64 {
    -p.weights()
        .iter()
        .map(|&w| if w > 0.0 { w * w.ln() } else { 0.0 })
        .sum::<f64>()
}

/// Both sides of the coarse-graining superadditivity inequality
/// `C_q(Z) >= C_q(X) + C_q(Y|X)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperadditivityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluate the two-step decomposition of the divergence along a partition:
/// the cost of the block choice plus the expected cost of the choice inside
/// the block. f-divergences satisfy `lhs >= rhs`; KL satisfies it with
/// equality. Blocks with zero posterior marginal contribute nothing to the
/// conditional term.
pub fn check_superadditivity(
    p: &FloatDist,
    q: &FloatDist,
    part: &Partition,
    spec: &CostFunctionSpec,
) -> Result<SuperadditivityCheck> {
    let lhs = divergence(p, q, spec)?;
    let (p_marg, p_conds) = coarse_grain(p, part)?;
    let (q_marg, q_conds) = coarse_grain(q, part)?;
    let mut rhs = divergence(&p_marg, &q_marg, spec)?;
    for (k, p_cond) in p_conds.iter().enumerate() {
        let Some(p_cond) = p_cond else {
            continue;
        };
        let mass = *p_marg.get(k);
        if mass == 0.0 {
            continue;
        }
        let q_cond = q_conds[k].as_ref().ok_or(Error::NotAbsolutelyContinuous {
            index: part.blocks()[k][0],
        })?;
        rhs += mass * divergence(p_cond, q_cond, spec)?;
    }
    Ok(SuperadditivityCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - TOL_NUM,
    })
}

/// Cost of the uniform distribution over `m` options relative to the uniform
/// distribution over `n >= m` options:
/// `f(m, n) = (m/n) f(n/m) + ((n-m)/n) f(0)`.
///
/// Decreasing in `m` and increasing in `n` for every f-divergence. For KL
/// this is `log(n/m)`.
pub fn uniform_cost(m: u64, n: u64, spec: &CostFunctionSpec) -> Result<f64> {
    if m == 0 || m > n {
        return Err(Error::InvalidInput {
            reason: format!("uniform_cost requires 1 <= m <= n, got m={m}, n={n}"),
        });
    }
    let (m, n) = (m as f64, n as f64);
    let mut sum = (m / n) * spec.eval(n / m)?;
    if n > m {
        sum += ((n - m) / n) * spec.eval(0.0)?;
    }
    Ok(match &spec.outer {
        Some(g) => g(sum),
        None => sum - spec.f_one,
    })
}

/// Check that a relative Pigou-Dalton transfer does not increase the
/// divergence to the prior: `C_q(T_ε p) <= C_q(p)`, strictly for `ε > 0` and
/// strictly convex generators.
pub fn schur_monotonicity_check(
    p: &FloatDist,
    q: &FloatDist,
    t: &RelativeTransfer<f64>,
    spec: &CostFunctionSpec,
) -> Result<bool> {
    let before = divergence(p, q, spec)?;
    let moved = apply_relative_transfer(p, q, t)?;
    let after = divergence(&moved, q, spec)?;
    let ok = after <= before + TOL_NUM;
    if t.epsilon > 0.0 && spec.strictly_convex {
        Ok(ok && after < before)
    } else {
        Ok(ok)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(w: &[f64]) -> FloatDist {
        Dist::validate(w.to_vec()).unwrap()
    }

    #[test]
    fn shannon_entropy_cost_examples() {
        let spec = CostFunctionSpec::shannon();
        let n = 5;
        let uniform = FloatDist::uniform(n);
        let got = entropy_cost(&uniform, &spec).unwrap();
        assert!((got + (n as f64).ln()).abs() < 1e-12);

        let dirac = FloatDist::dirac(4, 2);
        assert_eq!(entropy_cost(&dirac, &spec).unwrap(), 0.0);
    }

    #[test]
    fn tsallis_two_is_the_sum_of_squares() {
        let spec = CostFunctionSpec::tsallis(2.0).unwrap();
        let p = dist(&[0.5, 0.5]);
        assert!((entropy_cost(&p, &spec).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn divergence_examples() {
        let kl = CostFunctionSpec::kl();
        let q = dist(&[0.5, 0.5]);
        assert_eq!(divergence(&q, &q, &kl).unwrap(), 0.0);

        // Dirac against uniform costs log N.
        let n = 8;
        let uniform = FloatDist::uniform(n);
        let dirac = FloatDist::dirac(n, 3);
        let got = divergence(&dirac, &uniform, &kl).unwrap();
        assert!((got - (n as f64).ln()).abs() < 1e-12);
        assert!((kl_divergence(&dirac, &uniform).unwrap() - got).abs() < 1e-12);

        let l2 = CostFunctionSpec::squared_l2();
        let p = dist(&[0.75, 0.25]);
        assert!((divergence(&p, &q, &l2).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn divergence_rejects_unsupported_mass() {
        let kl = CostFunctionSpec::kl();
        let q = dist(&[1.0, 0.0]);
        let p = dist(&[0.5, 0.5]);
        assert!(matches!(
            divergence(&p, &q, &kl),
            Err(Error::NotAbsolutelyContinuous { index: 1 })
        ));
    }

    #[test]
    fn burg_needs_positive_weights() {
        let burg = CostFunctionSpec::burg();
        let q = dist(&[0.5, 0.5]);
        let p = dist(&[1.0, 0.0]);
        assert!(matches!(
            divergence(&p, &q, &burg),
            Err(Error::DomainError { .. })
        ));
    }

    #[test]
    fn kl_is_additive_under_coarse_graining() {
        let kl = CostFunctionSpec::kl();
        let p = dist(&[0.1, 0.4, 0.2, 0.3]);
        let q = dist(&[0.25, 0.25, 0.25, 0.25]);
        let part = Partition::new(vec![vec![0, 1], vec![2, 3]], 4).unwrap();
        let check = check_superadditivity(&p, &q, &part, &kl).unwrap();
        assert!(check.holds);
        assert!((check.lhs - check.rhs).abs() < 1e-12);
    }

    #[test]
    fn superadditivity_with_identical_distributions_is_zero() {
        let spec = CostFunctionSpec::tsallis(3.0).unwrap();
        let p = dist(&[0.3, 0.3, 0.4]);
        let part = Partition::new(vec![vec![0, 2], vec![1]], 3).unwrap();
        let check = check_superadditivity(&p, &p, &part, &spec).unwrap();
        assert!(check.lhs.abs() < 1e-15);
        assert!(check.rhs.abs() < 1e-15);
        assert!(check.holds);
    }

    #[test]
    fn uniform_cost_examples() {
        let kl = CostFunctionSpec::kl();
        assert_eq!(uniform_cost(7, 7, &kl).unwrap(), 0.0);
        assert!((uniform_cost(1, 2, &kl).unwrap() - 2f64.ln()).abs() < 1e-15);
        // KL self-similarity: halving the support always costs one bit.
        assert!((uniform_cost(2, 4, &kl).unwrap() - 2f64.ln()).abs() < 1e-15);

        let burg = CostFunctionSpec::burg();
        assert_eq!(uniform_cost(3, 3, &burg).unwrap(), 0.0);
        assert!(matches!(
            uniform_cost(2, 3, &burg),
            Err(Error::DomainError { .. })
        ));
    }

    #[test]
    fn renyi_participates_in_order_checks_but_not_superadditivity() {
        let renyi = CostFunctionSpec::renyi(2.0).unwrap();
        assert!(!renyi.is_f_divergence());
        let q = dist(&[0.5, 0.5]);
        let p = dist(&[0.9, 0.1]);
        assert!(divergence(&p, &q, &renyi).unwrap() > 0.0);
        assert!(divergence(&q, &q, &renyi).unwrap().abs() < 1e-15);
        // Negative Renyi entropy of the uniform distribution is -log N.
        let u = FloatDist::uniform(4);
        assert!((entropy_cost(&u, &renyi).unwrap() + 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn schur_monotonicity_for_transfers() {
        let q = dist(&[0.5, 0.5]);
        let p = dist(&[0.25, 0.75]);
        let kl = CostFunctionSpec::kl();

        let zero = RelativeTransfer {
            m: 0,
            n: 1,
            epsilon: 0.0,
        };
        assert!(schur_monotonicity_check(&p, &q, &zero, &kl).unwrap());

        // Plain Pigou-Dalton under a uniform prior: Shannon entropy rises.
        let t = RelativeTransfer {
            m: 0,
            n: 1,
            epsilon: 0.25,
        };
        let moved = apply_relative_transfer(&p, &q, &t).unwrap();
        assert!(shannon_entropy(&moved) > shannon_entropy(&p));
        assert!(schur_monotonicity_check(&p, &q, &t, &kl).unwrap());
    }

    #[test]
    fn custom_generators_are_convexity_checked() {
        let ok = CostFunctionSpec::custom("abs", |t| Some((t - 1.0).abs()), false, false);
        assert!(ok.is_ok());
        let bad = CostFunctionSpec::custom("sqrt", |t| Some(t.sqrt()), false, false);
        assert!(bad.is_err());
    }
}
