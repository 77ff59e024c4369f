//! Cross-validation error, training error and instability.
//!
//! For a model trained on `y1` and tested on `y2` over the same inputs:
//!
//! * `e_c = m(X|X,y1) xor y2` (cross-validation error)
//! * `e_t = m(X|X,y1) xor y1` (training error)
//! * `e_s = m(X|X,y1) xor m(X|X,y2)` (instability)
//!
//! Expected values come from closed forms, exhaustive enumeration over the
//! noise, or Monte Carlo; the three are cross-checked in the tests.

mod enumeration;
mod monte_carlo;

pub use enumeration::{enumerate_expected_errors, ENUMERATION_LIMIT};
pub use monte_carlo::{simulate_errors, simulate_independent_processes, ErrorSummary};

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Observed error counts for one paired draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ErrorDecomposition {
    pub e_c: usize,
    pub e_t: usize,
    pub e_s: usize,
    pub n: usize,
}

impl ErrorDecomposition {
    pub fn p_c(&self) -> f64 {
        self.e_c as f64 / self.n as f64
    }
    pub fn p_t(&self) -> f64 {
        self.e_t as f64 / self.n as f64
    }
    pub fn p_s(&self) -> f64 {
        self.e_s as f64 / self.n as f64
    }
}

pub fn observed_errors(
    pred1: &BitVector,
    pred2: &BitVector,
    y1: &BitVector,
    y2: &BitVector,
) -> Result<ErrorDecomposition> {
    let n = y1.len();
    for v in [pred1, pred2, y2] {
        Error::check_len(n, v.len())?;
    }
    Ok(ErrorDecomposition {
        e_c: pred1.hamming_distance(y2)?,
        e_t: pred1.hamming_distance(y1)?,
        e_s: pred1.hamming_distance(pred2)?,
        n,
    })
}

/// Expected error lengths `E|e_c|`, `E|e_t|`, `E|e_s|` over `n` rows.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedErrors<T> {
    pub e_c: T,
    pub e_t: T,
    pub e_s: T,
    pub n: usize,
}

impl<T: Scalar> ExpectedErrors<T> {
    pub fn rates(&self) -> (T, T, T) {
        let n = T::from_count(self.n);
        (self.e_c.clone() / n.clone(), self.e_t.clone() / n.clone(), self.e_s.clone() / n)
    }
}

/// Upper bound `E|e_t| + E|e_s|` on the expected cross-validation error.
pub fn bound_theorem2<T: Scalar>(expected: &ExpectedErrors<T>) -> Result<T> {
    if expected.e_t < T::zero() || expected.e_s < T::zero() {
        return Err(Error::config("expected error lengths must be non-negative"));
    }
    Ok(expected.e_t.clone() + expected.e_s.clone())
}

/// `E_t + E_s - (2/n) E_t E_s`: the expected cross-validation error when the
/// training-error and instability vectors are independent.
pub fn combine_theorem3<T: Scalar>(e_t: &T, e_s: &T, n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::config("combining expected errors needs n >= 1"));
    }
    let nn = T::from_count(n);
    let in_range = |v: &T| *v >= T::zero() && *v <= nn;
    if !in_range(e_t) || !in_range(e_s) {
        return Err(Error::config(format!("expected lengths must lie in [0, {n}]")));
    }
    let two = T::one() + T::one();
    Ok(e_t.clone() + e_s.clone() - two * e_t.clone() * e_s.clone() / nn)
}

fn check_p<T: Scalar>(p: &T) -> Result<()> {
    if p.is_unit_interval() {
        Ok(())
    } else {
        Err(Error::config(format!("probability must lie in [0, 1], got {p:?}")))
    }
}

/// `p_alpha = min(p, 1 - p)`, the optimal cross-validation error rate.
pub fn p_alpha<T: Scalar>(p: &T) -> T {
    if *p <= T::half() {
        p.clone()
    } else {
        T::one() - p.clone()
    }
}

/// `p_beta = 2p - 2p^2`, the memorizer's cross-validation error rate.
pub fn p_beta<T: Scalar>(p: &T) -> T {
    let two = T::one() + T::one();
    two.clone() * p.clone() - two * p.clone() * p.clone()
}

/// Oracle model: `E|e_c| = E|e_t| = n min(p, 1-p)`, `E|e_s| = 0`.
pub fn expected_rates_malpha<T: Scalar>(p: &T, n: usize) -> Result<ExpectedErrors<T>> {
    check_p(p)?;
    let e = T::from_count(n) * p_alpha(p);
    Ok(ExpectedErrors { e_c: e.clone(), e_t: e, e_s: T::zero(), n })
}

/// Memorizer: `E|e_c| = E|e_s| = 2np(1-p)`, `E|e_t| = 0`.
pub fn expected_rates_mbeta<T: Scalar>(p: &T, n: usize) -> Result<ExpectedErrors<T>> {
    check_p(p)?;
    let e = T::from_count(n) * p_beta(p);
    Ok(ExpectedErrors { e_c: e.clone(), e_t: T::zero(), e_s: e, n })
}

/// Both reference rates and the residual of `p_beta = 2 p_alpha - 2 p_alpha^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Theorem6Check<T> {
    pub p_alpha: T,
    pub p_beta: T,
    pub residual: T,
}

pub fn check_theorem6<T: Scalar>(p: &T) -> Result<Theorem6Check<T>> {
    check_p(p)?;
    let a = p_alpha(p);
    let b = p_beta(p);
    let two = T::one() + T::one();
    let via_alpha = two.clone() * a.clone() - two * a.clone() * a.clone();
    Ok(Theorem6Check { residual: b.clone() - via_alpha, p_alpha: a, p_beta: b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::exact;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn bv(bits: &[u8]) -> BitVector {
        BitVector::from_bits(bits)
    }

    #[test]
    fn memorizer_decomposition() {
        let y1 = bv(&[1, 0, 1, 1, 0]);
        let y2 = bv(&[0, 0, 1, 0, 0]);
        let d = observed_errors(&y1, &y2, &y1, &y2).unwrap();
        let diff = y1.hamming_distance(&y2).unwrap();
        assert_eq!((d.e_t, d.e_c, d.e_s), (0, diff, diff));
    }

    #[test]
    fn oracle_decomposition_is_stable() {
        let truth = bv(&[1, 1, 0, 0]);
        let d = observed_errors(&truth, &truth, &bv(&[1, 0, 0, 0]), &bv(&[0, 1, 1, 0])).unwrap();
        assert_eq!(d.e_s, 0);
        assert_eq!(d.e_t, 1);
        assert_eq!(d.e_c, 2);
    }

    #[test]
    fn identical_outputs_collapse() {
        let y = bv(&[1, 0, 0, 1]);
        let pred = bv(&[1, 1, 0, 0]);
        let d = observed_errors(&pred, &pred, &y, &y).unwrap();
        assert_eq!(d.e_s, 0);
        assert_eq!(d.e_c, d.e_t);
        assert!(observed_errors(&pred, &pred, &y, &bv(&[1])).is_err());
    }

    #[test]
    fn theorem2_examples() {
        let e = ExpectedErrors { e_c: 0.0, e_t: 0.0, e_s: 5.0, n: 10 };
        assert_eq!(bound_theorem2(&e).unwrap(), 5.0);
        let beta = expected_rates_mbeta(&exact(1, 5), 100).unwrap();
        assert_eq!(bound_theorem2(&beta).unwrap(), exact(32, 1));
        assert_eq!(beta.e_c, exact(32, 1));
        let alpha = expected_rates_malpha(&exact(1, 5), 100).unwrap();
        assert_eq!(bound_theorem2(&alpha).unwrap(), exact(20, 1));
        assert_eq!(alpha.e_c, exact(20, 1));
    }

    #[test]
    fn theorem3_examples() {
        assert_eq!(combine_theorem3(&0.0, &7.0, 10).unwrap(), 7.0);
        for s in [0.0, 3.0, 10.0] {
            assert_eq!(combine_theorem3(&5.0, &s, 10).unwrap(), 5.0);
        }
        let c = combine_theorem3(&exact(20, 1), &exact(32, 1), 100).unwrap();
        assert_eq!(c, exact(392, 10));
        assert!(combine_theorem3(&1.0, &1.0, 0).is_err());
        assert!(combine_theorem3(&11.0, &1.0, 10).is_err());
    }

    #[test]
    fn malpha_examples() {
        let z = expected_rates_malpha(&0.0, 10).unwrap();
        assert_eq!((z.e_c, z.e_t, z.e_s), (0.0, 0.0, 0.0));
        assert_eq!(expected_rates_malpha(&exact(1, 2), 10).unwrap().e_c, exact(5, 1));
        assert_eq!(expected_rates_malpha(&exact(4, 5), 10).unwrap().e_c, exact(2, 1));
        assert!(expected_rates_malpha(&1.5, 10).is_err());
    }

    #[test]
    fn mbeta_examples() {
        assert_eq!(expected_rates_mbeta(&0.0, 10).unwrap().e_c, 0.0);
        assert_eq!(expected_rates_mbeta(&1.0, 10).unwrap().e_c, 0.0);
        assert_eq!(expected_rates_mbeta(&exact(1, 2), 10).unwrap().e_s, exact(5, 1));
        let b = expected_rates_mbeta(&exact(1, 10), 100).unwrap();
        assert_eq!((b.e_c.clone(), b.e_s.clone()), (exact(18, 1), exact(18, 1)));
        assert!(b.e_t.is_zero());
    }

    #[test]
    fn theorem6_examples() {
        let c = check_theorem6(&exact(1, 2)).unwrap();
        assert_eq!((c.p_alpha, c.p_beta), (exact(1, 2), exact(1, 2)));
        let c = check_theorem6(&exact(9, 10)).unwrap();
        assert_eq!((c.p_alpha, c.p_beta), (exact(1, 10), exact(18, 100)));
        assert!(c.residual.is_zero());
        let c = check_theorem6(&0.0).unwrap();
        assert_eq!((c.p_alpha, c.p_beta), (0.0, 0.0));
    }

    #[test]
    fn theorem6_is_exact_over_rationals() {
        for i in 0..=100 {
            let p: BigRational = exact(i, 100);
            assert!(check_theorem6(&p).unwrap().residual.is_zero());
        }
    }

    #[test]
    fn beta_dominates_alpha_with_equality_at_three_points() {
        for i in 0..=200 {
            let p = exact(i, 200);
            let c = check_theorem6(&p).unwrap();
            assert!(c.p_beta >= c.p_alpha);
            let equal = c.p_beta == c.p_alpha;
            assert_eq!(equal, i == 0 || i == 100 || i == 200, "p = {i}/200");
        }
    }
}
