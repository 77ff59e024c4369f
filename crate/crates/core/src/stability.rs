//! Vote-flip probabilities for threshold voting under Bernoulli label noise.
//!
//! A neighborhood of `k` rows, `s` of which have true value 1, produces
//! `B1 + B2` one-votes with `B1 ~ Binomial(s, 1-p)` and
//! `B2 ~ Binomial(k-s, p)`. The vote is 1 when that count exceeds `t * k`.
//! Two independent draws disagree with probability `2P(1-P)`, and summing
//! that over rows gives the expected instability.
//!
//! The count distribution is built by convolving one Bernoulli at a time,
//! which only uses ring operations and so is exact over rationals.

use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::knn::VotingConfig;
use crate::scalar::Scalar;

/// Largest `k` for which selection computes flip probabilities exactly.
pub const EXACT_K_LIMIT: usize = 10_000;

/// A finite neighborhood size or the `k -> infinity` limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KSize {
    Finite(usize),
    Infinite,
}

/// Neighborhood of size `k` containing `s` rows whose true value is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NeighborhoodProfile {
    k: usize,
    s: usize,
}

impl NeighborhoodProfile {
    pub fn new(k: usize, s: usize) -> Result<Self> {
        if k == 0 || s > k {
            return Err(Error::config(format!("profile needs k >= 1 and s <= k, got k={k} s={s}")));
        }
        Ok(NeighborhoodProfile { k, s })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn rho<T: Scalar>(&self) -> T {
        T::from_count(self.s) / T::from_count(self.k)
    }
}

fn check_probability<T: Scalar>(p: &T) -> Result<()> {
    if p.is_unit_interval() {
        Ok(())
    } else {
        Err(Error::config(format!("probability must lie in [0, 1], got {p:?}")))
    }
}

/// Distribution of the number of one-votes, indexed by count `0..=k`.
pub fn vote_count_distribution<T: Scalar>(k: usize, s: usize, p: &T) -> Result<Vec<T>> {
    NeighborhoodProfile::new(k, s)?;
    check_probability(p)?;
    let q = T::one() - p.clone();
    let mut dist = Vec::with_capacity(k + 1);
    dist.push(T::one());
    // The first s neighbors vote 1 unless flipped, the rest vote 1 only when flipped.
    for trial in 0..k {
        let one = if trial < s { q.clone() } else { p.clone() };
        let zero = T::one() - one.clone();
        dist.push(T::zero());
        for m in (1..dist.len()).rev() {
            dist[m] = dist[m].clone() * zero.clone() + dist[m - 1].clone() * one.clone();
        }
        dist[0] = dist[0].clone() * zero;
    }
    Ok(dist)
}

/// Probability the vote over a `(k, s)` neighborhood comes out 1.
pub fn vote_one_prob<T: Scalar>(k: usize, s: usize, p: &T, t: &T) -> Result<T> {
    let cfg = VotingConfig::new(k, t.clone())?;
    let dist = vote_count_distribution(k, s, p)?;
    Ok(dist.into_iter().skip(cfg.votes_needed()).fold(T::zero(), |acc, m| acc + m))
}

/// `2P(1-P)`: probability two independent draws vote differently.
pub fn flip_probability<T: Scalar>(one_prob: &T) -> T {
    let two = T::one() + T::one();
    two * one_prob.clone() * (T::one() - one_prob.clone())
}

fn step<T: Scalar>(below: T, at: T, above: T, x: &T, pivot: &T) -> T {
    if x < pivot {
        below
    } else if x > pivot {
        above
    } else {
        at
    }
}

fn check_odd(k: usize) -> Result<()> {
    if k % 2 == 1 {
        Ok(())
    } else {
        Err(Error::config(format!("majority-vote case analysis needs odd k, got {k}")))
    }
}

/// One-vote probability when every neighbor has true value 0 (unanimous
/// neighborhood) under majority voting.
pub fn best_case_pk<T: Scalar>(k: KSize, p: &T) -> Result<T> {
    match k {
        KSize::Finite(k) => {
            check_odd(k)?;
            vote_one_prob(k, 0, p, &T::half())
        }
        KSize::Infinite => {
            check_probability(p)?;
            Ok(step(T::zero(), T::half(), T::one(), p, &T::half()))
        }
    }
}

/// One-vote probability in a neighborhood split `(k-1)/2` ones to `(k+1)/2`
/// zeros, the most balanced a majority vote can be.
pub fn worst_case_pk<T: Scalar>(k: KSize, p: &T) -> Result<T> {
    match k {
        KSize::Finite(k) => {
            check_odd(k)?;
            vote_one_prob(k, (k - 1) / 2, p, &T::half())
        }
        KSize::Infinite => {
            check_probability(p)?;
            Ok(if p.is_zero() {
                T::zero()
            } else if p.is_one() {
                T::one()
            } else {
                T::half()
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseLabel {
    /// Every neighborhood unanimous.
    Best,
    /// Every neighborhood one vote away from a tie (majority voting, odd k).
    Worst,
    Intermediate,
}

#[derive(Clone, Debug)]
pub struct StabilityReport<T> {
    /// Per-instance probability that the vote is 1.
    pub one_probs: Vec<T>,
    /// Per-instance `2P(1-P)`.
    pub flip_probs: Vec<T>,
    /// `sum_i 2 P_i (1 - P_i)`.
    pub expected_instability: T,
    pub case: CaseLabel,
}

fn classify(profiles: &[NeighborhoodProfile], majority: bool) -> CaseLabel {
    if profiles.iter().all(|q| q.s == 0 || q.s == q.k) {
        CaseLabel::Best
    } else if majority && profiles.iter().all(|q| q.k % 2 == 1 && (2 * q.s + 1 == q.k || 2 * q.s == q.k + 1)) {
        CaseLabel::Worst
    } else {
        CaseLabel::Intermediate
    }
}

pub fn instability_from_profiles<T: Scalar>(
    profiles: &[NeighborhoodProfile],
    p: &T,
    t: &T,
) -> Result<StabilityReport<T>> {
    check_probability(p)?;
    let mut cache: std::collections::HashMap<NeighborhoodProfile, T> = Default::default();
    let mut one_probs = Vec::with_capacity(profiles.len());
    for prof in profiles {
        let prob = match cache.get(prof) {
            Some(v) => v.clone(),
            None => {
                let v = vote_one_prob(prof.k, prof.s, p, t)?;
                cache.insert(*prof, v.clone());
                v
            }
        };
        one_probs.push(prob);
    }
    let flip_probs: Vec<T> = one_probs.iter().map(flip_probability).collect();
    let expected_instability = flip_probs.iter().fold(T::zero(), |acc, f| acc + f.clone());
    Ok(StabilityReport { one_probs, flip_probs, expected_instability, case: classify(profiles, *t == T::half()) })
}

/// `tau = p + p' - 2 p p'`, the one-vote rate of a neighbor whose true value
/// is itself 1 with probability `p'`.
pub fn limit_tau<T: Scalar>(p: &T, p_prime: &T) -> Result<T> {
    check_probability(p)?;
    check_probability(p_prime)?;
    let two = T::one() + T::one();
    Ok(p.clone() + p_prime.clone() - two * p.clone() * p_prime.clone())
}

/// `tau_i = p + rho_i - 2 p rho_i`.
pub fn limit_tau_i<T: Scalar>(p: &T, rho_i: &T) -> Result<T> {
    limit_tau(p, rho_i)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitVerdict {
    Stable,
    UnstableBoundary,
}

/// Large-`k` verdict for a neighborhood whose values are i.i.d. with rate
/// `p'`: unstable exactly when `tau` meets the threshold, within `tolerance`.
pub fn limit_stability_theorem10<T: Scalar>(p: &T, p_prime: &T, t: &T, tolerance: &T) -> Result<LimitVerdict> {
    let tau = limit_tau(p, p_prime)?;
    Ok(if tau.abs_diff(t) <= tolerance.clone() { LimitVerdict::UnstableBoundary } else { LimitVerdict::Stable })
}

/// Per-instance verdict at finite `k`, using the vote-count resolution
/// `1/(2k)` as the closeness tolerance.
pub fn classify_instance_limit<T: Scalar>(p: &T, rho_i: &T, t: &T, k: usize) -> Result<LimitVerdict> {
    if k == 0 {
        return Err(Error::config("k must be at least 1"));
    }
    let tol = T::one() / T::from_count(2 * k);
    limit_stability_theorem10(p, rho_i, t, &tol)
}

/// `lim P_k` for a neighborhood with one-rate `tau_i`: 0 below the
/// threshold, 1/2 on it (within the scalar's rounding slack), 1 above it.
pub fn limit_vote_one_prob<T: Scalar>(p: &T, rho_i: &T, t: &T) -> Result<T> {
    let tau = limit_tau_i(p, rho_i)?;
    if tau.abs_diff(t) <= T::integer_slack() {
        return Ok(T::half());
    }
    Ok(step(T::zero(), T::half(), T::one(), &tau, t))
}

/// Central-limit approximation of [`vote_one_prob`]. Exposed for comparison
/// only; nothing in the crate substitutes it for the exact value.
pub fn normal_approx_vote_one_prob(k: usize, s: usize, p: f64, t: f64) -> Result<f64> {
    NeighborhoodProfile::new(k, s)?;
    check_probability(&p)?;
    let mean = s as f64 * (1.0 - p) + (k - s) as f64 * p;
    let var = k as f64 * p * (1.0 - p);
    let cut = t * k as f64;
    if var == 0.0 {
        return Ok(if mean > cut { 1.0 } else { 0.0 });
    }
    let z = (cut - mean) / var.sqrt();
    Ok(0.5 * erfc(z / std::f64::consts::SQRT_2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::exact;
    use num_rational::BigRational;

    /// Sum over all 2^k noise patterns, independent of the convolution.
    fn enumerate(k: usize, s: usize, p: f64, t_quarters: usize) -> f64 {
        (0u32..1 << k)
            .map(|z| {
                let mut weight = 1.0;
                let mut ones = 0;
                for j in 0..k {
                    let flipped = (z >> j) & 1 == 1;
                    weight *= if flipped { p } else { 1.0 - p };
                    ones += usize::from((j < s) != flipped);
                }
                if 4 * ones > t_quarters * k {
                    weight
                } else {
                    0.0
                }
            })
            .sum()
    }

    #[test]
    fn vote_one_prob_examples() {
        assert_eq!(vote_one_prob(3, 0, &exact(1, 10), &exact(1, 2)).unwrap(), exact(28, 1000));
        assert_eq!(vote_one_prob(3, 1, &exact(1, 10), &exact(1, 2)).unwrap(), exact(172, 1000));
        assert_eq!(vote_one_prob(3, 2, &exact(1, 10), &exact(1, 2)).unwrap(), exact(828, 1000));
        let half: f64 = vote_one_prob(5, 0, &0.5, &0.5).unwrap();
        assert!((half - 0.5).abs() < 1e-15);
    }

    #[test]
    fn vote_one_prob_rejects_bad_inputs() {
        assert!(vote_one_prob(3, 4, &0.1, &0.5).is_err());
        assert!(vote_one_prob(3, 1, &1.1, &0.5).is_err());
        assert!(vote_one_prob(3, 1, &0.1, &1.0).is_err());
        assert!(vote_one_prob(0, 0, &0.1, &0.5).is_err());
    }

    #[test]
    fn matches_enumeration_on_small_grid() {
        for k in 1..=8 {
            for s in 0..=k {
                for pi in 0..=10 {
                    let p = pi as f64 / 10.0;
                    for tq in [1, 2, 3] {
                        let got = vote_one_prob(k, s, &p, &(tq as f64 / 4.0)).unwrap();
                        let want = enumerate(k, s, p, tq);
                        assert!((got - want).abs() < 1e-12, "k={k} s={s} p={p} t={tq}/4");
                    }
                }
            }
        }
    }

    #[test]
    fn best_case_examples() {
        assert_eq!(best_case_pk(KSize::Finite(1), &exact(3, 10)).unwrap(), exact(3, 10));
        assert_eq!(best_case_pk(KSize::Finite(3), &exact(3, 10)).unwrap(), exact(216, 1000));
        assert_eq!(best_case_pk(KSize::Infinite, &0.3).unwrap(), 0.0);
        assert_eq!(best_case_pk(KSize::Infinite, &0.5).unwrap(), 0.5);
        assert_eq!(best_case_pk(KSize::Infinite, &0.7).unwrap(), 1.0);
        assert!(best_case_pk(KSize::Finite(4), &0.3).is_err());
    }

    #[test]
    fn worst_case_examples() {
        assert_eq!(worst_case_pk(KSize::Finite(1), &exact(1, 10)).unwrap(), exact(1, 10));
        assert_eq!(worst_case_pk(KSize::Finite(5), &exact(1, 10)).unwrap(), exact(22456, 100000));
        assert_eq!(worst_case_pk(KSize::Infinite, &0.3).unwrap(), 0.5);
        assert_eq!(worst_case_pk(KSize::Infinite, &0.0).unwrap(), 0.0);
        assert_eq!(worst_case_pk(KSize::Infinite, &1.0).unwrap(), 1.0);
        assert!(worst_case_pk(KSize::Finite(2), &0.3).is_err());
    }

    fn poly(coeffs: &[i64], p: &BigRational) -> BigRational {
        coeffs.iter().enumerate().fold(exact(0, 1), |acc, (i, &c)| acc + exact(c, 1) * p.powi(i))
    }

    #[test]
    fn closed_form_polynomials_hold_exactly() {
        for i in 0..=20 {
            let p = exact(i, 20);
            let b3 = best_case_pk(KSize::Finite(3), &p).unwrap();
            let b5 = best_case_pk(KSize::Finite(5), &p).unwrap();
            let w3 = worst_case_pk(KSize::Finite(3), &p).unwrap();
            let w5 = worst_case_pk(KSize::Finite(5), &p).unwrap();
            assert_eq!(b3, poly(&[0, 0, 3, -2], &p));
            assert_eq!(b5, poly(&[0, 0, 0, 10, -15, 6], &p));
            assert_eq!(w3, poly(&[0, 2, -3, 2], &p));
            assert_eq!(w5, poly(&[0, 3, -9, 16, -15, 6], &p));
        }
    }

    #[test]
    fn profile_instability_examples() {
        let p = exact(1, 10);
        let t = exact(1, 2);
        let profiles = vec![NeighborhoodProfile::new(3, 0).unwrap(); 10];
        let r = instability_from_profiles(&profiles, &p, &t).unwrap();
        let p3 = exact(28, 1000);
        assert_eq!(r.expected_instability, exact(20, 1) * p3.clone() * (exact(1, 1) - p3));
        assert_eq!(r.case, CaseLabel::Best);

        let zero = instability_from_profiles(&profiles, &0.0, &0.5).unwrap();
        assert_eq!(zero.expected_instability, 0.0);
    }

    #[test]
    fn mixed_profiles_reproduce_average_case_polynomial() {
        let shapes = [1usize, 2, 0, 3];
        for i in 1..20 {
            let p = exact(i, 20);
            for n_half in [1usize, 3] {
                let mut profiles = Vec::new();
                for j in 0..n_half {
                    profiles.push(NeighborhoodProfile::new(3, shapes[j % 2]).unwrap());
                    profiles.push(NeighborhoodProfile::new(3, shapes[2 + j % 2]).unwrap());
                }
                let r = instability_from_profiles(&profiles, &p, &exact(1, 2)).unwrap();
                let n = exact(2 * n_half as i64, 1);
                assert_eq!(r.expected_instability, n * poly(&[0, 2, -4, 12, -26, 24, -8], &p));
                assert_eq!(r.case, CaseLabel::Intermediate);
            }
        }
    }

    #[test]
    fn worst_case_label() {
        let profiles = [NeighborhoodProfile::new(3, 1).unwrap(), NeighborhoodProfile::new(3, 2).unwrap()];
        let r = instability_from_profiles(&profiles, &0.2, &0.5).unwrap();
        assert_eq!(r.case, CaseLabel::Worst);
        let r = instability_from_profiles(&profiles, &0.2, &0.3).unwrap();
        assert_eq!(r.case, CaseLabel::Intermediate);
    }

    #[test]
    fn best_case_grows_more_stable_with_k() {
        for pi in 1..50 {
            let p = pi as f64 / 100.0;
            let mut prev = f64::INFINITY;
            for k in (1..=41).step_by(2) {
                let pk = best_case_pk(KSize::Finite(k), &p).unwrap();
                assert!(pk <= prev + 1e-15, "p={p} k={k}");
                prev = pk;
            }
        }
    }

    #[test]
    fn worst_case_grows_less_stable_with_k() {
        for pi in 1..100 {
            let p = pi as f64 / 100.0;
            let mut prev = 0.0;
            for k in (1..=41).step_by(2) {
                let flip = flip_probability(&worst_case_pk(KSize::Finite(k), &p).unwrap());
                assert!(flip >= prev - 1e-15, "p={p} k={k}");
                prev = flip;
            }
        }
    }

    #[test]
    fn extremes_over_s_for_majority_vote() {
        for k in (3..=15).step_by(2) {
            for pi in 1..50 {
                let p = pi as f64 / 100.0;
                let flips: Vec<f64> =
                    (0..=k).map(|s| flip_probability(&vote_one_prob(k, s, &p, &0.5).unwrap())).collect();
                let max = flips.iter().cloned().fold(f64::MIN, f64::max);
                let min = flips.iter().cloned().fold(f64::MAX, f64::min);
                assert!((flips[(k - 1) / 2] - max).abs() < 1e-14);
                assert!((flips[k.div_ceil(2)] - max).abs() < 1e-14);
                assert!((flips[0] - min).abs() < 1e-14);
                assert!((flips[k] - min).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn tau_examples() {
        assert_eq!(limit_tau(&exact(1, 2), &exact(83, 100)).unwrap(), exact(1, 2));
        assert_eq!(limit_tau(&exact(1, 10), &exact(3, 10)).unwrap(), exact(34, 100));
        assert_eq!(limit_tau(&0.0, &0.42).unwrap(), 0.42);
        assert!((limit_tau(&0.5, &0.83).unwrap() - 0.5f64).abs() < 1e-15);
        assert_eq!(limit_tau_i(&0.3, &0.0).unwrap(), 0.3);
        assert_eq!(limit_tau_i(&exact(3, 10), &exact(1, 1)).unwrap(), exact(7, 10));
        assert_eq!(limit_tau_i(&exact(1, 5), &exact(1, 2)).unwrap(), exact(1, 2));
    }

    #[test]
    fn theorem10_verdicts() {
        let tol = 1e-9;
        assert_eq!(limit_stability_theorem10(&0.5, &0.2, &0.5, &tol).unwrap(), LimitVerdict::UnstableBoundary);
        assert_eq!(limit_stability_theorem10(&0.1, &0.9, &0.5, &tol).unwrap(), LimitVerdict::Stable);
        assert_eq!(limit_stability_theorem10(&0.1, &0.3, &0.34, &tol).unwrap(), LimitVerdict::UnstableBoundary);
        assert_eq!(
            limit_stability_theorem10(&exact(1, 10), &exact(3, 10), &exact(34, 100), &exact(0, 1)).unwrap(),
            LimitVerdict::UnstableBoundary
        );
        // At t = 1/2 the boundary is exactly p = 1/2 or p' = 1/2.
        for a in 0..=10 {
            for b in 0..=10 {
                let (p, q) = (exact(a, 10), exact(b, 10));
                let v = limit_stability_theorem10(&p, &q, &exact(1, 2), &exact(0, 1)).unwrap();
                assert_eq!(v == LimitVerdict::UnstableBoundary, a == 5 || b == 5);
            }
        }
    }

    #[test]
    fn instance_limit_classification() {
        assert_eq!(classify_instance_limit(&0.2, &0.5, &0.5, 11).unwrap(), LimitVerdict::UnstableBoundary);
        assert_eq!(classify_instance_limit(&0.2, &0.0, &0.5, 11).unwrap(), LimitVerdict::Stable);
        assert_eq!(limit_vote_one_prob(&0.2, &0.0, &0.5).unwrap(), 0.0);
        assert_eq!(limit_vote_one_prob(&0.2, &1.0, &0.5).unwrap(), 1.0);
        assert_eq!(limit_vote_one_prob(&0.2, &0.5, &0.5).unwrap(), 0.5);
    }

    #[test]
    fn finite_k_approaches_limit() {
        for &(p, rho, t) in &[(0.1, 0.2, 0.5), (0.2, 0.9, 0.5), (0.3, 0.5, 0.3), (0.1, 0.6, 0.8)] {
            let k = 201;
            let s = (rho * k as f64).round() as usize;
            let exact_p = vote_one_prob(k, s, &p, &t).unwrap();
            let limit = limit_vote_one_prob(&p, &rho, &t).unwrap();
            assert!((exact_p - limit).abs() < 0.05, "p={p} rho={rho} t={t}: {exact_p}");
        }
    }

    #[test]
    fn normal_approximation_is_close_for_large_k() {
        let exact_p = vote_one_prob(401, 150, &0.2, &0.5).unwrap();
        let approx = normal_approx_vote_one_prob(401, 150, 0.2, 0.5).unwrap();
        assert!((exact_p - approx).abs() < 0.02, "{exact_p} vs {approx}");
        assert_eq!(normal_approx_vote_one_prob(5, 0, 0.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn large_k_distribution_sums_to_one() {
        let d = vote_count_distribution(2000, 700, &0.27).unwrap();
        let total: f64 = d.iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
    }
}
