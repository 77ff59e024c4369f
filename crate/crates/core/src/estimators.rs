//! Estimates computed from one training draw.
//!
//! `t_i`, the frequency of 1-outputs among the `k` neighbors of row `i`, is
//! unbiased for `tau_i = p + rho_i - 2 p rho_i`. Inverting that gives
//! `r_i = (t_i - p) / (1 - 2p)`, unbiased for `rho_i`.

use crate::bits::{BitMatrix, BitVector};
use crate::error::{Error, Result};
use crate::knn::{count_ones, nearest, Neighborhoods, VotingConfig};
use crate::scalar::Scalar;
use crate::stability::{limit_tau_i, NeighborhoodProfile};

pub fn estimate_tau_i<T: Scalar>(x: &BitMatrix, y: &BitVector, i: usize, k: usize) -> Result<T> {
    Error::check_len(x.n_rows(), y.len())?;
    if k == 0 || k > x.n_rows() {
        return Err(Error::config(format!("neighborhood size must satisfy 1 <= k <= n = {}, got {k}", x.n_rows())));
    }
    let v = x.try_row(i)?;
    let hood = nearest(x, v, k)?;
    Ok(T::from_count(count_ones(y, &hood.indices)) / T::from_count(k))
}

/// `r_i` before and after clamping to `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RhoEstimate<T> {
    pub raw: T,
    pub clamped: T,
}

pub fn estimate_rho_i<T: Scalar>(t_i: &T, p: &T) -> Result<RhoEstimate<T>> {
    if !t_i.is_unit_interval() || !p.is_unit_interval() {
        return Err(Error::config("t_i and p must lie in [0, 1]"));
    }
    let two = T::one() + T::one();
    let denom = T::one() - two * p.clone();
    if denom.is_zero() {
        return Err(Error::Singularity);
    }
    let raw = (t_i.clone() - p.clone()) / denom;
    Ok(RhoEstimate { clamped: raw.clone().clamp_unit(), raw })
}

/// Mean of the clamped `r_i`.
pub fn estimate_p_prime<T: Scalar>(r_values: &[T]) -> Result<T> {
    if r_values.is_empty() {
        return Err(Error::config("p' needs at least one r_i"));
    }
    let sum = r_values.iter().fold(T::zero(), |acc, r| acc + r.clone().clamp_unit());
    Ok(sum / T::from_count(r_values.len()))
}

/// `|m_k(X|X,y) xor y|`.
pub fn estimate_training_error<T: Scalar>(x: &BitMatrix, y: &BitVector, cfg: &VotingConfig<T>) -> Result<usize> {
    Error::check_len(x.n_rows(), y.len())?;
    let hoods = Neighborhoods::build(x, cfg.k())?;
    training_error_with(&hoods, y, cfg)
}

pub(crate) fn training_error_with<T: Scalar>(
    hoods: &Neighborhoods,
    y: &BitVector,
    cfg: &VotingConfig<T>,
) -> Result<usize> {
    hoods.predict(y, cfg)?.hamming_distance(y)
}

/// Per-row `t_i` and `r_i` for one dataset, noise rate and `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateSet<T> {
    pub t: Vec<T>,
    pub r_raw: Vec<T>,
    pub r_clamped: Vec<T>,
    pub p: T,
    pub k: usize,
}

impl<T: Scalar> EstimateSet<T> {
    pub fn compute(x: &BitMatrix, y: &BitVector, p: &T, k: usize) -> Result<Self> {
        Error::check_len(x.n_rows(), y.len())?;
        let hoods = Neighborhoods::build(x, k)?;
        Self::from_neighborhoods(&hoods, y, p)
    }

    pub fn from_neighborhoods(hoods: &Neighborhoods, y: &BitVector, p: &T) -> Result<Self> {
        let k = hoods.k();
        let kk = T::from_count(k);
        let t: Vec<T> = hoods.one_counts(y)?.into_iter().map(|c| T::from_count(c) / kk.clone()).collect();
        let mut r_raw = Vec::with_capacity(t.len());
        let mut r_clamped = Vec::with_capacity(t.len());
        for ti in &t {
            let r = estimate_rho_i(ti, p)?;
            r_raw.push(r.raw);
            r_clamped.push(r.clamped);
        }
        Ok(EstimateSet { t, r_raw, r_clamped, p: p.clone(), k })
    }

    pub fn n(&self) -> usize {
        self.t.len()
    }

    pub fn p_prime(&self) -> Result<T> {
        estimate_p_prime(&self.r_clamped)
    }

    /// `p + r_i - 2 p r_i` from the clamped `r_i`.
    pub fn tau_hat(&self, i: usize) -> Result<T> {
        let r = self.r_clamped.get(i).ok_or(Error::Index { index: i, len: self.n() })?;
        limit_tau_i(&self.p, r)
    }

    pub fn profiles(&self) -> Result<Vec<NeighborhoodProfile>> {
        self.r_clamped.iter().map(|r| profile_from_rho(r, self.k)).collect()
    }
}

/// `s = round(r * k)`, halves rounding away from zero. Values within the
/// scalar's slack of a half count as halves.
pub fn profile_from_rho<T: Scalar>(r: &T, k: usize) -> Result<NeighborhoodProfile> {
    let x = r.clone().clamp_unit() * T::from_count(k);
    let mut floor = x.approx().floor().max(0.0) as usize;
    while floor > 0 && T::from_count(floor) > x {
        floor -= 1;
    }
    while T::from_count(floor + 1) <= x {
        floor += 1;
    }
    let frac = x - T::from_count(floor);
    let s = if frac + T::integer_slack() >= T::half() { floor + 1 } else { floor };
    NeighborhoodProfile::new(k, s.min(k))
}

/// Rough noise-rate guess: the median over rows of `min(t_i, 1 - t_i)`.
///
/// Only meaningful if `f` is mostly constant on small neighborhoods. It is a
/// heuristic, not an estimator with any guarantee.
pub fn heuristic_noise_rate(x: &BitMatrix, y: &BitVector, k: usize) -> Result<f64> {
    Error::check_len(x.n_rows(), y.len())?;
    let hoods = Neighborhoods::build(x, k)?;
    let mut m: Vec<f64> = hoods
        .one_counts(y)?
        .into_iter()
        .map(|c| {
            let t = c as f64 / k as f64;
            t.min(1.0 - t)
        })
        .collect();
    m.sort_by(f64::total_cmp);
    let n = m.len();
    Ok(if n % 2 == 1 { m[n / 2] } else { 0.5 * (m[n / 2 - 1] + m[n / 2]) })
}
