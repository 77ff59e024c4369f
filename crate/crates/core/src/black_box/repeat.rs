//! Probability that a fresh input is missing from the training inputs.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::Scalar;
use crate::stats::{run_trials, Estimate};

/// `(1 - 2^-r)^n`, the upper bound on the expected miss probability, attained
/// for the uniform input distribution.
pub fn repeat_input_bound<T: Scalar>(r: usize, n: usize) -> Result<T> {
    if r == 0 {
        return Err(Error::config("attribute count r must be at least 1"));
    }
    let mut cell = T::one();
    for _ in 0..r {
        cell = cell * T::half();
    }
    Ok((T::one() - cell).powi(n))
}

/// A probability distribution over the `2^r` inputs, indexed as in
/// [`crate::BitVector::from_index`].
#[derive(Clone, Debug)]
pub struct InputDistribution {
    arity: usize,
    weights: Vec<f64>,
}

impl InputDistribution {
    pub fn new(arity: usize, weights: Vec<f64>) -> Result<Self> {
        if arity == 0 || arity > 24 {
            return Err(Error::config(format!("input distributions support 1 <= r <= 24, got {arity}")));
        }
        Error::check_len(1 << arity, weights.len())?;
        if weights.iter().any(|w| w.is_nan() || *w < 0.0) {
            return Err(Error::config("weights must be non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::config(format!("weights must sum to 1, got {total}")));
        }
        Ok(InputDistribution { arity, weights })
    }

    pub fn uniform(arity: usize) -> Result<Self> {
        let size = 1usize << arity.min(24);
        InputDistribution::new(arity, vec![1.0 / size as f64; size])
    }

    /// Input 0 carries `heavy` mass; the rest share `1 - heavy` equally.
    pub fn skewed(arity: usize, heavy: f64) -> Result<Self> {
        let size = 1usize << arity.min(24);
        let mut weights = vec![(1.0 - heavy) / (size - 1) as f64; size];
        weights[0] = heavy;
        InputDistribution::new(arity, weights)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Expected miss probability `sum_v (1 - D(v))^n D(v)`, by direct summation.
    pub fn expected_miss_probability(&self, n: usize) -> f64 {
        self.weights.iter().map(|&d| (1.0 - d).powi(n as i32) * d).sum()
    }

    /// Monte Carlo estimate: each trial draws `n` training inputs and one
    /// fresh input from the distribution and records whether the fresh input
    /// matched none of them.
    pub fn estimate_miss_probability(&self, n: usize, trials: usize, seed: u64) -> Estimate {
        let sampler = WeightedIndex::new(&self.weights).expect("validated weights");
        let outcomes = run_trials(trials, |trial| {
            let mut rng = rng::stream(seed, &[rng::label::INPUTS, n as u64, trial]);
            let fresh = sampler.sample(&mut rng);
            // Draw all n rows even after a hit so the stream layout is fixed.
            let mut hit = false;
            for _ in 0..n {
                hit |= sampler.sample(&mut rng) == fresh;
            }
            !hit
        });
        Estimate::from_successes(outcomes.iter().filter(|&&miss| miss).count(), trials)
    }
}
