//! Sample means with standard errors, and the parallel trial driver.

use rayon::prelude::*;

/// Mean of a batch of trial values with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
}

impl Estimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        if n == 0 {
            return Estimate { mean: f64::NAN, stderr: f64::NAN, trials: 0 };
        }
        if samples.iter().all(|&x| x == samples[0]) {
            return Estimate { mean: samples[0], stderr: 0.0, trials: n };
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
            (ss / (n - 1) as f64 / n as f64).sqrt()
        } else {
            0.0
        };
        Estimate { mean, stderr, trials: n }
    }

    /// Mean of 0/1 outcomes, with the binomial standard error.
    pub fn from_successes(successes: usize, trials: usize) -> Self {
        let mean = successes as f64 / trials as f64;
        Estimate { mean, stderr: (mean * (1.0 - mean) / trials as f64).sqrt(), trials }
    }

    /// A 0/1 mean with the standard error it would have if the success rate
    /// were exactly `target`. Rare events seen zero times stay testable.
    pub fn under_bernoulli_null(self, target: f64) -> Self {
        Estimate { stderr: (target * (1.0 - target) / self.trials as f64).sqrt(), ..self }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Estimate { mean: self.mean * factor, stderr: self.stderr * factor.abs(), trials: self.trials }
    }

    /// Distance from `target` in units of the standard error.
    ///
    /// A zero standard error means the sample was constant; the distance is
    /// then 0 on an exact match and infinite otherwise.
    pub fn sigmas_from(&self, target: f64) -> f64 {
        let gap = (self.mean - target).abs();
        if self.stderr > 0.0 {
            gap / self.stderr
        } else if gap <= 1e-12 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    /// Signed `(mean - target) / stderr`, for one-sided comparisons.
    pub fn excess_sigmas(&self, target: f64) -> f64 {
        let gap = self.mean - target;
        if self.stderr > 0.0 {
            gap / self.stderr
        } else if gap.abs() <= 1e-12 {
            0.0
        } else {
            gap.signum() * f64::INFINITY
        }
    }

    pub fn within_sigmas(&self, target: f64, sigmas: f64) -> bool {
        self.sigmas_from(target) <= sigmas
    }
}

/// Runs `trial(i)` for `i in 0..trials` in parallel and returns the results in
/// trial order, so any reduction over them is independent of scheduling.
pub fn run_trials<T, F>(trials: usize, trial: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..trials as u64).into_par_iter().map(trial).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_null_keeps_zero_hits_testable() {
        let e = Estimate::from_successes(0, 200);
        assert!(e.sigmas_from(1e-4).is_infinite());
        let n = e.under_bernoulli_null(1e-4);
        assert_eq!(n.mean, 0.0);
        assert!(n.sigmas_from(1e-4) < 0.2);
    }

    #[test]
    fn mean_and_stderr() {
        let e = Estimate::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.mean, 2.5);
        let sd = (5.0f64 / 3.0).sqrt();
        assert!((e.stderr - sd / 2.0).abs() < 1e-15);
    }

    #[test]
    fn constant_samples_have_zero_stderr() {
        let e = Estimate::from_samples(&[0.18; 10]);
        assert_eq!(e.stderr, 0.0);
        assert!(e.within_sigmas(0.18, 3.0));
        assert!(!e.within_sigmas(0.19, 3.0));
    }

    #[test]
    fn trials_come_back_in_order() {
        let out = run_trials(1000, |i| i * 2);
        assert!(out.iter().enumerate().all(|(i, &v)| v == 2 * i as u64));
    }
}
