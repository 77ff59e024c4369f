use rand::distr::{Bernoulli, Distribution};

use crate::bits::BitVector;
use crate::black_box::{check_probability, paired_outputs};
use crate::error::{Error, Result};
use crate::error_theory::observed_errors;
use crate::knn::TrainingPredictor;
use crate::rng;
use crate::stats::{run_trials, Estimate};

/// Monte Carlo estimates of the three error lengths for one model.
#[derive(Clone, Debug)]
pub struct ErrorSummary {
    pub model: String,
    pub n: usize,
    pub p: f64,
    pub e_c: Estimate,
    pub e_t: Estimate,
    pub e_s: Estimate,
    /// Per-trial `|e_c| - |e_t| - |e_s|`.
    pub bound_gap: Estimate,
    /// `|m(X|X,y2) xor y1|`: the cross-validation error with the roles of the
    /// two draws swapped.
    pub e_c_swapped: Estimate,
    /// Largest training error seen in any trial.
    pub max_e_t: usize,
}

impl ErrorSummary {
    /// Whether mean `|e_c|` is within `sigmas` standard errors of the bound
    /// `mean |e_t| + mean |e_s|` or below it.
    pub fn satisfies_bound(&self, sigmas: f64) -> bool {
        self.bound_gap.mean <= sigmas * self.bound_gap.stderr + 1e-12
    }
}

/// Runs `trials` paired draws over the fixed inputs behind `model`.
///
/// Trial `i` uses the noise streams `[TRAIN_NOISE, i]` and `[TEST_NOISE, i]`
/// under `seed`.
pub fn simulate_errors(
    model: &dyn TrainingPredictor,
    truth: &BitVector,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<ErrorSummary> {
    check_probability(p)?;
    Error::check_len(model.n(), truth.len())?;
    if trials == 0 {
        return Err(Error::config("Monte Carlo needs at least one trial"));
    }
    let rows = run_trials(trials, |trial| {
        let (y1, y2) = paired_outputs(truth, p, seed, trial);
        let pred1 = model.predict_training(&y1);
        let pred2 = model.predict_training(&y2);
        let d = observed_errors(&pred1, &pred2, &y1, &y2).expect("lengths checked");
        let swapped = pred2.hamming_distance(&y1).expect("lengths checked");
        (d, swapped)
    });
    let col = |f: &dyn Fn(&(crate::error_theory::ErrorDecomposition, usize)) -> f64| {
        Estimate::from_samples(&rows.iter().map(f).collect::<Vec<_>>())
    };
    Ok(ErrorSummary {
        model: model.name(),
        n: truth.len(),
        p,
        e_c: col(&|(d, _)| d.e_c as f64),
        e_t: col(&|(d, _)| d.e_t as f64),
        e_s: col(&|(d, _)| d.e_s as f64),
        bound_gap: col(&|(d, _)| d.e_c as f64 - d.e_t as f64 - d.e_s as f64),
        e_c_swapped: col(&|(_, s)| *s as f64),
        max_e_t: rows.iter().map(|(d, _)| d.e_t).max().unwrap_or(0),
    })
}

/// `|e_t xor e_s|` where the two vectors have independent Bernoulli rows with
/// rates `p_t` and `p_s`.
pub fn simulate_independent_processes(n: usize, p_t: f64, p_s: f64, trials: usize, seed: u64) -> Result<Estimate> {
    check_probability(p_t)?;
    check_probability(p_s)?;
    let bt = Bernoulli::new(p_t).expect("checked");
    let bs = Bernoulli::new(p_s).expect("checked");
    let lengths = run_trials(trials, |trial| {
        let mut r = rng::stream(seed, &[trial]);
        let e_t: BitVector = (0..n).map(|_| bt.sample(&mut r)).collect();
        let e_s: BitVector = (0..n).map(|_| bs.sample(&mut r)).collect();
        e_t.hamming_distance(&e_s).expect("same length") as f64
    });
    Ok(Estimate::from_samples(&lengths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitMatrix;
    use crate::black_box::{Family, TargetFunction};
    use crate::error_theory::combine_theorem3;
    use crate::knn::{MemorizerModel, OracleModel, VotingConfig, VotingModel};

    #[test]
    fn memorizer_rates() {
        let n = 64;
        let truth = BitVector::zeros(n);
        let s = simulate_errors(&MemorizerModel::new(n), &truth, 0.2, 4000, 1).unwrap();
        let expect = 2.0 * 0.2 * 0.8 * n as f64;
        assert_eq!(s.max_e_t, 0);
        assert!(s.e_c.within_sigmas(expect, 3.0), "{:?}", s.e_c);
        assert!(s.e_s.within_sigmas(expect, 3.0), "{:?}", s.e_s);
    }

    #[test]
    fn oracle_is_perfectly_stable() {
        let x = BitMatrix::all_inputs(6).unwrap();
        let f = TargetFunction::from_family(&Family::Majority, 6).unwrap();
        let truth = f.evaluate_all(&x).unwrap();
        let p = 0.7;
        let model = OracleModel::new(&f, &p, &x).unwrap();
        let s = simulate_errors(&model, &truth, p, 3000, 2).unwrap();
        assert_eq!(s.e_s.mean, 0.0);
        assert!(s.e_c.within_sigmas(0.3 * 64.0, 3.0), "{:?}", s.e_c);
    }

    #[test]
    fn swapping_draws_preserves_mean() {
        let x = BitMatrix::all_inputs(6).unwrap();
        let f = TargetFunction::from_family(&Family::Parity, 6).unwrap();
        let truth = f.evaluate_all(&x).unwrap();
        let model = VotingModel::new(&x, VotingConfig::<f64>::majority(3).unwrap()).unwrap();
        let s = simulate_errors(&model, &truth, 0.2, 3000, 3).unwrap();
        let diff = s.e_c.mean - s.e_c_swapped.mean;
        let se = (s.e_c.stderr.powi(2) + s.e_c_swapped.stderr.powi(2)).sqrt();
        assert!(diff.abs() <= 3.0 * se, "diff {diff} se {se}");
        assert!(s.satisfies_bound(3.0));
    }

    #[test]
    fn same_seed_same_summary() {
        let truth = BitVector::zeros(20);
        let a = simulate_errors(&MemorizerModel::new(20), &truth, 0.3, 500, 9).unwrap();
        let b = simulate_errors(&MemorizerModel::new(20), &truth, 0.3, 500, 9).unwrap();
        assert_eq!(a.e_c, b.e_c);
    }

    #[test]
    fn independent_processes_follow_combination() {
        let est = simulate_independent_processes(100, 0.1, 0.3, 4000, 5).unwrap();
        let expect = combine_theorem3(&10.0, &30.0, 100).unwrap();
        assert!(est.within_sigmas(expect, 3.0), "{est:?} vs {expect}");
    }
}
