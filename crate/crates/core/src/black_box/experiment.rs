use rand::distr::{Bernoulli, Distribution};
use rand::Rng;

use crate::bits::{BitMatrix, BitVector};
use crate::black_box::TargetFunction;
use crate::error::{Error, Result};
use crate::rng::{self, label};

/// Bernoulli noise rate plus the root seed its draws descend from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    p: f64,
    seed: u64,
}

impl NoiseSpec {
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        check_probability(p)?;
        Ok(NoiseSpec { p, seed })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::config(format!("probability must lie in [0, 1], got {p}")))
    }
}

/// `n` independent Bernoulli(`p`) bits.
pub fn draw_noise<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> BitVector {
    let coin = Bernoulli::new(p).expect("noise rate validated by caller");
    (0..n).map(|_| coin.sample(rng)).collect()
}

/// `n` input rows of width `r` drawn from `seed`.
///
/// `n == 2^r` lists every input in index order. Fewer rows are distinct and
/// uniformly chosen; more rows are independent uniform draws, so repeats occur.
pub fn sample_inputs(r: usize, n: usize, seed: u64) -> Result<BitMatrix> {
    if r == 0 || n == 0 {
        return Err(Error::config("input sampling needs r >= 1 and n >= 1"));
    }
    let space = if r < 64 { Some(1u64 << r) } else { None };
    if space == Some(n as u64) {
        return BitMatrix::all_inputs(r);
    }
    let mut rng = rng::stream(seed, &[label::INPUTS]);
    let mut draw = || -> BitVector { (0..r).map(|_| rng.random::<bool>()).collect() };
    let rows = if space.is_some_and(|s| (n as u64) > s) {
        (0..n).map(|_| draw()).collect()
    } else {
        let mut seen = std::collections::HashSet::with_capacity(n);
        let mut rows = Vec::with_capacity(n);
        while rows.len() < n {
            let v = draw();
            if seen.insert(v.clone()) {
                rows.push(v);
            }
        }
        rows
    };
    BitMatrix::new(rows)
}

/// Training and testing outputs for one trial over fixed inputs.
///
/// The two noise vectors come from sibling streams under `[trial]`.
pub fn paired_outputs(truth: &BitVector, p: f64, root: u64, trial: u64) -> (BitVector, BitVector) {
    let n = truth.len();
    let mut train = rng::stream(root, &[label::TRAIN_NOISE, trial]);
    let mut test = rng::stream(root, &[label::TEST_NOISE, trial]);
    let mut y1 = draw_noise(n, p, &mut train);
    let mut y2 = draw_noise(n, p, &mut test);
    y1.xor_assign(truth).expect("same length");
    y2.xor_assign(truth).expect("same length");
    (y1, y2)
}

/// One training/testing draw `y = f(X) xor z` with `X` held fixed.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub inputs: BitMatrix,
    pub truth: BitVector,
    pub y1: BitVector,
    pub y2: BitVector,
    pub p: f64,
}

impl Experiment {
    pub fn noise1(&self) -> BitVector {
        self.y1.xor(&self.truth).expect("same length")
    }

    pub fn noise2(&self) -> BitVector {
        self.y2.xor(&self.truth).expect("same length")
    }
}

pub fn draw_experiment(f: &TargetFunction, x: &BitMatrix, noise: NoiseSpec) -> Result<Experiment> {
    let truth = f.evaluate_all(x)?;
    let (y1, y2) = paired_outputs(&truth, noise.p, noise.seed, 0);
    Ok(Experiment { inputs: x.clone(), truth, y1, y2, p: noise.p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::black_box::Family;

    fn parity_setup() -> (TargetFunction, BitMatrix) {
        let f = TargetFunction::from_family(&Family::Parity, 6).unwrap();
        (f, BitMatrix::all_inputs(6).unwrap())
    }

    #[test]
    fn no_noise_reproduces_truth() {
        let (f, x) = parity_setup();
        let e = draw_experiment(&f, &x, NoiseSpec::new(0.0, 9).unwrap()).unwrap();
        assert_eq!(e.y1, e.truth);
        assert_eq!(e.y2, e.truth);
    }

    #[test]
    fn certain_noise_negates_truth() {
        let (f, x) = parity_setup();
        let e = draw_experiment(&f, &x, NoiseSpec::new(1.0, 9).unwrap()).unwrap();
        assert_eq!(e.y1, e.truth.negate());
        assert_eq!(e.y2, e.truth.negate());
    }

    #[test]
    fn noise_rate_within_three_sigma() {
        let n = 100_000;
        let p = 0.2;
        let mut r = rng::stream(5, &[0]);
        let z = draw_noise(n, p, &mut r);
        let rate = z.hamming_length() as f64 / n as f64;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((rate - p).abs() <= 3.0 * sigma, "rate {rate}");
        assert!(3.0 * sigma < 0.004 + 1e-12);
    }

    #[test]
    fn equal_seeds_are_bit_identical() {
        let (f, x) = parity_setup();
        let spec = NoiseSpec::new(0.3, 42).unwrap();
        let a = draw_experiment(&f, &x, spec).unwrap();
        let b = draw_experiment(&f, &x, spec).unwrap();
        assert_eq!(a.y1, b.y1);
        assert_eq!(a.y2, b.y2);
        assert_ne!(a.y1, a.y2);
        let c = draw_experiment(&f, &x, NoiseSpec::new(0.3, 43).unwrap()).unwrap();
        assert_ne!(a.y1, c.y1);
    }

    #[test]
    fn train_and_test_noise_look_independent() {
        // Agreement rate of two independent Bernoulli(p) streams is p^2 + (1-p)^2.
        let n = 64;
        let p = 0.3;
        let truth = BitVector::zeros(n);
        let trials = 2000;
        let mut both = 0usize;
        for t in 0..trials {
            let (z1, z2) = paired_outputs(&truth, p, 11, t);
            both += z1.iter().zip(z2.iter()).filter(|(a, b)| *a && *b).count();
        }
        let total = (n as u64 * trials) as f64;
        let rate = both as f64 / total;
        let expect = p * p;
        let sigma = (expect * (1.0 - expect) / total).sqrt();
        assert!((rate - expect).abs() < 4.0 * sigma, "joint rate {rate}");
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(NoiseSpec::new(-0.1, 0).is_err());
        assert!(NoiseSpec::new(1.5, 0).is_err());
        assert!(NoiseSpec::new(f64::NAN, 0).is_err());
    }

    #[test]
    fn sampled_inputs_follow_size_rules() {
        assert_eq!(sample_inputs(3, 8, 1).unwrap(), BitMatrix::all_inputs(3).unwrap());
        let few = sample_inputs(6, 40, 1).unwrap();
        assert_eq!(few.n_rows(), 40);
        assert!(!few.has_duplicate_rows());
        let many = sample_inputs(2, 30, 1).unwrap();
        assert!(many.has_duplicate_rows());
        assert_eq!(sample_inputs(70, 5, 9).unwrap(), sample_inputs(70, 5, 9).unwrap());
        assert!(sample_inputs(0, 5, 1).is_err());
    }
}
