//! Instance-based voting models and the two reference models.
//!
//! Similarity is `r - hamming`, so identical vectors score strictly above any
//! distinct pair. Neighbors are ranked by similarity, ties going to the lower
//! row index, and a training row is always a candidate neighbor of itself.

use std::cmp::Reverse;

use rayon::prelude::*;

use crate::bits::{BitMatrix, BitVector};
use crate::black_box::TargetFunction;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Neighborhood size `k` and vote threshold `t`, `0 < t < 1`.
///
/// The vote is 1 when strictly more than `t * k` neighbors output 1 and 0
/// otherwise; an exact tie `sum == t * k` votes 0.
#[derive(Clone, Debug, PartialEq)]
pub struct VotingConfig<T> {
    k: usize,
    t: T,
    needed: usize,
}

impl<T: Scalar> VotingConfig<T> {
    pub fn new(k: usize, t: T) -> Result<Self> {
        if k == 0 {
            return Err(Error::config("neighborhood size k must be at least 1"));
        }
        if !(t > T::zero() && t < T::one()) {
            return Err(Error::config(format!("vote threshold must satisfy 0 < t < 1, got {t:?}")));
        }
        let needed = votes_needed(k, &t);
        Ok(VotingConfig { k, t, needed })
    }

    pub fn majority(k: usize) -> Result<Self> {
        VotingConfig::new(k, T::half())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> &T {
        &self.t
    }

    /// Smallest count of 1-votes that yields a 1 prediction; `k + 1` when none does.
    pub fn votes_needed(&self) -> usize {
        self.needed
    }

    pub fn decide(&self, ones: usize) -> bool {
        ones >= self.needed
    }

    /// Whether `ones == t * k` exactly (up to the scalar's integer slack).
    pub fn is_tie(&self, ones: usize) -> bool {
        let tk = self.t.clone() * T::from_count(self.k);
        T::from_count(ones).abs_diff(&tk) <= T::integer_slack()
    }

    pub(crate) fn check_rows(&self, n: usize) -> Result<()> {
        if self.k > n {
            Err(Error::config(format!("k = {} exceeds the {n} available rows", self.k)))
        } else {
            Ok(())
        }
    }
}

fn votes_needed<T: Scalar>(k: usize, t: &T) -> usize {
    let tk = t.clone() * T::from_count(k);
    let beats = |m: usize| T::from_count(m) - tk.clone() > T::integer_slack();
    let guess = tk.approx().floor().max(0.0) as usize;
    let mut m = guess.saturating_sub(2);
    while m <= k && !beats(m) {
        m += 1;
    }
    while m > 0 && beats(m - 1) {
        m -= 1;
    }
    m
}

/// The `k` rows most similar to a query, best first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighborhood {
    pub indices: Vec<usize>,
    pub similarities: Vec<usize>,
}

pub fn similarity(u1: &BitVector, u2: &BitVector) -> Result<usize> {
    Ok(u1.len() - u1.hamming_distance(u2)?)
}

pub fn nearest(x: &BitMatrix, v: &BitVector, k: usize) -> Result<Neighborhood> {
    Error::check_len(x.n_cols(), v.len())?;
    if k == 0 || k > x.n_rows() {
        return Err(Error::config(format!("neighborhood size must satisfy 1 <= k <= n = {}, got {k}", x.n_rows())));
    }
    let r = x.n_cols();
    let mut ranked: Vec<(Reverse<usize>, usize)> = x
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| (Reverse(r - row.hamming_distance(v).expect("width checked")), i))
        .collect();
    if k < ranked.len() {
        ranked.select_nth_unstable(k - 1);
        ranked.truncate(k);
    }
    ranked.sort_unstable();
    Ok(Neighborhood {
        indices: ranked.iter().map(|&(_, i)| i).collect(),
        similarities: ranked.iter().map(|&(Reverse(s), _)| s).collect(),
    })
}

/// Count of 1-outputs over a neighborhood.
pub fn count_ones(y: &BitVector, neighborhood: &[usize]) -> usize {
    neighborhood.iter().filter(|&&j| y.get(j)).count()
}

/// The voting model's prediction at `v`.
pub fn predict_mk<T: Scalar>(x: &BitMatrix, y: &BitVector, v: &BitVector, cfg: &VotingConfig<T>) -> Result<bool> {
    Error::check_len(x.n_rows(), y.len())?;
    let hood = nearest(x, v, cfg.k())?;
    Ok(cfg.decide(count_ones(y, &hood.indices)))
}

/// The oracle that knows `f` and `p`: `f(v)`, negated when `p > 1/2`.
pub fn predict_malpha<T: Scalar>(f: &TargetFunction, p: &T, v: &BitVector) -> Result<bool> {
    Ok(f.evaluate(v)? ^ (*p > T::half()))
}

/// The memorizer: returns the training output of row `i`.
pub fn predict_mbeta(y: &BitVector, i: usize) -> Result<bool> {
    y.try_get(i)
}

/// The `k` nearest neighbors of every training row, computed once per input
/// matrix. Outputs do not affect neighborhoods, so Monte Carlo trials over
/// fixed `X` reuse this.
#[derive(Clone, Debug)]
pub struct Neighborhoods {
    k: usize,
    table: Vec<usize>,
}

impl Neighborhoods {
    pub fn build(x: &BitMatrix, k: usize) -> Result<Self> {
        if k == 0 || k > x.n_rows() {
            return Err(Error::config(format!("neighborhood size must satisfy 1 <= k <= n = {}, got {k}", x.n_rows())));
        }
        let hoods: Vec<Vec<usize>> =
            x.rows().par_iter().map(|v| nearest(x, v, k).map(|h| h.indices)).collect::<Result<_>>()?;
        Ok(Neighborhoods { k, table: hoods.concat() })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.table.len() / self.k
    }

    pub fn of(&self, i: usize) -> &[usize] {
        &self.table[i * self.k..(i + 1) * self.k]
    }

    pub fn one_counts(&self, y: &BitVector) -> Result<Vec<usize>> {
        Error::check_len(self.n(), y.len())?;
        Ok((0..self.n()).map(|i| count_ones(y, self.of(i))).collect())
    }

    pub fn predict<T: Scalar>(&self, y: &BitVector, cfg: &VotingConfig<T>) -> Result<BitVector> {
        if cfg.k() != self.k {
            return Err(Error::config(format!(
                "neighborhoods built for k = {} but config has k = {}",
                self.k,
                cfg.k()
            )));
        }
        Ok(self.one_counts(y)?.into_iter().map(|c| cfg.decide(c)).collect())
    }
}

/// A model bound to fixed training inputs, predicting at those same inputs
/// from a vector of training outputs.
pub trait TrainingPredictor: Sync {
    fn name(&self) -> String;
    fn n(&self) -> usize;
    fn predict_training(&self, y: &BitVector) -> BitVector;
}

/// `m_k` with precomputed neighborhoods.
#[derive(Clone, Debug)]
pub struct VotingModel<T> {
    hoods: Neighborhoods,
    cfg: VotingConfig<T>,
}

impl<T: Scalar> VotingModel<T> {
    pub fn new(x: &BitMatrix, cfg: VotingConfig<T>) -> Result<Self> {
        cfg.check_rows(x.n_rows())?;
        Ok(VotingModel { hoods: Neighborhoods::build(x, cfg.k())?, cfg })
    }

    pub fn from_neighborhoods(hoods: Neighborhoods, cfg: VotingConfig<T>) -> Result<Self> {
        if hoods.k() != cfg.k() {
            return Err(Error::config("neighborhood size differs from config k"));
        }
        Ok(VotingModel { hoods, cfg })
    }

    pub fn neighborhoods(&self) -> &Neighborhoods {
        &self.hoods
    }

    pub fn config(&self) -> &VotingConfig<T> {
        &self.cfg
    }
}

impl<T: Scalar> TrainingPredictor for VotingModel<T> {
    fn name(&self) -> String {
        format!("m_{}", self.cfg.k())
    }
    fn n(&self) -> usize {
        self.hoods.n()
    }
    fn predict_training(&self, y: &BitVector) -> BitVector {
        self.hoods.predict(y, &self.cfg).expect("output length matches inputs")
    }
}

/// `m_alpha`: the oracle. Its predictions ignore the training outputs.
#[derive(Clone, Debug)]
pub struct OracleModel {
    prediction: BitVector,
}

impl OracleModel {
    pub fn new<T: Scalar>(f: &TargetFunction, p: &T, x: &BitMatrix) -> Result<Self> {
        let prediction = x.rows().iter().map(|v| predict_malpha(f, p, v)).collect::<Result<Vec<bool>>>()?;
        Ok(OracleModel { prediction: BitVector::from_bools(&prediction) })
    }
}

impl TrainingPredictor for OracleModel {
    fn name(&self) -> String {
        "m_alpha".into()
    }
    fn n(&self) -> usize {
        self.prediction.len()
    }
    fn predict_training(&self, _y: &BitVector) -> BitVector {
        self.prediction.clone()
    }
}

/// `m_beta`: the memorizer.
#[derive(Clone, Copy, Debug)]
pub struct MemorizerModel {
    n: usize,
}

impl MemorizerModel {
    pub fn new(n: usize) -> Self {
        MemorizerModel { n }
    }
}

impl TrainingPredictor for MemorizerModel {
    fn name(&self) -> String {
        "m_beta".into()
    }
    fn n(&self) -> usize {
        self.n
    }
    fn predict_training(&self, y: &BitVector) -> BitVector {
        y.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::black_box::Family;
    use crate::scalar::exact;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn bv(bits: &[u8]) -> BitVector {
        BitVector::from_bits(bits)
    }

    #[test]
    fn similarity_examples() {
        let u = bv(&[1, 0, 1, 1, 0]);
        assert_eq!(similarity(&u, &u).unwrap(), 5);
        assert_eq!(similarity(&bv(&[1, 0, 1]), &bv(&[0, 0, 0])).unwrap(), 1);
        assert_eq!(similarity(&bv(&[0]), &bv(&[1])).unwrap(), 0);
        assert!(similarity(&bv(&[0, 1]), &bv(&[1])).is_err());
    }

    #[test]
    fn nearest_finds_exact_match_first() {
        let x = BitMatrix::all_inputs(3).unwrap();
        let h = nearest(&x, x.row(3), 1).unwrap();
        assert_eq!(h.indices, vec![3]);
        assert_eq!(h.similarities, vec![3]);
    }

    #[test]
    fn nearest_breaks_ties_by_index() {
        let x = BitMatrix::from_rows(&[&[1, 0], &[1, 0], &[1, 0]]).unwrap();
        assert_eq!(nearest(&x, &bv(&[1, 0]), 2).unwrap().indices, vec![0, 1]);
        let x = BitMatrix::from_rows(&[&[0, 0], &[0, 1], &[1, 1]]).unwrap();
        let h = nearest(&x, &bv(&[1, 0]), 2).unwrap();
        assert_eq!(h.indices, vec![0, 2]);
        assert_eq!(h.similarities, vec![1, 1]);
    }

    #[test]
    fn nearest_rejects_bad_k() {
        let x = BitMatrix::all_inputs(2).unwrap();
        assert!(nearest(&x, x.row(0), 5).is_err());
        assert!(nearest(&x, x.row(0), 0).is_err());
    }

    #[test]
    fn vote_examples() {
        let x = BitMatrix::from_rows(&[&[0, 0, 0], &[0, 0, 1], &[0, 1, 0], &[1, 1, 1]]).unwrap();
        let v = bv(&[0, 0, 0]);
        let maj3 = VotingConfig::<f64>::majority(3).unwrap();
        assert!(predict_mk(&x, &bv(&[1, 1, 0, 0]), &v, &maj3).unwrap());
        for t in [0.1, 0.5, 0.9] {
            let cfg = VotingConfig::new(3, t).unwrap();
            assert!(!predict_mk(&x, &bv(&[0, 0, 0, 1]), &v, &cfg).unwrap());
        }
        let quarter = VotingConfig::new(4, 0.25).unwrap();
        assert!(quarter.is_tie(1));
        assert!(!predict_mk(&x, &bv(&[1, 0, 0, 0]), &v, &quarter).unwrap());
        assert!(predict_mk(&x, &bv(&[1, 1, 0, 0]), &v, &quarter).unwrap());
    }

    #[test]
    fn votes_needed_handles_float_ties() {
        // 0.29 * 100 is 28.999999999999996 in binary floating point.
        assert_eq!(VotingConfig::new(100, 0.29).unwrap().votes_needed(), 30);
        assert_eq!(VotingConfig::new(10, 0.3).unwrap().votes_needed(), 4);
        assert_eq!(VotingConfig::new(10, 0.7).unwrap().votes_needed(), 8);
        assert_eq!(VotingConfig::new(3, 0.5).unwrap().votes_needed(), 2);
        assert_eq!(VotingConfig::new(1, 0.99).unwrap().votes_needed(), 1);
        let exact_cfg = VotingConfig::<BigRational>::new(100, exact(29, 100)).unwrap();
        assert_eq!(exact_cfg.votes_needed(), 30);
    }

    #[test]
    fn config_validation() {
        assert!(VotingConfig::new(0, 0.5).is_err());
        assert!(VotingConfig::new(3, 0.0).is_err());
        assert!(VotingConfig::new(3, 1.0).is_err());
        assert!(VotingConfig::new(3, f64::NAN).is_err());
    }

    #[test]
    fn oracle_examples() {
        let f = TargetFunction::from_family(&Family::Constant(true), 2).unwrap();
        let v = bv(&[0, 1]);
        assert!(predict_malpha(&f, &0.2, &v).unwrap());
        assert!(!predict_malpha(&f, &0.8, &v).unwrap());
        let g = TargetFunction::from_family(&Family::Constant(false), 2).unwrap();
        assert!(!predict_malpha(&g, &0.5, &v).unwrap());
    }

    #[test]
    fn memorizer_examples() {
        let y = bv(&[1, 0, 1]);
        assert!(predict_mbeta(&y, 0).unwrap());
        assert!(!predict_mbeta(&y, 1).unwrap());
        assert!(predict_mbeta(&y, 3).is_err());
    }

    #[test]
    fn single_neighbor_memorizes_duplicate_free_inputs() {
        let x = BitMatrix::all_inputs(5).unwrap();
        let model = VotingModel::new(&x, VotingConfig::<f64>::majority(1).unwrap()).unwrap();
        let memo = MemorizerModel::new(32);
        for seed in 0..20u64 {
            let y: BitVector = (0..32).map(|i| (seed.wrapping_mul(2654435761) >> (i % 31)) & 1 == 1).collect();
            assert_eq!(model.predict_training(&y), y);
            assert_eq!(memo.predict_training(&y), y);
        }
    }

    #[test]
    fn duplicates_are_ordinary_candidates() {
        let x = BitMatrix::from_rows(&[&[0, 1], &[0, 1], &[1, 1]]).unwrap();
        let model = VotingModel::new(&x, VotingConfig::<f64>::majority(1).unwrap()).unwrap();
        // Both duplicates resolve to the first of them.
        assert_eq!(model.predict_training(&bv(&[0, 1, 1])), bv(&[0, 0, 1]));
    }

    proptest! {
        #[test]
        fn self_similarity_is_strict_maximum(a in prop::collection::vec(any::<bool>(), 1..40),
                                             flips in prop::collection::vec(any::<bool>(), 40)) {
            let u = BitVector::from_bools(&a);
            let w: BitVector = a.iter().zip(&flips).map(|(x, f)| x ^ f).collect();
            let s_self = similarity(&u, &u).unwrap();
            let s = similarity(&u, &w).unwrap();
            if u != w { prop_assert!(s < s_self); } else { prop_assert_eq!(s, s_self); }
        }

        #[test]
        fn vote_ignores_neighbor_order(outputs in prop::collection::vec(any::<bool>(), 1..15), t in 0.05f64..0.95) {
            let k = outputs.len();
            let cfg = VotingConfig::new(k, t).unwrap();
            let y = BitVector::from_bools(&outputs);
            let forward: Vec<usize> = (0..k).collect();
            let backward: Vec<usize> = (0..k).rev().collect();
            prop_assert_eq!(cfg.decide(count_ones(&y, &forward)), cfg.decide(count_ones(&y, &backward)));
        }

        #[test]
        fn odd_majority_never_ties(half_k in 0usize..200, ones in 0usize..401) {
            let k = 2 * half_k + 1;
            let cfg = VotingConfig::<f64>::majority(k).unwrap();
            prop_assert!(!cfg.is_tie(ones.min(k)));
        }
    }
}
