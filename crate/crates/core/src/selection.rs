//! Choosing `k` and `t` from training data alone.
//!
//! For every grid cell the training error is measured directly and the
//! expected instability is estimated from the neighborhood profiles implied
//! by `r_i`. The two are combined into an estimate of `E|e_c|` and the cell
//! with the smallest estimate wins.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::bits::{BitMatrix, BitVector};
use crate::error::{Error, Result};
use crate::error_theory::combine_theorem3;
use crate::estimators::{training_error_with, EstimateSet};
use crate::knn::{Neighborhoods, VotingConfig};
use crate::scalar::Scalar;
use crate::stability::{classify_instance_limit, instability_from_profiles, LimitVerdict, EXACT_K_LIMIT};

pub const DEFAULT_MAX_K: usize = 25;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Rule {
    /// `E|e_t| + E|e_s|`.
    Theorem2Bound,
    /// `E|e_t| + E|e_s| - (2/n) E|e_t| E|e_s|`.
    #[default]
    Theorem3Independent,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Theorem2Bound => "theorem2_bound",
            Rule::Theorem3Independent => "theorem3_independent",
        })
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem2_bound" | "theorem2" | "bound" => Ok(Rule::Theorem2Bound),
            "theorem3_independent" | "theorem3" | "independent" => Ok(Rule::Theorem3Independent),
            _ => Err(Error::config(format!("unknown rule {s:?}; expected theorem2_bound or theorem3_independent"))),
        }
    }
}

/// Odd `k` from 1 up to `min(25, n)`.
pub fn default_k_grid(n: usize) -> Vec<usize> {
    (1..=DEFAULT_MAX_K.min(n)).step_by(2).collect()
}

/// `t = 0.1, 0.2, ..., 0.9`.
pub fn default_t_grid<T: Scalar>() -> Vec<T> {
    (1..=9).map(|i| T::from_count(i) / T::from_count(10)).collect()
}

fn instability_with<T: Scalar>(est: &EstimateSet<T>, cfg: &VotingConfig<T>) -> Result<T> {
    if cfg.k() <= EXACT_K_LIMIT {
        let profiles = est.profiles()?;
        return Ok(instability_from_profiles(&profiles, &est.p, cfg.t())?.expected_instability);
    }
    let mut total = T::zero();
    for r in &est.r_clamped {
        if classify_instance_limit(&est.p, r, cfg.t(), cfg.k())? == LimitVerdict::UnstableBoundary {
            total = total + T::half();
        }
    }
    Ok(total)
}

/// Estimated `E|e_s|` for `cfg` from one training draw.
pub fn estimate_expected_instability<T: Scalar>(
    x: &BitMatrix,
    y: &BitVector,
    p: &T,
    cfg: &VotingConfig<T>,
) -> Result<T> {
    Error::check_len(x.n_rows(), y.len())?;
    let hoods = Neighborhoods::build(x, cfg.k())?;
    let est = EstimateSet::from_neighborhoods(&hoods, y, p)?;
    instability_with(&est, cfg)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridRow<T> {
    pub k: usize,
    pub t: T,
    pub e_t_hat: T,
    pub e_s_hat: T,
    pub e_c_t2: T,
    pub e_c_t3: T,
}

impl<T: Scalar> GridRow<T> {
    pub fn estimate(&self, rule: Rule) -> &T {
        match rule {
            Rule::Theorem2Bound => &self.e_c_t2,
            Rule::Theorem3Independent => &self.e_c_t3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectionResult<T> {
    /// Cells ordered by `k`, then `t`.
    pub grid: Vec<GridRow<T>>,
    /// Index of the winning cell in `grid`.
    pub chosen: usize,
    pub rule: Rule,
}

impl<T: Scalar> SelectionResult<T> {
    pub fn chosen_row(&self) -> &GridRow<T> {
        &self.grid[self.chosen]
    }
}

pub fn select<T: Scalar>(
    x: &BitMatrix,
    y: &BitVector,
    p: &T,
    k_grid: &[usize],
    t_grid: &[T],
    rule: Rule,
) -> Result<SelectionResult<T>> {
    Error::check_len(x.n_rows(), y.len())?;
    if k_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::config("selection grids must be nonempty"));
    }
    let mut ks = k_grid.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let mut ts = t_grid.to_vec();
    ts.sort_by(|a, b| a.partial_cmp(b).expect("thresholds are comparable"));
    ts.dedup();
    let mut cells = Vec::with_capacity(ks.len() * ts.len());
    for &k in &ks {
        for t in &ts {
            if *t == T::half() && k % 2 == 0 {
                return Err(Error::config(format!("majority voting (t = 0.5) needs odd k, got {k}")));
            }
            cells.push(VotingConfig::new(k, t.clone())?);
        }
    }
    let n = x.n_rows();
    let per_k: Vec<(Neighborhoods, EstimateSet<T>)> = ks
        .par_iter()
        .map(|&k| {
            let hoods = Neighborhoods::build(x, k)?;
            let est = EstimateSet::from_neighborhoods(&hoods, y, p)?;
            Ok((hoods, est))
        })
        .collect::<Result<_>>()?;

    let grid: Vec<GridRow<T>> = cells
        .par_iter()
        .map(|cfg| {
            let slot = ks.binary_search(&cfg.k()).expect("k taken from grid");
            let (hoods, est) = &per_k[slot];
            let e_t_hat = T::from_count(training_error_with(hoods, y, cfg)?);
            let e_s_hat = instability_with(est, cfg)?;
            let e_c_t2 = e_t_hat.clone() + e_s_hat.clone();
            let e_c_t3 = combine_theorem3(&e_t_hat, &e_s_hat, n)?;
            Ok(GridRow { k: cfg.k(), t: cfg.t().clone(), e_t_hat, e_s_hat, e_c_t2, e_c_t3 })
        })
        .collect::<Result<_>>()?;

    let mut chosen = 0;
    for (i, row) in grid.iter().enumerate().skip(1) {
        if row.estimate(rule) < grid[chosen].estimate(rule) {
            chosen = i;
        }
    }
    Ok(SelectionResult { grid, chosen, rule })
}
