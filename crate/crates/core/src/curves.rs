//! Closed-form curves over the noise rate `p`.
//!
//! * `p_alpha`, `p_beta`: cross-validation error rates of the oracle and the
//!   memorizer.
//! * `inst_best_k{1,3,5,inf}`: instability rate `2P(1-P)` when every
//!   neighborhood is unanimous.
//! * `inst_worst_k{1,3,5,inf}`: the same when every neighborhood is one vote
//!   short of a tie.
//! * `inst_avg_m1`, `inst_avg_m3`: average-case instability for `k = 1` and for
//!   `k = 3` over an equal mix of the four 3-neighborhood shapes.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::error_theory::{p_alpha, p_beta};
use crate::scalar::Scalar;
use crate::stability::{
    best_case_pk, flip_probability, instability_from_profiles, worst_case_pk, KSize, NeighborhoodProfile,
};

/// Number of intervals in the `p` grid; points are `i / GRID_STEPS`.
pub const GRID_STEPS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Series {
    PAlpha,
    PBeta,
    Best(KSize),
    Worst(KSize),
    AvgM1,
    AvgM3,
}

impl Series {
    pub const ALL: [Series; 12] = [
        Series::PAlpha,
        Series::PBeta,
        Series::Best(KSize::Finite(1)),
        Series::Best(KSize::Finite(3)),
        Series::Best(KSize::Finite(5)),
        Series::Best(KSize::Infinite),
        Series::Worst(KSize::Finite(1)),
        Series::Worst(KSize::Finite(3)),
        Series::Worst(KSize::Finite(5)),
        Series::Worst(KSize::Infinite),
        Series::AvgM1,
        Series::AvgM3,
    ];

    pub fn value<T: Scalar>(&self, p: &T) -> Result<T> {
        match self {
            Series::PAlpha => Ok(p_alpha(p)),
            Series::PBeta => Ok(p_beta(p)),
            Series::Best(k) => Ok(flip_probability(&best_case_pk(*k, p)?)),
            Series::Worst(k) => Ok(flip_probability(&worst_case_pk(*k, p)?)),
            Series::AvgM1 => Ok(p_beta(p)),
            Series::AvgM3 => {
                let shapes = [0, 1, 2, 3].map(|s| NeighborhoodProfile::new(3, s).expect("s <= 3"));
                let r = instability_from_profiles(&shapes, p, &T::half())?;
                Ok(r.expected_instability / T::from_count(shapes.len()))
            }
        }
    }
}

fn k_suffix(k: &KSize) -> String {
    match k {
        KSize::Finite(k) => k.to_string(),
        KSize::Infinite => "inf".to_string(),
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Series::PAlpha => f.write_str("p_alpha"),
            Series::PBeta => f.write_str("p_beta"),
            Series::Best(k) => write!(f, "inst_best_k{}", k_suffix(k)),
            Series::Worst(k) => write!(f, "inst_worst_k{}", k_suffix(k)),
            Series::AvgM1 => f.write_str("inst_avg_m1"),
            Series::AvgM3 => f.write_str("inst_avg_m3"),
        }
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Series::ALL
            .iter()
            .find(|c| c.to_string() == s)
            .copied()
            .ok_or_else(|| Error::config(format!("unknown curve series {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint<T> {
    pub p: T,
    pub series: Series,
    pub value: T,
}

/// `p = i / GRID_STEPS` for `i = 0..=GRID_STEPS`.
pub fn p_grid<T: Scalar>() -> Vec<T> {
    (0..=GRID_STEPS).map(|i| T::from_count(i) / T::from_count(GRID_STEPS)).collect()
}

/// Every series at every grid point, grouped by series.
pub fn figure_curves<T: Scalar>() -> Result<Vec<CurvePoint<T>>> {
    let grid = p_grid::<T>();
    let mut out = Vec::with_capacity(grid.len() * Series::ALL.len());
    for series in Series::ALL {
        for p in &grid {
            out.push(CurvePoint { p: p.clone(), series, value: series.value(p)? });
        }
    }
    Ok(out)
}
