//! Input layouts with known neighborhood structure.
//!
//! A thermometer code (row `i` has its first `i` bits set) makes the Hamming
//! distance between rows equal to the difference of their indices, so every
//! k-nearest neighborhood is a contiguous window of the chain. Alternating
//! the target along the chain makes every odd window balanced, the least
//! stable configuration for majority voting; a constant target makes every
//! window unanimous, the most stable one.

use crate::bits::{BitMatrix, BitVector};
use crate::black_box::TargetFunction;
use crate::error::{Error, Result};

/// Inputs together with the target evaluated on them.
#[derive(Clone, Debug)]
pub struct Layout {
    pub inputs: BitMatrix,
    pub target: TargetFunction,
}

impl Layout {
    pub fn truth(&self) -> BitVector {
        self.target.evaluate_all(&self.inputs).expect("target defined on its own inputs")
    }
}

fn thermometer(i: usize, width: usize) -> BitVector {
    (0..width).map(|j| j < i).collect()
}

/// `n` rows of width `max(n - 1, 1)` with `dist(row i, row j) = |i - j|`.
pub fn thermometer_chain(n: usize) -> Result<BitMatrix> {
    if n == 0 {
        return Err(Error::config("chain needs at least one row"));
    }
    let width = (n - 1).max(1);
    BitMatrix::new((0..n).map(|i| thermometer(i, width)).collect())
}

/// Chain whose target alternates 0, 1, 0, ... (parity of the thermometer code).
/// Every odd window of size `k` holds `(k - 1) / 2` or `(k + 1) / 2` ones.
pub fn balanced_chain(n: usize) -> Result<Layout> {
    let inputs = thermometer_chain(n)?;
    let values: Vec<bool> = (0..n).map(|i| i % 2 == 1).collect();
    let target = TargetFunction::from_pairs(inputs.n_cols(), inputs.rows().iter().zip(values))?;
    Ok(Layout { inputs, target })
}

/// Chain with a constant target.
pub fn constant_chain(n: usize, value: bool) -> Result<Layout> {
    let inputs = thermometer_chain(n)?;
    let target = TargetFunction::from_pairs(inputs.n_cols(), inputs.rows().iter().map(|v| (v, value)))?;
    Ok(Layout { inputs, target })
}

/// A balanced chain and a constant-0 chain side by side.
///
/// Rows `0..n_balanced` form the alternating chain and the remaining
/// `n_constant` rows the constant chain. Each chain carries a block of `gap`
/// marker bits, so rows of different chains are at distance at least
/// `2 * gap`; with `2 * gap >= k`, `k`-neighborhoods never cross chains.
pub fn mixed_chains(n_balanced: usize, n_constant: usize, gap: usize) -> Result<Layout> {
    if n_balanced == 0 || n_constant == 0 || gap == 0 {
        return Err(Error::config("mixed layout needs two non-empty chains and gap >= 1"));
    }
    let wa = n_balanced.saturating_sub(1);
    let wb = n_constant.saturating_sub(1);
    let row = |chain_a: bool, i: usize| -> BitVector {
        let (a, b) = if chain_a {
            (thermometer(i, wa), BitVector::zeros(wb))
        } else {
            (BitVector::zeros(wa), thermometer(i, wb))
        };
        let marker = if chain_a {
            BitVector::ones(gap).concat(&BitVector::zeros(gap))
        } else {
            BitVector::zeros(gap).concat(&BitVector::ones(gap))
        };
        a.concat(&b).concat(&marker)
    };
    let mut rows = Vec::with_capacity(n_balanced + n_constant);
    let mut values = Vec::with_capacity(n_balanced + n_constant);
    for i in 0..n_balanced {
        rows.push(row(true, i));
        values.push(i % 2 == 1);
    }
    for i in 0..n_constant {
        rows.push(row(false, i));
        values.push(false);
    }
    let inputs = BitMatrix::new(rows)?;
    let target = TargetFunction::from_pairs(inputs.n_cols(), inputs.rows().iter().zip(values))?;
    Ok(Layout { inputs, target })
}
