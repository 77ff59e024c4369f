use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::bits::{BitMatrix, BitVector};
use crate::error::{Error, Result};
use crate::rng;

/// Largest arity stored as a dense truth table.
pub const DENSE_ARITY_LIMIT: usize = 20;

#[derive(Clone, Debug)]
enum Table {
    Dense(BitVector),
    Sparse(HashMap<BitVector, bool>),
}

/// The deterministic component `f: {0,1}^r -> {0,1}` as an explicit table.
///
/// Dense tables cover all `2^r` inputs. Sparse tables cover only the inputs
/// they were built over, and evaluating anything else is a domain error.
#[derive(Clone, Debug)]
pub struct TargetFunction {
    arity: usize,
    table: Table,
}

impl TargetFunction {
    /// Dense table; `table[i]` is `f` at the input whose index is `i`.
    pub fn from_table(arity: usize, table: BitVector) -> Result<Self> {
        if arity == 0 || arity > DENSE_ARITY_LIMIT {
            return Err(Error::config(format!(
                "dense truth tables support 1 <= r <= {DENSE_ARITY_LIMIT}, got {arity}"
            )));
        }
        Error::check_len(1 << arity, table.len())?;
        Ok(TargetFunction { arity, table: Table::Dense(table) })
    }

    /// Sparse table over explicitly listed inputs.
    pub fn from_pairs<'a>(arity: usize, pairs: impl IntoIterator<Item = (&'a BitVector, bool)>) -> Result<Self> {
        let mut map = HashMap::new();
        for (v, value) in pairs {
            Error::check_len(arity, v.len())?;
            if let Some(prev) = map.insert(v.clone(), value) {
                if prev != value {
                    return Err(Error::config(format!("conflicting values for input {v}")));
                }
            }
        }
        Ok(TargetFunction { arity, table: Table::Sparse(map) })
    }

    /// Tabulates `family` over all of `{0,1}^r`.
    pub fn from_family(family: &Family, arity: usize) -> Result<Self> {
        if arity == 0 || arity > DENSE_ARITY_LIMIT {
            return Err(Error::config(format!(
                "family {family} needs an explicit support when r > {DENSE_ARITY_LIMIT}"
            )));
        }
        family.check_arity(arity)?;
        let table = (0..1u64 << arity).map(|i| family.value(&BitVector::from_index(i, arity), i)).collect();
        Ok(TargetFunction { arity, table: Table::Dense(table) })
    }

    /// Dense when `r` allows it, otherwise a sparse table over the rows of `support`.
    pub fn from_family_on(family: &Family, support: &BitMatrix) -> Result<Self> {
        let arity = support.n_cols();
        if arity <= DENSE_ARITY_LIMIT {
            return TargetFunction::from_family(family, arity);
        }
        family.check_arity(arity)?;
        let values: Vec<bool> = support.rows().iter().map(|v| family.value(v, rng::derive(0, v.words()))).collect();
        TargetFunction::from_pairs(arity, support.rows().iter().zip(values))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.table, Table::Dense(_))
    }

    pub fn evaluate(&self, v: &BitVector) -> Result<bool> {
        Error::check_len(self.arity, v.len())?;
        match &self.table {
            Table::Dense(table) => {
                let idx = v.to_index().expect("dense arity fits in one word") as usize;
                Ok(table.get(idx))
            }
            Table::Sparse(map) => {
                map.get(v).copied().ok_or_else(|| Error::Domain(format!("{v} is not in the table's support")))
            }
        }
    }

    /// `f` applied to every row.
    pub fn evaluate_all(&self, x: &BitMatrix) -> Result<BitVector> {
        let values = x.rows().iter().map(|v| self.evaluate(v)).collect::<Result<Vec<bool>>>()?;
        Ok(BitVector::from_bools(&values))
    }
}

/// Built-in target families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Constant(bool),
    /// Copies attribute `j` (zero-based).
    Projection(usize),
    Parity,
    /// 1 when strictly more than half the attributes are 1.
    Majority,
    /// Independent fair coin per input, derived from the seed.
    Random(u64),
}

impl Family {
    fn check_arity(&self, arity: usize) -> Result<()> {
        match self {
            Family::Projection(j) if *j >= arity => {
                Err(Error::config(format!("projection attribute {j} out of range for r = {arity}")))
            }
            _ => Ok(()),
        }
    }

    /// `key` identifies the input for the random family.
    fn value(&self, v: &BitVector, key: u64) -> bool {
        match self {
            Family::Constant(b) => *b,
            Family::Projection(j) => v.get(*j),
            Family::Parity => v.hamming_length() % 2 == 1,
            Family::Majority => 2 * v.hamming_length() > v.len(),
            Family::Random(seed) => rng::stream(*seed, &[rng::label::TARGET, key]).random(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Constant(false) => f.write_str("constant0"),
            Family::Constant(true) => f.write_str("constant1"),
            Family::Projection(j) => write!(f, "projection{j}"),
            Family::Parity => f.write_str("parity"),
            Family::Majority => f.write_str("majority"),
            Family::Random(seed) => write!(f, "random{seed}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts `constant0`, `constant1`, `projection<j>`, `parity`,
    /// `majority` and `random<seed>` (bare `random` means seed 0).
    fn from_str(s: &str) -> Result<Self> {
        let parse_suffix = |rest: &str| -> Result<u64> {
            if rest.is_empty() {
                Ok(0)
            } else {
                rest.parse().map_err(|_| Error::config(format!("bad family suffix in {s:?}")))
            }
        };
        match s {
            "constant0" => Ok(Family::Constant(false)),
            "constant1" => Ok(Family::Constant(true)),
            "parity" => Ok(Family::Parity),
            "majority" => Ok(Family::Majority),
            _ => {
                if let Some(rest) = s.strip_prefix("projection") {
                    Ok(Family::Projection(parse_suffix(rest)? as usize))
                } else if let Some(rest) = s.strip_prefix("random") {
                    Ok(Family::Random(parse_suffix(rest)?))
                } else {
                    Err(Error::config(format!("unknown target family {s:?}")))
                }
            }
        }
    }
}
