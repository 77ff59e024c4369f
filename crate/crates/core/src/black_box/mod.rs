//! The noisy data source `y = f(v) xor z`.

mod dataset;
mod experiment;
pub mod geometry;
mod repeat;
mod target;

pub use dataset::Dataset;
pub(crate) use experiment::check_probability;
pub use experiment::{draw_experiment, draw_noise, paired_outputs, sample_inputs, Experiment, NoiseSpec};
pub use repeat::{repeat_input_bound, InputDistribution};
pub use target::{Family, TargetFunction, DENSE_ARITY_LIMIT};

use crate::bits::BitMatrix;
use crate::error::Result;

/// `f` applied to every row of `x`.
pub fn evaluate(f: &TargetFunction, x: &BitMatrix) -> Result<crate::bits::BitVector> {
    f.evaluate_all(x)
}
