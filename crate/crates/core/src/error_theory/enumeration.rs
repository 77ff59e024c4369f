use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::error_theory::ExpectedErrors;
use crate::knn::TrainingPredictor;
use crate::scalar::Scalar;

/// Largest row count accepted by [`enumerate_expected_errors`]; it visits
/// `4^n` noise pairs.
pub const ENUMERATION_LIMIT: usize = 10;

/// Exact expected error lengths, summing over every pair of noise vectors
/// `(z1, z2)` weighted by `p^|z| (1-p)^(n-|z|)`.
pub fn enumerate_expected_errors<T: Scalar>(
    model: &dyn TrainingPredictor,
    truth: &BitVector,
    p: &T,
) -> Result<ExpectedErrors<T>> {
    let n = truth.len();
    Error::check_len(model.n(), n)?;
    if n > ENUMERATION_LIMIT {
        return Err(Error::config(format!("exhaustive enumeration supports n <= {ENUMERATION_LIMIT}, got {n}")));
    }
    if !p.is_unit_interval() {
        return Err(Error::config("probability must lie in [0, 1]"));
    }
    let q = T::one() - p.clone();
    let draws: Vec<(BitVector, BitVector, T)> = (0..1u64 << n)
        .map(|code| {
            let z = BitVector::from_index(code, n);
            let ones = z.hamming_length();
            let weight = p.powi(ones) * q.powi(n - ones);
            let y = z.xor(truth).expect("same length");
            let pred = model.predict_training(&y);
            (y, pred, weight)
        })
        .collect();

    let (mut e_c, mut e_t, mut e_s) = (T::zero(), T::zero(), T::zero());
    for (y1, pred1, w1) in &draws {
        let train_err = T::from_count(pred1.hamming_distance(y1)?);
        e_t = e_t + w1.clone() * train_err;
        for (y2, pred2, w2) in &draws {
            let w = w1.clone() * w2.clone();
            e_c = e_c + w.clone() * T::from_count(pred1.hamming_distance(y2)?);
            e_s = e_s + w * T::from_count(pred1.hamming_distance(pred2)?);
        }
    }
    Ok(ExpectedErrors { e_c, e_t, e_s, n })
}
