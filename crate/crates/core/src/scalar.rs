//! Scalar abstraction shared by every closed-form and probability routine.
//!
//! The exact vote-flip computations only need ring operations and an order,
//! so the same code runs on `f32`, `f64` and arbitrary-precision rationals.
//! Rationals give an exact route for the polynomial identities; floats are
//! what the Monte Carlo side and the CLI use.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, Num, ToPrimitive};

pub trait Scalar: Clone + Debug + PartialOrd + Num + FromPrimitive + ToPrimitive + Send + Sync + 'static {
    /// Largest gap at which two values are considered the same integer
    /// boundary, e.g. when testing whether `t * k` is a whole vote count.
    /// Zero for exact types.
    fn integer_slack() -> Self;

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Lossy conversion used for reporting and rounding.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_unit_interval(&self) -> bool {
        *self >= Self::zero() && *self <= Self::one()
    }

    fn abs_diff(&self, other: &Self) -> Self {
        if self >= other {
            self.clone() - other.clone()
        } else {
            other.clone() - self.clone()
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn clamp_unit(self) -> Self {
        Self::max_of(Self::zero(), Self::min_of(Self::one(), self))
    }

    fn powi(&self, exp: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    fn integer_slack() -> Self {
        1e-9
    }
    fn powi(&self, exp: usize) -> Self {
        f64::powi(*self, exp as i32)
    }
}

impl Scalar for f32 {
    fn integer_slack() -> Self {
        1e-4
    }
    fn powi(&self, exp: usize) -> Self {
        f32::powi(*self, exp as i32)
    }
}

impl Scalar for BigRational {
    fn integer_slack() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
}

impl Scalar for Rational64 {
    fn integer_slack() -> Self {
        Rational64::from_integer(0)
    }
}

/// Exact rational `num / den`.
pub fn exact(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_is_exact_for_rationals() {
        assert_eq!(BigRational::half(), exact(1, 2));
        assert_eq!(f64::half(), 0.5);
    }

    #[test]
    fn powi_matches_repeated_product() {
        assert_eq!(exact(1, 10).powi(3), exact(1, 1000));
        assert_eq!(Scalar::powi(&0.5f64, 4), 0.0625);
        assert_eq!(exact(3, 7).powi(0), exact(1, 1));
    }

    #[test]
    fn clamp_and_order_helpers() {
        assert_eq!((-0.25f64).clamp_unit(), 0.0);
        assert_eq!(1.25f64.clamp_unit(), 1.0);
        assert_eq!(exact(1, 3).abs_diff(&exact(1, 2)), exact(1, 6));
        assert!(exact(1, 2).is_unit_interval());
        assert!(!exact(3, 2).is_unit_interval());
    }
}
