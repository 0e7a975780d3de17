//! Scalar types for edge densities and density bounds.
//!
//! Densities are ratios of small non-negative integers, so every scalar only
//! needs to be constructible from such a ratio and closed under the field
//! operations. Exact work uses [`Ratio<i64>`]; `f64`/`f32` are accepted for
//! quick approximate reporting.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Num;

pub trait Scalar: Num + PartialOrd + Clone + Debug + Display {
    /// The value `num / den`. `den` must be non-zero.
    fn from_ratio(num: u64, den: u64) -> Self;

    fn from_u64(v: u64) -> Self {
        Self::from_ratio(v, 1)
    }
}

impl Scalar for f64 {
    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {
    fn from_ratio(num: u64, den: u64) -> Self {
        (num as f64 / den as f64) as f32
    }
}

impl Scalar for Ratio<i64> {
    fn from_ratio(num: u64, den: u64) -> Self {
        Ratio::new(num as i64, den as i64)
    }
}

impl Scalar for Ratio<BigInt> {
    fn from_ratio(num: u64, den: u64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Largest of a non-empty sequence under `PartialOrd`.
pub(crate) fn max_of<S: Scalar>(values: impl IntoIterator<Item = S>) -> Option<S> {
    values.into_iter().fold(None, |acc, v| match acc {
        Some(a) if a >= v => Some(a),
        _ => Some(v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios_reduce() {
        let r = <Ratio<i64> as Scalar>::from_ratio(6, 4);
        assert_eq!(r, Ratio::new(3, 2));
        assert_eq!(<f64 as Scalar>::from_ratio(6, 4), 1.5);
    }

    #[test]
    fn max_of_picks_largest() {
        let m = max_of([Ratio::new(1i64, 2), Ratio::new(3, 2), Ratio::new(1, 1)]);
        assert_eq!(m, Some(Ratio::new(3, 2)));
        assert_eq!(max_of(Vec::<f64>::new()), None);
    }
}
