//! Numeric traits the library is generic over.
//!
//! Scoring code (extractors, PageRank, embeddings) runs on any [`Score`]
//! float. Evaluation metrics run on any [`MetricValue`], which includes
//! exact rationals so that precision and recall can be checked without
//! rounding.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_rational::{BigRational, Ratio};
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Floating point type used for extractor scores and embedding math.
pub trait Score:
    Float + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable as float")
    }

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Score for f32 {}
impl Score for f64 {}

/// A field element that metrics can be computed in: floats or exact ratios.
pub trait MetricValue: Num + Clone + PartialOrd + Debug {
    fn from_count(n: usize) -> Self;

    fn to_f64_lossy(&self) -> f64;

    /// `num / den`, or zero when `den == 0`.
    fn ratio(num: usize, den: usize) -> Self {
        if den == 0 {
            Self::zero()
        } else {
            Self::from_count(num) / Self::from_count(den)
        }
    }

    /// Harmonic mean of precision and recall, zero when both are zero.
    fn harmonic(p: &Self, r: &Self) -> Self {
        let sum = p.clone() + r.clone();
        if sum == Self::zero() {
            Self::zero()
        } else {
            let two = Self::one() + Self::one();
            two * p.clone() * r.clone() / sum
        }
    }

    fn mean(values: &[Self]) -> Self {
        if values.is_empty() {
            return Self::zero();
        }
        let total = values
            .iter()
            .cloned()
            .fold(Self::zero(), |acc, v| acc + v);
        total / Self::from_count(values.len())
    }
}

impl MetricValue for f32 {
    fn from_count(n: usize) -> Self {
        n as f32
    }
    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }
}

impl MetricValue for f64 {
    fn from_count(n: usize) -> Self {
        n as f64
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl MetricValue for Ratio<i64> {
    fn from_count(n: usize) -> Self {
        Ratio::from_integer(i64::try_from(n).expect("count fits in i64"))
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl MetricValue for Ratio<i128> {
    fn from_count(n: usize) -> Self {
        Ratio::from_integer(n as i128)
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl MetricValue for BigRational {
    fn from_count(n: usize) -> Self {
        BigRational::from_integer(n.into())
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}
