//! Sampled signals and extrema analysis.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{l2_norm, Scalar};

/// A uniformly sampled, finite, real-valued sequence.
///
/// Samples sit on the grid `x_j = j / (n - 1)` and are extended periodically
/// outside `[0, 1]` by every convolution in this crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "Vec<T>",
    into = "Vec<T>",
    bound = "T: Scalar + Serialize + for<'a> Deserialize<'a>"
)]
pub struct Signal<T> {
    samples: Vec<T>,
}

impl<T: Scalar> Signal<T> {
    pub fn new(samples: Vec<T>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Self { samples })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "signal length must be positive");
        Self {
            samples: vec![T::zero(); n],
        }
    }

    /// Wraps engine output. Debug builds still check finiteness.
    pub(crate) fn from_engine(samples: Vec<T>) -> Self {
        debug_assert!(!samples.is_empty());
        debug_assert!(samples.iter().all(|v| v.is_finite()));
        Self { samples }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> T) -> Result<Self> {
        Self::new((0..n).map(f).collect())
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn norm(&self) -> T {
        l2_norm(&self.samples)
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|v| *v == T::zero())
    }

    /// Grid coordinate of sample `j`.
    pub fn grid_point(&self, j: usize) -> T {
        grid_point(j, self.samples.len())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self::from_engine(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| a - b)
                .collect(),
        ))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self::from_engine(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| a + b)
                .collect(),
        ))
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self::from_engine(self.samples.iter().map(|&v| v * factor).collect())
    }

    pub(crate) fn check_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(())
    }
}

impl<T> Deref for Signal<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.samples
    }
}

impl<T: Scalar> TryFrom<Vec<T>> for Signal<T> {
    type Error = Error;

    fn try_from(samples: Vec<T>) -> Result<Self> {
        Self::new(samples)
    }
}

impl<T> From<Signal<T>> for Vec<T> {
    fn from(signal: Signal<T>) -> Self {
        signal.samples
    }
}

pub(crate) fn grid_point<T: Scalar>(j: usize, n: usize) -> T {
    if n < 2 {
        return T::zero();
    }
    T::from_count(j) / T::from_count(n - 1)
}

/// Positions of the strict interior extrema of `samples`.
///
/// Runs of equal values are collapsed first; a run whose neighbours are both
/// lower (or both higher) is one extremum, located at the run's midpoint.
/// Runs touching either endpoint are never extrema.
pub fn extrema_positions<T: Scalar>(samples: &[T]) -> Vec<usize> {
    let n = samples.len();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && samples[end + 1] == samples[start] {
            end += 1;
        }
        runs.push((start, end));
        start = end + 1;
    }

    let mut positions = Vec::new();
    for w in runs.windows(3) {
        let (prev, (a, b), next) = (samples[w[0].0], w[1], samples[w[2].0]);
        let v = samples[a];
        if (v > prev && v > next) || (v < prev && v < next) {
            positions.push((a + b) / 2);
        }
    }
    positions
}

/// Number of strict interior local maxima and minima, plateaus counted once.
pub fn count_extrema<T: Scalar>(samples: &[T]) -> usize {
    extrema_positions(samples).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_sequence() {
        assert_eq!(count_extrema(&[0.0, 1.0, 0.0, 1.0, 0.0]), 3);
        assert_eq!(extrema_positions(&[0.0, 1.0, 0.0, 1.0, 0.0]), vec![1, 2, 3]);
    }

    #[test]
    fn constant_and_monotone_have_none() {
        assert_eq!(count_extrema(&[2.5; 17]), 0);
        assert_eq!(count_extrema(&[0.0, 1.0, 2.0, 3.0]), 0);
        assert_eq!(count_extrema(&[4.0]), 0);
        assert_eq!(count_extrema::<f64>(&[]), 0);
    }

    #[test]
    fn plateau_counts_once() {
        assert_eq!(count_extrema(&[0.0, 1.0, 1.0, 1.0, 0.0]), 1);
        assert_eq!(extrema_positions(&[0.0, 1.0, 1.0, 1.0, 0.0]), vec![2]);
        // A step is not an extremum.
        assert_eq!(count_extrema(&[0.0, 1.0, 1.0, 2.0]), 0);
        // Plateau at the boundary is not counted.
        assert_eq!(count_extrema(&[1.0, 1.0, 0.0, 2.0]), 1);
    }

    #[test]
    fn sinusoid_extrema_count() {
        for k in [1usize, 3, 16, 40] {
            let n = 4096;
            let s: Vec<f64> = (0..n)
                .map(|j| (2.0 * std::f64::consts::PI * k as f64 * grid_point::<f64>(j, n)).sin())
                .collect();
            let c = count_extrema(&s);
            assert!(c.abs_diff(2 * k) <= 1, "k={k} count={c}");
        }
    }

    #[test]
    fn signal_validation() {
        assert_eq!(Signal::<f64>::new(vec![]), Err(Error::EmptySignal));
        assert_eq!(
            Signal::new(vec![1.0, f64::NAN]),
            Err(Error::NonFiniteSample { index: 1 })
        );
        assert!(Signal::new(vec![1.0f32]).is_ok());
    }

    #[test]
    fn serde_rejects_non_finite_free_input() {
        let s: Signal<f64> = serde_json::from_str("[1.0, 2.0]").unwrap();
        assert_eq!(s.len(), 2);
        assert!(serde_json::from_str::<Signal<f64>>("[]").is_err());
    }
}
