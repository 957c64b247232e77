//! Exact-length discrete Fourier transforms of real signals.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::scalar::Scalar;

/// Forward and inverse DFT plans for one length. Any length is supported
/// (mixed radix, Bluestein for large primes); signals are never padded.
/// Plans are immutable and may be shared across threads.
#[derive(Clone)]
pub struct Fourier<T: Scalar> {
    len: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Scalar> Fourier<T> {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "transform length must be positive");
        let mut planner = FftPlanner::new();
        Self {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Unnormalized forward DFT: `X_k = sum_j x_j exp(-2 pi i jk / n)`.
    pub fn forward(&self, x: &[T]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.len, "transform length mismatch");
        let mut buf: Vec<Complex<T>> = x.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.forward.process(&mut buf);
        buf
    }

    /// Inverse DFT scaled by `1/n`, keeping the real part.
    pub fn inverse_real(&self, mut spectrum: Vec<Complex<T>>) -> Vec<T> {
        assert_eq!(spectrum.len(), self.len, "transform length mismatch");
        self.inverse.process(&mut spectrum);
        let scale = T::one() / T::from_count(self.len);
        spectrum.into_iter().map(|c| c.re * scale).collect()
    }
}

impl<T: Scalar> fmt::Debug for Fourier<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fourier").field("len", &self.len).finish()
    }
}

/// `sqrt(sum |c_k|^2)` with overflow-safe scaling.
pub(crate) fn complex_norm<T: Scalar>(values: &[Complex<T>]) -> T {
    let scale = values
        .iter()
        .fold(T::zero(), |m, c| m.max(c.re.abs()).max(c.im.abs()));
    if scale == T::zero() || !scale.is_finite() {
        return scale;
    }
    let sum = values.iter().fold(T::zero(), |acc, c| {
        let (r, i) = (c.re / scale, c.im / scale);
        acc + r * r + i * i
    });
    scale * sum.sqrt()
}
