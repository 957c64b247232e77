//! Filter construction, filter-length estimation, and the spectrum of the
//! circulant convolution operator.
//!
//! The convolution matrix `W` is never materialized. A [`Filter`] holds the
//! `2L + 1` window weights; a [`FilterSpectrum`] holds the eigenvalues of `W`
//! (the DFT of the weights embedded on the circle) and the per-frequency gains
//! `a_k = 1 - lambda_k` of one `I - W` step.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::signal::extrema_positions;
use crate::spectral::Fourier;

/// Discrete, even, nonnegative, compactly supported window with unit sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Filter<T> {
    half_support: usize,
    weights: Vec<T>,
}

impl<T: Scalar> Filter<T> {
    /// Validates and renormalizes `2L + 1` weights `w(-L) ..= w(L)`.
    pub fn from_weights(mut weights: Vec<T>) -> Result<Self> {
        if weights.len().is_multiple_of(2) {
            return Err(Error::InvalidFilter(format!(
                "expected an odd number of weights, got {}",
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < T::zero()) {
            return Err(Error::InvalidFilter(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let len = weights.len();
        if (0..len / 2).any(|i| weights[i] != weights[len - 1 - i]) {
            return Err(Error::InvalidFilter("weights are not even".into()));
        }
        let sum = weights.iter().fold(T::zero(), |acc, &w| acc + w);
        if sum <= T::zero() {
            return Err(Error::InvalidFilter("weights sum to zero".into()));
        }
        for w in &mut weights {
            *w /= sum;
        }
        Ok(Self {
            half_support: len / 2,
            weights,
        })
    }

    /// The identity filter: a single unit weight at the origin.
    pub fn delta() -> Self {
        Self {
            half_support: 0,
            weights: vec![T::one()],
        }
    }

    pub fn half_support(&self) -> usize {
        self.half_support
    }

    /// Weights `w(-L) ..= w(L)`.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `w(k)`, zero outside the support.
    pub fn weight(&self, k: isize) -> T {
        let l = self.half_support as isize;
        if k.abs() > l {
            T::zero()
        } else {
            self.weights[(k + l) as usize]
        }
    }

    /// Smallest signal length the filter can be embedded in.
    pub fn min_signal_len(&self) -> usize {
        2 * self.half_support + 2
    }

    /// Length-`n` first column of the circulant operator: `w(k)` at index `k mod n`.
    pub fn embed(&self, n: usize) -> Result<Vec<T>> {
        self.check_fits(n)?;
        let mut column = vec![T::zero(); n];
        let l = self.half_support as isize;
        for k in -l..=l {
            column[k.rem_euclid(n as isize) as usize] = self.weight(k);
        }
        Ok(column)
    }

    pub(crate) fn check_fits(&self, n: usize) -> Result<()> {
        if n < self.min_signal_len() {
            return Err(Error::FilterTooWide {
                half_support: self.half_support,
                required: self.min_signal_len(),
                n,
            });
        }
        Ok(())
    }
}

/// Self-convolution of a symmetric triangular window, with half-support exactly `half_support`.
///
/// The triangle spans `L + 1` samples (so its own half-width is `L / 2`,
/// centred on a half sample when `L` is odd) and its autocorrelation spans
/// `2L + 1`. The filter's spectrum is the squared magnitude of the
/// triangle's, hence lies in `[0, 1]`. Weights are exact integers before the
/// final normalization, which keeps the symmetry exact.
pub fn build_filter<T: Scalar>(half_support: usize) -> Filter<T> {
    assert!(half_support >= 1, "filter half-support must be at least 1");
    let l = half_support;
    // Triangle of L + 1 samples = box(b1) * box(b2).
    let (b1, b2) = if l.is_multiple_of(2) {
        (l / 2 + 1, l / 2 + 1)
    } else {
        (l.div_ceil(2), l.div_ceil(2) + 1)
    };
    let mut seq = vec![1u128];
    for width in [b1, b2, b1, b2] {
        seq = box_convolve(&seq, width);
    }
    debug_assert_eq!(seq.len(), 2 * l + 1);

    let total: u128 = seq.iter().sum();
    let total_t = T::from_u128(total).expect("filter normalization representable");
    // Mirror the left half so that even symmetry is exact after rounding.
    let mut weights: Vec<T> = seq[..=l]
        .iter()
        .map(|&v| T::from_u128(v).expect("filter weight representable") / total_t)
        .collect();
    for k in (0..l).rev() {
        weights.push(weights[k]);
    }
    Filter {
        half_support: l,
        weights,
    }
}

/// Full linear convolution with a box of `width` ones, via a running sum.
fn box_convolve(x: &[u128], width: usize) -> Vec<u128> {
    let out_len = x.len() + width - 1;
    let mut out = Vec::with_capacity(out_len);
    let mut window = 0u128;
    for i in 0..out_len {
        if i < x.len() {
            window += x[i];
        }
        if i >= width {
            window -= x[i - width];
        }
        out.push(window);
    }
    out
}

/// Statistic of the extrema spacing used to size the filter.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GapStatistic {
    /// `n / (number of extrema)`.
    #[default]
    Average,
    /// 10th percentile of the gaps between consecutive extrema.
    AlmostMin,
    /// Arbitrary percentile in `[0, 100]` of the gaps.
    Percentile(f64),
}

impl fmt::Display for GapStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapStatistic::Average => f.write_str("ave"),
            GapStatistic::AlmostMin => f.write_str("almost_min"),
            GapStatistic::Percentile(p) => write!(f, "p{p}"),
        }
    }
}

impl FromStr for GapStatistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ave" => Ok(GapStatistic::Average),
            "almost_min" => Ok(GapStatistic::AlmostMin),
            // Bare "1" is read as the 1st percentile of the gaps.
            "1" => Ok(GapStatistic::Percentile(1.0)),
            other => {
                let p = other
                    .strip_prefix('p')
                    .and_then(|p| p.parse::<f64>().ok())
                    .filter(|p| (0.0..=100.0).contains(p))
                    .ok_or_else(|| {
                        Error::InvalidConfig(format!(
                            "alpha must be `ave`, `almost_min` or `pN` with 0 <= N <= 100, got `{s}`"
                        ))
                    })?;
                Ok(GapStatistic::Percentile(p))
            }
        }
    }
}

impl TryFrom<String> for GapStatistic {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GapStatistic> for String {
    fn from(g: GapStatistic) -> Self {
        g.to_string()
    }
}

/// Linear-interpolation percentile of an ascending slice.
fn percentile_sorted(sorted: &[f64], p: f64) -> f64 {
    let rank = p / 100.0 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Filter half-support `L` derived from the spacing of the signal's extrema.
///
/// With `m` the chosen gap statistic, `L = 2 * round(xi * m)` (half away from
/// zero), at least 1 and at most `(n - 2) / 2` so the window fits the circle.
/// The factor 2 puts the first spectral zero of the self-convolved triangle at
/// the dominant oscillation period, so that oscillation passes through `I - W`
/// almost unattenuated.
pub fn estimate_filter_length<T: Scalar>(
    samples: &[T],
    xi: T,
    statistic: GapStatistic,
) -> Result<usize> {
    Ok(filter_length_estimate(samples, xi, statistic)?.length)
}

/// Filter length plus whether the cap `(n - 2) / 2` was hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterLength {
    pub length: usize,
    /// The unclamped estimate did not fit the circle.
    pub saturated: bool,
}

/// As [`estimate_filter_length`], also reporting saturation.
pub fn filter_length_estimate<T: Scalar>(
    samples: &[T],
    xi: T,
    statistic: GapStatistic,
) -> Result<FilterLength> {
    if !(xi > T::zero() && xi.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "xi must be positive, got {xi}"
        )));
    }
    let positions = extrema_positions(samples);
    let k = positions.len();
    if k < 2 {
        return Err(Error::InsufficientExtrema { found: k });
    }
    let n = samples.len();
    let spacing = match statistic {
        GapStatistic::Average => n as f64 / k as f64,
        GapStatistic::AlmostMin | GapStatistic::Percentile(_) => {
            let mut gaps: Vec<f64> = positions.windows(2).map(|w| (w[1] - w[0]) as f64).collect();
            gaps.sort_by(f64::total_cmp);
            let p = match statistic {
                GapStatistic::Percentile(p) => p,
                _ => 10.0,
            };
            percentile_sorted(&gaps, p)
        }
    };
    let scaled = (xi.to_f64_lossy() * spacing).round();
    let cap = (n - 2) / 2;
    let raw = if scaled.is_finite() && scaled <= cap as f64 {
        2 * scaled as usize
    } else {
        usize::MAX
    };
    Ok(FilterLength {
        length: raw.clamp(1, cap),
        saturated: raw > cap,
    })
}

/// Eigenvalues of the circulant operator and the derived gains `a_k = 1 - lambda_k`.
#[derive(Debug, Clone)]
pub struct FilterSpectrum<T: Scalar> {
    eigenvalues: Vec<T>,
    gains: Vec<T>,
    fourier: Fourier<T>,
}

impl<T: Scalar> FilterSpectrum<T> {
    /// Spectrum of the circulant matrix with the given first column.
    pub fn from_column(column: &[T], fourier: &Fourier<T>) -> Result<Self> {
        let n = column.len();
        if fourier.len() != n {
            return Err(Error::LengthMismatch {
                expected: fourier.len(),
                actual: n,
            });
        }
        let mass = column.iter().fold(T::zero(), |acc, &v| acc + v.abs());
        let tolerance = T::lit(8.0) * T::epsilon() * T::from_count(n) * mass.max(T::one());
        let transformed = fourier.forward(column);
        let max_imag = transformed.iter().fold(T::zero(), |m, c| m.max(c.im.abs()));
        if max_imag > tolerance {
            return Err(Error::NonRealSpectrum {
                max_imag: max_imag.to_f64_lossy(),
                tolerance: tolerance.to_f64_lossy(),
            });
        }
        let eigenvalues: Vec<T> = transformed.into_iter().map(|c| c.re).collect();
        let gains = eigenvalues.iter().map(|&l| T::one() - l).collect();
        Ok(Self {
            eigenvalues,
            gains,
            fourier: fourier.clone(),
        })
    }

    /// Spectrum of `f` embedded on a circle of `fourier.len()` samples.
    ///
    /// A nonnegative unit-mass filter has `|lambda| <= 1`; transform rounding
    /// above 1 is clipped so every gain is nonnegative.
    pub fn of_filter(filter: &Filter<T>, fourier: &Fourier<T>) -> Result<Self> {
        let mut spec = Self::from_column(&filter.embed(fourier.len())?, fourier)?;
        for (l, a) in spec.eigenvalues.iter_mut().zip(spec.gains.iter_mut()) {
            if *l > T::one() {
                *l = T::one();
                *a = T::zero();
            }
        }
        Ok(spec)
    }

    /// Builds a spectrum directly from gains, for constructing test spectra.
    pub fn from_gains(gains: Vec<T>) -> Self {
        let fourier = Fourier::new(gains.len());
        let eigenvalues = gains.iter().map(|&a| T::one() - a).collect();
        Self {
            eigenvalues,
            gains,
            fourier,
        }
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }

    /// `lambda_k`, in DFT order.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// `a_k = 1 - lambda_k`, in DFT order.
    pub fn gains(&self) -> &[T] {
        &self.gains
    }

    pub fn fourier(&self) -> &Fourier<T> {
        &self.fourier
    }
}

/// Spectrum of `filter` as a length-`n` circulant operator.
pub fn filter_spectrum<T: Scalar>(filter: &Filter<T>, n: usize) -> Result<FilterSpectrum<T>> {
    filter.check_fits(n)?;
    FilterSpectrum::of_filter(filter, &Fourier::new(n))
}
