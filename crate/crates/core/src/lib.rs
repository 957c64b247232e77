//! Iterative Filtering decomposition of 1-D signals into Intrinsic Mode
//! Functions (IMFs).
//!
//! Four engines share one outer loop ([`engine::decompose`]):
//!
//! * **IF**: repeated time-domain moving-average subtraction `s <- s - w * s`.
//! * **FIF**: the same iteration carried out on the DFT of the signal, where
//!   the circulant convolution is diagonal.
//! * **dFIF**: a single spectral application of `(1 - lambda_k)^N0`, with
//!   `N0` estimated from the filter spectrum.
//! * **htFIF**: a single spectral application of the gains `1 - lambda_k`
//!   with every gain below a threshold set to zero.
//!
//! The core is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix it to `f64`, the working precision for all error-bound checks.

pub mod bench;
pub mod decomposition;
pub mod engine;
pub mod error;
pub mod filter;
pub mod metrics;
mod scalar;
pub mod signal;
pub mod spectral;

pub use decomposition::{reconstruct, IterationReport, Method, Termination};
pub use error::{Error, Result};
pub use filter::GapStatistic;
pub use metrics::CompareMode;
pub use scalar::Scalar;

pub type Signal = signal::Signal<f64>;
pub type Decomposition = decomposition::Decomposition<f64>;
pub type DecompositionConfig = engine::DecompositionConfig<f64>;
pub type Filter = filter::Filter<f64>;
pub type FilterSpectrum = filter::FilterSpectrum<f64>;
pub type ErrorReport = metrics::ErrorReport<f64>;

pub type Signal32 = signal::Signal<f32>;
pub type Decomposition32 = decomposition::Decomposition<f32>;
pub type DecompositionConfig32 = engine::DecompositionConfig<f32>;
pub type Filter32 = filter::Filter<f32>;
pub type FilterSpectrum32 = filter::FilterSpectrum<f32>;
pub type ErrorReport32 = metrics::ErrorReport<f32>;
