//! The four IMF extraction engines and the outer decomposition loop.
//!
//! Every engine applies a diagonal operator in the Fourier basis of the
//! circulant filter matrix:
//!
//! | method | spectral multiplier        |
//! |--------|----------------------------|
//! | IF     | `a_k^N`, iterated in time  |
//! | FIF    | `a_k^N`, iterated in frequency, `N` from the `delta` rule |
//! | dFIF   | `a_k^N0`, `N0` estimated from the spectrum |
//! | htFIF  | `a_k` if `a_k >= tau`, else 0 |

use std::time::Instant;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::decomposition::{Decomposition, IterationReport, Method, Termination};
use crate::error::{Error, Result};
use crate::filter::{build_filter, filter_length_estimate, Filter, FilterSpectrum, GapStatistic};
use crate::scalar::Scalar;
use crate::signal::{count_extrema, Signal};
use crate::spectral::{complex_norm, Fourier};

/// Method selector plus every tunable of the decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar + Serialize + for<'a> Deserialize<'a>")]
pub struct DecompositionConfig<T> {
    pub method: Method,
    /// Gain threshold for dFIF's `N0` estimate and htFIF's cut.
    pub tau: T,
    /// Target residual of the slowest decaying gain below `tau` (dFIF).
    pub kappa: T,
    /// Relative-step stopping tolerance of IF and FIF.
    pub delta: T,
    /// Filter length multiplier.
    pub xi: T,
    pub alpha: GapStatistic,
    pub max_inner_iterations: usize,
    pub max_imfs: usize,
    /// Power of the thresholded operator applied by htFIF.
    #[serde(default = "one")]
    pub htfif_power: usize,
}

fn one() -> usize {
    1
}

impl<T: Scalar> Default for DecompositionConfig<T> {
    fn default() -> Self {
        Self {
            method: Method::Fif,
            tau: T::lit(0.98),
            kappa: T::lit(0.56),
            delta: T::lit(0.001),
            xi: T::lit(2.0),
            alpha: GapStatistic::Average,
            max_inner_iterations: 5000,
            max_imfs: 200,
            htfif_power: 1,
        }
    }
}

impl<T: Scalar> DecompositionConfig<T> {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: T| {
            if v > T::zero() && v < T::one() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!(
                    "{name} must lie in (0, 1), got {v}"
                )))
            }
        };
        unit("tau", self.tau)?;
        unit("kappa", self.kappa)?;
        if !(self.delta > T::zero() && self.delta.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        if !(self.xi > T::zero() && self.xi.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "xi must be positive, got {}",
                self.xi
            )));
        }
        if self.max_inner_iterations == 0 || self.max_imfs == 0 || self.htfif_power == 0 {
            return Err(Error::InvalidConfig(
                "iteration caps and htfif_power must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Result of an iterative IMF extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct ImfOutcome<T> {
    pub imf: Signal<T>,
    pub iterations: usize,
    /// False when `max_iter` was reached with the relative step still above `delta`.
    pub converged: bool,
}

/// A priori iteration count for dFIF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct N0Estimate<T> {
    pub iterations: usize,
    /// Largest gain strictly inside `(0, tau)`, if any.
    pub max_gain: Option<T>,
    /// No gain fell inside `(0, tau)`; the direct formula has nothing to drive.
    pub degenerate: bool,
}

fn check_spectrum_len<T: Scalar>(s: &Signal<T>, spec: &FilterSpectrum<T>) -> Result<()> {
    if s.len() != spec.len() {
        return Err(Error::LengthMismatch {
            expected: spec.len(),
            actual: s.len(),
        });
    }
    Ok(())
}

fn powi_saturating<T: Scalar>(base: T, exp: usize) -> T {
    match i32::try_from(exp) {
        Ok(e) => base.powi(e),
        Err(_) => base.powf(T::from_count(exp)),
    }
}

/// Multiplies the DFT of `s` by `gain(a_k)` and transforms back.
fn apply_gains<T: Scalar>(
    s: &Signal<T>,
    spec: &FilterSpectrum<T>,
    gain: impl Fn(T) -> T,
) -> Result<Signal<T>> {
    check_spectrum_len(s, spec)?;
    let fourier = spec.fourier();
    let mut coeffs = fourier.forward(s);
    for (c, &a) in coeffs.iter_mut().zip(spec.gains()) {
        *c = c.scale(gain(a));
    }
    Ok(Signal::from_engine(fourier.inverse_real(coeffs)))
}

/// Circular convolution `w * s` in the time domain.
fn convolve_into<T: Scalar>(s: &[T], filter: &Filter<T>, extended: &mut Vec<T>, out: &mut [T]) {
    let n = s.len();
    let l = filter.half_support();
    extended.clear();
    extended.extend_from_slice(&s[n - l..]);
    extended.extend_from_slice(s);
    extended.extend_from_slice(&s[..l]);
    let w = filter.weights();
    for (i, o) in out.iter_mut().enumerate() {
        *o = extended[i..i + w.len()]
            .iter()
            .zip(w)
            .fold(T::zero(), |acc, (&x, &wk)| acc + x * wk);
    }
}

/// One step of iterative filtering: `s - w * s`, i.e. `(I - W) s`.
pub fn if_step<T: Scalar>(s: &Signal<T>, filter: &Filter<T>) -> Result<Signal<T>> {
    filter.check_fits(s.len())?;
    let mut smooth = vec![T::zero(); s.len()];
    convolve_into(s, filter, &mut Vec::new(), &mut smooth);
    Ok(Signal::from_engine(
        s.iter().zip(&smooth).map(|(&x, &m)| x - m).collect(),
    ))
}

/// Time-domain iterative filtering: repeated [`if_step`] until the relative
/// step `||s_{m+1} - s_m|| / ||s_m||` drops below `delta`.
pub fn compute_imf_if<T: Scalar>(
    s: &Signal<T>,
    filter: &Filter<T>,
    delta: T,
    max_iter: usize,
) -> Result<ImfOutcome<T>> {
    filter.check_fits(s.len())?;
    let n = s.len();
    let mut current = s.to_vec();
    let mut current_norm = s.norm();
    let mut smooth = vec![T::zero(); n];
    let mut extended = Vec::with_capacity(n + 2 * filter.half_support());
    for m in 1..=max_iter {
        convolve_into(&current, filter, &mut extended, &mut smooth);
        // The step s_{m+1} - s_m is exactly -(w * s_m).
        let step_norm = crate::scalar::l2_norm(&smooth);
        for (c, &sm) in current.iter_mut().zip(&smooth) {
            *c -= sm;
        }
        let next_norm = crate::scalar::l2_norm(&current);
        if next_norm == T::zero() || step_norm < delta * current_norm {
            return Ok(ImfOutcome {
                imf: Signal::from_engine(current),
                iterations: m,
                converged: true,
            });
        }
        current_norm = next_norm;
    }
    Ok(ImfOutcome {
        imf: Signal::from_engine(current),
        iterations: max_iter,
        converged: false,
    })
}

/// Iterative filtering in the Fourier domain: `s_hat <- a .* s_hat` with the
/// same relative-step rule as [`compute_imf_if`], norms taken on the spectrum.
pub fn compute_imf_fif<T: Scalar>(
    s: &Signal<T>,
    spec: &FilterSpectrum<T>,
    delta: T,
    max_iter: usize,
) -> Result<ImfOutcome<T>> {
    check_spectrum_len(s, spec)?;
    let fourier = spec.fourier();
    let mut coeffs = fourier.forward(s);
    let mut current_norm = complex_norm(&coeffs);
    let gains = spec.gains();
    let finish = |coeffs: Vec<Complex<T>>, iterations, converged| ImfOutcome {
        imf: Signal::from_engine(fourier.inverse_real(coeffs)),
        iterations,
        converged,
    };
    for m in 1..=max_iter {
        let mut step_sq = T::zero();
        let mut next_sq = T::zero();
        for (c, &a) in coeffs.iter_mut().zip(gains) {
            let next = c.scale(a);
            step_sq += (next - *c).norm_sqr();
            next_sq += next.norm_sqr();
            *c = next;
        }
        let next_norm = next_sq.sqrt();
        if next_norm == T::zero() || step_sq.sqrt() < delta * current_norm {
            return Ok(finish(coeffs, m, true));
        }
        current_norm = next_norm;
    }
    Ok(finish(coeffs, max_iter, false))
}

/// `N0 = round(ln kappa / ln M)` with `M` the largest gain in `(0, tau)`.
pub fn estimate_n0<T: Scalar>(spec: &FilterSpectrum<T>, tau: T, kappa: T) -> N0Estimate<T> {
    let max_gain = spec
        .gains()
        .iter()
        .copied()
        .filter(|&a| a > T::zero() && a < tau)
        .fold(None, |m: Option<T>, a| Some(m.map_or(a, |m| m.max(a))));
    match max_gain {
        None => N0Estimate {
            iterations: 1,
            max_gain: None,
            degenerate: true,
        },
        Some(m) => N0Estimate {
            iterations: n0_from_max_gain(m, kappa),
            max_gain: Some(m),
            degenerate: false,
        },
    }
}

/// The scalar part of the `N0` estimate.
pub fn n0_from_max_gain<T: Scalar>(max_gain: T, kappa: T) -> usize {
    let ratio = (kappa.ln() / max_gain.ln()).round();
    if ratio.is_nan() || ratio < T::one() {
        1
    } else {
        ratio.to_usize().unwrap_or(usize::MAX)
    }
}

/// `IDFT(a^n0 .* DFT(s))`: the FIF output after exactly `n0` iterations.
pub fn dfif_with_iterations<T: Scalar>(
    s: &Signal<T>,
    spec: &FilterSpectrum<T>,
    n0: usize,
) -> Result<Signal<T>> {
    apply_gains(s, spec, |a| powi_saturating(a, n0))
}

/// Direct FIF: one spectral application of `a^N0` with `N0` from [`estimate_n0`].
pub fn compute_imf_dfif<T: Scalar>(
    s: &Signal<T>,
    spec: &FilterSpectrum<T>,
    tau: T,
    kappa: T,
) -> Result<(Signal<T>, N0Estimate<T>)> {
    let estimate = estimate_n0(spec, tau, kappa);
    let imf = dfif_with_iterations(s, spec, estimate.iterations)?;
    Ok((imf, estimate))
}

/// Thresholded gain: `a` if `a >= tau`, else 0.
pub fn threshold_gain<T: Scalar>(a: T, tau: T) -> T {
    if a >= tau {
        a
    } else {
        T::zero()
    }
}

/// Hard-thresholding FIF with `B` applied `power` times.
pub fn htfif_with_power<T: Scalar>(
    s: &Signal<T>,
    spec: &FilterSpectrum<T>,
    tau: T,
    power: usize,
) -> Result<Signal<T>> {
    apply_gains(s, spec, |a| powi_saturating(threshold_gain(a, tau), power))
}

/// Hard-thresholding FIF: `IDFT(b .* DFT(s))` with gains below `tau` zeroed.
pub fn compute_imf_htfif<T: Scalar>(
    s: &Signal<T>,
    spec: &FilterSpectrum<T>,
    tau: T,
) -> Result<Signal<T>> {
    htfif_with_power(s, spec, tau, 1)
}

/// Extracts one IMF from `remainder` with a filter of the given half-support.
/// The returned report has `imf_index` 0; callers number it.
pub fn extract_imf<T: Scalar>(
    remainder: &Signal<T>,
    half_support: usize,
    cfg: &DecompositionConfig<T>,
    fourier: &Fourier<T>,
) -> Result<(Signal<T>, IterationReport)> {
    let start = Instant::now();
    let filter = build_filter::<T>(half_support);
    let mut converged = true;
    let mut degenerate_n0 = false;
    let (imf, iterations) = if cfg.method == Method::If {
        let out = compute_imf_if(remainder, &filter, cfg.delta, cfg.max_inner_iterations)?;
        converged = out.converged;
        (out.imf, out.iterations)
    } else {
        let spec = FilterSpectrum::of_filter(&filter, fourier)?;
        match cfg.method {
            Method::Fif => {
                let out = compute_imf_fif(remainder, &spec, cfg.delta, cfg.max_inner_iterations)?;
                converged = out.converged;
                (out.imf, out.iterations)
            }
            Method::Dfif => {
                let (imf, est) = compute_imf_dfif(remainder, &spec, cfg.tau, cfg.kappa)?;
                degenerate_n0 = est.degenerate;
                (imf, est.iterations)
            }
            Method::Htfif => (
                htfif_with_power(remainder, &spec, cfg.tau, cfg.htfif_power)?,
                cfg.htfif_power,
            ),
            Method::If => unreachable!(),
        }
    };
    let report = IterationReport {
        imf_index: 0,
        filter_length: half_support,
        iterations_used: iterations,
        method: cfg.method,
        elapsed: start.elapsed().as_secs_f64(),
        converged,
        degenerate_n0,
    };
    Ok((imf, report))
}

/// Decomposes `s` into IMFs plus a remainder.
///
/// Each pass sizes a filter from the current remainder, extracts one IMF with
/// the configured method and subtracts it. The loop stops when the remainder
/// has fewer than two extrema, when `max_imfs` IMFs exist, when an engine
/// returns an identically zero IMF, or when the filter the remainder calls
/// for is wider than the signal (its slowest oscillation stays in the
/// remainder).
pub fn decompose<T: Scalar>(
    s: &Signal<T>,
    cfg: &DecompositionConfig<T>,
) -> Result<Decomposition<T>> {
    cfg.validate()?;
    if s.is_zero() {
        return Decomposition::from_parts(
            s.clone(),
            vec![],
            s.clone(),
            vec![],
            Termination::ZeroSignal,
            cfg.clone(),
        );
    }
    let fourier = Fourier::new(s.len());
    let mut remainder = s.clone();
    let mut imfs = Vec::new();
    let mut reports = Vec::new();
    let termination = loop {
        if count_extrema(&remainder) < 2 {
            break Termination::FewExtrema;
        }
        if imfs.len() >= cfg.max_imfs {
            break Termination::MaxImfs;
        }
        let length = filter_length_estimate(&remainder, cfg.xi, cfg.alpha)?;
        if length.saturated {
            break Termination::FilterSaturated;
        }
        let (imf, mut report) = extract_imf(&remainder, length.length, cfg, &fourier)?;
        if imf.is_zero() {
            break Termination::ZeroImf;
        }
        remainder = remainder.checked_sub(&imf)?;
        report.imf_index = imfs.len() + 1;
        imfs.push(imf);
        reports.push(report);
    };
    Decomposition::from_parts(
        s.clone(),
        imfs,
        remainder,
        reports,
        termination,
        cfg.clone(),
    )
}

/// Recomputes every IMF of `reference` with `cfg`, each from the remainder
/// the reference itself saw and with the reference's filter length.
///
/// IMF `i` of the result is directly comparable with IMF `i` of the reference.
pub fn decompose_on_remainders<T: Scalar>(
    reference: &Decomposition<T>,
    cfg: &DecompositionConfig<T>,
) -> Result<Decomposition<T>> {
    cfg.validate()?;
    let remainders = reference.remainders();
    let fourier = Fourier::new(reference.len());
    let mut imfs = Vec::with_capacity(reference.imfs.len());
    let mut reports = Vec::with_capacity(reference.imfs.len());
    for (i, ref_report) in reference.reports.iter().enumerate() {
        let (imf, mut report) =
            extract_imf(&remainders[i], ref_report.filter_length, cfg, &fourier)?;
        report.imf_index = i + 1;
        imfs.push(imf);
        reports.push(report);
    }
    let mut remainder = remainders[0].clone();
    for imf in &imfs {
        remainder = remainder.checked_sub(imf)?;
    }
    Decomposition::from_parts(
        reference.input.clone(),
        imfs,
        remainder,
        reports,
        Termination::Replayed,
        cfg.clone(),
    )
}
