//! Relative errors between decompositions and the a priori error bounds of
//! the direct methods against FIF.
//!
//! Both bounds have the form `||D||_2 ||s||_2 / ||A^N s||_2` where `D` is a
//! diagonal operator in the Fourier basis, so the operator norm is the
//! largest absolute diagonal entry.

use serde::{Deserialize, Serialize};

use crate::decomposition::{Decomposition, Method};
use crate::engine::{
    compute_imf_dfif, compute_imf_fif, decompose_on_remainders, htfif_with_power, threshold_gain,
    DecompositionConfig,
};
use crate::error::{Error, Result};
use crate::filter::{build_filter, estimate_filter_length, filter_spectrum, FilterSpectrum};
use crate::scalar::{l2_norm, Scalar};
use crate::signal::Signal;
use crate::spectral::complex_norm;

/// `||a - b||_2 / ||b||_2`.
pub fn relative_error<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: b.len(),
            actual: a.len(),
        });
    }
    let reference = l2_norm(b);
    if reference == T::zero() {
        return Err(Error::ZeroReference);
    }
    let diff: Vec<T> = a.iter().zip(b).map(|(&x, &y)| x - y).collect();
    Ok(l2_norm(&diff) / reference)
}

/// Value of an error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEstimate<T> {
    /// Infinite when the reference IMF `A^N s` is zero.
    pub value: T,
    /// dFIF only: the bound was evaluated with `N_dFIF < N_FIF`.
    pub exponents_swapped: bool,
}

impl<T: Scalar> BoundEstimate<T> {
    pub fn is_degenerate(&self) -> bool {
        self.value.is_infinite()
    }
}

fn powi<T: Scalar>(base: T, exp: usize) -> T {
    base.powi(i32::try_from(exp).unwrap_or(i32::MAX))
}

/// `max_k |d_k| * ||s|| / ||A^N s||` for a diagonal `d_k = diagonal(a_k)`.
fn spectral_bound<T: Scalar>(
    s: &Signal<T>,
    spec: &FilterSpectrum<T>,
    n_fif: usize,
    diagonal: impl Fn(T) -> T,
) -> Result<T> {
    if s.len() != spec.len() {
        return Err(Error::LengthMismatch {
            expected: spec.len(),
            actual: s.len(),
        });
    }
    let operator_norm = spec
        .gains()
        .iter()
        .fold(T::zero(), |m, &a| m.max(diagonal(a).abs()));
    let mut coeffs = spec.fourier().forward(s);
    for (c, &a) in coeffs.iter_mut().zip(spec.gains()) {
        *c = c.scale(powi(a, n_fif));
    }
    // Unnormalized DFT: divide by sqrt(n) for the time-domain norm.
    let denominator = complex_norm(&coeffs) / T::from_count(s.len()).sqrt();
    if denominator == T::zero() {
        return Ok(T::infinity());
    }
    Ok(operator_norm * s.norm() / denominator)
}

/// Upper bound on `||IMF_dFIF - IMF_FIF|| / ||IMF_FIF||` when dFIF uses
/// `n_dfif` iterations where FIF used `n_fif`.
///
/// The operator is `A^{N_dFIF} - A^{N_FIF}`, which equals
/// `(A^{N_dFIF - N_FIF} - I) A^{N_FIF}` for `N_dFIF >= N_FIF`; the reverse
/// order is accepted and flagged.
pub fn dfif_error_bound<T: Scalar>(
    s: &Signal<T>,
    spec: &FilterSpectrum<T>,
    n_dfif: usize,
    n_fif: usize,
) -> Result<BoundEstimate<T>> {
    if n_fif == 0 || n_dfif == 0 {
        return Err(Error::InvalidConfig(
            "iteration counts must be at least 1".into(),
        ));
    }
    let value = spectral_bound(s, spec, n_fif, |a| powi(a, n_dfif) - powi(a, n_fif))?;
    Ok(BoundEstimate {
        value,
        exponents_swapped: n_dfif < n_fif,
    })
}

/// Upper bound on `||IMF_htFIF - IMF_FIF|| / ||IMF_FIF||`, operator `B - A^{N_FIF}`.
pub fn htfif_error_bound<T: Scalar>(
    s: &Signal<T>,
    spec: &FilterSpectrum<T>,
    tau: T,
    n_fif: usize,
) -> Result<BoundEstimate<T>> {
    htfif_error_bound_with_power(s, spec, tau, 1, n_fif)
}

/// As [`htfif_error_bound`] with `B^power` in place of `B`.
pub fn htfif_error_bound_with_power<T: Scalar>(
    s: &Signal<T>,
    spec: &FilterSpectrum<T>,
    tau: T,
    power: usize,
    n_fif: usize,
) -> Result<BoundEstimate<T>> {
    if n_fif == 0 {
        return Err(Error::InvalidConfig("N_FIF must be at least 1".into()));
    }
    let value = spectral_bound(s, spec, n_fif, |a| {
        powi(threshold_gain(a, tau), power) - powi(a, n_fif)
    })?;
    Ok(BoundEstimate {
        value,
        exponents_swapped: false,
    })
}

/// How IMFs of two decompositions are paired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareMode {
    /// Compare the IMFs each decomposition produced on its own.
    Independent,
    /// Recompute the candidate's IMFs on the reference's remainders.
    SharedRemainder,
}

/// Per-IMF relative errors of a candidate decomposition against a reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar + Serialize + for<'a> Deserialize<'a>")]
pub struct ErrorReport<T> {
    pub per_imf_error: Vec<T>,
    /// A priori bound per IMF, where one applies.
    pub bound: Vec<Option<T>>,
    /// `(reference, candidate)`.
    pub method_pair: (Method, Method),
    pub imf_counts: (usize, usize),
    pub notes: Vec<String>,
}

impl<T: Scalar> ErrorReport<T> {
    /// True when every finite bound holds with the given slack.
    pub fn bounds_hold(&self, slack: T) -> bool {
        self.per_imf_error
            .iter()
            .zip(&self.bound)
            .all(|(&e, b)| b.is_none_or(|b| e <= b + slack))
    }
}

/// Compares `candidate` against `reference` IMF by IMF.
///
/// In [`CompareMode::SharedRemainder`] the candidate's configuration is
/// re-run on each remainder of the reference (with the reference's filter
/// length), and the a priori bound is attached when the reference is IF/FIF
/// and the candidate is dFIF or htFIF.
pub fn compare_decompositions<T: Scalar>(
    reference: &Decomposition<T>,
    candidate: &Decomposition<T>,
    mode: CompareMode,
) -> Result<ErrorReport<T>> {
    let replayed;
    let other = match mode {
        CompareMode::Independent => candidate,
        CompareMode::SharedRemainder => {
            replayed = decompose_on_remainders(reference, &candidate.config)?;
            &replayed
        }
    };
    let mut notes = Vec::new();
    let count = reference.imfs.len().min(other.imfs.len());
    if reference.imfs.len() != other.imfs.len() {
        notes.push(format!(
            "IMF counts differ ({} vs {}); comparing the first {count}",
            reference.imfs.len(),
            other.imfs.len()
        ));
    }

    let remainders = match mode {
        CompareMode::SharedRemainder => reference.remainders(),
        CompareMode::Independent => Vec::new(),
    };
    let mut per_imf_error = Vec::with_capacity(count);
    let mut bound = Vec::with_capacity(count);
    for (i, (r, c)) in reference.imfs.iter().zip(&other.imfs).enumerate() {
        let err = match relative_error(c, r) {
            Ok(e) => e,
            Err(Error::ZeroReference) if c.is_zero() => T::zero(),
            Err(Error::ZeroReference) => {
                notes.push(format!("IMF {} of the reference is zero", i + 1));
                T::infinity()
            }
            Err(e) => return Err(e),
        };
        per_imf_error.push(err);
        bound.push(match mode {
            CompareMode::SharedRemainder => {
                let b = shared_bound(reference, other, &remainders[i], i)?;
                if b.is_some_and(|b| b.exponents_swapped) {
                    notes.push(format!("IMF {}: N_dFIF < N_FIF, bound symmetrized", i + 1));
                }
                b.map(|b| b.value)
            }
            CompareMode::Independent => None,
        });
    }
    Ok(ErrorReport {
        per_imf_error,
        bound,
        method_pair: (reference.method(), other.method()),
        imf_counts: (reference.imfs.len(), other.imfs.len()),
        notes,
    })
}

fn shared_bound<T: Scalar>(
    reference: &Decomposition<T>,
    other: &Decomposition<T>,
    remainder: &Signal<T>,
    i: usize,
) -> Result<Option<BoundEstimate<T>>> {
    if !matches!(reference.method(), Method::Fif | Method::If) {
        return Ok(None);
    }
    let (ref_report, other_report) = (&reference.reports[i], &other.reports[i]);
    if !ref_report.converged {
        return Ok(None);
    }
    let spectrum = || {
        filter_spectrum(
            &build_filter::<T>(ref_report.filter_length),
            remainder.len(),
        )
    };
    let n_fif = ref_report.iterations_used;
    Ok(match other.method() {
        Method::Dfif => Some(dfif_error_bound(
            remainder,
            &spectrum()?,
            other_report.iterations_used,
            n_fif,
        )?),
        Method::Htfif => Some(htfif_error_bound_with_power(
            remainder,
            &spectrum()?,
            other.config.tau,
            other.config.htfif_power,
            n_fif,
        )?),
        Method::If | Method::Fif => None,
    })
}

/// FIF first IMF of a signal, kept for scoring dFIF/htFIF parameter choices.
///
/// The filter length and spectrum come from `cfg` and are shared by every
/// candidate, so the scores differ only through `tau` and `kappa`.
#[derive(Debug, Clone)]
pub struct FirstImfReference<T: Scalar> {
    signal: Signal<T>,
    spectrum: FilterSpectrum<T>,
    imf: Signal<T>,
    half_support: usize,
    htfif_power: usize,
}

impl<T: Scalar> FirstImfReference<T> {
    pub fn new(signal: &Signal<T>, cfg: &DecompositionConfig<T>) -> Result<Self> {
        cfg.validate()?;
        let half_support = estimate_filter_length(signal, cfg.xi, cfg.alpha)?;
        let spectrum = filter_spectrum(&build_filter::<T>(half_support), signal.len())?;
        let imf = compute_imf_fif(signal, &spectrum, cfg.delta, cfg.max_inner_iterations)?.imf;
        Ok(Self {
            signal: signal.clone(),
            spectrum,
            imf,
            half_support,
            htfif_power: cfg.htfif_power,
        })
    }

    pub fn half_support(&self) -> usize {
        self.half_support
    }

    pub fn imf(&self) -> &Signal<T> {
        &self.imf
    }

    /// Relative error of the dFIF first IMF at `(tau, kappa)`.
    pub fn dfif_error(&self, tau: T, kappa: T) -> Result<T> {
        let (imf, _) = compute_imf_dfif(&self.signal, &self.spectrum, tau, kappa)?;
        relative_error(&imf, &self.imf)
    }

    /// Relative error of the htFIF first IMF at `tau`.
    pub fn htfif_error(&self, tau: T) -> Result<T> {
        let imf = htfif_with_power(&self.signal, &self.spectrum, tau, self.htfif_power)?;
        relative_error(&imf, &self.imf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{compute_imf_fif, decompose, dfif_with_iterations, DecompositionConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_signal(n: usize, seed: u64) -> Signal<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Signal::from_fn(n, |_| rng.random_range(-1.0..1.0)).unwrap()
    }

    #[test]
    fn relative_error_examples() {
        let b = [3.0, -4.0, 0.0];
        assert_eq!(relative_error(&b, &b).unwrap(), 0.0);
        let a2: Vec<f64> = b.iter().map(|v| 2.0 * v).collect();
        assert_eq!(relative_error(&a2, &b).unwrap(), 1.0);
        // b + e0 * ||b||: the difference has norm ||b||.
        let spike = [3.0 + 5.0, -4.0, 0.0];
        assert_eq!(relative_error(&spike, &b).unwrap(), 1.0);
        assert_eq!(relative_error(&b, &[0.0; 3]), Err(Error::ZeroReference));
        assert!(matches!(
            relative_error(&b, &[1.0; 2]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn dfif_bound_vanishes_at_equal_counts() {
        let s = random_signal(64, 1);
        let spec = filter_spectrum(&build_filter::<f64>(4), 64).unwrap();
        let b = dfif_error_bound(&s, &spec, 3, 3).unwrap();
        assert_eq!(b.value, 0.0);
        assert!(!b.exponents_swapped);
    }

    #[test]
    fn zero_denominator_is_flagged() {
        let s = random_signal(16, 2);
        let spec = FilterSpectrum::from_gains(vec![0.0; 16]);
        assert!(dfif_error_bound(&s, &spec, 2, 1).unwrap().is_degenerate());
        assert!(htfif_error_bound(&s, &spec, 0.5, 1)
            .unwrap()
            .is_degenerate());
    }

    #[test]
    fn dfif_bound_holds_on_random_signal() {
        let n = 64;
        let s = random_signal(n, 3);
        let spec = filter_spectrum(&build_filter::<f64>(4), n).unwrap();
        let fif3 = dfif_with_iterations(&s, &spec, 3).unwrap();
        let d5 = dfif_with_iterations(&s, &spec, 5).unwrap();
        let measured = relative_error(&d5, &fif3).unwrap();
        let bound = dfif_error_bound(&s, &spec, 5, 3).unwrap();
        assert!(
            measured <= bound.value + 1e-9,
            "{measured} > {}",
            bound.value
        );
        let swapped = dfif_error_bound(&s, &spec, 2, 3).unwrap();
        assert!(swapped.exponents_swapped);
        let d2 = dfif_with_iterations(&s, &spec, 2).unwrap();
        assert!(relative_error(&d2, &fif3).unwrap() <= swapped.value + 1e-9);
    }

    #[test]
    fn htfif_bound_cases() {
        // Gains in {0, 1} with tau at the smallest nonzero gain: B = A^N exactly.
        let gains = vec![0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0];
        let spec = FilterSpectrum::from_gains(gains);
        let s = random_signal(8, 4);
        assert_eq!(htfif_error_bound(&s, &spec, 1.0, 4).unwrap().value, 0.0);

        // tau above every gain: B = 0, bound = max a^N ||s|| / ||A^N s||.
        let n = 64;
        let s = random_signal(n, 5);
        let spec = filter_spectrum(&build_filter::<f64>(4), n).unwrap();
        let fif = compute_imf_fif(&s, &spec, 1e-3, 1000).unwrap();
        let tau = 1.0 - f64::EPSILON;
        assert!(spec.gains().iter().all(|&a| a < tau));
        let max_pow = spec
            .gains()
            .iter()
            .map(|a| a.powi(fif.iterations as i32).abs())
            .fold(0.0, f64::max);
        let expect = max_pow * s.norm() / fif.imf.norm();
        let got = htfif_error_bound(&s, &spec, tau, fif.iterations)
            .unwrap()
            .value;
        assert!((got - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn compare_self_is_zero() {
        let s = random_signal(200, 6);
        let d = decompose(&s, &DecompositionConfig::default()).unwrap();
        let r = compare_decompositions(&d, &d, CompareMode::Independent).unwrap();
        assert!(r.per_imf_error.iter().all(|&e| e == 0.0));
        assert!(r.notes.is_empty());
        let r = compare_decompositions(&d, &d, CompareMode::SharedRemainder).unwrap();
        assert!(r.per_imf_error.iter().all(|&e| e < 1e-12));
    }

    #[test]
    fn compare_truncates_to_shorter() {
        let s = random_signal(200, 7);
        let d = decompose(&s, &DecompositionConfig::default()).unwrap();
        let mut short = d.clone();
        short.imfs.truncate(1);
        short.reports.truncate(1);
        let r = compare_decompositions(&d, &short, CompareMode::Independent).unwrap();
        assert_eq!(r.per_imf_error.len(), 1);
        assert_eq!(r.notes.len(), 1);
    }

    fn tones(n: usize) -> Signal<f64> {
        Signal::from_fn(n, |j| {
            let x = j as f64 / (n - 1) as f64;
            [(1.0, 100.0), (0.7, 25.0), (0.5, 6.0)]
                .iter()
                .map(|(a, f)| a * (std::f64::consts::TAU * f * x).sin())
                .sum()
        })
        .unwrap()
    }

    #[test]
    fn first_imf_reference_scores() {
        let s = tones(1024);
        let r = FirstImfReference::new(&s, &DecompositionConfig::default()).unwrap();
        let n_fif = compute_imf_fif(&s, &r.spectrum, 1e-3, 5000)
            .unwrap()
            .iterations;
        assert!(n_fif >= 1);
        // tau above every gain and kappa = M^N_FIF reproduce FIF exactly.
        let m = r.spectrum.gains().iter().copied().fold(0.0, f64::max);
        let kappa = m.powi(n_fif as i32);
        assert!(r.dfif_error(1.5, kappa).unwrap() < 1e-12);
        assert!(r.htfif_error(0.9).unwrap() < 0.1);
        assert!(r.htfif_error(0.9).unwrap() < r.htfif_error(0.05).unwrap());
    }

    #[test]
    fn shared_remainder_attaches_bounds() {
        let s = tones(1024);
        let fif = decompose(&s, &DecompositionConfig::default()).unwrap();
        assert!(fif.reports.iter().all(|r| r.converged));
        for method in [Method::Dfif, Method::Htfif] {
            let cand = decompose(&s, &DecompositionConfig::with_method(method)).unwrap();
            let r = compare_decompositions(&fif, &cand, CompareMode::SharedRemainder).unwrap();
            assert_eq!(r.per_imf_error.len(), fif.imfs.len());
            assert!(r.bound.iter().all(|b| b.is_some()));
            assert!(r.bounds_hold(1e-9), "{method}: {r:?}");
        }
    }
}
