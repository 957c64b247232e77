//! Decomposition results and the reconstruction identity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::DecompositionConfig;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::signal::Signal;

/// IMF extraction method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Time-domain iterative filtering (reference path).
    If,
    /// Iterative filtering carried out in the Fourier domain.
    Fif,
    /// Single-shot spectral power with an a priori iteration count.
    Dfif,
    /// Single-shot hard thresholding of the spectral gains.
    Htfif,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::If, Method::Fif, Method::Dfif, Method::Htfif];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::If => "if",
            Method::Fif => "fif",
            Method::Dfif => "dfif",
            Method::Htfif => "htfif",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "if" => Ok(Method::If),
            "fif" => Ok(Method::Fif),
            "dfif" => Ok(Method::Dfif),
            "htfif" => Ok(Method::Htfif),
            other => Err(Error::InvalidConfig(format!("unknown method `{other}`"))),
        }
    }
}

/// Per-IMF bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationReport {
    /// 1-based position of the IMF in the decomposition.
    pub imf_index: usize,
    pub filter_length: usize,
    /// `N_FIF` for IF/FIF, `N0` for dFIF, the power of `B` (1 by default) for htFIF.
    pub iterations_used: usize,
    pub method: Method,
    /// Wall time spent extracting this IMF, seconds.
    pub elapsed: f64,
    /// False when an iterative method hit its iteration cap above tolerance.
    pub converged: bool,
    /// dFIF only: no spectral gain fell strictly inside `(0, tau)`.
    pub degenerate_n0: bool,
}

/// Why the outer loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The remainder has fewer than two extrema.
    FewExtrema,
    MaxImfs,
    /// The engine returned an identically zero IMF.
    ZeroImf,
    /// The filter needed for the remainder's oscillation does not fit the
    /// circle; the remainder is kept whole.
    FilterSaturated,
    /// The input was identically zero.
    ZeroSignal,
    /// IMFs were recomputed on another decomposition's remainders.
    Replayed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar + Serialize + for<'a> Deserialize<'a>")]
pub struct Decomposition<T> {
    /// The decomposed signal.
    pub input: Signal<T>,
    pub imfs: Vec<Signal<T>>,
    pub remainder: Signal<T>,
    pub reports: Vec<IterationReport>,
    pub termination: Termination,
    pub config: DecompositionConfig<T>,
}

impl<T: Scalar> Decomposition<T> {
    /// Builds a decomposition from its parts, checking that lengths agree.
    pub fn from_parts(
        input: Signal<T>,
        imfs: Vec<Signal<T>>,
        remainder: Signal<T>,
        reports: Vec<IterationReport>,
        termination: Termination,
        config: DecompositionConfig<T>,
    ) -> Result<Self> {
        input.check_len(&remainder)?;
        for imf in &imfs {
            remainder.check_len(imf)?;
        }
        Ok(Self {
            input,
            imfs,
            remainder,
            reports,
            termination,
            config,
        })
    }

    pub fn len(&self) -> usize {
        self.remainder.len()
    }

    pub fn is_empty(&self) -> bool {
        self.imfs.is_empty()
    }

    pub fn method(&self) -> Method {
        self.config.method
    }

    /// Remainders seen by each IMF extraction: entry `i` is the input minus
    /// IMFs `0..i`, subtracted in order. Entry `imfs.len()` is the final remainder.
    pub fn remainders(&self) -> Vec<Signal<T>> {
        let mut current = self.input.clone();
        let mut out = Vec::with_capacity(self.imfs.len() + 1);
        for imf in &self.imfs {
            let next = current
                .checked_sub(imf)
                .expect("decomposition members share one length");
            out.push(current);
            current = next;
        }
        out.push(current);
        out
    }
}

/// Elementwise sum of every IMF plus the remainder.
pub fn reconstruct<T: Scalar>(d: &Decomposition<T>) -> Signal<T> {
    let mut acc = d.remainder.to_vec();
    for imf in d.imfs.iter().rev() {
        for (a, &v) in acc.iter_mut().zip(imf.iter()) {
            *a += v;
        }
    }
    Signal::from_engine(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(v: &[f64]) -> Signal<f64> {
        Signal::new(v.to_vec()).unwrap()
    }

    #[test]
    fn reconstruct_trivial_cases() {
        let s = sig(&[1.0, -2.0, 3.5]);
        let d = Decomposition::from_parts(
            s.clone(),
            vec![],
            s.clone(),
            vec![],
            Termination::FewExtrema,
            DecompositionConfig::default(),
        )
        .unwrap();
        assert_eq!(reconstruct(&d), s);

        let d = Decomposition::from_parts(
            s.clone(),
            vec![s.clone()],
            Signal::zeros(3),
            vec![],
            Termination::FewExtrema,
            DecompositionConfig::default(),
        )
        .unwrap();
        assert_eq!(reconstruct(&d), s);
    }

    #[test]
    fn from_parts_rejects_mismatched_lengths() {
        let err = Decomposition::from_parts(
            sig(&[1.0, 2.0, 3.0]),
            vec![sig(&[1.0, 2.0])],
            sig(&[1.0, 2.0, 3.0]),
            vec![],
            Termination::FewExtrema,
            DecompositionConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
    }

    #[test]
    fn method_round_trips_through_strings() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("emd".parse::<Method>().is_err());
    }
}
