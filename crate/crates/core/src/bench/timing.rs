use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::decomposition::{reconstruct, Method};
use crate::engine::{decompose, DecompositionConfig};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::signal::Signal;

/// Median wall time of one method on one signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub method: Method,
    pub n: usize,
    /// Median of the timed repeats, seconds.
    pub seconds: f64,
    pub imf_count: usize,
    pub iterations: Vec<usize>,
    /// Every timed repeat, seconds.
    pub repeats: Vec<f64>,
}

/// Median of a non-empty sample; mean of the middle pair for even sizes.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    }
}

/// Times full decompositions of `signal`, one method at a time.
///
/// Each method runs once untimed (warm-up, and the reconstruction identity
/// is checked on that output), then `repeats` timed runs. A failing method
/// yields an error in its slot and the remaining methods still run.
pub fn run_timing<T: Scalar>(
    signal: &Signal<T>,
    methods: &[Method],
    cfg: &DecompositionConfig<T>,
    repeats: usize,
) -> Result<Vec<(Method, Result<TimingRow>)>> {
    if repeats < 3 {
        return Err(Error::InvalidConfig(format!(
            "need at least 3 repeats, got {repeats}"
        )));
    }
    cfg.validate()?;
    Ok(methods
        .iter()
        .map(|&method| (method, time_method(signal, method, cfg, repeats)))
        .collect())
}

fn time_method<T: Scalar>(
    signal: &Signal<T>,
    method: Method,
    cfg: &DecompositionConfig<T>,
    repeats: usize,
) -> Result<TimingRow> {
    let cfg = DecompositionConfig {
        method,
        ..cfg.clone()
    };
    let warm = decompose(signal, &cfg)?;
    let residual = reconstruct(&warm).checked_sub(signal)?.norm();
    let tolerance = T::from_count(signal.len()) * T::epsilon() * signal.norm();
    if residual > tolerance {
        return Err(Error::Reconstruction {
            residual: residual.to_f64_lossy(),
            tolerance: tolerance.to_f64_lossy(),
        });
    }

    let mut samples = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        let d = decompose(signal, &cfg)?;
        samples.push(start.elapsed().as_secs_f64().max(f64::MIN_POSITIVE));
        std::hint::black_box(&d);
    }
    Ok(TimingRow {
        method,
        n: signal.len(),
        seconds: median(&samples),
        imf_count: warm.imfs.len(),
        iterations: warm.reports.iter().map(|r| r.iterations_used).collect(),
        repeats: samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_three_is_a_sample() {
        let v = [0.3, 0.1, 0.2];
        assert_eq!(median(&v), 0.2);
        assert_eq!(median(&[1.0, 4.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn timing_requires_three_repeats() {
        let s = Signal::new(vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(run_timing(&s, &[Method::Fif], &DecompositionConfig::default(), 2).is_err());
    }

    #[test]
    fn timing_rows_for_every_method() {
        let s = Signal::from_fn(256, |j| ((j * j) % 17) as f64 - 8.0).unwrap();
        let rows = run_timing(&s, &Method::ALL, &DecompositionConfig::default(), 3).unwrap();
        assert_eq!(rows.len(), 4);
        for (method, row) in rows {
            let row = row.unwrap();
            assert_eq!(row.method, method);
            assert_eq!(row.repeats.len(), 3);
            assert!(row.seconds > 0.0);
            let lo = row.repeats.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = row.repeats.iter().copied().fold(0.0, f64::max);
            assert!(lo <= row.seconds && row.seconds <= hi);
        }
    }
}
