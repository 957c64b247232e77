use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::signal::{grid_point, Signal};

/// Sinusoidal amplitude modulation `1 + depth * sin(2 pi f x + phase)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Modulation {
    pub depth: f64,
    /// Cycles over `[0, 1]`.
    pub frequency: f64,
    /// Drawn from the spec's seed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
}

/// One oscillatory component `amplitude * envelope(x) * sin(2 pi f x + phase)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub amplitude: f64,
    /// Cycles over `[0, 1]`.
    pub frequency: f64,
    #[serde(default)]
    pub phase: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulation: Option<Modulation>,
}

impl Component {
    fn highest_frequency(&self) -> f64 {
        self.frequency + self.modulation.as_ref().map_or(0.0, |m| m.frequency.abs())
    }
}

/// Description of a sum of oscillatory components with known ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub components: Vec<Component>,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Same components sampled at a different length.
    pub fn with_len(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidSpec("no components".into()));
        }
        if self.n < 4 {
            return Err(Error::InvalidSpec(format!("n = {} is too short", self.n)));
        }
        for c in &self.components {
            let finite = [c.amplitude, c.frequency, c.phase]
                .iter()
                .chain(
                    c.modulation
                        .iter()
                        .flat_map(|m| [m.depth, m.frequency])
                        .collect::<Vec<_>>()
                        .iter(),
                )
                .all(|v| v.is_finite());
            if !finite || c.frequency < 0.0 {
                return Err(Error::InvalidSpec(format!("bad component {c:?}")));
            }
        }
        for (i, a) in self.components.iter().enumerate() {
            if self.components[..i]
                .iter()
                .any(|b| b.frequency == a.frequency)
            {
                return Err(Error::InvalidSpec(format!(
                    "duplicate frequency {}",
                    a.frequency
                )));
            }
        }
        let top = self
            .components
            .iter()
            .map(Component::highest_frequency)
            .fold(0.0, f64::max);
        if (self.n as f64) < 4.0 * top {
            return Err(Error::InvalidSpec(format!(
                "aliasing: n = {} is below 4 x highest frequency {top}",
                self.n
            )));
        }
        Ok(())
    }
}

/// Samples the spec: returns the summed signal and its components, ordered
/// by decreasing carrier frequency.
pub fn generate<T: Scalar>(spec: &SyntheticSpec) -> Result<(Signal<T>, Vec<Signal<T>>)> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut parts: Vec<(f64, Vec<T>)> = spec
        .components
        .iter()
        .map(|c| {
            let envelope = c.modulation.as_ref().map(|m| {
                let phase = m.phase.unwrap_or_else(|| rng.random_range(0.0..TAU));
                (m.depth, m.frequency, phase)
            });
            let samples = (0..n)
                .map(|j| {
                    let x: f64 = grid_point(j, n);
                    let env = envelope.map_or(1.0, |(d, f, p)| 1.0 + d * (TAU * f * x + p).sin());
                    T::lit(c.amplitude * env * (TAU * c.frequency * x + c.phase).sin())
                })
                .collect();
            (c.frequency, samples)
        })
        .collect();
    parts.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut sum = vec![T::zero(); n];
    for (_, part) in &parts {
        for (acc, &v) in sum.iter_mut().zip(part) {
            *acc += v;
        }
    }
    let truth = parts
        .into_iter()
        .map(|(_, p)| Signal::new(p))
        .collect::<Result<Vec<_>>>()?;
    Ok((Signal::new(sum)?, truth))
}

/// Assignment of one ground-truth component to an IMF.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentMatch<T> {
    pub truth_index: usize,
    pub imf_index: usize,
    /// Absolute normalized inner product.
    pub correlation: T,
    /// `||imf - truth|| / ||truth||`.
    pub relative_error: T,
}

/// Greedy one-to-one matching of components to IMFs by decreasing correlation.
/// Components left without an IMF are omitted.
pub fn match_components<T: Scalar>(
    imfs: &[Signal<T>],
    truth: &[Signal<T>],
) -> Vec<ComponentMatch<T>> {
    let mut pairs = Vec::with_capacity(imfs.len() * truth.len());
    for (t, comp) in truth.iter().enumerate() {
        for (i, imf) in imfs.iter().enumerate() {
            let denom = comp.norm() * imf.norm();
            let dot = comp
                .iter()
                .zip(imf.iter())
                .fold(T::zero(), |acc, (&a, &b)| acc + a * b);
            let corr = if denom > T::zero() {
                (dot / denom).abs()
            } else {
                T::zero()
            };
            pairs.push((corr, t, i));
        }
    }
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));

    let mut used_truth = vec![false; truth.len()];
    let mut used_imf = vec![false; imfs.len()];
    let mut out = Vec::new();
    for (corr, t, i) in pairs {
        if used_truth[t] || used_imf[i] {
            continue;
        }
        used_truth[t] = true;
        used_imf[i] = true;
        let rel = crate::metrics::relative_error(&imfs[i], &truth[t]).unwrap_or(T::infinity());
        out.push(ComponentMatch {
            truth_index: t,
            imf_index: i,
            correlation: corr,
            relative_error: rel,
        });
    }
    out.sort_by_key(|m| m.truth_index);
    out
}
