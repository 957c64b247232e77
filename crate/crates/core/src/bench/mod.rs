//! Synthetic test signals and a timing harness for comparing the engines.

mod synthetic;
mod timing;

pub mod fixtures;

pub use synthetic::{
    generate, match_components, Component, ComponentMatch, Modulation, SyntheticSpec,
};
pub use timing::{median, run_timing, TimingRow};
