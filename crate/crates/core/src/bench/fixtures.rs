//! Stored synthetic fixtures.
//!
//! * `example1`: two amplitude-modulated tones, 4000 samples.
//! * `example2`: five amplitude-modulated tones, 2^20 samples.
//! * `lod_analog`: a daily series shaped like length-of-day records: slow
//!   trend, decadal, annual, semiannual, monthly and fortnightly terms.

use super::SyntheticSpec;

pub const EXAMPLE1_JSON: &str = include_str!("../../fixtures/example1.json");
pub const EXAMPLE2_JSON: &str = include_str!("../../fixtures/example2.json");
pub const LOD_ANALOG_JSON: &str = include_str!("../../fixtures/lod_analog.json");

pub fn example1() -> SyntheticSpec {
    SyntheticSpec::from_json(EXAMPLE1_JSON).expect("example1 fixture is valid")
}

pub fn example2() -> SyntheticSpec {
    SyntheticSpec::from_json(EXAMPLE2_JSON).expect("example2 fixture is valid")
}

pub fn lod_analog() -> SyntheticSpec {
    SyntheticSpec::from_json(LOD_ANALOG_JSON).expect("lod_analog fixture is valid")
}

/// Looks a fixture up by name.
pub fn by_name(name: &str) -> Option<SyntheticSpec> {
    match name {
        "example1" => Some(example1()),
        "example2" => Some(example2()),
        "lod_analog" => Some(lod_analog()),
        _ => None,
    }
}
