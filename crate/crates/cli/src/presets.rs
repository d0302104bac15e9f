//! Preset scenarios shipped as config files under `presets/`.

use crate::config::{parse_str, RunSpec};
use crate::error::CliError;

pub struct Preset {
    pub name: &'static str,
    pub source: &'static str,
}

macro_rules! preset {
    ($name:literal) => {
        Preset { name: $name, source: include_str!(concat!("../presets/", $name, ".toml")) }
    };
}

pub const PRESETS: &[Preset] = &[
    preset!("qw3-weak"),
    preset!("qw3-strong"),
    preset!("qw3-ultrastrong"),
    preset!("qd6-weak"),
    preset!("qd6-strong"),
    preset!("qd6-ultrastrong"),
    preset!("spin-lambda"),
];

pub fn find(name: &str) -> Result<&'static Preset, CliError> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| CliError::UnknownPreset {
        name: name.to_string(),
        available: PRESETS.iter().map(|p| p.name).collect::<Vec<_>>().join(", "),
    })
}

pub fn load(name: &str) -> Result<RunSpec, CliError> {
    parse_str(find(name)?.source, name)
}

/// Rounds to two significant figures, the precision of the published
/// coupling ratios.
fn two_significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let decimals = (1 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.decimals$}")
}

/// One line per preset: name, description and coupling-to-frequency ratios.
pub fn listing() -> Result<String, CliError> {
    let mut out = String::new();
    for p in PRESETS {
        let spec = load(p.name)?;
        let mut ratios: Vec<String> = Vec::new();
        for c in &spec.couplings {
            let entry = format!("{}/omega = {}", c.name, two_significant(c.ratio()));
            if !ratios.contains(&entry) {
                ratios.push(entry);
            }
        }
        out.push_str(&format!(
            "{:<16} {}  [{}]\n",
            p.name,
            spec.description.as_deref().unwrap_or(""),
            ratios.join(", ")
        ));
    }
    Ok(out)
}
