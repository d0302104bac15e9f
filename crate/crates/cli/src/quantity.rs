//! Unit-suffixed physical quantities such as `"829 meV"` or `"100 kV/cm"`.
//!
//! A bare number is read in the SI unit of its kind (rad/s, V/m, C*m, s).

use std::f64::consts::TAU;
use std::fmt;

use cqed_core::units;
use serde::Deserialize;

/// What a quantity measures; decides which unit suffixes are accepted.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Energies and frequencies, converted to angular frequency (rad/s).
    Frequency,
    /// Electric field amplitude in V/m.
    Field,
    /// Transition dipole moment in C*m.
    Dipole,
    /// Time in seconds.
    Time,
}

impl Kind {
    fn units(self) -> &'static str {
        match self {
            Kind::Frequency => "rad/s, Hz, kHz, MHz, GHz, THz, eV, meV, ueV, J, nm, um",
            Kind::Field => "V/m, kV/m, MV/m, V/cm, kV/cm, MV/cm",
            Kind::Dipole => "D, C*m",
            Kind::Time => "s, ms, us, ns, ps, fs, as",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Frequency => "frequency",
            Kind::Field => "field",
            Kind::Dipole => "dipole moment",
            Kind::Time => "time",
        })
    }
}

/// Raw quantity as written in a config file: a number or `"<number> <unit>"`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

impl Quantity {
    /// Value in the SI unit of `kind`.
    pub fn to_si(&self, kind: Kind) -> Result<f64, String> {
        match self {
            Quantity::Number(x) => finite(*x),
            Quantity::Text(s) => parse(s, kind),
        }
    }
}

fn finite(x: f64) -> Result<f64, String> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{x} is not a finite number"))
    }
}

/// Parses `"<number> [unit]"` into the SI unit of `kind`.
pub fn parse(text: &str, kind: Kind) -> Result<f64, String> {
    let text = text.trim();
    let split = (1..=text.len())
        .rev()
        .filter(|&i| text.is_char_boundary(i))
        .find(|&i| text[..i].trim().parse::<f64>().is_ok())
        .ok_or_else(|| format!("'{text}' does not start with a number"))?;
    let value = finite(text[..split].trim().parse::<f64>().unwrap())?;
    let unit = text[split..].trim();
    convert(value, unit, kind)
        .ok_or_else(|| format!("unknown {kind} unit '{unit}' in '{text}' (accepted: {})", kind.units()))
}

fn convert(x: f64, unit: &str, kind: Kind) -> Option<f64> {
    let v = match kind {
        Kind::Frequency => match unit {
            "" | "rad/s" => x,
            "Hz" => units::hertz_to_angular(x),
            "kHz" => units::hertz_to_angular(x * 1e3),
            "MHz" => units::hertz_to_angular(x * 1e6),
            "GHz" => units::hertz_to_angular(x * 1e9),
            "THz" => units::hertz_to_angular(x * 1e12),
            "eV" => units::ev_to_angular(x),
            "meV" => units::ev_to_angular(x * 1e-3),
            "ueV" => units::ev_to_angular(x * 1e-6),
            "J" => units::joule_to_angular(x),
            "nm" => units::wavelength_to_angular(x * 1e-9),
            "um" => units::wavelength_to_angular(x * 1e-6),
            _ => return None,
        },
        Kind::Field => match unit {
            "" | "V/m" => x,
            "kV/m" => x * 1e3,
            "MV/m" => x * 1e6,
            "V/cm" => x * 1e2,
            "kV/cm" => x * 1e5,
            "MV/cm" => x * 1e8,
            _ => return None,
        },
        Kind::Dipole => match unit {
            "D" => units::debye_to_coulomb_meter(x),
            "" | "C*m" | "C m" => x,
            _ => return None,
        },
        Kind::Time => match unit {
            "" | "s" => x,
            "ms" => x * 1e-3,
            "us" => x * 1e-6,
            "ns" => x * 1e-9,
            "ps" => x * 1e-12,
            "fs" => x * 1e-15,
            "as" => x * 1e-18,
            _ => return None,
        },
    };
    if kind == Kind::Frequency && matches!(unit, "nm" | "um") && x <= 0.0 {
        return None;
    }
    Some(v)
}

/// Optical period `2π/ω` of an angular frequency.
pub fn period(omega: f64) -> f64 {
    TAU / omega
}
