//! Spinful emitters and polarized modes, expanded into an equivalent
//! scalar [`SystemConfig`].
//!
//! Every base level `i` of a spinful emitter becomes two scalar levels
//! ordered `(1↑, 1↓, 2↑, 2↓, …)`, and every polarized mode becomes two
//! scalar modes `(ν↑, ν↓)`. Field couplings must obey the spin selection
//! rule: `i↑ ↔ j↓` couples only to `ν↑`, `i↓ ↔ j↑` only to `ν↓`
//! (`i < j`). Under RWA the charge `N_atom↑ − n↑ + n↓` is conserved; the
//! counter-rotating terms change it by ±2, so only its parity survives
//! without RWA.

use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{DipoleCoupling, EmitterSpec, FieldCoupling, ModeSpec, StateIndexer, SystemConfig};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn flipped(self) -> Self {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    fn offset(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            Spin::Up => "up",
            Spin::Down => "down",
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.suffix())
    }
}

/// Scalar level index of base level `level` with spin `spin`.
pub fn expanded_level(level: usize, spin: Spin) -> usize {
    2 * level + spin.offset()
}

/// Scalar mode index of polarized mode `mode` with polarization `pol`.
pub fn expanded_mode(mode: usize, pol: Spin) -> usize {
    2 * mode + pol.offset()
}

/// Emitter with per-spin level energies (rad/s).
#[derive(Clone, Debug, PartialEq)]
pub struct SpinfulEmitterSpec {
    pub energies_up: Vec<f64>,
    pub energies_down: Vec<f64>,
    pub labels: Option<Vec<String>>,
}

impl SpinfulEmitterSpec {
    pub fn new(energies_up: Vec<f64>, energies_down: Vec<f64>) -> Self {
        Self { energies_up, energies_down, labels: None }
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        self.labels = Some(labels.into_iter().map(Into::into).collect());
        self
    }

    pub fn level_count(&self) -> usize {
        self.energies_up.len()
    }

    fn base_label(&self, level: usize) -> String {
        self.labels
            .as_ref()
            .and_then(|l| l.get(level).cloned())
            .unwrap_or_else(|| (level + 1).to_string())
    }
}

/// Mode with two circular polarizations (↑ ≡ H, ↓ ≡ V).
#[derive(Clone, Debug, PartialEq)]
pub struct SpinfulModeSpec {
    pub frequency_up: f64,
    pub frequency_down: f64,
    pub cap_up: usize,
    pub cap_down: usize,
    pub label: Option<String>,
}

impl SpinfulModeSpec {
    pub fn new(frequency_up: f64, frequency_down: f64, cap_up: usize, cap_down: usize) -> Self {
        Self { frequency_up, frequency_down, cap_up, cap_down, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

/// Field coupling between spin-resolved levels `lower` and `upper` of one
/// emitter and one polarization of one mode.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinCoupling {
    pub emitter: usize,
    pub lower: (usize, Spin),
    pub upper: (usize, Spin),
    pub mode: usize,
    pub polarization: Spin,
    pub strength: C64,
}

impl fmt::Display for SpinCoupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "emitter {} level {}{} <-> level {}{} via mode {} {}",
            self.emitter + 1,
            self.lower.0 + 1,
            self.lower.1,
            self.upper.0 + 1,
            self.upper.1,
            self.mode + 1,
            self.polarization
        )
    }
}

/// Generic pairwise coupling between spin-resolved transitions of two
/// emitters; passed through to the scalar pair term.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinDipoleCoupling {
    pub first: usize,
    pub second: usize,
    pub first_levels: ((usize, Spin), (usize, Spin)),
    pub second_levels: ((usize, Spin), (usize, Spin)),
    pub strength: C64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpinfulConfig {
    pub emitters: Vec<SpinfulEmitterSpec>,
    pub modes: Vec<SpinfulModeSpec>,
    pub couplings: Vec<SpinCoupling>,
    pub dipole_dipole: Vec<SpinDipoleCoupling>,
    pub rwa: bool,
}

impl SpinfulConfig {
    fn validate(&self) -> Result<()> {
        for (n, e) in self.emitters.iter().enumerate() {
            if e.energies_up.is_empty() || e.energies_up.len() != e.energies_down.len() {
                return Err(Error::Config(format!(
                    "spinful emitter {} needs the same nonzero number of up and down energies ({} vs {})",
                    n + 1,
                    e.energies_up.len(),
                    e.energies_down.len()
                )));
            }
            if e.energies_up.iter().chain(&e.energies_down).any(|x| !x.is_finite()) {
                return Err(Error::Config(format!("spinful emitter {} has a non-finite energy", n + 1)));
            }
        }
        for (v, m) in self.modes.iter().enumerate() {
            if !(m.frequency_up > 0.0 && m.frequency_down > 0.0) {
                return Err(Error::Config(format!("polarized mode {} needs positive frequencies", v + 1)));
            }
        }
        for c in &self.couplings {
            let Some(e) = self.emitters.get(c.emitter) else {
                return Err(Error::Config(format!("{c}: emitter does not exist")));
            };
            if c.mode >= self.modes.len() {
                return Err(Error::Config(format!("{c}: mode does not exist")));
            }
            if c.lower.0 >= c.upper.0 || c.upper.0 >= e.level_count() {
                return Err(Error::Config(format!("{c}: needs lower < upper within the emitter's levels")));
            }
            if c.lower.1 == c.upper.1 || c.polarization != c.lower.1 {
                return Err(Error::Config(format!(
                    "{c}: violates the spin selection rule (allowed: i up <-> j down via up, i down <-> j up via down)"
                )));
            }
        }
        Ok(())
    }
}

/// Expands a spinful configuration into the equivalent scalar one.
pub fn expand_spin(config: &SpinfulConfig) -> Result<SystemConfig> {
    config.validate()?;
    let emitters = config
        .emitters
        .iter()
        .map(|e| {
            let mut energies = Vec::with_capacity(2 * e.level_count());
            let mut labels = Vec::with_capacity(2 * e.level_count());
            for i in 0..e.level_count() {
                for spin in [Spin::Up, Spin::Down] {
                    energies.push(match spin {
                        Spin::Up => e.energies_up[i],
                        Spin::Down => e.energies_down[i],
                    });
                    labels.push(format!("{}_{}", e.base_label(i), spin.suffix()));
                }
            }
            EmitterSpec { energies, labels: Some(labels) }
        })
        .collect();
    let modes = config
        .modes
        .iter()
        .enumerate()
        .flat_map(|(v, m)| {
            let base = m.label.clone().unwrap_or_else(|| (v + 1).to_string());
            [
                ModeSpec::new(m.frequency_up, m.cap_up).with_label(format!("{base}_up")),
                ModeSpec::new(m.frequency_down, m.cap_down).with_label(format!("{base}_down")),
            ]
        })
        .collect();
    let field_couplings = config
        .couplings
        .iter()
        .map(|c| FieldCoupling {
            emitter: c.emitter,
            lower: expanded_level(c.lower.0, c.lower.1),
            upper: expanded_level(c.upper.0, c.upper.1),
            mode: expanded_mode(c.mode, c.polarization),
            strength: c.strength,
        })
        .collect();
    let dipole_dipole = config
        .dipole_dipole
        .iter()
        .map(|d| {
            let map = |((i, si), (j, sj)): ((usize, Spin), (usize, Spin))| {
                (expanded_level(i, si), expanded_level(j, sj))
            };
            DipoleCoupling {
                first: d.first,
                second: d.second,
                first_levels: map(d.first_levels),
                second_levels: map(d.second_levels),
                strength: d.strength,
            }
        })
        .collect();
    let out = SystemConfig { emitters, modes, field_couplings, dipole_dipole, rwa: config.rwa };
    out.validate()?;
    Ok(out)
}

/// Spin charge `N_atom↑ − Σ_ν n_ν↑ + Σ_ν n_ν↓` of a basis index of an
/// expanded configuration.
pub fn spin_charge(idx: &StateIndexer, index: usize) -> i64 {
    let k = idx.emitter_count();
    let atoms = (0..k).filter(|&n| idx.digit(index, n) % 2 == 0).count() as i64;
    let photons: i64 = (0..idx.mode_count())
        .map(|v| {
            let n = idx.digit(index, k + v) as i64;
            if v % 2 == 0 {
                -n
            } else {
                n
            }
        })
        .sum();
    atoms + photons
}
