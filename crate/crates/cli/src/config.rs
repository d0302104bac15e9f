//! Run configuration files (TOML, `schema_version = 1`).
//!
//! Unknown keys are rejected. Emitters, modes and levels are referenced
//! either by label or by 1-based position. Physical quantities carry a unit
//! suffix (see [`crate::quantity`]). The preset files under `presets/` are
//! complete worked examples of the grammar.

use cqed_core::prelude::*;
use std::result::Result;
use cqed_core::spin::{SpinCoupling, SpinfulEmitterSpec, SpinfulModeSpec};
use num_complex::Complex64 as C64;
use serde::Deserialize;

use crate::error::CliError;
use crate::quantity::{Kind, Quantity};

pub const SCHEMA_VERSION: u32 = 1;

/// Emitter, mode, level or partition reference: a label or a 1-based index.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Ref {
    Index(usize),
    Label(String),
}

impl std::fmt::Display for Ref {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ref::Index(i) => write!(f, "{i}"),
            Ref::Label(s) => write!(f, "'{s}'"),
        }
    }
}

impl From<&str> for Ref {
    fn from(s: &str) -> Self {
        match s.trim().parse::<usize>() {
            Ok(i) => Ref::Index(i),
            Err(_) => Ref::Label(s.trim().to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
enum Complex {
    Real(f64),
    Pair([f64; 2]),
}

impl Complex {
    fn value(&self) -> C64 {
        match *self {
            Complex::Real(x) => C64::new(x, 0.0),
            Complex::Pair([re, im]) => C64::new(re, im),
        }
    }
}

fn one() -> Complex {
    Complex::Real(1.0)
}

fn yes() -> bool {
    true
}

#[derive(Copy, Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SpinName {
    Up,
    Down,
}

impl From<SpinName> for Spin {
    fn from(s: SpinName) -> Self {
        match s {
            SpinName::Up => Spin::Up,
            SpinName::Down => Spin::Down,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema_version: u32,
    name: Option<String>,
    description: Option<String>,
    #[serde(default)]
    rwa: bool,
    #[serde(default)]
    emitters: Vec<RawEmitter>,
    #[serde(default)]
    modes: Vec<RawMode>,
    #[serde(default)]
    couplings: Vec<RawCoupling>,
    #[serde(default)]
    spin_emitters: Vec<RawSpinEmitter>,
    #[serde(default)]
    spin_modes: Vec<RawSpinMode>,
    #[serde(default)]
    spin_couplings: Vec<RawSpinCoupling>,
    #[serde(default)]
    dipole_dipole: Vec<RawPairCoupling>,
    initial: RawInitial,
    time: RawTime,
    #[serde(default)]
    observables: RawObservables,
    #[serde(default)]
    metadata: RawMetadata,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEmitter {
    label: Option<String>,
    levels: Option<Vec<String>>,
    energies: Vec<Quantity>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMode {
    label: Option<String>,
    frequency: Quantity,
    photon_cap: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoupling {
    name: Option<String>,
    emitter: Option<Ref>,
    lower: Ref,
    upper: Ref,
    mode: Option<Ref>,
    /// Given directly, or as field amplitude times dipole moment.
    strength: Option<Quantity>,
    field: Option<Quantity>,
    dipole: Option<Quantity>,
    /// Complex phase of the coupling constant, radians.
    #[serde(default)]
    phase: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpinEmitter {
    label: Option<String>,
    levels: Option<Vec<String>>,
    energies_up: Vec<Quantity>,
    energies_down: Vec<Quantity>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpinMode {
    label: Option<String>,
    frequency_up: Quantity,
    frequency_down: Quantity,
    cap_up: usize,
    cap_down: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpinCoupling {
    name: Option<String>,
    emitter: Option<Ref>,
    lower: Ref,
    lower_spin: SpinName,
    upper: Ref,
    upper_spin: SpinName,
    mode: Option<Ref>,
    polarization: SpinName,
    /// Given directly, or as field amplitude times dipole moment.
    strength: Option<Quantity>,
    field: Option<Quantity>,
    dipole: Option<Quantity>,
    /// Complex phase of the coupling constant, radians.
    #[serde(default)]
    phase: f64,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawPairs {
    All(String),
    List(Vec<[Ref; 2]>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPairCoupling {
    pairs: RawPairs,
    first_levels: [Ref; 2],
    second_levels: [Ref; 2],
    strength: Quantity,
    #[serde(default)]
    phase: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawInitial {
    Fock {
        levels: Vec<Ref>,
        photons: Vec<usize>,
    },
    Coherent {
        alpha: Vec<Complex>,
        levels: Vec<Ref>,
    },
    Superposition {
        terms: Vec<RawTerm>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    #[serde(default = "one")]
    weight: Complex,
    levels: Vec<Ref>,
    photons: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    t_start: Option<Quantity>,
    t_end: Quantity,
    steps: usize,
    reference_frequency: Option<Quantity>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObservables {
    #[serde(default = "yes")]
    levels: bool,
    #[serde(default)]
    level_sums: Vec<RawLevelSum>,
    #[serde(default)]
    states: Vec<RawState>,
    #[serde(default)]
    photon_numbers: bool,
    #[serde(default)]
    photon_distribution: bool,
    #[serde(default = "yes")]
    annihilation: bool,
    #[serde(default)]
    ladders: Vec<RawLadder>,
    #[serde(default = "yes")]
    commutators: bool,
    #[serde(default)]
    concurrence: RawConcurrence,
}

impl Default for RawObservables {
    fn default() -> Self {
        Self {
            levels: true,
            level_sums: vec![],
            states: vec![],
            photon_numbers: false,
            photon_distribution: false,
            annihilation: true,
            ladders: vec![],
            commutators: true,
            concurrence: RawConcurrence::default(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLevelSum {
    name: String,
    emitter: Option<Ref>,
    levels: Vec<Ref>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    name: Option<String>,
    levels: Vec<Ref>,
    photons: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLadder {
    emitter: Option<Ref>,
    to: Ref,
    from: Ref,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawConcurrence {
    Flag(bool),
    Splits(Vec<Vec<Ref>>),
}

impl Default for RawConcurrence {
    fn default() -> Self {
        RawConcurrence::Flag(true)
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMetadata {
    #[serde(default)]
    notes: Vec<String>,
}

/// Initial state of a run, with all references resolved to 0-based indices.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    Fock(BasisState),
    Coherent { alphas: Vec<C64>, levels: Vec<usize> },
    Superposition(Vec<(C64, BasisState)>),
}

impl InitialState {
    pub fn build(&self, config: &SystemConfig) -> cqed_core::Result<StateVector> {
        match self {
            InitialState::Fock(b) => fock_state(config, b),
            InitialState::Coherent { alphas, levels } => {
                coherent_state(config, alphas, &EmitterState::Levels(levels.clone()))
            }
            InitialState::Superposition(terms) => superposition(config, terms),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeSpec {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    /// `ω_ref` for the normalized time column; the first mode frequency
    /// when not given.
    pub reference_frequency: Option<f64>,
}

/// One requested output quantity and its column name.
#[derive(Clone, Debug, PartialEq)]
pub enum Observable {
    State { name: String, basis: BasisState },
    Level { name: String, emitter: usize, level: usize },
    LevelSum { name: String, emitter: usize, levels: Vec<usize> },
    PhotonNumber { name: String, mode: usize },
    PhotonProbability { name: String, mode: usize, count: usize },
    Annihilation { name: String, mode: usize },
    Ladder { name: String, emitter: usize, to: usize, from: usize },
    Commutator { name: String, emitter: usize, to: usize, from: usize },
    Concurrence { name: String, split: Bipartition },
}

impl Observable {
    pub fn name(&self) -> &str {
        match self {
            Observable::State { name, .. }
            | Observable::Level { name, .. }
            | Observable::LevelSum { name, .. }
            | Observable::PhotonNumber { name, .. }
            | Observable::PhotonProbability { name, .. }
            | Observable::Annihilation { name, .. }
            | Observable::Ladder { name, .. }
            | Observable::Commutator { name, .. }
            | Observable::Concurrence { name, .. } => name,
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Observable::Annihilation { .. } | Observable::Ladder { .. })
    }
}

/// A coupling constant with a user-facing name, kept for reporting
/// coupling-to-frequency ratios.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedCoupling {
    pub name: String,
    /// `|κ|` in rad/s.
    pub strength: f64,
    /// Frequency of the coupled mode, rad/s.
    pub mode_frequency: f64,
}

impl NamedCoupling {
    pub fn ratio(&self) -> f64 {
        self.strength / self.mode_frequency
    }
}

/// A fully validated run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub name: String,
    pub description: Option<String>,
    pub notes: Vec<String>,
    /// Scalar system; spinful input is already expanded.
    pub system: SystemConfig,
    pub spinful: bool,
    pub emitter_names: Vec<String>,
    pub couplings: Vec<NamedCoupling>,
    pub initial: InitialState,
    pub time: TimeSpec,
    pub observables: Vec<Observable>,
}

fn invalid(key: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Invalid { key: key.into(), message: message.into() }
}

fn quantity(q: &Quantity, kind: Kind, key: &str) -> Result<f64, CliError> {
    q.to_si(kind).map_err(|m| invalid(key, m))
}

/// Parses and validates a config from TOML text. `origin` names the source
/// in the run metadata when the file has no `name`.
pub fn parse_str(text: &str, origin: &str) -> Result<RunSpec, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    Resolver::build(raw, origin)
}

pub fn load_config(path: &std::path::Path) -> Result<RunSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let origin = path.file_stem().and_then(|s| s.to_str()).unwrap_or("config");
    parse_str(&text, origin).map_err(|e| match e {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Lookup tables used while resolving references.
struct Resolver {
    config: SystemConfig,
    emitter_names: Vec<String>,
    mode_names: Vec<String>,
}

impl Resolver {
    fn build(raw: RawConfig, origin: &str) -> Result<RunSpec, CliError> {
        if raw.schema_version != SCHEMA_VERSION {
            return Err(invalid(
                "schema_version",
                format!("unsupported version {} (this build reads {SCHEMA_VERSION})", raw.schema_version),
            ));
        }
        let spinful = !(raw.spin_emitters.is_empty() && raw.spin_modes.is_empty() && raw.spin_couplings.is_empty());
        if spinful && !(raw.emitters.is_empty() && raw.modes.is_empty() && raw.couplings.is_empty()) {
            return Err(invalid(
                "spin_emitters",
                "spinful sections cannot be mixed with emitters/modes/couplings in one file",
            ));
        }
        let (mut r, couplings) = if spinful { Self::spinful(&raw)? } else { Self::scalar(&raw)? };
        r.config.rwa = raw.rwa;
        r.dipole_dipole(&raw.dipole_dipole)?;
        r.config.validate().map_err(|e| invalid("system", e.to_string()))?;
        dimension(&r.config).map_err(|e| invalid("system", e.to_string()))?;

        let initial = r.initial(&raw.initial)?;
        let time = time_spec(&raw.time)?;
        let observables = r.observables(&raw.observables)?;
        Ok(RunSpec {
            name: raw.name.clone().unwrap_or_else(|| origin.to_string()),
            description: raw.description.clone(),
            notes: raw.metadata.notes.clone(),
            system: r.config,
            spinful,
            emitter_names: r.emitter_names,
            couplings,
            initial,
            time,
            observables,
        })
    }

    fn scalar(raw: &RawConfig) -> Result<(Self, Vec<NamedCoupling>), CliError> {
        let mut emitters = Vec::new();
        let mut names = Vec::new();
        for (n, e) in raw.emitters.iter().enumerate() {
            let key = format!("emitters[{}]", n + 1);
            let energies = e
                .energies
                .iter()
                .enumerate()
                .map(|(i, q)| quantity(q, Kind::Frequency, &format!("{key}.energies[{}]", i + 1)))
                .collect::<Result<Vec<_>, _>>()?;
            let mut spec = EmitterSpec::new(energies);
            if let Some(levels) = &e.levels {
                if levels.len() != spec.level_count() {
                    return Err(invalid(
                        format!("{key}.levels"),
                        format!("{} labels for {} energies", levels.len(), spec.level_count()),
                    ));
                }
                spec = spec.with_labels(levels.clone());
            }
            emitters.push(spec);
            names.push(e.label.clone().unwrap_or_else(|| format!("emitter{}", n + 1)));
        }
        let mut modes = Vec::new();
        for (v, m) in raw.modes.iter().enumerate() {
            let key = format!("modes[{}]", v + 1);
            let w = quantity(&m.frequency, Kind::Frequency, &format!("{key}.frequency"))?;
            let label = m.label.clone().unwrap_or_else(|| format!("mode{}", v + 1));
            modes.push(ModeSpec::new(w, m.photon_cap).with_label(label));
        }
        let mut r = Self::new(SystemConfig::new(emitters, modes), names)?;
        let mut named = Vec::new();
        for (c, raw_c) in raw.couplings.iter().enumerate() {
            let key = format!("couplings[{}]", c + 1);
            let n = r.emitter(raw_c.emitter.as_ref(), &format!("{key}.emitter"))?;
            let lower = r.level(n, &raw_c.lower, &format!("{key}.lower"))?;
            let upper = r.level(n, &raw_c.upper, &format!("{key}.upper"))?;
            let v = r.mode(raw_c.mode.as_ref(), &format!("{key}.mode"))?;
            let kappa = strength([&raw_c.strength, &raw_c.field, &raw_c.dipole], raw_c.phase, &key)?;
            if let Some(name) = &raw_c.name {
                named.push(NamedCoupling {
                    name: name.clone(),
                    strength: kappa.norm(),
                    mode_frequency: r.config.modes[v].frequency,
                });
            }
            r.config.add_field_coupling(n, lower, upper, v, kappa);
        }
        Ok((r, named))
    }

    fn spinful(raw: &RawConfig) -> Result<(Self, Vec<NamedCoupling>), CliError> {
        let mut emitters = Vec::new();
        let mut names = Vec::new();
        for (n, e) in raw.spin_emitters.iter().enumerate() {
            let key = format!("spin_emitters[{}]", n + 1);
            let conv = |qs: &[Quantity], field: &str| {
                qs.iter()
                    .enumerate()
                    .map(|(i, q)| quantity(q, Kind::Frequency, &format!("{key}.{field}[{}]", i + 1)))
                    .collect::<Result<Vec<_>, _>>()
            };
            let mut spec = SpinfulEmitterSpec::new(conv(&e.energies_up, "energies_up")?, conv(&e.energies_down, "energies_down")?);
            if spec.energies_up.len() != spec.energies_down.len() {
                return Err(invalid(
                    format!("{key}.energies_down"),
                    format!("{} down energies for {} up energies", spec.energies_down.len(), spec.energies_up.len()),
                ));
            }
            if let Some(levels) = &e.levels {
                if levels.len() != spec.level_count() {
                    return Err(invalid(
                        format!("{key}.levels"),
                        format!("{} labels for {} levels", levels.len(), spec.level_count()),
                    ));
                }
                spec = spec.with_labels(levels.clone());
            }
            emitters.push(spec);
            names.push(e.label.clone().unwrap_or_else(|| format!("emitter{}", n + 1)));
        }
        let mut modes = Vec::new();
        for (v, m) in raw.spin_modes.iter().enumerate() {
            let key = format!("spin_modes[{}]", v + 1);
            let up = quantity(&m.frequency_up, Kind::Frequency, &format!("{key}.frequency_up"))?;
            let down = quantity(&m.frequency_down, Kind::Frequency, &format!("{key}.frequency_down"))?;
            let label = m.label.clone().unwrap_or_else(|| format!("mode{}", v + 1));
            modes.push(SpinfulModeSpec::new(up, down, m.cap_up, m.cap_down).with_label(label));
        }
        let mut spin = SpinfulConfig { emitters, modes, couplings: vec![], dipole_dipole: vec![], rwa: raw.rwa };
        // base-level lookups against the unexpanded emitters
        let base_level = |n: usize, r: &Ref, key: &str| -> Result<usize, CliError> {
            let e = &spin.emitters[n];
            match r {
                Ref::Index(i) if (1..=e.level_count()).contains(i) => Ok(i - 1),
                Ref::Label(s) => e
                    .labels
                    .as_ref()
                    .and_then(|l| l.iter().position(|x| x == s))
                    .ok_or_else(|| invalid(key, format!("emitter has no level labelled '{s}'"))),
                _ => Err(invalid(key, format!("level {r} out of range 1..={}", e.level_count()))),
            }
        };
        let pick = |r: Option<&Ref>, names: &[String], what: &str, key: &str| -> Result<usize, CliError> {
            resolve_named(r, names, what, key)
        };
        let mode_names: Vec<String> =
            spin.modes.iter().map(|m| m.label.clone().unwrap_or_default()).collect();
        let mut named = Vec::new();
        let mut couplings = Vec::new();
        for (c, raw_c) in raw.spin_couplings.iter().enumerate() {
            let key = format!("spin_couplings[{}]", c + 1);
            let n = pick(raw_c.emitter.as_ref(), &names, "emitter", &format!("{key}.emitter"))?;
            let lower = base_level(n, &raw_c.lower, &format!("{key}.lower"))?;
            let upper = base_level(n, &raw_c.upper, &format!("{key}.upper"))?;
            let v = pick(raw_c.mode.as_ref(), &mode_names, "mode", &format!("{key}.mode"))?;
            let kappa = strength([&raw_c.strength, &raw_c.field, &raw_c.dipole], raw_c.phase, &key)?;
            let polarization: Spin = raw_c.polarization.into();
            let (lower_spin, upper_spin): (Spin, Spin) = (raw_c.lower_spin.into(), raw_c.upper_spin.into());
            if lower_spin == upper_spin || polarization != lower_spin {
                return Err(invalid(
                    &key,
                    "violates the spin selection rule (allowed: i up <-> j down via up, i down <-> j up via down)",
                ));
            }
            if let Some(name) = &raw_c.name {
                let m = &spin.modes[v];
                named.push(NamedCoupling {
                    name: name.clone(),
                    strength: kappa.norm(),
                    mode_frequency: if polarization == Spin::Up { m.frequency_up } else { m.frequency_down },
                });
            }
            couplings.push(SpinCoupling {
                emitter: n,
                lower: (lower, lower_spin),
                upper: (upper, upper_spin),
                mode: v,
                polarization,
                strength: kappa,
            });
        }
        spin.couplings = couplings;
        let config = expand_spin(&spin).map_err(|e| invalid("spin_couplings", e.to_string()))?;
        Ok((Self::new(config, names)?, named))
    }

    fn new(config: SystemConfig, emitter_names: Vec<String>) -> Result<Self, CliError> {
        let mode_names: Vec<String> =
            config.modes.iter().enumerate().map(|(v, m)| m.label.clone().unwrap_or_else(|| format!("mode{}", v + 1))).collect();
        let mut all: Vec<&String> = emitter_names.iter().chain(&mode_names).collect();
        all.sort();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid("labels", format!("emitter/mode label '{}' is used twice", w[0])));
        }
        if config.emitters.is_empty() && config.modes.is_empty() {
            return Err(invalid("emitters", "the system needs at least one emitter or mode"));
        }
        Ok(Self { config, emitter_names, mode_names })
    }

    fn emitter(&self, r: Option<&Ref>, key: &str) -> Result<usize, CliError> {
        resolve_named(r, &self.emitter_names, "emitter", key)
    }

    fn mode(&self, r: Option<&Ref>, key: &str) -> Result<usize, CliError> {
        resolve_named(r, &self.mode_names, "mode", key)
    }

    fn level(&self, emitter: usize, r: &Ref, key: &str) -> Result<usize, CliError> {
        let e = &self.config.emitters[emitter];
        match r {
            Ref::Index(i) if (1..=e.level_count()).contains(i) => Ok(i - 1),
            Ref::Index(i) => Err(invalid(
                key,
                format!("level {i} out of range 1..={} for emitter '{}'", e.level_count(), self.emitter_names[emitter]),
            )),
            Ref::Label(s) => e.level_by_label(s).ok_or_else(|| {
                invalid(key, format!("emitter '{}' has no level labelled '{s}'", self.emitter_names[emitter]))
            }),
        }
    }

    fn partition(&self, r: &Ref, key: &str) -> Result<usize, CliError> {
        let names: Vec<String> = self.emitter_names.iter().chain(&self.mode_names).cloned().collect();
        resolve_named(Some(r), &names, "partition", key)
    }

    fn dipole_dipole(&mut self, raw: &[RawPairCoupling]) -> Result<(), CliError> {
        let k = self.config.emitters.len();
        for (c, d) in raw.iter().enumerate() {
            let key = format!("dipole_dipole[{}]", c + 1);
            let pairs: Vec<(usize, usize)> = match &d.pairs {
                RawPairs::All(s) if s == "all" => (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect(),
                RawPairs::All(s) => {
                    return Err(invalid(format!("{key}.pairs"), format!("expected \"all\" or a list of pairs, got '{s}'")))
                }
                RawPairs::List(list) => list
                    .iter()
                    .enumerate()
                    .map(|(p, [a, b])| {
                        let pk = format!("{key}.pairs[{}]", p + 1);
                        Ok((self.emitter(Some(a), &pk)?, self.emitter(Some(b), &pk)?))
                    })
                    .collect::<Result<_, CliError>>()?,
            };
            if pairs.is_empty() {
                return Err(invalid(format!("{key}.pairs"), "no emitter pairs"));
            }
            let j = quantity(&d.strength, Kind::Frequency, &format!("{key}.strength"))?;
            let j = C64::from_polar(j, d.phase);
            for (a, b) in pairs {
                if a >= b {
                    return Err(invalid(
                        format!("{key}.pairs"),
                        format!(
                            "pair ('{}', '{}') must list the earlier emitter first and two distinct emitters",
                            self.emitter_names[a], self.emitter_names[b]
                        ),
                    ));
                }
                let fl = (self.level(a, &d.first_levels[0], &key)?, self.level(a, &d.first_levels[1], &key)?);
                let sl = (self.level(b, &d.second_levels[0], &key)?, self.level(b, &d.second_levels[1], &key)?);
                self.config.add_dipole_coupling(a, b, fl, sl, j);
            }
        }
        Ok(())
    }

    fn basis(&self, levels: &[Ref], photons: &[usize], key: &str) -> Result<BasisState, CliError> {
        let k = self.config.emitters.len();
        if levels.len() != k {
            return Err(invalid(format!("{key}.levels"), format!("{} entries for {k} emitters", levels.len())));
        }
        if photons.len() != self.config.modes.len() {
            return Err(invalid(
                format!("{key}.photons"),
                format!("{} entries for {} modes", photons.len(), self.config.modes.len()),
            ));
        }
        let lv = levels
            .iter()
            .enumerate()
            .map(|(n, r)| self.level(n, r, &format!("{key}.levels[{}]", n + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        for (v, (&f, m)) in photons.iter().zip(&self.config.modes).enumerate() {
            if f > m.photon_cap {
                return Err(invalid(
                    format!("{key}.photons[{}]", v + 1),
                    format!("{f} photons exceed photon_cap {} of mode '{}'", m.photon_cap, self.mode_names[v]),
                ));
            }
        }
        Ok(BasisState::new(lv, photons.to_vec()))
    }

    fn initial(&self, raw: &RawInitial) -> Result<InitialState, CliError> {
        Ok(match raw {
            RawInitial::Fock { levels, photons } => InitialState::Fock(self.basis(levels, photons, "initial")?),
            RawInitial::Coherent { alpha, levels } => {
                if alpha.len() != self.config.modes.len() {
                    return Err(invalid(
                        "initial.alpha",
                        format!("{} amplitudes for {} modes", alpha.len(), self.config.modes.len()),
                    ));
                }
                let zeros = vec![0; self.config.modes.len()];
                let b = self.basis(levels, &zeros, "initial")?;
                InitialState::Coherent { alphas: alpha.iter().map(Complex::value).collect(), levels: b.levels }
            }
            RawInitial::Superposition { terms } => {
                if terms.is_empty() {
                    return Err(invalid("initial.terms", "needs at least one term"));
                }
                let terms = terms
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        Ok((t.weight.value(), self.basis(&t.levels, &t.photons, &format!("initial.terms[{}]", i + 1))?))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                let state = InitialState::Superposition(terms);
                state.build(&self.config).map_err(|e| invalid("initial.terms", e.to_string()))?;
                state
            }
        })
    }

    fn prefix(&self, emitter: usize) -> String {
        if self.config.emitters.len() == 1 {
            String::new()
        } else {
            format!("{}_", self.emitter_names[emitter])
        }
    }

    fn mode_suffix(&self, mode: usize) -> String {
        if self.config.modes.len() == 1 {
            String::new()
        } else {
            format!("_{}", self.mode_names[mode])
        }
    }

    fn level_name(&self, emitter: usize, level: usize) -> String {
        self.config.emitters[emitter].label(level)
    }

    fn observables(&self, raw: &RawObservables) -> Result<Vec<Observable>, CliError> {
        let mut out = Vec::new();
        for (i, s) in raw.states.iter().enumerate() {
            let key = format!("observables.states[{}]", i + 1);
            let basis = self.basis(&s.levels, &s.photons, &key)?;
            let name = s.name.clone().unwrap_or_else(|| {
                let mut parts: Vec<String> =
                    basis.levels.iter().enumerate().map(|(n, &l)| self.level_name(n, l)).collect();
                parts.extend(basis.photons.iter().map(|f| format!("n{f}")));
                format!("P_{}", parts.join("_"))
            });
            out.push(Observable::State { name, basis });
        }
        if raw.levels {
            for (n, e) in self.config.emitters.iter().enumerate() {
                for l in 0..e.level_count() {
                    let name = format!("P_{}{}", self.prefix(n), self.level_name(n, l));
                    out.push(Observable::Level { name, emitter: n, level: l });
                }
            }
        }
        for (i, s) in raw.level_sums.iter().enumerate() {
            let key = format!("observables.level_sums[{}]", i + 1);
            let n = self.emitter(s.emitter.as_ref(), &format!("{key}.emitter"))?;
            let levels = s
                .levels
                .iter()
                .map(|r| self.level(n, r, &format!("{key}.levels")))
                .collect::<Result<Vec<_>, _>>()?;
            if levels.is_empty() {
                return Err(invalid(format!("{key}.levels"), "needs at least one level"));
            }
            out.push(Observable::LevelSum { name: s.name.clone(), emitter: n, levels });
        }
        if raw.photon_numbers {
            for v in 0..self.config.modes.len() {
                out.push(Observable::PhotonNumber { name: format!("n{}", self.mode_suffix(v)), mode: v });
            }
        }
        if raw.photon_distribution {
            for (v, m) in self.config.modes.iter().enumerate() {
                for f in 0..=m.photon_cap {
                    out.push(Observable::PhotonProbability {
                        name: format!("P{}_n{f}", self.mode_suffix(v)),
                        mode: v,
                        count: f,
                    });
                }
            }
        }
        if raw.annihilation {
            for v in 0..self.config.modes.len() {
                out.push(Observable::Annihilation { name: format!("a{}", self.mode_suffix(v)), mode: v });
            }
        }
        let mut ladders = Vec::new();
        for (i, l) in raw.ladders.iter().enumerate() {
            let key = format!("observables.ladders[{}]", i + 1);
            let emitters: Vec<usize> = match &l.emitter {
                Some(r) => vec![self.emitter(Some(r), &format!("{key}.emitter"))?],
                None => (0..self.config.emitters.len()).collect(),
            };
            if emitters.is_empty() {
                return Err(invalid(key, "the system has no emitters"));
            }
            for n in emitters {
                let to = self.level(n, &l.to, &format!("{key}.to"))?;
                let from = self.level(n, &l.from, &format!("{key}.from"))?;
                if to == from {
                    return Err(invalid(key, "'to' and 'from' must be different levels"));
                }
                let suffix = format!("{}{}_{}", self.prefix(n), self.level_name(n, to), self.level_name(n, from));
                ladders.push((suffix, n, to, from));
            }
        }
        for (suffix, emitter, to, from) in &ladders {
            out.push(Observable::Ladder { name: format!("sigma_{suffix}"), emitter: *emitter, to: *to, from: *from });
        }
        if raw.commutators {
            for (suffix, emitter, to, from) in &ladders {
                out.push(Observable::Commutator {
                    name: format!("comm_{suffix}"),
                    emitter: *emitter,
                    to: *to,
                    from: *from,
                });
            }
        }
        let partitions = self.config.partition_count();
        match &raw.concurrence {
            RawConcurrence::Flag(false) => {}
            RawConcurrence::Flag(true) => {
                if !self.config.emitters.is_empty() && !self.config.modes.is_empty() {
                    let split = Bipartition::new(0..self.config.emitters.len(), partitions)
                        .map_err(|e| invalid("observables.concurrence", e.to_string()))?;
                    out.push(Observable::Concurrence { name: "concurrence".into(), split });
                }
            }
            RawConcurrence::Splits(splits) => {
                for (i, s) in splits.iter().enumerate() {
                    let key = format!("observables.concurrence[{}]", i + 1);
                    let split = self.split(s, &key)?;
                    let name = if splits.len() == 1 { "concurrence".to_string() } else { self.split_name(&split) };
                    out.push(Observable::Concurrence { name, split });
                }
            }
        }
        if out.is_empty() {
            return Err(invalid("observables", "no observables selected"));
        }
        check_unique(&out)?;
        Ok(out)
    }

    fn split(&self, refs: &[Ref], key: &str) -> Result<Bipartition, CliError> {
        let a = refs.iter().map(|r| self.partition(r, key)).collect::<Result<Vec<_>, _>>()?;
        Bipartition::new(a, self.config.partition_count()).map_err(|e| invalid(key, e.to_string()))
    }

    fn split_name(&self, split: &Bipartition) -> String {
        let names: Vec<&str> = self.emitter_names.iter().chain(&self.mode_names).map(String::as_str).collect();
        let a: Vec<&str> = split.subsystem_a().iter().map(|&p| names[p]).collect();
        format!("concurrence_{}", a.join("+"))
    }
}

fn resolve_named(r: Option<&Ref>, names: &[String], what: &str, key: &str) -> Result<usize, CliError> {
    match r {
        None if names.len() == 1 => Ok(0),
        None => Err(invalid(key, format!("required: the system has {} {what}s", names.len()))),
        Some(Ref::Index(i)) if (1..=names.len()).contains(i) => Ok(i - 1),
        Some(Ref::Index(i)) => Err(invalid(key, format!("{what} {i} out of range 1..={}", names.len()))),
        Some(Ref::Label(s)) => names
            .iter()
            .position(|x| x == s)
            .ok_or_else(|| invalid(key, format!("no {what} labelled '{s}' (have: {})", names.join(", ")))),
    }
}

fn strength(given: [&Option<Quantity>; 3], phase: f64, key: &str) -> Result<C64, CliError> {
    let magnitude = match (given[0], given[1], given[2]) {
        (Some(s), None, None) => quantity(s, Kind::Frequency, &format!("{key}.strength"))?,
        (None, Some(f), Some(d)) => rabi_frequency(
            quantity(f, Kind::Field, &format!("{key}.field"))?,
            quantity(d, Kind::Dipole, &format!("{key}.dipole"))?,
        ),
        _ => return Err(invalid(key, "give either 'strength' or both 'field' and 'dipole'")),
    };
    if !phase.is_finite() {
        return Err(invalid(format!("{key}.phase"), "must be finite"));
    }
    Ok(C64::from_polar(magnitude, phase))
}

fn time_spec(raw: &RawTime) -> Result<TimeSpec, CliError> {
    let t_start = match &raw.t_start {
        Some(q) => quantity(q, Kind::Time, "time.t_start")?,
        None => 0.0,
    };
    let t_end = quantity(&raw.t_end, Kind::Time, "time.t_end")?;
    let reference_frequency = match &raw.reference_frequency {
        Some(q) => {
            let w = quantity(q, Kind::Frequency, "time.reference_frequency")?;
            if w <= 0.0 {
                return Err(invalid("time.reference_frequency", "must be positive"));
            }
            Some(w)
        }
        None => None,
    };
    let spec = TimeSpec { t_start, t_end, steps: raw.steps, reference_frequency };
    spec.validate()?;
    Ok(spec)
}

impl TimeSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.t_end > self.t_start) {
            return Err(invalid("time.t_end", format!("must exceed t_start ({} s)", self.t_start)));
        }
        if self.steps == 0 {
            return Err(invalid("time.steps", "must be at least 1"));
        }
        Ok(())
    }
}

fn check_unique(obs: &[Observable]) -> Result<(), CliError> {
    let mut names: Vec<&str> = obs.iter().map(Observable::name).collect();
    names.extend(["time", "tau", "norm"]);
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(invalid("observables", format!("two columns would be named '{}'", w[0])));
    }
    Ok(())
}

impl RunSpec {
    fn resolver(&self) -> Resolver {
        let mode_names = self.system.modes.iter().map(|m| m.label.clone().unwrap_or_default()).collect();
        Resolver { config: self.system.clone(), emitter_names: self.emitter_names.clone(), mode_names }
    }

    /// Names of all partitions, emitters first.
    pub fn partition_names(&self) -> Vec<String> {
        let r = self.resolver();
        r.emitter_names.iter().chain(&r.mode_names).cloned().collect()
    }

    pub fn set_rwa(&mut self, rwa: bool) {
        self.system.rwa = rwa;
    }

    pub fn set_t_end(&mut self, t_end: f64) -> Result<(), CliError> {
        self.time.t_end = t_end;
        self.time.validate()
    }

    pub fn set_steps(&mut self, steps: usize) -> Result<(), CliError> {
        self.time.steps = steps;
        self.time.validate()
    }

    /// Replaces every concurrence column with a single one across `a` and
    /// its complement.
    pub fn set_bipartition(&mut self, a: &[Ref]) -> Result<(), CliError> {
        let split = self.resolver().split(a, "--bipartition")?;
        self.observables.retain(|o| !matches!(o, Observable::Concurrence { .. }));
        self.observables.push(Observable::Concurrence { name: "concurrence".into(), split });
        Ok(())
    }

    /// Replaces the initial state.
    pub fn set_initial(&mut self, initial: InitialState) -> Result<(), CliError> {
        initial.build(&self.system).map_err(|e| invalid("initial", e.to_string()))?;
        self.initial = initial;
        Ok(())
    }

    /// Adds a basis-state probability column.
    pub fn add_state_observable(&mut self, name: &str, basis: BasisState) -> Result<(), CliError> {
        StateIndexer::new(&self.system)
            .and_then(|i| i.index_of(&basis))
            .map_err(|e| invalid("observables.states", e.to_string()))?;
        self.observables.insert(0, Observable::State { name: name.into(), basis });
        check_unique(&self.observables)
    }

    /// Level index of `label` on emitter `emitter`.
    pub fn level_index(&self, emitter: usize, label: &str) -> Option<usize> {
        self.system.emitters.get(emitter)?.level_by_label(label)
    }
}
