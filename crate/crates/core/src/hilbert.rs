//! Multipartite configuration and the tensor-product basis.
//!
//! A system is a list of emitters (each with `B_n` discrete levels) and a
//! list of truncated bosonic modes (each holding `0..=N_ν` photons). Basis
//! kets `|r_1..r_k, f_1..f_m⟩` are flattened with a mixed-radix code whose
//! digits are ordered emitters first, then modes, with the last digit
//! varying fastest. Levels are 0-based in this API.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// One emitter: its level energies in rad/s (ħ = 1).
#[derive(Clone, Debug, PartialEq)]
pub struct EmitterSpec {
    pub energies: Vec<f64>,
    pub labels: Option<Vec<String>>,
}

impl EmitterSpec {
    pub fn new(energies: Vec<f64>) -> Self {
        Self { energies, labels: None }
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        self.labels = Some(labels.into_iter().map(Into::into).collect());
        self
    }

    pub fn level_count(&self) -> usize {
        self.energies.len()
    }

    /// Human-readable name of a level, falling back to its 1-based number.
    pub fn label(&self, level: usize) -> String {
        self.labels
            .as_ref()
            .and_then(|l| l.get(level).cloned())
            .unwrap_or_else(|| (level + 1).to_string())
    }

    /// Resolves a level by label.
    pub fn level_by_label(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }
}

/// One cavity mode: angular frequency and photon cap.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSpec {
    pub frequency: f64,
    pub photon_cap: usize,
    pub label: Option<String>,
}

impl ModeSpec {
    pub fn new(frequency: f64, photon_cap: usize) -> Self {
        Self { frequency, photon_cap, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

/// Light–emitter coupling `(κ σ_ij + κ* σ_ji)(a_ν + a_ν†)` between levels
/// `lower < upper` of one emitter and one mode. `strength` is the combined
/// dipole-matrix-element × field-strength product in rad/s.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldCoupling {
    pub emitter: usize,
    pub lower: usize,
    pub upper: usize,
    pub mode: usize,
    pub strength: C64,
}

/// Pairwise emitter–emitter coupling
/// `(J σ^n_ij + J* σ^n_ji)(σ^m_pq + σ^m_qp)` with `n < m`.
#[derive(Clone, Debug, PartialEq)]
pub struct DipoleCoupling {
    pub first: usize,
    pub second: usize,
    /// `(i, j)` on the first emitter, `i < j`.
    pub first_levels: (usize, usize),
    /// `(p, q)` on the second emitter, `p < q`.
    pub second_levels: (usize, usize),
    pub strength: C64,
}

/// Full physical description of a multipartite system.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SystemConfig {
    pub emitters: Vec<EmitterSpec>,
    pub modes: Vec<ModeSpec>,
    pub field_couplings: Vec<FieldCoupling>,
    pub dipole_dipole: Vec<DipoleCoupling>,
    pub rwa: bool,
}

impl SystemConfig {
    pub fn new(emitters: Vec<EmitterSpec>, modes: Vec<ModeSpec>) -> Self {
        Self { emitters, modes, ..Default::default() }
    }

    pub fn with_rwa(mut self, rwa: bool) -> Self {
        self.rwa = rwa;
        self
    }

    pub fn add_field_coupling(
        &mut self,
        emitter: usize,
        lower: usize,
        upper: usize,
        mode: usize,
        strength: impl Into<C64>,
    ) -> &mut Self {
        self.field_couplings.push(FieldCoupling {
            emitter,
            lower,
            upper,
            mode,
            strength: strength.into(),
        });
        self
    }

    pub fn add_dipole_coupling(
        &mut self,
        first: usize,
        second: usize,
        first_levels: (usize, usize),
        second_levels: (usize, usize),
        strength: impl Into<C64>,
    ) -> &mut Self {
        self.dipole_dipole.push(DipoleCoupling {
            first,
            second,
            first_levels,
            second_levels,
            strength: strength.into(),
        });
        self
    }

    /// Number of partitions (emitters + modes).
    pub fn partition_count(&self) -> usize {
        self.emitters.len() + self.modes.len()
    }

    /// Checks every structural invariant of the configuration.
    pub fn validate(&self) -> Result<()> {
        if self.partition_count() == 0 {
            return Err(Error::Config("system has no emitters and no modes".into()));
        }
        for (n, e) in self.emitters.iter().enumerate() {
            if e.level_count() < 2 {
                return Err(Error::Config(format!(
                    "emitter {} has {} level(s); at least 2 required",
                    n + 1,
                    e.level_count()
                )));
            }
            if let Some(bad) = e.energies.iter().find(|x| !x.is_finite()) {
                return Err(Error::Config(format!("emitter {} has non-finite energy {bad}", n + 1)));
            }
            if let Some(labels) = &e.labels {
                if labels.len() != e.level_count() {
                    return Err(Error::Config(format!(
                        "emitter {} has {} labels for {} levels",
                        n + 1,
                        labels.len(),
                        e.level_count()
                    )));
                }
            }
        }
        for (v, m) in self.modes.iter().enumerate() {
            if !(m.frequency.is_finite() && m.frequency > 0.0) {
                return Err(Error::Config(format!(
                    "mode {} frequency must be positive and finite, got {}",
                    v + 1,
                    m.frequency
                )));
            }
        }
        let mut seen = Vec::new();
        for c in &self.field_couplings {
            self.check_emitter_pair(c.emitter, c.lower, c.upper, "field coupling")?;
            if c.mode >= self.modes.len() {
                return Err(Error::Config(format!(
                    "field coupling references mode {} but the system has {} mode(s)",
                    c.mode + 1,
                    self.modes.len()
                )));
            }
            if !(c.strength.re.is_finite() && c.strength.im.is_finite()) {
                return Err(Error::Config("field coupling strength is not finite".into()));
            }
            let key = (c.emitter, c.lower, c.upper, c.mode);
            if seen.contains(&key) {
                return Err(Error::Config(format!(
                    "duplicate field coupling for emitter {}, levels ({}, {}), mode {}",
                    c.emitter + 1,
                    c.lower + 1,
                    c.upper + 1,
                    c.mode + 1
                )));
            }
            seen.push(key);
        }
        for d in &self.dipole_dipole {
            if d.first == d.second {
                return Err(Error::Config(format!(
                    "dipole-dipole coupling pairs emitter {} with itself",
                    d.first + 1
                )));
            }
            if d.first > d.second {
                return Err(Error::Config(format!(
                    "dipole-dipole pair ({}, {}) must list the lower-numbered emitter first",
                    d.first + 1,
                    d.second + 1
                )));
            }
            self.check_emitter_pair(d.first, d.first_levels.0, d.first_levels.1, "dipole-dipole coupling")?;
            self.check_emitter_pair(d.second, d.second_levels.0, d.second_levels.1, "dipole-dipole coupling")?;
            if !(d.strength.re.is_finite() && d.strength.im.is_finite()) {
                return Err(Error::Config("dipole-dipole strength is not finite".into()));
            }
        }
        StateIndexer::dims_product(&self.dims()).map(|_| ())
    }

    fn check_emitter_pair(&self, n: usize, i: usize, j: usize, what: &str) -> Result<()> {
        let Some(e) = self.emitters.get(n) else {
            return Err(Error::Config(format!(
                "{what} references emitter {} but the system has {} emitter(s)",
                n + 1,
                self.emitters.len()
            )));
        };
        if i >= j {
            return Err(Error::Config(format!(
                "{what} on emitter {} must list the lower level first, got ({}, {})",
                n + 1,
                i + 1,
                j + 1
            )));
        }
        if j >= e.level_count() {
            return Err(Error::Config(format!(
                "{what} references level {} of emitter {} which has {} levels",
                j + 1,
                n + 1,
                e.level_count()
            )));
        }
        Ok(())
    }

    /// Mixed-radix digit sizes `[B_1..B_k, N_1+1..N_m+1]`.
    pub fn dims(&self) -> Vec<usize> {
        self.emitters
            .iter()
            .map(EmitterSpec::level_count)
            .chain(self.modes.iter().map(|m| m.photon_cap + 1))
            .collect()
    }
}

/// Total Hilbert-space dimension `∏ B_n · ∏ (N_ν + 1)`.
pub fn dimension(config: &SystemConfig) -> Result<usize> {
    config.validate()?;
    StateIndexer::dims_product(&config.dims())
}

/// A basis ket: one level per emitter and one photon number per mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub levels: Vec<usize>,
    pub photons: Vec<usize>,
}

impl BasisState {
    pub fn new(levels: Vec<usize>, photons: Vec<usize>) -> Self {
        Self { levels, photons }
    }

    /// All emitters in their lowest level and all modes empty.
    pub fn ground(emitters: usize, modes: usize) -> Self {
        Self { levels: vec![0; emitters], photons: vec![0; modes] }
    }
}

/// Bijection between [`BasisState`]s and flat indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateIndexer {
    dims: Vec<usize>,
    strides: Vec<usize>,
    emitters: usize,
    total: usize,
}

impl StateIndexer {
    pub fn new(config: &SystemConfig) -> Result<Self> {
        config.validate()?;
        Self::from_dims(config.emitters.len(), config.dims())
    }

    /// Builds an indexer from raw digit sizes; the first `emitters` digits
    /// are emitter levels.
    pub fn from_dims(emitters: usize, dims: Vec<usize>) -> Result<Self> {
        if emitters > dims.len() {
            return Err(Error::Config("more emitters than partitions".into()));
        }
        if dims.is_empty() {
            return Err(Error::Config("system has no partitions".into()));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::Config("partition with zero-dimensional space".into()));
        }
        let total = Self::dims_product(&dims)?;
        let mut strides = vec![1; dims.len()];
        for p in (0..dims.len().saturating_sub(1)).rev() {
            strides[p] = strides[p + 1] * dims[p + 1];
        }
        Ok(Self { dims, strides, emitters, total })
    }

    fn dims_product(dims: &[usize]) -> Result<usize> {
        dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).ok_or_else(|| {
            Error::Config("Hilbert-space dimension overflows the address space".into())
        })
    }

    pub fn dimension(&self) -> usize {
        self.total
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn emitter_count(&self) -> usize {
        self.emitters
    }

    pub fn mode_count(&self) -> usize {
        self.dims.len() - self.emitters
    }

    pub fn partition_count(&self) -> usize {
        self.dims.len()
    }

    /// Partition number of mode `mode`.
    pub fn mode_partition(&self, mode: usize) -> usize {
        self.emitters + mode
    }

    /// Value of one digit of a flat index.
    #[inline]
    pub fn digit(&self, index: usize, partition: usize) -> usize {
        (index / self.strides[partition]) % self.dims[partition]
    }

    pub fn index_of(&self, state: &BasisState) -> Result<usize> {
        if state.levels.len() != self.emitters {
            return Err(Error::DimensionMismatch { expected: self.emitters, got: state.levels.len() });
        }
        if state.photons.len() != self.mode_count() {
            return Err(Error::DimensionMismatch { expected: self.mode_count(), got: state.photons.len() });
        }
        let mut index = 0;
        for (p, &digit) in state.levels.iter().chain(&state.photons).enumerate() {
            if digit >= self.dims[p] {
                return Err(self.range_error(p, digit));
            }
            index += digit * self.strides[p];
        }
        Ok(index)
    }

    pub fn state_of(&self, index: usize) -> Result<BasisState> {
        if index >= self.total {
            return Err(Error::Range { what: "basis index".into(), value: index, limit: self.total });
        }
        let digits: Vec<usize> = (0..self.dims.len()).map(|p| self.digit(index, p)).collect();
        let photons = digits[self.emitters..].to_vec();
        let mut levels = digits;
        levels.truncate(self.emitters);
        Ok(BasisState { levels, photons })
    }

    pub(crate) fn range_error(&self, partition: usize, value: usize) -> Error {
        let what = if partition < self.emitters {
            format!("level of emitter {}", partition + 1)
        } else {
            format!("photon number of mode {}", partition - self.emitters + 1)
        };
        Error::Range { what, value, limit: self.dims[partition] }
    }

    pub(crate) fn check_emitter(&self, emitter: usize) -> Result<()> {
        if emitter >= self.emitters {
            return Err(Error::Range { what: "emitter".into(), value: emitter, limit: self.emitters });
        }
        Ok(())
    }

    pub(crate) fn check_level(&self, emitter: usize, level: usize) -> Result<()> {
        self.check_emitter(emitter)?;
        if level >= self.dims[emitter] {
            return Err(self.range_error(emitter, level));
        }
        Ok(())
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.mode_count() {
            return Err(Error::Range { what: "mode".into(), value: mode, limit: self.mode_count() });
        }
        Ok(())
    }
}
