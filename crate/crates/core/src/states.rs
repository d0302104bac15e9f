//! Initial-state constructors on the flat basis.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{BasisState, StateIndexer, SystemConfig};

/// Tolerance on `|‖φ‖ - 1|` for states built by this module.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Complex amplitudes over the flat basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes as given. The caller is responsible for the norm.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Self {
        Self { amplitudes }
    }

    /// Scales `amplitudes` to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = l2_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Degenerate(format!("cannot normalize a vector of norm {norm}")));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest componentwise difference `max_i |φ_i - ψ_i|`.
    pub fn max_component_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn l2_norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Product basis ket `|basis⟩`.
pub fn fock_state(config: &SystemConfig, basis: &BasisState) -> Result<StateVector> {
    let idx = StateIndexer::new(config)?;
    let mut amps = vec![C64::new(0.0, 0.0); idx.dimension()];
    amps[idx.index_of(basis)?] = C64::new(1.0, 0.0);
    Ok(StateVector { amplitudes: amps })
}

/// Emitter factor of a coherent product state.
#[derive(Clone, Debug, PartialEq)]
pub enum EmitterState {
    /// A definite level for every emitter.
    Levels(Vec<usize>),
    /// One amplitude vector per emitter (a product state); each vector is
    /// normalized as part of the overall renormalization.
    Amplitudes(Vec<Vec<C64>>),
}

/// Truncated single-mode coherent amplitudes `α^f/√(f!)`, `f = 0..=cap`,
/// not normalized.
pub fn truncated_coherent_amplitudes(alpha: C64, cap: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(cap + 1);
    let mut c = C64::new(1.0, 0.0);
    out.push(c);
    for f in 1..=cap {
        c = c * alpha / (f as f64).sqrt();
        out.push(c);
    }
    out
}

/// Multimode coherent state `⊗_ν |α_ν⟩` truncated at each photon cap and
/// tensored with the emitter factor, renormalized after truncation.
pub fn coherent_state(config: &SystemConfig, alphas: &[C64], emitters: &EmitterState) -> Result<StateVector> {
    let idx = StateIndexer::new(config)?;
    let k = config.emitters.len();
    if alphas.len() != config.modes.len() {
        return Err(Error::DimensionMismatch { expected: config.modes.len(), got: alphas.len() });
    }
    let factors: Vec<Vec<C64>> = match emitters {
        EmitterState::Levels(levels) => {
            if levels.len() != k {
                return Err(Error::DimensionMismatch { expected: k, got: levels.len() });
            }
            levels
                .iter()
                .enumerate()
                .map(|(n, &l)| {
                    idx.check_level(n, l)?;
                    let mut v = vec![C64::new(0.0, 0.0); idx.dims()[n]];
                    v[l] = C64::new(1.0, 0.0);
                    Ok(v)
                })
                .collect::<Result<_>>()?
        }
        EmitterState::Amplitudes(table) => {
            if table.len() != k {
                return Err(Error::DimensionMismatch { expected: k, got: table.len() });
            }
            for (n, v) in table.iter().enumerate() {
                if v.len() != idx.dims()[n] {
                    return Err(Error::DimensionMismatch { expected: idx.dims()[n], got: v.len() });
                }
            }
            table.clone()
        }
    };
    let factors: Vec<Vec<C64>> = factors
        .into_iter()
        .chain(
            config
                .modes
                .iter()
                .zip(alphas)
                .map(|(m, &a)| truncated_coherent_amplitudes(a, m.photon_cap)),
        )
        .collect();
    product_state(&idx, &factors)
}

/// Normalized tensor product of one factor per partition.
pub fn product_state(idx: &StateIndexer, factors: &[Vec<C64>]) -> Result<StateVector> {
    if factors.len() != idx.partition_count() {
        return Err(Error::DimensionMismatch { expected: idx.partition_count(), got: factors.len() });
    }
    let amps = (0..idx.dimension())
        .map(|i| factors.iter().enumerate().map(|(p, f)| f[idx.digit(i, p)]).product())
        .collect();
    StateVector::normalized(amps)
}

/// Normalized weighted sum of basis kets.
pub fn superposition(config: &SystemConfig, terms: &[(C64, BasisState)]) -> Result<StateVector> {
    let idx = StateIndexer::new(config)?;
    if terms.is_empty() {
        return Err(Error::Degenerate("superposition with no terms".into()));
    }
    let mut amps = vec![C64::new(0.0, 0.0); idx.dimension()];
    for (w, b) in terms {
        amps[idx.index_of(b)?] += w;
    }
    StateVector::normalized(amps)
        .map_err(|_| Error::Degenerate("superposition weights cancel to the zero vector".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{EmitterSpec, ModeSpec};

    fn jc(cap: usize) -> SystemConfig {
        SystemConfig::new(vec![EmitterSpec::new(vec![0.0, 1.0])], vec![ModeSpec::new(1.0, cap)])
    }

    #[test]
    fn fock_is_unit_vector() {
        let c = jc(3);
        let s = fock_state(&c, &BasisState::new(vec![1], vec![2])).unwrap();
        assert_eq!(s.amplitudes()[4 + 2], C64::new(1.0, 0.0));
        assert_eq!(s.norm(), 1.0);
        assert!(fock_state(&c, &BasisState::new(vec![1], vec![4])).is_err());
    }

    #[test]
    fn coherent_vacuum_and_mean() {
        let c = jc(8);
        let s = coherent_state(&c, &[C64::new(0.0, 0.0)], &EmitterState::Levels(vec![0])).unwrap();
        assert_eq!(s.amplitudes()[0], C64::new(1.0, 0.0));
        let s = coherent_state(&c, &[C64::new(1.0, 0.0)], &EmitterState::Levels(vec![0])).unwrap();
        assert!((s.norm() - 1.0).abs() < NORM_TOLERANCE);
        let mean: f64 = s.amplitudes()[..9].iter().enumerate().map(|(f, a)| f as f64 * a.norm_sqr()).sum();
        assert!((mean - 1.0).abs() < 1e-4, "{mean}");
    }

    #[test]
    fn coherent_with_amplitude_table() {
        let c = jc(2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = coherent_state(
            &c,
            &[C64::new(0.0, 0.0)],
            &EmitterState::Amplitudes(vec![vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)]]),
        )
        .unwrap();
        assert!((s.amplitudes()[0] - C64::new(h, 0.0)).norm() < 1e-15);
        assert!((s.amplitudes()[3] - C64::new(0.0, h)).norm() < 1e-15);
    }

    #[test]
    fn superposition_cases() {
        let c = jc(1);
        let g1 = BasisState::new(vec![0], vec![1]);
        let e0 = BasisState::new(vec![1], vec![0]);
        let one = C64::new(1.0, 0.0);
        let s = superposition(&c, &[(one, g1.clone()), (one, e0.clone())]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[1].re - h).abs() < 1e-15);
        assert!((s.amplitudes()[2].re - h).abs() < 1e-15);
        assert_eq!(superposition(&c, &[(one, e0.clone())]).unwrap(), fock_state(&c, &e0).unwrap());
        assert!(matches!(superposition(&c, &[(one, g1.clone()), (-one, g1)]), Err(Error::Degenerate(_))));
    }
}
