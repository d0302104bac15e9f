//! Assembly of the multipartite Jaynes–Cummings–Paul Hamiltonian
//! `H = H₀ + H_rE + H_rr` on the flat basis, in rad/s (ħ = 1).


use crate::error::{Error, Result};
use crate::hilbert::{StateIndexer, SystemConfig};
use crate::units::HBAR;

pub use crate::matrix::HermitianMatrix;

/// Relative tolerance on `max |H - H†| / max |H|` accepted by [`build_full`].
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;

/// Free energy: `Σ_n E^n_{r_n} + Σ_ν Ω_ν f_ν` on the diagonal.
pub fn build_h0(config: &SystemConfig) -> Result<HermitianMatrix> {
    let idx = StateIndexer::new(config)?;
    let k = config.emitters.len();
    let diag: Vec<f64> = (0..idx.dimension())
        .map(|q| {
            let atoms: f64 = config
                .emitters
                .iter()
                .enumerate()
                .map(|(n, e)| e.energies[idx.digit(q, n)])
                .sum();
            let field: f64 = config
                .modes
                .iter()
                .enumerate()
                .map(|(v, m)| m.frequency * idx.digit(q, k + v) as f64)
                .sum();
            atoms + field
        })
        .collect();
    Ok(HermitianMatrix::from_diagonal(&diag))
}

/// Light–emitter interaction `Σ (κ σ_ij + κ* σ_ji)(a + a†)`.
///
/// With `config.rwa` only `κ* σ_ji a` (absorb and excite) and `κ σ_ij a†`
/// (emit and relax) survive.
pub fn build_h_re(config: &SystemConfig) -> Result<HermitianMatrix> {
    let idx = StateIndexer::new(config)?;
    let dim = idx.dimension();
    let mut h = HermitianMatrix::zeros(dim);
    let strides = idx.strides();
    for c in &config.field_couplings {
        let mp = idx.mode_partition(c.mode);
        let cap = config.modes[c.mode].photon_cap;
        let (se, sm) = (strides[c.emitter], strides[mp]);
        for col in 0..dim {
            let r = idx.digit(col, c.emitter);
            let f = idx.digit(col, mp);
            // (atomic target, amplitude, lowering move?)
            let (atom_target, amp, lowering) = if r == c.upper {
                (col - (c.upper - c.lower) * se, c.strength, true)
            } else if r == c.lower {
                (col + (c.upper - c.lower) * se, c.strength.conj(), false)
            } else {
                continue;
            };
            // a: absorb one photon
            if f > 0 && !(config.rwa && lowering) {
                h[(atom_target - sm, col)] += amp * (f as f64).sqrt();
            }
            // a†: emit one photon
            if f < cap && !(config.rwa && !lowering) {
                h[(atom_target + sm, col)] += amp * ((f + 1) as f64).sqrt();
            }
        }
    }
    Ok(h)
}

/// Emitter–emitter interaction
/// `Σ (J σ^n_ij + J* σ^n_ji)(σ^m_pq + σ^m_qp)`.
pub fn build_h_rr(config: &SystemConfig) -> Result<HermitianMatrix> {
    let idx = StateIndexer::new(config)?;
    let dim = idx.dimension();
    let mut h = HermitianMatrix::zeros(dim);
    let strides = idx.strides();
    for d in &config.dipole_dipole {
        let (i, j) = d.first_levels;
        let (p, q) = d.second_levels;
        let (s1, s2) = (strides[d.first], strides[d.second]);
        for col in 0..dim {
            let r1 = idx.digit(col, d.first);
            let r2 = idx.digit(col, d.second);
            let (row1, amp) = if r1 == j {
                (col - (j - i) * s1, d.strength)
            } else if r1 == i {
                (col + (j - i) * s1, d.strength.conj())
            } else {
                continue;
            };
            let row = if r2 == q {
                row1 - (q - p) * s2
            } else if r2 == p {
                row1 + (q - p) * s2
            } else {
                continue;
            };
            h[(row, col)] += amp;
        }
    }
    Ok(h)
}

/// Full Hamiltonian; fails if the sum is not Hermitian to
/// [`HERMITICITY_TOLERANCE`].
pub fn build_full(config: &SystemConfig) -> Result<HermitianMatrix> {
    let h = &(&build_h0(config)? + &build_h_re(config)?) + &build_h_rr(config)?;
    let allowed = HERMITICITY_TOLERANCE * h.max_abs();
    let deviation = h.hermiticity_deviation();
    if deviation > allowed {
        return Err(Error::NotHermitian { deviation, allowed });
    }
    Ok(h)
}

/// Rabi frequency `E₀·d/ħ` in rad/s for a field amplitude in V/m and a
/// transition dipole moment in C·m.
pub fn rabi_frequency(field_amplitude: f64, dipole_moment: f64) -> f64 {
    field_amplitude * dipole_moment / HBAR
}
