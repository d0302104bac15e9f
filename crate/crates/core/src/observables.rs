//! Probabilities and operator expectation values of a pure state,
//! evaluated directly on the flat amplitudes by index shifts.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{BasisState, StateIndexer};
use crate::states::StateVector;

fn check_dim(idx: &StateIndexer, phi: &StateVector) -> Result<()> {
    if phi.dim() != idx.dimension() {
        return Err(Error::DimensionMismatch { expected: idx.dimension(), got: phi.dim() });
    }
    Ok(())
}

/// `|⟨basis|φ⟩|²`.
pub fn state_probability(idx: &StateIndexer, phi: &StateVector, basis: &BasisState) -> Result<f64> {
    check_dim(idx, phi)?;
    Ok(phi.amplitudes()[idx.index_of(basis)?].norm_sqr())
}

/// Marginal probability of one digit of `partition` taking `value`.
fn marginal(idx: &StateIndexer, phi: &StateVector, partition: usize, value: usize) -> f64 {
    phi.amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| idx.digit(*i, partition) == value)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Probability that `emitter` occupies `level`, summed over everything else.
pub fn level_probability(idx: &StateIndexer, phi: &StateVector, emitter: usize, level: usize) -> Result<f64> {
    check_dim(idx, phi)?;
    idx.check_level(emitter, level)?;
    Ok(marginal(idx, phi, emitter, level))
}

/// Probability of exactly `count` photons in `mode`.
pub fn photon_probability(idx: &StateIndexer, phi: &StateVector, mode: usize, count: usize) -> Result<f64> {
    check_dim(idx, phi)?;
    idx.check_mode(mode)?;
    let p = idx.mode_partition(mode);
    if count >= idx.dims()[p] {
        return Err(idx.range_error(p, count));
    }
    Ok(marginal(idx, phi, p, count))
}

/// `⟨a_ν†a_ν⟩ = Σ_f f·P(f)`.
pub fn expected_photon_number(idx: &StateIndexer, phi: &StateVector, mode: usize) -> Result<f64> {
    check_dim(idx, phi)?;
    idx.check_mode(mode)?;
    let p = idx.mode_partition(mode);
    Ok(phi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| idx.digit(i, p) as f64 * a.norm_sqr())
        .sum())
}

/// `⟨a_ν⟩ = Σ √f_ν · φ*(…, f_ν - 1, …) · φ(…, f_ν, …)`.
pub fn expect_annihilation(idx: &StateIndexer, phi: &StateVector, mode: usize) -> Result<C64> {
    check_dim(idx, phi)?;
    idx.check_mode(mode)?;
    let p = idx.mode_partition(mode);
    let stride = idx.strides()[p];
    let amps = phi.amplitudes();
    Ok(amps
        .iter()
        .enumerate()
        .filter_map(|(i, a)| {
            let f = idx.digit(i, p);
            (f > 0).then(|| amps[i - stride].conj() * a * (f as f64).sqrt())
        })
        .sum())
}

/// `⟨σ^l_{s,k}⟩ = Σ φ*(r_l → s) · φ(r_l → k)`, where `σ_{s,k}` takes
/// level `k` to level `s`.
pub fn expect_ladder(idx: &StateIndexer, phi: &StateVector, emitter: usize, s: usize, k: usize) -> Result<C64> {
    check_ladder(idx, phi, emitter, s, k)?;
    let stride = idx.strides()[emitter];
    let amps = phi.amplitudes();
    Ok(amps
        .iter()
        .enumerate()
        .filter(|(i, _)| idx.digit(*i, emitter) == k)
        .map(|(i, a)| amps[i + s * stride - k * stride].conj() * a)
        .sum())
}

/// `⟨[σ_{s,k}, σ_{s,k}†]⟩ = P(s) - P(k)` for emitter `emitter`.
pub fn expect_ladder_commutator(
    idx: &StateIndexer,
    phi: &StateVector,
    emitter: usize,
    s: usize,
    k: usize,
) -> Result<f64> {
    check_ladder(idx, phi, emitter, s, k)?;
    let (mut ps, mut pk) = (0.0, 0.0);
    for (i, a) in phi.amplitudes().iter().enumerate() {
        let r = idx.digit(i, emitter);
        if r == s {
            ps += a.norm_sqr();
        } else if r == k {
            pk += a.norm_sqr();
        }
    }
    Ok(ps - pk)
}

fn check_ladder(idx: &StateIndexer, phi: &StateVector, emitter: usize, s: usize, k: usize) -> Result<()> {
    check_dim(idx, phi)?;
    idx.check_level(emitter, s)?;
    idx.check_level(emitter, k)?;
    if s == k {
        return Err(Error::Config(format!(
            "ladder operator on emitter {} needs two distinct levels, got {} twice",
            emitter + 1,
            s + 1
        )));
    }
    Ok(())
}

/// Continuous phase of a complex time series: each sample's argument is
/// moved onto the branch nearest the previous sample's.
pub fn unwrap_phases(values: &[C64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(values.len());
    for z in values {
        let raw = z.arg();
        let next = match out.last() {
            None => raw,
            Some(&prev) => {
                let mut d = (raw - prev).rem_euclid(TAU);
                if d > PI {
                    d -= TAU;
                }
                prev + d
            }
        };
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{EmitterSpec, ModeSpec, SystemConfig};
    use crate::states::{fock_state, superposition};

    fn jc(cap: usize) -> (SystemConfig, StateIndexer) {
        let c = SystemConfig::new(vec![EmitterSpec::new(vec![0.0, 1.0])], vec![ModeSpec::new(1.0, cap)]);
        let i = StateIndexer::new(&c).unwrap();
        (c, i)
    }

    fn b(l: usize, f: usize) -> BasisState {
        BasisState::new(vec![l], vec![f])
    }

    #[test]
    fn probabilities_of_fock_and_bell() {
        let (c, idx) = jc(2);
        let phi = fock_state(&c, &b(1, 0)).unwrap();
        assert_eq!(state_probability(&idx, &phi, &b(1, 0)).unwrap(), 1.0);
        assert_eq!(state_probability(&idx, &phi, &b(0, 1)).unwrap(), 0.0);
        let one = C64::new(1.0, 0.0);
        let bell = superposition(&c, &[(one, b(0, 1)), (one, b(1, 0))]).unwrap();
        assert!((state_probability(&idx, &bell, &b(0, 1)).unwrap() - 0.5).abs() < 1e-15);
        let total: f64 = (0..2).map(|l| level_probability(&idx, &bell, 0, l).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(level_probability(&idx, &bell, 0, 2).is_err());
        assert!(level_probability(&idx, &bell, 1, 0).is_err());
    }

    #[test]
    fn photon_statistics() {
        let (c, idx) = jc(3);
        let vac = fock_state(&c, &b(0, 0)).unwrap();
        assert_eq!(photon_probability(&idx, &vac, 0, 0).unwrap(), 1.0);
        assert_eq!(expected_photon_number(&idx, &vac, 0).unwrap(), 0.0);
        let two = fock_state(&c, &b(1, 2)).unwrap();
        assert_eq!(expected_photon_number(&idx, &two, 0).unwrap(), 2.0);
        assert!(photon_probability(&idx, &two, 0, 4).is_err());
        assert!(expected_photon_number(&idx, &two, 1).is_err());
    }

    #[test]
    fn annihilation_cases() {
        let (c, idx) = jc(3);
        let n2 = fock_state(&c, &b(0, 2)).unwrap();
        assert_eq!(expect_annihilation(&idx, &n2, 0).unwrap(), C64::new(0.0, 0.0));
        let one = C64::new(1.0, 0.0);
        let s = superposition(&c, &[(one, b(0, 0)), (one, b(0, 1))]).unwrap();
        assert!((expect_annihilation(&idx, &s, 0).unwrap() - C64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ladder_cases() {
        let (c, idx) = jc(1);
        let e0 = fock_state(&c, &b(1, 0)).unwrap();
        assert_eq!(expect_ladder(&idx, &e0, 0, 0, 1).unwrap(), C64::new(0.0, 0.0));
        assert_eq!(expect_ladder_commutator(&idx, &e0, 0, 0, 1).unwrap(), -1.0);
        let one = C64::new(1.0, 0.0);
        let s = superposition(&c, &[(one, b(0, 0)), (one, b(1, 0))]).unwrap();
        assert!((expect_ladder(&idx, &s, 0, 0, 1).unwrap() - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!(expect_ladder_commutator(&idx, &s, 0, 0, 1).unwrap().abs() < 1e-15);
        assert!(expect_ladder(&idx, &s, 0, 1, 1).is_err());
    }

    #[test]
    fn phase_unwrapping() {
        let zs: Vec<C64> = (0..50).map(|i| C64::from_polar(1.0, 0.3 * i as f64)).collect();
        let ph = unwrap_phases(&zs);
        for (i, p) in ph.iter().enumerate() {
            assert!((p - 0.3 * i as f64).abs() < 1e-12);
        }
        let back: Vec<C64> = (0..50).map(|i| C64::from_polar(1.0, -0.5 * i as f64)).collect();
        assert!((unwrap_phases(&back)[49] + 24.5).abs() < 1e-12);
    }
}
