//! Reduced density matrices and pure-state concurrence across a
//! bipartition of the partitions.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::StateIndexer;
use crate::matrix::HermitianMatrix;
use crate::propagator::diagonalize;
use crate::states::StateVector;

/// Split of the partitions into subsystem A (listed) and its complement B.
///
/// Partitions are numbered emitters first (`0..k`), then modes (`k..k+m`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    subsystem_a: Vec<usize>,
    subsystem_b: Vec<usize>,
}

impl Bipartition {
    pub fn new(subsystem_a: impl IntoIterator<Item = usize>, partitions: usize) -> Result<Self> {
        let mut a: Vec<usize> = subsystem_a.into_iter().collect();
        a.sort_unstable();
        if a.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Bipartition("subsystem A lists a partition twice".into()));
        }
        if let Some(&bad) = a.iter().find(|&&p| p >= partitions) {
            return Err(Error::Bipartition(format!(
                "partition {bad} does not exist (system has {partitions})"
            )));
        }
        if a.is_empty() || a.len() == partitions {
            return Err(Error::Bipartition("subsystem A must be a nonempty proper subset".into()));
        }
        let b = (0..partitions).filter(|p| !a.contains(p)).collect();
        Ok(Self { subsystem_a: a, subsystem_b: b })
    }

    /// All emitters versus all modes.
    pub fn emitters_vs_modes(idx: &StateIndexer) -> Result<Self> {
        Self::new(0..idx.emitter_count(), idx.partition_count())
    }

    pub fn subsystem_a(&self) -> &[usize] {
        &self.subsystem_a
    }

    pub fn subsystem_b(&self) -> &[usize] {
        &self.subsystem_b
    }

    /// The same split with the roles of A and B exchanged.
    pub fn complement(&self) -> Self {
        Self { subsystem_a: self.subsystem_b.clone(), subsystem_b: self.subsystem_a.clone() }
    }

    fn check(&self, idx: &StateIndexer) -> Result<()> {
        let n = self.subsystem_a.len() + self.subsystem_b.len();
        if n != idx.partition_count() {
            return Err(Error::Bipartition(format!(
                "split covers {n} partitions but the system has {}",
                idx.partition_count()
            )));
        }
        Ok(())
    }
}

/// Reduced state `ρ_A = Tr_B |φ⟩⟨φ|`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.0.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(diagonalize(&self.0)?.eigenvalues().to_vec())
    }
}

/// Reshapes `φ` into the `d_A × d_B` coefficient matrix `ψ(a, b)`.
fn coefficient_matrix(idx: &StateIndexer, phi: &StateVector, split: &Bipartition) -> (usize, usize, Vec<C64>) {
    let radix = |parts: &[usize], i: usize| parts.iter().fold(0, |acc, &p| acc * idx.dims()[p] + idx.digit(i, p));
    let da: usize = split.subsystem_a.iter().map(|&p| idx.dims()[p]).product();
    let db: usize = split.subsystem_b.iter().map(|&p| idx.dims()[p]).product();
    let mut psi = vec![C64::new(0.0, 0.0); da * db];
    for (i, amp) in phi.amplitudes().iter().enumerate() {
        psi[radix(&split.subsystem_a, i) * db + radix(&split.subsystem_b, i)] = *amp;
    }
    (da, db, psi)
}

fn check(idx: &StateIndexer, phi: &StateVector, split: &Bipartition) -> Result<()> {
    if phi.dim() != idx.dimension() {
        return Err(Error::DimensionMismatch { expected: idx.dimension(), got: phi.dim() });
    }
    split.check(idx)
}

/// `ρ_A[a, a'] = Σ_b ψ(a, b)·ψ*(a', b)`.
pub fn partial_trace(idx: &StateIndexer, phi: &StateVector, split: &Bipartition) -> Result<DensityMatrix> {
    check(idx, phi, split)?;
    let (da, db, psi) = coefficient_matrix(idx, phi, split);
    let mut rho = HermitianMatrix::zeros(da);
    for a in 0..da {
        let ra = &psi[a * db..(a + 1) * db];
        for a2 in a..da {
            let rb = &psi[a2 * db..(a2 + 1) * db];
            let v: C64 = ra.iter().zip(rb).map(|(x, y)| x * y.conj()).sum();
            rho[(a, a2)] = v;
            rho[(a2, a)] = v.conj();
        }
    }
    for a in 0..da {
        rho[(a, a)].im = 0.0;
    }
    Ok(DensityMatrix(rho))
}

/// `Tr ρ_A²`, computed on whichever side of the split is smaller.
pub fn reduced_purity(idx: &StateIndexer, phi: &StateVector, split: &Bipartition) -> Result<f64> {
    check(idx, phi, split)?;
    let (da, db, psi) = coefficient_matrix(idx, phi, split);
    let mut purity = 0.0;
    if da <= db {
        for a in 0..da {
            let ra = &psi[a * db..(a + 1) * db];
            for a2 in 0..da {
                let rb = &psi[a2 * db..(a2 + 1) * db];
                let v: C64 = ra.iter().zip(rb).map(|(x, y)| x * y.conj()).sum();
                purity += v.norm_sqr();
            }
        }
    } else {
        for b in 0..db {
            for b2 in 0..db {
                let v: C64 = (0..da).map(|a| psi[a * db + b].conj() * psi[a * db + b2]).sum();
                purity += v.norm_sqr();
            }
        }
    }
    Ok(purity)
}

/// Pure-state concurrence `sqrt(2(1 - Tr ρ_A²))`.
///
/// Evaluated as `2·sqrt(e₂(ρ))/Tr ρ`, where `e₂ = ((Tr ρ)² - Tr ρ²)/2`
/// is summed over pairs of rows `x, y` of the coefficient matrix (taken on
/// the smaller side) as `‖x‖²·‖y - (⟨x,y⟩/‖x‖²)·x‖²`. Each term is a
/// projection residual, so product states give zero to rounding instead of
/// the `sqrt(ε)` left by subtracting the purity from one.
pub fn concurrence(idx: &StateIndexer, phi: &StateVector, split: &Bipartition) -> Result<f64> {
    check(idx, phi, split)?;
    let (da, db, psi) = coefficient_matrix(idx, phi, split);
    let rows: Vec<Vec<C64>> = if da <= db {
        psi.chunks(db).map(<[C64]>::to_vec).collect()
    } else {
        (0..db).map(|b| (0..da).map(|a| psi[a * db + b]).collect()).collect()
    };
    let norms: Vec<f64> = rows.iter().map(|r| r.iter().map(|z| z.norm_sqr()).sum()).collect();
    let trace: f64 = norms.iter().sum();
    if trace == 0.0 {
        return Err(Error::Degenerate("concurrence of the zero vector".into()));
    }
    let mut e2 = 0.0;
    for (a, x) in rows.iter().enumerate() {
        if norms[a] == 0.0 {
            continue;
        }
        for y in &rows[a + 1..] {
            let c = x.iter().zip(y).map(|(p, q)| p.conj() * q).sum::<C64>() / norms[a];
            let residual: f64 = x.iter().zip(y).map(|(p, q)| (q - c * p).norm_sqr()).sum();
            e2 += norms[a] * residual;
        }
    }
    Ok(2.0 * e2.sqrt() / trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{BasisState, EmitterSpec, ModeSpec, SystemConfig};
    use crate::states::{fock_state, superposition};

    fn jc() -> (SystemConfig, StateIndexer) {
        let c = SystemConfig::new(vec![EmitterSpec::new(vec![0.0, 1.0])], vec![ModeSpec::new(1.0, 1)]);
        let i = StateIndexer::new(&c).unwrap();
        (c, i)
    }

    #[test]
    fn bipartition_validation() {
        assert!(Bipartition::new([0], 2).is_ok());
        assert!(Bipartition::new([], 2).is_err());
        assert!(Bipartition::new([0, 1], 2).is_err());
        assert!(Bipartition::new([2], 2).is_err());
        assert!(Bipartition::new([0, 0], 3).is_err());
        assert_eq!(Bipartition::new([1], 3).unwrap().subsystem_b(), &[0, 2]);
    }

    #[test]
    fn bell_state() {
        let (c, idx) = jc();
        let one = C64::new(1.0, 0.0);
        let bell = superposition(
            &c,
            &[(one, BasisState::new(vec![0], vec![1])), (one, BasisState::new(vec![1], vec![0]))],
        )
        .unwrap();
        let split = Bipartition::emitters_vs_modes(&idx).unwrap();
        let rho = partial_trace(&idx, &bell, &split).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((rho.matrix()[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(rho.matrix()[(0, 1)].norm() < 1e-15);
        assert!((concurrence(&idx, &bell, &split).unwrap() - 1.0).abs() < 1e-12);
        let ev = rho.eigenvalues().unwrap();
        assert!((ev[0] - 0.5).abs() < 1e-15 && (ev[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn product_state_is_pure() {
        let (c, idx) = jc();
        let phi = fock_state(&c, &BasisState::new(vec![1], vec![1])).unwrap();
        let split = Bipartition::emitters_vs_modes(&idx).unwrap();
        let rho = partial_trace(&idx, &phi, &split).unwrap();
        assert_eq!(rho.trace(), 1.0);
        assert_eq!(rho.purity(), 1.0);
        assert_eq!(concurrence(&idx, &phi, &split).unwrap(), 0.0);
    }

    #[test]
    fn general_product_state_is_exactly_unentangled() {
        let c = SystemConfig::new(vec![EmitterSpec::new(vec![0.0, 1.0, 2.0])], vec![ModeSpec::new(1.0, 4)]);
        let idx = StateIndexer::new(&c).unwrap();
        let u = [C64::new(0.3, 0.1), C64::new(-0.7, 0.2), C64::new(0.11, -0.5)];
        let w = [C64::new(0.2, 0.0), C64::new(0.1, 0.9), C64::new(-0.3, 0.3), C64::new(0.05, 0.0), C64::new(0.4, -0.6)];
        let amps = u.iter().flat_map(|a| w.iter().map(move |b| a * b)).collect();
        let phi = StateVector::normalized(amps).unwrap();
        let split = Bipartition::emitters_vs_modes(&idx).unwrap();
        assert!(concurrence(&idx, &phi, &split).unwrap() <= 1e-14);
        assert!(concurrence(&idx, &phi, &split.complement()).unwrap() <= 1e-14);
    }
}
