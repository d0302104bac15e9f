//! Exact time evolution `φ(t) = R·e^{-iDt}·R†·φ(0)` from a Hermitian
//! eigendecomposition, plus a fixed-step RK4 integrator used as an
//! independent check.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;
use crate::states::StateVector;

/// Relative Hermiticity tolerance accepted by [`diagonalize`].
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;
/// Jacobi sweep cap.
pub const MAX_SWEEPS: usize = 100;
/// Convergence: off-diagonal Frobenius norm ≤ this × `‖H‖_F`.
pub const OFF_DIAGONAL_THRESHOLD: f64 = 1e-12;

/// Eigenvalues (ascending) and unitary eigenvectors of a Hamiltonian.
#[derive(Clone, Debug)]
pub struct SpectralPropagator {
    dim: usize,
    eigenvalues: Vec<f64>,
    // Row j holds eigenvector j, i.e. column j of R.
    vectors: Vec<C64>,
    sweeps: usize,
}

impl SpectralPropagator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvector `j` (column `j` of `R`).
    pub fn eigenvector(&self, j: usize) -> &[C64] {
        &self.vectors[j * self.dim..(j + 1) * self.dim]
    }

    /// Number of Jacobi sweeps used.
    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    /// `R` as a dense matrix.
    pub fn eigenvector_matrix(&self) -> HermitianMatrix {
        let n = self.dim;
        let mut r = HermitianMatrix::zeros(n);
        for j in 0..n {
            for k in 0..n {
                r[(k, j)] = self.vectors[j * n + k];
            }
        }
        r
    }

    /// `max |H·R - R·diag(D)|`.
    pub fn residual(&self, h: &HermitianMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, &d) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvector(j);
            let hv = h.apply(v);
            for (a, b) in hv.iter().zip(v) {
                worst = worst.max((a - b * d).norm());
            }
        }
        worst
    }

    /// `max |R†R - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in a..n {
                let dot: C64 = self.eigenvector(a).iter().zip(self.eigenvector(b)).map(|(x, y)| x.conj() * y).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    /// `R·diag(D)·R†`.
    pub fn reconstruct(&self) -> HermitianMatrix {
        let n = self.dim;
        let mut h = HermitianMatrix::zeros(n);
        for (j, &d) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvector(j);
            for p in 0..n {
                let vp = v[p] * d;
                for q in 0..n {
                    h[(p, q)] += vp * v[q].conj();
                }
            }
        }
        h
    }

    /// Spectral coefficients `R†·φ`.
    pub fn project(&self, phi: &StateVector) -> Result<Vec<C64>> {
        self.check_dim(phi)?;
        Ok((0..self.dim)
            .map(|j| self.eigenvector(j).iter().zip(phi.amplitudes()).map(|(r, x)| r.conj() * x).sum())
            .collect())
    }

    /// `R·e^{-iDt}·c` for spectral coefficients `c`.
    pub fn evolve_projected(&self, coefficients: &[C64], t: f64) -> StateVector {
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for (j, (&d, &c)) in self.eigenvalues.iter().zip(coefficients).enumerate() {
            let w = C64::from_polar(1.0, -d * t) * c;
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            for (o, r) in out.iter_mut().zip(self.eigenvector(j)) {
                *o += r * w;
            }
        }
        StateVector::from_amplitudes(out)
    }

    fn check_dim(&self, phi: &StateVector) -> Result<()> {
        if phi.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: phi.dim() });
        }
        Ok(())
    }
}

/// Diagonalizes a Hermitian matrix by cyclic Jacobi rotations.
///
/// Sweeps visit `(p, q)` in row-cyclic order; pairs whose coupling is
/// already negligible are skipped, so exact zeros (symmetry blocks) are
/// never mixed. Eigenvalues come back ascending; ties keep sweep order.
pub fn diagonalize(h: &HermitianMatrix) -> Result<SpectralPropagator> {
    let n = h.dim();
    let allowed = HERMITICITY_TOLERANCE * h.max_abs();
    let deviation = h.hermiticity_deviation();
    if deviation > allowed {
        return Err(Error::NotHermitian { deviation, allowed });
    }
    let mut a = h.clone().into_vec();
    // Work on the exactly Hermitian part.
    for p in 0..n {
        a[p * n + p].im = 0.0;
        for q in p + 1..n {
            let m = (a[p * n + q] + a[q * n + p].conj()) * 0.5;
            a[p * n + q] = m;
            a[q * n + p] = m.conj();
        }
    }
    let mut v = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = C64::new(1.0, 0.0);
    }

    let target = OFF_DIAGONAL_THRESHOLD * h.frobenius_norm();
    let skip = target / n.max(1) as f64;
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a, n);
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, residual: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= skip {
                    continue;
                }
                rotate(&mut a, &mut v, n, p, q, apq, r);
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &i in &order {
        vectors.extend_from_slice(&v[i * n..(i + 1) * n]);
    }
    Ok(SpectralPropagator { dim: n, eigenvalues, vectors, sweeps })
}

fn off_diagonal_norm(a: &[C64], n: usize) -> f64 {
    let mut s = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            s += a[p * n + q].norm_sqr();
        }
    }
    (2.0 * s).sqrt()
}

/// One unitary rotation zeroing `a[p][q]`, accumulated into the
/// eigenvector rows `v`.
fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize, apq: C64, r: f64) {
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase = apq / r;
    let se = phase * s;
    let sec = se.conj();

    // Rows p and q (and, by Hermiticity, columns p and q).
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        let np = apk * c - se * aqk;
        let nq = sec * apk + aqk * c;
        a[p * n + k] = np;
        a[q * n + k] = nq;
        a[k * n + p] = np.conj();
        a[k * n + q] = nq.conj();
    }
    a[p * n + p] = C64::new(app - t * r, 0.0);
    a[q * n + q] = C64::new(aqq + t * r, 0.0);
    a[p * n + q] = C64::new(0.0, 0.0);
    a[q * n + p] = C64::new(0.0, 0.0);

    let (head, tail) = v.split_at_mut(q * n);
    let vp = &mut head[p * n..(p + 1) * n];
    let vq = &mut tail[..n];
    for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = xp * c - sec * xq;
        *y = se * xp + xq * c;
    }
}

/// `φ(t) = R·e^{-iDt}·R†·φ0`.
pub fn evolve(prop: &SpectralPropagator, phi0: &StateVector, t: f64) -> Result<StateVector> {
    let c = prop.project(phi0)?;
    Ok(prop.evolve_projected(&c, t))
}

/// Sample times with an optional reference frequency for normalized time.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
    reference_frequency: Option<f64>,
}

impl TimeGrid {
    /// `steps + 1` equally spaced points from `t_start` to `t_end` inclusive.
    pub fn uniform(t_start: f64, t_end: f64, steps: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite() && t_end > t_start) {
            return Err(Error::Config(format!("time grid needs t_end > t_start, got [{t_start}, {t_end}]")));
        }
        if steps == 0 {
            return Err(Error::Config("time grid needs at least one step".into()));
        }
        let dt = (t_end - t_start) / steps as f64;
        let times = (0..=steps).map(|i| if i == steps { t_end } else { t_start + dt * i as f64 }).collect();
        Ok(Self { times, reference_frequency: None })
    }

    /// Arbitrary sample times.
    pub fn from_times(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::Config("time grid needs at least one finite time".into()));
        }
        Ok(Self { times, reference_frequency: None })
    }

    pub fn with_reference_frequency(mut self, omega: f64) -> Self {
        self.reference_frequency = Some(omega);
        self
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn reference_frequency(&self) -> Option<f64> {
        self.reference_frequency
    }

    /// `τ = ω_ref·t`, or `t` itself without a reference frequency.
    pub fn normalized(&self, t: f64) -> f64 {
        self.reference_frequency.map_or(t, |w| w * t)
    }
}

/// Evolves to every grid point, each directly from `t = 0`.
pub fn evolve_series(prop: &SpectralPropagator, phi0: &StateVector, grid: &TimeGrid) -> Result<Vec<StateVector>> {
    let c = prop.project(phi0)?;
    Ok(grid.times().iter().map(|&t| prop.evolve_projected(&c, t)).collect())
}

/// Classical fourth-order Runge–Kutta on `dφ/dt = -iHφ` with `steps`
/// equal steps. No renormalization is applied.
///
/// Accurate when `‖H‖_max·t/steps ≲ 0.01`.
pub fn evolve_rk4(h: &HermitianMatrix, phi0: &StateVector, t: f64, steps: usize) -> Result<StateVector> {
    if h.dim() != phi0.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), got: phi0.dim() });
    }
    if steps == 0 {
        return Ok(phi0.clone());
    }
    let dt = t / steps as f64;
    let mi = C64::new(0.0, -1.0);
    let deriv = |x: &[C64]| -> Vec<C64> { h.apply(x).into_iter().map(|z| z * mi).collect() };
    let axpy = |x: &[C64], k: &[C64], s: f64| -> Vec<C64> { x.iter().zip(k).map(|(a, b)| a + b * s).collect() };
    let mut y = phi0.amplitudes().to_vec();
    for _ in 0..steps {
        let k1 = deriv(&y);
        let k2 = deriv(&axpy(&y, &k1, dt / 2.0));
        let k3 = deriv(&axpy(&y, &k2, dt / 2.0));
        let k4 = deriv(&axpy(&y, &k3, dt));
        for i in 0..y.len() {
            y[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
    }
    Ok(StateVector::from_amplitudes(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_input_sorts() {
        let h = HermitianMatrix::from_diagonal(&[3.0, -1.0, 2.0]);
        let p = diagonalize(&h).unwrap();
        assert_eq!(p.eigenvalues(), &[-1.0, 2.0, 3.0]);
        assert_eq!(p.eigenvector(0), &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.sweeps(), 0);
    }

    #[test]
    fn two_by_two() {
        let k = 0.7;
        let h = HermitianMatrix::from_rows(&[vec![c(0.0, 0.0), c(k, 0.0)], vec![c(k, 0.0), c(0.0, 0.0)]]).unwrap();
        let p = diagonalize(&h).unwrap();
        assert!((p.eigenvalues()[0] + k).abs() < 1e-15);
        assert!((p.eigenvalues()[1] - k).abs() < 1e-15);
        let v = p.eigenvector(0);
        let h2 = std::f64::consts::FRAC_1_SQRT_2;
        // (1, -1)/√2 up to a global phase
        assert!(((v[0] + v[1]).norm()) < 1e-15);
        assert!((v[0].norm() - h2).abs() < 1e-15);
    }

    #[test]
    fn complex_three_by_three() {
        let h = HermitianMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.5, 0.25), c(0.0, -0.3)],
            vec![c(0.5, -0.25), c(-2.0, 0.0), c(0.1, 0.1)],
            vec![c(0.0, 0.3), c(0.1, -0.1), c(0.4, 0.0)],
        ])
        .unwrap();
        let p = diagonalize(&h).unwrap();
        assert!(p.residual(&h) < 1e-14);
        assert!(p.unitarity_defect() < 1e-14);
        assert!(p.reconstruct().max_abs_diff(&h) < 1e-14);
        let tr: f64 = p.eigenvalues().iter().sum();
        assert!((tr - (1.0 - 2.0 + 0.4)).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = HermitianMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        assert!(matches!(diagonalize(&h), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn evolve_identity_at_zero() {
        let h = HermitianMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.5, 0.0)]]).unwrap();
        let p = diagonalize(&h).unwrap();
        let phi = StateVector::from_amplitudes(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        assert!(evolve(&p, &phi, 0.0).unwrap().max_component_diff(&phi) < 1e-15);
        let bad = StateVector::from_amplitudes(vec![c(1.0, 0.0)]);
        assert!(matches!(evolve(&p, &bad, 1.0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn grid_construction() {
        let g = TimeGrid::uniform(0.0, 1.0, 4).unwrap().with_reference_frequency(2.0);
        assert_eq!(g.times(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g.normalized(0.5), 1.0);
        assert!(TimeGrid::uniform(1.0, 1.0, 4).is_err());
        assert!(TimeGrid::uniform(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn rk4_zero_hamiltonian() {
        let h = HermitianMatrix::zeros(2);
        let phi = StateVector::from_amplitudes(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        assert_eq!(evolve_rk4(&h, &phi, 10.0, 7).unwrap(), phi);
    }
}
