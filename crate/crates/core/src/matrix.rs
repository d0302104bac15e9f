//! Dense complex square matrices for Hamiltonians and density matrices.

use std::ops::{Add, Index, IndexMut};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Dense complex operator stored row-major.
///
/// Builders in this crate only ever produce Hermitian matrices; matrices
/// assembled from raw entries are checked where it matters (see
/// [`crate::propagator::diagonalize`]).
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Wraps row-major entries without checking Hermiticity.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: data.len() });
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub(crate) fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, p: usize) -> &[C64] {
        &self.data[p * self.dim..(p + 1) * self.dim]
    }

    /// Largest entry modulus, `‖H‖_max`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |H - H†|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for p in 0..n {
            for q in p..n {
                dev = dev.max((self.data[p * n + q] - self.data[q * n + p].conj()).norm());
            }
        }
        dev
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for p in 0..n {
            for q in 0..n {
                out.data[q * n + p] = self.data[p * n + q].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Matrix–vector product `H·v`.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        debug_assert_eq!(v.len(), self.dim);
        self.data
            .chunks_exact(self.dim.max(1))
            .take(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `v†·H·v`.
    pub fn expectation(&self, v: &[C64]) -> C64 {
        self.apply(v).iter().zip(v).map(|(hv, x)| x.conj() * hv).sum()
    }

    /// Dense product `self · other`.
    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.dim;
        assert_eq!(n, other.dim, "matmul dimension mismatch");
        let mut out = Self::zeros(n);
        for p in 0..n {
            for k in 0..n {
                let a = self.data[p * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let orow = &other.data[k * n..(k + 1) * n];
                for (o, b) in out.data[p * n..(p + 1) * n].iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Entrywise `max |A - B|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = C64;
    fn index(&self, (p, q): (usize, usize)) -> &C64 {
        &self.data[p * self.dim + q]
    }
}

impl IndexMut<(usize, usize)> for HermitianMatrix {
    fn index_mut(&mut self, (p, q): (usize, usize)) -> &mut C64 {
        &mut self.data[p * self.dim + q]
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        HermitianMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}
