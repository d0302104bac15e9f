//! Brute-force reference constructions built from explicit local operators
//! and Kronecker products, independent of the index-shift code paths.
#![allow(dead_code)]

use cqed_core::prelude::*;
use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Plain dense square matrix.
#[derive(Clone, Debug)]
pub struct Mat {
    pub n: usize,
    pub a: Vec<C64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat { n, a: vec![c(0.0, 0.0); n * n] }
    }
    pub fn eye(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = c(1.0, 0.0);
        }
        m
    }
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.a[i * self.n + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.a[i * self.n + j] = v;
    }
    pub fn mul(&self, o: &Mat) -> Mat {
        let n = self.n;
        let mut r = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                for j in 0..n {
                    r.a[i * n + j] += x * o.get(k, j);
                }
            }
        }
        r
    }
    pub fn add(&self, o: &Mat) -> Mat {
        Mat { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }
    pub fn scale(&self, s: C64) -> Mat {
        Mat { n: self.n, a: self.a.iter().map(|x| x * s).collect() }
    }
    pub fn dagger(&self) -> Mat {
        let mut r = Mat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                r.set(j, i, self.get(i, j).conj());
            }
        }
        r
    }
    pub fn kron(&self, o: &Mat) -> Mat {
        let n = self.n * o.n;
        let mut r = Mat::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..o.n {
                    for l in 0..o.n {
                        r.set(i * o.n + k, j * o.n + l, self.get(i, j) * o.get(k, l));
                    }
                }
            }
        }
        r
    }
    /// ⟨v|M|v⟩
    pub fn sandwich(&self, v: &[C64]) -> C64 {
        let mut s = c(0.0, 0.0);
        for i in 0..self.n {
            for j in 0..self.n {
                s += v[i].conj() * self.get(i, j) * v[j];
            }
        }
        s
    }
    pub fn max_diff(&self, h: &HermitianMatrix) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                m = m.max((self.get(i, j) - h[(i, j)]).norm());
            }
        }
        m
    }
}

/// |i⟩⟨j| on a `d`-level space.
pub fn ket_bra(d: usize, i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(d);
    m.set(i, j, c(1.0, 0.0));
    m
}

/// Truncated annihilation operator on photon numbers 0..=cap.
pub fn annihilator(cap: usize) -> Mat {
    let mut m = Mat::zeros(cap + 1);
    for f in 1..=cap {
        m.set(f - 1, f, c((f as f64).sqrt(), 0.0));
    }
    m
}

/// Embeds a local operator acting on `partition` into the full space.
pub fn embed(dims: &[usize], partition: usize, local: &Mat) -> Mat {
    let mut out = Mat::eye(1);
    for (p, &d) in dims.iter().enumerate() {
        let f = if p == partition { local.clone() } else { Mat::eye(d) };
        out = out.kron(&f);
    }
    out
}

pub fn sigma(config: &SystemConfig, n: usize, i: usize, j: usize) -> Mat {
    embed(&config.dims(), n, &ket_bra(config.emitters[n].level_count(), i, j))
}

pub fn a_op(config: &SystemConfig, v: usize) -> Mat {
    embed(&config.dims(), config.emitters.len() + v, &annihilator(config.modes[v].photon_cap))
}

/// Operator-level Hamiltonian assembled from products of local operators.
pub fn brute_hamiltonian(config: &SystemConfig) -> Mat {
    let dims = config.dims();
    let dim: usize = dims.iter().product();
    let mut h = Mat::zeros(dim);
    for (n, e) in config.emitters.iter().enumerate() {
        for (i, &en) in e.energies.iter().enumerate() {
            h = h.add(&sigma(config, n, i, i).scale(c(en, 0.0)));
        }
    }
    for (v, m) in config.modes.iter().enumerate() {
        let a = a_op(config, v);
        h = h.add(&a.dagger().mul(&a).scale(c(m.frequency, 0.0)));
    }
    for fc in &config.field_couplings {
        let lower = sigma(config, fc.emitter, fc.lower, fc.upper); // |i⟩⟨j|
        let raise = sigma(config, fc.emitter, fc.upper, fc.lower); // |j⟩⟨i|
        let a = a_op(config, fc.mode);
        let ad = a.dagger();
        let k = fc.strength;
        if config.rwa {
            h = h.add(&lower.mul(&ad).scale(k));
            h = h.add(&raise.mul(&a).scale(k.conj()));
        } else {
            let atom = lower.scale(k).add(&raise.scale(k.conj()));
            h = h.add(&atom.mul(&a.add(&ad)));
        }
    }
    for d in &config.dipole_dipole {
        let (i, j) = d.first_levels;
        let (p, q) = d.second_levels;
        let first = sigma(config, d.first, i, j)
            .scale(d.strength)
            .add(&sigma(config, d.first, j, i).scale(d.strength.conj()));
        let second = sigma(config, d.second, p, q).add(&sigma(config, d.second, q, p));
        h = h.add(&first.mul(&second));
    }
    h
}

pub fn rand_c(rng: &mut StdRng, scale: f64) -> C64 {
    c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Random small system with 𝒩 ≤ 64 and generic couplings.
pub fn random_config(rng: &mut StdRng) -> SystemConfig {
    loop {
        let k = rng.gen_range(0..=2);
        let m = rng.gen_range(0..=2);
        if k + m == 0 {
            continue;
        }
        let emitters: Vec<EmitterSpec> = (0..k)
            .map(|_| {
                let b = rng.gen_range(2..=3);
                let mut e: Vec<f64> = (0..b).map(|_| rng.gen_range(0.0..3.0)).collect();
                e.sort_by(f64::total_cmp);
                EmitterSpec::new(e)
            })
            .collect();
        let modes: Vec<ModeSpec> =
            (0..m).map(|_| ModeSpec::new(rng.gen_range(0.5..2.0), rng.gen_range(0..=3))).collect();
        let mut cfg = SystemConfig::new(emitters, modes).with_rwa(rng.gen_bool(0.5));
        if cfg.dims().iter().product::<usize>() > 64 {
            continue;
        }
        for n in 0..k {
            let b = cfg.emitters[n].level_count();
            for v in 0..m {
                for i in 0..b {
                    for j in i + 1..b {
                        if rng.gen_bool(0.7) {
                            let s = rand_c(rng, 0.4);
                            cfg.add_field_coupling(n, i, j, v, s);
                        }
                    }
                }
            }
        }
        if k == 2 {
            let b0 = cfg.emitters[0].level_count();
            let b1 = cfg.emitters[1].level_count();
            let s = rand_c(rng, 0.2);
            cfg.add_dipole_coupling(0, 1, (0, b0 - 1), (0, b1 - 1), s);
        }
        return cfg;
    }
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_state(rng: &mut StdRng, dim: usize) -> StateVector {
    let v: Vec<C64> = (0..dim).map(|_| rand_c(rng, 1.0)).collect();
    StateVector::normalized(v).unwrap()
}
