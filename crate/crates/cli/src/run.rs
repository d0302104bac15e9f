//! Run orchestration: build, diagonalize once, sample every observable on
//! the time grid, and emit CSV with a commented metadata header.

use std::io::{self, Write};

use cqed_core::prelude::*;
use std::result::Result;
use num_complex::Complex64 as C64;

use crate::config::{InitialState, Observable, RunSpec};
use crate::error::CliError;

/// Tolerance on `max |HR - RD|` relative to `‖H‖_max`.
pub const EIGEN_RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Tolerance on `max_t |‖φ(t)‖ - 1|`.
pub const NORM_DRIFT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    pub dimension: usize,
    pub h_max: f64,
    pub eigen_residual: f64,
    pub jacobi_sweeps: usize,
    pub norm_drift: f64,
    /// `max_t |⟨H⟩(t) - ⟨H⟩(0)| / |⟨H⟩(0)|` (absolute when `⟨H⟩(0) = 0`).
    pub energy_drift: f64,
    pub reference_frequency: f64,
}

impl Diagnostics {
    pub fn check(&self) -> Result<(), CliError> {
        if self.eigen_residual > EIGEN_RESIDUAL_TOLERANCE * self.h_max {
            return Err(CliError::Numerical(format!(
                "eigen-residual {:.3e} exceeds {EIGEN_RESIDUAL_TOLERANCE:e} x ||H||_max = {:.3e}",
                self.eigen_residual,
                EIGEN_RESIDUAL_TOLERANCE * self.h_max
            )));
        }
        if self.norm_drift > NORM_DRIFT_TOLERANCE {
            return Err(CliError::Numerical(format!(
                "norm drift {:.3e} exceeds {NORM_DRIFT_TOLERANCE:e}",
                self.norm_drift
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub header: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub diagnostics: Diagnostics,
}

impl RunReport {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.columns.iter().position(|x| x == name)?;
        Some(self.rows.iter().map(|r| r[c]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        for line in &self.header {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        let mut line = String::new();
        for row in &self.rows {
            line.clear();
            for (i, x) in row.iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                line.push_str(&format!("{x:.16e}"));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

enum Series {
    Real(Vec<f64>),
    Complex(Vec<C64>),
}

fn sample(idx: &StateIndexer, phi: &StateVector, obs: &Observable) -> cqed_core::Result<C64> {
    let re = |x: f64| C64::new(x, 0.0);
    Ok(match obs {
        Observable::State { basis, .. } => re(state_probability(idx, phi, basis)?),
        Observable::Level { emitter, level, .. } => re(level_probability(idx, phi, *emitter, *level)?),
        Observable::LevelSum { emitter, levels, .. } => {
            let mut p = 0.0;
            for &l in levels {
                p += level_probability(idx, phi, *emitter, l)?;
            }
            re(p)
        }
        Observable::PhotonNumber { mode, .. } => re(expected_photon_number(idx, phi, *mode)?),
        Observable::PhotonProbability { mode, count, .. } => re(photon_probability(idx, phi, *mode, *count)?),
        Observable::Annihilation { mode, .. } => expect_annihilation(idx, phi, *mode)?,
        Observable::Ladder { emitter, to, from, .. } => expect_ladder(idx, phi, *emitter, *to, *from)?,
        Observable::Commutator { emitter, to, from, .. } => {
            re(expect_ladder_commutator(idx, phi, *emitter, *to, *from)?)
        }
        Observable::Concurrence { split, .. } => re(concurrence(idx, phi, split)?),
    })
}

/// Runs `spec` and returns the full time series. Numerical sanity limits
/// are recorded in [`RunReport::diagnostics`]; see [`Diagnostics::check`].
pub fn execute(spec: &RunSpec) -> Result<RunReport, CliError> {
    let idx = StateIndexer::new(&spec.system)?;
    let h = build_full(&spec.system)?;
    let prop = diagonalize(&h)?;
    let phi0 = spec.initial.build(&spec.system)?;
    let reference_frequency = spec
        .time
        .reference_frequency
        .or_else(|| spec.system.modes.first().map(|m| m.frequency))
        .unwrap_or(1.0);
    let grid = TimeGrid::uniform(spec.time.t_start, spec.time.t_end, spec.time.steps)?
        .with_reference_frequency(reference_frequency);

    let coefficients = prop.project(&phi0)?;
    let mut series: Vec<Series> = spec
        .observables
        .iter()
        .map(|o| if o.is_complex() { Series::Complex(vec![]) } else { Series::Real(vec![]) })
        .collect();
    let mut norms = Vec::with_capacity(grid.len());
    let e0 = h.expectation(phi0.amplitudes()).re;
    let mut energy_dev: f64 = 0.0;
    for &t in grid.times() {
        let phi = prop.evolve_projected(&coefficients, t);
        for (obs, s) in spec.observables.iter().zip(&mut series) {
            let v = sample(&idx, &phi, obs)?;
            match s {
                Series::Real(xs) => xs.push(v.re),
                Series::Complex(zs) => zs.push(v),
            }
        }
        norms.push(phi.norm());
        energy_dev = energy_dev.max((h.expectation(phi.amplitudes()).re - e0).abs());
    }

    let mut columns = vec!["time".to_string(), "tau".to_string()];
    let mut data: Vec<Vec<f64>> = vec![
        grid.times().to_vec(),
        grid.times().iter().map(|&t| grid.normalized(t)).collect(),
    ];
    for (obs, s) in spec.observables.iter().zip(series) {
        match s {
            Series::Real(xs) => {
                columns.push(obs.name().to_string());
                data.push(xs);
            }
            Series::Complex(zs) => {
                for part in ["re", "im", "abs", "phase"] {
                    columns.push(format!("{}_{part}", obs.name()));
                }
                data.push(zs.iter().map(|z| z.re).collect());
                data.push(zs.iter().map(|z| z.im).collect());
                data.push(zs.iter().map(|z| z.norm()).collect());
                data.push(unwrap_phases(&zs));
            }
        }
    }
    columns.push("norm".into());
    let norm_drift = norms.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    data.push(norms);
    let rows = (0..grid.len()).map(|r| data.iter().map(|c| c[r]).collect()).collect();

    let diagnostics = Diagnostics {
        dimension: idx.dimension(),
        h_max: h.max_abs(),
        eigen_residual: prop.residual(&h),
        jacobi_sweeps: prop.sweeps(),
        norm_drift,
        energy_drift: if e0 != 0.0 { energy_dev / e0.abs() } else { energy_dev },
        reference_frequency,
    };
    let header = header(spec, &diagnostics);
    Ok(RunReport { header, columns, rows, diagnostics })
}

fn header(spec: &RunSpec, d: &Diagnostics) -> Vec<String> {
    let window = spec.time.t_end - spec.time.t_start;
    let kappa_max = spec
        .system
        .field_couplings
        .iter()
        .map(|c| c.strength.norm())
        .fold(0.0, f64::max);
    let initial = match &spec.initial {
        InitialState::Fock(_) => "fock",
        InitialState::Coherent { .. } => "coherent",
        InitialState::Superposition(_) => "superposition",
    };
    let mut h = vec![
        format!("run = {}", spec.name),
    ];
    if let Some(desc) = &spec.description {
        h.push(format!("description = {desc}"));
    }
    h.extend([
        format!("dimension = {}", d.dimension),
        format!("rwa = {}", spec.system.rwa),
        format!("spinful = {}", spec.spinful),
        format!("initial_state = {initial}"),
        format!("t_start_s = {:.6e}", spec.time.t_start),
        format!("t_end_s = {:.6e}", spec.time.t_end),
        format!("steps = {}", spec.time.steps),
        format!("reference_frequency_rad_per_s = {:.6e}", d.reference_frequency),
        "tau = reference_frequency * time".to_string(),
        format!("window_reference_cycles = {:.4}", window * d.reference_frequency / std::f64::consts::TAU),
    ]);
    if kappa_max > 0.0 {
        // sin^2(kt) has period pi/k
        h.push(format!("window_rabi_periods = {:.4}", window * kappa_max / std::f64::consts::PI));
    }
    h.extend([
        format!("h_max_rad_per_s = {:.6e}", d.h_max),
        format!("eigen_residual = {:.6e}", d.eigen_residual),
        format!("eigen_residual_relative = {:.6e}", d.eigen_residual / d.h_max.max(f64::MIN_POSITIVE)),
        format!("jacobi_sweeps = {}", d.jacobi_sweeps),
        format!("norm_drift = {:.6e}", d.norm_drift),
        format!("energy_drift_relative = {:.6e}", d.energy_drift),
    ]);
    for note in &spec.notes {
        h.push(format!("note: {note}"));
    }
    h
}
