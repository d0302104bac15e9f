//! Exact time-domain simulation of multipartite cavity-QED systems.
//!
//! Arbitrary multi-level emitters coupled to truncated bosonic modes are
//! described by a [`SystemConfig`]. The engine assembles the dense
//! Jaynes–Cummings–Paul Hamiltonian (with or without the rotating-wave
//! approximation), diagonalizes it once, and evolves pure states exactly
//! as `φ(t) = R·e^{-iDt}·R†·φ(0)`. Observables and the pure-state
//! concurrence are evaluated directly on the flat amplitudes.
//!
//! ```
//! use cqed_core::prelude::*;
//!
//! let mut config = SystemConfig::new(
//!     vec![EmitterSpec::new(vec![0.0, 1.0])],
//!     vec![ModeSpec::new(1.0, 1)],
//! ).with_rwa(true);
//! config.add_field_coupling(0, 0, 1, 0, 0.1);
//!
//! let idx = StateIndexer::new(&config).unwrap();
//! let h = build_full(&config).unwrap();
//! let prop = diagonalize(&h).unwrap();
//! let phi0 = fock_state(&config, &BasisState::new(vec![1], vec![0])).unwrap();
//! let phi = evolve(&prop, &phi0, 2.0).unwrap();
//! let p = state_probability(&idx, &phi, &BasisState::new(vec![0], vec![1])).unwrap();
//! assert!((p - (0.1f64 * 2.0).sin().powi(2)).abs() < 1e-12);
//! ```

pub mod entanglement;
pub mod error;
pub mod hamiltonian;
pub mod hilbert;
pub mod matrix;
pub mod observables;
pub mod propagator;
pub mod spin;
pub mod states;
pub mod units;

pub use error::{Error, Result};
pub use hilbert::{BasisState, EmitterSpec, ModeSpec, StateIndexer, SystemConfig};
pub use matrix::HermitianMatrix;
pub use states::StateVector;

pub mod prelude {
    pub use crate::entanglement::{concurrence, partial_trace, reduced_purity, Bipartition, DensityMatrix};
    pub use crate::error::{Error, Result};
    pub use crate::hamiltonian::{build_full, build_h0, build_h_re, build_h_rr, rabi_frequency};
    pub use crate::hilbert::{dimension, BasisState, EmitterSpec, ModeSpec, StateIndexer, SystemConfig};
    pub use crate::matrix::HermitianMatrix;
    pub use crate::observables::{
        expect_annihilation, expect_ladder, expect_ladder_commutator, expected_photon_number, level_probability,
        photon_probability, state_probability, unwrap_phases,
    };
    pub use crate::propagator::{diagonalize, evolve, evolve_rk4, evolve_series, SpectralPropagator, TimeGrid};
    pub use crate::spin::{
        expand_spin, expanded_level, expanded_mode, spin_charge, Spin, SpinCoupling, SpinDipoleCoupling, SpinfulConfig,
        SpinfulEmitterSpec, SpinfulModeSpec,
    };
    pub use crate::states::{
        coherent_state, fock_state, product_state, superposition, truncated_coherent_amplitudes, EmitterState, StateVector,
        NORM_TOLERANCE,
    };
}
