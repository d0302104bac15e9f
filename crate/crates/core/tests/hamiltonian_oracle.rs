mod common;

use common::*;
use cqed_core::prelude::*;
use proptest::prelude::*;

#[test]
fn indexer_round_trip_is_exhaustive() {
    let mut r = rng(1);
    for _ in 0..50 {
        let cfg = random_config(&mut r);
        let idx = StateIndexer::new(&cfg).unwrap();
        for i in 0..idx.dimension() {
            let s = idx.state_of(i).unwrap();
            assert_eq!(idx.index_of(&s).unwrap(), i);
        }
    }
}

#[test]
fn dimension_matches_nested_enumeration() {
    // Six two-level dots and a 9-photon mode, plus a mixed system.
    let dots = SystemConfig::new(vec![EmitterSpec::new(vec![0.0, 1.0]); 6], vec![ModeSpec::new(1.0, 8)]);
    let mixed = SystemConfig::new(
        vec![EmitterSpec::new(vec![0.0, 1.0, 2.0]), EmitterSpec::new(vec![0.0, 1.0])],
        vec![ModeSpec::new(1.0, 2), ModeSpec::new(1.0, 4)],
    );
    for cfg in [dots, mixed] {
        let dims = cfg.dims();
        let idx = StateIndexer::new(&cfg).unwrap();
        // odometer enumeration of every digit tuple
        let mut digits = vec![0usize; dims.len()];
        let mut seen = std::collections::HashSet::new();
        loop {
            let k = cfg.emitters.len();
            let s = BasisState::new(digits[..k].to_vec(), digits[k..].to_vec());
            assert!(seen.insert(idx.index_of(&s).unwrap()));
            let mut p = dims.len();
            loop {
                if p == 0 {
                    break;
                }
                p -= 1;
                digits[p] += 1;
                if digits[p] < dims[p] {
                    break;
                }
                digits[p] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
        assert_eq!(seen.len(), dimension(&cfg).unwrap());
        assert_eq!(seen.len(), idx.dimension());
    }
}

#[test]
fn assembled_hamiltonian_matches_operator_products() {
    let mut r = rng(7);
    for _ in 0..60 {
        let cfg = random_config(&mut r);
        let h = build_full(&cfg).unwrap();
        let brute = brute_hamiltonian(&cfg);
        let scale = h.max_abs().max(1.0);
        assert!(brute.max_diff(&h) <= 1e-13 * scale, "config {cfg:?}");
    }
}

#[test]
fn rwa_removes_only_counter_rotating_terms() {
    let mut cfg = SystemConfig::new(vec![EmitterSpec::new(vec![0.0, 1.0])], vec![ModeSpec::new(1.0, 5)]);
    cfg.add_field_coupling(0, 0, 1, 0, c(0.3, -0.1));
    for rwa in [false, true] {
        let cfg = cfg.clone().with_rwa(rwa);
        let h = build_h_re(&cfg).unwrap();
        assert!(brute_hamiltonian(&cfg).max_diff(&(&build_h0(&cfg).unwrap() + &h)) < 1e-15);
    }
}

#[test]
fn rwa_single_emitter_is_block_diagonal_in_excitations() {
    let mut cfg = SystemConfig::new(vec![EmitterSpec::new(vec![0.0, 1.3])], vec![ModeSpec::new(1.0, 6)]).with_rwa(true);
    cfg.add_field_coupling(0, 0, 1, 0, 0.4);
    let idx = StateIndexer::new(&cfg).unwrap();
    let h = build_full(&cfg).unwrap();
    let excitations = |i: usize| idx.digit(i, 0) + idx.digit(i, 1);
    for p in 0..idx.dimension() {
        for q in 0..idx.dimension() {
            if excitations(p) != excitations(q) {
                assert_eq!(h[(p, q)].norm(), 0.0);
            }
        }
    }
}

#[test]
fn pair_term_matches_tensor_product() {
    let mut cfg = SystemConfig::new(vec![EmitterSpec::new(vec![0.0, 1.0]); 2], vec![]);
    let j = c(0.25, 0.1);
    cfg.add_dipole_coupling(0, 1, (0, 1), (0, 1), j);
    let x = ket_bra(2, 0, 1).scale(j).add(&ket_bra(2, 1, 0).scale(j.conj()));
    let y = ket_bra(2, 0, 1).add(&ket_bra(2, 1, 0));
    let h = build_h_rr(&cfg).unwrap();
    assert_eq!(x.kron(&y).max_diff(&h), 0.0);
}

#[test]
fn lh_hh_forbidden_transition_has_no_elements() {
    let mut cfg = SystemConfig::new(vec![EmitterSpec::new(vec![0.0, 0.03, 0.829])], vec![ModeSpec::new(0.8, 8)]);
    cfg.add_field_coupling(0, 0, 2, 0, 0.01);
    cfg.add_field_coupling(0, 1, 2, 0, 0.02);
    let idx = StateIndexer::new(&cfg).unwrap();
    let h = build_full(&cfg).unwrap();
    for p in 0..27 {
        for q in 0..27 {
            let (lp, lq) = (idx.digit(p, 0), idx.digit(q, 0));
            if (lp, lq) == (0, 1) || (lp, lq) == (1, 0) {
                assert_eq!(h[(p, q)].norm(), 0.0);
            }
        }
    }
}

#[test]
fn bose_factors() {
    let cap = 6;
    let mut cfg = SystemConfig::new(vec![EmitterSpec::new(vec![0.0, 1.0])], vec![ModeSpec::new(1.0, cap)]);
    cfg.add_field_coupling(0, 0, 1, 0, 1.0);
    let idx = StateIndexer::new(&cfg).unwrap();
    let h = build_h_re(&cfg).unwrap();
    for f in 1..=cap {
        // ⟨e, f-1| κ σ_eg a |g, f⟩ = √f
        let p = idx.index_of(&BasisState::new(vec![1], vec![f - 1])).unwrap();
        let q = idx.index_of(&BasisState::new(vec![0], vec![f])).unwrap();
        assert!((h[(p, q)].re - (f as f64).sqrt()).abs() < 1e-15);
    }
}

proptest! {
    #[test]
    fn builders_are_hermitian(seed in any::<u64>()) {
        let cfg = random_config(&mut rng(seed));
        for h in [build_h0(&cfg).unwrap(), build_h_re(&cfg).unwrap(), build_h_rr(&cfg).unwrap(), build_full(&cfg).unwrap()] {
            prop_assert!(h.hermiticity_deviation() <= 1e-12 * h.max_abs());
        }
    }
}
