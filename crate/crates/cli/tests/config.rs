//! Config parsing: preset values and rejection of malformed input.

use cqed_cli::{parse_str, presets, CliError, Observable};
use cqed_core::units;

const JC: &str = r#"
schema_version = 1
name = "jc"
[[emitters]]
label = "atom"
levels = ["g", "e"]
energies = ["0 eV", "1 eV"]
[[modes]]
frequency = "1 eV"
photon_cap = 2
[[couplings]]
lower = "g"
upper = "e"
strength = "1 meV"
[initial]
kind = "fock"
levels = ["e"]
photons = [0]
[time]
t_end = "1 ps"
steps = 10
"#;

fn invalid_key(text: &str) -> String {
    match parse_str(text, "test") {
        Err(CliError::Invalid { key, .. }) => key,
        other => panic!("expected an invalid-config error, got {other:?}"),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn minimal_config_parses() {
    let spec = parse_str(JC, "jc").unwrap();
    assert_eq!(spec.system.emitters[0].energies[1], units::ev_to_angular(1.0));
    assert!(spec.couplings.is_empty());
    assert_eq!(spec.system.field_couplings.len(), 1);
    assert!(rel(spec.system.field_couplings[0].strength.norm(), units::ev_to_angular(1e-3)) < 1e-15);
    assert!(!spec.system.rwa);
    assert_eq!(spec.time.steps, 10);
    let names: Vec<&str> = spec.observables.iter().map(Observable::name).collect();
    assert!(names.contains(&"P_g") && names.contains(&"P_e"));
    assert!(names.contains(&"concurrence"));
}

#[test]
fn quantum_well_presets_carry_the_stated_parameters() {
    for name in ["qw3-weak", "qw3-strong", "qw3-ultrastrong"] {
        let spec = presets::load(name).unwrap();
        let qw = &spec.system.emitters[0];
        let mev = [0.0, 30.0, 829.0].map(|e| units::ev_to_angular(e * 1e-3));
        for (got, want) in qw.energies.iter().zip(mev) {
            assert!((got - want).abs() <= 1e-12 * mev[2], "{name}");
        }
        assert_eq!(spec.system.modes[0].frequency, 1.2582e15);
        assert_eq!(spec.system.modes[0].photon_cap, 8);
        assert_eq!(spec.couplings.len(), 2);
    }
}

#[test]
fn quantum_dot_presets_carry_the_stated_parameters() {
    for (name, field) in [("qd6-weak", 1e6), ("qd6-strong", 1e7), ("qd6-ultrastrong", 1e8)] {
        let spec = presets::load(name).unwrap();
        assert_eq!(spec.system.emitters.len(), 6);
        assert_eq!(spec.system.modes[0].frequency, 1.5177e15);
        let g = cqed_core::prelude::rabi_frequency(field, units::debye_to_coulomb_meter(192.0));
        assert_eq!(spec.couplings.len(), 6);
        assert!(spec.couplings.iter().all(|c| rel(c.strength, g) < 1e-15));
        assert_eq!(spec.system.dipole_dipole.len(), 15);
        let j = units::ev_to_angular(5e-3);
        assert!(spec.system.dipole_dipole.iter().all(|d| rel(d.strength.norm(), j) < 1e-12));
    }
}

#[test]
fn photon_number_above_cap_is_rejected() {
    let text = JC.replace("photons = [0]", "photons = [3]");
    match parse_str(&text, "test") {
        Err(e @ CliError::Invalid { .. }) => {
            assert_eq!(e.exit_code(), 2);
            let msg = e.to_string();
            assert!(msg.contains("initial.photons[1]") && msg.contains("photon_cap 2"), "{msg}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_keys_and_syntax_errors_report_their_position() {
    let text = JC.replace("photon_cap = 2", "photon_cap = 2\ncap = 3");
    let msg = parse_str(&text, "test").unwrap_err().to_string();
    assert!(msg.contains("unknown field `cap`") && msg.contains("line"), "{msg}");
    let msg = parse_str("schema_version = 1\nname = \"x\n", "test").unwrap_err().to_string();
    assert!(msg.contains("line 2"), "{msg}");
}

#[test]
fn schema_version_is_checked() {
    assert_eq!(invalid_key(&JC.replace("schema_version = 1", "schema_version = 7")), "schema_version");
}

#[test]
fn coupling_needs_exactly_one_strength_source() {
    let key = invalid_key(&JC.replace("strength = \"1 meV\"", ""));
    assert!(key.starts_with("couplings[1]"), "{key}");
    let key = invalid_key(&JC.replace("strength = \"1 meV\"", "strength = 1.0\nfield = \"1 V/m\"\ndipole = \"1 D\""));
    assert!(key.starts_with("couplings[1]"), "{key}");
}

#[test]
fn bad_units_and_labels_are_rejected() {
    assert!(invalid_key(&JC.replace("\"1 meV\"", "\"1 furlong\"")).starts_with("couplings[1]"));
    assert!(invalid_key(&JC.replace("upper = \"e\"", "upper = \"x\"")).starts_with("couplings[1]"));
    assert!(invalid_key(&JC.replace("levels = [\"e\"]", "levels = [\"e\", \"g\"]")).starts_with("initial"));
    assert!(invalid_key(&JC.replace("steps = 10", "steps = 0")).starts_with("time"));
}

#[test]
fn spinful_and_scalar_sections_cannot_mix() {
    let text = format!(
        "{JC}\n[[spin_emitters]]\nlevels = [\"g\", \"T\"]\nenergies_up = [0.0, 1.0]\nenergies_down = [0.0, 1.0]\n"
    );
    assert!(parse_str(&text, "test").is_err());
}

#[test]
fn spin_coupling_must_respect_the_selection_rule() {
    let text = presets::find("spin-lambda").unwrap().source.replacen("upper_spin = \"down\"", "upper_spin = \"up\"", 1);
    let key = invalid_key(&text);
    assert!(key.starts_with("spin_couplings[1]"), "{key}");
}

#[test]
fn numbers_and_unit_strings_are_interchangeable() {
    let a = parse_str(JC, "a").unwrap();
    let omega = units::ev_to_angular(1.0);
    let b = parse_str(&JC.replace("frequency = \"1 eV\"", &format!("frequency = {omega:e}")), "b").unwrap();
    assert_eq!(a.system.modes[0].frequency, b.system.modes[0].frequency);
}
