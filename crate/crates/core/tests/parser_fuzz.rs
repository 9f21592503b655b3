use matchsim_core::algebra::PauliString;
use matchsim_core::circuit_io::{parse, Sign};
use matchsim_core::corpus::{fuzz_input, GOLDEN};
use matchsim_core::numeric::{c, involution_exp, max_abs_diff, seeded};
use matchsim_core::oracle::{operator_matrix, resolve, run, Outcomes};
use proptest::prelude::*;

fn golden_texts() -> Vec<String> {
    GOLDEN.iter().map(|(_, t)| t.to_string()).collect()
}

fn check_total(text: &str) {
    if let Err(errs) = parse(text) {
        assert!(!errs.is_empty());
        for e in errs {
            assert!(e.line >= 1 && e.column >= 1, "{text:?}: {e}");
        }
    }
}

#[test]
fn fuzzed_inputs_never_panic() {
    let golden = golden_texts();
    let mut rng = seeded(77);
    for _ in 0..20_000 {
        check_total(&fuzz_input(&mut rng, &golden));
    }
}

#[test]
fn every_truncation_is_handled() {
    for (_, text) in GOLDEN {
        for (cut, _) in text.char_indices() {
            check_total(&text[..cut]);
        }
    }
}

#[test]
fn golden_round_trip() {
    for (name, text) in GOLDEN {
        let c = parse(text).unwrap_or_else(|e| panic!("{name}: {e:?}"));
        let emitted = c.emit();
        let again = parse(&emitted).unwrap();
        assert_eq!(again, c, "{name}");
        assert_eq!(again.emit(), emitted, "{name}");
    }
}

#[test]
fn conjugation_chain_is_z_rotation() {
    let text = GOLDEN.iter().find(|(n, _)| *n == "conjugation_chain").unwrap().1;
    let circ = parse(text).unwrap();
    let got = operator_matrix(3, &resolve(&circ, &[]).unwrap()).unwrap();
    let z3: PauliString = "IIZ".parse().unwrap();
    let best = [1.0, -1.0]
        .iter()
        .map(|s| max_abs_diff(&got, &involution_exp(&z3.to_dense(), c(0.0, 0.3 * s))))
        .fold(f64::INFINITY, f64::min);
    assert!(best < 1e-12, "{best}");
}

#[test]
fn gadget_files_halve_one_amplitude() {
    for (name, want) in [("gadget_pi3", 0.5), ("gadget_minus_variant", 2.0)] {
        let text = GOLDEN.iter().find(|(n, _)| *n == name).unwrap().1;
        let circ = parse(text).unwrap();
        let amps = run(&circ, Outcomes::Fixed(&[]), None).unwrap().state.amplitudes();
        // qubit 0 is the high bit; ancilla stays |0>
        let ratio = amps[2] / amps[0];
        assert!((ratio - c(want, 0.0)).norm() < 1e-14, "{name}: {ratio}");
        assert!(amps[1].norm() < 1e-15 && amps[3].norm() < 1e-15);
    }
}

#[test]
fn emitted_text_gives_identical_operator() {
    // the emitted text reparses to the same operator to the last bit
    for (name, text) in GOLDEN {
        let circ = parse(text).unwrap();
        let a = operator_matrix(circ.n, &resolve(&circ, &vec![Sign::Plus; circ.measure_count()]).unwrap()).unwrap();
        let back = parse(&circ.emit()).unwrap();
        let b = operator_matrix(back.n, &resolve(&back, &vec![Sign::Plus; back.measure_count()]).unwrap()).unwrap();
        assert_eq!(max_abs_diff(&a, &b), 0.0, "{name}");
    }
}

proptest! {
    #[test]
    fn arbitrary_strings_never_panic(s in "\\PC{0,120}") {
        check_total(&s);
    }

    #[test]
    fn line_shaped_strings_never_panic(s in "(modes|rot|gate|project|measure|name|#)( [-+0-9./eXYZIi]{0,8}){0,6}(\n(rot|gate|project|measure)( [-+0-9./eXYZIi]{0,8}){0,6}){0,5}") {
        check_total(&s);
    }
}
