//! Seeded random circuits for tests, benchmarks and the CLI.

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{lie_basis, BasisKind, PauliString};
use crate::circuit_io::{Circuit, Sign};
use crate::numeric::{complex_normal, Rng64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusSpec {
    pub n: usize,
    pub gates: usize,
    /// `project` items with a random sign.
    pub projections: usize,
    pub measures: usize,
    /// Allow linear (odd) generators.
    pub odd: bool,
    /// Fraction of gates written as `q + rU` with complex coefficients.
    pub nonunitary: f64,
    /// Size of the imaginary part of non-unitary angles.
    pub mildness: f64,
}

impl CorpusSpec {
    pub fn unitary(n: usize, gates: usize) -> Self {
        CorpusSpec { n, gates, projections: 0, measures: 0, odd: true, nonunitary: 0.0, mildness: 0.0 }
    }
}

/// Uniform non-identity element of `L2` (or `L2'` when `odd` is false).
pub fn random_generator(rng: &mut Rng64, n: usize, odd: bool) -> PauliString {
    if odd && rng.random_bool((2 * n) as f64 / (2 * n * n + n) as f64) {
        let m = rng.random_range(0..2 * n);
        return crate::algebra::majorana(m, n);
    }
    // quadratic: Z_k or a cross term on l < k
    let cross = n * (n - 1) * 2;
    let pick = rng.random_range(0..n + cross);
    if pick < n {
        return PauliString::single(n, pick, crate::algebra::Letter::Z);
    }
    let (a, b) = loop {
        let a = rng.random_range(0..2 * n);
        let b = rng.random_range(0..2 * n);
        if a / 2 != b / 2 {
            break (a.min(b), a.max(b));
        }
    };
    (&crate::algebra::majorana(a, n) * &crate::algebra::majorana(b, n)).unsigned()
}

/// Every generator for small `n`, for exhaustive checks.
pub fn all_generators(n: usize, odd: bool) -> Vec<PauliString> {
    let kind = if odd { BasisKind::L2 } else { BasisKind::L2Prime };
    lie_basis(kind, n).elements.into_iter().filter(|p| !p.is_identity()).collect()
}

pub fn random_circuit(rng: &mut Rng64, spec: &CorpusSpec) -> Circuit {
    let mut circ = Circuit::new(spec.n);
    let slots = spec.gates + spec.projections + spec.measures;
    let mut kinds: Vec<u8> = std::iter::repeat_n(0u8, spec.gates)
        .chain(std::iter::repeat_n(1, spec.projections))
        .chain(std::iter::repeat_n(2, spec.measures))
        .collect();
    // shuffle but keep at least one gate in front of the first projection
    for i in (1..kinds.len()).rev() {
        let j = rng.random_range(0..=i);
        kinds.swap(i, j);
    }
    if let Some(first_gate) = kinds.iter().position(|&k| k == 0) {
        kinds.swap(0, first_gate);
    }
    debug_assert_eq!(kinds.len(), slots);
    for k in kinds {
        match k {
            0 => {
                let u = random_generator(rng, spec.n, spec.odd);
                if rng.random_bool(spec.nonunitary.clamp(0.0, 1.0)) {
                    let t = Complex64::new(rng.random_range(-1.5..1.5), spec.mildness * rng.random_range(-1.0..1.0));
                    let q = t.cos() * (1.0 + 0.2 * complex_normal(rng));
                    let r = Complex64::new(0.0, 1.0) * t.sin() * (1.0 + 0.2 * complex_normal(rng));
                    circ.gate(q, r, u);
                } else {
                    circ.rot(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI), u);
                }
            }
            1 => {
                let sign = if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus };
                circ.project(rng.random_range(0..spec.n), sign);
            }
            _ => {
                circ.measure(rng.random_range(0..spec.n));
            }
        }
    }
    circ
}

/// Two-qubit circuit of up to `max_factors` exponentials `e^{i t A}` with
/// complex `t` and `A` drawn from the 11-element basis, optionally with
/// projections in between.
pub fn random_two_qubit_product(rng: &mut Rng64, max_factors: usize, projections: bool) -> Circuit {
    let basis = lie_basis(BasisKind::L2, 2).elements;
    let mut circ = Circuit::new(2);
    let count = rng.random_range(1..=max_factors);
    for _ in 0..count {
        if projections && rng.random_bool(0.25) {
            let sign = if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus };
            circ.project(rng.random_range(0..2), sign);
            continue;
        }
        let a = basis[rng.random_range(0..basis.len())].clone();
        let t = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-0.5..0.5));
        circ.gate(t.cos(), Complex64::new(0.0, 1.0) * t.sin(), a);
    }
    circ
}

/// Random normalized amplitudes on `n` qubits.
pub fn random_state(rng: &mut Rng64, n: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..1usize << n).map(|_| complex_normal(rng)).collect();
    let nrm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= nrm);
    v
}

/// Random `+`/`-` outcomes for `count` measure items.
pub fn random_outcomes(rng: &mut Rng64, count: usize) -> Vec<Sign> {
    (0..count).map(|_| if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus }).collect()
}

/// Hand-checked circuit files shipped with the crate.
pub const GOLDEN: &[(&str, &str)] = &[
    ("gadget_pi3", include_str!("../corpus/gadget_pi3.circ")),
    ("gadget_minus_variant", include_str!("../corpus/gadget_minus_variant.circ")),
    ("conjugation_chain", include_str!("../corpus/conjugation_chain.circ")),
    ("rational_gates", include_str!("../corpus/rational_gates.circ")),
    ("random_unitary_n4", include_str!("../corpus/random_unitary_n4.circ")),
    ("random_nonunitary_n3", include_str!("../corpus/random_nonunitary_n3.circ")),
    ("random_quadratic_n6", include_str!("../corpus/random_quadratic_n6.circ")),
];

const FUZZ_TOKENS: &[&str] = &[
    "modes", "rot", "gate", "project", "measure", "name", "#", "\n", " ", "+", "-", "/", "0", "1/0", "-0",
    "1e308", "1e999", "NaN", "inf", "18446744073709551616", "XX", "ZZY", "-iZ", "I", "\u{00e9}", "\t", "65537",
];

/// One parser fuzz case: random bytes, a truncated golden file, or a golden
/// file with tokens spliced in.
pub fn fuzz_input(rng: &mut Rng64, golden: &[String]) -> String {
    match rng.random_range(0..4) {
        0 => {
            let len = rng.random_range(0..200);
            let bytes: Vec<u8> = (0..len).map(|_| rng.random()).collect();
            String::from_utf8_lossy(&bytes).into_owned()
        }
        1 if !golden.is_empty() => {
            let src = &golden[rng.random_range(0..golden.len())];
            let mut cut = rng.random_range(0..=src.len());
            while !src.is_char_boundary(cut) {
                cut -= 1;
            }
            src[..cut].to_string()
        }
        _ if !golden.is_empty() => {
            let mut s = golden[rng.random_range(0..golden.len())].clone();
            for _ in 0..rng.random_range(1..6) {
                let mut at = rng.random_range(0..=s.len());
                while !s.is_char_boundary(at) {
                    at -= 1;
                }
                let tok = FUZZ_TOKENS[rng.random_range(0..FUZZ_TOKENS.len())];
                if rng.random_bool(0.5) && at < s.len() {
                    let mut end = at + 1;
                    while !s.is_char_boundary(end) {
                        end += 1;
                    }
                    s.replace_range(at..end, tok);
                } else {
                    s.insert_str(at, tok);
                }
            }
            s
        }
        _ => (0..rng.random_range(0..12)).map(|_| FUZZ_TOKENS[rng.random_range(0..FUZZ_TOKENS.len())]).collect(),
    }
}
