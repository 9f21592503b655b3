//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints its PASS/FAIL line even when all of them pass.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use matchsim_core::algebra::{lie_basis, majorana, BasisKind, Letter, PauliString};
use matchsim_core::circuit_io::{parse, Circuit, Item};
use matchsim_core::corpus::{fuzz_input, random_circuit, random_state, random_two_qubit_product, CorpusSpec, GOLDEN};
use matchsim_core::gaussian::{compile_nonunitary, scaling_report, simulate, Origin};
use matchsim_core::matchgate::{eval_m, verify_relations, TwoQubitOperator};
use matchsim_core::numeric::{c, complex_normal, max_abs_diff, scalar_fit, seeded};
use matchsim_core::oracle::{self, operator_matrix, resolve, run, Outcomes, StateVector};
use matchsim_core::sorep::{compile, decompose, expand_to_matchcircuit, recompose, represent, s_to_majorana, RotationFactor};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mild(n: usize, gates: usize) -> CorpusSpec {
    CorpusSpec { nonunitary: 0.5, mildness: 0.3, ..CorpusSpec::unitary(n, gates) }
}

fn dimension_law() -> Outcome {
    let start = Instant::now();
    for n in 1..=6 {
        let b = lie_basis(BasisKind::L2, n);
        ensure(b.len() == 2 * n * n + n + 1, || format!("n={n}: {} elements", b.len()))?;
        if let Some((a, x)) = b.closure_violation() {
            return Err(format!("n={n}: [{a}, {x}] leaves the span"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.2} s"))?;
    Ok(format!("n = 1..6 closed, {secs:.3} s"))
}

fn relation_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(1001);
    let mut worst: f64 = 0.0;
    for k in 0..10_000 {
        let mut e = [[Complex64::new(0.0, 0.0); 4]; 4];
        e.iter_mut().flatten().for_each(|z| *z = complex_normal(&mut rng));
        let b = TwoQubitOperator::new(e).map_err(|e| e.to_string())?;
        let r = verify_relations(&b, 1e-10);
        worst = r.relations.iter().map(|x| x.normalized).fold(worst, f64::max);
        ensure(r.all_relations_hold, || format!("matrix {k} fails"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("took {secs:.2} s"))?;
    Ok(format!("10^4 matrices, worst residual {worst:.1e}, {secs:.2} s"))
}

fn forward_direction() -> Outcome {
    let mut rng = seeded(1002);
    let mut worst: f64 = 0.0;
    let mut zero = 0;
    for k in 0..1000 {
        let circ = random_two_qubit_product(&mut rng, 10, k % 2 == 1);
        let dense = operator_matrix(2, &resolve(&circ, &[]).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let b = TwoQubitOperator::from_dense(&dense).map_err(|e| e.to_string())?;
        let s = b.scale();
        if s == 0.0 {
            zero += 1;
            continue;
        }
        let m = eval_m(&b).iter().map(|z| z.norm()).fold(0.0, f64::max) / (s * s);
        worst = worst.max(m);
        ensure(m <= 1e-9, || format!("product {k}: max|M| = {m:e}\n{}", circ.emit()))?;
    }
    Ok(format!("10^3 products, worst normalized max|M| {worst:.1e}, {zero} annihilated"))
}

fn so_representation() -> Outcome {
    let mut rng = seeded(1003);
    let (mut orth, mut hom): (f64, f64) = (0.0, 0.0);
    for k in 0..200 {
        let n = 1 + k % 6;
        let circ = random_circuit(&mut rng, &mild(n, 1 + k % 25));
        let a = represent(&circ).map_err(|e| e.to_string())?;
        orth = orth.max(a.orthogonality_error());
        let cut = rng.random_range(0..=circ.items.len());
        let (mut c1, mut c2) = (Circuit::new(n), Circuit::new(n));
        c1.items = circ.items[..cut].to_vec();
        c2.items = circ.items[cut..].to_vec();
        let joined = represent(&c2).map_err(|e| e.to_string())?.compose(&represent(&c1).map_err(|e| e.to_string())?);
        hom = hom.max(max_abs_diff(&joined.matrix, &a.matrix));
    }
    ensure(orth <= 1e-10, || format!("orthogonality error {orth:e}"))?;
    ensure(hom <= 1e-12, || format!("homomorphism error {hom:e}"))?;
    Ok(format!("200 circuits, |A^T A - I| {orth:.1e}, split/join {hom:.1e}"))
}

fn decomposition() -> Outcome {
    let mut rng = seeded(1004);
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        for _ in 0..20 {
            let a = represent(&random_circuit(&mut rng, &mild(n, 25))).map_err(|e| e.to_string())?;
            let f = decompose(&a).map_err(|e| e.to_string())?;
            ensure(f.len() <= n * (2 * n + 1), || format!("n={n}: {} factors", f.len()))?;
            worst = worst.max(max_abs_diff(&recompose(&f, n).matrix, &a.matrix));
        }
    }
    ensure(worst <= 1e-8, || format!("round trip error {worst:e}"))?;
    Ok(format!("120 elements, n <= 6, worst error {worst:.1e}"))
}

fn matchcircuit_compilation() -> Outcome {
    let mut rng = seeded(1005);
    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        let w = n + 1;
        for i in 0..2 * n + 1 {
            for j in 0..2 * n + 1 {
                if i == j {
                    continue;
                }
                let f = RotationFactor::new(i, j, c(rng.random_range(-2.0..2.0), rng.random_range(-0.5..0.5)));
                let mut circ = Circuit::new(w);
                for g in expand_to_matchcircuit(&f, n) {
                    circ.items.extend(g.items());
                }
                let got = operator_matrix(w, &resolve(&circ, &[]).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                let k = (&majorana(s_to_majorana(i, n), w) * &majorana(s_to_majorana(j, n), w)).to_dense();
                let half = f.t / 2.0;
                let want = DMatrix::identity(1 << w, 1 << w) * half.cos() + k * half.sin();
                let (lambda, err) = scalar_fit(&want, &got);
                ensure(lambda.norm() > 1e-6, || format!("n={n} ({i},{j}) vanishing scalar"))?;
                worst = worst.max(err);
            }
        }
    }
    ensure(worst <= 1e-9, || format!("factor expansion error {worst:e}"))?;
    // fit c on n = 1..4 and hold it for n = 5..10
    let count = |rng: &mut _, n: usize| -> Result<f64, String> {
        let circ = random_circuit(rng, &CorpusSpec::unitary(n, 3 * n * n));
        Ok(compile(&circ).map_err(|e| e.to_string())?.items.len() as f64)
    };
    let mut fitted: f64 = 0.0;
    for n in 1..=4 {
        fitted = fitted.max(count(&mut rng, n)? / (n * n * n) as f64);
    }
    for n in 5..=10 {
        let g = count(&mut rng, n)?;
        ensure(g <= fitted * (n * n * n) as f64, || format!("n={n}: {g} gates exceeds {fitted:.2} n^3"))?;
    }
    Ok(format!("expansion error {worst:.1e}, gate count <= c n^3 with fitted c = {fitted:.2}"))
}

fn gadget() -> Outcome {
    let mut rng = seeded(1006);
    let n = 3;
    let mut worst: f64 = 0.0;
    for t in [0.1f64, 0.25, 0.5, 1.0] {
        let mut circ = Circuit::new(n);
        let mut z = PauliString::identity(n);
        z.set_letter(n - 1, Letter::Z);
        circ.gate(c(t.cosh(), 0.0), c(t.sinh(), 0.0), z);
        let comp = compile_nonunitary(&circ).map_err(|e| e.to_string())?;
        let scale: Complex64 = comp.scales.iter().product();
        for _ in 0..20 {
            let psi = random_state(&mut rng, n);
            let direct = run(&circ, Outcomes::Fixed(&[]), Some(StateVector::from_amplitudes(psi.clone()).map_err(|e| e.to_string())?))
                .map_err(|e| e.to_string())?
                .state
                .amplitudes();
            let mut lifted = vec![c(0.0, 0.0); psi.len() * 2];
            for (k, a) in psi.iter().enumerate() {
                lifted[2 * k] = *a;
            }
            let out = run(&comp.circuit, Outcomes::Fixed(&[]), Some(StateVector::from_amplitudes(lifted).map_err(|e| e.to_string())?))
                .map_err(|e| e.to_string())?
                .state
                .amplitudes();
            for (k, want) in direct.iter().enumerate() {
                worst = worst.max((out[2 * k] * scale - want).norm() / want.norm());
            }
        }
        // analytic check: on a single mode (a, b) -> (a, cos(s) b) with cos s = e^{-2t}
        let mut one = Circuit::new(1);
        one.gate(c(t.cosh(), 0.0), c(t.sinh(), 0.0), "Z".parse().unwrap());
        let comp = compile_nonunitary(&one).map_err(|e| e.to_string())?;
        let s = (-2.0 * t).exp().acos();
        let half = comp.circuit.items.iter().zip(&comp.origins).find_map(|(it, o)| match (it, o) {
            (Item::Rot { t, pauli }, Origin::Gadget(_)) if pauli.letters() == [Letter::X, Letter::X] => Some(t.value()),
            _ => None,
        });
        ensure(half.is_some_and(|h| (2.0 * h - s).abs() < 1e-15), || format!("t={t}: gadget angle {half:?}, want s/2 = {}", s / 2.0))?;
        let (a, b) = (c(0.6, 0.0), c(0.0, 0.8));
        let out = run(
            &comp.circuit,
            Outcomes::Fixed(&[]),
            Some(StateVector::from_amplitudes(vec![a, c(0.0, 0.0), b, c(0.0, 0.0)]).map_err(|e| e.to_string())?),
        )
        .map_err(|e| e.to_string())?
        .state
        .amplitudes();
        let ratio = out[2] / out[0];
        ensure((ratio - b / a * s.cos()).norm() < 1e-14, || format!("t={t}: ratio {ratio}, want cos(s) b/a"))?;
    }
    ensure(worst <= 1e-10, || format!("relative amplitude error {worst:e}"))?;
    Ok(format!("80 states, worst relative error {worst:.1e}, cos(s) attenuation exact"))
}

fn engine_equivalence() -> Outcome {
    let mut rng = seeded(1008);
    let (mut used, mut skipped, mut worst) = (0, 0, 0.0f64);
    while used < 100 {
        let n = rng.random_range(1..=8);
        let spec = CorpusSpec {
            n,
            gates: rng.random_range(1..=30),
            projections: rng.random_range(0..=4),
            measures: 0,
            odd: rng.random_bool(0.5),
            nonunitary: 0.4,
            mildness: 0.4,
        };
        let circ = random_circuit(&mut rng, &spec);
        let want = match run(&circ, Outcomes::Fixed(&[]), None) {
            Ok(r) if r.branch_weight() > 1e-12 => r.branch_weight(),
            _ => {
                skipped += 1;
                continue;
            }
        };
        let comp = compile_nonunitary(&circ).map_err(|e| e.to_string())?;
        let got = simulate(&comp, &[]).map_err(|e| e.to_string())?.branch_weight();
        let rel = (got - want).abs() / want;
        ensure(rel <= 1e-7, || format!("relative {rel:e} on\n{}", circ.emit()))?;
        worst = worst.max(rel);
        used += 1;
    }
    Ok(format!("100 circuits, worst relative {worst:.1e}, {skipped} impossible branches redrawn"))
}

fn scaling() -> Outcome {
    let report = scaling_report(&[50, 100, 200, 400], 10_000, 1009).map_err(|e| e.to_string())?;
    let last = report.points.last().ok_or("no points")?;
    ensure(last.seconds < 30.0, || format!("n=400 took {:.2} s", last.seconds))?;
    ensure(report.exponent <= 3.5, || format!("fitted exponent {:.2}", report.exponent))?;
    let cap = oracle::oracle_cap();
    ensure(matches!(StateVector::vacuum(cap + 1), Err(oracle::OracleError::CapExceeded { .. })), || {
        format!("oracle accepted n = {}", cap + 1)
    })?;
    let times: Vec<String> = report.points.iter().map(|p| format!("n={} {:.2}s", p.n, p.seconds)).collect();
    Ok(format!("{}, exponent {:.2}, oracle capped at {cap}", times.join(", "), report.exponent))
}

fn parser_totality() -> Outcome {
    let golden: Vec<String> = GOLDEN.iter().map(|(_, t)| t.to_string()).collect();
    let mut rng = seeded(1010);
    let (mut rejected, mut panics) = (0, 0);
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    for _ in 0..100_000 {
        let text = fuzz_input(&mut rng, &golden);
        match catch_unwind(AssertUnwindSafe(|| parse(&text))) {
            Err(_) => panics += 1,
            Ok(Err(errs)) => {
                rejected += 1;
                if errs.is_empty() || errs.iter().any(|e| e.line == 0 || e.column == 0) {
                    std::panic::set_hook(hook);
                    return Err(format!("rejection without a position: {text:?}"));
                }
            }
            Ok(Ok(_)) => {}
        }
    }
    std::panic::set_hook(hook);
    ensure(panics == 0, || format!("{panics} panics"))?;
    for (name, text) in GOLDEN {
        let circ = parse(text).map_err(|e| format!("{name}: {e:?}"))?;
        let emitted = circ.emit();
        let again = parse(&emitted).map_err(|e| format!("{name}: {e:?}"))?;
        ensure(again == circ && again.emit() == emitted, || format!("{name} does not round-trip"))?;
    }
    Ok(format!("10^5 inputs, {rejected} rejected with positions, {} golden files stable", GOLDEN.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("dimension law", dimension_law),
        ("relation suite", relation_suite),
        ("matchgate forward direction", forward_direction),
        ("so representation", so_representation),
        ("decomposition round trip", decomposition),
        ("matchcircuit compilation", matchcircuit_compilation),
        ("gadget", gadget),
        ("engine equivalence", engine_equivalence),
        ("scaling", scaling),
        ("parser totality", parser_totality),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
