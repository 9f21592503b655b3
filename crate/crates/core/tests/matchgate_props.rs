use matchsim_core::algebra::PauliString;
use matchsim_core::corpus::random_two_qubit_product;
use matchsim_core::matchgate::{
    antisymmetric_form_fit, complete_matchgate, eval_m, is_matchgate, membership, verify_relations, Membership,
    TwoQubitOperator,
};
use matchsim_core::numeric::{c, complex_normal, seeded};
use matchsim_core::oracle::{operator_matrix, resolve};
use num_complex::Complex64;
use proptest::prelude::*;

fn dense_of(circ: &matchsim_core::circuit_io::Circuit) -> TwoQubitOperator {
    TwoQubitOperator::from_dense(&operator_matrix(2, &resolve(circ, &[]).unwrap()).unwrap()).unwrap()
}

fn normalized_m(b: &TwoQubitOperator) -> f64 {
    let s = b.scale();
    eval_m(b).iter().map(|z| z.norm()).fold(0.0, f64::max) / (s * s)
}

#[test]
fn products_of_exponentials_satisfy_identities() {
    let mut rng = seeded(31);
    for k in 0..500 {
        let b = dense_of(&random_two_qubit_product(&mut rng, 10, k % 2 == 1));
        if b.scale() == 0.0 {
            continue;
        }
        assert!(normalized_m(&b) <= 1e-9, "{:?}", eval_m(&b));
    }
}

#[test]
fn invertible_group_elements_preserve_yx_form() {
    let mut rng = seeded(32);
    for _ in 0..200 {
        let b = dense_of(&random_two_qubit_product(&mut rng, 10, false));
        let (lambda, resid) = antisymmetric_form_fit(&b);
        assert!(lambda.norm() > 1e-8 && resid <= 1e-9 * lambda.norm().max(1.0), "{lambda} {resid}");
    }
}

#[test]
fn membership_examples() {
    let xx: PauliString = "XX".parse().unwrap();
    let mut circ = matchsim_core::circuit_io::Circuit::new(2);
    circ.rot(0.7, xx);
    assert!(is_matchgate(&dense_of(&circ), 1e-10));
    assert!(!is_matchgate(&TwoQubitOperator::diagonal([c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]), 1e-10));
    let cnot = TwoQubitOperator::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]);
    assert!(!is_matchgate(&cnot, 1e-10));
    assert_eq!(membership(&TwoQubitOperator::identity(), 1e-10), Membership::Member);
}

#[test]
fn completion_recovers_z_exponential() {
    let z: PauliString = "ZI".parse().unwrap();
    let mut circ = matchsim_core::circuit_io::Circuit::new(2);
    circ.gate(c(0.3f64.cosh(), 0.0), c(0.3f64.sinh(), 0.0), z);
    let b = dense_of(&circ);
    let back = complete_matchgate(&b).unwrap();
    assert!((back.to_dense() - b.to_dense()).iter().all(|z| z.norm() < 1e-14));
}

proptest! {
    #[test]
    fn relations_hold_for_arbitrary_matrices(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let mut e = [[Complex64::new(0.0, 0.0); 4]; 4];
        for row in e.iter_mut() {
            for z in row.iter_mut() {
                *z = complex_normal(&mut rng);
            }
        }
        let b = TwoQubitOperator::new(e).unwrap();
        prop_assert!(verify_relations(&b, 1e-10).all_relations_hold);
    }

    #[test]
    fn completion_is_identity_on_members(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let b = dense_of(&random_two_qubit_product(&mut rng, 6, false));
        prop_assume!(b.to_dense()[(3, 3)].norm() > 1e-3);
        let back = complete_matchgate(&b).unwrap();
        let err = (back.to_dense() - b.to_dense()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-9 * b.scale().max(1.0));
    }
}
