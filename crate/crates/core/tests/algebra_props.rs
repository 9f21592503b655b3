use matchsim_core::algebra::{
    alternating_yx, conjugate_by_rotation, lie_basis, multiply, BasisKind, Letter, PauliString, Phase,
};
use matchsim_core::numeric::{max_abs_diff, seeded};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn all_strings(n: usize) -> Vec<PauliString> {
    let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    (0..4usize.pow(n as u32))
        .map(|mut k| {
            let v: Vec<Letter> = (0..n)
                .map(|_| {
                    let l = letters[k % 4];
                    k /= 4;
                    l
                })
                .collect();
            PauliString::from_letters(&v)
        })
        .collect()
}

#[test]
fn dimension_law() {
    for n in 1..=6 {
        assert_eq!(lie_basis(BasisKind::L2, n).len(), 2 * n * n + n + 1);
        assert_eq!(lie_basis(BasisKind::L2Prime, n).len(), 2 * n * n - n + 1);
        assert_eq!(lie_basis(BasisKind::L1, n).len(), 2 * n + 1);
    }
}

#[test]
fn closure() {
    for n in 1..=4 {
        assert!(lie_basis(BasisKind::L2, n).closure_violation().is_none());
        assert!(lie_basis(BasisKind::L2Prime, n).closure_violation().is_none());
    }
    // L1 alone is not closed: [X_1, Y_1] = 2i Z_1
    assert!(lie_basis(BasisKind::L1, 2).closure_violation().is_some());
}

#[test]
fn transpose_law_against_dense() {
    for n in 1..=3 {
        for p in all_strings(n) {
            let d = p.to_dense();
            let sign = f64::from(p.transpose_sign());
            assert!(max_abs_diff(&d.transpose(), &(d * Complex64::new(sign, 0.0))) == 0.0, "{p}");
            assert_eq!(p.transpose_sign(), if p.y_count() % 2 == 0 { 1 } else { -1 });
        }
    }
}

#[test]
fn alternating_form_eigenvector() {
    for n in 2..=5 {
        let w = alternating_yx(n).to_dense();
        for a in lie_basis(BasisKind::L2, n).elements.iter().filter(|p| !p.is_identity()) {
            let ad = a.to_dense();
            let lhs = &ad * &w + &w * ad.transpose();
            assert!(lhs.iter().all(|z| z.norm() == 0.0), "n={n} {a}");
        }
    }
}

#[test]
fn conjugation_against_dense() {
    let i = Complex64::new(0.0, 1.0);
    for n in 1..=3 {
        let strings = all_strings(n);
        let dim = 1 << n;
        for q in &strings {
            let qd = q.to_dense();
            let c = Complex64::new(std::f64::consts::FRAC_PI_4.cos(), 0.0);
            for sign in [1i8, -1] {
                // e^{s i Q pi/4} = cos + s i sin Q
                let rot = DMatrix::<Complex64>::identity(dim, dim) * c + &qd * (i * f64::from(sign) * c);
                let rot_inv = DMatrix::<Complex64>::identity(dim, dim) * c - &qd * (i * f64::from(sign) * c);
                for p in &strings {
                    let want = &rot_inv * p.to_dense() * &rot;
                    let got = conjugate_by_rotation(p, q, sign).to_dense();
                    assert!(max_abs_diff(&want, &got) < 1e-14, "{p} around {q} ({sign})");
                }
            }
        }
    }
}

#[test]
fn quadratic_l2_examples() {
    let want: Vec<PauliString> = ["II", "ZI", "IZ", "XX", "XY", "YX", "YY"].iter().map(|s| s.parse().unwrap()).collect();
    let got = lie_basis(BasisKind::L2Prime, 2);
    assert_eq!(got.len(), 7);
    for p in &want {
        assert!(got.contains_letters(p), "{p}");
    }
    let yx: PauliString = "YX".parse().unwrap();
    let yxd = yx.to_dense();
    for a in lie_basis(BasisKind::L2, 2).elements.iter().skip(1) {
        let ad = a.to_dense();
        assert!((&ad * &yxd + &yxd * ad.transpose()).iter().all(|z| z.norm() == 0.0));
    }
}

fn random_string(rng: &mut impl Rng, n: usize) -> PauliString {
    let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    let v: Vec<Letter> = (0..n).map(|_| letters[rng.random_range(0..4)]).collect();
    PauliString::from_letters(&v).with_phase(Phase::from_exponent(rng.random_range(0..4)))
}

proptest! {
    #[test]
    fn multiply_is_associative(seed in any::<u64>(), n in 1usize..70) {
        let mut rng = seeded(seed);
        let (a, b, c) = (random_string(&mut rng, n), random_string(&mut rng, n), random_string(&mut rng, n));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn multiply_matches_dense(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = seeded(seed);
        let (a, b) = (random_string(&mut rng, n), random_string(&mut rng, n));
        let got = multiply(&a, &b).unwrap().to_dense();
        prop_assert!(max_abs_diff(&got, &(a.to_dense() * b.to_dense())) == 0.0);
        prop_assert_eq!(a.commutes(&b), !a.anticommutes(&b));
    }

    #[test]
    fn text_round_trip(seed in any::<u64>(), n in 1usize..40) {
        let mut rng = seeded(seed);
        let a = random_string(&mut rng, n);
        prop_assert_eq!(a.to_string().parse::<PauliString>().unwrap(), a);
    }
}
