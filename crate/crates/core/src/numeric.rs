//! Small numeric helpers shared by the engines: complex JSON encoding,
//! seeded random sampling and dense-matrix utilities.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub use rand::SeedableRng;

pub type Rng64 = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian: real and imaginary parts each `N(0, 1/2)`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `max |a_ij - b_ij|`.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Smallest `max |a - lambda b|` over complex `lambda`, with the least-squares
/// `lambda`. Used for "equal up to a global scalar" checks.
pub fn scalar_fit(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> (Complex64, f64) {
    let num: Complex64 = b.iter().zip(a.iter()).map(|(y, x)| y.conj() * x).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    let lambda = if den > 0.0 { num / den } else { Complex64::new(0.0, 0.0) };
    let err = a.iter().zip(b.iter()).fold(0.0f64, |acc, (x, y)| acc.max((x - lambda * y).norm()));
    (lambda, err)
}

/// Serde adapter encoding a complex number as `[re, im]`.
pub mod serde_complex {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Serde adapter for sequences of complex numbers as `[[re, im], ...]`.
pub mod serde_complex_seq {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let v = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

/// Row-major nested `[[[re, im], ...], ...]` form of a complex matrix.
pub fn matrix_to_rows(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn rows_to_matrix(rows: &[Vec<[f64; 2]>]) -> Option<DMatrix<Complex64>> {
    let r = rows.len();
    let ccount = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != ccount) {
        return None;
    }
    Some(DMatrix::from_fn(r, ccount, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

/// `e^{beta P}` for a matrix with `P^2 = I`.
pub fn involution_exp(p: &DMatrix<Complex64>, beta: Complex64) -> DMatrix<Complex64> {
    let id = DMatrix::<Complex64>::identity(p.nrows(), p.ncols());
    id * beta.cosh() + p * beta.sinh()
}
