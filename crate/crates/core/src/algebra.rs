//! Pauli-string arithmetic, Jordan-Wigner mode operators and the Lie bases
//! `L1`, `L2` and `L2'`.
//!
//! A [`PauliString`] is stored as two bit-masks (X-part and Z-part) plus a
//! phase exponent `k` so that the operator is `i^k` times the tensor product
//! of its letters. The letter `Y` is the pair `(x, z) = (1, 1)` and obeys
//! `Y = i X Z`; every sign derived in this crate follows from that choice.
//!
//! Qubits (modes) are 0-based internally. The textual form lists qubit 0
//! first, so `"ZXI"` is `Z` on qubit 0 and `X` on qubit 1.

use std::collections::HashSet;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("length mismatch: {left} vs {right} qubits")]
    LengthMismatch { left: usize, right: usize },
    #[error("mode {k} out of range 1..={n}")]
    ModeOutOfRange { k: usize, n: usize },
    #[error("invalid Pauli string {0:?}")]
    Parse(String),
    #[error("{0} is not an L2 generator")]
    NotGenerator(String),
    #[error("empty Pauli string")]
    Empty,
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// A power of `i`: the exponent is kept mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn conj(self) -> Self {
        Phase((4 - self.0) % 4)
    }

    /// True for `±1`.
    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })
    }
}

#[inline]
fn words(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
fn get_bit(v: &[u64], q: usize) -> bool {
    (v[q / 64] >> (q % 64)) & 1 == 1
}

#[inline]
fn set_bit(v: &mut [u64], q: usize, b: bool) {
    let mask = 1u64 << (q % 64);
    if b {
        v[q / 64] |= mask;
    } else {
        v[q / 64] &= !mask;
    }
}

fn popcount_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// A phase times a tensor product of single-qubit Pauli letters.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: Phase,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString { n, x: vec![0; words(n)], z: vec![0; words(n)], phase: Phase::ONE }
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = PauliString::identity(letters.len());
        for (q, l) in letters.iter().enumerate() {
            p.set_letter(q, *l);
        }
        p
    }

    /// `letter` on qubit `q` (0-based), identity elsewhere.
    pub fn single(n: usize, q: usize, letter: Letter) -> Self {
        let mut p = PauliString::identity(n);
        p.set_letter(q, letter);
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// The same letters with phase `+1`.
    pub fn unsigned(&self) -> Self {
        self.clone().with_phase(Phase::ONE)
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(get_bit(&self.x, q), get_bit(&self.z, q))
    }

    pub fn set_letter(&mut self, q: usize, l: Letter) {
        let (x, z) = l.bits();
        set_bit(&mut self.x, q, x);
        set_bit(&mut self.z, q, z);
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|w| *w == 0)
    }

    pub fn y_count(&self) -> u32 {
        popcount_and(&self.x, &self.z)
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    /// Indices of qubits carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.letter(q) != Letter::I).collect()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Key that ignores the phase; equal for strings with identical letters.
    pub fn letters_key(&self) -> (Vec<u64>, Vec<u64>) {
        (self.x.clone(), self.z.clone())
    }

    pub fn try_mul(&self, other: &PauliString) -> Result<PauliString, AlgebraError> {
        if self.n != other.n {
            return Err(AlgebraError::LengthMismatch { left: self.n, right: other.n });
        }
        let x: Vec<u64> = self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect();
        let z: Vec<u64> = self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect();
        // i^{k1+y1} X^x1 Z^z1 * i^{k2+y2} X^x2 Z^z2 = i^{k1+k2+y1+y2} (-1)^{z1.x2} X^x3 Z^z3
        let y3 = popcount_and(&x, &z) as i64;
        let e = self.phase.0 as i64
            + other.phase.0 as i64
            + self.y_count() as i64
            + other.y_count() as i64
            + 2 * popcount_and(&self.z, &other.x) as i64
            - y3;
        Ok(PauliString { n: self.n, x, z, phase: Phase::from_exponent(e) })
    }

    pub fn commutes(&self, other: &PauliString) -> bool {
        debug_assert_eq!(self.n, other.n);
        (popcount_and(&self.x, &other.z) + popcount_and(&self.z, &other.x)).is_multiple_of(2)
    }

    pub fn anticommutes(&self, other: &PauliString) -> bool {
        !self.commutes(other)
    }

    /// `+1` if the matrix is symmetric, `-1` if antisymmetric. Every Pauli
    /// product is one or the other, decided by the parity of its `Y` count.
    pub fn transpose_sign(&self) -> i8 {
        if self.y_count().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn transpose(&self) -> PauliString {
        let mut t = self.clone();
        if self.transpose_sign() < 0 {
            t.phase = t.phase * Phase::MINUS_ONE;
        }
        t
    }

    pub fn dagger(&self) -> PauliString {
        let mut t = self.clone();
        t.phase = t.phase.conj();
        t
    }

    /// Prepend `letter` as a new qubit 0; all other qubits shift up by one.
    pub fn prepend(&self, letter: Letter) -> PauliString {
        let mut out = PauliString::identity(self.n + 1);
        out.set_letter(0, letter);
        for q in 0..self.n {
            out.set_letter(q + 1, self.letter(q));
        }
        out.phase = self.phase;
        out
    }

    /// Append identity qubits at the end.
    pub fn extend(&self, extra: usize) -> PauliString {
        let mut out = PauliString::identity(self.n + extra);
        for q in 0..self.n {
            out.set_letter(q, self.letter(q));
        }
        out.phase = self.phase;
        out
    }

    /// Bit-masks in state-vector index space. Qubit `q` maps to bit
    /// `n - 1 - q`, so qubit 0 is the most significant bit (Kronecker order).
    pub fn index_masks(&self) -> (usize, usize) {
        assert!(self.n < usize::BITS as usize, "index masks need n < {}", usize::BITS);
        let mut xm = 0usize;
        let mut zm = 0usize;
        for q in 0..self.n {
            let bit = 1usize << (self.n - 1 - q);
            if get_bit(&self.x, q) {
                xm |= bit;
            }
            if get_bit(&self.z, q) {
                zm |= bit;
            }
        }
        (xm, zm)
    }

    /// Dense `2^n x 2^n` matrix in Kronecker order.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n;
        let (xm, zm) = self.index_masks();
        let base = Phase::from_exponent(self.phase.0 as i64 + self.y_count() as i64).to_complex();
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let sign = if (col & zm).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(col ^ xm, col)] = base * sign;
        }
        m
    }
}

impl Mul for &PauliString {
    type Output = PauliString;

    /// Panics on length mismatch; use [`PauliString::try_mul`] to handle it.
    fn mul(self, rhs: &PauliString) -> PauliString {
        self.try_mul(rhs).expect("Pauli strings of different length")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase)?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = AlgebraError;

    /// Accepts an optional phase prefix (`+`, `-`, `i`, `+i`, `-i`) followed
    /// by one letter per qubit.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (phase, body) = if let Some(rest) = s.strip_prefix("+i") {
            (Phase::I, rest)
        } else if let Some(rest) = s.strip_prefix("-i") {
            (Phase::MINUS_I, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (Phase::I, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (Phase::ONE, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, rest)
        } else {
            (Phase::ONE, s)
        };
        if body.is_empty() {
            return Err(AlgebraError::Empty);
        }
        let letters = body
            .chars()
            .map(Letter::from_char)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| AlgebraError::Parse(s.to_string()))?;
        Ok(PauliString::from_letters(&letters).with_phase(phase))
    }
}

pub fn multiply(p: &PauliString, q: &PauliString) -> Result<PauliString, AlgebraError> {
    p.try_mul(q)
}

/// Which mode operator: `X_k` or `Y_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    X,
    Y,
}

/// Jordan-Wigner mode operator `U_k = Z_1 ... Z_{k-1} U_k` with 1-based `k`.
pub fn mode_operator(k: usize, u: ModeKind, n: usize) -> Result<PauliString, AlgebraError> {
    if k == 0 || k > n {
        return Err(AlgebraError::ModeOutOfRange { k, n });
    }
    Ok(jw_mode(k - 1, u, n))
}

fn jw_mode(q: usize, u: ModeKind, n: usize) -> PauliString {
    let mut p = PauliString::identity(n);
    for j in 0..q {
        p.set_letter(j, Letter::Z);
    }
    p.set_letter(q, if u == ModeKind::X { Letter::X } else { Letter::Y });
    p
}

/// Jordan-Wigner Majorana operator with index `2m` (`X` on mode `m`) or
/// `2m + 1` (`Y` on mode `m`), modes 0-based.
pub fn majorana(index: usize, n: usize) -> PauliString {
    let kind = if index.is_multiple_of(2) { ModeKind::X } else { ModeKind::Y };
    jw_mode(index / 2, kind, n)
}

/// Write a strictly quadratic Pauli string as `coeff * c_a * c_b` with
/// `a < b` in the Jordan-Wigner Majorana numbering of [`majorana`].
/// Returns `None` if `p` is not of that form.
pub fn quadratic_majorana_pair(p: &PauliString) -> Option<(usize, usize, Phase)> {
    let n = p.num_qubits();
    let support = p.support();
    let (first, last) = (*support.first()?, *support.last()?);
    let (a, b) = if first == last && p.letter(first) == Letter::Z {
        (2 * first, 2 * first + 1)
    } else if first < last {
        // c_a c_b with different modes: (A Z)_l Z...Z B_k
        let a = match p.letter(first) {
            Letter::Y => 2 * first,
            Letter::X => 2 * first + 1,
            _ => return None,
        };
        let b = match p.letter(last) {
            Letter::X => 2 * last,
            Letter::Y => 2 * last + 1,
            _ => return None,
        };
        if ((first + 1)..last).any(|q| p.letter(q) != Letter::Z) {
            return None;
        }
        (a, b)
    } else {
        return None;
    };
    let prod = &majorana(a, n) * &majorana(b, n);
    debug_assert_eq!(prod.letters_key(), p.letters_key());
    // p = phase_p * L, prod = phase_c * L  =>  p = (phase_p / phase_c) c_a c_b
    Some((a, b, p.phase() * prod.phase().conj()))
}

/// Decompose an element of `L2` (non-identity, any phase) on `n` modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorShape {
    /// `coeff * c_m`: a linear (odd) term, one Majorana.
    Linear { index: usize, coeff: Phase },
    /// `coeff * c_a * c_b`, `a < b`.
    Quadratic { a: usize, b: usize, coeff: Phase },
}

pub fn generator_shape(p: &PauliString) -> Option<GeneratorShape> {
    if let Some((a, b, coeff)) = quadratic_majorana_pair(p) {
        return Some(GeneratorShape::Quadratic { a, b, coeff });
    }
    let support = p.support();
    let last = *support.last()?;
    if (0..last).any(|q| p.letter(q) != Letter::Z) {
        return None;
    }
    let index = match p.letter(last) {
        Letter::X => 2 * last,
        Letter::Y => 2 * last + 1,
        _ => return None,
    };
    let c = majorana(index, p.num_qubits());
    Some(GeneratorShape::Linear { index, coeff: p.phase() * c.phase().conj() })
}

/// True if the letters of `p` form a non-identity `L2` basis element.
pub fn is_l2_generator(p: &PauliString) -> bool {
    generator_shape(p).is_some()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisKind {
    L1,
    L2,
    L2Prime,
}

#[derive(Debug, Clone)]
pub struct LieBasis {
    pub kind: BasisKind,
    pub n: usize,
    pub elements: Vec<PauliString>,
}

impl LieBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Phase-free membership test for a single Pauli product.
    pub fn contains_letters(&self, p: &PauliString) -> bool {
        self.elements.iter().any(|e| e.letters_key() == p.letters_key())
    }

    /// Checks that every commutator of two basis elements is a multiple of
    /// a basis element. Returns the first offending pair.
    pub fn closure_violation(&self) -> Option<(PauliString, PauliString)> {
        let keys: HashSet<_> = self.elements.iter().map(|e| e.letters_key()).collect();
        for (i, a) in self.elements.iter().enumerate() {
            for b in &self.elements[i + 1..] {
                // [A, B] is 0 or 2AB for Pauli products
                if a.anticommutes(b) && !keys.contains(&(a * b).letters_key()) {
                    return Some((a.clone(), b.clone()));
                }
            }
        }
        None
    }
}

/// Enumerate a Lie basis in canonical order: identity, linear terms by mode
/// (`X_k`, `Y_k`), the `Z_k`, then quadratic cross terms ordered by
/// `(l, k, U, V)` with `l < k`. `L2'` includes the identity, giving
/// `2n^2 - n + 1` elements.
pub fn lie_basis(kind: BasisKind, n: usize) -> LieBasis {
    let mut elements = vec![PauliString::identity(n)];
    if matches!(kind, BasisKind::L1 | BasisKind::L2) {
        for q in 0..n {
            elements.push(jw_mode(q, ModeKind::X, n));
            elements.push(jw_mode(q, ModeKind::Y, n));
        }
    }
    if matches!(kind, BasisKind::L2 | BasisKind::L2Prime) {
        for q in 0..n {
            elements.push(PauliString::single(n, q, Letter::Z));
        }
        for l in 0..n {
            for k in (l + 1)..n {
                for u in [Letter::X, Letter::Y] {
                    for v in [Letter::X, Letter::Y] {
                        let mut p = PauliString::identity(n);
                        p.set_letter(l, u);
                        for j in (l + 1)..k {
                            p.set_letter(j, Letter::Z);
                        }
                        p.set_letter(k, v);
                        elements.push(p);
                    }
                }
            }
        }
    }
    LieBasis { kind, n, elements }
}

/// `e^{-s i Q pi/4} P e^{s i Q pi/4}` for `sign = s = ±1` and pure Pauli
/// products `P`, `Q`. Commuting pairs are returned unchanged; anticommuting
/// pairs give `s * i * P * Q`.
pub fn conjugate_by_rotation(p: &PauliString, axis: &PauliString, sign: i8) -> PauliString {
    if p.commutes(axis) {
        return p.clone();
    }
    let pq = p * axis;
    let factor = if sign >= 0 { Phase::I } else { Phase::MINUS_I };
    let phase = pq.phase() * factor;
    pq.with_phase(phase)
}

/// The alternating string `Y X Y X ...` on `n` qubits.
pub fn alternating_yx(n: usize) -> PauliString {
    let letters: Vec<Letter> =
        (0..n).map(|q| if q % 2 == 0 { Letter::Y } else { Letter::X }).collect();
    PauliString::from_letters(&letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(&ps("X") * &ps("Y"), ps("+iZ"));
        assert_eq!(&ps("II") * &ps("-iXZ"), ps("-iXZ"));
        assert_eq!(&ps("ZX") * &ps("ZX"), ps("II"));
        assert_eq!(&ps("Y") * &ps("X"), ps("-iZ"));
        assert!(matches!(
            ps("X").try_mul(&ps("XX")),
            Err(AlgebraError::LengthMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(ps("Y").transpose_sign(), -1);
        assert_eq!(ps("X").transpose_sign(), 1);
        assert_eq!(ps("YY").transpose_sign(), 1);
    }

    #[test]
    fn mode_operator_examples() {
        assert_eq!(mode_operator(1, ModeKind::X, 3).unwrap(), ps("XII"));
        assert_eq!(mode_operator(2, ModeKind::X, 3).unwrap(), ps("ZXI"));
        assert_eq!(mode_operator(3, ModeKind::Y, 3).unwrap(), ps("ZZY"));
        assert!(mode_operator(0, ModeKind::X, 3).is_err());
        assert!(mode_operator(4, ModeKind::X, 3).is_err());
    }

    #[test]
    fn two_mode_l2_matches_eleven_operators() {
        let basis = lie_basis(BasisKind::L2, 2);
        assert_eq!(basis.len(), 11);
        for s in ["II", "XI", "YI", "ZI", "ZX", "ZY", "XX", "XY", "YX", "YY", "IZ"] {
            assert!(basis.contains_letters(&ps(s)), "{s} missing");
        }
        let one = lie_basis(BasisKind::L2, 1);
        assert_eq!(one.len(), 4);
    }

    #[test]
    fn l2_prime_two_modes_by_enumeration() {
        // products of two distinct L1 Jordan-Wigner strings, reduced
        let l1 = lie_basis(BasisKind::L1, 2);
        let mut found: HashSet<_> = HashSet::new();
        found.insert(PauliString::identity(2).letters_key());
        for (i, a) in l1.elements.iter().enumerate().skip(1) {
            for b in l1.elements.iter().skip(i + 1) {
                found.insert((a * b).letters_key());
            }
        }
        let basis = lie_basis(BasisKind::L2Prime, 2);
        assert_eq!(found.len(), 7);
        assert_eq!(basis.len(), 7);
        for e in &basis.elements {
            assert!(found.contains(&e.letters_key()));
        }
        for s in ["II", "ZI", "IZ", "XX", "XY", "YX", "YY"] {
            assert!(basis.contains_letters(&ps(s)));
        }
    }

    #[test]
    fn canonical_order_starts_with_identity_then_modes() {
        let b = lie_basis(BasisKind::L2, 3);
        assert!(b.elements[0].is_identity());
        assert_eq!(b.elements[1], ps("XII"));
        assert_eq!(b.elements[2], ps("YII"));
        assert_eq!(b.elements[3], ps("ZXI"));
        assert_eq!(b.elements[7], ps("ZII"));
        assert_eq!(b.elements[10], ps("XXI"));
    }

    #[test]
    fn conjugation_examples() {
        let r = conjugate_by_rotation(&ps("ZYI"), &ps("IXX"), 1);
        assert_eq!(r.letters_key(), ps("ZZX").letters_key());
        assert!(r.is_hermitian());
        assert_eq!(conjugate_by_rotation(&ps("X"), &ps("X"), 1), ps("X"));
        let zy = conjugate_by_rotation(&ps("Z"), &ps("X"), 1);
        assert_eq!(zy.letters_key(), ps("Y").letters_key());
    }

    #[test]
    fn commutation_examples() {
        assert!(ps("X").anticommutes(&ps("Y")));
        assert!(ps("XX").commutes(&ps("YY")));
        let yx = ps("YX");
        let w = yx.to_dense();
        for a in lie_basis(BasisKind::L2, 2).elements.iter().skip(1) {
            let m = a.to_dense();
            let r = &m * &w + &w * m.transpose();
            assert!(r.iter().all(|c| c.norm() < 1e-14), "{a}");
        }
    }

    #[test]
    fn display_round_trip() {
        for s in ["+iZXI", "-XYZ", "+I", "-iY"] {
            assert_eq!(ps(s).to_string(), s);
        }
        assert_eq!(ps("XY").to_string(), "+XY");
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("+".parse::<PauliString>().is_err());
    }

    #[test]
    fn majorana_pair_decoding() {
        // c_0 c_1 = X Y = iZ on mode 0
        assert_eq!(quadratic_majorana_pair(&ps("ZI")), Some((0, 1, Phase::MINUS_I)));
        for n in 1..5 {
            for a in 0..2 * n {
                for b in (a + 1)..2 * n {
                    let p = &majorana(a, n) * &majorana(b, n);
                    assert_eq!(quadratic_majorana_pair(&p), Some((a, b, Phase::ONE)));
                }
            }
        }
        assert_eq!(quadratic_majorana_pair(&ps("XII")), None);
        assert_eq!(quadratic_majorana_pair(&ps("XZZ")), None);
        assert_eq!(quadratic_majorana_pair(&ps("XIX")), None);
    }

    #[test]
    fn every_l2_element_has_a_shape() {
        for n in 1..6 {
            for p in lie_basis(BasisKind::L2, n).elements.iter().skip(1) {
                assert!(generator_shape(p).is_some(), "{p}");
            }
        }
        assert!(generator_shape(&ps("ZZI")).is_none());
        assert!(generator_shape(&ps("III")).is_none());
    }
}
