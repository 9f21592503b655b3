//! The `(2n+1)`-dimensional complex orthogonal representation of fermionic
//! linear optics with linear terms.
//!
//! Odd generators `U_k` are lifted to `X_0 U_k` on an extra qubit 0, which
//! makes every generator quadratic in the lifted Majoranas. Only `2n+1` of
//! the `2n+2` lifted Majoranas ever appear (never `X` on qubit 0), and they
//! are numbered as follows:
//!
//! ```text
//! Y on qubit 0      -> 0
//! X_k (k = 1..n)    -> k
//! Y_k (k = 1..n)    -> n + k
//! ```
//!
//! With `s_ij = |i><j| - |j><i|`, the generator `c_a c_b / 2` maps to `s_ij`.
//! Matrices act on coefficient vectors by columns: `g c_j g^-1 = sum_i A_ij c_i`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    conjugate_by_rotation, generator_shape, majorana, quadratic_majorana_pair, GeneratorShape, Letter, Phase,
    PauliString,
};
use crate::circuit_io::{Circuit, Item, Number};
use crate::numeric::{matrix_to_rows, rows_to_matrix, serde_complex};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SorepError {
    #[error("{0} is not in the span of L2")]
    NotGenerator(String),
    #[error("Pauli string has width {got}, expected {want}")]
    Width { got: usize, want: usize },
    #[error("item {item} is a projection; only gates can be represented")]
    Projection { item: usize },
    #[error("item {item} is singular (q^2 = r^2) and has no rotation form")]
    Singular { item: usize },
    #[error("matrix is not orthogonal: max |A^T A - I| = {0:e}")]
    NotOrthogonal(f64),
    #[error("matrix has determinant -1 and is not in SO(2n+1)")]
    NotSpecial,
    #[error("isotropic pivot in column {column}: no admissible rotation")]
    Isotropic { column: usize },
    #[error("matrix must be (2n+1) x (2n+1), got {rows} x {cols}")]
    Shape { rows: usize, cols: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SOElement {
    pub n: usize,
    pub matrix: DMatrix<Complex64>,
    /// `ln` of the overall factor dropped by the representation, when known.
    pub log_scale: Option<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct SOElementJson {
    n: usize,
    matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    log_scale: Option<[f64; 2]>,
}

impl Serialize for SOElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SOElementJson {
            n: self.n,
            matrix: matrix_to_rows(&self.matrix),
            log_scale: self.log_scale.map(|z| [z.re, z.im]),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SOElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = SOElementJson::deserialize(d)?;
        let matrix = rows_to_matrix(&j.matrix).ok_or_else(|| D::Error::custom("ragged matrix rows"))?;
        let dim = 2 * j.n + 1;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(D::Error::custom(format!("matrix must be {dim} x {dim} for n = {}", j.n)));
        }
        Ok(SOElement { n: j.n, matrix, log_scale: j.log_scale.map(|[re, im]| Complex64::new(re, im)) })
    }
}

impl SOElement {
    pub fn identity(n: usize) -> Self {
        let d = 2 * n + 1;
        SOElement { n, matrix: DMatrix::identity(d, d), log_scale: Some(Complex64::new(0.0, 0.0)) }
    }

    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self, SorepError> {
        let (rows, cols) = matrix.shape();
        if rows != cols || rows % 2 == 0 {
            return Err(SorepError::Shape { rows, cols });
        }
        Ok(SOElement { n: (rows - 1) / 2, matrix, log_scale: None })
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    /// `max |A^T A - I|`.
    pub fn orthogonality_error(&self) -> f64 {
        let a = &self.matrix;
        let p = a.transpose() * a;
        let mut err: f64 = 0.0;
        for i in 0..p.nrows() {
            for j in 0..p.ncols() {
                let want = if i == j { 1.0 } else { 0.0 };
                err = err.max((p[(i, j)] - want).norm());
            }
        }
        err
    }

    /// Product in operator order: `self * other` represents `g_self g_other`.
    pub fn compose(&self, other: &SOElement) -> SOElement {
        SOElement {
            n: self.n,
            matrix: &self.matrix * &other.matrix,
            log_scale: self.log_scale.zip(other.log_scale).map(|(a, b)| a + b),
        }
    }
}

pub fn check_orthogonal(a: &SOElement, tol: f64) -> bool {
    a.orthogonality_error() <= tol
}

/// `exp(t s_ij)`; the angle may be complex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationFactor {
    pub i: usize,
    pub j: usize,
    #[serde(with = "serde_complex")]
    pub t: Complex64,
}

impl RotationFactor {
    pub fn new(i: usize, j: usize, t: Complex64) -> Self {
        assert_ne!(i, j, "rotation plane needs two distinct indices");
        RotationFactor { i, j, t }
    }

    /// `(I + s^2) - cos(t) s^2 + sin(t) s`.
    pub fn matrix(&self, n: usize) -> DMatrix<Complex64> {
        let d = 2 * n + 1;
        let mut s = DMatrix::zeros(d, d);
        s[(self.i, self.j)] = Complex64::new(1.0, 0.0);
        s[(self.j, self.i)] = Complex64::new(-1.0, 0.0);
        let s2 = &s * &s;
        DMatrix::identity(d, d) + &s2 - s2 * self.t.cos() + s * self.t.sin()
    }

    /// `A <- exp(t s_ij) A` touching only rows `i` and `j`.
    pub fn apply_left(&self, a: &mut DMatrix<Complex64>) {
        let (c, s) = (self.t.cos(), self.t.sin());
        for col in 0..a.ncols() {
            let (x, y) = (a[(self.i, col)], a[(self.j, col)]);
            a[(self.i, col)] = c * x + s * y;
            a[(self.j, col)] = c * y - s * x;
        }
    }

    pub fn inverse(&self) -> Self {
        RotationFactor { t: -self.t, ..*self }
    }
}

/// Lift an `L2` element on `n` modes to a strictly quadratic one on `n + 1`.
pub fn lift_generator(p: &PauliString, n: usize) -> Result<PauliString, SorepError> {
    if p.num_qubits() != n {
        return Err(SorepError::Width { got: p.num_qubits(), want: n });
    }
    if p.is_identity() {
        return Ok(p.prepend(Letter::I));
    }
    match generator_shape(p) {
        Some(GeneratorShape::Linear { .. }) => Ok(p.prepend(Letter::X)),
        Some(GeneratorShape::Quadratic { .. }) => Ok(p.prepend(Letter::I)),
        None => Err(SorepError::NotGenerator(p.to_string())),
    }
}

/// True if `p` contains a linear (odd) term and needs lifting.
pub fn is_odd_generator(p: &PauliString) -> bool {
    matches!(generator_shape(p), Some(GeneratorShape::Linear { .. }))
}

fn majorana_to_s(mu: usize, n: usize) -> Option<usize> {
    match mu {
        0 => None,
        1 => Some(0),
        m if m % 2 == 0 => Some(m / 2),
        m => Some(n + m / 2),
    }
}

/// Inverse of the index table: the lifted Majorana for basis index `i`.
pub fn s_to_majorana(i: usize, n: usize) -> usize {
    match i {
        0 => 1,
        k if k <= n => 2 * k,
        k => 2 * (k - n) + 1,
    }
}

/// `i p / 2 = coeff * s_ij`. `p` is either an `L2` element on `n` modes or an
/// already lifted string on `n + 1`.
pub fn generator_pair(p: &PauliString, n: usize) -> Result<(usize, usize, Complex64), SorepError> {
    let lifted = if p.num_qubits() == n + 1 { p.clone() } else { lift_generator(p, n)? };
    let (a, b, phase) =
        quadratic_majorana_pair(&lifted).ok_or_else(|| SorepError::NotGenerator(p.to_string()))?;
    let i = majorana_to_s(a, n).ok_or_else(|| SorepError::NotGenerator(p.to_string()))?;
    let j = majorana_to_s(b, n).ok_or_else(|| SorepError::NotGenerator(p.to_string()))?;
    // i p / 2 = i * phase * (c_a c_b / 2)
    Ok((i, j, Complex64::new(0.0, 1.0) * phase.to_complex()))
}

/// The antisymmetric matrix corresponding to `i p / 2`.
pub fn generator_to_s(p: &PauliString, n: usize) -> Result<DMatrix<Complex64>, SorepError> {
    let (i, j, coeff) = generator_pair(p, n)?;
    let d = 2 * n + 1;
    let mut m = DMatrix::zeros(d, d);
    m[(i, j)] = coeff;
    m[(j, i)] = -coeff;
    Ok(m)
}

/// `q + r U` as `alpha * exp(beta c_a c_b)` in the lifted picture, giving
/// the factor `exp(2 beta s_ij)` and `ln alpha`.
pub fn gate_factor(q: Complex64, r: Complex64, u: &PauliString, n: usize) -> Result<Option<(RotationFactor, Complex64)>, SorepError> {
    let (i, j, coeff) = generator_pair(u, n)?;
    // U = phase c_a c_b and coeff = i * phase, so r U = -i coeff r (c_a c_b)
    let rho = Complex64::new(0.0, -1.0) * coeff * r;
    let alpha = (q * q + rho * rho).sqrt();
    let scale = q.norm() + r.norm();
    if alpha.norm() <= 1e-14 * scale || scale == 0.0 {
        return Ok(None);
    }
    let beta = Complex64::new(0.0, -1.0) * ((q + Complex64::new(0.0, 1.0) * rho) / alpha).ln();
    Ok(Some((RotationFactor::new(i, j, 2.0 * beta), alpha.ln())))
}

fn item_gate(item: &Item) -> Option<(Complex64, Complex64, &PauliString)> {
    match item {
        Item::Rot { t, pauli } => {
            let t = Complex64::new(t.value(), 0.0);
            Some((t.cos(), Complex64::new(0.0, 1.0) * t.sin(), pauli))
        }
        Item::Gate { q, r, pauli } => Some((q.value(), r.value(), pauli)),
        _ => None,
    }
}

/// Ordered product of the circuit's gates. Items are in time order, so the
/// result is `A_m ... A_1`.
pub fn represent(circuit: &Circuit) -> Result<SOElement, SorepError> {
    let mut out = SOElement::identity(circuit.n);
    let mut log_scale = Complex64::new(0.0, 0.0);
    for (idx, item) in circuit.items.iter().enumerate() {
        let (q, r, u) = item_gate(item).ok_or(SorepError::Projection { item: idx })?;
        let (f, ln_alpha) = gate_factor(q, r, u, circuit.n)?.ok_or(SorepError::Singular { item: idx })?;
        f.apply_left(&mut out.matrix);
        log_scale += ln_alpha;
    }
    out.log_scale = Some(log_scale);
    Ok(out)
}

/// `F_1 F_2 ... F_m`.
pub fn recompose(factors: &[RotationFactor], n: usize) -> SOElement {
    let mut out = SOElement::identity(n);
    out.log_scale = None;
    for f in factors.iter().rev() {
        f.apply_left(&mut out.matrix);
    }
    out
}

/// Tolerance used by [`decompose`] when deciding a pivot is isotropic.
const ISOTROPIC_TOL: f64 = 1e-10;

/// Write `a` as a product of plane rotations by complex Givens elimination.
/// Generic inputs give at most `n(2n+1)` factors.
pub fn decompose(a: &SOElement) -> Result<Vec<RotationFactor>, SorepError> {
    let err = a.orthogonality_error();
    if err > 1e-6 {
        return Err(SorepError::NotOrthogonal(err));
    }
    let d = a.dim();
    let mut m = a.matrix.clone();
    // eliminations g with g_k ... g_1 A = I, so A = g_1^-1 ... g_k^-1
    let mut elim: Vec<RotationFactor> = Vec::new();
    let zero = Complex64::new(0.0, 0.0);
    for j in 0..d {
        let col_start = elim.len();
        let mut rest: Vec<usize> = ((j + 1)..d).filter(|&k| m[(k, j)] != zero).collect();
        while !rest.is_empty() {
            let s = m[(j, j)] * m[(j, j)];
            let (pos, best) = rest
                .iter()
                .enumerate()
                .map(|(p, &k)| (p, (s + m[(k, j)] * m[(k, j)]).norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .expect("nonempty");
            if best < ISOTROPIC_TOL {
                return Err(SorepError::Isotropic { column: j });
            }
            let k = rest.swap_remove(pos);
            let (x, y) = (m[(j, j)], m[(k, j)]);
            let r = (x * x + y * y).sqrt();
            let (c, sn) = (x / r, y / r);
            // exp(t s_jk) sends (x, y) to (c x + s y, c y - s x) = (r, 0)
            let t = Complex64::new(0.0, -1.0) * (c + Complex64::new(0.0, 1.0) * sn).ln();
            let g = RotationFactor::new(j, k, t);
            g.apply_left(&mut m);
            m[(k, j)] = zero;
            elim.push(g);
        }
        if (m[(j, j)] + 1.0).norm() < 1e-6 {
            // a half turn negates rows j and k; fold it into this column's
            // last rotation when there is one so the count stays in budget
            let pi = Complex64::new(std::f64::consts::PI, 0.0);
            if elim.len() > col_start {
                let last = elim.last_mut().expect("nonempty");
                RotationFactor::new(last.i, last.j, pi).apply_left(&mut m);
                last.t += pi;
            } else if j + 1 == d {
                return Err(SorepError::NotSpecial);
            } else {
                let g = RotationFactor::new(j, j + 1, pi);
                g.apply_left(&mut m);
                elim.push(g);
            }
        }
        // orthogonality forces row j to be e_j once the column is
        for c in (j + 1)..d {
            m[(j, c)] = zero;
        }
    }
    Ok(elim.iter().map(RotationFactor::inverse).collect())
}

/// `e^{exponent * generator}` with a Hermitian Pauli `generator`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliExp {
    pub generator: PauliString,
    pub exponent: Complex64,
}

impl PauliExp {
    /// Circuit items for this exponential. Purely imaginary exponents become
    /// `rot` lines; an exponent with `cosh = 0` is split in two.
    pub fn items(&self) -> Vec<Item> {
        let x = self.exponent;
        if x.re == 0.0 {
            return vec![Item::Rot { t: Number::Decimal(x.im), pauli: self.generator.clone() }];
        }
        if x.cosh().norm() < 1e-12 {
            let half = PauliExp { generator: self.generator.clone(), exponent: x / 2.0 };
            let mut v = half.items();
            v.extend(half.items());
            return v;
        }
        vec![Item::Gate { q: x.cosh().into(), r: x.sinh().into(), pauli: self.generator.clone() }]
    }
}

/// Hermitian letters of `p` together with the phase: `p = phase * letters`.
fn split_phase(p: &PauliString) -> (PauliString, Complex64) {
    let herm = p.clone().with_phase(Phase::ONE);
    // letters with an odd number of Y are still Hermitian; the phase is
    // exactly p's phase in letter form
    (herm, p.phase().to_complex())
}

/// True for gates of the target set: anything on qubits 0 and 1, or an
/// `XX` / `YY` pair on neighbouring qubits.
pub fn is_matchcircuit_gate(p: &PauliString) -> bool {
    let support = p.support();
    match support.as_slice() {
        [] => true,
        [q] => *q <= 1,
        [q0, q1] if *q1 <= 1 => {
            let _ = q0;
            true
        }
        [q0, q1] if *q1 == q0 + 1 => {
            let (a, b) = (p.letter(*q0), p.letter(*q1));
            a == b && matches!(a, Letter::X | Letter::Y)
        }
        _ => false,
    }
}

/// Expand one rotation factor (on `n` modes) into allowed gates on `n + 1`
/// qubits: `R_1^dag ... R_m^dag, core, R_m ... R_1` in time order, where each
/// `R` is a 90 degree nearest-neighbour `XX` or `YY` rotation.
pub fn expand_to_matchcircuit(f: &RotationFactor, n: usize) -> Vec<PauliExp> {
    let w = n + 1;
    let (a, b) = (s_to_majorana(f.i, n), s_to_majorana(f.j, n));
    // exp(t s_ij) is the adjoint action of exp(t/2 c_a c_b)
    let prod = &majorana(a, w) * &majorana(b, w);
    let (mut core, ph) = split_phase(&prod);
    let mut exponent = f.t / 2.0 * ph;
    let (mut ia, mut ib) = (a, b);
    let mut conj: Vec<PauliString> = Vec::new();
    while !(ia.max(ib) <= 3 || is_matchcircuit_gate(&core)) {
        // move the higher Majorana down one mode
        let hi = ia.max(ib);
        let mode = hi / 2 - 1;
        let (axis_letter, partner_to) = if hi % 2 == 0 { (Letter::X, 2 * mode + 1) } else { (Letter::Y, 2 * mode) };
        let mut axis = PauliString::identity(w);
        axis.set_letter(mode, axis_letter);
        axis.set_letter(mode + 1, axis_letter);
        let moved = conjugate_by_rotation(&core, &axis, 1);
        let (letters, ph) = split_phase(&moved);
        exponent *= ph;
        core = letters;
        if ia == hi {
            ia = partner_to;
        } else {
            ib = partner_to;
        }
        conj.push(axis);
    }
    let quarter = Complex64::new(0.0, std::f64::consts::FRAC_PI_4);
    let mut out: Vec<PauliExp> = conj.iter().map(|q| PauliExp { generator: q.clone(), exponent: -quarter }).collect();
    out.push(PauliExp { generator: core, exponent });
    out.extend(conj.iter().rev().map(|q| PauliExp { generator: q.clone(), exponent: quarter }));
    out
}

/// Rewrite a circuit over the allowed gate set on `n + 1` qubits. Gate runs
/// between projections are represented, decomposed and expanded; projection
/// and measure items move to the lifted mode index. The result equals the
/// lifted source up to one scalar per gate run.
pub fn compile(circuit: &Circuit) -> Result<Circuit, SorepError> {
    let n = circuit.n;
    let mut out = Circuit::new(n + 1);
    out.name = circuit.name.clone();
    let mut run = Circuit::new(n);
    let flush = |run: &mut Circuit, out: &mut Circuit| -> Result<(), SorepError> {
        if run.items.is_empty() {
            return Ok(());
        }
        let a = represent(run)?;
        let factors = decompose(&a)?;
        // A = F_1 ... F_m, so F_m acts first
        for f in factors.iter().rev() {
            for g in expand_to_matchcircuit(f, n) {
                out.items.extend(g.items());
            }
        }
        run.items.clear();
        Ok(())
    };
    for (idx, item) in circuit.items.iter().enumerate() {
        match item {
            Item::Project { mode, sign } => {
                flush(&mut run, &mut out)?;
                out.project(mode + 1, *sign);
            }
            Item::Measure { mode } => {
                flush(&mut run, &mut out)?;
                out.measure(mode + 1);
            }
            gate => {
                let (q, r, u) = item_gate(gate).expect("gate item");
                if gate_factor(q, r, u, n)?.is_none() {
                    return Err(SorepError::Singular { item: idx });
                }
                run.items.push(gate.clone());
            }
        }
    }
    flush(&mut run, &mut out)?;
    Ok(out)
}

/// Lift every gate of `circuit` to `n + 1` qubits (mode indices shift by one).
pub fn lift_circuit(circuit: &Circuit) -> Result<Circuit, SorepError> {
    let mut out = Circuit::new(circuit.n + 1);
    out.name = circuit.name.clone();
    for item in &circuit.items {
        out.items.push(match item {
            Item::Rot { t, pauli } => Item::Rot { t: *t, pauli: lift_generator(pauli, circuit.n)? },
            Item::Gate { q, r, pauli } => Item::Gate { q: *q, r: *r, pauli: lift_generator(pauli, circuit.n)? },
            Item::Project { mode, sign } => Item::Project { mode: mode + 1, sign: *sign },
            Item::Measure { mode } => Item::Measure { mode: mode + 1 },
        });
    }
    Ok(out)
}
