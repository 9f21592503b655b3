//! Two-qubit matchgate identities.
//!
//! Rows and columns of a [`TwoQubitOperator`] are labelled `00, 01, 10, 11`
//! in that order, with the first label digit on qubit 1. Entry `[r][c]` is
//! `<r|B|c>`. The five matchgate polynomials `M1..M5`, the bilinear forms
//! `E_i = R_i^T (B⊗B) T` and `E_i^T = T^T (B⊗B) R_i`, and the relations
//! between them are evaluated term by term from that indexing.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::PauliString;
use crate::numeric::serde_complex_seq;

const B00: usize = 0;
const B01: usize = 1;
const B10: usize = 2;
const B11: usize = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatchgateError {
    #[error("cannot complete matchgate: <11|B|11> vanishes")]
    SingularCompletion,
    #[error("expected 16 complex entries (flat or 4x4), got {0}")]
    Shape(String),
    #[error("non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitOperator {
    pub entries: [[Complex64; 4]; 4],
}

impl TwoQubitOperator {
    pub fn new(entries: [[Complex64; 4]; 4]) -> Result<Self, MatchgateError> {
        for (i, row) in entries.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(MatchgateError::NonFinite(i, j));
                }
            }
        }
        Ok(TwoQubitOperator { entries })
    }

    pub fn identity() -> Self {
        Self::diagonal([Complex64::new(1.0, 0.0); 4])
    }

    pub fn diagonal(d: [Complex64; 4]) -> Self {
        let mut entries = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (i, v) in d.into_iter().enumerate() {
            entries[i][i] = v;
        }
        TwoQubitOperator { entries }
    }

    pub fn from_real(rows: [[f64; 4]; 4]) -> Self {
        let mut entries = [[Complex64::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                entries[i][j] = Complex64::new(rows[i][j], 0.0);
            }
        }
        TwoQubitOperator { entries }
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Result<Self, MatchgateError> {
        if m.shape() != (4, 4) {
            return Err(MatchgateError::Shape(format!("{:?}", m.shape())));
        }
        let mut entries = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = m[(i, j)];
            }
        }
        Self::new(entries)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(4, 4, |i, j| self.entries[i][j])
    }

    /// Parse the JSON form: either a flat array of 16 `[re, im]` pairs
    /// (row-major) or a 4x4 nested array of pairs.
    pub fn from_json(value: &serde_json::Value) -> Result<Self, MatchgateError> {
        let flat: Vec<[f64; 2]> = if let Ok(v) = serde_json::from_value::<Vec<[f64; 2]>>(value.clone()) {
            v
        } else if let Ok(rows) = serde_json::from_value::<Vec<Vec<[f64; 2]>>>(value.clone()) {
            if rows.iter().any(|r| r.len() != 4) {
                return Err(MatchgateError::Shape("rows must have 4 entries".into()));
            }
            rows.into_iter().flatten().collect()
        } else {
            return Err(MatchgateError::Shape("not an array of [re, im] pairs".into()));
        };
        if flat.len() != 16 {
            return Err(MatchgateError::Shape(flat.len().to_string()));
        }
        let mut entries = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (k, [re, im]) in flat.into_iter().enumerate() {
            entries[k / 4][k % 4] = Complex64::new(re, im);
        }
        Self::new(entries)
    }

    pub fn transpose(&self) -> Self {
        let mut entries = self.entries;
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.entries[j][i];
            }
        }
        TwoQubitOperator { entries }
    }

    pub fn scale(&self) -> f64 {
        self.entries.iter().flatten().fold(0.0, |a, z| a.max(z.norm()))
    }

    pub fn scaled(&self, f: Complex64) -> Self {
        let mut out = *self;
        out.entries.iter_mut().flatten().for_each(|z| *z *= f);
        out
    }

    fn at(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r][c]
    }

    /// Off-diagonal magnitude relative to the largest entry.
    pub fn off_diagonal_ratio(&self) -> f64 {
        let s = self.scale();
        if s == 0.0 {
            return 0.0;
        }
        let mut m: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    m = m.max(self.entries[i][j].norm());
                }
            }
        }
        m / s
    }
}

/// `M1..M5`, each a literal four-term sum of entry products.
pub fn eval_m(b: &TwoQubitOperator) -> [Complex64; 5] {
    let e = |r, c| b.at(r, c);
    [
        e(B00, B00) * e(B11, B11) - e(B10, B10) * e(B01, B01) - e(B00, B11) * e(B11, B00)
            + e(B10, B01) * e(B01, B10),
        e(B10, B00) * e(B11, B11) - e(B10, B10) * e(B11, B01) - e(B11, B00) * e(B10, B11)
            + e(B10, B01) * e(B11, B10),
        e(B01, B00) * e(B11, B11) + e(B01, B01) * e(B11, B10)
            - e(B11, B00) * e(B01, B11)
            - e(B01, B10) * e(B11, B01),
        e(B00, B01) * e(B11, B11) + e(B01, B01) * e(B10, B11)
            - e(B00, B11) * e(B11, B01)
            - e(B10, B01) * e(B01, B11),
        e(B00, B10) * e(B11, B11) - e(B10, B10) * e(B01, B11) - e(B00, B11) * e(B11, B10)
            + e(B01, B10) * e(B10, B11),
    ]
}

/// A vector in the two-copy space as `(coefficient, |ab>, |cd>)` terms.
type PairVector = &'static [(f64, usize, usize)];

const T_VEC: PairVector = &[(1.0, B00, B11), (-1.0, B11, B00), (1.0, B01, B10), (-1.0, B10, B01)];

const R_VECS: [PairVector; 5] = [
    &[(1.0, B00, B11), (-1.0, B11, B00), (-1.0, B01, B10), (1.0, B10, B01)],
    &[(1.0, B00, B01), (-1.0, B01, B00)],
    &[(1.0, B00, B10), (-1.0, B10, B00)],
    &[(1.0, B01, B11), (-1.0, B11, B01)],
    &[(1.0, B10, B11), (-1.0, B11, B10)],
];

/// `left^T (B⊗B) right` using `(|ab>|cd>)^T B⊗B (|ef>|gh>) = <ab|B|ef><cd|B|gh>`.
fn pair_form(b: &TwoQubitOperator, left: PairVector, right: PairVector) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(cl, ab, cd) in left {
        for &(cr, ef, gh) in right {
            acc += b.at(ab, ef) * b.at(cd, gh) * (cl * cr);
        }
    }
    acc
}

/// `(E_1..E_5, E_1^T..E_5^T)`.
pub fn eval_e(b: &TwoQubitOperator) -> ([Complex64; 5], [Complex64; 5]) {
    let e = R_VECS.map(|r| pair_form(b, r, T_VEC));
    let et = R_VECS.map(|r| pair_form(b, T_VEC, r));
    (e, et)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationResidual {
    pub name: String,
    /// Polynomial degree of the relation in the entries of `B`.
    pub degree: u32,
    /// `|lhs - rhs|`.
    pub raw: f64,
    /// `raw / s^degree` where `s` is the largest entry magnitude (or 1 if
    /// `s < 1`).
    pub normalized: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    NotMember,
    /// `M_i = 0` but `<11|B|11> ≈ 0` and `B` not diagonal.
    BoundaryIndeterminate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityReport {
    #[serde(with = "serde_complex_seq")]
    pub m: Vec<Complex64>,
    #[serde(with = "serde_complex_seq")]
    pub e: Vec<Complex64>,
    #[serde(with = "serde_complex_seq")]
    pub et: Vec<Complex64>,
    pub relations: Vec<RelationResidual>,
    pub all_relations_hold: bool,
    pub membership: Membership,
    pub tolerance: f64,
}

pub const RELATION_NAMES: [&str; 11] = [
    "E1+E1T=4M1",
    "E4=2M3",
    "E5=2M2",
    "E4T=2M4",
    "E5T=2M5",
    "B11(E1-E1T)=4(B01,11 M2-B10,11 M3+B11,10 M4-B11,01 M5)",
    "B11 E2=2(B01,11 M1-B00,11 M3+B01,10 M4-B01,01 M5)",
    "B11 E3=2(B10,11 M1-B00,11 M2-B10,01 M5+B10,10 M4)",
    "B11 E2T=2(B11,01 M1-B11,00 M4+B10,01 M3-B01,01 M2)",
    "B11 E3T=2(B11,10 M1-B11,00 M5-B01,10 M2+B10,10 M3)",
    "M-transpose: M1(B)=M1(BT), M3(B)=M4(BT), M2(B)=M5(BT)",
];

/// `(lhs - rhs, degree)` for each relation, in [`RELATION_NAMES`] order.
fn relation_differences(b: &TwoQubitOperator) -> [(Complex64, u32); 11] {
    let m = eval_m(b);
    let (e, et) = eval_e(b);
    let mt = eval_m(&b.transpose());
    let x = |r, c| b.at(r, c);
    let b11 = x(B11, B11);
    let two = 2.0;
    let four = 4.0;
    let transpose_diff = [(m[0] - mt[0]).norm(), (m[2] - mt[3]).norm(), (m[1] - mt[4]).norm()]
        .into_iter()
        .fold(0.0, f64::max);
    [
        (e[0] + et[0] - m[0] * four, 2),
        (e[3] - m[2] * two, 2),
        (e[4] - m[1] * two, 2),
        (et[3] - m[3] * two, 2),
        (et[4] - m[4] * two, 2),
        (
            b11 * (e[0] - et[0])
                - (x(B01, B11) * m[1] - x(B10, B11) * m[2] + x(B11, B10) * m[3] - x(B11, B01) * m[4])
                    * four,
            3,
        ),
        (
            b11 * e[1]
                - (x(B01, B11) * m[0] - x(B00, B11) * m[2] + x(B01, B10) * m[3] - x(B01, B01) * m[4])
                    * two,
            3,
        ),
        (
            b11 * e[2]
                - (x(B10, B11) * m[0] - x(B00, B11) * m[1] - x(B10, B01) * m[4] + x(B10, B10) * m[3])
                    * two,
            3,
        ),
        (
            b11 * et[1]
                - (x(B11, B01) * m[0] - x(B11, B00) * m[3] + x(B10, B01) * m[2] - x(B01, B01) * m[1])
                    * two,
            3,
        ),
        (
            b11 * et[2]
                - (x(B11, B10) * m[0] - x(B11, B00) * m[4] - x(B01, B10) * m[1] + x(B10, B10) * m[2])
                    * two,
            3,
        ),
        (Complex64::new(transpose_diff, 0.0), 2),
    ]
}

pub fn verify_relations(b: &TwoQubitOperator, tol: f64) -> IdentityReport {
    let s = b.scale().max(1.0);
    let relations: Vec<RelationResidual> = relation_differences(b)
        .into_iter()
        .zip(RELATION_NAMES)
        .map(|((diff, degree), name)| {
            let raw = diff.norm();
            let normalized = raw / s.powi(degree as i32);
            RelationResidual { name: name.to_string(), degree, raw, normalized, passed: normalized <= tol }
        })
        .collect();
    let (e, et) = eval_e(b);
    IdentityReport {
        m: eval_m(b).to_vec(),
        e: e.to_vec(),
        et: et.to_vec(),
        all_relations_hold: relations.iter().all(|r| r.passed),
        relations,
        membership: membership(b, tol),
        tolerance: tol,
    }
}

/// Decide membership in `M2`: all `M_i` vanish (relative to the squared
/// largest entry) and either `<11|B|11>` is nonzero or `B` is diagonal.
pub fn membership(b: &TwoQubitOperator, tol: f64) -> Membership {
    let s = b.scale();
    if s == 0.0 {
        return Membership::Member;
    }
    let m_max = eval_m(b).iter().fold(0.0f64, |a, z| a.max(z.norm())) / (s * s);
    if m_max > tol {
        return Membership::NotMember;
    }
    if b.at(B11, B11).norm() / s > tol || b.off_diagonal_ratio() <= tol {
        Membership::Member
    } else {
        Membership::BoundaryIndeterminate
    }
}

pub fn is_matchgate(b: &TwoQubitOperator, tol: f64) -> bool {
    membership(b, tol) == Membership::Member
}

/// Fill in `<00|B|00>`, `<10|B|00>`, `<01|B|00>`, `<00|B|01>` and
/// `<00|B|10>` so that `M1..M5` vanish. The values of those five entries in
/// `free` are ignored; the other eleven are kept.
pub fn complete_matchgate(free: &TwoQubitOperator) -> Result<TwoQubitOperator, MatchgateError> {
    let b11 = free.at(B11, B11);
    if b11.norm() == 0.0 {
        return Err(MatchgateError::SingularCompletion);
    }
    let mut out = *free;
    // each dependent entry appears only in the leading term of one M_i
    for (r, c) in [(B00, B00), (B10, B00), (B01, B00), (B00, B01), (B00, B10)] {
        out.entries[r][c] = Complex64::new(0.0, 0.0);
    }
    let rest = eval_m(&out);
    let targets = [(B00, B00), (B10, B00), (B01, B00), (B00, B01), (B00, B10)];
    for (k, (r, c)) in targets.into_iter().enumerate() {
        out.entries[r][c] = -rest[k] / b11;
    }
    Ok(out)
}

/// Fit `B W B^T = lambda W` for `W` the matrix of `Y⊗X`; returns `lambda`
/// and the max-entry residual of the fit.
pub fn antisymmetric_form_fit(b: &TwoQubitOperator) -> (Complex64, f64) {
    let w = "YX".parse::<PauliString>().expect("valid").to_dense();
    let bd = b.to_dense();
    let image = &bd * &w * bd.transpose();
    crate::numeric::scalar_fit(&image, &w)
}
