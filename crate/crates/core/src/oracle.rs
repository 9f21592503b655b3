//! Dense state-vector engine: `O(2^n)` memory, exponential time. This is the
//! ground truth every other engine is checked against at small `n`.
//!
//! Amplitudes are stored in Kronecker order (qubit 0 is the most
//! significant bit of the index). Gates act through Pauli bit-masks, never
//! through dense `2^n x 2^n` matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::algebra::{is_l2_generator, PauliString};
use crate::circuit_io::{outcomes_to_string, Circuit, Item, MeasurementRecord, ResultRecord, Sign, FORMAT_VERSION};
use crate::numeric::Rng64;

pub const DEFAULT_CAP: usize = 14;
pub const CAP_ENV: &str = "MATCHSIM_ORACLE_CAP";
/// Conditional probabilities at or below this are treated as an
/// annihilated branch.
pub const BRANCH_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("{n} qubits exceeds the oracle cap of {cap} (set {CAP_ENV} to override)")]
    CapExceeded { n: usize, cap: usize },
    #[error("need at least one qubit")]
    NoQubits,
    #[error("gate acts on {gate} qubits but the state has {state}")]
    WidthMismatch { gate: usize, state: usize },
    #[error("q must be nonzero in q + rU")]
    ZeroQ,
    #[error("{0} is not a non-identity L2 generator")]
    NotGenerator(String),
    #[error("circuit has {needed} measure items but {given} outcomes were given")]
    OutcomeCount { needed: usize, given: usize },
    #[error("impossible branch at item {item}: conditional probability {probability:e}")]
    ImpossibleBranch { item: usize, probability: f64 },
}

/// Qubit cap, overridable through `MATCHSIM_ORACLE_CAP`.
pub fn oracle_cap() -> usize {
    std::env::var(CAP_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ElementaryGate {
    /// `q + r U`. Equal to `alpha e^{i tau U}` with `alpha^2 = q^2 - r^2`.
    Exp { q: Complex64, r: Complex64, u: PauliString },
    /// `(I + sign Z_mode)/2`.
    Projection { mode: usize, sign: Sign },
}

impl ElementaryGate {
    pub fn scaled(q: Complex64, r: Complex64, u: PauliString) -> Result<Self, OracleError> {
        if q == Complex64::new(0.0, 0.0) {
            return Err(OracleError::ZeroQ);
        }
        if !is_l2_generator(&u) {
            return Err(OracleError::NotGenerator(u.to_string()));
        }
        Ok(ElementaryGate::Exp { q, r, u })
    }

    /// `e^{i t U} = cos t + i sin t U`; `t` may be complex.
    pub fn rotation(t: Complex64, u: PauliString) -> Self {
        let i = Complex64::new(0.0, 1.0);
        ElementaryGate::Exp { q: t.cos(), r: i * t.sin(), u }
    }

    pub fn projection(mode: usize, sign: Sign) -> Self {
        ElementaryGate::Projection { mode, sign }
    }

    /// `alpha` in `q + rU = alpha e^{i tau U}` (principal root); projections
    /// have no scale and return `None`.
    pub fn alpha(&self) -> Option<Complex64> {
        match self {
            ElementaryGate::Exp { q, r, u } => {
                let rp = r * u.phase().to_complex();
                Some((q * q - rp * rp).sqrt())
            }
            ElementaryGate::Projection { .. } => None,
        }
    }

    pub fn from_item(item: &Item, outcome: Option<Sign>) -> Option<Self> {
        match item {
            Item::Rot { t, pauli } => Some(Self::rotation(Complex64::new(t.value(), 0.0), pauli.clone())),
            Item::Gate { q, r, pauli } => {
                Some(ElementaryGate::Exp { q: q.value(), r: r.value(), u: pauli.clone() })
            }
            Item::Project { mode, sign } => Some(Self::projection(*mode, *sign)),
            Item::Measure { mode } => outcome.map(|s| Self::projection(*mode, s)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
    /// The represented state is `e^{log_norm} * amps`.
    log_norm: f64,
}

pub fn vacuum(n: usize) -> Result<StateVector, OracleError> {
    StateVector::vacuum(n)
}

impl StateVector {
    pub fn vacuum(n: usize) -> Result<Self, OracleError> {
        let mut s = Self::zeros(n)?;
        s.amps[0] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self, OracleError> {
        let mut s = Self::zeros(n)?;
        s.amps[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    fn zeros(n: usize) -> Result<Self, OracleError> {
        if n == 0 {
            return Err(OracleError::NoQubits);
        }
        let cap = oracle_cap();
        if n > cap {
            return Err(OracleError::CapExceeded { n, cap });
        }
        Ok(StateVector { n, amps: vec![Complex64::new(0.0, 0.0); 1 << n], log_norm: 0.0 })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, OracleError> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << n || n == 0 {
            return Err(OracleError::NoQubits);
        }
        let cap = oracle_cap();
        if n > cap {
            return Err(OracleError::CapExceeded { n, cap });
        }
        Ok(StateVector { n, amps, log_norm: 0.0 })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Amplitudes including the tracked scale.
    pub fn amplitudes(&self) -> Vec<Complex64> {
        let f = self.log_norm.exp();
        self.amps.iter().map(|a| a * f).collect()
    }

    pub fn raw_amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn log_norm(&self) -> f64 {
        self.log_norm
    }

    /// `ln <s|s>`.
    pub fn log_weight(&self) -> f64 {
        raw_norm_sq(&self.amps).ln() + 2.0 * self.log_norm
    }

    pub fn norm_sq(&self) -> f64 {
        self.log_weight().exp()
    }

    /// Rescale stored amplitudes to unit norm, moving the factor into
    /// `log_norm`. No-op on the zero vector.
    pub fn renormalize(&mut self) {
        let nrm = raw_norm_sq(&self.amps).sqrt();
        if nrm > 0.0 && nrm.is_finite() {
            self.amps.iter_mut().for_each(|a| *a /= nrm);
            self.log_norm += nrm.ln();
        }
    }

    pub fn add(&self, other: &StateVector) -> StateVector {
        let (fa, fb) = (self.log_norm.exp(), other.log_norm.exp());
        let amps = self.amps.iter().zip(&other.amps).map(|(a, b)| a * fa + b * fb).collect();
        StateVector { n: self.n, amps, log_norm: 0.0 }
    }

    pub fn apply(&self, g: &ElementaryGate) -> Result<StateVector, OracleError> {
        let mut out = self.clone();
        out.apply_mut(g)?;
        Ok(out)
    }

    pub fn apply_mut(&mut self, g: &ElementaryGate) -> Result<(), OracleError> {
        match g {
            ElementaryGate::Exp { q, r, u } => {
                if u.num_qubits() != self.n {
                    return Err(OracleError::WidthMismatch { gate: u.num_qubits(), state: self.n });
                }
                let pu = apply_pauli(&self.amps, u);
                self.amps.iter_mut().zip(pu).for_each(|(a, b)| *a = *a * q + b * r);
            }
            ElementaryGate::Projection { mode, sign } => {
                if *mode >= self.n {
                    return Err(OracleError::WidthMismatch { gate: mode + 1, state: self.n });
                }
                let bit = 1usize << (self.n - 1 - mode);
                let keep_set = *sign == Sign::Minus;
                for (idx, a) in self.amps.iter_mut().enumerate() {
                    if (idx & bit != 0) != keep_set {
                        *a = Complex64::new(0.0, 0.0);
                    }
                }
            }
        }
        Ok(())
    }

    /// `<s| Z_mode |s>` relative to `<s|s>`, i.e. the normalized expectation.
    pub fn z_expectation(&self, mode: usize) -> f64 {
        let bit = 1usize << (self.n - 1 - mode);
        let (mut plus, mut total) = (0.0, 0.0);
        for (idx, a) in self.amps.iter().enumerate() {
            let w = a.norm_sqr();
            total += w;
            if idx & bit == 0 {
                plus += w;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            (2.0 * plus - total) / total
        }
    }

    pub fn expectation(&self, p: &PauliString) -> Complex64 {
        let pu = apply_pauli(&self.amps, p);
        let f = (2.0 * self.log_norm).exp();
        self.amps.iter().zip(pu).map(|(a, b)| a.conj() * b).sum::<Complex64>() * f
    }
}

fn raw_norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// `P|s>` via bit-masks: `P|b> = i^e (-1)^{|b & z|} |b ^ x>`.
pub fn apply_pauli(amps: &[Complex64], p: &PauliString) -> Vec<Complex64> {
    let (xm, zm) = p.index_masks();
    let e = (p.phase().exponent() as u32 + p.y_count()) % 4;
    let ph = crate::algebra::Phase::from_exponent(e as i64).to_complex();
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    for (b, a) in amps.iter().enumerate() {
        let s = if (b & zm).count_ones() % 2 == 0 { ph } else { -ph };
        out[b ^ xm] = a * s;
    }
    out
}

/// How `measure` items get their outcomes.
pub enum Outcomes<'a> {
    Fixed(&'a [Sign]),
    Sample(&'a mut Rng64),
}

#[derive(Debug, Clone)]
pub struct OracleRun {
    /// Final state; `norm_sq()` is the branch weight.
    pub state: StateVector,
    pub measurements: Vec<MeasurementRecord>,
    pub outcomes: Vec<Sign>,
}

impl OracleRun {
    pub fn branch_weight(&self) -> f64 {
        self.state.norm_sq()
    }

    pub fn log_branch_weight(&self) -> f64 {
        self.state.log_weight()
    }

    pub fn record(&self, circuit: &Circuit, timing_ms: f64, with_amplitudes: bool) -> ResultRecord {
        let scale_ledger = circuit
            .items
            .iter()
            .filter_map(|i| ElementaryGate::from_item(i, None).and_then(|g| g.alpha()))
            .collect();
        ResultRecord {
            format_version: FORMAT_VERSION,
            engine: "oracle".into(),
            modes: circuit.n,
            total_modes: circuit.n,
            outcomes: outcomes_to_string(&self.outcomes),
            branch_weight: self.branch_weight(),
            log_branch_weight: self.log_branch_weight(),
            final_norm: self.branch_weight().sqrt(),
            measurements: self.measurements.clone(),
            scale_ledger,
            amplitudes: with_amplitudes.then(|| self.state.amplitudes().iter().map(|a| [a.re, a.im]).collect()),
            samples: None,
            timing_ms,
        }
    }
}

/// Run `circuit` from `initial` (the vacuum when `None`).
pub fn run(circuit: &Circuit, mut outcomes: Outcomes<'_>, initial: Option<StateVector>) -> Result<OracleRun, OracleError> {
    if let Outcomes::Fixed(o) = &outcomes {
        if o.len() != circuit.measure_count() {
            return Err(OracleError::OutcomeCount { needed: circuit.measure_count(), given: o.len() });
        }
    }
    let mut state = match initial {
        Some(s) => s,
        None => StateVector::vacuum(circuit.n)?,
    };
    if state.n != circuit.n {
        return Err(OracleError::WidthMismatch { gate: circuit.n, state: state.n });
    }
    let mut measurements = Vec::new();
    let mut chosen = Vec::new();
    for (idx, item) in circuit.items.iter().enumerate() {
        match item {
            Item::Project { mode, .. } | Item::Measure { mode } => {
                let p_plus = (1.0 + state.z_expectation(*mode)) / 2.0;
                let p_plus = p_plus.clamp(0.0, 1.0);
                let sign = match item {
                    Item::Project { sign, .. } => *sign,
                    _ => {
                        let s = match &mut outcomes {
                            Outcomes::Fixed(o) => o[chosen.len()],
                            Outcomes::Sample(rng) => {
                                if rng.random::<f64>() < p_plus {
                                    Sign::Plus
                                } else {
                                    Sign::Minus
                                }
                            }
                        };
                        chosen.push(s);
                        s
                    }
                };
                let p = if sign == Sign::Plus { p_plus } else { 1.0 - p_plus };
                if p <= BRANCH_FLOOR {
                    return Err(OracleError::ImpossibleBranch { item: idx, probability: p });
                }
                measurements.push(MeasurementRecord {
                    item: idx,
                    mode: mode + 1,
                    outcome: sign,
                    p_plus,
                    p_minus: 1.0 - p_plus,
                });
                state.apply_mut(&ElementaryGate::projection(*mode, sign))?;
            }
            _ => {
                let g = ElementaryGate::from_item(item, None).expect("gate item");
                state.apply_mut(&g)?;
            }
        }
        state.renormalize();
    }
    Ok(OracleRun { state, measurements, outcomes: chosen })
}

/// Resolve every item to an elementary gate using `outcomes` for the
/// `measure` items.
pub fn resolve(circuit: &Circuit, outcomes: &[Sign]) -> Result<Vec<ElementaryGate>, OracleError> {
    if outcomes.len() != circuit.measure_count() {
        return Err(OracleError::OutcomeCount { needed: circuit.measure_count(), given: outcomes.len() });
    }
    let mut next = outcomes.iter();
    Ok(circuit
        .items
        .iter()
        .map(|item| {
            let o = matches!(item, Item::Measure { .. }).then(|| *next.next().expect("counted"));
            ElementaryGate::from_item(item, o).expect("resolved")
        })
        .collect())
}

fn apply_all(n: usize, gates: &[ElementaryGate], mut s: StateVector) -> Result<StateVector, OracleError> {
    if s.n != n {
        return Err(OracleError::WidthMismatch { gate: n, state: s.n });
    }
    for g in gates {
        s.apply_mut(g)?;
    }
    Ok(s)
}

/// `tr(U^† U) = sum_kl |U_kl|^2` for the product of `gates`, by sweeping
/// all `2^n` basis states in parallel.
pub fn trace_norm_sq(n: usize, gates: &[ElementaryGate]) -> Result<f64, OracleError> {
    StateVector::vacuum(n)?;
    (0..1usize << n)
        .into_par_iter()
        .map(|j| apply_all(n, gates, StateVector::basis(n, j)?).map(|s| s.norm_sq()))
        .try_reduce(|| 0.0, |a, b| Ok(a + b))
}

/// Unnormalized `(<v|U^†(I + Z_k)U|v>, <v|U^†(I - Z_k)U|v>)` with `k`
/// 0-based.
pub fn measurement_probabilities(n: usize, gates: &[ElementaryGate], mode: usize) -> Result<(f64, f64), OracleError> {
    let s = apply_all(n, gates, StateVector::vacuum(n)?)?;
    let weight = s.norm_sq();
    let z = s.z_expectation(mode);
    let (plus, minus) = (weight * (1.0 + z), weight * (1.0 - z));
    if plus + minus <= 0.0 {
        return Err(OracleError::ImpossibleBranch { item: gates.len(), probability: 0.0 });
    }
    Ok((plus, minus))
}

/// Dense matrix of the product of `gates` (column `j` is `U|j>`).
pub fn operator_matrix(n: usize, gates: &[ElementaryGate]) -> Result<DMatrix<Complex64>, OracleError> {
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        let s = apply_all(n, gates, StateVector::basis(n, j)?)?;
        for (i, a) in s.amplitudes().into_iter().enumerate() {
            m[(i, j)] = a;
        }
    }
    Ok(m)
}
