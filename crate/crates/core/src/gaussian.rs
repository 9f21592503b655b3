//! Polynomial-time engine for non-deterministic fermionic linear optics.
//!
//! A circuit is first compiled to real-angle rotations and projections:
//! every invertible gate `q + rU` becomes `alpha e^{i tau_r U} e^{t U}`, and
//! the real exponential `e^{tU}` is conjugated to `e^{t' Z_m}` and replaced
//! by a partial-swap gadget with one reusable ancilla that is post-selected
//! on `|0>`. Odd generators are handled by the lift qubit from [`crate::sorep`].
//!
//! The compiled circuit keeps the state Gaussian, tracked as the real
//! antisymmetric matrix `G_ab = -i <c_a c_b>` (`a != b`) over the
//! Jordan-Wigner Majoranas.

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{conjugate_by_rotation, quadratic_majorana_pair, Letter, Phase, PauliString};
use crate::circuit_io::{outcomes_to_string, Circuit, Item, MeasurementRecord, ResultRecord, Sign, FORMAT_VERSION};
use crate::oracle::{Outcomes, BRANCH_FLOOR};
use crate::sorep::{is_odd_generator, lift_generator, SorepError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GaussianError {
    #[error("item {item}: {source}")]
    Generator { item: usize, source: SorepError },
    #[error("item {item} is singular (q^2 = r^2); it has no invertible rotation form")]
    Singular { item: usize },
    #[error("item {item}: gadget angle is infeasible (cos s = {cos_s:e})")]
    GadgetInfeasible { item: usize, cos_s: f64 },
    #[error("circuit has {needed} measure items but {given} outcomes were given")]
    OutcomeCount { needed: usize, given: usize },
    #[error("impossible branch at item {item}: conditional probability {probability:e}")]
    ImpossibleBranch { item: usize, probability: f64 },
    #[error("compiled item {item} is not a rotation by a quadratic generator")]
    NotQuadratic { item: usize },
}

/// Where a compiled item came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// Unitary part of a source gate, or a source projection/measurement.
    Source(usize),
    /// Basis change around a real exponential of source item `k`.
    Conjugation(usize),
    /// Gadget rotation or ancilla post-selection for source item `k`.
    Gadget(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledCircuit {
    pub source_modes: usize,
    /// When true, qubit 0 is the lift qubit and source mode `k` is qubit `k + 1`.
    pub lifted: bool,
    /// Gadget ancilla (last qubit), if any real exponential was compiled.
    pub ancilla: Option<usize>,
    /// Only `rot`, `project` and `measure` items.
    pub circuit: Circuit,
    pub origins: Vec<Origin>,
    /// Scalar factored out of each source gate, in source order.
    pub scales: Vec<Complex64>,
    /// Source item index for each entry of `scales`.
    pub scale_items: Vec<usize>,
}

impl CompiledCircuit {
    pub fn total_modes(&self) -> usize {
        self.circuit.n
    }

    pub fn offset(&self) -> usize {
        usize::from(self.lifted)
    }

    /// `ln |prod scales|^2`.
    pub fn log_scale_weight(&self) -> f64 {
        self.scales.iter().map(|s| 2.0 * s.norm().ln()).sum()
    }

    pub fn gadget_count(&self) -> usize {
        self.circuit
            .items
            .iter()
            .zip(&self.origins)
            .filter(|(i, o)| matches!(i, Item::Project { .. }) && matches!(o, Origin::Gadget(_)))
            .count()
    }
}

/// A real exponential `e^{t L}` (lifted Hermitian `L`) awaiting its gadget.
struct RealExp {
    t: f64,
    generator: PauliString,
}

enum Lowered {
    Rot(f64, PauliString),
    Real(RealExp),
}

/// Split `q + rU` into `alpha`, a unitary angle and a real exponent.
fn lower_gate(
    q: Complex64,
    r: Complex64,
    u: &PauliString,
    n: usize,
    lifted: bool,
    item: usize,
) -> Result<(Complex64, Vec<Lowered>), GaussianError> {
    let herm = u.clone().with_phase(Phase::ONE);
    let rp = r * u.phase().to_complex();
    let alpha = (q * q - rp * rp).sqrt();
    if alpha.norm() <= 1e-14 * (q.norm() + r.norm()) {
        return Err(GaussianError::Singular { item });
    }
    let tau = Complex64::new(0.0, -1.0) * ((q + rp) / alpha).ln();
    let g = if lifted {
        lift_generator(&herm, n).map_err(|source| GaussianError::Generator { item, source })?
    } else {
        if !crate::algebra::is_l2_generator(&herm) {
            return Err(GaussianError::Generator { item, source: SorepError::NotGenerator(u.to_string()) });
        }
        herm
    };
    let mut out = Vec::new();
    if tau.re != 0.0 {
        out.push(Lowered::Rot(tau.re, g.clone()));
    }
    // e^{i tau H} = e^{i Re(tau) H} e^{-Im(tau) H}, and both factors commute
    if tau.im != 0.0 {
        out.push(Lowered::Real(RealExp { t: -tau.im, generator: g }));
    }
    Ok((alpha, out))
}

fn jw_pair(m: usize, a: usize, letter: Letter, w: usize) -> PauliString {
    let mut p = PauliString::identity(w);
    p.set_letter(m, letter);
    for q in (m + 1)..a {
        p.set_letter(q, Letter::Z);
    }
    p.set_letter(a, letter);
    p
}

/// Compile a circuit to unitary rotations and elementary projections.
pub fn compile_nonunitary(circuit: &Circuit) -> Result<CompiledCircuit, GaussianError> {
    let n = circuit.n;
    let lifted = circuit.items.iter().any(|i| match i {
        Item::Rot { pauli, .. } | Item::Gate { pauli, .. } => is_odd_generator(pauli),
        _ => false,
    });
    let off = usize::from(lifted);
    let w = n + off;
    let mut lowered: Vec<(usize, Vec<Lowered>)> = Vec::new();
    let mut scales = Vec::new();
    let mut scale_items = Vec::new();
    for (idx, item) in circuit.items.iter().enumerate() {
        let (q, r, u) = match item {
            Item::Rot { t, pauli } => {
                let t = Complex64::new(t.value(), 0.0);
                (t.cos(), Complex64::new(0.0, 1.0) * t.sin(), pauli)
            }
            Item::Gate { q, r, pauli } => (q.value(), r.value(), pauli),
            _ => continue,
        };
        if u.num_qubits() != n {
            return Err(GaussianError::Generator {
                item: idx,
                source: SorepError::Width { got: u.num_qubits(), want: n },
            });
        }
        let (alpha, parts) = lower_gate(q, r, u, n, lifted, idx)?;
        let extra: f64 = parts.iter().map(|p| if let Lowered::Real(e) = p { e.t.abs() } else { 0.0 }).sum();
        scales.push(alpha * extra.exp());
        scale_items.push(idx);
        lowered.push((idx, parts));
    }
    let needs_ancilla = lowered.iter().any(|(_, p)| p.iter().any(|l| matches!(l, Lowered::Real(_))));
    let total = w + usize::from(needs_ancilla);
    let ancilla = needs_ancilla.then_some(w);
    let mut out = Circuit::new(total);
    out.name = circuit.name.clone();
    let mut origins = Vec::new();
    let mut next = lowered.into_iter().peekable();
    for (idx, item) in circuit.items.iter().enumerate() {
        match item {
            Item::Project { mode, sign } => {
                out.project(mode + off, *sign);
                origins.push(Origin::Source(idx));
            }
            Item::Measure { mode } => {
                out.measure(mode + off);
                origins.push(Origin::Source(idx));
            }
            _ => {
                let (src, parts) = next.next().expect("one lowering per gate");
                debug_assert_eq!(src, idx);
                for part in parts {
                    match part {
                        Lowered::Rot(t, g) => {
                            out.rot(t, g.extend(total - w));
                            origins.push(Origin::Source(idx));
                        }
                        Lowered::Real(e) => {
                            let a = ancilla.expect("ancilla allocated");
                            emit_real_exp(&mut out, &mut origins, &e, a, idx)?;
                        }
                    }
                }
            }
        }
    }
    Ok(CompiledCircuit { source_modes: n, lifted, ancilla, circuit: out, origins, scales, scale_items })
}

/// `e^{t L}` up to the scale `e^{|t|}`: conjugate `L` to `±Z_m`, then run the
/// partial swap with the ancilla and post-select it on `|0>`.
fn emit_real_exp(
    out: &mut Circuit,
    origins: &mut Vec<Origin>,
    e: &RealExp,
    ancilla: usize,
    item: usize,
) -> Result<(), GaussianError> {
    let total = out.n;
    let l = e.generator.extend(total - e.generator.num_qubits());
    let (a, b, _) = quadratic_majorana_pair(&l).ok_or(GaussianError::NotQuadratic { item })?;
    let m = b / 2;
    let z = PauliString::single(total, m, Letter::Z);
    let (axis, sigma) = if a / 2 == m {
        (None, if l.phase() == z.phase() { 1.0 } else { -1.0 })
    } else {
        let q = (&z * &l).with_phase(Phase::ONE);
        let moved = conjugate_by_rotation(&l, &q, 1);
        debug_assert_eq!(moved.letters_key(), z.letters_key());
        let sigma = if moved.phase() == Phase::ONE { 1.0 } else { -1.0 };
        (Some(q), sigma)
    };
    let t = sigma * e.t;
    let quarter = std::f64::consts::FRAC_PI_4;
    if let Some(q) = &axis {
        out.rot(-quarter, q.clone());
        origins.push(Origin::Conjugation(item));
    }
    // + variant attenuates |1>: cos s = e^{-2t}; - variant attenuates |0>
    let cos_s = (-2.0 * t.abs()).exp();
    if !(0.0..=1.0).contains(&cos_s) {
        return Err(GaussianError::GadgetInfeasible { item, cos_s });
    }
    let s = cos_s.acos();
    let yy_sign = if t >= 0.0 { 1.0 } else { -1.0 };
    out.rot(s / 2.0, jw_pair(m, ancilla, Letter::X, total));
    out.rot(yy_sign * s / 2.0, jw_pair(m, ancilla, Letter::Y, total));
    out.project(ancilla, Sign::Plus);
    origins.extend([Origin::Gadget(item); 3]);
    if let Some(q) = axis {
        out.rot(quarter, q);
        origins.push(Origin::Conjugation(item));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n: usize,
    /// Row-major `2n x 2n`.
    gamma: Vec<f64>,
}

impl GaussianState {
    pub fn vacuum(n: usize) -> Self {
        let d = 2 * n;
        let mut gamma = vec![0.0; d * d];
        for m in 0..n {
            gamma[2 * m * d + 2 * m + 1] = 1.0;
            gamma[(2 * m + 1) * d + 2 * m] = -1.0;
        }
        GaussianState { n, gamma }
    }

    pub fn num_modes(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.gamma[a * 2 * self.n + b]
    }

    /// `<Z_m>` for a 0-based mode.
    pub fn z_expectation(&self, m: usize) -> f64 {
        self.get(2 * m, 2 * m + 1)
    }

    pub fn antisymmetry_error(&self) -> f64 {
        let d = 2 * self.n;
        let mut err: f64 = 0.0;
        for a in 0..d {
            for b in a..d {
                err = err.max((self.get(a, b) + self.get(b, a)).abs());
            }
        }
        err
    }

    /// `G <- R G R^T` with `R = exp(theta s_ab)`.
    pub fn rotate(&mut self, a: usize, b: usize, theta: f64) {
        let d = 2 * self.n;
        let (c, s) = (theta.cos(), theta.sin());
        let g = &mut self.gamma;
        for k in 0..d {
            let (x, y) = (g[a * d + k], g[b * d + k]);
            g[a * d + k] = c * x + s * y;
            g[b * d + k] = c * y - s * x;
        }
        for k in 0..d {
            let (x, y) = (g[k * d + a], g[k * d + b]);
            g[k * d + a] = c * x + s * y;
            g[k * d + b] = c * y - s * x;
        }
    }

    /// `e^{i t P}` for a Hermitian quadratic Pauli string `P`.
    pub fn apply_rotation(&mut self, t: f64, p: &PauliString) -> Option<()> {
        let (a, b, phase) = quadratic_majorana_pair(p)?;
        // P = phase c_a c_b with phase = ±i, and ad(c_a c_b) = 2 s_ab
        let k = match phase {
            Phase::I => -1.0,
            Phase::MINUS_I => 1.0,
            _ => return None,
        };
        self.rotate(a, b, 2.0 * t * k);
        Some(())
    }

    /// Post-select `(I + sign Z_m)/2` and return the probability.
    pub fn project(&mut self, m: usize, sign: Sign) -> f64 {
        let d = 2 * self.n;
        let (p, q) = (2 * m, 2 * m + 1);
        let sg = sign.value();
        let gpq = self.get(p, q);
        let prob = ((1.0 + sg * gpq) / 2.0).clamp(0.0, 1.0);
        if prob <= BRANCH_FLOOR {
            return prob;
        }
        let denom = 1.0 + sg * gpq;
        let rp: Vec<f64> = (0..d).map(|k| self.get(p, k)).collect();
        let rq: Vec<f64> = (0..d).map(|k| self.get(q, k)).collect();
        let g = &mut self.gamma;
        for x in 0..d {
            if x == p || x == q {
                continue;
            }
            for y in 0..d {
                if y == p || y == q {
                    continue;
                }
                g[x * d + y] += sg * (rp[y] * rq[x] - rp[x] * rq[y]) / denom;
            }
        }
        for k in 0..d {
            g[p * d + k] = 0.0;
            g[q * d + k] = 0.0;
            g[k * d + p] = 0.0;
            g[k * d + q] = 0.0;
        }
        g[p * d + q] = sg;
        g[q * d + p] = -sg;
        prob
    }
}

#[derive(Debug, Clone)]
pub struct GaussianRun {
    pub state: GaussianState,
    /// `ln` of the branch weight, scales included.
    pub log_weight: f64,
    /// Source-level `project` and `measure` items.
    pub measurements: Vec<MeasurementRecord>,
    pub outcomes: Vec<Sign>,
    /// Post-selection probability of every gadget, in order.
    pub gadget_probabilities: Vec<f64>,
}

impl GaussianRun {
    pub fn branch_weight(&self) -> f64 {
        self.log_weight.exp()
    }
}

fn run(compiled: &CompiledCircuit, mut outcomes: Outcomes<'_>) -> Result<GaussianRun, GaussianError> {
    let circ = &compiled.circuit;
    if let Outcomes::Fixed(o) = &outcomes {
        if o.len() != circ.measure_count() {
            return Err(GaussianError::OutcomeCount { needed: circ.measure_count(), given: o.len() });
        }
    }
    let off = compiled.offset();
    let mut state = GaussianState::vacuum(circ.n);
    let mut log_weight = compiled.log_scale_weight();
    let mut measurements = Vec::new();
    let mut chosen = Vec::new();
    let mut gadget_probabilities = Vec::new();
    for (k, (item, origin)) in circ.items.iter().zip(&compiled.origins).enumerate() {
        let src = match origin {
            Origin::Source(i) | Origin::Conjugation(i) | Origin::Gadget(i) => *i,
        };
        match item {
            Item::Rot { t, pauli } => {
                state.apply_rotation(t.value(), pauli).ok_or(GaussianError::NotQuadratic { item: k })?;
            }
            Item::Gate { .. } => return Err(GaussianError::NotQuadratic { item: k }),
            Item::Project { mode, .. } | Item::Measure { mode } => {
                let p_plus = ((1.0 + state.z_expectation(*mode)) / 2.0).clamp(0.0, 1.0);
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
                let prob = state.project(*mode, sign);
                if prob <= BRANCH_FLOOR {
                    return Err(GaussianError::ImpossibleBranch { item: src, probability: prob });
                }
                log_weight += prob.ln();
                if matches!(origin, Origin::Gadget(_)) {
                    gadget_probabilities.push(prob);
                } else {
                    measurements.push(MeasurementRecord {
                        item: src,
                        mode: mode - off + 1,
                        outcome: sign,
                        p_plus,
                        p_minus: 1.0 - p_plus,
                    });
                }
            }
        }
    }
    Ok(GaussianRun { state, log_weight, measurements, outcomes: chosen, gadget_probabilities })
}

/// Branch weight and conditional probabilities for fixed `measure` outcomes.
pub fn simulate(compiled: &CompiledCircuit, outcomes: &[Sign]) -> Result<GaussianRun, GaussianError> {
    run(compiled, Outcomes::Fixed(outcomes))
}

/// Draw each `measure` outcome from its conditional distribution.
pub fn sample_run(compiled: &CompiledCircuit, rng: &mut crate::numeric::Rng64) -> Result<GaussianRun, GaussianError> {
    run(compiled, Outcomes::Sample(rng))
}

impl GaussianRun {
    pub fn record(&self, compiled: &CompiledCircuit, timing_ms: f64) -> ResultRecord {
        ResultRecord {
            format_version: FORMAT_VERSION,
            engine: "gaussian".into(),
            modes: compiled.source_modes,
            total_modes: compiled.total_modes(),
            outcomes: outcomes_to_string(&self.outcomes),
            branch_weight: self.branch_weight(),
            log_branch_weight: self.log_weight,
            final_norm: self.branch_weight().sqrt(),
            measurements: self.measurements.clone(),
            scale_ledger: compiled.scales.clone(),
            amplitudes: None,
            samples: None,
            timing_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ScalingPoint {
    pub n: usize,
    pub gates: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ScalingReport {
    pub points: Vec<ScalingPoint>,
    /// Least-squares slope of `ln seconds` against `ln n`.
    pub exponent: f64,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.max(1e-9).ln()).collect();
    let k = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Time compile + simulate of random unitary circuits with `gates` gates and
/// a few measurements at each `n`.
pub fn scaling_report(ns: &[usize], gates: usize, seed: u64) -> Result<ScalingReport, GaussianError> {
    use crate::corpus::{random_circuit, CorpusSpec};
    let mut rng = crate::numeric::seeded(seed);
    let mut points = Vec::new();
    for &n in ns {
        let spec = CorpusSpec { measures: 4, ..CorpusSpec::unitary(n, gates) };
        let circ = random_circuit(&mut rng, &spec);
        let start = std::time::Instant::now();
        let comp = compile_nonunitary(&circ)?;
        sample_run(&comp, &mut rng)?;
        points.push(ScalingPoint { n, gates, seconds: start.elapsed().as_secs_f64() });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.seconds).collect();
    Ok(ScalingReport { exponent: loglog_slope(&xs, &ys), points })
}
