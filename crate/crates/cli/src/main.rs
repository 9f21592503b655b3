use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use matchsim_core::circuit_io::{outcomes_to_string, parse, parse_outcomes, Circuit, SampleRecord};
use matchsim_core::gaussian::{compile_nonunitary, sample_run, scaling_report, simulate};
use matchsim_core::matchgate::{verify_relations, Membership, TwoQubitOperator};
use matchsim_core::numeric::{complex_normal, rows_to_matrix, seeded};
use matchsim_core::oracle::{self, oracle_cap, Outcomes};
use matchsim_core::sorep::{self, SOElement};
use num_complex::Complex64;
use serde_json::{json, Value};

/// Largest mode count for which `--amplitudes` is allowed without `--force`.
const AMPLITUDE_LIMIT: usize = 10;

#[derive(Parser)]
#[command(name = "matchsim", version, about = "Matchgate and fermionic linear optics simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Oracle,
    Gaussian,
}

#[derive(Subcommand)]
enum Command {
    /// Run a circuit file and print a JSON result record.
    Simulate {
        #[arg(long, value_enum)]
        engine: Engine,
        /// Outcomes for the `measure` items, e.g. `+-+`.
        #[arg(long, conflicts_with = "sample")]
        outcomes: Option<String>,
        /// Draw this many runs, sampling `measure` outcomes.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include the final state vector (oracle only).
        #[arg(long)]
        amplitudes: bool,
        /// Allow `--amplitudes` above 10 modes.
        #[arg(long)]
        force: bool,
        file: PathBuf,
    },
    /// Check the matchgate identities on a 4x4 matrix given as JSON rows of [re, im].
    CheckMatchgate {
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        file: PathBuf,
    },
    /// Print the so(2n+1) image of a circuit.
    Represent { file: PathBuf },
    /// Split an orthogonal matrix into plane rotations.
    Decompose {
        /// Reject input whose A^T A differs from I by more than `--tol`.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        file: PathBuf,
    },
    /// Rewrite a circuit with matchcircuit gates only.
    Compile {
        /// Emit the Gaussian engine's rotation and projection circuit instead.
        #[arg(long)]
        gaussian: bool,
        file: PathBuf,
    },
    /// Check the eleven relations on seeded random matrices.
    VerifyIdentities {
        #[arg(long, default_value_t = 1000)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Time the Gaussian engine on random unitary circuits.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "50,100,200,400")]
        modes: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        gates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 30.0)]
        budget: f64,
    },
}

enum Failure {
    /// Bad input or flags; exit 2.
    Usage(String),
    /// Valid input with a negative answer or an engine error; exit 1.
    Domain(String),
}

type CliResult = Result<Value, Failure>;

/// Write to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn out_json(v: &Value) {
    out(&format!("{}\n", serde_json::to_string_pretty(v).unwrap_or_default()));
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn domain(e: impl ToString) -> Failure {
    Failure::Domain(e.to_string())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(usage)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text = read_input(path)?;
    parse(&text).map_err(|errs| {
        let lines: Vec<String> = errs.iter().map(|e| format!("{}:{e}", path.display())).collect();
        usage(lines.join("\n"))
    })
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(&read_input(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(v: &T) -> CliResult {
    serde_json::to_value(v).map_err(domain)
}

fn cmd_simulate(
    engine: Engine,
    outcomes: Option<String>,
    sample: Option<usize>,
    seed: u64,
    amplitudes: bool,
    force: bool,
    file: &Path,
) -> CliResult {
    let circ = read_circuit(file)?;
    if amplitudes {
        if matches!(engine, Engine::Gaussian) {
            return Err(usage("--amplitudes needs --engine oracle"));
        }
        if circ.n > AMPLITUDE_LIMIT && !force {
            return Err(usage(format!("--amplitudes on {} modes needs --force (limit {AMPLITUDE_LIMIT})", circ.n)));
        }
    }
    let fixed = match (&outcomes, sample) {
        (Some(s), _) => Some(parse_outcomes(s).ok_or_else(|| usage(format!("outcomes must be + and - only, got {s:?}")))?),
        (None, None) if circ.measure_count() == 0 => Some(Vec::new()),
        (None, None) => {
            return Err(usage(format!("circuit has {} measure items; pass --outcomes or --sample", circ.measure_count())))
        }
        (None, Some(_)) => None,
    };
    if let Some(o) = &fixed {
        if o.len() != circ.measure_count() {
            return Err(usage(format!("circuit has {} measure items but {} outcomes were given", circ.measure_count(), o.len())));
        }
    }
    let mut rng = seeded(seed);
    let start = Instant::now();
    let ms = |start: Instant| start.elapsed().as_secs_f64() * 1e3;
    match engine {
        Engine::Oracle => {
            if let Some(o) = fixed {
                let r = oracle::run(&circ, Outcomes::Fixed(&o), None).map_err(domain)?;
                return to_value(&r.record(&circ, ms(start), amplitudes));
            }
            let mut first = None;
            let mut samples = Vec::new();
            for _ in 0..sample.unwrap_or(0) {
                let r = oracle::run(&circ, Outcomes::Sample(&mut rng), None).map_err(domain)?;
                samples.push(SampleRecord { outcomes: outcomes_to_string(&r.outcomes), branch_weight: r.branch_weight() });
                first.get_or_insert(r);
            }
            let r = first.ok_or_else(|| usage("--sample must be at least 1"))?;
            let mut rec = r.record(&circ, ms(start), amplitudes);
            rec.samples = Some(samples);
            to_value(&rec)
        }
        Engine::Gaussian => {
            let comp = compile_nonunitary(&circ).map_err(domain)?;
            if let Some(o) = fixed {
                let r = simulate(&comp, &o).map_err(domain)?;
                return to_value(&r.record(&comp, ms(start)));
            }
            let mut first = None;
            let mut samples = Vec::new();
            for _ in 0..sample.unwrap_or(0) {
                let r = sample_run(&comp, &mut rng).map_err(domain)?;
                samples.push(SampleRecord { outcomes: outcomes_to_string(&r.outcomes), branch_weight: r.branch_weight() });
                first.get_or_insert(r);
            }
            let r = first.ok_or_else(|| usage("--sample must be at least 1"))?;
            let mut rec = r.record(&comp, ms(start));
            rec.samples = Some(samples);
            to_value(&rec)
        }
    }
}

fn cmd_check_matchgate(tol: f64, file: &Path) -> CliResult {
    let b = TwoQubitOperator::from_json(&read_json(file)?).map_err(usage)?;
    let report = verify_relations(&b, tol);
    let out = to_value(&report)?;
    if report.membership == Membership::Member {
        Ok(out)
    } else {
        out_json(&out);
        Err(domain(format!("not a matchgate ({:?})", report.membership)))
    }
}

fn read_so_element(file: &Path) -> Result<SOElement, Failure> {
    let v = read_json(file)?;
    if v.is_object() {
        return serde_json::from_value(v).map_err(usage);
    }
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_value(v).map_err(usage)?;
    let m = rows_to_matrix(&rows).ok_or_else(|| usage("matrix rows must be square"))?;
    SOElement::from_matrix(m).map_err(usage)
}

fn cmd_decompose(check: bool, tol: f64, file: &Path) -> CliResult {
    let a = read_so_element(file)?;
    let err = a.orthogonality_error();
    if check && err > tol {
        return Err(domain(format!("not orthogonal: max |A^T A - I| = {err:e}")));
    }
    let factors = sorep::decompose(&a).map_err(domain)?;
    Ok(json!({ "n": a.n, "orthogonality_error": err, "factors": to_value(&factors)? }))
}

fn cmd_verify_identities(count: usize, seed: u64, tol: f64) -> CliResult {
    let mut rng = seeded(seed);
    let mut names: Vec<String> = Vec::new();
    let mut worst_norm: Vec<f64> = Vec::new();
    let mut worst_raw: Vec<f64> = Vec::new();
    for _ in 0..count {
        let mut e = [[Complex64::new(0.0, 0.0); 4]; 4];
        e.iter_mut().flatten().for_each(|z| *z = complex_normal(&mut rng));
        let b = TwoQubitOperator::new(e).map_err(domain)?;
        let report = verify_relations(&b, tol);
        if names.is_empty() {
            names = report.relations.iter().map(|r| r.name.clone()).collect();
            worst_norm = vec![0.0; names.len()];
            worst_raw = vec![0.0; names.len()];
        }
        for (k, r) in report.relations.iter().enumerate() {
            worst_norm[k] = worst_norm[k].max(r.normalized);
            worst_raw[k] = worst_raw[k].max(r.raw);
        }
    }
    let all_hold = worst_norm.iter().all(|&x| x <= tol);
    let relations: Vec<Value> = names
        .iter()
        .zip(worst_norm.iter().zip(&worst_raw))
        .map(|(name, (norm, raw))| json!({ "name": name, "max_normalized": norm, "max_raw": raw }))
        .collect();
    let out = json!({ "matrices": count, "seed": seed, "tolerance": tol, "relations": relations, "all_relations_hold": all_hold });
    if all_hold {
        Ok(out)
    } else {
        out_json(&out);
        Err(domain("a relation exceeded the tolerance"))
    }
}

fn cmd_bench(modes: &[usize], gates: usize, seed: u64, budget: f64) -> CliResult {
    let report = scaling_report(modes, gates, seed).map_err(domain)?;
    let slowest = report.points.iter().map(|p| p.seconds).fold(0.0, f64::max);
    let ok = slowest < budget && (report.points.len() < 2 || report.exponent <= 3.5);
    let out = json!({
        "points": to_value(&report.points)?,
        "exponent": report.exponent,
        "budget_seconds": budget,
        "oracle_cap": oracle_cap(),
        "within_budget": ok,
    });
    if ok {
        Ok(out)
    } else {
        out_json(&out);
        Err(domain(format!("slowest point {slowest:.2} s, exponent {:.2}", report.exponent)))
    }
}

fn dispatch(cmd: Command) -> CliResult {
    match cmd {
        Command::Simulate { engine, outcomes, sample, seed, amplitudes, force, file } => {
            cmd_simulate(engine, outcomes, sample, seed, amplitudes, force, &file)
        }
        Command::CheckMatchgate { tol, file } => cmd_check_matchgate(tol, &file),
        Command::Represent { file } => to_value(&sorep::represent(&read_circuit(&file)?).map_err(domain)?),
        Command::Decompose { check, tol, file } => cmd_decompose(check, tol, &file),
        Command::Compile { gaussian, file } => {
            let circ = read_circuit(&file)?;
            let out = if gaussian {
                compile_nonunitary(&circ).map_err(domain)?.circuit
            } else {
                sorep::compile(&circ).map_err(domain)?
            };
            self::out(&out.emit());
            Ok(Value::Null)
        }
        Command::VerifyIdentities { random, seed, tol } => cmd_verify_identities(random, seed, tol),
        Command::Bench { modes, gates, seed, budget } => cmd_bench(&modes, gates, seed, budget),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(Value::Null) => ExitCode::SUCCESS,
        Ok(v) => {
            out_json(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
