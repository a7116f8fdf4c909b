use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qcch_core::analysis::leakage_breakdown;
use qcch_core::kato::{DEFAULT_KATO_MAX_QUBITS, DEFAULT_MAX_ORDER};
use qcch_core::linalg::{operator_norm, DEFAULT_MAX_QUBITS};
use qcch_core::num_complex::Complex64;
use qcch_core::pulse::DEFAULT_CIRCUIT_MAX_QUBITS;
use qcch_core::{
    circuit_unitary, compile_evolution, compile_logical_pauli, compile_pauli_exponential,
    count_report, energy_barrier, preset, suppression_curve, threshold, BarrierOptions, CMat,
    CodeHamiltonian, KatoConfig, KatoEngine, LogicalPauli, PauliOperator, PerturbationSpec,
    PulseCircuit, StabilizerCode,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;
const DISTANCE_SEARCH_WEIGHT: usize = 7;

#[derive(Parser, Debug)]
#[command(
    name = "qcch",
    version,
    about = "Concatenated-code Hamiltonians and their perturbative stability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(clap::Args, Debug)]
struct Options {
    /// Preset (five-qubit, nine-qubit) or path to a code JSON file.
    #[arg(long, global = true, default_value = "five-qubit")]
    code: String,
    /// Coupling J of every Hamiltonian term.
    #[arg(long = "J", global = true, default_value_t = 1.0)]
    j: f64,
    /// Perturbation strength x.
    #[arg(long, global = true)]
    x: Option<f64>,
    /// Concatenation levels r.
    #[arg(long, global = true, default_value_t = 1)]
    levels: usize,
    /// Series order p.
    #[arg(long, global = true, default_value_t = 2)]
    order: usize,
    /// Evolution time.
    #[arg(long, global = true)]
    t: Option<f64>,
    /// Pauli string to compile, e.g. XXXX or -XZY.
    #[arg(long, global = true)]
    pauli: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    output: Format,
    /// Seed for randomized perturbation coefficients; uniform coefficients when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel enumerations.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest qubit count handled with dense matrices (default per command, or QCCH_MAX_DIM).
    #[arg(long = "max-dim", global = true)]
    max_dim: Option<usize>,
    /// State budget of the barrier search.
    #[arg(long = "max-states", global = true, default_value_t = BarrierOptions::default().max_states)]
    max_states: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generators, logical and gauge operators, distance and validation.
    CodeInfo,
    /// Energy levels and degeneracies of the code Hamiltonian.
    Spectrum,
    /// Effective Hamiltonian of one energy level under single-qubit perturbations.
    Perturb {
        /// Energy level to expand around, 0 = ground.
        #[arg(long, default_value_t = 0)]
        level: usize,
    },
    /// Threshold coupling of a preset.
    Threshold,
    /// Error-process counts entering the threshold.
    Counts,
    /// Effective coupling per concatenation level.
    Suppress,
    /// Energy barrier with a witness path.
    Barrier,
    /// Pulse circuit for a Pauli exponential, a Hamiltonian step or a logical Pauli.
    Compile {
        /// Logical operator (I, X, Y, Z) to compile instead of an exponential.
        #[arg(long)]
        logical: Option<String>,
        /// Number of repeated steps when compiling the Hamiltonian.
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Table,
    Json,
}

enum Failure {
    Input(String),
    Cap(String),
}

impl From<qcch_core::Error> for Failure {
    fn from(e: qcch_core::Error) -> Self {
        if e.is_cap_or_divergence() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<(Value, String), Failure>;

fn input<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Input(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let o = &cli.opts;
    if !(o.j.is_finite() && o.j > 0.0) {
        return input(format!("--J must be positive, got {}", o.j));
    }
    if o.levels == 0 {
        return input("--levels must be at least 1");
    }
    if let Some(x) = o.x {
        if !(x.is_finite() && x >= 0.0) {
            return input(format!("--x must be non-negative, got {x}"));
        }
    }
    if let Some(n) = o.threads {
        if n == 0 {
            return input("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(e.to_string()))?;
    }
    let (name, (body, table)) = match &cli.command {
        Command::CodeInfo => ("code-info", code_info(o)?),
        Command::Spectrum => ("spectrum", spectrum(o)?),
        Command::Perturb { level } => ("perturb", perturb(o, *level)?),
        Command::Threshold => ("threshold", threshold_cmd(o)?),
        Command::Counts => ("counts", counts(o)?),
        Command::Suppress => ("suppress", suppress(o)?),
        Command::Barrier => ("barrier", barrier(o)?),
        Command::Compile { logical, steps } => ("compile", compile(o, logical.as_deref(), *steps)?),
    };
    Ok(match o.output {
        Format::Table => table,
        Format::Json => {
            let mut doc =
                json!({ "schema": format!("qcch.{name}.v{SCHEMA_VERSION}"), "command": name });
            if let (Value::Object(doc), Value::Object(body)) = (&mut doc, body) {
                doc.extend(body);
            }
            let mut text = serde_json::to_string_pretty(&doc).expect("JSON value serializes");
            text.push('\n');
            text
        }
    })
}

fn dense_cap(o: &Options, default: usize) -> Result<usize, Failure> {
    if let Some(cap) = o.max_dim {
        return Ok(cap);
    }
    match std::env::var("QCCH_MAX_DIM") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("QCCH_MAX_DIM must be a qubit count, got {v:?}"))),
        Err(_) => Ok(default),
    }
}

fn load_code(o: &Options) -> Result<StabilizerCode, Failure> {
    let code = match preset(&o.code) {
        Some(code) => code,
        None if Path::new(&o.code).exists() => StabilizerCode::from_json_file(&o.code)?,
        None => {
            return input(format!(
                "unknown code {:?}: use five-qubit, nine-qubit or a path to a code JSON file",
                o.code
            ))
        }
    };
    let report = code.validate();
    if !report.is_valid() {
        let details: Vec<String> = report
            .violations
            .iter()
            .map(|v| serde_json::to_string(v).expect("violation serializes"))
            .collect();
        return input(format!(
            "invalid code {}: {}",
            code.name(),
            details.join("; ")
        ));
    }
    Ok(code)
}

fn hamiltonian(o: &Options, code: &StabilizerCode) -> Result<CodeHamiltonian, Failure> {
    Ok(if o.levels == 1 {
        CodeHamiltonian::build_flat(code, o.j)?
    } else {
        CodeHamiltonian::build_concatenated(code, o.levels, o.j)?
    })
}

fn strings(ops: &[PauliOperator]) -> Vec<String> {
    ops.iter().map(ToString::to_string).collect()
}

fn code_info(o: &Options) -> Outcome {
    let code = load_code(o)?;
    let params = code.parameters(DISTANCE_SEARCH_WEIGHT);
    let body = json!({
        "code": code.name(),
        "parameters": params.to_string(),
        "n_qubits": params.n,
        "logical_qubits": params.k,
        "gauge_qubits": params.gauge,
        "distance": params.distance,
        "generators": strings(code.generators()),
        "logical_x": strings(code.logical_x()),
        "logical_z": strings(code.logical_z()),
        "gauge_x": strings(code.gauge_x()),
        "gauge_z": strings(code.gauge_z()),
        "valid": true,
    });
    let mut t = String::new();
    writeln!(t, "{} {params}", code.name()).unwrap();
    let mut section = |title: &str, ops: &[PauliOperator]| {
        if ops.is_empty() {
            return;
        }
        writeln!(t, "{title}:").unwrap();
        for (k, op) in ops.iter().enumerate() {
            writeln!(t, "  {k:>2}  {op}").unwrap();
        }
    };
    section("generators", code.generators());
    section("logical X", code.logical_x());
    section("logical Z", code.logical_z());
    section("gauge X", code.gauge_x());
    section("gauge Z", code.gauge_z());
    writeln!(t, "validation: ok").unwrap();
    Ok((body, t))
}

fn spectrum(o: &Options) -> Outcome {
    let code = load_code(o)?;
    let h = hamiltonian(o, &code)?;
    let s = h.spectrum()?;
    let cap = dense_cap(o, DEFAULT_MAX_QUBITS)?;
    let numeric = if h.n_qubits() <= cap {
        Some(s.matches(&h.numeric_spectrum(cap)?))
    } else {
        None
    };
    let body = json!({
        "code": code.name(),
        "J": o.j,
        "levels": o.levels,
        "n_qubits": h.n_qubits(),
        "terms": h.terms().len(),
        "spectrum": s,
        "dense_check": numeric,
    });
    let mut t = String::new();
    writeln!(
        t,
        "{} r={} on {} qubits, {} terms, J = {}",
        code.name(),
        o.levels,
        h.n_qubits(),
        h.terms().len(),
        o.j
    )
    .unwrap();
    writeln!(t, "{:>12}  {:>10}  {:>40}", "E/J", "violated", "degeneracy").unwrap();
    for level in &s.levels {
        writeln!(
            t,
            "{:>12}  {:>10}  {:>40}",
            fmt_num(level.energy / o.j),
            level.violations,
            level.degeneracy
        )
        .unwrap();
    }
    writeln!(t, "gap/J = {}", fmt_num(s.gap / o.j)).unwrap();
    match numeric {
        Some(true) => writeln!(t, "dense diagonalization agrees").unwrap(),
        Some(false) => writeln!(t, "dense diagonalization DISAGREES").unwrap(),
        None => writeln!(
            t,
            "dense check skipped: {} qubits above cap {cap}",
            h.n_qubits()
        )
        .unwrap(),
    }
    Ok((body, t))
}

fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e-3 && v.abs() < 1e6 {
        let s = format!("{v:.6}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.6e}")
    }
}

fn perturb(o: &Options, level: usize) -> Outcome {
    let code = load_code(o)?;
    let h = hamiltonian(o, &code)?;
    let x = match o.x {
        Some(x) => x,
        None => return input("perturb needs --x"),
    };
    let n = h.n_qubits();
    let spec = match o.seed {
        Some(seed) => PerturbationSpec::random(n, x, &mut ChaCha8Rng::seed_from_u64(seed)),
        None => PerturbationSpec::uniform(n, x),
    };
    let config = KatoConfig {
        max_order: DEFAULT_MAX_ORDER,
        max_qubits: dense_cap(o, DEFAULT_KATO_MAX_QUBITS)?,
    };
    let engine = KatoEngine::new(&h, &spec, config)?;
    if level >= engine.decomposition().n_levels() {
        return input(format!(
            "level {level} out of range: the Hamiltonian has {} levels",
            engine.decomposition().n_levels()
        ));
    }
    let report = engine.effective_hamiltonian(level, x, o.order)?;
    let summary = report.summary();
    let body = json!({
        "code": code.name(),
        "J": o.j,
        "x": x,
        "gamma": x / o.j,
        "seed": o.seed,
        "perturbation": spec,
        "report": summary,
    });
    let mut t = String::new();
    writeln!(
        t,
        "{} level {level} (E = {} J), J = {}, x = {x}, γ = x/J = {}",
        code.name(),
        fmt_num(report.energy / o.j),
        o.j,
        fmt_num(x / o.j)
    )
    .unwrap();
    writeln!(
        t,
        "‖V‖ = {}, gap/J = {}, 4x‖V‖/Δ = {}, converged: {}",
        fmt_num(summary.norm_v),
        fmt_num(summary.gap / o.j),
        fmt_num(summary.ratio),
        summary.converged
    )
    .unwrap();
    writeln!(
        t,
        "truncation bound {}, projector bound {}",
        fmt_num(summary.truncation_bound),
        fmt_num(summary.projector_bound)
    )
    .unwrap();
    writeln!(t, "{:>5}  {:>14}  {:>14}", "m", "‖x^m A^(m)‖", "‖B^(m)‖").unwrap();
    for (m, (a, b)) in summary
        .series_norms
        .iter()
        .zip(&summary.projector_term_norms)
        .enumerate()
    {
        writeln!(t, "{:>5}  {:>14}  {:>14}", m + 1, fmt_num(*a), fmt_num(*b)).unwrap();
    }
    writeln!(t, "first order vanishes: {}", summary.first_order_vanishes).unwrap();
    if let Some(so) = summary.second_order {
        writeln!(
            t,
            "second order ∝ Π: {} (coefficient {} / J, residual {})",
            so.proportional,
            fmt_num(so.coefficient * o.j),
            fmt_num(so.residual_norm)
        )
        .unwrap();
    }
    let b = &summary.blocks;
    writeln!(
        t,
        "blocks: within-sector {}, cross-sector {}, cross-level {}, outside {}",
        fmt_num(b.within_diagonal),
        fmt_num(b.within_offdiagonal),
        fmt_num(b.cross_level),
        fmt_num(b.outside)
    )
    .unwrap();
    for l in &summary.logical {
        writeln!(
            t,
            "logical {:<6} ‖W_L‖ = {:<14} gauge part {}",
            l.label,
            fmt_num(l.norm),
            fmt_num(l.gauge_nontrivial_norm)
        )
        .unwrap();
    }
    Ok((body, t))
}

fn threshold_cmd(o: &Options) -> Outcome {
    let code = load_code(o)?;
    let r = threshold(&code, o.j)?;
    let body = json!({ "threshold": r });
    let mut t = String::new();
    writeln!(t, "{}: J = {}", r.code, r.j).unwrap();
    writeln!(
        t,
        "{} γ + {} γ² = 1  →  γ* = x*/J = {:.7}, x* = {}",
        r.linear_coeff,
        r.quadratic_coeff,
        r.gamma_star,
        fmt_num(r.x_star)
    )
    .unwrap();
    if let Some(note) = &r.erratum {
        writeln!(t, "note: {note}").unwrap();
    }
    Ok((body, t))
}

fn counts(o: &Options) -> Outcome {
    let code = load_code(o)?;
    let r = count_report(&code)?;
    let breakdown: Vec<Value> = leakage_breakdown(&code)?
        .into_iter()
        .map(|((violations, weight), count)| {
            json!({ "first_step_violations": violations, "residual_weight": weight, "count": count })
        })
        .collect();
    let body = json!({ "counts": r, "leakage_breakdown": breakdown });
    let mut t = String::new();
    writeln!(t, "{} ({} qubits)", r.code, r.n_qubits).unwrap();
    writeln!(t, "identity processes      {}", r.identity_processes).unwrap();
    writeln!(t, "  same error            {}", r.same_error_processes).unwrap();
    writeln!(t, "  through gauge         {}", r.gauge_processes).unwrap();
    writeln!(
        t,
        "leakage channel         {} ({:?})",
        r.leakage_channel, r.leakage_rule
    )
    .unwrap();
    writeln!(
        t,
        "naive bounds 3n, 9n²    {}, {}",
        r.naive_bounds.0, r.naive_bounds.1
    )
    .unwrap();
    Ok((body, t))
}

fn suppress(o: &Options) -> Outcome {
    let code = load_code(o)?;
    let x = match o.x {
        Some(x) => x,
        None => return input("suppress needs --x"),
    };
    let th = threshold(&code, o.j)?;
    let curve = suppression_curve(x, th.x_star, o.levels)?;
    let rows: Vec<Value> = curve
        .iter()
        .enumerate()
        .map(|(r, v)| json!({ "level": r, "x": v, "gamma": v / o.j }))
        .collect();
    let body = json!({
        "code": code.name(),
        "J": o.j,
        "x": x,
        "gamma": x / o.j,
        "x_star": th.x_star,
        "gamma_star": th.gamma_star,
        "curve": rows,
    });
    let mut t = String::new();
    writeln!(
        t,
        "{}: J = {}, x = {x} (γ = {}), x* = {} (γ* = {:.7})",
        code.name(),
        o.j,
        fmt_num(x / o.j),
        fmt_num(th.x_star),
        th.gamma_star
    )
    .unwrap();
    writeln!(t, "{:>5}  {:>16}  {:>16}", "r", "x_r", "γ_r").unwrap();
    for (r, v) in curve.iter().enumerate() {
        writeln!(t, "{r:>5}  {:>16}  {:>16}", fmt_num(*v), fmt_num(v / o.j)).unwrap();
    }
    Ok((body, t))
}

fn barrier(o: &Options) -> Outcome {
    let code = load_code(o)?;
    let h = hamiltonian(o, &code)?;
    let res = energy_barrier(
        &h,
        BarrierOptions {
            step_weight: 1,
            max_states: o.max_states,
        },
    )?;
    let body = json!({ "code": code.name(), "J": o.j, "levels": o.levels, "barrier": res });
    let mut t = String::new();
    let kind = if res.exact {
        "exact"
    } else {
        "lower bound, search budget exhausted"
    };
    writeln!(
        t,
        "{} r={}: barrier {} J ({kind}), {} cosets visited, level argument {} J",
        code.name(),
        o.levels,
        fmt_num(res.barrier / o.j),
        res.states_visited,
        fmt_num(res.argument_bound / o.j)
    )
    .unwrap();
    for (k, step) in res.witness.iter().enumerate() {
        writeln!(
            t,
            "  {:>3}  apply {}  →  {}  E/J = {}",
            k + 1,
            step.applied,
            step.error,
            fmt_num(step.energy / o.j)
        )
        .unwrap();
    }
    if let Some(end) = &res.endpoint {
        writeln!(t, "endpoint logical: {end} (weight {})", end.weight()).unwrap();
    }
    Ok((body, t))
}

fn compile(o: &Options, logical: Option<&str>, steps: usize) -> Outcome {
    let circuit: PulseCircuit;
    let mut header = json!({});
    if let Some(which) = logical {
        let code = load_code(o)?;
        let which: LogicalPauli = which.parse()?;
        circuit = compile_logical_pauli(&code, which, 0)?;
        header = json!({ "code": code.name(), "logical": format!("{which:?}") });
    } else if let Some(text) = &o.pauli {
        let p: PauliOperator = text.parse()?;
        let t = match o.t {
            Some(t) => t,
            None => return input("compile --pauli needs --t"),
        };
        circuit = compile_pauli_exponential(&p, t)?;
        let cap = dense_cap(o, DEFAULT_CIRCUIT_MAX_QUBITS)?;
        let error = if p.n_qubits() <= cap {
            let u = circuit_unitary(&circuit, cap)?;
            let dense = p.to_dense(cap)?;
            let dim = dense.nrows();
            let exact = CMat::identity(dim, dim) * Complex64::new(t.cos(), 0.0)
                + dense * Complex64::new(0.0, -t.sin());
            Some(operator_norm(&(u - exact)))
        } else {
            None
        };
        header = json!({ "pauli": p.to_string(), "t": t, "unitary_error": error });
    } else {
        let code = load_code(o)?;
        let h = hamiltonian(o, &code)?;
        let t = match o.t {
            Some(t) => t,
            None => return input("compile needs --t"),
        };
        circuit = compile_evolution(&h, t, steps)?;
        if let Value::Object(m) = &mut header {
            m.insert("code".into(), json!(code.name()));
            m.insert("levels".into(), json!(o.levels));
            m.insert("J".into(), json!(o.j));
            m.insert("t".into(), json!(t));
        }
    }
    let error = header.get("unitary_error").and_then(Value::as_f64);
    let mut body = header;
    if let Value::Object(m) = &mut body {
        m.insert("depth".into(), json!(circuit.depth()));
        m.insert("gates".into(), json!(circuit.gate_count()));
        m.insert("cnots".into(), json!(circuit.cnot_count()));
        m.insert(
            "circuit".into(),
            serde_json::to_value(&circuit).expect("circuit serializes"),
        );
    }
    let mut t = format!(
        "# depth {}, {} gates, {} CNOTs, {} step(s)\n",
        circuit.depth(),
        circuit.gate_count(),
        circuit.cnot_count(),
        circuit.steps
    );
    if let Some(e) = error {
        t.push_str(&format!("# ‖U - exp(-itP)‖ = {e:.1e}\n"));
    }
    t.push_str(&circuit.to_text());
    Ok((body, t))
}
