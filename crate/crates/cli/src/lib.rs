//! Argument parsing and dispatch for the `qgraph` binary.
//!
//! Every invocation produces one JSON document on standard output. Exit codes:
//! `0` when all requested checks pass, `1` when a check fails, `2` when the
//! input is malformed.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use qgraph_core::graph::RegularityResult;
use qgraph_core::io::{self, GraphDto, SetDto};
use qgraph_core::qaut::{commutator_norm, sample_so3_points, torus_automorphism};
use qgraph_core::witness::{witness_passes, WITNESS_CONDITIONS};
use qgraph_core::*;
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

const CLASSIFY_DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "qgraph", version, about = "Checks for quantum sets, quantum graphs and quantum isomorphisms")]
pub struct Cli {
    /// Absolute per-entry tolerance for every check [default: 1e-9; classify-m2: 1e-8]
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for sampled sweeps
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Human-readable summary on standard error
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structure identities of a quantum set
    SetCheck {
        #[arg(long)]
        set: PathBuf,
    },
    /// Axiom flags and regularity of a quantum graph
    GraphCheck(GraphInput),
    /// Eigenvalues of the adjacency matrix
    Spectrum(GraphInput),
    /// Reflexive complement of a real reflexive graph, emitted as a graph document
    Complement(GraphInput),
    /// Search for undirected reflexive graphs on M2
    #[command(name = "classify-m2")]
    ClassifyM2 {
        /// Use the trace
        #[arg(long, conflicts_with = "powers", required_unless_present = "powers")]
        tracial: bool,
        /// Use the Powers state with parameter q in (0, 1)
        #[arg(long)]
        powers: Option<f64>,
        /// Smallest box edge of the search
        #[arg(long, default_value_t = 0.05)]
        grid: f64,
    },
    /// Verify a quantum isomorphism witness
    IsoVerify(WitnessInput),
    /// Alias group: `iso verify`
    Iso {
        #[command(subcommand)]
        command: IsoCommand,
    },
    /// Relation residuals of a built-in bigalois representation
    Bigalois {
        #[arg(long, value_parser = ["pi", "rho"])]
        rep: String,
        #[arg(long)]
        degree: u8,
    },
    /// SO(3) point as an automorphism of the tracial graph of degree d
    QautSo3(So3Args),
    /// Torus element as an automorphism of the nontracial graphs
    QautTorus(TorusArgs),
    /// Podles relation residuals of explicit generators
    QautSoq3(Soq3Args),
    /// Alias group: `qaut so3|torus|soq3`
    Qaut {
        #[command(subcommand)]
        command: QautCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum IsoCommand {
    Verify(WitnessInput),
}

#[derive(Debug, Subcommand)]
pub enum QautCommand {
    So3(So3Args),
    Torus(TorusArgs),
    Soq3(Soq3Args),
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Graph document `{"set": ..., "adjacency": ...}`
    #[arg(long, conflicts_with_all = ["set", "matrix"], required_unless_present_all = ["set", "matrix"])]
    pub graph: Option<PathBuf>,
    /// Quantum set document, used with --matrix
    #[arg(long, requires = "matrix")]
    pub set: Option<PathBuf>,
    /// Adjacency matrix document, used with --set
    #[arg(long, requires = "set")]
    pub matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WitnessInput {
    #[arg(long)]
    pub witness: PathBuf,
}

#[derive(Debug, Args)]
pub struct So3Args {
    /// `re,im`
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, required_unless_present = "sample")]
    pub s: Option<Complex64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, required_unless_present = "sample")]
    pub t: Option<Complex64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, required_unless_present = "sample")]
    pub r: Option<Complex64>,
    /// Degree of the tracial graph
    #[arg(long)]
    pub graph: u8,
    /// Check this many seeded points instead of a single one
    #[arg(long, conflicts_with_all = ["s", "t", "r"])]
    pub sample: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TorusArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub z: Complex64,
    #[arg(long)]
    pub q: f64,
}

#[derive(Debug, Args)]
pub struct Soq3Args {
    /// Generators document `{"q": ..., "a": ..., "g": ..., "l": ...}`
    #[arg(long)]
    pub file: PathBuf,
}

/// Parses `re,im` or a bare real number.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| x.parse::<f64>().map_err(|e| format!("bad number {x:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re,im, got {s:?}")),
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub json: Value,
    pub summary: String,
    pub verbose: bool,
}

impl Outcome {
    fn checked(passed: bool, json: Value, summary: String) -> Self {
        Self { code: if passed { EXIT_PASS } else { EXIT_FAIL }, json, summary, verbose: false }
    }

    fn input_error(err: &anyhow::Error) -> Self {
        let msg = format!("{err:#}");
        Self { code: EXIT_INPUT, json: json!({ "error": msg }), summary: format!("malformed input: {msg}"), verbose: false }
    }
}

#[derive(Serialize)]
struct ReportDoc<'a, E: Serialize> {
    passed: bool,
    #[serde(flatten)]
    report: &'a AxiomReport,
    #[serde(flatten)]
    extra: E,
}

fn report_outcome<E: Serialize>(passed: bool, report: &AxiomReport, extra: E, header: &str) -> Outcome {
    let doc = ReportDoc { passed, report, extra };
    let summary = format!("{header}: {}\n{report}", if passed { "pass" } else { "FAIL" });
    Outcome::checked(passed, serde_json::to_value(doc).expect("report serializes"), summary)
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_graph(input: &GraphInput) -> anyhow::Result<QuantumGraph> {
    match (&input.graph, &input.set, &input.matrix) {
        (Some(g), _, _) => io::parse_graph(&read(g)?).with_context(|| format!("in {}", g.display())),
        (None, Some(s), Some(m)) => {
            let set = io::parse_set(&read(s)?).with_context(|| format!("in {}", s.display()))?;
            let a: ComplexMatrix = io::from_json(&read(m)?).with_context(|| format!("in {}", m.display()))?;
            Ok(QuantumGraph::new(set, a)?)
        }
        _ => bail!("either --graph or both --set and --matrix are required"),
    }
}

fn complex_pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: EXIT_PASS, json: json!({ "help": e.to_string() }), summary: e.to_string(), verbose: false };
            }
            Outcome::input_error(&anyhow!(e.to_string().trim().to_owned()))
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    let result = match &cli.command {
        Command::SetCheck { set } => set_check(set, tol),
        Command::GraphCheck(g) => graph_check(g, tol),
        Command::Spectrum(g) => spectrum_cmd(g),
        Command::Complement(g) => complement(g, tol),
        Command::ClassifyM2 { tracial, powers, grid } => classify(*tracial, *powers, *grid, cli.tol.unwrap_or(CLASSIFY_DEFAULT_TOL)),
        Command::IsoVerify(w) | Command::Iso { command: IsoCommand::Verify(w) } => iso_verify(w, tol),
        Command::Bigalois { rep, degree } => bigalois(rep, *degree, tol),
        Command::QautSo3(a) | Command::Qaut { command: QautCommand::So3(a) } => qaut_so3(a, tol, cli.seed),
        Command::QautTorus(a) | Command::Qaut { command: QautCommand::Torus(a) } => qaut_torus(a, tol),
        Command::QautSoq3(a) | Command::Qaut { command: QautCommand::Soq3(a) } => qaut_soq3(a, tol),
    };
    let mut out = result.unwrap_or_else(|e| Outcome::input_error(&e));
    out.verbose = cli.verbose;
    out
}

fn set_check(path: &Path, tol: f64) -> anyhow::Result<Outcome> {
    let set = io::parse_set(&read(path)?)?;
    let report = verify_set_axioms(&set, tol);
    let passed = report.all_flags();
    let extra = json!({ "dim": set.dim(), "delta_sq": set.delta_sq(), "tracial": set.is_tracial(tol) });
    Ok(report_outcome(passed, &report, extra, "set-check"))
}

#[derive(Serialize)]
struct GraphExtra {
    regularity: RegularityResult,
}

fn graph_check(input: &GraphInput, tol: f64) -> anyhow::Result<Outcome> {
    let g = load_graph(input)?;
    let report = graph_axiom_report(&g, tol);
    let passed = report.flag("schur_idempotent");
    Ok(report_outcome(passed, &report, GraphExtra { regularity: regularity(&g, tol) }, "graph-check"))
}

fn spectrum_cmd(input: &GraphInput) -> anyhow::Result<Outcome> {
    let g = load_graph(input)?;
    let s = spectrum(&g)?;
    let summary = s.iter().map(|z| format!("{:.6} {:+.6}i", z.re, z.im)).collect::<Vec<_>>().join("\n");
    Ok(Outcome::checked(true, json!({ "spectrum": complex_pairs(&s) }), summary))
}

fn complement(input: &GraphInput, tol: f64) -> anyhow::Result<Outcome> {
    let g = load_graph(input)?;
    match reflexive_complement(&g, tol) {
        Ok(c) => {
            let doc = serde_json::to_value(GraphDto::from_graph(&c))?;
            Ok(Outcome::checked(true, doc, format!("complement:\n{:?}", c.adjacency)))
        }
        Err(e @ GraphError::NotRealReflexive { .. }) => {
            let msg = e.to_string();
            Ok(Outcome::checked(false, json!({ "error": msg }), format!("complement: FAIL {msg}")))
        }
        Err(e) => Err(e.into()),
    }
}

fn classify(tracial: bool, powers: Option<f64>, grid: f64, tol: f64) -> anyhow::Result<Outcome> {
    let set = match (tracial, powers) {
        (true, _) => plancherel_set(&[2])?,
        (false, Some(q)) if q > 0.0 && q < 1.0 => powers_m2(q)?,
        (false, Some(q)) => bail!("--powers {q} is not in (0, 1)"),
        (false, None) => bail!("one of --tracial or --powers is required"),
    };
    let records = solve_m2(&set, &GridSpec::with_step(grid), tol)?;
    let passed = !records.is_empty() && records.iter().all(|r| r.label.is_some());
    let summary = records
        .iter()
        .map(|r| {
            let label = r.label.map_or("unmatched".to_owned(), |l| format!("label {l}"));
            let spec: Vec<String> = r.spectrum.iter().map(|[re, _]| format!("{re:.6}")).collect();
            format!("{label}: spectrum [{}], regular {}", spec.join(", "), r.regular)
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Outcome::checked(passed, serde_json::to_value(&records)?, format!("classify-m2: {} records\n{summary}", records.len())))
}

fn iso_verify(input: &WitnessInput, tol: f64) -> anyhow::Result<Outcome> {
    let w = io::parse_witness(&read(&input.witness)?).with_context(|| format!("in {}", input.witness.display()))?;
    let report = verify_witness(&w, tol)?;
    let passed = witness_passes(&report);
    Ok(report_outcome(passed, &report, json!({ "conditions": WITNESS_CONDITIONS }), "iso-verify"))
}

fn residual_outcome(header: &str, residuals: BTreeMap<String, f64>, tol: f64, extra: Value) -> Outcome {
    let failing: Vec<String> =
        residuals.iter().filter(|(_, &v)| !(v < tol)).map(|(k, v)| format!("FAIL {k:<28} residual {v:.3e}")).collect();
    let passed = failing.is_empty();
    let mut doc = json!({ "passed": passed, "tol": tol, "residuals": residuals });
    if let (Value::Object(d), Value::Object(e)) = (&mut doc, extra) {
        d.extend(e);
    }
    let status = if passed { "pass".to_owned() } else { format!("FAIL\n{}", failing.join("\n")) };
    Outcome::checked(passed, doc, format!("{header}: {status}"))
}

fn bigalois(rep: &str, degree: u8, tol: f64) -> anyhow::Result<Outcome> {
    let tuple = builtin_representation(rep)?;
    let residuals = bigalois_relation_residuals(&tuple, degree)?;
    Ok(residual_outcome("bigalois", residuals, tol, json!({ "rep": rep, "degree": degree, "k": tuple.k() })))
}

fn qaut_so3(args: &So3Args, tol: f64, seed: u64) -> anyhow::Result<Outcome> {
    let graph = tracial_canonical(args.graph.into())?;
    if let Some(n) = args.sample {
        let mut points = Vec::with_capacity(n);
        let mut all = true;
        for p in sample_so3_points(seed, n) {
            let u = so3_point_matrix(&p, tol)?;
            let report = verify_classical_automorphism(&u, &graph, tol)?;
            let passed = witness_passes(&report);
            all &= passed;
            points.push(json!({
                "s": [p.s.re, p.s.im], "t": [p.t.re, p.t.im], "r": [p.r.re, p.r.im],
                "passed": passed, "commutator_norm": commutator_norm(&u, &graph),
            }));
        }
        let failed = points.iter().filter(|p| p["passed"] == json!(false)).count();
        let doc = json!({ "passed": all, "seed": seed, "graph": args.graph, "points": points });
        return Ok(Outcome::checked(all, doc, format!("qaut so3: {failed}/{n} sampled points fail")));
    }
    let (s, t, r) = match (args.s, args.t, args.r) {
        (Some(s), Some(t), Some(r)) => (s, t, r),
        _ => bail!("--s, --t and --r are required without --sample"),
    };
    let point = SO3Point::new(s, t, r, tol)?;
    let u = so3_point_matrix(&point, tol)?;
    let report = verify_classical_automorphism(&u, &graph, tol)?;
    let passed = witness_passes(&report);
    let extra = json!({
        "graph": args.graph,
        "matrix": u,
        "commutator_norm": commutator_norm(&u, &graph),
    });
    Ok(report_outcome(passed, &report, extra, "qaut so3"))
}

fn qaut_torus(args: &TorusArgs, tol: f64) -> anyhow::Result<Outcome> {
    if !(args.q > 0.0 && args.q < 1.0) {
        bail!("--q {} is not in (0, 1)", args.q);
    }
    let report = torus_automorphism(args.z, args.q, tol)?;
    let passed = report.all_flags();
    Ok(report_outcome(passed, &report, json!({ "z": [args.z.re, args.z.im], "q": args.q }), "qaut torus"))
}

fn qaut_soq3(args: &Soq3Args, tol: f64) -> anyhow::Result<Outcome> {
    let gens = io::parse_generators(&read(&args.file)?).with_context(|| format!("in {}", args.file.display()))?;
    let residuals = soq3_relation_residuals(&gens);
    Ok(residual_outcome("qaut soq3", residuals, tol, json!({ "q": gens.q, "k": gens.a.rows() })))
}

/// Serializes a quantum set document, for scripting and tests.
pub fn set_document(set: &QuantumSet) -> String {
    io::to_json(&SetDto::from_set(set))
}
