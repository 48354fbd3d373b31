//! The `pseudoquant` command line.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure, 3 flagged
//! discrepancies under `--strict`.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use pseudoquant_core::bks::{
    classify_pairing, flow_scheme_coefficients, position_pairing, DeformationSpec,
};
use pseudoquant_core::bohrsommerfeld::{folded_points, standard_points};
use pseudoquant_core::dynamics::{evolve, Boundary, EvolutionConfig, Grid1D, WaveState, DEFAULT_CLIP_MARGIN};
use pseudoquant_core::polarisation::{classify_monomials, detect_case, preserves, PreservationReport, Polarisation, ResidualTerm};
use pseudoquant_core::prequant::{
    commutator, commutator_rhs, pullback_quantise, quantise, quantised_commutator, theorem_commutator,
    ConnectionData, FormalOperator,
};
use pseudoquant_core::symcore::ChartRef;
use serde_json::{json, Value};

use crate::catalog;
use crate::output::{write_snapshots, Table};
use crate::parse::{parse_poly, parse_rational, ParseError};
use crate::problem::{Problem, ProblemError};
use crate::random::{structural_sweep, PolyShape};
use crate::verify::{verify_all, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "pseudoquant", version, about = "Pseudo-prequantum operators, polarisations, BKS pairings and deformed evolution")]
pub struct Cli {
    /// JSON problem file (chart, potential, observables, pullback, polarisation).
    #[arg(long, global = true, value_name = "FILE")]
    pub problem: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the result table to a CSV file.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Exit with status 3 when flagged discrepancies are reported.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Seed for random sweeps.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Print commutators with the factor -i*hbar divided out.
    #[arg(long, global = true)]
    pub formal: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Commutator of two quantised observables, or a random sweep against the closed form.
    Commutator(CommutatorArgs),
    /// Quantised operators of observables.
    Quantise(QuantiseArgs),
    /// Whether observables preserve the polarised sections.
    Preserve(PreserveArgs),
    /// BKS pairing analysis.
    #[command(subcommand)]
    Bks(BksCommand),
    /// Crank-Nicolson evolution of the deformed Schrodinger equation.
    Evolve(EvolveArgs),
    /// Integral leaf counts on the sphere.
    BsCount(BsCountArgs),
    /// Run every reference check and report pass / flagged / fail.
    VerifyPaper,
}

#[derive(Debug, Args)]
pub struct CommutatorArgs {
    /// First observable (expression or observable name).
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Second observable.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Compare composed and closed-form commutators on this many random pairs.
    #[arg(long, value_name = "PAIRS", conflicts_with_all = ["a", "b"])]
    pub random: Option<usize>,
    /// Coordinate degree bound for random observables.
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
    /// Write the normalised problem file.
    #[arg(long, value_name = "PATH")]
    pub emit_problem: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuantiseArgs {
    /// Observable (expression or name); repeatable. Defaults to all observables of the problem.
    #[arg(long, allow_hyphen_values = true)]
    pub observable: Vec<String>,
    /// Write the normalised problem file.
    #[arg(long, value_name = "PATH")]
    pub emit_problem: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PreserveArgs {
    /// Observable to test.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "grid")]
    pub observable: Option<String>,
    /// Monomial grid p1^m q1^n for m <= M, n <= N, written `MxN`.
    #[arg(long, value_name = "MxN", conflicts_with = "observable")]
    pub grid: Option<String>,
    /// Deformation f in Theta = (1 + f) theta for the grid (on p1, q1).
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub f: String,
}

#[derive(Debug, Subcommand)]
pub enum BksCommand {
    /// Term table of the kinetic pairing under a momentum deformation.
    Classify {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "1")]
        lambda: String,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, default_value_t = 2)]
        m_max: u32,
    },
    /// Kinetic coefficient under the position deformation f = beta^n.
    Pair {
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// `start:end:count` or a comma-separated list.
        #[arg(long, default_value = "0:2:21", allow_hyphen_values = true)]
        beta: String,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, value_enum, default_value_t = Scheme::Stated)]
        scheme: Scheme,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Scheme {
    Stated,
    Flow,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// Deformation order (0 gives the free equation).
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// `q_min:q_max:points`.
    #[arg(long, default_value = "-10:10:2048", allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    /// `gaussian:q0=..,p0=..,sigma=..`.
    #[arg(long, default_value = "gaussian:q0=0,p0=0,sigma=0.5", allow_hyphen_values = true)]
    pub init: String,
    /// Record a row every this many steps.
    #[arg(long, default_value_t = 10)]
    pub every: usize,
    /// Write snapshots of the recorded states (little-endian f64, re/im interleaved, one row per record).
    #[arg(long, value_name = "PATH")]
    pub snapshots: Option<PathBuf>,
    /// Absorbing layer `width,strength` instead of Dirichlet ends.
    #[arg(long, value_name = "WIDTH,STRENGTH")]
    pub absorbing: Option<String>,
    /// Clip margin for odd n, as a fraction of the domain length.
    #[arg(long, default_value_t = DEFAULT_CLIP_MARGIN)]
    pub margin: f64,
}

#[derive(Debug, Args)]
pub struct BsCountArgs {
    /// `E`, or an inclusive range `a..b`.
    #[arg(long = "E", default_value = "1..20")]
    pub e: String,
    /// List every integral leaf instead of the counts.
    #[arg(long)]
    pub points: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Core(#[from] pseudoquant_core::Error),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// What a subcommand produced.
struct Outcome {
    text: String,
    json: Value,
    table: Option<Table>,
    code: i32,
}

impl Outcome {
    fn table(table: Table, json: Value) -> Result<Self, CliError> {
        Ok(Outcome { text: table.to_csv()?, json, table: Some(table), code: 0 })
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, err) {
        Ok(o) => {
            if let Some(path) = &cli.csv {
                let Some(table) = &o.table else {
                    let _ = writeln!(err, "error: this command has no table output for --csv");
                    return 1;
                };
                if let Err(e) = table.to_csv().map_err(CliError::from).and_then(|t| Ok(std::fs::write(path, t)?)) {
                    let _ = writeln!(err, "error: {e}");
                    return 1;
                }
            }
            let written = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("JSON values serialise"))
            } else if cli.csv.is_none() || o.table.is_none() {
                write!(out, "{}", o.text).and_then(|_| if o.text.ends_with('\n') { Ok(()) } else { writeln!(out) })
            } else {
                Ok(())
            };
            if written.is_err() {
                return 1;
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(cli: &Cli, err: &mut dyn Write) -> Result<Outcome, CliError> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    match &cli.command {
        Command::Commutator(a) => run_commutator(cli, a, seed, err),
        Command::Quantise(a) => run_quantise(cli, a),
        Command::Preserve(a) => run_preserve(cli, a),
        Command::Bks(b) => run_bks(b),
        Command::Evolve(a) => run_evolve(a, err),
        Command::BsCount(a) => run_bs_count(a),
        Command::VerifyPaper => {
            let report = verify_all(seed);
            let mut table = Table::new(&["id", "anchor", "status", "details"]).meta("seed", seed);
            for c in &report.checks {
                table.push(vec![c.id.into(), c.anchor.into(), c.status.as_str().into(), c.details.clone()]);
            }
            let json = serde_json::to_value(&report).expect("report serialises");
            Ok(Outcome { text: report.to_string(), json, table: Some(table), code: report.exit_code(cli.strict) })
        }
    }
}

fn load_problem(cli: &Cli) -> Result<Problem, CliError> {
    Ok(match &cli.problem {
        Some(path) => Problem::load(path)?,
        None => Problem::standard(&catalog::default_chart()),
    })
}

fn emit(problem: &Problem, path: &Option<PathBuf>) -> Result<(), CliError> {
    if let Some(p) = path {
        std::fs::write(p, problem.to_json() + "\n")?;
    }
    Ok(())
}

fn shown(op: &FormalOperator, formal: bool, err: &mut dyn Write) -> String {
    if !formal {
        return op.to_string();
    }
    match op.strip_minus_i_hbar() {
        Some(f) => f.to_string(),
        None => {
            let _ = writeln!(err, "note: {op} is not divisible by -i*hbar; showing it unchanged");
            op.to_string()
        }
    }
}

fn run_commutator(cli: &Cli, args: &CommutatorArgs, seed: u64, err: &mut dyn Write) -> Result<Outcome, CliError> {
    let problem = load_problem(cli)?;
    emit(&problem, &args.emit_problem)?;
    if let Some(pairs) = args.random {
        if problem.pullback.is_some() {
            return Err(usage("--random compares against the closed form on the problem's own connection; drop the pullback"));
        }
        let shape = PolyShape { degree: args.degree, ..PolyShape::default() };
        let report = structural_sweep(&problem.connection, pairs, shape, seed)?;
        let mut table = Table::new(&["a", "b", "composed", "closed_form"])
            .meta("seed", seed)
            .meta("pairs", pairs)
            .meta("degree", args.degree)
            .meta("mismatches", report.mismatches.len());
        for m in &report.mismatches {
            table.push(vec![m.a.clone(), m.b.clone(), m.structural.clone(), m.closed_form.clone()]);
        }
        let mut text = format!(
            "{pairs} random pairs (seed {seed}, degree <= {}): {} mismatches\n",
            args.degree,
            report.mismatches.len()
        );
        for m in &report.mismatches {
            text.push_str(&format!("A = {}, B = {}: composed {} vs closed form {}\n", m.a, m.b, m.structural, m.closed_form));
        }
        let code = if report.mismatches.is_empty() { 0 } else { 2 };
        let json = serde_json::to_value(&report).expect("report serialises");
        return Ok(Outcome { text, json, table: Some(table), code });
    }
    let (Some(a_src), Some(b_src)) = (&args.a, &args.b) else {
        return Err(usage("commutator needs --a and --b, or --random"));
    };
    let a = problem.observable(a_src, "--a")?;
    let b = problem.observable(b_src, "--b")?;
    let (composed, closed, binding) = match &problem.pullback {
        None => (quantised_commutator(&a, &b, &problem.connection)?, commutator_rhs(&a, &b, &problem.connection)?, true),
        Some(s) => {
            let composed = commutator(&pullback_quantise(&a, s)?, &pullback_quantise(&b, s)?)?;
            (composed, theorem_commutator(&a, &b, s)?, s.map().target().n() == 1)
        }
    };
    let agrees = composed == closed;
    let value = shown(&composed, cli.formal, err);
    let closed_text = shown(&closed, cli.formal, err);
    let mut text = value.clone();
    if problem.pullback.is_some() {
        text.push_str(&format!("\nclosed form: {closed_text}"));
    }
    if !agrees {
        text.push_str(&format!("\nclosed form differs: {closed_text}"));
    }
    let mut table = Table::new(&["a", "b", "commutator", "closed_form", "agrees"]).meta("formal", cli.formal);
    table.push(vec![a.to_string(), b.to_string(), value.clone(), closed_text.clone(), agrees.to_string()]);
    let json = json!({
        "a": a.to_string(),
        "b": b.to_string(),
        "commutator": value,
        "closed_form": closed_text,
        "agrees": agrees,
        "formal": cli.formal,
        "pullback": problem.pullback.is_some(),
    });
    let code = if !agrees && binding { 2 } else { 0 };
    Ok(Outcome { text, json, table: Some(table), code })
}

fn run_quantise(cli: &Cli, args: &QuantiseArgs) -> Result<Outcome, CliError> {
    let problem = load_problem(cli)?;
    emit(&problem, &args.emit_problem)?;
    let mut items = Vec::new();
    if args.observable.is_empty() {
        if problem.observables.is_empty() {
            return Err(usage("quantise needs --observable or a problem with observables"));
        }
        items.extend(problem.observables.iter().map(|(k, v)| (k.clone(), v.clone())));
    } else {
        for (k, src) in args.observable.iter().enumerate() {
            items.push((src.clone(), problem.observable(src, &format!("--observable[{k}]"))?));
        }
    }
    let mut table = Table::new(&["name", "observable", "operator"]);
    let mut json = serde_json::Map::new();
    let mut lines = Vec::new();
    for (name, a) in &items {
        let op = match &problem.pullback {
            None => quantise(a, &problem.connection)?,
            Some(s) => pullback_quantise(a, s)?,
        };
        table.push(vec![name.clone(), a.to_string(), op.to_string()]);
        json.insert(name.clone(), json!({ "observable": a.to_string(), "operator": op.to_string() }));
        lines.push(if items.len() == 1 { op.to_string() } else { format!("{name}: {op}") });
    }
    Ok(Outcome { text: lines.join("\n"), json: Value::Object(json), table: Some(table), code: 0 })
}

fn residual_text(terms: &[ResidualTerm], chart: &ChartRef) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|t| {
            let order: u32 = t.index.iter().sum();
            let on = chart.label(pseudoquant_core::symcore::Var::Beta(t.direction));
            format!("L[{on}] c{order}{:?} = {}", t.index, t.coeff)
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn report_json(r: &PreservationReport, chart: &ChartRef) -> Value {
    json!({
        "observable": r.observable.to_string(),
        "verdict": r.verdict.as_str(),
        "case": r.case.as_str(),
        "residual": residual_text(&r.residual, chart),
        "strict_verdict": r.strict_verdict.as_str(),
        "strict_residual": residual_text(&r.strict_residual, chart),
    })
}

fn run_preserve(cli: &Cli, args: &PreserveArgs) -> Result<Outcome, CliError> {
    if let Some(grid) = &args.grid {
        let (m, n) = grid
            .split_once(['x', 'X'])
            .and_then(|(m, n)| Some((m.trim().parse::<u32>().ok()?, n.trim().parse::<u32>().ok()?)))
            .ok_or_else(|| usage(format!("--grid expects MxN, got `{grid}`")))?;
        let chart = catalog::default_chart();
        let f = parse_poly(&chart, &args.f)?;
        let c = ConnectionData::scaled(&f);
        let case = detect_case(&c, &Polarisation::vertical(&c));
        let entries = classify_monomials(m, n, &f, case)?;
        let mut table = Table::new(&["m", "n", "observable", "verdict", "residual", "strict_verdict", "strict_residual"])
            .meta("f", &f)
            .meta("case", case.as_str());
        let mut rows = Vec::new();
        for e in &entries {
            let r = &e.report;
            table.push(vec![
                e.m.to_string(),
                e.n.to_string(),
                r.observable.to_string(),
                r.verdict.as_str().into(),
                residual_text(&r.residual, &chart),
                r.strict_verdict.as_str().into(),
                residual_text(&r.strict_residual, &chart),
            ]);
            let mut j = report_json(r, &chart);
            j["m"] = json!(e.m);
            j["n"] = json!(e.n);
            rows.push(j);
        }
        return Outcome::table(table, json!({ "f": f.to_string(), "case": case.as_str(), "grid": rows }));
    }
    let problem = load_problem(cli)?;
    if problem.pullback.is_some() {
        return Err(usage("preserve works on the problem's own chart; drop the pullback"));
    }
    let src = args.observable.as_deref().expect("required unless --grid");
    let a = problem.observable(src, "--observable")?;
    let pol = problem.polarisation_or_vertical();
    if !pol.is_adapted() {
        return Err(usage("the potential does not annihilate the polarisation directions (not an adapted gauge)"));
    }
    let r = preserves(&a, &problem.connection, &pol)?;
    let chart = problem.chart.clone();
    let text = format!(
        "{}\ncase: {}\nresidual: {}\nstrict: {} (residual {})",
        r.verdict.as_str(),
        r.case.as_str(),
        residual_text(&r.residual, &chart),
        r.strict_verdict.as_str(),
        residual_text(&r.strict_residual, &chart)
    );
    let mut table = Table::new(&["observable", "verdict", "case", "residual", "strict_verdict", "strict_residual"]);
    table.push(vec![
        a.to_string(),
        r.verdict.as_str().into(),
        r.case.as_str().into(),
        residual_text(&r.residual, &chart),
        r.strict_verdict.as_str().into(),
        residual_text(&r.strict_residual, &chart),
    ]);
    Ok(Outcome { text, json: report_json(&r, &chart), table: Some(table), code: 0 })
}

fn to_rational64(src: &str) -> Result<Rational64, CliError> {
    let r = parse_rational(src)?;
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Rational64::new(n, d)),
        _ => Err(usage(format!("`{src}` is out of range"))),
    }
}

fn complex_pair(z: Complex64) -> [String; 2] {
    [z.re.to_string(), z.im.to_string()]
}

fn beta_samples(src: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = src.split(':').collect();
    let bad = || usage(format!("--beta expects start:end:count or a comma list, got `{src}`"));
    if parts.len() == 3 {
        let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let k: usize = parts[2].trim().parse().map_err(|_| bad())?;
        return match k {
            0 => Err(bad()),
            1 => Ok(vec![a]),
            _ => Ok((0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect()),
        };
    }
    src.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect()
}

fn run_bks(cmd: &BksCommand) -> Result<Outcome, CliError> {
    match cmd {
        BksCommand::Classify { n, lambda, hbar, m_max } => {
            let d = DeformationSpec::momentum(*n, to_rational64(lambda)?, *hbar)?;
            let c = classify_pairing(&d, *m_max)?;
            let mut table = Table::new(&[
                "n",
                "m",
                "j",
                "exponent",
                "j_critical",
                "classification",
                "derived_exponent",
                "derived_classification",
                "moment_re",
                "moment_im",
            ])
            .meta("lambda", d.lambda)
            .meta("hbar", hbar)
            .meta("converges", c.converges);
            let mut rows = Vec::new();
            for t in &c.terms {
                let [re, im] = t.mu_moment.map(complex_pair).unwrap_or_else(|| [String::new(), String::new()]);
                table.push(vec![
                    t.n.to_string(),
                    t.m.to_string(),
                    t.j.to_string(),
                    t.exponent.to_string(),
                    t.j_critical.to_string(),
                    t.classification.as_str().into(),
                    t.derived_exponent.to_string(),
                    t.derived_classification.as_str().into(),
                    re.clone(),
                    im.clone(),
                ]);
                rows.push(json!({
                    "m": t.m, "j": t.j,
                    "exponent": t.exponent.to_string(),
                    "j_critical": t.j_critical.to_string(),
                    "j_critical_is_integer": t.j_critical_is_integer,
                    "classification": t.classification.as_str(),
                    "derived_exponent": t.derived_exponent.to_string(),
                    "derived_classification": t.derived_classification.as_str(),
                    "moment": t.mu_moment.map(|z| [z.re, z.im]),
                }));
            }
            let json = json!({ "n": n, "lambda": d.lambda.to_string(), "hbar": hbar, "converges": c.converges, "terms": rows });
            Outcome::table(table, json)
        }
        BksCommand::Pair { n, beta, hbar, scheme } => {
            let betas = beta_samples(beta)?;
            match scheme {
                Scheme::Stated => {
                    let r = position_pairing(*n, &betas, *hbar)?;
                    let mut table = Table::new(&[
                        "beta", "raw_re", "raw_im", "coefficient_re", "coefficient_im", "scaled_re", "scaled_im",
                    ])
                    .meta("n", n)
                    .meta("hbar", hbar)
                    .meta("scheme", "stated")
                    .meta("normalization", r.normalization)
                    .meta("converges", r.converges);
                    let mut rows = Vec::new();
                    for s in &r.samples {
                        let scaled = s.coefficient * (1.0 + 2.0 * s.beta.powi(*n as i32)).powf(1.5);
                        let mut row = vec![s.beta.to_string()];
                        row.extend(complex_pair(s.raw));
                        row.extend(complex_pair(s.coefficient));
                        row.extend(complex_pair(scaled));
                        table.push(row);
                        rows.push(json!({
                            "beta": s.beta,
                            "raw": [s.raw.re, s.raw.im],
                            "coefficient": [s.coefficient.re, s.coefficient.im],
                            "scaled": [scaled.re, scaled.im],
                        }));
                    }
                    let terms: Vec<Value> = r
                        .terms
                        .iter()
                        .map(|t| json!({
                            "derivative_order": t.lambda,
                            "factors": t.factors,
                            "mu_power": t.mu_power,
                            "tau_power": t.tau_power.to_string(),
                            "status": t.status.as_str(),
                        }))
                        .collect();
                    let json = json!({
                        "n": n, "hbar": hbar, "scheme": "stated", "converges": r.converges,
                        "normalization": [r.normalization.re, r.normalization.im],
                        "samples": rows, "terms": terms,
                    });
                    Outcome::table(table, json)
                }
                Scheme::Flow => {
                    let mut table = Table::new(&["beta", "f0_re", "f0_im", "f1_re", "f1_im", "f2_re", "f2_im"])
                        .meta("n", n)
                        .meta("hbar", hbar)
                        .meta("scheme", "flow");
                    let mut rows = Vec::new();
                    for &b in &betas {
                        let c = flow_scheme_coefficients(*n, b, *hbar)?;
                        let mut row = vec![b.to_string()];
                        row.extend(complex_pair(c.f0));
                        row.extend(complex_pair(c.f1));
                        row.extend(complex_pair(c.f2));
                        table.push(row);
                        rows.push(json!({
                            "beta": b,
                            "f0": [c.f0.re, c.f0.im],
                            "f1": [c.f1.re, c.f1.im],
                            "f2": [c.f2.re, c.f2.im],
                        }));
                    }
                    Outcome::table(table, json!({ "n": n, "hbar": hbar, "scheme": "flow", "samples": rows }))
                }
            }
        }
    }
}

fn parse_grid(src: &str) -> Result<(f64, f64, usize), CliError> {
    let bad = || usage(format!("--grid expects q_min:q_max:points, got `{src}`"));
    let parts: Vec<&str> = src.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok((
        parts[0].trim().parse().map_err(|_| bad())?,
        parts[1].trim().parse().map_err(|_| bad())?,
        parts[2].trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_init(src: &str) -> Result<(f64, f64, f64), CliError> {
    let bad = |why: &str| usage(format!("--init `{src}`: {why}"));
    let rest = src.strip_prefix("gaussian").ok_or_else(|| bad("only `gaussian:q0=..,p0=..,sigma=..` is supported"))?;
    let (mut q0, mut p0, mut sigma) = (0.0, 0.0, 0.5);
    let rest = rest.strip_prefix(':').unwrap_or(rest);
    for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        let v: f64 = v.trim().parse().map_err(|_| bad("bad number"))?;
        match k.trim() {
            "q0" => q0 = v,
            "p0" => p0 = v,
            "sigma" => sigma = v,
            other => return Err(bad(&format!("unknown key `{other}`"))),
        }
    }
    Ok((q0, p0, sigma))
}

fn run_evolve(a: &EvolveArgs, err: &mut dyn Write) -> Result<Outcome, CliError> {
    let (q_min, q_max, points) = parse_grid(&a.grid)?;
    let (q0, p0, sigma) = parse_init(&a.init)?;
    let boundary = match &a.absorbing {
        None => Boundary::DirichletZero,
        Some(s) => {
            let (w, eta) = s
                .split_once(',')
                .and_then(|(w, e)| Some((w.trim().parse::<usize>().ok()?, e.trim().parse::<f64>().ok()?)))
                .ok_or_else(|| usage(format!("--absorbing expects width,strength, got `{s}`")))?;
            Boundary::Absorbing { width: w, strength: eta }
        }
    };
    let (grid, clipped) = Grid1D::for_deformation(q_min, q_max, points, a.n, a.margin)?;
    if let Some(q) = clipped {
        let _ = writeln!(err, "note: domain clipped to q >= {q} so that 1 + 2q^{} > 0", a.n);
    }
    let cfg = EvolutionConfig::new(a.n, a.hbar, a.dt, a.steps)?.with_boundary(boundary);
    let initial = WaveState::gaussian(&grid, q0, p0, sigma, a.hbar)?;
    let traj = evolve(&initial, &cfg, &grid, a.every, a.snapshots.is_some())?;
    if traj.boundary_warning {
        let _ = writeln!(
            err,
            "warning: packet mass near the boundary exceeded {} (relative); enlarge the grid",
            pseudoquant_core::dynamics::BOUNDARY_MASS_WARNING
        );
    }
    if let Some(path) = &a.snapshots {
        write_snapshots(path, &traj.snapshots)?;
    }
    let boundary_text = match boundary {
        Boundary::DirichletZero => "dirichlet".to_string(),
        Boundary::Absorbing { width, strength } => format!("absorbing:{width},{strength}"),
    };
    let mut table = Table::new(&["t", "weighted_norm", "l2_norm", "mean_q", "var_q", "boundary_mass"])
        .meta("n", a.n)
        .meta("hbar", a.hbar)
        .meta("grid", format!("{}:{}:{}", grid.q_min(), grid.q_max(), grid.points()))
        .meta("dt", a.dt)
        .meta("steps", a.steps)
        .meta("init", format!("gaussian:q0={q0},p0={p0},sigma={sigma}"))
        .meta("boundary", &boundary_text)
        .meta("every", a.every)
        .meta("boundary_warning", traj.boundary_warning);
    let mut rows = Vec::new();
    for d in &traj.rows {
        table.push(vec![
            d.time.to_string(),
            d.weighted_norm.to_string(),
            d.l2_norm.to_string(),
            d.mean_q.to_string(),
            d.var_q.to_string(),
            d.boundary_mass.to_string(),
        ]);
        rows.push(json!({
            "t": d.time, "weighted_norm": d.weighted_norm, "l2_norm": d.l2_norm,
            "mean_q": d.mean_q, "var_q": d.var_q, "boundary_mass": d.boundary_mass,
        }));
    }
    let json = json!({
        "parameters": {
            "n": a.n, "hbar": a.hbar, "q_min": grid.q_min(), "q_max": grid.q_max(), "points": grid.points(),
            "dt": a.dt, "steps": a.steps, "q0": q0, "p0": p0, "sigma": sigma, "boundary": boundary_text, "every": a.every,
        },
        "boundary_warning": traj.boundary_warning,
        "rows": rows,
    });
    Outcome::table(table, json)
}

fn parse_range(src: &str) -> Result<(u32, u32), CliError> {
    let bad = || usage(format!("--E expects a positive integer or a range a..b, got `{src}`"));
    let (a, b) = match src.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim_start_matches('=').trim().parse().map_err(|_| bad())?),
        None => {
            let v = src.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if a == 0 || b < a {
        return Err(bad());
    }
    Ok((a, b))
}

fn run_bs_count(a: &BsCountArgs) -> Result<Outcome, CliError> {
    let (lo, hi) = parse_range(&a.e)?;
    if a.points {
        let mut table = Table::new(&["E", "lattice", "l", "l_squared", "value"]);
        let mut rows = Vec::new();
        for e in lo..=hi {
            for l in standard_points(e) {
                table.push(vec![e.to_string(), "standard".into(), l.to_string(), (l * l).to_string(), (l as f64).to_string()]);
                rows.push(json!({ "E": e, "lattice": "standard", "l": l.to_string(), "value": l as f64 }));
            }
            for p in folded_points(e).folded_points {
                table.push(vec![e.to_string(), "folded".into(), p.to_string(), p.square().to_string(), p.value().to_string()]);
                rows.push(json!({ "E": e, "lattice": "folded", "l": p.to_string(), "value": p.value() }));
            }
        }
        return Outcome::table(table, Value::Array(rows));
    }
    let mut table = Table::new(&["E", "standard_dim", "folded_dim"]);
    let mut rows = Vec::new();
    for e in lo..=hi {
        let r = folded_points(e);
        table.push(vec![e.to_string(), r.standard_dim.to_string(), r.folded_dim.to_string()]);
        rows.push(json!({ "E": e, "standard_dim": r.standard_dim, "folded_dim": r.folded_dim }));
    }
    Outcome::table(table, Value::Array(rows))
}

/// Runs against the process arguments and standard streams.
pub fn main_with_env() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
