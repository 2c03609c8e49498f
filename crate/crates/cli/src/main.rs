//! `pcw`: graph-cover pseudocodewords of binary and ternary linear codes.
//!
//! Exit codes: 0 success, 1 domain failure (not a pseudocodeword, invalid
//! cover, violated check), 2 input error, 3 budget exceeded.

mod load;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use pcw_core::cone::{enumerate_cone, pseudocodeword_verdict, CriticalType};
use pcw_core::field::{Field, FieldMatrix, RationalMatrix};
use pcw_core::lift::{approximate_cone_point, lift_full, lift_single_row, StepKind};
use pcw_core::oracle::{
    check_lemma_battery, check_necessity, check_sufficiency, enumerate_pseudocodeword_matrices, random_cone_point,
    random_matrix, EnumerationOptions, Report, DEFAULT_BUDGET,
};
use pcw_core::tanner::{pseudocodeword_matrix, validate_cover};
use pcw_core::{io, LiftResult, PairSelection, PseudoMatrix, TraceStep};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn within(self, source: &str) -> CliError {
        match self {
            CliError::Input(m) => CliError::Input(format!("{source}: {m}")),
            CliError::Domain(m) => CliError::Domain(format!("{source}: {m}")),
            CliError::Budget(m) => CliError::Budget(format!("{source}: {m}")),
        }
    }
}

impl From<pcw_core::Error> for CliError {
    fn from(e: pcw_core::Error) -> Self {
        use pcw_core::Error as E;
        let msg = e.to_string();
        match e {
            E::BudgetExceeded { .. } | E::BoundExceeded { .. } => CliError::Budget(msg),
            E::NotInCone { .. } | E::SyndromeCondition { .. } | E::LiftFailure { .. } | E::InvalidCover(_) => {
                CliError::Domain(msg)
            }
            _ => CliError::Input(msg),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(name = "pcw", version, about = "Graph-cover pseudocodewords of binary and ternary codes")]
struct Cli {
    /// Seed for randomly generated inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of evaluations for exhaustive searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the fundamental cone inequalities of a parity-check matrix.
    GenCone {
        /// Matrix file or fixture name.
        matrix: String,
    },
    /// Decide whether a matrix is a graph-cover pseudocodeword matrix.
    Check { matrix: String, pseudomatrix: String },
    /// Build a graph cover realizing a pseudocodeword matrix.
    Lift(LiftArgs),
    /// Validate a cover file and its parity checks.
    Verify {
        cover: String,
        /// Also write a Graphviz rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Enumerate all pseudocodeword matrices of degree-M covers.
    Enumerate {
        matrix: String,
        #[arg(long)]
        degree: usize,
        /// Visit every cover instead of one per copy relabeling of a spanning forest.
        #[arg(long)]
        no_canonical: bool,
    },
    /// Check the characterization exhaustively at small scale.
    Theorems(TheoremArgs),
    /// Scale a rational cone point to an integer pseudocodeword matrix.
    Approx {
        matrix: String,
        /// Rational matrix; a seeded random cone point when omitted.
        pseudomatrix: Option<String>,
        #[arg(long, default_value = "1/1000000")]
        epsilon: String,
    },
}

#[derive(Args)]
struct LiftArgs {
    matrix: String,
    pseudomatrix: String,
    /// Print the reduction steps with matrix snapshots.
    #[arg(long)]
    trace: bool,
    /// Write the cover (with trace) as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a Graphviz rendering of the cover.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Force the next pair reduction to use columns K (symbol 1) and L
    /// (symbol 2), 1-based; repeatable. Single {0,1} rows only.
    #[arg(long = "pair", value_name = "K,L", value_parser = parse_pair)]
    pairs: Vec<(usize, usize)>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TheoremSelect {
    /// Every pseudocodeword matrix of degree up to M satisfies the conditions.
    #[arg(long, value_name = "M")]
    necessity: Option<usize>,
    /// Every matrix satisfying the conditions with entries up to B lifts.
    #[arg(long, value_name = "B")]
    sufficiency: Option<u64>,
    /// Structural checks over all points with entries up to B.
    #[arg(long, value_name = "B")]
    lemmas: Option<u64>,
}

#[derive(Args)]
struct TheoremArgs {
    matrix: String,
    #[command(flatten)]
    select: TheoremSelect,
    #[arg(long)]
    no_canonical: bool,
    /// Add this many seeded random single rows to the lemma pool.
    #[arg(long, default_value_t = 0)]
    random_rows: usize,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (k, l) = s.split_once(',').ok_or("expected K,L")?;
    let k: usize = k.trim().parse().map_err(|_| format!("bad column {k:?}"))?;
    let l: usize = l.trim().parse().map_err(|_| format!("bad column {l:?}"))?;
    if k == 0 || l == 0 {
        return Err("columns are 1-based".into());
    }
    Ok((k - 1, l - 1))
}

fn parse_rational(s: &str) -> Result<Rational64, CliError> {
    let bad = || CliError::Input(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(n, d))
        }
        None => s.trim().parse().map(Rational64::from_integer).map_err(|_| bad()),
    }
}

fn check_shape(h: &FieldMatrix, z: &RationalMatrix) -> Result<(), CliError> {
    let rows = h.field().q() as usize - 1;
    if z.rows() != rows || z.cols() != h.cols() {
        return Err(CliError::Input(format!(
            "pseudocodeword matrix is {}x{}, expected {rows}x{} for a length-{} code over {}",
            z.rows(),
            z.cols(),
            h.cols(),
            h.cols(),
            h.field()
        )));
    }
    Ok(())
}

fn integer_matrix(h: &FieldMatrix, input: &str) -> Result<PseudoMatrix, CliError> {
    let z = load::pseudomatrix(input)?;
    check_shape(h, &z)?;
    PseudoMatrix::from_rational(h.field(), &z).map_err(|e| CliError::from(e).within(input))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn gen_cone(cli: &Cli, matrix: &str) -> Result<(), CliError> {
    let h = load::matrix(matrix)?;
    let system = enumerate_cone(&h);
    match cli.format {
        Format::Json => print_json(&io::cone_json(&system)),
        Format::Text => {
            for line in system.render_text() {
                println!("{line}");
            }
            let nontrivial = system.nontrivial().count();
            println!("# {nontrivial} nontrivial, {} nonnegativity", system.len() - nontrivial);
        }
    }
    Ok(())
}

fn check(cli: &Cli, matrix: &str, pseudo: &str) -> Result<(), CliError> {
    let h = load::matrix(matrix)?;
    let z = load::pseudomatrix(pseudo)?;
    check_shape(&h, &z)?;
    let verdict = pseudocodeword_verdict(&h, &z)?;
    let system = enumerate_cone(&h);
    match cli.format {
        Format::Json => print_json(&json!({
            "in_cone": verdict.in_cone(),
            "checked": verdict.membership.checked,
            "violated": verdict.membership.violated.iter().map(|q| system.render(q)).collect::<Vec<_>>(),
            "residues": verdict.residues,
            "pseudocodeword": verdict.is_pseudocodeword(),
        })),
        Format::Text => {
            println!("{verdict}");
            for q in verdict.membership.violated.iter().take(10) {
                println!("  violated: {}", system.render(q));
            }
        }
    }
    if verdict.is_pseudocodeword() {
        Ok(())
    } else {
        Err(CliError::Domain(String::new()))
    }
}

fn copies(var: usize, copies: &[usize]) -> String {
    copies.iter().map(|mu| format!("u_{{{},{}}}", var + 1, mu + 1)).collect::<Vec<_>>().join(", ")
}

fn describe_step(n: usize, step: &TraceStep) -> String {
    let mut s = format!("step {n} (row {}): ", step.row + 1);
    match step.kind {
        StepKind::Stage2Pair | StepKind::Stage3Triple => {
            let labels: Vec<String> = step
                .coordinates
                .iter()
                .zip(&step.copies)
                .zip(&step.symbols)
                .map(|((&i, &mu), a)| format!("lambda(u_{{{},{}}}) = {a}", i + 1, mu + 1))
                .collect();
            let _ = write!(s, "{}, joined to v_{{{}}}", labels.join(", "), step.check_copies[0] + 1);
            if let Some(report) = &step.critical {
                if !report.is_empty() {
                    let coords: Vec<String> =
                        report.coordinates.iter().map(|(l, t)| format!("{} ({})", l + 1, type_name(*t))).collect();
                    let pairs = |set: &std::collections::BTreeSet<(usize, usize)>| {
                        set.iter().map(|(a, b)| format!("{{{}, {}}}", a + 1, b + 1)).collect::<Vec<_>>().join(" ")
                    };
                    let _ = write!(
                        s,
                        "\n  critical coordinates: [{}]; type-one pairs: [{}]; type-two pairs: [{}]",
                        coords.join(", "),
                        pairs(&report.pairs_type1),
                        pairs(&report.pairs_type2)
                    );
                }
            }
            let _ = write!(s, "\n  remaining:\n{}", indent(&step.snapshot.to_string()));
        }
        StepKind::Stage4Fill => {
            let checks: Vec<String> = step.check_copies.iter().map(|nu| format!("v_{{{}}}", nu + 1)).collect();
            let _ = write!(
                s,
                "zero-labeled {} matched to {}",
                copies(step.coordinates[0], &step.copies),
                checks.join(", ")
            );
        }
    }
    s
}

fn type_name(t: CriticalType) -> &'static str {
    match t {
        CriticalType::One => "type one",
        CriticalType::Two => "type two",
    }
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("    {l}\n")).collect()
}

fn lift(cli: &Cli, args: &LiftArgs) -> Result<(), CliError> {
    let h = load::matrix(&args.matrix)?;
    let f = integer_matrix(&h, &args.pseudomatrix)?;
    let verdict = pseudocodeword_verdict(&h, &f.to_rational())?;
    if !verdict.is_pseudocodeword() {
        let system = enumerate_cone(&h);
        let mut msg = verdict.to_string();
        for q in verdict.membership.violated.iter().take(10) {
            let _ = write!(msg, "\n  violated: {}", system.render(q));
        }
        return Err(CliError::Domain(msg));
    }
    let binary_row = h.field() == Field::F3 && h.rows() == 1 && h.row(0).iter().all(|&v| v <= 1);
    let result: LiftResult = if binary_row {
        let selection =
            if args.pairs.is_empty() { PairSelection::Lexicographic } else { PairSelection::Scripted(args.pairs.clone()) };
        lift_single_row(&h, &f, &selection)?
    } else if !args.pairs.is_empty() {
        return Err(CliError::Input("--pair applies only to a single row with entries 0 and 1".into()));
    } else {
        lift_full(&h, &f)?
    };
    let doc = io::lift_json(&result);
    if let Some(path) = &args.out {
        load::write(path, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
    }
    if let Some(path) = &args.dot {
        load::write(path, &result.labeling.to_dot())?;
    }
    match cli.format {
        Format::Json if args.out.is_none() => print_json(&doc),
        Format::Json => print_json(&json!({"M": result.degree, "M_prime": result.m_prime, "steps": result.trace.len()})),
        Format::Text => {
            if args.trace {
                println!("M' = {}, M = {}\n{}", result.m_prime, result.degree, f);
                for (n, step) in result.trace.iter().enumerate() {
                    println!("{}", describe_step(n + 1, step));
                }
            }
            let edges = result.labeling.cover().edges().len();
            println!("cover of degree {} with {edges} edges realizes", result.degree);
            print!("{}", pseudocodeword_matrix(&result.labeling));
            if let Some(path) = &args.out {
                println!("written to {}", path.display());
            }
        }
    }
    Ok(())
}

fn verify(cli: &Cli, cover: &str, dot: Option<&PathBuf>) -> Result<(), CliError> {
    let lab = load::cover(cover)?;
    validate_cover(lab.cover()).map_err(|rule| CliError::Domain(format!("invalid cover: {rule}")))?;
    if let Some(path) = dot {
        load::write(path, &lab.to_dot())?;
    }
    let failing = lab.failing_checks();
    let f = pseudocodeword_matrix(&lab);
    match cli.format {
        Format::Json => print_json(&json!({
            "valid": failing.is_empty(),
            "M": lab.cover().degree(),
            "failing_checks": failing.iter().map(|&(j, nu)| [j + 1, nu + 1]).collect::<Vec<_>>(),
            "matrix": io::pseudomatrix_json(&f),
        })),
        Format::Text if failing.is_empty() => {
            println!("valid cover of degree {}; all parity checks satisfied", lab.cover().degree());
            print!("{f}");
        }
        Format::Text => {}
    }
    if failing.is_empty() {
        return Ok(());
    }
    let names: Vec<String> = failing.iter().map(|&(j, nu)| format!("v_{{{},{}}}", j + 1, nu + 1)).collect();
    Err(CliError::Domain(format!("parity check fails at {}", names.join(", "))))
}

fn enumerate(cli: &Cli, matrix: &str, degree: usize, no_canonical: bool) -> Result<(), CliError> {
    let h = load::matrix(matrix)?;
    let options = EnumerationOptions { budget: cli.budget, canonicalize: !no_canonical };
    let found = enumerate_pseudocodeword_matrices(&h, degree, options)?;
    match cli.format {
        Format::Json => print_json(&json!({
            "H": io::matrix_json(&h),
            "M": degree,
            "count": found.len(),
            "matrices": found.iter().map(io::pseudomatrix_json).collect::<Vec<_>>(),
        })),
        Format::Text => {
            println!("{} pseudocodeword matrices of degree-{degree} covers", found.len());
            for f in &found {
                println!("{:?}", f.to_rows());
            }
        }
    }
    Ok(())
}

fn theorems(cli: &Cli, args: &TheoremArgs) -> Result<(), CliError> {
    let h = load::matrix(&args.matrix)?;
    let options = EnumerationOptions { budget: cli.budget, canonicalize: !args.no_canonical };
    let mut report: Report = match (&args.select.necessity, &args.select.sufficiency, &args.select.lemmas) {
        (Some(m), _, _) => check_necessity(&h, *m, options)?,
        (_, Some(b), _) => check_sufficiency(&h, *b, cli.budget)?,
        (_, _, Some(b)) => {
            let mut pool = vec![h.clone()];
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            for _ in 0..args.random_rows {
                pool.push(random_matrix(&mut rng, h.field(), 1, h.cols()));
            }
            check_lemma_battery(&pool, *b, cli.budget)?
        }
        _ => unreachable!("clap requires one selector"),
    };
    report.seed = Some(cli.seed);
    match cli.format {
        Format::Json => print_json(&serde_json::to_value(&report).expect("serializable")),
        Format::Text => println!("{}", report.summary()),
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Domain(format!("{} violations", report.violations.len())))
    }
}

fn approx(cli: &Cli, matrix: &str, pseudo: Option<&str>, epsilon: &str) -> Result<(), CliError> {
    let h = load::matrix(matrix)?;
    let z = match pseudo {
        Some(input) => {
            let z = load::pseudomatrix(input)?;
            check_shape(&h, &z)?;
            z
        }
        None => random_cone_point(&mut ChaCha8Rng::seed_from_u64(cli.seed), &h)?,
    };
    let a = approximate_cone_point(&h, &z, parse_rational(epsilon)?)?;
    let verdict = pseudocodeword_verdict(&h, &a.matrix.to_rational())?;
    match cli.format {
        Format::Json => print_json(&json!({
            "Z": io::rational_json(&z),
            "c": a.scale.to_string(),
            "F": io::pseudomatrix_json(&a.matrix),
            "exact": a.is_exact(),
            "pseudocodeword": verdict.is_pseudocodeword(),
        })),
        Format::Text => {
            println!("Z =\n{z}c = {}\nF =\n{}c F - Z = 0: {}", a.scale, a.matrix, a.is_exact());
            println!("{verdict}");
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::GenCone { matrix } => gen_cone(cli, matrix),
        Command::Check { matrix, pseudomatrix } => check(cli, matrix, pseudomatrix),
        Command::Lift(args) => lift(cli, args),
        Command::Verify { cover, dot } => verify(cli, cover, dot.as_ref()),
        Command::Enumerate { matrix, degree, no_canonical } => enumerate(cli, matrix, *degree, *no_canonical),
        Command::Theorems(args) => theorems(cli, args),
        Command::Approx { matrix, pseudomatrix, epsilon } => approx(cli, matrix, pseudomatrix.as_deref(), epsilon),
    }
}

fn main() -> ExitCode {
    // exit quietly when piped into `head`
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string();
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(e.code())
        }
    }
}
