//! Command-line front end: `analyze`, `example`, `distance`, `list-examples`.
//!
//! Exit codes: 0 ok, 1 input error, 2 hypothesis or check failure, 3 budget
//! exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use fractal_core::fixtures::{self, ExampleFixture};
use fractal_core::render::{render_psi_tables, render_text};
use fractal_core::text::{parse_family_file, parse_single_code, FamilyBlock};
use fractal_core::{
    analyze, embedded_params, verify, AnalysisReport, AnalyzeOptions, CodeFamily, Distance, Error, Finding, LinearCode,
    DEFAULT_BUDGET,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Random `|u|u+v|` instances use lengths up to this value.
const RANDOM_MAX_N: usize = 10;
/// ... and at most this many generator rows per component.
const RANDOM_MAX_K: usize = 5;

#[derive(Parser, Debug)]
#[command(name = "fractal", version, about = "Analyze binary codes C1⊗D1 + … + Cs⊗Ds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the code for two families and report its parameters and bounds.
    Analyze(AnalyzeArgs),
    /// Run a built-in example through analyze and verify.
    Example(ExampleArgs),
    /// Exact (n, k, d) of a single generator matrix.
    Distance(DistanceArgs),
    /// List the built-in examples.
    ListExamples,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// One file holding both families separated by `---`, or one file per family.
    #[arg(required = true, num_args = 1..=2)]
    paths: Vec<PathBuf>,
    /// Enumerate the constructed code for its exact distance (default).
    #[arg(long, overrides_with = "no_exact")]
    exact: bool,
    /// Skip the exact enumeration.
    #[arg(long, overrides_with = "exact")]
    no_exact: bool,
    /// Maximum number of codewords the exact enumeration may visit.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long)]
    json: bool,
    /// Also print the Ψ0 / Ψ0* tables of the lower bound.
    #[arg(long)]
    table: bool,
    /// Exit with status 2 unless both families are acyclic.
    #[arg(long)]
    require_acyclic: bool,
}

#[derive(Args, Debug)]
struct ExampleArgs {
    /// Example name, or `all`.
    name: String,
    /// First seed for the randomized `u_uplusv` trials.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of randomized `u_uplusv` trials.
    #[arg(long, default_value_t = 50)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    table: bool,
}

#[derive(Args, Debug)]
struct DistanceArgs {
    /// File with a single generator block (or only an `n=<int>` header).
    path: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long)]
    json: bool,
}

/// An error that ends the command with `code` after printing `message`.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::HypothesisViolated(_) => EXIT_HYPOTHESIS,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(&a, out),
        Command::Example(a) => cmd_example(&a, out),
        Command::Distance(a) => cmd_distance(&a, out),
        Command::ListExamples => cmd_list(out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn located(path: &Path, e: Error) -> Failure {
    match e {
        Error::Parse { line, column, message } => {
            Failure::input(format!("{}:{line}:{column}: {message}", path.display()))
        }
        other => Failure::input(format!("{}: {other}", path.display())),
    }
}

fn families_in(path: &Path, expected: usize) -> Result<Vec<FamilyBlock>, Failure> {
    let file = parse_family_file(&read(path)?).map_err(|e| located(path, e))?;
    if file.families.len() != expected {
        let what = if expected == 2 {
            "expected two families separated by '---'"
        } else {
            "expected a single family"
        };
        return Err(located(path, parse_err(1, 1, what)));
    }
    Ok(file.families)
}

fn parse_err(line: usize, column: usize, message: &str) -> Error {
    Error::Parse {
        line,
        column,
        message: message.to_string(),
    }
}

fn load_pair(paths: &[PathBuf]) -> Result<(CodeFamily, CodeFamily), Failure> {
    let (c_path, d_path, c_block, d_block) = match paths {
        [one] => {
            let mut blocks = families_in(one, 2)?.into_iter();
            let c = blocks.next().expect("two families");
            let d = blocks.next().expect("two families");
            (one, one, c, d)
        }
        [first, second] => {
            let c = families_in(first, 1)?.remove(0);
            let d = families_in(second, 1)?.remove(0);
            (first, second, c, d)
        }
        _ => return Err(Failure::input("expected one or two family files")),
    };
    let (c_size, d_size, d_line) = (c_block.codes.len(), d_block.codes.len(), d_block.line);
    let c = c_block.into_family().map_err(|e| located(c_path, e))?;
    let d = d_block.into_family().map_err(|e| located(d_path, e))?;
    if c_size != d_size {
        return Err(Failure::input(format!(
            "{}:{d_line}:1: family size mismatch: C has s={c_size}, D has s={d_size}",
            d_path.display()
        )));
    }
    Ok((c, d))
}

fn write_out(out: &mut impl Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::input(format!("cannot write output: {e}")))
}

fn report_text(report: &AnalysisReport, table: bool) -> String {
    let mut text = render_text(report);
    if table {
        text.push('\n');
        text.push_str(&render_psi_tables(report));
    }
    text
}

fn cmd_analyze(args: &AnalyzeArgs, out: &mut impl Write) -> CmdResult {
    let (c, d) = load_pair(&args.paths)?;
    let options = AnalyzeOptions {
        compute_exact: !args.no_exact,
        budget: args.budget,
    };
    let report = analyze(&c, &d, options)?;
    if args.json {
        let text = serde_json::to_string_pretty(&report).expect("reports serialize");
        write_out(out, &format!("{text}\n"))?;
    } else {
        write_out(out, &report_text(&report, args.table))?;
    }
    if args.require_acyclic {
        for (name, ok) in [("C", report.c_acyclic), ("D", report.d_acyclic)] {
            if !ok {
                return Err(Error::HypothesisViolated(format!("family {name} is not acyclic")).into());
            }
        }
    }
    Ok(EXIT_OK)
}

/// One named pass/fail check run by `example` on top of `verify`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn check<T: PartialEq + std::fmt::Debug>(name: &str, actual: T, expected: T) -> Check {
    Check {
        name: name.to_string(),
        passed: actual == expected,
        detail: format!("{actual:?} (expected {expected:?})"),
    }
}

struct ExampleOutcome {
    fixture: ExampleFixture,
    report: AnalysisReport,
    findings: Vec<Finding>,
    checks: Vec<Check>,
}

impl ExampleOutcome {
    fn passed(&self) -> bool {
        self.findings.is_empty() && self.checks.iter().all(|c| c.passed)
    }
}

fn run_fixture(fixture: ExampleFixture, args: &ExampleArgs) -> Result<ExampleOutcome, Failure> {
    let (c, d) = (fixture.build)();
    let options = AnalyzeOptions {
        compute_exact: true,
        budget: args.budget,
    };
    let report = analyze(&c, &d, options)?;
    let findings = verify(&report, &c, &d)?;
    let e = fixture.expected;
    let mut checks = vec![
        check("length", report.length(), e.n),
        check("rank", report.rank, e.k),
        check("exact_distance", report.exact_distance, Some(e.d)),
        check("upper_bound", report.upper_bound, e.upper),
        check("lower_bound", report.lower_bound, Some(e.lower)),
        check("theorem_b_applies", report.theorem_b_applies, e.theorem_b_applies),
    ];
    if let Some(params) = e.embedded_params {
        checks.push(check("embedded_params", embedded_params(&c, &d.reversed())?, params));
    }
    match fixture.name {
        "rm32_16_8" => checks.push(reed_muller_check(&c, &d)?),
        "u_uplusv" => checks.push(random_u_uplusv_check(args)?),
        _ => {}
    }
    Ok(ExampleOutcome {
        fixture,
        report,
        findings,
        checks,
    })
}

/// Weight-distribution equality with RM(2,5), the implemented stand-in for
/// code equivalence.
fn reed_muller_check(c: &CodeFamily, d: &CodeFamily) -> Result<Check, Failure> {
    let built = fractal_core::construct(c, d)?.weight_distribution(DEFAULT_BUDGET)?;
    let rm = LinearCode::reed_muller(2, 5).weight_distribution(DEFAULT_BUDGET)?;
    let nonzero = |dist: &[u64]| -> Vec<(usize, u64)> {
        dist.iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(w, &a)| (w, a))
            .collect()
    };
    Ok(Check {
        name: "weight distribution equals RM(2,5) (equivalence proxy)".to_string(),
        passed: built == rm,
        detail: format!("{:?}", nonzero(&built)),
    })
}

fn random_u_uplusv_check(args: &ExampleArgs) -> Result<Check, Failure> {
    let mut failures = Vec::new();
    for t in 0..args.trials {
        let seed = args.seed.wrapping_add(t);
        let (c, d) = fixtures::u_uplusv_random(seed, RANDOM_MAX_N, RANDOM_MAX_K);
        let predicted = fixtures::u_uplusv_prediction(&c)?;
        let report = analyze(&c, &d, AnalyzeOptions::default())?;
        let values = (report.exact_distance, report.upper_bound, report.lower_bound);
        if values != (Some(predicted), predicted, Some(predicted)) {
            failures.push(format!(
                "seed {seed}: min(2d1, d2) = {predicted}, exact {:?}, upper {}, lower {:?}",
                values.0, values.1, values.2
            ));
        }
    }
    let detail = if failures.is_empty() {
        format!("{0}/{0} seeds from {1}", args.trials, args.seed)
    } else {
        failures.join("; ")
    };
    Ok(Check {
        name: "random |u|u+v|: exact = min(2d1, d2) = upper = lower".to_string(),
        passed: failures.is_empty(),
        detail,
    })
}

fn outcome_json(o: &ExampleOutcome) -> Value {
    json!({
        "name": o.fixture.name,
        "title": o.fixture.title,
        "passed": o.passed(),
        "report": o.report,
        "findings": o.findings,
        "checks": o.checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    })
}

fn outcome_text(o: &ExampleOutcome, table: bool) -> String {
    let mut text = format!("== {}: {} ==\n", o.fixture.name, o.fixture.title);
    text.push_str(&report_text(&o.report, table));
    text.push('\n');
    for c in &o.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        text.push_str(&format!("{mark} {}: {}\n", c.name, c.detail));
    }
    if o.findings.is_empty() {
        text.push_str("findings: none\n");
    } else {
        for f in &o.findings {
            text.push_str(&format!("finding: {f}\n"));
        }
    }
    text
}

fn cmd_example(args: &ExampleArgs, out: &mut impl Write) -> CmdResult {
    let selected = if args.name == "all" {
        fixtures::all()
    } else {
        match fixtures::by_name(&args.name) {
            Some(f) => vec![f],
            None => {
                return Err(Failure::input(format!(
                    "unknown example {:?}; available: {}, all",
                    args.name,
                    fixtures::names().join(", ")
                )))
            }
        }
    };
    let outcomes = selected
        .into_iter()
        .map(|f| run_fixture(f, args))
        .collect::<Result<Vec<_>, _>>()?;
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed())
        .map(|o| o.fixture.name)
        .collect();

    if args.json {
        let value = if args.name == "all" {
            Value::Array(outcomes.iter().map(outcome_json).collect())
        } else {
            outcome_json(&outcomes[0])
        };
        let text = serde_json::to_string_pretty(&value).expect("json values serialize");
        write_out(out, &format!("{text}\n"))?;
    } else {
        let blocks: Vec<String> = outcomes.iter().map(|o| outcome_text(o, args.table)).collect();
        write_out(out, &blocks.join("\n"))?;
        if outcomes.len() > 1 {
            let summary = if failed.is_empty() {
                format!("\nall {} examples passed\n", outcomes.len())
            } else {
                format!("\nfailed: {}\n", failed.join(", "))
            };
            write_out(out, &summary)?;
        }
    }
    if failed.is_empty() {
        Ok(EXIT_OK)
    } else {
        Err(Failure {
            code: EXIT_HYPOTHESIS,
            message: format!("checks failed for {}", failed.join(", ")),
        })
    }
}

fn cmd_distance(args: &DistanceArgs, out: &mut impl Write) -> CmdResult {
    let code = parse_single_code(&read(&args.path)?).map_err(|e| located(&args.path, e))?;
    let d = match code.min_distance_with_budget(args.budget) {
        Ok(d) => d,
        Err(Error::BudgetExceeded { required, budget }) => {
            return Err(Failure {
                code: EXIT_BUDGET,
                message: format!(
                    "budget exceeded: enumeration needs {required} codewords but the budget is {budget}; \
                     rerun with --budget {required}"
                ),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let (n, k) = (code.length(), code.dimension());
    let text = if args.json {
        format!("{}\n", json!({ "n": n, "k": k, "d": d }))
    } else {
        format!("({n},{k},{})\n", distance_text(d))
    };
    write_out(out, &text)?;
    Ok(EXIT_OK)
}

fn distance_text(d: Distance) -> String {
    match d {
        Distance::Finite(d) => d.to_string(),
        Distance::Infinite => "INFINITE".to_string(),
    }
}

fn cmd_list(out: &mut impl Write) -> CmdResult {
    let mut text = String::new();
    for f in fixtures::all() {
        let e = f.expected;
        let params = format!("({},{},{})", e.n, e.k, e.d);
        text.push_str(&format!("{:<12} {:<12} {}\n", f.name, params, f.title));
    }
    write_out(out, &text)?;
    Ok(EXIT_OK)
}
