//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::axiom_suite::{run_suite, AxiomSuiteConfig};
use crate::classical_entropy::{
    conditional_tsallis, default_q_grid, shannon_entropy, tsallis_entropy, EntropicIndex, JointDist, ProbDist,
};
use crate::io::{ensemble_from_json, state_from_json, state_to_json};
use crate::output::{Field, Record, Table};
use crate::quantum_entropy::{
    conditional_quantum, ensemble_conditional, ppt_test, quantum_tsallis, separable_positivity_experiment, von_neumann,
    PositivityConfig, SEPARABLE_FLOOR,
};
use crate::quantum_state::{singlet, tensor, werner_popescu, DensityMatrix, SeparableEnsemble, Subsystem};
use crate::werner_analysis::{criterion_table, default_scan_grid, threshold, threshold_scan, Q_INFINITY_FLOOR};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

/// Nonadditive entropies and entanglement detection.
#[derive(Debug, Parser)]
#[command(name = "tsallis-qi", version)]
pub struct RunConfig {
    /// Output format (default: csv for werner-scan, table otherwise)
    #[arg(long, global = true, value_enum)]
    pub output: Option<OutputFormat>,

    /// Base seed for randomized runs
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the rendered output to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy of a distribution (Shannon, Tsallis) or a state (von Neumann, Tsallis)
    Entropy(EntropyArgs),
    /// Conditional entropy of a joint distribution, state or separable ensemble
    Cond(CondArgs),
    /// Werner-state sign-change threshold x*(q) over a grid of q
    WernerScan(ScanArgs),
    /// Partial-transpose test
    Ppt(PptArgs),
    /// Randomized axiom and identity checks
    Axioms(AxiomArgs),
    /// Monte-Carlo positivity check on random separable states
    Positivity(PositivityArgs),
    /// Comparison of separability criteria for the Werner family
    Criteria,
    /// Emit state JSON
    Gen {
        #[command(subcommand)]
        target: GenTarget,
    },
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// Distribution as a JSON literal or a path to a JSON file
    #[arg(long, required_unless_present = "state", conflicts_with = "state")]
    pub dist: Option<String>,
    /// Density matrix as a JSON literal or a path
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long)]
    pub q: f64,
}

#[derive(Debug, Args)]
pub struct CondArgs {
    /// Joint distribution (2-D JSON array, rows index A)
    #[arg(long, required_unless_present_any = ["state", "ensemble"], conflicts_with_all = ["state", "ensemble"])]
    pub joint: Option<String>,
    #[arg(long, conflicts_with = "ensemble")]
    pub state: Option<String>,
    /// Shared-basis separable ensemble
    #[arg(long)]
    pub ensemble: Option<String>,
    #[arg(long)]
    pub q: f64,
    /// Subsystem conditioned on
    #[arg(long, default_value = "A")]
    pub given: Subsystem,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Comma-separated entropic indices
    #[arg(long)]
    pub q_grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct PptArgs {
    #[arg(long)]
    pub state: String,
}

#[derive(Debug, Args)]
pub struct AxiomArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long)]
    pub q_grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct PositivityArgs {
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long)]
    pub q_grid: Option<String>,
    /// Also evaluate the singlet as a detector control
    #[arg(long)]
    pub inject_singlet: bool,
    #[arg(long, default_value_t = 2)]
    pub da: usize,
    #[arg(long, default_value_t = 2)]
    pub db: usize,
    /// Maximum number of product terms per sampled state
    #[arg(long, default_value_t = 4)]
    pub max_terms: usize,
}

#[derive(Debug, Subcommand)]
pub enum GenTarget {
    /// Werner-Popescu state with parameter x
    Werner {
        #[arg(long)]
        x: f64,
    },
    Singlet,
    /// Diagonal product state diag(pa) (x) diag(pb)
    Product {
        #[arg(long)]
        pa: String,
        #[arg(long)]
        pb: String,
    },
}

/// Rendered text plus the exit status it should produce.
struct Outcome {
    text: String,
    status: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, status: EXIT_OK }
    }
}

type CliResult<T> = std::result::Result<T, String>;

fn input_err(e: crate::Error) -> String {
    e.to_string()
}

/// A JSON literal when the argument looks like one, otherwise a file path.
fn load_text(arg: &str) -> CliResult<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| format!("cannot read '{arg}': {e}"))
    }
}

fn index(q: f64) -> CliResult<EntropicIndex> {
    EntropicIndex::new(q).map_err(input_err)
}

fn parse_q_grid(text: Option<&str>, default: impl FnOnce() -> Vec<EntropicIndex>) -> CliResult<Vec<EntropicIndex>> {
    let Some(text) = text else {
        return Ok(default());
    };
    let grid = text
        .split(',')
        .map(|item| {
            let v: f64 = item.trim().parse().map_err(|_| format!("invalid q-grid entry '{item}'"))?;
            index(v)
        })
        .collect::<CliResult<Vec<_>>>()?;
    if grid.is_empty() {
        return Err("empty q grid".into());
    }
    Ok(grid)
}

fn render(record: &Record, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => record.to_json() + "\n",
        OutputFormat::Csv => record.to_csv(),
        OutputFormat::Table => record.to_table(),
    }
}

fn render_table(table: &Table, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => table.to_json_lines(),
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Table => table.to_text(),
    }
}

fn verdict(value: f64) -> &'static str {
    if value < -SEPARABLE_FLOOR {
        "negative ⇒ entangled"
    } else {
        "nonnegative ⇒ inconclusive"
    }
}

fn cmd_entropy(args: &EntropyArgs, format: OutputFormat) -> CliResult<Outcome> {
    let q = index(args.q)?;
    let record = if let Some(dist) = &args.dist {
        let p = ProbDist::from_json(&load_text(dist)?).map_err(input_err)?;
        Record::new()
            .with("kind", "classical")
            .with("q", q.value())
            .with("shannon", shannon_entropy(&p))
            .with("tsallis", tsallis_entropy(&p, q))
    } else {
        let state = args.state.as_deref().ok_or("one of --dist or --state is required")?;
        let s = state_from_json(&load_text(state)?).map_err(input_err)?;
        Record::new()
            .with("kind", "quantum")
            .with("q", q.value())
            .with("von_neumann", von_neumann(s.rho()))
            .with("tsallis", quantum_tsallis(s.rho(), q))
    };
    Ok(Outcome::ok(render(&record, format)))
}

fn swap_sides(e: &SeparableEnsemble) -> SeparableEnsemble {
    SeparableEnsemble::new(
        e.weights().clone(),
        e.pb().to_vec(),
        e.pa().to_vec(),
        Some(e.ub().clone()),
        Some(e.ua().clone()),
    )
    .expect("swapping the sides of a valid ensemble keeps it valid")
}

fn cmd_cond(args: &CondArgs, format: OutputFormat) -> CliResult<Outcome> {
    let q = index(args.q)?;
    let given = args.given;
    let record = if let Some(joint) = &args.joint {
        let j = JointDist::from_json(&load_text(joint)?).map_err(input_err)?;
        let j = match given {
            Subsystem::A => j,
            Subsystem::B => j.transposed(),
        };
        Record::new()
            .with("kind", "classical")
            .with("q", q.value())
            .with("given", given.to_string())
            .with("value", conditional_tsallis(&j, q))
            .with("s_joint", tsallis_entropy(&j.flattened(), q))
            .with("s_marginal", tsallis_entropy(&j.marginal_a(), q))
    } else if let Some(state) = &args.state {
        let s = state_from_json(&load_text(state)?).map_err(input_err)?;
        let r = conditional_quantum(&s, q, given);
        Record::new()
            .with("kind", "quantum")
            .with("q", q.value())
            .with("given", given.to_string())
            .with("value", r.value)
            .with("s_joint", r.s_joint)
            .with("s_marginal", r.s_marginal)
            .with("verdict", verdict(r.value))
    } else {
        let text = args.ensemble.as_deref().ok_or("one of --joint, --state or --ensemble is required")?;
        let e = ensemble_from_json(&load_text(text)?).map_err(input_err)?;
        let e = match given {
            Subsystem::A => e,
            Subsystem::B => swap_sides(&e),
        };
        let value = ensemble_conditional(&e, q);
        Record::new()
            .with("kind", "ensemble")
            .with("q", q.value())
            .with("given", given.to_string())
            .with("value", value)
            .with("verdict", verdict(value))
    };
    Ok(Outcome::ok(render(&record, format)))
}

fn cmd_werner_scan(args: &ScanArgs, format: OutputFormat) -> CliResult<Outcome> {
    let grid = parse_q_grid(args.q_grid.as_deref(), default_scan_grid)?;
    let mut table = Table::new(&["q", "x_star", "residual"]);
    for p in threshold_scan(&grid) {
        table.push(vec![Field::Num(p.q.value()), Field::Num(p.x_star), Field::Num(p.solver_residual)]);
    }
    let mut text = render_table(&table, format);
    if format == OutputFormat::Csv {
        let landmark = threshold(EntropicIndex::SHANNON).x_star;
        text.push_str(&format!(
            "# floor x=1/3={}; q=1 landmark x*={}\n",
            crate::output::fmt_sig(Q_INFINITY_FLOOR, crate::output::MACHINE_DIGITS),
            crate::output::fmt_sig(landmark, crate::output::MACHINE_DIGITS)
        ));
    }
    Ok(Outcome::ok(text))
}

fn cmd_ppt(args: &PptArgs, format: OutputFormat) -> CliResult<Outcome> {
    let s = state_from_json(&load_text(&args.state)?).map_err(input_err)?;
    let v = ppt_test(&s);
    let record = Record::new()
        .with("min_eig", v.min_eig)
        .with("is_ppt", v.is_ppt)
        .with("verdict", if v.is_ppt { "PPT" } else { "NPT (entangled)" });
    Ok(Outcome::ok(render(&record, format)))
}

fn cmd_axioms(args: &AxiomArgs, seed: u64, format: OutputFormat) -> CliResult<Outcome> {
    if args.trials == 0 {
        return Err("--trials must be at least 1".into());
    }
    let config = AxiomSuiteConfig {
        trials: args.trials,
        seed,
        q_grid: parse_q_grid(args.q_grid.as_deref(), default_q_grid)?,
        ..Default::default()
    };
    let reports = run_suite(&config);
    let mut table = Table::new(&["axiom", "context", "q", "trials", "max_violation", "tolerance", "passed"]);
    for r in &reports {
        table.push(vec![
            Field::Text(r.axiom_id.to_string()),
            Field::Text(r.context.clone()),
            Field::Num(r.q),
            Field::Int(r.trials as i64),
            Field::Num(r.max_violation),
            Field::Num(r.tolerance),
            Field::Bool(r.passed),
        ]);
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    let mut text = render_table(&table, format);
    if format == OutputFormat::Table {
        text.push_str(&if failed == 0 {
            format!("all {} checks passed at their stated tolerances\n", reports.len())
        } else {
            format!("{failed} of {} checks FAILED\n", reports.len())
        });
    }
    Ok(Outcome { text, status: if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED } })
}

fn cmd_positivity(args: &PositivityArgs, seed: u64, format: OutputFormat) -> CliResult<Outcome> {
    if args.samples == 0 || args.da == 0 || args.db == 0 || args.max_terms == 0 {
        return Err("--samples, --da, --db and --max-terms must be positive".into());
    }
    let config = PositivityConfig {
        n_samples: args.samples,
        q_grid: parse_q_grid(args.q_grid.as_deref(), default_q_grid)?,
        seed,
        dims: (args.da, args.db),
        max_terms: args.max_terms,
        inject_singlet: args.inject_singlet,
    };
    let summary = separable_positivity_experiment(&config);
    let mut record = Record::new()
        .with("min_value", summary.min_value)
        .with("violations", summary.violations)
        .with("n_samples", summary.n_samples)
        .with("q_grid", summary.q_grid.clone())
        .with("seed", summary.seed)
        .with("shared_basis_min", summary.shared_basis_min)
        .with("general_min", summary.general_min);
    if let Some(control) = summary.singlet_control {
        record.push("singlet_control", control);
        record.push("singlet_verdict", verdict(control));
    }
    let status = if summary.violations == 0 { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok(Outcome { text: render(&record, format), status })
}

fn cmd_criteria(format: OutputFormat) -> CliResult<Outcome> {
    let table = criterion_table();
    let ordered = table.is_ordered();
    let text = match format {
        OutputFormat::Json => {
            Record::new()
                .with("bell_bound", table.bell_bound)
                .with("von_neumann_zero", table.von_neumann_zero)
                .with("q_infinity_limit", table.q_infinity_limit)
                .with("ppt_threshold", table.ppt_threshold)
                .with("ordered", ordered)
                .to_json()
                + "\n"
        }
        _ => {
            let mut t = Table::new(&["criterion", "x_threshold"]);
            for (label, value) in table.rows() {
                t.push(vec![Field::Text(label.into()), Field::Num(value)]);
            }
            let mut text = render_table(&t, format);
            if format == OutputFormat::Table {
                text.push_str(if ordered {
                    "ordering: q->infinity = PPT < Bell < von Neumann\n"
                } else {
                    "ordering: UNEXPECTED\n"
                });
            }
            text
        }
    };
    Ok(Outcome { text, status: if ordered { EXIT_OK } else { EXIT_CHECK_FAILED } })
}

fn cmd_gen(target: &GenTarget) -> CliResult<Outcome> {
    let state = match target {
        GenTarget::Werner { x } => werner_popescu(*x).map_err(input_err)?,
        GenTarget::Singlet => singlet(),
        GenTarget::Product { pa, pb } => {
            let pa = ProbDist::from_json(&load_text(pa)?).map_err(input_err)?;
            let pb = ProbDist::from_json(&load_text(pb)?).map_err(input_err)?;
            tensor(&DensityMatrix::diagonal(&pa), &DensityMatrix::diagonal(&pb))
        }
    };
    Ok(Outcome::ok(state_to_json(&state) + "\n"))
}

fn execute(config: &RunConfig) -> CliResult<Outcome> {
    let format = |default| config.output.unwrap_or(default);
    match &config.command {
        Command::Entropy(args) => cmd_entropy(args, format(OutputFormat::Table)),
        Command::Cond(args) => cmd_cond(args, format(OutputFormat::Table)),
        Command::WernerScan(args) => cmd_werner_scan(args, format(OutputFormat::Csv)),
        Command::Ppt(args) => cmd_ppt(args, format(OutputFormat::Table)),
        Command::Axioms(args) => cmd_axioms(args, config.seed, format(OutputFormat::Table)),
        Command::Positivity(args) => cmd_positivity(args, config.seed, format(OutputFormat::Table)),
        Command::Criteria => cmd_criteria(format(OutputFormat::Table)),
        Command::Gen { target } => cmd_gen(target),
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{rendered}");
                EXIT_OK
            };
        }
    };
    match execute(&config) {
        Ok(outcome) => {
            let written = match &config.out {
                Some(path) => {
                    std::fs::write(path, &outcome.text).map_err(|e| format!("cannot write '{}': {e}", path.display()))
                }
                None => stdout.write_all(outcome.text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => outcome.status,
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    EXIT_USAGE
                }
            }
        }
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("tsallis-qi").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn q_grid_parsing() {
        let g = parse_q_grid(Some("0.5, 2,10"), Vec::new).unwrap();
        assert_eq!(g.iter().map(|q| q.value()).collect::<Vec<_>>(), vec![0.5, 2.0, 10.0]);
        assert!(parse_q_grid(Some("1,-2"), Vec::new).is_err());
        assert!(parse_q_grid(Some("x"), Vec::new).is_err());
        assert_eq!(parse_q_grid(None, default_q_grid).unwrap().len(), 8);
    }

    #[test]
    fn literal_or_path() {
        assert_eq!(load_text(" [0.5,0.5]").unwrap(), " [0.5,0.5]");
        assert!(load_text("/definitely/not/here.json").unwrap_err().contains("cannot read"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("werner-scan"));
    }

    #[test]
    fn conflicting_inputs_are_usage_errors() {
        let (code, _, err) = run_capture(&["entropy", "--dist", "[1]", "--state", "x.json", "--q", "2"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());
    }
}
