use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use adjlab::acceptance::{self, Grid};
use adjlab::json::{self, InputError, ScenarioDoc, TraceDoc};
use adjlab::{budget_from_env, dot, is_precision_exhausted};
use adjlab_core::cover::CoverError;
use adjlab_core::scenarios::{canned, Check, Payload, ScenarioError, CANNED};
use clap::{Parser, Subcommand, ValueEnum};

const OK: u8 = 0;
const MISMATCH: u8 = 1;
const INPUT: u8 = 2;
const PRECISION: u8 = 3;

#[derive(Parser)]
#[command(name = "adjlab", version, about = "Exact divisorial and moduli parts of log adjunction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and check its expected block.
    Run {
        file: PathBuf,
        /// Maximum number of blowups plus saturations.
        #[arg(long)]
        cap: Option<usize>,
        /// Depth of the extra b-divisor comparison on a stabilized state.
        #[arg(long)]
        depth: Option<u32>,
        /// Write the step trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the final blowup tree as Graphviz DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Add decimal approximations to the trace.
        #[arg(long)]
        approx: bool,
    },
    /// Print the names of the built-in scenarios.
    ListExamples,
    /// Run every acceptance criterion.
    VerifyAll {
        #[arg(long, value_enum, default_value_t = GridArg::Small)]
        grid: GridArg,
    },
    /// Print a built-in scenario as JSON.
    Export {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GridArg {
    Small,
    Full,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { file, cap, depth, trace, dot, approx } => run(&file, cap, depth, trace, dot, approx),
        Command::ListExamples => {
            for name in CANNED {
                println!("{name}");
            }
            OK
        }
        Command::VerifyAll { grid } => verify_all(match grid {
            GridArg::Small => Grid::Small,
            GridArg::Full => Grid::Full,
        }),
        Command::Export { name, out } => export(&name, out),
    };
    ExitCode::from(code)
}

fn input_failure(err: &InputError) -> u8 {
    eprintln!("error: {err}");
    if err.is_precision_exhausted() {
        PRECISION
    } else {
        INPUT
    }
}

fn run_failure(err: &ScenarioError) -> u8 {
    eprintln!("error: {err}");
    if is_precision_exhausted(err) {
        PRECISION
    } else if matches!(err, ScenarioError::Cover(CoverError::PostconditionFailed(_))) {
        MISMATCH
    } else {
        INPUT
    }
}

fn run(
    file: &PathBuf,
    cap: Option<usize>,
    depth: Option<u32>,
    trace: Option<PathBuf>,
    dot_out: Option<PathBuf>,
    approx: bool,
) -> u8 {
    let budget = match budget_from_env() {
        Ok(b) => b,
        Err(m) => {
            eprintln!("error: {m}");
            return INPUT;
        }
    };
    let text = match fs::read_to_string(file) {
        Ok(t) => t,
        Err(err) => {
            eprintln!("error: cannot read {}: {err}", file.display());
            return INPUT;
        }
    };
    let scenario = match json::parse_scenario(&text, budget) {
        Ok(s) => s,
        Err(err) => return input_failure(&err),
    };
    if dot_out.is_some() && !matches!(scenario.payload, Payload::Cover(_)) {
        eprintln!("error: --dot applies to cover scenarios only");
        return INPUT;
    }
    let mut outcome = match scenario.run(cap) {
        Ok(o) => o,
        Err(err) => return run_failure(&err),
    };
    if let (Some(k), Some(run)) = (depth, &outcome.stabilization) {
        if run.is_stabilized() {
            let found = match run.state().verify_bp(k, false, &scenario.context) {
                Ok(d) => d,
                Err(err) => return run_failure(&err.into()),
            };
            let actual = match &found {
                None => "agrees".to_string(),
                Some(d) => format!("differs at {} (level {}): {} vs {}", d.div, d.level, d.left, d.right),
            };
            outcome.checks.push(Check {
                what: format!("D_div vs B(Z, D_div) to depth {k}"),
                expected: "agrees".into(),
                ok: found.is_none(),
                actual,
            });
        }
    }

    println!("scenario {} ({})", scenario.name, scenario.payload.kind());
    if let Some(run) = &outcome.stabilization {
        let verdict = if run.is_stabilized() { "stabilized" } else { "not stabilized" };
        println!("{verdict}: {} blowups, {} saturations", run.blowups(), run.saturations());
    }
    for c in &outcome.checks {
        let mark = if c.ok { "ok  " } else { "FAIL" };
        println!("{mark} {}: expected {}, got {}", c.what, c.expected, c.actual);
    }

    if let Some(path) = trace {
        let doc = TraceDoc::new(&scenario, &outcome, approx);
        let text = serde_json::to_string_pretty(&doc).expect("trace serializes");
        if let Err(err) = fs::write(&path, text + "\n") {
            eprintln!("error: cannot write {}: {err}", path.display());
            return INPUT;
        }
    }
    if let Some(path) = dot_out {
        let text = match &outcome.stabilization {
            Some(run) => dot::blowup_tree(run.state(), run.trace()),
            None => match &scenario.payload {
                Payload::Cover(state) => dot::blowup_tree(state, &[]),
                _ => unreachable!("checked above"),
            },
        };
        if let Err(err) = fs::write(&path, text) {
            eprintln!("error: cannot write {}: {err}", path.display());
            return INPUT;
        }
    }

    match outcome.first_failure() {
        None => OK,
        Some(c) => {
            println!("first mismatch: {}: expected {}, got {}", c.what, c.expected, c.actual);
            MISMATCH
        }
    }
}

fn verify_all(grid: Grid) -> u8 {
    let start = Instant::now();
    let mut all = true;
    for id in 1..=acceptance::TITLES.len() {
        let t = Instant::now();
        let r = acceptance::run(id, grid);
        all &= r.passed;
        println!("{r} [{:.1} s]", t.elapsed().as_secs_f64());
    }
    println!("{} in {:.1} s", if all { "all criteria pass" } else { "some criteria fail" }, start.elapsed().as_secs_f64());
    if all {
        OK
    } else {
        MISMATCH
    }
}

fn export(name: &str, out: Option<PathBuf>) -> u8 {
    let Some(s) = canned(name) else {
        eprintln!("error: unknown example `{name}` (see list-examples)");
        return INPUT;
    };
    let doc = match ScenarioDoc::from_scenario(&s) {
        Ok(d) => d,
        Err(err) => return input_failure(&err),
    };
    let text = serde_json::to_string_pretty(&doc).expect("scenario serializes") + "\n";
    match out {
        Some(path) => {
            if let Err(err) = fs::write(&path, text) {
                eprintln!("error: cannot write {}: {err}", path.display());
                return INPUT;
            }
        }
        None => print!("{text}"),
    }
    OK
}
