use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pctgen::circuit::{build_miter, gen_cut, parse_aiger_ascii, parse_netlist};
use pctgen::cnf::{to_dimacs, tseitin_encode};
use pctgen::sat::DEFAULT_CONFLICT_BUDGET;
use pctgen::ssa::{DEFAULT_SEARCH_BUDGET, DEFAULT_STATE_BUDGET};
use pctgen::testgen::{
    gen_pct, random_tests, redundancy_aware_verify, run_tests, verify_cts, CtsVerdict, PctConfig, PctOutcome,
    VarChoice, DEFAULT_TRIES,
};
use pctgen::{Circuit, Error, SolverConfig, TestSet};

const EXIT_OK: u8 = 0;
const EXIT_FOUND: u8 = 10;
const EXIT_BUDGET: u8 = 20;
const EXIT_ERROR: u8 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "pctgen",
    version,
    about = "Property-checking test generation for combinational circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the CNF of F_N ∧ z in DIMACS.
    Encode {
        circuit: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the miter of two circuits over the same inputs.
    Miter {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a property-checking test set, or find a counterexample.
    Pct(PctArgs),
    /// Check whether a test set is complete for a constant-zero circuit.
    VerifyCts {
        circuit: PathBuf,
        tests: PathBuf,
        /// Check at the first redundant cut, if there is one.
        #[arg(long)]
        redundancy_aware: bool,
        #[arg(long, env = "PCTGEN_SEARCH_BUDGET", default_value_t = DEFAULT_SEARCH_BUDGET)]
        search_budget: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Simulate a test set and report the tests that set the output.
    Run {
        circuit: PathBuf,
        tests: PathBuf,
        #[arg(long, env = "PCTGEN_JOBS", default_value_t = 1)]
        jobs: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the cut grown from the output gate.
    Cut {
        circuit: PathBuf,
        #[arg(long, env = "PCTGEN_CUT_SIZE")]
        size: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw uniformly random tests.
    Random {
        circuit: PathBuf,
        #[arg(long, env = "PCTGEN_COUNT")]
        count: usize,
        #[arg(long, env = "PCTGEN_SEED", default_value_t = 0)]
        seed: u64,
        /// Keep drawing until `count` distinct tests exist.
        #[arg(long)]
        distinct: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, env = "PCTGEN_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "PCTGEN_CONFLICT_BUDGET", default_value_t = DEFAULT_CONFLICT_BUDGET)]
    conflict_budget: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Full,
    Inputs,
    Cut,
}

#[derive(Args, Debug)]
struct PctArgs {
    circuit: PathBuf,
    #[arg(long, env = "PCTGEN_MODE", value_enum, default_value_t = Mode::Full)]
    mode: Mode,
    #[arg(long, env = "PCTGEN_CUT_SIZE", required_if_eq("mode", "cut"))]
    cut_size: Option<usize>,
    #[arg(long, env = "PCTGEN_TRIES", default_value_t = DEFAULT_TRIES)]
    tries: usize,
    #[arg(long, env = "PCTGEN_SSA_BUDGET", default_value_t = DEFAULT_STATE_BUDGET)]
    ssa_budget: u64,
    #[arg(long, env = "PCTGEN_JOBS", default_value_t = 1)]
    jobs: usize,
    /// 0 centres the SSA at the all-zero input; larger values pick seeded
    /// random centres.
    #[arg(long, env = "PCTGEN_CENTER_ITERATION", default_value_t = 0)]
    center_iteration: u64,
    #[command(flatten)]
    common: Common,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

impl Common {
    fn solver(&self) -> SolverConfig {
        SolverConfig {
            conflict_budget: self.conflict_budget,
            ..SolverConfig::default()
        }
        .with_seed(self.seed)
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget { .. } => EXIT_BUDGET,
            Error::NotConstantZero { .. } => EXIT_FOUND,
            _ => EXIT_ERROR,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_ERROR,
        message: format!("{}: {e}", path.display()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text = read(path)?;
    let parsed = if text.trim_start().starts_with("aag") {
        parse_aiger_ascii(&text)
    } else {
        parse_netlist(&text)
    };
    parsed.map_err(|e| Failure {
        code: EXIT_ERROR,
        message: format!("{}: {e}", path.display()),
    })
}

fn load_tests(path: &Path) -> Result<TestSet, Failure> {
    TestSet::from_text(&read(path)?).map_err(|e| Failure {
        code: EXIT_ERROR,
        message: format!("{}: {e}", path.display()),
    })
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict_line(v: &CtsVerdict) -> (&'static str, u8) {
    match v {
        CtsVerdict::Complete(_) => ("complete", EXIT_OK),
        CtsVerdict::NotComplete => ("incomplete", EXIT_FOUND),
        CtsVerdict::Inconclusive => ("inconclusive", EXIT_BUDGET),
    }
}

fn pct(a: &PctArgs) -> Result<u8, Failure> {
    let n = load_circuit(&a.circuit)?;
    let choice = match a.mode {
        Mode::Full => VarChoice::Full,
        Mode::Inputs => VarChoice::Inputs,
        Mode::Cut => VarChoice::Cut(a.cut_size.unwrap_or(1)),
    };
    let cfg = PctConfig {
        tries: a.tries,
        seed: a.common.seed,
        solver: a.common.solver(),
        ssa_budget: a.ssa_budget,
        jobs: a.jobs.max(1),
        center_iteration: a.center_iteration,
    };
    match gen_pct(&n, choice, &cfg)? {
        PctOutcome::Tests(t) => {
            emit(a.output.as_deref(), &t.to_text())?;
            Ok(EXIT_OK)
        }
        PctOutcome::Counterexample(x) => {
            emit(a.output.as_deref(), &format!("counterexample {} {x}\n", n.name()))?;
            Ok(EXIT_FOUND)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Encode { circuit, output } => {
            let n = load_circuit(&circuit)?;
            emit(output.as_deref(), &to_dimacs(&tseitin_encode(&n)))?;
            Ok(EXIT_OK)
        }
        Command::Miter { first, second, output } => {
            let m = build_miter(&load_circuit(&first)?, &load_circuit(&second)?)?;
            emit(output.as_deref(), &m.to_netlist())?;
            Ok(EXIT_OK)
        }
        Command::Pct(a) => pct(&a),
        Command::VerifyCts {
            circuit,
            tests,
            redundancy_aware,
            search_budget,
            common,
        } => {
            let n = load_circuit(&circuit)?;
            let t = load_tests(&tests)?;
            let (verdict, cut) = if redundancy_aware {
                let r = redundancy_aware_verify(&n, &t, &common.solver(), search_budget)?;
                (r.verdict, r.cut.map(|c| c.describe(&n)))
            } else {
                (verify_cts(&n, &t, search_budget)?, None)
            };
            let (word, code) = verdict_line(&verdict);
            let mut out = format!("cts {word}\ntests={}\n", t.len());
            if let CtsVerdict::Complete(s) = &verdict {
                out.push_str(&format!("ssa_points={}\n", s.len()));
            }
            if let Some(c) = cut {
                out.push_str(&format!("redundant_cut={c}\n"));
            }
            print!("{out}");
            Ok(code)
        }
        Command::Run {
            circuit,
            tests,
            jobs,
            output,
        } => {
            let n = load_circuit(&circuit)?;
            let report = run_tests(&n, &load_tests(&tests)?, jobs.max(1))?;
            emit(output.as_deref(), &report.to_text())?;
            Ok(if report.hits.is_empty() { EXIT_OK } else { EXIT_FOUND })
        }
        Command::Cut { circuit, size, output } => {
            let n = load_circuit(&circuit)?;
            let r = gen_cut(&n, size)?;
            let names = |vs: &[pctgen::Var]| {
                vs.iter()
                    .map(|v| n.signal_name(v.index()))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let text = format!(
                "cut {} size={}\ngates: {}\ninputs: {}\nboundary: {}\n",
                n.name(),
                r.len(),
                names(&r.cut_vars),
                names(&r.inputs_in_cut),
                names(&r.boundary()),
            );
            let text: String = text.lines().map(|l| format!("{}\n", l.trim_end())).collect();
            emit(output.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Random {
            circuit,
            count,
            seed,
            distinct,
            output,
        } => {
            let n = load_circuit(&circuit)?;
            emit(output.as_deref(), &random_tests(&n, count, seed, !distinct).to_text())?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
