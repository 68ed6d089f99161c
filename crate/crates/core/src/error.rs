use std::fmt;

use thiserror::Error;

use crate::cnf::Bits;

/// Stage of the pipeline that ran out of budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Sat,
    BuildSsa,
    SsaSearch,
    GenTests,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Sat => "sat",
            Stage::BuildSsa => "build-ssa",
            Stage::SsaSearch => "ssa-search",
            Stage::GenTests => "gen-tests",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("combinational cycle through signal `{0}`")]
    Cycle(String),
    #[error("line {line}: reference to undeclared signal `{signal}`")]
    DanglingReference { signal: String, line: usize },
    #[error("signal `{0}` has more than one driver")]
    MultipleDrivers(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("aiger: {0}")]
    Aiger(String),
    #[error("circuits have different input sets")]
    InputMismatch,
    #[error("cut size {size} out of range 1..={gates}")]
    CutSize { size: usize, gates: usize },
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("circuit is not constant 0: test {counterexample} sets the output to 1")]
    NotConstantZero { counterexample: Bits },
    #[error("{inputs} inputs exceed the enumeration bound of {bound}")]
    TooManyInputs { inputs: usize, bound: usize },
    #[error("clause is tautological")]
    Tautology,
    #[error("assignment does not falsify the clause")]
    NotFalsified,
    #[error("assignment domains do not match")]
    DomainMismatch,
    #[error("variable {0} is not in the assignment domain")]
    UnknownVariable(u32),
    #[error("dimacs line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("target assignment does not satisfy the formula")]
    NotSatisfying,
    #[error("walk reached a satisfying assignment other than the target; target is not nearest")]
    NotNearest,
    #[error("{stage} budget of {limit} exceeded")]
    Budget { stage: Stage, limit: u64 },
    #[error("internal contract violated: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
