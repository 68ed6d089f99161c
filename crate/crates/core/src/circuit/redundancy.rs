//! Redundancy of constant-zero circuits with respect to internal cuts.

use std::collections::HashSet;

use crate::cnf::{tseitin_encode, Bits};
use crate::error::{Error, Result};
use crate::sat::{self, SatResult, SolverConfig};

use super::{subcircuit_above_cut, sweep_cuts, Circuit, Cut};

/// Largest input count for which exhaustive enumeration is attempted.
pub const DEFAULT_ENUMERATION_BOUND: usize = 22;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Redundancy {
    /// No swept cut has a constant-zero circuit above it. The sweep is a
    /// canonical family of cuts, not all of them.
    Nonredundant,
    /// The first swept cut (from the output down) whose upper part is
    /// already constant 0.
    RedundantAt(Cut),
}

fn constant_zero(n: &Circuit, cfg: &SolverConfig) -> Result<Option<Bits>> {
    match sat::solve(&tseitin_encode(n), cfg)? {
        SatResult::Unsat(_) => Ok(None),
        SatResult::Sat(model) => Ok(Some(model.bits().prefix(n.num_inputs()))),
    }
}

/// Checks `n ≡ 0` and then whether any swept cut `R` has `N_R ≡ 0`.
pub fn check_nonredundant(n: &Circuit, cfg: &SolverConfig) -> Result<Redundancy> {
    if let Some(x) = constant_zero(n, cfg)? {
        return Err(Error::NotConstantZero { counterexample: x });
    }
    for cut in sweep_cuts(n) {
        let upper = subcircuit_above_cut(n, &cut)?;
        if constant_zero(&upper, cfg)?.is_none() {
            return Ok(Redundancy::RedundantAt(cut));
        }
    }
    Ok(Redundancy::Nonredundant)
}

/// `T_R`: the distinct cut-boundary values (see [`Cut::boundary`]) that
/// `n` produces under the given tests, in first-occurrence order.
pub fn cut_image(n: &Circuit, r: &Cut, tests: &[Bits]) -> Vec<Bits> {
    let positions: Vec<usize> = r.boundary().iter().map(|v| v.index()).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in tests {
        let image = n.simulate(t).select(&positions);
        if seen.insert(image.clone()) {
            out.push(image);
        }
    }
    out
}

/// `T*_R`: boundary values that no input assignment produces, ascending.
pub fn unreachable_cut_assignments(n: &Circuit, r: &Cut, bound: usize) -> Result<Vec<Bits>> {
    let width = r.boundary().len();
    for count in [n.num_inputs(), width] {
        if count > bound {
            return Err(Error::TooManyInputs { inputs: count, bound });
        }
    }
    r.gates_above(n)?;
    let all: Vec<Bits> = (0..1u64 << n.num_inputs())
        .map(|k| Bits::from_index(n.num_inputs(), k))
        .collect();
    let reachable: HashSet<Bits> = cut_image(n, r, &all).into_iter().collect();
    Ok((0..1u64 << width)
        .map(|k| Bits::from_index(width, k))
        .filter(|b| !reachable.contains(b))
        .collect())
}
