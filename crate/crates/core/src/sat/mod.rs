//! Satisfiability with unsat cores over original clause indices.
//!
//! Every input clause `C_i` is guarded by a selector `s_i` (the solver sees
//! `C_i ∨ ¬s_i` and assumes every `s_i`). When the search fails, the final
//! conflict over selectors names the clauses used.

mod solver;

use crate::cnf::{Assignment, Bits, Clause, CnfFormula, Lit, Var};
use crate::error::{Error, Result, Stage};

use solver::{Search, Solver};

pub const DEFAULT_CONFLICT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Conflicts allowed per solver call before giving up.
    pub conflict_budget: u64,
    /// Perturbs the initial variable order.
    pub seed: u64,
    /// Drop core clauses one at a time while the rest stays unsatisfiable.
    pub shrink_core: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            conflict_budget: DEFAULT_CONFLICT_BUDGET,
            seed: 0,
            shrink_core: false,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        SolverConfig { seed, ..self }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnsatCore {
    /// Original clause indices, ascending.
    pub clauses: Vec<usize>,
    /// Per core clause: whether cofactoring by the assumption removed one of
    /// its literals. Always false for [`solve`].
    pub touches_assumption: Vec<bool>,
}

impl UnsatCore {
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    /// A model over all variables of the formula.
    Sat(Assignment),
    Unsat(UnsatCore),
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }

    pub fn model(&self) -> Option<&Assignment> {
        match self {
            SatResult::Sat(m) => Some(m),
            SatResult::Unsat(_) => None,
        }
    }
}

enum Outcome {
    Sat(Vec<bool>),
    Unsat(Vec<usize>),
}

/// Solves the conjunction of `clauses[i]` for `i` in `active`.
fn run(num_vars: usize, clauses: &[Clause], active: &[usize], cfg: &SolverConfig) -> Result<Outcome> {
    let mut s = Solver::new(num_vars + active.len(), cfg.seed);
    let mut assumptions = Vec::with_capacity(active.len());
    let mut lits = Vec::new();
    for (k, &i) in active.iter().enumerate() {
        let sel = Var((num_vars + k) as u32);
        lits.clear();
        lits.extend_from_slice(clauses[i].lits());
        lits.push(Lit::neg(sel));
        s.add_clause(&lits);
        assumptions.push(Lit::pos(sel));
    }
    match s.solve(&assumptions, cfg.conflict_budget) {
        Search::Sat(mut model) => {
            model.truncate(num_vars);
            Ok(Outcome::Sat(model))
        }
        Search::Unsat(failed) => {
            let mut core: Vec<usize> = failed.into_iter().map(|l| active[l.var().index() - num_vars]).collect();
            core.sort_unstable();
            core.dedup();
            Ok(Outcome::Unsat(core))
        }
        Search::Budget => Err(Error::Budget {
            stage: Stage::Sat,
            limit: cfg.conflict_budget,
        }),
    }
}

fn solve_clauses(num_vars: usize, clauses: &[Clause], cfg: &SolverConfig) -> Result<Outcome> {
    let all: Vec<usize> = (0..clauses.len()).collect();
    let out = run(num_vars, clauses, &all, cfg)?;
    let Outcome::Unsat(mut core) = out else {
        return Ok(out);
    };
    if cfg.shrink_core {
        let mut k = 0;
        while k < core.len() {
            let trial: Vec<usize> = core
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &c)| c)
                .collect();
            match run(num_vars, clauses, &trial, cfg)? {
                Outcome::Unsat(smaller) => core = smaller,
                Outcome::Sat(_) => k += 1,
            }
        }
    }
    Ok(Outcome::Unsat(core))
}

/// Decides `f`. Deterministic for a fixed formula and configuration.
pub fn solve(f: &CnfFormula, cfg: &SolverConfig) -> Result<SatResult> {
    Ok(match solve_clauses(f.num_vars(), &f.clauses, cfg)? {
        Outcome::Sat(model) => SatResult::Sat(Assignment::dense(Bits::from_bools(&model))),
        Outcome::Unsat(core) => SatResult::Unsat(UnsatCore {
            touches_assumption: vec![false; core.len()],
            clauses: core,
        }),
    })
}

/// Decides `f ∧ v` by solving the cofactor `f|v`. A model extends `v`; a
/// core is reported in terms of `f`'s clause indices.
pub fn solve_extended(f: &CnfFormula, v: &Assignment, cfg: &SolverConfig) -> Result<SatResult> {
    let (reduced, parents) = f.cofactor(v)?;
    Ok(match solve_clauses(f.num_vars(), &reduced.clauses, cfg)? {
        Outcome::Sat(mut model) => {
            for (i, &var) in v.domain().iter().enumerate() {
                model[var.index()] = v.bits().get(i);
            }
            SatResult::Sat(Assignment::dense(Bits::from_bools(&model)))
        }
        Outcome::Unsat(core) => {
            let mut pairs: Vec<(usize, bool)> = core
                .into_iter()
                .map(|r| (parents[r], reduced.clauses[r].len() < f.clauses[parents[r]].len()))
                .collect();
            pairs.sort_unstable();
            SatResult::Unsat(UnsatCore {
                clauses: pairs.iter().map(|p| p.0).collect(),
                touches_assumption: pairs.iter().map(|p| p.1).collect(),
            })
        }
    })
}

/// Whether `f` implies `c`, i.e. `f ∧ ¬c` is unsatisfiable.
pub fn implies(f: &CnfFormula, c: &Clause, cfg: &SolverConfig) -> Result<bool> {
    let domain: Vec<Var> = c.vars().collect();
    let bits = Bits::from_bools(&c.lits().iter().map(|l| !l.is_positive()).collect::<Vec<_>>());
    let refute = Assignment::new(domain, bits)?;
    Ok(!solve_extended(f, &refute, cfg)?.is_sat())
}
