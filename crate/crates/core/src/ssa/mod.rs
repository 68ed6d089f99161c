//! Stable sets of assignments.
//!
//! Assignments are dense bit vectors over the formula's variables
//! `0..num_vars`. An [`Ssa`] stores its points in discovery order together
//! with the AC-mapping `Φ` as clause indices.

mod build;
mod search;

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;

use crate::cnf::{Bits, CnfFormula};
use crate::error::{Error, Result};

pub use build::{build_path, build_ssa, lowest_clause, SsaOutcome, DEFAULT_STATE_BUDGET};
pub use search::{find_ssa_within, SearchOutcome, DEFAULT_SEARCH_BUDGET};

#[derive(Clone, Debug)]
pub struct Ssa {
    num_vars: usize,
    formula_id: u64,
    center: Bits,
    points: Vec<Bits>,
    clause_of: Vec<usize>,
    index: HashMap<Bits, usize>,
}

impl PartialEq for Ssa {
    fn eq(&self, other: &Self) -> bool {
        self.num_vars == other.num_vars
            && self.formula_id == other.formula_id
            && self.center == other.center
            && self.points == other.points
            && self.clause_of == other.clause_of
    }
}

impl Eq for Ssa {}

impl Ssa {
    /// Candidate SSA of `h` from `(point, clause index)` pairs. Nothing is
    /// checked beyond uniqueness of points; see [`check_ssa`].
    pub fn new(h: &CnfFormula, center: Bits, pairs: impl IntoIterator<Item = (Bits, usize)>) -> Result<Ssa> {
        Self::from_parts(h.num_vars(), h.fingerprint(), center, pairs)
    }

    pub(crate) fn from_parts(
        num_vars: usize,
        formula_id: u64,
        center: Bits,
        pairs: impl IntoIterator<Item = (Bits, usize)>,
    ) -> Result<Ssa> {
        let mut ssa = Ssa {
            num_vars,
            formula_id,
            center,
            points: Vec::new(),
            clause_of: Vec::new(),
            index: HashMap::new(),
        };
        for (p, c) in pairs {
            if p.len() != num_vars {
                return Err(Error::DomainMismatch);
            }
            if ssa.index.insert(p.clone(), ssa.points.len()).is_some() {
                return Err(Error::Contract(format!("point {p} listed twice")));
            }
            ssa.points.push(p);
            ssa.clause_of.push(c);
        }
        if ssa.center.len() != num_vars {
            return Err(Error::DomainMismatch);
        }
        Ok(ssa)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Fingerprint of the formula this set was built for.
    pub fn formula_id(&self) -> u64 {
        self.formula_id
    }

    pub fn center(&self) -> &Bits {
        &self.center
    }

    pub fn points(&self) -> &[Bits] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Bits) -> bool {
        self.index.contains_key(p)
    }

    /// `Φ(p)`, if `p` is a point.
    pub fn clause_of(&self, p: &Bits) -> Option<usize> {
        self.index.get(p).map(|&i| self.clause_of[i])
    }

    /// Points with their clauses, in discovery order.
    pub fn iter(&self) -> impl Iterator<Item = (&Bits, usize)> {
        self.points.iter().zip(self.clause_of.iter().copied())
    }

    /// Same points and mapping with each point's bits replaced by `f`.
    /// The result is not re-indexed by formula.
    pub fn map_points(&self, mut f: impl FnMut(&Bits) -> Bits) -> Vec<(Bits, usize)> {
        self.iter().map(|(p, c)| (f(p), c)).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("center {}\n", self.center);
        for (p, c) in self.iter() {
            writeln!(out, "{p} {c}").unwrap();
        }
        out
    }

    /// Parses [`Ssa::to_text`] output as a candidate SSA of `h`.
    pub fn from_text(text: &str, h: &CnfFormula) -> Result<Ssa> {
        let bad = |line: usize, message: &str| Error::Format {
            line,
            message: message.to_string(),
        };
        let mut center = None;
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let words: Vec<&str> = t.split_whitespace().collect();
            if center.is_none() {
                match words.as_slice() {
                    ["center", bits] => {
                        let b: Bits = bits.parse().map_err(|_| bad(lineno, "bad center bits"))?;
                        if b.len() != h.num_vars() {
                            return Err(bad(lineno, "center width differs from the formula"));
                        }
                        center = Some(b);
                    }
                    _ => return Err(bad(lineno, "expected `center <bits>`")),
                }
                continue;
            }
            match words.as_slice() {
                [bits, clause] => {
                    let b: Bits = bits.parse().map_err(|_| bad(lineno, "bad point bits"))?;
                    if b.len() != h.num_vars() {
                        return Err(bad(lineno, "point width differs from the formula"));
                    }
                    let c: usize = clause.parse().map_err(|_| bad(lineno, "bad clause index"))?;
                    pairs.push((b, c));
                }
                _ => return Err(bad(lineno, "expected `<bits> <clause-index>`")),
            }
        }
        let center = center.ok_or_else(|| bad(text.lines().count(), "missing center line"))?;
        Ssa::new(h, center, pairs)
    }
}

/// Which neighbourhood the closure condition uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Closure {
    /// `Nbhd(p_init, p, Φ(p)) ⊆ P`.
    #[default]
    Centered,
    /// `Nbhd(p, Φ(p)) ⊆ P`; the center plays no role.
    Uncentered,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    FormulaMismatch,
    CenterMissing,
    ClauseOutOfRange { point: Bits, clause: usize },
    NotFalsified { point: Bits, clause: usize },
    MissingNeighbor { point: Bits, clause: usize, neighbor: Bits },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FormulaMismatch => write!(f, "built for a different formula"),
            Violation::CenterMissing => write!(f, "center is not a point"),
            Violation::ClauseOutOfRange { point, clause } => {
                write!(f, "point {point} maps to missing clause {clause}")
            }
            Violation::NotFalsified { point, clause } => {
                write!(f, "point {point} does not falsify clause {clause}")
            }
            Violation::MissingNeighbor {
                point,
                clause,
                neighbor,
            } => {
                write!(f, "neighbor {neighbor} of point {point} via clause {clause} is missing")
            }
        }
    }
}

/// Checks the SSA conditions; `Err` carries the first violation.
pub fn check_ssa(h: &CnfFormula, cand: &Ssa) -> std::result::Result<(), Violation> {
    check_ssa_with(h, cand, Closure::Centered)
}

pub fn check_ssa_with(h: &CnfFormula, cand: &Ssa, closure: Closure) -> std::result::Result<(), Violation> {
    if cand.num_vars != h.num_vars() || cand.formula_id != h.fingerprint() {
        return Err(Violation::FormulaMismatch);
    }
    if closure == Closure::Centered && !cand.contains(&cand.center) {
        return Err(Violation::CenterMissing);
    }
    for (p, ci) in cand.iter() {
        let Some(c) = h.clauses.get(ci) else {
            return Err(Violation::ClauseOutOfRange {
                point: p.clone(),
                clause: ci,
            });
        };
        if c.is_satisfied_by(p) {
            return Err(Violation::NotFalsified {
                point: p.clone(),
                clause: ci,
            });
        }
        for l in c.lits() {
            let i = l.var().index();
            if closure == Closure::Centered && p.get(i) != cand.center.get(i) {
                continue;
            }
            let q = p.flipped(i);
            if !cand.contains(&q) {
                return Err(Violation::MissingNeighbor {
                    point: p.clone(),
                    clause: ci,
                    neighbor: q,
                });
            }
        }
    }
    Ok(())
}
