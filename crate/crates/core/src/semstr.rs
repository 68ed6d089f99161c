//! Projection of an unsatisfiable formula onto a variable subset while
//! building an SSA of the projection.
//!
//! [`sem_str`] keeps a formula `H(V)`, initially empty. Each round either
//! finds an SSA of `H` (so `H`, and with it `G`, is unsatisfiable) or a
//! model `v` of `H`; [`gen_cls`] then either extends `v` to a model of `G`
//! or returns a clause implied by `G` that `v` falsifies.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::cnf::{from_dimacs, to_dimacs, Assignment, Bits, Clause, CnfFormula, Lit, Var};
use crate::error::{Error, Result};
use crate::sat::{self, SatResult, SolverConfig};
use crate::ssa::{build_ssa, check_ssa, Ssa, SsaOutcome, Violation, DEFAULT_STATE_BUDGET};

/// A formula `H` over `v_set` implied by a source formula, with an SSA.
///
/// `H` uses its own dense variables: local variable `i` is `v_set[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub h: CnfFormula,
    pub ssa: Ssa,
    pub source_id: u64,
    pub v_set: Vec<Var>,
}

impl Projection {
    /// Lifts a clause of `h` to the source formula's variables.
    pub fn lift(&self, c: &Clause) -> Clause {
        c.rename(|v| self.v_set[v.index()])
    }

    /// DIMACS for `h` with the source and variable map in comments,
    /// followed by an `ssa` line and the SSA text.
    pub fn to_text(&self) -> String {
        let mut out = format!("c projection {:016x}\nc onto", self.source_id);
        for v in &self.v_set {
            write!(out, " {}", v.0 + 1).unwrap();
        }
        out.push('\n');
        out.push_str(&to_dimacs(&self.h));
        out.push_str("ssa\n");
        out.push_str(&self.ssa.to_text());
        out
    }

    pub fn from_text(text: &str) -> Result<Projection> {
        let bad = |line: usize, message: &str| Error::Format {
            line,
            message: message.to_string(),
        };
        let split = text
            .lines()
            .position(|l| l.trim() == "ssa")
            .ok_or_else(|| bad(text.lines().count(), "missing `ssa` line"))?;
        let head: Vec<&str> = text.lines().take(split).collect();
        let mut source_id = None;
        let mut v_set = None;
        for (i, l) in head.iter().enumerate() {
            let w: Vec<&str> = l.split_whitespace().collect();
            match w.as_slice() {
                ["c", "projection", id] => {
                    source_id = Some(u64::from_str_radix(id, 16).map_err(|_| bad(i + 1, "bad source id"))?)
                }
                ["c", "onto", rest @ ..] => {
                    let vars: std::result::Result<Vec<Var>, _> = rest
                        .iter()
                        .map(|t| t.parse::<u32>().map(|k| Var(k.saturating_sub(1))))
                        .collect();
                    v_set = Some(vars.map_err(|_| bad(i + 1, "bad variable list"))?);
                }
                _ => {}
            }
        }
        let h = from_dimacs(&head.join("\n"))?;
        let ssa_text: Vec<&str> = text.lines().skip(split + 1).collect();
        let ssa = Ssa::from_text(&ssa_text.join("\n"), &h)?;
        let v_set = v_set.ok_or_else(|| bad(1, "missing `c onto` line"))?;
        if v_set.len() != h.num_vars() {
            return Err(bad(1, "variable map does not match the formula"));
        }
        Ok(Projection {
            h,
            ssa,
            source_id: source_id.ok_or_else(|| bad(1, "missing `c projection` line"))?,
            v_set,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenClsOutcome {
    /// A clause over `v_set` (in the source's variables) implied by the
    /// source and falsified by `v`.
    Clause(Clause),
    /// A model of the source extending `v`.
    Sat(Bits),
}

/// Derives a clause from an unsat core of `g|v`: it collects the
/// variables of `v_set` whose literals the core's parent clauses lost and
/// negates `v` on them.
pub fn gen_cls(g: &CnfFormula, v_set: &[Var], v: &Bits, cfg: &SolverConfig) -> Result<GenClsOutcome> {
    let assignment = Assignment::new(v_set.to_vec(), v.clone())?;
    match sat::solve_extended(g, &assignment, cfg)? {
        SatResult::Sat(model) => Ok(GenClsOutcome::Sat(model.into_bits())),
        SatResult::Unsat(core) => {
            let position = assignment.to_partial(g.num_vars())?;
            let mut used = vec![false; g.num_vars()];
            for (&ci, &touched) in core.clauses.iter().zip(&core.touches_assumption) {
                if !touched {
                    continue;
                }
                for w in g.clauses[ci].vars() {
                    if position[w.index()].is_some() {
                        used[w.index()] = true;
                    }
                }
            }
            let lits = v_set
                .iter()
                .enumerate()
                .filter(|(_, w)| used[w.index()])
                .map(|(i, &w)| Lit::new(w, !v.get(i)));
            Ok(GenClsOutcome::Clause(Clause::new(lits).expect("distinct variables")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SemStrConfig {
    pub solver: SolverConfig,
    pub ssa_budget: u64,
}

impl Default for SemStrConfig {
    fn default() -> Self {
        SemStrConfig {
            solver: SolverConfig::default(),
            ssa_budget: DEFAULT_STATE_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum SemStrOutcome {
    Projection(Projection),
    /// A model of the source formula.
    Sat(Bits),
}

/// Runs the projection loop over `v_set` with every SSA centred at
/// `center` (all zeros if `None`).
pub fn sem_str(g: &CnfFormula, v_set: &[Var], center: Option<&Bits>, cfg: &SemStrConfig) -> Result<SemStrOutcome> {
    if let Some(w) = v_set.iter().find(|w| w.index() >= g.num_vars()) {
        return Err(Error::UnknownVariable(w.0));
    }
    if v_set.iter().collect::<HashSet<_>>().len() != v_set.len() {
        return Err(Error::Contract("projection variables repeat".into()));
    }
    let center = match center {
        Some(c) if c.len() != v_set.len() => return Err(Error::DomainMismatch),
        Some(c) => c.clone(),
        None => Bits::zeros(v_set.len()),
    };
    let mut local_of = vec![u32::MAX; g.num_vars()];
    for (i, w) in v_set.iter().enumerate() {
        local_of[w.index()] = i as u32;
    }
    let mut h = CnfFormula::new(g.vars.restrict(v_set));
    let mut refuted: HashSet<Bits> = HashSet::new();
    loop {
        match build_ssa(&h, &center, cfg.ssa_budget)? {
            SsaOutcome::Ssa(ssa) => {
                return Ok(SemStrOutcome::Projection(Projection {
                    h,
                    ssa,
                    source_id: g.fingerprint(),
                    v_set: v_set.to_vec(),
                }))
            }
            SsaOutcome::Sat(v) => {
                if !refuted.insert(v.clone()) {
                    return Err(Error::Contract(format!("model {v} of the projection recurred")));
                }
                match gen_cls(g, v_set, &v, &cfg.solver)? {
                    GenClsOutcome::Sat(model) => return Ok(SemStrOutcome::Sat(model)),
                    GenClsOutcome::Clause(c) => {
                        let local = c.rename(|w| Var(local_of[w.index()]));
                        if local.is_satisfied_by(&v) {
                            return Err(Error::Contract(format!("derived clause is not falsified by {v}")));
                        }
                        h.push(local)?;
                    }
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjectionCheck {
    Valid,
    SourceMismatch,
    /// Clause of `h` (by index) that the source does not imply.
    NotImplied(usize),
    NotStable(Violation),
}

/// Re-derives every clause of `p.h` from `g` by SAT and re-checks the SSA.
pub fn verify_projection(g: &CnfFormula, p: &Projection, cfg: &SolverConfig) -> Result<ProjectionCheck> {
    if p.source_id != g.fingerprint() || p.v_set.len() != p.h.num_vars() {
        return Ok(ProjectionCheck::SourceMismatch);
    }
    if p.v_set.iter().any(|w| w.index() >= g.num_vars()) {
        return Ok(ProjectionCheck::SourceMismatch);
    }
    for (i, c) in p.h.clauses.iter().enumerate() {
        if !sat::implies(g, &p.lift(c), cfg)? {
            return Ok(ProjectionCheck::NotImplied(i));
        }
    }
    Ok(match check_ssa(&p.h, &p.ssa) {
        Ok(()) => ProjectionCheck::Valid,
        Err(v) => ProjectionCheck::NotStable(v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::fixtures::eqv;
    use crate::cnf::{encode_circuit, tseitin_encode};
    use crate::testing::{brute_force_sat, exists_projection, random_cnf, truth_table};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn inputs() -> Vec<Var> {
        (0..3).map(Var).collect()
    }

    fn projection(out: SemStrOutcome) -> Projection {
        match out {
            SemStrOutcome::Projection(p) => p,
            SemStrOutcome::Sat(m) => panic!("unexpected model {m}"),
        }
    }

    #[test]
    fn gen_cls_resolves_away_w() {
        let g = CnfFormula::from_signed(2, &[&[1, 2], &[1, -2]]).unwrap();
        let cfg = SolverConfig::default();
        let out = gen_cls(&g, &[Var(0)], &"0".parse().unwrap(), &cfg).unwrap();
        assert_eq!(out, GenClsOutcome::Clause(Clause::new([Lit::pos(Var(0))]).unwrap()));
        let GenClsOutcome::Sat(m) = gen_cls(&g, &[Var(0)], &"1".parse().unwrap(), &cfg).unwrap() else {
            panic!()
        };
        assert!(m.get(0) && g.is_satisfied_by(&m));
    }

    #[test]
    fn gen_cls_on_the_reference_encoding() {
        let g = tseitin_encode(&eqv());
        let v: Bits = "101".parse().unwrap();
        let GenClsOutcome::Clause(c) = gen_cls(&g, &inputs(), &v, &SolverConfig::default()).unwrap() else {
            panic!()
        };
        assert!(!c.is_satisfied_by(&v));
        // implied: every input assignment falsifying c has no model
        for k in 0..8 {
            let x = Bits::from_index(3, k);
            if !c.is_satisfied_by(&x) {
                let vx = Assignment::new(inputs(), x).unwrap();
                assert!(!sat::solve_extended(&g, &vx, &SolverConfig::default()).unwrap().is_sat());
            }
        }
    }

    #[test]
    fn reference_projection_on_inputs() {
        let g = tseitin_encode(&eqv());
        let p = projection(sem_str(&g, &inputs(), None, &SemStrConfig::default()).unwrap());
        assert!(truth_table(&p.h).iter().all(|&m| !m));
        assert_eq!(truth_table(&p.h), exists_projection(&g, &inputs()));
        assert_eq!(
            verify_projection(&g, &p, &SolverConfig::default()).unwrap(),
            ProjectionCheck::Valid
        );
        assert_eq!(p.ssa.center().to_string(), "000");
    }

    #[test]
    fn contradiction_projects_to_a_contradiction() {
        let g = CnfFormula::from_signed(1, &[&[1], &[-1]]).unwrap();
        let p = projection(sem_str(&g, &[Var(0)], None, &SemStrConfig::default()).unwrap());
        assert!(brute_force_sat(&p.h).is_none());
    }

    #[test]
    fn satisfiable_source() {
        let g = encode_circuit(&eqv()).consistency();
        match sem_str(&g, &inputs(), None, &SemStrConfig::default()).unwrap() {
            SemStrOutcome::Sat(m) => assert!(g.is_satisfied_by(&m)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn v_independent_refutation_gives_the_empty_clause() {
        // Unsat over w alone; x is irrelevant.
        let g = CnfFormula::from_signed(2, &[&[2], &[-2], &[1, 2]]).unwrap();
        let p = projection(sem_str(&g, &[Var(0)], None, &SemStrConfig::default()).unwrap());
        assert_eq!(p.h.clauses, vec![Clause::empty()]);
        assert_eq!(p.ssa.len(), 1);
    }

    #[test]
    fn verification_rejects_tampering() {
        let g = tseitin_encode(&eqv());
        let cfg = SolverConfig::default();
        let p = projection(sem_str(&g, &inputs(), None, &SemStrConfig::default()).unwrap());
        // An unsat source implies every clause, so tamper against a sat one.
        let sat_g = CnfFormula::from_signed(2, &[&[1], &[1, 2]]).unwrap();
        let wrong_h = CnfFormula::from_signed(1, &[&[-1]]).unwrap();
        let bad = Projection {
            ssa: Ssa::new(&wrong_h, "1".parse().unwrap(), [("1".parse().unwrap(), 0)]).unwrap(),
            h: wrong_h,
            source_id: sat_g.fingerprint(),
            v_set: vec![Var(0)],
        };
        assert_eq!(
            verify_projection(&sat_g, &bad, &cfg).unwrap(),
            ProjectionCheck::NotImplied(0)
        );
        let empty_h = CnfFormula::new(g.vars.restrict(&inputs()));
        let empty = Projection {
            ssa: Ssa::new(&empty_h, Bits::zeros(3), []).unwrap(),
            h: empty_h,
            source_id: g.fingerprint(),
            v_set: inputs(),
        };
        assert!(matches!(
            verify_projection(&g, &empty, &cfg).unwrap(),
            ProjectionCheck::NotStable(_)
        ));
        assert_eq!(
            verify_projection(&tseitin_encode(&crate::testing::buf()), &p, &cfg).unwrap(),
            ProjectionCheck::SourceMismatch
        );
    }

    #[test]
    fn text_round_trip() {
        let g = tseitin_encode(&eqv());
        let p = projection(sem_str(&g, &inputs(), None, &SemStrConfig::default()).unwrap());
        assert_eq!(Projection::from_text(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn random_formulas_project_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(2..=10);
            let m = rng.gen_range(1..=40);
            let g = random_cnf(&mut rng, n, m, 3);
            let mut vars: Vec<Var> = (0..n as u32).map(Var).collect();
            vars.shuffle(&mut rng);
            vars.truncate(rng.gen_range(1..=n));
            match sem_str(&g, &vars, None, &SemStrConfig::default()).unwrap() {
                SemStrOutcome::Sat(m) => assert!(g.is_satisfied_by(&m)),
                SemStrOutcome::Projection(p) => {
                    assert!(brute_force_sat(&g).is_none());
                    assert_eq!(truth_table(&p.h), exists_projection(&g, &vars));
                    assert_eq!(
                        verify_projection(&g, &p, &SolverConfig::default()).unwrap(),
                        ProjectionCheck::Valid
                    );
                }
            }
        }
    }
}
