use std::collections::HashSet;

use crate::circuit::{
    check_nonredundant, cut_image, subcircuit_above_cut, unreachable_cut_assignments, Circuit, Cut, Redundancy,
    DEFAULT_ENUMERATION_BOUND,
};
use crate::cnf::{encode_circuit, Bits};
use crate::error::{Error, Result};
use crate::sat::SolverConfig;
use crate::ssa::{find_ssa_within, SearchOutcome, Ssa};

use super::{TestKind, TestSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CtsVerdict {
    /// The cubes of the tests contain this SSA of `F_N ∧ z`.
    Complete(Ssa),
    NotComplete,
    /// The search budget ran out.
    Inconclusive,
}

impl CtsVerdict {
    pub fn is_complete(&self) -> bool {
        matches!(self, CtsVerdict::Complete(_))
    }
}

fn cube_point(x: &Bits, rest: &Bits) -> Bits {
    Bits::from_bools(&x.iter().chain(rest.iter()).collect::<Vec<bool>>())
}

/// Decides whether the cubes of `t` contain an SSA of `F_N ∧ z`.
///
/// Centres tried: the execution traces of the tests in order, then every
/// other cube point. `budget` bounds the points the search evaluates.
pub fn verify_cts(n: &Circuit, t: &TestSet, budget: u64) -> Result<CtsVerdict> {
    let nx = n.num_inputs();
    if t.num_inputs != nx {
        return Err(Error::DomainMismatch);
    }
    let g = encode_circuit(n).formula;
    let rest = g.num_vars() - nx;
    let traces: Vec<Bits> = t.tests().iter().map(|x| n.simulate(x)).collect();
    let trace_set: HashSet<Bits> = traces.iter().cloned().collect();
    let span = 1u64 << rest.min(63);
    let others = t
        .tests()
        .iter()
        .flat_map(move |x| (0..span).map(move |k| cube_point(x, &Bits::from_index(rest, k))));
    let centers = traces
        .clone()
        .into_iter()
        .chain(others.filter(|p| !trace_set.contains(p)));
    let allowed = |p: &Bits| t.contains(&p.prefix(nx));
    match find_ssa_within(&g, &allowed, centers, budget) {
        Ok(SearchOutcome::Found(s)) => Ok(CtsVerdict::Complete(s)),
        Ok(SearchOutcome::NotFound) => Ok(CtsVerdict::NotComplete),
        Err(Error::Budget { .. }) => Ok(CtsVerdict::Inconclusive),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedundancyAwareVerdict {
    /// The redundant cut the check moved to, if any.
    pub cut: Option<Cut>,
    /// Verdict for `n`, or for the circuit above `cut`.
    pub verdict: CtsVerdict,
}

/// Checks `t` against the first swept cut `R` whose upper part `N_R` is
/// constant 0: the cut values `t` produces, together with all boundary
/// values no input produces, must form a CTS of `N_R`. Without a redundant
/// cut this is [`verify_cts`].
pub fn redundancy_aware_verify(
    n: &Circuit,
    t: &TestSet,
    solver: &SolverConfig,
    budget: u64,
) -> Result<RedundancyAwareVerdict> {
    if t.num_inputs != n.num_inputs() {
        return Err(Error::DomainMismatch);
    }
    match check_nonredundant(n, solver)? {
        Redundancy::Nonredundant => Ok(RedundancyAwareVerdict {
            cut: None,
            verdict: verify_cts(n, t, budget)?,
        }),
        Redundancy::RedundantAt(r) => {
            let upper = subcircuit_above_cut(n, &r)?;
            let mut lifted = TestSet::for_circuit(&upper, TestKind::Random, t.seed);
            lifted.extend(cut_image(n, &r, t.tests()))?;
            lifted.extend(unreachable_cut_assignments(n, &r, DEFAULT_ENUMERATION_BOUND)?)?;
            Ok(RedundancyAwareVerdict {
                verdict: verify_cts(&upper, &lifted, budget)?,
                cut: Some(r),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::fixtures::eqv;
    use crate::circuit::parse_netlist;
    use crate::ssa::check_ssa;

    fn set(n: &Circuit, tests: &[&str]) -> TestSet {
        let mut t = TestSet::for_circuit(n, TestKind::Cts, 0);
        t.extend(tests.iter().map(|s| s.parse().unwrap())).unwrap();
        t
    }

    #[test]
    fn known_cts_is_accepted() {
        let n = eqv();
        let t = set(&n, &["101", "100", "011", "010", "000"]);
        let CtsVerdict::Complete(s) = verify_cts(&n, &t, 1 << 20).unwrap() else {
            panic!()
        };
        assert_eq!(check_ssa(&encode_circuit(&n).formula, &s), Ok(()));
        assert!(s.points().iter().all(|p| t.contains(&p.prefix(3))));
    }

    #[test]
    fn trivial_and_single_test_sets() {
        let n = eqv();
        let all: Vec<String> = (0..8).map(|k| Bits::from_index(3, k).to_string()).collect();
        let all: Vec<&str> = all.iter().map(|s| s.as_str()).collect();
        assert!(verify_cts(&n, &set(&n, &all), 1 << 20).unwrap().is_complete());
        assert_eq!(
            verify_cts(&n, &set(&n, &["000"]), 1 << 20).unwrap(),
            CtsVerdict::NotComplete
        );
        assert_eq!(verify_cts(&n, &set(&n, &[]), 1 << 20).unwrap(), CtsVerdict::NotComplete);
    }

    /// Subsets of the 8 tests: a CTS iff some SSA fits in their cubes,
    /// checked against exhaustive search from every cube point.
    #[test]
    fn subsets_agree_with_exhaustive_search() {
        let n = eqv();
        let g = encode_circuit(&n).formula;
        for mask in 0u32..256 {
            let tests: Vec<Bits> = (0..8)
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| Bits::from_index(3, k))
                .collect();
            let mut t = TestSet::for_circuit(&n, TestKind::Cts, 0);
            t.extend(tests.clone()).unwrap();
            let allowed = |p: &Bits| t.contains(&p.prefix(3));
            let every = (0..1u64 << g.num_vars())
                .map(|k| Bits::from_index(g.num_vars(), k))
                .filter(|p| allowed(p));
            let oracle = matches!(
                find_ssa_within(&g, &allowed, every, u64::MAX).unwrap(),
                SearchOutcome::Found(_)
            );
            assert_eq!(
                verify_cts(&n, &t, 1 << 20).unwrap().is_complete(),
                oracle,
                "mask {mask:08b}"
            );
        }
    }

    #[test]
    fn budget_is_inconclusive() {
        let n = eqv();
        let t = set(&n, &["101", "100", "011", "010", "000"]);
        assert_eq!(verify_cts(&n, &t, 3).unwrap(), CtsVerdict::Inconclusive);
        let narrow = TestSet::new("c", 2, TestKind::Cts, 0);
        assert!(matches!(verify_cts(&n, &narrow, 10), Err(Error::DomainMismatch)));
    }

    #[test]
    fn nonredundant_falls_back() {
        let n = eqv();
        let t = set(&n, &["101", "100", "011", "010", "000"]);
        let r = redundancy_aware_verify(&n, &t, &SolverConfig::default(), 1 << 20).unwrap();
        assert_eq!(r.cut, None);
        assert!(r.verdict.is_complete());
    }

    #[test]
    fn redundant_circuit_rejects_degenerate_cts() {
        let n = parse_netlist("INPUT a\nINPUT b\ng = AND(a, b)\nng = NOT(g)\nz = AND(g, ng)\nOUTPUT z\n").unwrap();
        let t = set(&n, &["00"]);
        assert!(verify_cts(&n, &t, 1 << 20).unwrap().is_complete());
        let r = redundancy_aware_verify(&n, &t, &SolverConfig::default(), 1 << 20).unwrap();
        let cut = r.cut.expect("redundant");
        assert_eq!(cut.describe(&n), "g");
        assert_eq!(r.verdict, CtsVerdict::NotComplete);
        let both = set(&n, &["00", "11"]);
        assert!(redundancy_aware_verify(&n, &both, &SolverConfig::default(), 1 << 20)
            .unwrap()
            .verdict
            .is_complete());
    }

    #[test]
    fn unreachable_cut_values_alone_can_suffice() {
        let n = parse_netlist(
            "INPUT w\nnw = NOT(w)\na1 = OR(w, nw)\na2 = OR(w, nw)\na3 = OR(w, nw)\n\
             y1 = OR(a1, a2)\ny2 = AND(y1, a3)\ny3 = AND(a1, a3)\ny4 = AND(a2, a3)\n\
             y5 = OR(y3, y4)\nz = XOR(y2, y5)\nOUTPUT z\n",
        )
        .unwrap();
        let empty = set(&n, &[]);
        assert_eq!(verify_cts(&n, &empty, 1 << 20).unwrap(), CtsVerdict::NotComplete);
        let r = redundancy_aware_verify(&n, &empty, &SolverConfig::default(), 1 << 20).unwrap();
        assert!(r.cut.is_some());
        assert!(r.verdict.is_complete());
    }
}
