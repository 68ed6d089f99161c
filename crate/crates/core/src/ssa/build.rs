use std::collections::{HashSet, VecDeque};

use crate::cnf::{directed_flips, Bits, CnfFormula};
use crate::error::{Error, Result, Stage};

use super::Ssa;

/// Default cap on the number of assignments [`build_ssa`] may examine.
pub const DEFAULT_STATE_BUDGET: u64 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SsaOutcome {
    Ssa(Ssa),
    /// A satisfying assignment met during the search.
    Sat(Bits),
}

/// Clause-choice rule that always takes the first falsified clause.
pub fn lowest_clause(_p: &Bits, _falsified: &[usize]) -> usize {
    0
}

/// Walks from `p_init` to `s`, each step flipping one variable of a
/// falsified clause on which the current point and `s` disagree. `rule`
/// picks a position in the (ascending) list of falsified clauses.
pub fn build_path(
    h: &CnfFormula,
    p_init: &Bits,
    s: &Bits,
    mut rule: impl FnMut(&Bits, &[usize]) -> usize,
) -> Result<Vec<Bits>> {
    if p_init.len() != h.num_vars() || s.len() != h.num_vars() {
        return Err(Error::DomainMismatch);
    }
    if !h.is_satisfied_by(s) {
        return Err(Error::NotSatisfying);
    }
    let mut p = p_init.clone();
    let mut path = vec![p.clone()];
    while &p != s {
        let falsified = h.falsified_by(&p);
        if falsified.is_empty() {
            return Err(Error::NotNearest);
        }
        let c = &h.clauses[falsified[rule(&p, &falsified) % falsified.len()]];
        let v = c
            .vars()
            .map(|v| v.index())
            .find(|&i| p.get(i) != s.get(i))
            .expect("s satisfies every clause p falsifies");
        p.flip(v);
        path.push(p.clone());
    }
    Ok(path)
}

/// Breadth-first construction of an SSA of `h` centred at `p_init`.
///
/// Each examined point takes the falsified clause that adds the fewest
/// unseen directed neighbours to the queue, lowest index on ties.
pub fn build_ssa(h: &CnfFormula, p_init: &Bits, budget: u64) -> Result<SsaOutcome> {
    if p_init.len() != h.num_vars() {
        return Err(Error::DomainMismatch);
    }
    let mut seen: HashSet<Bits> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut examined = Vec::new();
    seen.insert(p_init.clone());
    queue.push_back(p_init.clone());
    while let Some(p) = queue.pop_front() {
        if examined.len() as u64 >= budget {
            return Err(Error::Budget {
                stage: Stage::BuildSsa,
                limit: budget,
            });
        }
        let mut best: Option<(usize, usize)> = None;
        for (ci, c) in h.clauses.iter().enumerate() {
            if c.is_satisfied_by(&p) {
                continue;
            }
            let fresh = directed_flips(p_init, &p, c)
                .filter(|&i| !seen.contains(&p.flipped(i)))
                .count();
            if best.is_none_or(|(_, n)| fresh < n) {
                best = Some((ci, fresh));
                if fresh == 0 {
                    break;
                }
            }
        }
        let Some((ci, _)) = best else {
            return Ok(SsaOutcome::Sat(p));
        };
        for i in directed_flips(p_init, &p, &h.clauses[ci]) {
            let q = p.flipped(i);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
        examined.push((p, ci));
    }
    Ok(SsaOutcome::Ssa(Ssa::new(h, p_init.clone(), examined)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ssa::check_ssa;
    use crate::testing::{brute_force_models, random_cnf};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn b(s: &str) -> Bits {
        s.parse().unwrap()
    }

    fn points(o: &SsaOutcome) -> Vec<String> {
        match o {
            SsaOutcome::Ssa(s) => s.points().iter().map(|p| p.to_string()).collect(),
            SsaOutcome::Sat(m) => panic!("unexpected model {m}"),
        }
    }

    #[test]
    fn example_formula_ssa() {
        let h = CnfFormula::from_signed(3, &[&[1, 2, 3], &[-1], &[-2], &[-3]]).unwrap();
        let out = build_ssa(&h, &b("000"), DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(points(&out), ["000", "100", "010", "001"]);
        let SsaOutcome::Ssa(s) = out else { unreachable!() };
        assert_eq!(s.iter().map(|(_, c)| c).collect::<Vec<_>>(), [0, 1, 2, 3]);
        assert_eq!(check_ssa(&h, &s), Ok(()));
    }

    #[test]
    fn projected_formula_ssa() {
        // ¬x1∨¬x3, ¬x2∨¬x3, x1∨x2, x3
        let h = CnfFormula::from_signed(3, &[&[-1, -3], &[-2, -3], &[1, 2], &[3]]).unwrap();
        let out = build_ssa(&h, &b("000"), DEFAULT_STATE_BUDGET).unwrap();
        let mut p = points(&out);
        p.sort();
        assert_eq!(p, ["000", "001", "011", "101"]);
    }

    #[test]
    fn satisfiable_unit() {
        let h = CnfFormula::from_signed(1, &[&[1]]).unwrap();
        for c in ["0", "1"] {
            assert_eq!(build_ssa(&h, &b(c), 10).unwrap(), SsaOutcome::Sat(b("1")));
        }
    }

    #[test]
    fn empty_clause_gives_one_point() {
        let mut h = CnfFormula::from_signed(2, &[&[1]]).unwrap();
        h.push(crate::cnf::Clause::empty()).unwrap();
        let out = build_ssa(&h, &b("11"), 10).unwrap();
        assert_eq!(points(&out), ["11"]);
    }

    #[test]
    fn budget_exhaustion() {
        let h = CnfFormula::from_signed(3, &[&[1, 2, 3], &[-1], &[-2], &[-3]]).unwrap();
        assert!(matches!(
            build_ssa(&h, &b("000"), 2),
            Err(Error::Budget {
                stage: Stage::BuildSsa,
                limit: 2
            })
        ));
    }

    #[test]
    fn path_examples() {
        let h = CnfFormula::from_signed(3, &[&[1, 2, 3], &[-2], &[-3]]).unwrap();
        let path = build_path(&h, &b("000"), &b("100"), lowest_clause).unwrap();
        assert_eq!(path, [b("000"), b("100")]);
        assert_eq!(build_path(&h, &b("100"), &b("100"), lowest_clause).unwrap(), [b("100")]);
        let h = CnfFormula::from_signed(3, &[&[1, 2, 3], &[-1], &[-2]]).unwrap();
        assert_eq!(
            build_path(&h, &b("000"), &b("001"), lowest_clause).unwrap(),
            [b("000"), b("001")]
        );
        assert!(matches!(
            build_path(&h, &b("000"), &b("100"), lowest_clause),
            Err(Error::NotSatisfying)
        ));
    }

    #[test]
    fn path_stops_at_a_closer_model() {
        // 110 and 100 both satisfy (x1); walking from 000 to 110 meets 100.
        let h = CnfFormula::from_signed(3, &[&[1]]).unwrap();
        assert!(matches!(
            build_path(&h, &b("000"), &b("110"), lowest_clause),
            Err(Error::NotNearest)
        ));
    }

    #[test]
    fn agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let n = rng.gen_range(1..=8);
            let m = rng.gen_range(0..=30);
            let h = random_cnf(&mut rng, n, m, 3);
            let center = Bits::from_index(n, rng.gen_range(0..1u64 << n));
            match build_ssa(&h, &center, DEFAULT_STATE_BUDGET).unwrap() {
                SsaOutcome::Ssa(s) => {
                    assert!(brute_force_models(&h).is_empty());
                    assert_eq!(check_ssa(&h, &s), Ok(()));
                }
                SsaOutcome::Sat(m) => assert!(h.is_satisfied_by(&m)),
            }
        }
    }
}
