use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::Circuit;
use crate::cnf::{encode_circuit, Assignment, Bits, CnfFormula, Var};
use crate::error::{Error, Result};
use crate::sat::{self, SatResult, SolverConfig};
use crate::ssa::Ssa;

use super::{with_pool, Test, TestKind, TestSet};

/// Distinct restrictions of the points to `x_positions` (the positions of
/// the inputs within the points), in first-occurrence order.
pub fn extract_tests<'a>(
    points: impl IntoIterator<Item = &'a Bits>,
    x_positions: &[usize],
    mut into: TestSet,
) -> Result<TestSet> {
    for p in points {
        if x_positions.iter().any(|&i| i >= p.len()) {
            return Err(Error::DomainMismatch);
        }
        into.push(p.select(x_positions))?;
    }
    Ok(into)
}

fn point_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Turns points over a strict subset of the inputs into tests. Input
/// `placement[i]` takes bit `i` of each point; other inputs are random.
pub fn complete_partial_tests<'a>(
    points: impl IntoIterator<Item = &'a Bits>,
    placement: &[usize],
    seed: u64,
    mut into: TestSet,
) -> Result<TestSet> {
    let nx = into.num_inputs;
    if placement.iter().any(|&x| x >= nx) {
        return Err(Error::DomainMismatch);
    }
    for (k, p) in points.into_iter().enumerate() {
        if p.len() != placement.len() {
            return Err(Error::DomainMismatch);
        }
        let mut rng = point_rng(seed, k);
        let mut t = Bits::from_bools(&(0..nx).map(|_| rng.gen()).collect::<Vec<bool>>());
        for (i, &x) in placement.iter().enumerate() {
            t.set(x, p.get(i));
        }
        into.push(t)?;
    }
    Ok(into)
}

/// Re-draws, in every point, the bits of variables that occur in no clause
/// of `h`. Each point keeps its clause, which it still falsifies.
pub fn diversify(p: &Ssa, h: &CnfFormula, seed: u64) -> Vec<(Bits, usize)> {
    let occurring = h.occurring();
    let free: Vec<usize> = (0..p.num_vars())
        .filter(|&i| !occurring.get(i).copied().unwrap_or(false))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    p.map_points(|b| {
        let mut b = b.clone();
        for &i in &free {
            b.set(i, rng.gen());
        }
        b
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenTestsConfig {
    /// Relaxation rounds per point without a consistent extension.
    pub tries: usize,
    pub seed: u64,
    pub jobs: usize,
    pub solver: SolverConfig,
}

/// Number of gates removed per relaxation round.
fn relaxed_gate_count(gates: usize) -> usize {
    (gates * 2).div_ceil(100).max(1).min(gates)
}

/// Tests realizing (or, after relaxation, approximating) each point over
/// the cut variables `v_set`.
pub fn gen_tests(n: &Circuit, v_set: &[Var], points: &[Bits], cfg: &GenTestsConfig, into: TestSet) -> Result<TestSet> {
    let enc = encode_circuit(n);
    let fnl = enc.consistency();
    let nx = n.num_inputs();
    let per_point = |k: usize, v: &Bits| -> Result<Vec<Test>> {
        let assignment = Assignment::new(v_set.to_vec(), v.clone())?;
        if let SatResult::Sat(m) = sat::solve_extended(&fnl, &assignment, &cfg.solver)? {
            return Ok(vec![m.bits().prefix(nx)]);
        }
        let mut rng = point_rng(cfg.seed, k);
        let k_gates = relaxed_gate_count(n.num_gates());
        let mut found = Vec::new();
        for _ in 0..cfg.tries {
            let mut removed = vec![false; n.num_gates()];
            for g in sample(&mut rng, n.num_gates(), k_gates) {
                removed[g] = true;
            }
            let mut relaxed = CnfFormula::new(fnl.vars.clone());
            for (g, range) in enc.gate_clauses.iter().enumerate() {
                if !removed[g] {
                    relaxed.clauses.extend_from_slice(&fnl.clauses[range.clone()]);
                }
            }
            if let SatResult::Sat(m) = sat::solve_extended(&relaxed, &assignment, &cfg.solver)? {
                found.push(m.bits().prefix(nx));
            }
        }
        Ok(found)
    };
    let results: Vec<Result<Vec<Test>>> = if cfg.jobs > 1 {
        with_pool(cfg.jobs, || {
            points.par_iter().enumerate().map(|(k, v)| per_point(k, v)).collect()
        })
    } else {
        points.iter().enumerate().map(|(k, v)| per_point(k, v)).collect()
    };
    let mut into = into;
    for r in results {
        into.extend(r?)?;
    }
    Ok(into)
}

/// Empty set of the given kind for `n`, tagged with `seed`.
pub(crate) fn empty_set(n: &Circuit, kind: TestKind, seed: u64) -> TestSet {
    TestSet::for_circuit(n, kind, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::fixtures::eqv;
    use crate::circuit::{cut_image, gen_cut, unreachable_cut_assignments};
    use crate::cnf::CnfFormula;

    fn b(s: &str) -> Bits {
        s.parse().unwrap()
    }

    fn cfg(tries: usize, seed: u64) -> GenTestsConfig {
        GenTestsConfig {
            tries,
            seed,
            jobs: 1,
            solver: SolverConfig::default(),
        }
    }

    #[test]
    fn extraction_keeps_first_occurrences() {
        let pts = [b("0101"), b("0110"), b("1001")];
        let t = extract_tests(&pts, &[0, 1], TestSet::new("c", 2, TestKind::Cts, 0)).unwrap();
        assert_eq!(t.tests(), [b("01"), b("10")]);
        let t = extract_tests(&pts, &[0, 1, 2, 3], TestSet::new("c", 4, TestKind::Cts, 0)).unwrap();
        assert_eq!(t.len(), 3);
        assert!(extract_tests(&pts, &[7], TestSet::new("c", 1, TestKind::Cts, 0)).is_err());
    }

    #[test]
    fn partial_points_get_random_completions() {
        let pts = [b("00"), b("11")];
        let mk =
            |seed| complete_partial_tests(&pts, &[0, 1], seed, TestSet::new("c", 3, TestKind::Ctsaa, seed)).unwrap();
        let t = mk(3);
        assert_eq!(t.len(), 2);
        assert_eq!(t.tests()[0].prefix(2), b("00"));
        assert_eq!(t.tests()[1].prefix(2), b("11"));
        assert_eq!(mk(3), t);
        let none: [Bits; 0] = [];
        assert!(
            complete_partial_tests(&none, &[0, 1], 0, TestSet::new("c", 3, TestKind::Ctsaa, 0))
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn diversify_touches_only_free_bits() {
        // h mentions x1, x2 only
        let mut h = CnfFormula::from_signed(3, &[&[1, 2], &[-1]]).unwrap();
        h.clauses
            .push(crate::cnf::Clause::new([crate::cnf::Lit::neg(Var(1))]).unwrap());
        let ssa = Ssa::new(&h, b("000"), [(b("000"), 0), (b("100"), 1), (b("010"), 2)]).unwrap();
        let d = diversify(&ssa, &h, 1);
        assert_eq!(d, diversify(&ssa, &h, 1));
        for ((p, c), (q, c2)) in ssa.iter().zip(&d) {
            assert_eq!(c, *c2);
            assert_eq!(p.prefix(2), q.prefix(2));
            assert!(!h.clauses[c].is_satisfied_by(q));
        }
        let third: Vec<bool> = (0..64).map(|s| diversify(&ssa, &h, s)[0].0.get(2)).collect();
        assert!(third.contains(&true) && third.contains(&false));
        let full = CnfFormula::from_signed(3, &[&[1, 2, 3], &[-1], &[-2], &[-3]]).unwrap();
        let s2 = Ssa::new(&full, b("000"), [(b("000"), 0)]).unwrap();
        assert_eq!(diversify(&s2, &full, 5), vec![(b("000"), 0)]);
    }

    #[test]
    fn reachable_cut_values_are_inverted() {
        let n = eqv();
        let r = gen_cut(&n, 2).unwrap();
        let v = r.boundary();
        for k in 0..8 {
            let x = Bits::from_index(3, k);
            let image = cut_image(&n, &r, std::slice::from_ref(&x));
            let t = gen_tests(&n, &v, &image, &cfg(0, 0), TestSet::for_circuit(&n, TestKind::Ctsaa, 0)).unwrap();
            assert_eq!(t.len(), 1);
            assert_eq!(cut_image(&n, &r, t.tests()), image);
        }
    }

    #[test]
    fn unreachable_cut_values_need_relaxation() {
        let n = eqv();
        let r = gen_cut(&n, 2).unwrap();
        let v = r.boundary();
        let unreach = unreachable_cut_assignments(&n, &r, 22).unwrap();
        let none = gen_tests(
            &n,
            &v,
            &unreach,
            &cfg(0, 0),
            TestSet::for_circuit(&n, TestKind::Ctsaa, 0),
        )
        .unwrap();
        assert!(none.is_empty());
        let some = gen_tests(
            &n,
            &v,
            &unreach,
            &cfg(100, 0),
            TestSet::for_circuit(&n, TestKind::Ctsaa, 0),
        )
        .unwrap();
        assert!(!some.is_empty());
        assert!(some.tests().iter().all(|t| t.len() == 3));
        let par = gen_tests(
            &n,
            &v,
            &unreach,
            &GenTestsConfig { jobs: 4, ..cfg(100, 0) },
            TestSet::for_circuit(&n, TestKind::Ctsaa, 0),
        )
        .unwrap();
        assert_eq!(par, some);
    }

    #[test]
    fn relaxation_size() {
        assert_eq!(relaxed_gate_count(1), 1);
        assert_eq!(relaxed_gate_count(6), 1);
        assert_eq!(relaxed_gate_count(50), 1);
        assert_eq!(relaxed_gate_count(51), 2);
        assert_eq!(relaxed_gate_count(1000), 20);
    }
}
