use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{gen_cut, Circuit};
use crate::cnf::{encode_circuit, Bits, Var};
use crate::error::{Error, Result};
use crate::sat::SolverConfig;
use crate::semstr::{sem_str, SemStrConfig, SemStrOutcome};
use crate::ssa::{build_ssa, SsaOutcome, DEFAULT_STATE_BUDGET};

use super::extract::{complete_partial_tests, diversify, empty_set, extract_tests, gen_tests, GenTestsConfig};
use super::{Test, TestKind, TestSet};

/// Default number of relaxation rounds per unrealizable cut assignment.
pub const DEFAULT_TRIES: usize = 5;

/// Variables the formula is projected on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarChoice {
    /// No projection: an SSA of `F_N ∧ z` itself.
    Full,
    /// The primary inputs.
    Inputs,
    /// The boundary of a cut with at least this many members.
    Cut(usize),
}

impl fmt::Display for VarChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarChoice::Full => f.write_str("full"),
            VarChoice::Inputs => f.write_str("inputs"),
            VarChoice::Cut(k) => write!(f, "cut({k})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PctConfig {
    pub tries: usize,
    pub seed: u64,
    pub solver: SolverConfig,
    pub ssa_budget: u64,
    pub jobs: usize,
    /// 0 centres the SSA at the trace of the all-zero input; iteration
    /// `i > 0` uses the trace of a random input drawn from `seed` and `i`.
    pub center_iteration: u64,
}

impl Default for PctConfig {
    fn default() -> Self {
        PctConfig {
            tries: DEFAULT_TRIES,
            seed: 0,
            solver: SolverConfig::default(),
            ssa_budget: DEFAULT_STATE_BUDGET,
            jobs: 1,
            center_iteration: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PctOutcome {
    Tests(TestSet),
    /// An input assignment setting the output to 1.
    Counterexample(Test),
}

fn center_input(nx: usize, cfg: &PctConfig) -> Bits {
    if cfg.center_iteration == 0 {
        return Bits::zeros(nx);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(cfg.center_iteration);
    Bits::from_bools(&(0..nx).map(|_| rng.gen()).collect::<Vec<bool>>())
}

fn counterexample(n: &Circuit, model: &Bits) -> Result<PctOutcome> {
    let x = model.prefix(n.num_inputs());
    if !n.eval(&x) {
        return Err(Error::Contract(format!("model input {x} does not set the output")));
    }
    Ok(PctOutcome::Counterexample(x))
}

/// Generates a property-checking test set for `n`, or a test on which
/// `n` outputs 1.
///
/// The SSA is centred at the execution trace of a chosen input (see
/// [`PctConfig::center_iteration`]), restricted to the projection
/// variables.
pub fn gen_pct(n: &Circuit, choice: VarChoice, cfg: &PctConfig) -> Result<PctOutcome> {
    let nx = n.num_inputs();
    let g = encode_circuit(n).formula;
    let trace = n.simulate(&center_input(nx, cfg));
    let meta = |kind: TestKind| {
        let set = match choice {
            VarChoice::Full => empty_set(n, kind, cfg.seed).with_param("mode", "full"),
            VarChoice::Inputs => empty_set(n, kind, cfg.seed).with_param("mode", "inputs"),
            VarChoice::Cut(k) => empty_set(n, kind, cfg.seed)
                .with_param("mode", "cut")
                .with_param("cut_size", k),
        };
        let set = if cfg.center_iteration > 0 {
            set.with_param("center_iteration", cfg.center_iteration)
        } else {
            set
        };
        if let VarChoice::Cut(_) = choice {
            set.with_param("tries", cfg.tries)
        } else {
            set
        }
    };
    let x_positions: Vec<usize> = (0..nx).collect();

    if choice == VarChoice::Full {
        return match build_ssa(&g, &trace, cfg.ssa_budget)? {
            SsaOutcome::Sat(m) => counterexample(n, &m),
            SsaOutcome::Ssa(p) => Ok(PctOutcome::Tests(extract_tests(
                p.points(),
                &x_positions,
                meta(TestKind::Cts),
            )?)),
        };
    }

    let cut = match choice {
        VarChoice::Cut(k) => Some(gen_cut(n, k)?),
        _ => None,
    };
    let v_set: Vec<Var> = match &cut {
        Some(r) => r.boundary(),
        None => (0..nx as u32).map(Var).collect(),
    };
    let positions: Vec<usize> = v_set.iter().map(|v| v.index()).collect();
    let center = trace.select(&positions);
    let sem_cfg = SemStrConfig {
        solver: cfg.solver,
        ssa_budget: cfg.ssa_budget,
    };
    let proj = match sem_str(&g, &v_set, Some(&center), &sem_cfg)? {
        SemStrOutcome::Sat(m) => return counterexample(n, &m),
        SemStrOutcome::Projection(p) => p,
    };
    let points: Vec<Bits> = diversify(&proj.ssa, &proj.h, cfg.seed)
        .into_iter()
        .map(|(p, _)| p)
        .collect();

    let inputs_in_v: Vec<usize> = (0..nx).filter_map(|x| positions.iter().position(|&s| s == x)).collect();
    if inputs_in_v.len() == nx {
        // X ⊆ V: the input bits of each point already form a test.
        return Ok(PctOutcome::Tests(extract_tests(
            &points,
            &inputs_in_v,
            meta(TestKind::Ctsa),
        )?));
    }
    if positions.iter().all(|&s| s < nx) {
        let set = complete_partial_tests(&points, &positions, cfg.seed, meta(TestKind::Ctsaa))?;
        return Ok(PctOutcome::Tests(set));
    }
    let gt = GenTestsConfig {
        tries: cfg.tries,
        seed: cfg.seed,
        jobs: cfg.jobs,
        solver: cfg.solver,
    };
    Ok(PctOutcome::Tests(gen_tests(
        n,
        &v_set,
        &points,
        &gt,
        meta(TestKind::Ctsaa),
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::fixtures::eqv;
    use crate::circuit::{build_miter, parse_netlist};
    use crate::testgen::{run_tests, verify_cts, CtsVerdict};

    fn tests_of(o: PctOutcome) -> TestSet {
        match o {
            PctOutcome::Tests(t) => t,
            PctOutcome::Counterexample(x) => panic!("unexpected counterexample {x}"),
        }
    }

    #[test]
    fn full_mode_yields_a_small_cts() {
        let n = eqv();
        let t = tests_of(gen_pct(&n, VarChoice::Full, &PctConfig::default()).unwrap());
        assert_eq!(t.kind, TestKind::Cts);
        assert!(t.len() < 8);
        assert_eq!(t.tests()[0], Bits::zeros(3));
        assert!(matches!(verify_cts(&n, &t, 1 << 20).unwrap(), CtsVerdict::Complete(_)));
    }

    #[test]
    fn inputs_mode_matches_the_projection() {
        let n = eqv();
        let t = tests_of(gen_pct(&n, VarChoice::Inputs, &PctConfig::default()).unwrap());
        assert_eq!(t.kind, TestKind::Ctsa);
        let mut got: Vec<String> = t.tests().iter().map(|b| b.to_string()).collect();
        got.sort();
        assert_eq!(got, ["000", "001", "011", "101"]);
        assert!(matches!(verify_cts(&n, &t, 1 << 20).unwrap(), CtsVerdict::Complete(_)));
    }

    #[test]
    fn cut_mode_produces_genuine_tests() {
        let n = eqv();
        for k in 1..=n.num_gates() {
            let t = tests_of(gen_pct(&n, VarChoice::Cut(k), &PctConfig::default()).unwrap());
            assert!(!t.is_empty());
            assert!(t.tests().iter().all(|x| x.len() == 3));
            assert!(run_tests(&n, &t, 1).unwrap().hits.is_empty());
            let r = gen_cut(&n, k).unwrap();
            let expected = if r.inputs_in_cut.len() == 3 {
                TestKind::Ctsa
            } else {
                TestKind::Ctsaa
            };
            assert_eq!(t.kind, expected, "cut size {k}");
        }
    }

    #[test]
    fn inequivalent_miter_gives_counterexamples() {
        let a = parse_netlist("INPUT x1\nz = BUF(x1)\nOUTPUT z\n").unwrap();
        let b = parse_netlist("INPUT x1\nz = NOT(x1)\nOUTPUT z\n").unwrap();
        let m = build_miter(&a, &b).unwrap();
        for choice in [VarChoice::Full, VarChoice::Inputs, VarChoice::Cut(1), VarChoice::Cut(2)] {
            match gen_pct(&m, choice, &PctConfig::default()).unwrap() {
                PctOutcome::Counterexample(x) => assert!(m.eval(&x), "{choice}"),
                PctOutcome::Tests(_) => panic!("{choice}"),
            }
        }
    }

    #[test]
    fn center_iterations_are_seeded() {
        let n = eqv();
        let cfg = PctConfig {
            center_iteration: 3,
            seed: 9,
            ..PctConfig::default()
        };
        let a = tests_of(gen_pct(&n, VarChoice::Cut(2), &cfg).unwrap());
        assert_eq!(a, tests_of(gen_pct(&n, VarChoice::Cut(2), &cfg).unwrap()));
        assert!(a.params.contains(&("center_iteration".to_string(), "3".to_string())));
        let full = tests_of(gen_pct(&n, VarChoice::Full, &cfg).unwrap());
        assert!(matches!(
            verify_cts(&n, &full, 1 << 20).unwrap(),
            CtsVerdict::Complete(_)
        ));
    }

    #[test]
    fn bad_cut_size_is_an_error() {
        assert!(matches!(
            gen_pct(&eqv(), VarChoice::Cut(0), &PctConfig::default()),
            Err(Error::CutSize { .. })
        ));
    }
}
