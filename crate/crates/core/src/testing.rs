//! Fixtures, generators and brute-force oracles shared by the test suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::{parse_netlist, Circuit, CircuitBuilder, GateKind};
use crate::cnf::{Bits, Clause, CnfFormula, Lit, Var, VarTable};

pub const EQV_NETLIST: &str = "\
# circuit eqv
# equivalence of (x1 | x2) & x3 and (x1 & x3) | (x2 & x3)
INPUT x1
INPUT x2
INPUT x3
y1 = OR(x1, x2)
y2 = AND(y1, x3)
y3 = AND(x1, x3)
y4 = AND(x2, x3)
y5 = OR(y3, y4)
z = XOR(y2, y5)
OUTPUT z
";

pub fn eqv() -> Circuit {
    parse_netlist(EQV_NETLIST).expect("fixture parses")
}

pub fn buf() -> Circuit {
    parse_netlist("INPUT x1\nz = BUF(x1)\nOUTPUT z\n").expect("fixture parses")
}

/// `m` clauses over `n` variables, widths uniform in `1..=max_width`.
pub fn random_cnf(rng: &mut impl Rng, n: usize, m: usize, max_width: usize) -> CnfFormula {
    let mut f = CnfFormula::new(VarTable::anonymous(n));
    let vars: Vec<u32> = (0..n as u32).collect();
    for _ in 0..m {
        let w = rng.gen_range(1..=max_width.min(n).max(1));
        let lits = vars
            .choose_multiple(rng, w)
            .map(|&v| Lit::new(Var(v), rng.gen_bool(0.5)));
        f.push(Clause::new(lits).expect("distinct variables"))
            .expect("in range");
    }
    f
}

pub fn brute_force_models(f: &CnfFormula) -> Vec<Bits> {
    let n = f.num_vars();
    assert!(n <= 24, "enumeration over {n} variables");
    (0..1u64 << n)
        .map(|k| Bits::from_index(n, k))
        .filter(|b| f.is_satisfied_by(b))
        .collect()
}

pub fn brute_force_sat(f: &CnfFormula) -> Option<Bits> {
    let n = f.num_vars();
    assert!(n <= 24, "enumeration over {n} variables");
    (0..1u64 << n)
        .map(|k| Bits::from_index(n, k))
        .find(|b| f.is_satisfied_by(b))
}

/// Truth table of `∃W. g` over `v_set` (indexed like [`Bits::from_index`]).
pub fn exists_projection(g: &CnfFormula, v_set: &[Var]) -> Vec<bool> {
    let positions: Vec<usize> = v_set.iter().map(|v| v.index()).collect();
    let mut table = vec![false; 1 << v_set.len()];
    for m in brute_force_models(g) {
        table[m.select(&positions).to_index() as usize] = true;
    }
    table
}

/// Truth table of `h` over its own variables.
pub fn truth_table(h: &CnfFormula) -> Vec<bool> {
    let n = h.num_vars();
    (0..1u64 << n)
        .map(|k| h.is_satisfied_by(&Bits::from_index(n, k)))
        .collect()
}

const BINARY: [GateKind; 6] = [
    GateKind::And,
    GateKind::Or,
    GateKind::Nand,
    GateKind::Nor,
    GateKind::Xor,
    GateKind::Xnor,
];

/// Random DAG with `inputs` inputs and `gates` gates; the last gate drives
/// the output. Fanins favour recent signals so most gates reach the output.
pub fn random_circuit(rng: &mut impl Rng, name: &str, inputs: usize, gates: usize) -> Circuit {
    assert!(inputs >= 1 && gates >= 1);
    let mut b = CircuitBuilder::new(name);
    for i in 0..inputs {
        b.input(format!("x{}", i + 1)).expect("fresh name");
    }
    let mut last = 0;
    for g in 0..gates {
        let avail = inputs + g;
        let pick = |rng: &mut dyn rand::RngCore| {
            if rng.gen_bool(0.5) {
                rng.gen_range(avail.saturating_sub(4)..avail)
            } else {
                rng.gen_range(0..avail)
            }
        };
        let unary = avail == 1 || rng.gen_bool(0.15);
        let (kind, fanins) = if unary {
            let k = if rng.gen_bool(0.8) {
                GateKind::Not
            } else {
                GateKind::Buf
            };
            (k, vec![pick(rng)])
        } else {
            let kind = *BINARY.choose(rng).expect("nonempty");
            let arity = if matches!(kind, GateKind::Xor | GateKind::Xnor) || rng.gen_bool(0.7) {
                2
            } else {
                3.min(avail)
            };
            let mut fanins = Vec::with_capacity(arity);
            while fanins.len() < arity {
                let f = pick(rng);
                if !fanins.contains(&f) {
                    fanins.push(f);
                }
            }
            (kind, fanins)
        };
        last = b.gate(format!("g{}", g + 1), kind, &fanins).expect("valid gate");
    }
    b.build(last).expect("output is a gate")
}

/// Copy of `n` with one gate's kind replaced by a different kind of the
/// same arity class. Returns the mutated gate's output signal.
pub fn mutate_gate_kind(rng: &mut impl Rng, n: &Circuit) -> (Circuit, usize) {
    let gi = rng.gen_range(0..n.num_gates());
    let mut b = CircuitBuilder::new(n.name());
    for name in n.input_names() {
        b.input(name.clone()).expect("fresh name");
    }
    for (i, g) in n.gates().iter().enumerate() {
        let mut kind = g.kind;
        if i == gi {
            kind = if g.kind.is_unary() {
                if g.kind == GateKind::Not {
                    GateKind::Buf
                } else {
                    GateKind::Not
                }
            } else {
                let choices: Vec<GateKind> = BINARY
                    .iter()
                    .copied()
                    .filter(|&k| k != g.kind && (g.fanins.len() == 2 || !matches!(k, GateKind::Xor | GateKind::Xnor)))
                    .collect();
                *choices.choose(rng).expect("alternatives exist")
            };
        }
        b.gate(n.signal_name(g.out).to_string(), kind, &g.fanins)
            .expect("same shape");
    }
    let target = n.gates()[gi].out;
    (b.build(n.output_signal()).expect("same output"), target)
}

/// Whether two circuits over the same inputs compute the same function.
pub fn equivalent_by_enumeration(a: &Circuit, b: &Circuit) -> bool {
    let k = a.num_inputs();
    (0..1u64 << k).all(|i| {
        let x = Bits::from_index(k, i);
        a.eval(&x) == b.eval(&x)
    })
}
