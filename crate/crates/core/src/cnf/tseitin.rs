//! Gate-consistency clauses for circuits.

use std::ops::Range;

use crate::circuit::{Circuit, GateKind};

use super::{Clause, CnfFormula, Lit, Role, Var, VarTable};

/// `F_N ∧ z` together with the clause range of every gate.
#[derive(Clone, Debug)]
pub struct CircuitEncoding {
    /// Gate clauses in gate order, followed by the unit clause `(z)`.
    pub formula: CnfFormula,
    /// Clause indices of each gate, indexed like [`Circuit::gates`].
    pub gate_clauses: Vec<Range<usize>>,
    /// Index of the output unit clause.
    pub output_unit: usize,
}

impl CircuitEncoding {
    /// `F_N` alone: the encoding without the output unit.
    pub fn consistency(&self) -> CnfFormula {
        let mut f = self.formula.clone();
        f.clauses.truncate(self.output_unit);
        f
    }
}

/// Variable table of a circuit: one variable per signal, same numbering.
pub fn circuit_vars(n: &Circuit) -> VarTable {
    let mut t = VarTable::new();
    let z = n.output_signal();
    for (s, name) in n.signal_names().iter().enumerate() {
        let role = if n.is_input(s) {
            Role::Input
        } else if s == z {
            Role::Output
        } else {
            Role::Internal
        };
        t.push(name.clone(), role).expect("signal names are unique");
    }
    t
}

/// Consistency clauses of one gate `y = kind(a…)`. The wide clause comes
/// first; tautologies arising from repeated fanins are dropped.
pub fn gate_clauses(kind: GateKind, y: Var, fanins: &[Var]) -> Vec<Clause> {
    let p = Lit::pos;
    let n = Lit::neg;
    let raw: Vec<Vec<Lit>> = match kind {
        GateKind::And => std::iter::once(std::iter::once(p(y)).chain(fanins.iter().map(|&a| n(a))).collect())
            .chain(fanins.iter().map(|&a| vec![n(y), p(a)]))
            .collect(),
        GateKind::Or => std::iter::once(std::iter::once(n(y)).chain(fanins.iter().map(|&a| p(a))).collect())
            .chain(fanins.iter().map(|&a| vec![p(y), n(a)]))
            .collect(),
        GateKind::Nand => std::iter::once(std::iter::once(n(y)).chain(fanins.iter().map(|&a| n(a))).collect())
            .chain(fanins.iter().map(|&a| vec![p(y), p(a)]))
            .collect(),
        GateKind::Nor => std::iter::once(std::iter::once(p(y)).chain(fanins.iter().map(|&a| p(a))).collect())
            .chain(fanins.iter().map(|&a| vec![n(y), n(a)]))
            .collect(),
        GateKind::Xor | GateKind::Xnor => {
            assert_eq!(fanins.len(), 2, "xor gates are two-input after lowering");
            let (a, b) = (fanins[0], fanins[1]);
            let (on, off) = if kind == GateKind::Xor {
                (p(y), n(y))
            } else {
                (n(y), p(y))
            };
            vec![
                vec![off, p(a), p(b)],
                vec![off, n(a), n(b)],
                vec![on, n(a), p(b)],
                vec![on, p(a), n(b)],
            ]
        }
        GateKind::Not => vec![vec![p(y), p(fanins[0])], vec![n(y), n(fanins[0])]],
        GateKind::Buf => vec![vec![p(fanins[0]), n(y)], vec![n(fanins[0]), p(y)]],
    };
    raw.into_iter().filter_map(|lits| Clause::new(lits).ok()).collect()
}

pub fn encode_circuit(n: &Circuit) -> CircuitEncoding {
    let mut formula = CnfFormula::new(circuit_vars(n));
    let mut gate_ranges = Vec::with_capacity(n.num_gates());
    for g in n.gates() {
        let start = formula.len();
        let fanins: Vec<Var> = g.fanins.iter().map(|&s| Var(s as u32)).collect();
        for c in gate_clauses(g.kind, g.out_var(), &fanins) {
            formula.push(c).expect("signals are variables");
        }
        gate_ranges.push(start..formula.len());
    }
    let output_unit = formula
        .push(Clause::new([Lit::pos(n.output_var())]).expect("unit"))
        .expect("output is a variable");
    CircuitEncoding {
        formula,
        gate_clauses: gate_ranges,
        output_unit,
    }
}

/// `F_N ∧ z`.
pub fn tseitin_encode(n: &Circuit) -> CnfFormula {
    encode_circuit(n).formula
}
