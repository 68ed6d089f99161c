//! Internal cuts: depth-ordered frontier expansion from the output gate.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::cnf::Var;
use crate::error::{Error, Result};

use super::{Circuit, CircuitBuilder, GateId, GateKind};

/// A set of gates (plus primary inputs reached on the way) separating the
/// output from the remaining primary inputs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cut {
    pub gate_ids: BTreeSet<GateId>,
    /// Output variables of the cut gates, ascending.
    pub cut_vars: Vec<Var>,
    /// Primary inputs that belong to the cut, ascending.
    pub inputs_in_cut: Vec<Var>,
}

impl Cut {
    pub fn new(n: &Circuit, gate_ids: BTreeSet<GateId>, inputs: BTreeSet<usize>) -> Cut {
        let cut_vars = gate_ids.iter().map(|&g| n.gate(g).out_var()).collect();
        Cut {
            gate_ids,
            cut_vars,
            inputs_in_cut: inputs.into_iter().map(|s| Var(s as u32)).collect(),
        }
    }

    /// The cut made of all primary inputs.
    pub fn primary_inputs(n: &Circuit) -> Cut {
        Cut::new(n, BTreeSet::new(), (0..n.num_inputs()).collect())
    }

    pub fn is_primary(&self) -> bool {
        self.gate_ids.is_empty()
    }

    /// All cut signals (gate outputs and inputs), in signal order. These are
    /// the inputs of the circuit above the cut.
    pub fn boundary(&self) -> Vec<Var> {
        let mut all: Vec<Var> = self.cut_vars.iter().chain(&self.inputs_in_cut).copied().collect();
        all.sort();
        all
    }

    pub fn len(&self) -> usize {
        self.gate_ids.len() + self.inputs_in_cut.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks that every path from a primary input to the output meets the
    /// cut, and returns the gates strictly above it in topological order.
    pub fn gates_above(&self, n: &Circuit) -> Result<Vec<GateId>> {
        let mut boundary = vec![false; n.num_signals()];
        for v in self.boundary() {
            if v.index() >= n.num_signals() {
                return Err(Error::InvalidCut(format!("variable {} is not a signal", v.0)));
            }
            boundary[v.index()] = true;
        }
        for &g in &self.gate_ids {
            if g.0 >= n.num_gates() {
                return Err(Error::InvalidCut(format!("gate {} does not exist", g.0)));
            }
        }
        for v in &self.inputs_in_cut {
            if !n.is_input(v.index()) {
                return Err(Error::InvalidCut(format!(
                    "`{}` is not a primary input",
                    n.signal_name(v.index())
                )));
            }
        }
        let mut above = vec![false; n.num_signals()];
        let mut stack = vec![n.output_signal()];
        let mut seen = HashSet::new();
        while let Some(s) = stack.pop() {
            if boundary[s] || !seen.insert(s) {
                continue;
            }
            match n.driver(s) {
                None => {
                    return Err(Error::InvalidCut(format!(
                        "input `{}` reaches the output without crossing the cut",
                        n.signal_name(s)
                    )))
                }
                Some(g) => {
                    above[s] = true;
                    stack.extend(n.gate(g).fanins.iter().copied());
                }
            }
        }
        Ok((0..n.num_gates())
            .map(GateId)
            .filter(|&g| above[n.gate(g).out])
            .collect())
    }

    pub fn describe(&self, n: &Circuit) -> String {
        let mut parts: Vec<&str> = self.gate_ids.iter().map(|&g| n.signal_name(n.gate(g).out)).collect();
        parts.extend(self.inputs_in_cut.iter().map(|v| n.signal_name(v.index())));
        parts.join(" ")
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gates: Vec<String> = self.gate_ids.iter().map(|g| g.0.to_string()).collect();
        let inputs: Vec<String> = self.inputs_in_cut.iter().map(|v| v.0.to_string()).collect();
        write!(f, "gates {{{}}} inputs {{{}}}", gates.join(","), inputs.join(","))
    }
}

/// Frontier state of the expansion: pending gates keyed by (depth, id),
/// primary inputs reached so far, and gates already seen.
struct Frontier<'a> {
    n: &'a Circuit,
    gts: BTreeSet<(usize, GateId)>,
    inps: BTreeSet<usize>,
    seen: HashSet<GateId>,
}

impl<'a> Frontier<'a> {
    fn new(n: &'a Circuit) -> Self {
        let out = n.output_gate();
        Frontier {
            n,
            gts: BTreeSet::from([(0, out)]),
            inps: BTreeSet::new(),
            seen: HashSet::from([out]),
        }
    }

    fn size(&self) -> usize {
        self.gts.len() + self.inps.len()
    }

    /// Expands the minimum-depth gate (smallest id among ties).
    fn pop(&mut self) -> bool {
        let Some((depth, g)) = self.gts.pop_first() else {
            return false;
        };
        for &f in &self.n.gate(g).fanins {
            match self.n.driver(f) {
                None => {
                    self.inps.insert(f);
                }
                Some(fg) => {
                    if self.seen.insert(fg) {
                        self.gts.insert((depth + 1, fg));
                    }
                }
            }
        }
        true
    }

    fn cut(&self) -> Cut {
        Cut::new(self.n, self.gts.iter().map(|&(_, g)| g).collect(), self.inps.clone())
    }
}

/// Grows a cut of at least `size` members (gates plus reached inputs), or
/// until no gates remain to expand.
pub fn gen_cut(n: &Circuit, size: usize) -> Result<Cut> {
    if size == 0 || size > n.num_gates() {
        return Err(Error::CutSize {
            size,
            gates: n.num_gates(),
        });
    }
    let mut fr = Frontier::new(n);
    while fr.size() < size && fr.pop() {}
    Ok(fr.cut())
}

/// Moves into the region above the cut every cut gate whose fanins all lie
/// on the cut; repeats to a fixpoint. The result is still a cut.
fn absorb(n: &Circuit, cut: &Cut) -> Cut {
    let mut on_cut = vec![false; n.num_signals()];
    for v in cut.boundary() {
        on_cut[v.index()] = true;
    }
    let mut gates = cut.gate_ids.clone();
    loop {
        let mut changed = false;
        for &g in gates.clone().iter().rev() {
            let gate = n.gate(g);
            if gate.fanins.iter().all(|&f| on_cut[f] && f != gate.out) {
                on_cut[gate.out] = false;
                gates.remove(&g);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let inputs = (0..n.num_inputs()).filter(|&s| on_cut[s]).collect();
    Cut::new(n, gates, inputs)
}

/// The canonical sequence of proper cuts visited by the frontier expansion,
/// from the output downwards: the frontier after each expansion step, with
/// gates whose fanins are all on the frontier moved above it. Primary-input
/// cuts and repeats are skipped.
pub fn sweep_cuts(n: &Circuit) -> Vec<Cut> {
    let mut fr = Frontier::new(n);
    let mut out: Vec<Cut> = Vec::new();
    while fr.pop() {
        let cut = absorb(n, &fr.cut());
        if cut.is_primary() || out.contains(&cut) {
            continue;
        }
        out.push(cut);
    }
    out
}

/// The circuit between cut `r` and the output. Its inputs are the cut
/// signals in signal order, keeping their names. If the output itself is on
/// the cut, the result is a single buffer `<z>~out` of it.
pub fn subcircuit_above_cut(n: &Circuit, r: &Cut) -> Result<Circuit> {
    let above = r.gates_above(n)?;
    let boundary = r.boundary();
    let mut b = CircuitBuilder::new(format!("{}_above", n.name()));
    let mut map = vec![usize::MAX; n.num_signals()];
    for v in &boundary {
        map[v.index()] = b.input(n.signal_name(v.index()))?;
    }
    for g in above {
        let gate = n.gate(g);
        let fanins: Vec<usize> = gate.fanins.iter().map(|&s| map[s]).collect();
        map[gate.out] = b.gate(n.signal_name(gate.out), gate.kind, &fanins)?;
    }
    let out = map[n.output_signal()];
    if out < boundary.len() {
        let name = format!("{}~out", n.signal_name(n.output_signal()));
        let buf = b.gate(name, GateKind::Buf, &[out])?;
        return b.build(buf);
    }
    b.build(out)
}
