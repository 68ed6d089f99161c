//! Gate-level single-output combinational circuits.
//!
//! Signals are numbered densely: primary inputs first, in declaration order,
//! then one signal per gate in topological order. The same numbering is used
//! for CNF variables by [`crate::cnf::tseitin_encode`], so a simulated trace
//! is directly an assignment to the encoding's variables.

mod aiger;
mod cut;
mod miter;
mod netlist;
mod redundancy;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::cnf::{Bits, Var};
use crate::error::{Error, Result};

pub use aiger::parse_aiger_ascii;
pub use cut::{gen_cut, subcircuit_above_cut, sweep_cuts, Cut};
pub use miter::{build_miter, build_multi_miter, Reduction};
pub use netlist::parse_netlist;
pub use redundancy::{
    check_nonredundant, cut_image, unreachable_cut_assignments, Redundancy, DEFAULT_ENUMERATION_BOUND,
};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GateKind {
    And,
    Or,
    Nand,
    Nor,
    Xor,
    Xnor,
    Not,
    Buf,
}

impl GateKind {
    pub const ALL: [GateKind; 8] = [
        GateKind::And,
        GateKind::Or,
        GateKind::Nand,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::Not,
        GateKind::Buf,
    ];

    pub fn is_unary(self) -> bool {
        matches!(self, GateKind::Not | GateKind::Buf)
    }

    pub fn eval(self, inputs: impl Iterator<Item = bool>) -> bool {
        match self {
            GateKind::And => inputs.fold(true, |a, b| a & b),
            GateKind::Or => inputs.fold(false, |a, b| a | b),
            GateKind::Nand => !inputs.fold(true, |a, b| a & b),
            GateKind::Nor => !inputs.fold(false, |a, b| a | b),
            GateKind::Xor => inputs.fold(false, |a, b| a ^ b),
            GateKind::Xnor => !inputs.fold(false, |a, b| a ^ b),
            GateKind::Not => !inputs.fold(false, |_, b| b),
            GateKind::Buf => inputs.fold(false, |_, b| b),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Nand => "NAND",
            GateKind::Nor => "NOR",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
            GateKind::Not => "NOT",
            GateKind::Buf => "BUF",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GateKind {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or(())
    }
}

/// Index of a gate in topological order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GateId(pub usize);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gate {
    pub kind: GateKind,
    /// Signal indices of the fanins, in order.
    pub fanins: Vec<usize>,
    /// Signal index of the gate output.
    pub out: usize,
}

impl Gate {
    pub fn out_var(&self) -> Var {
        Var(self.out as u32)
    }
}

/// A validated single-output combinational circuit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Circuit {
    name: String,
    signal_names: Vec<String>,
    num_inputs: usize,
    gates: Vec<Gate>,
    output: GateId,
}

impl Circuit {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn num_signals(&self) -> usize {
        self.signal_names.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id.0]
    }

    pub fn signal_name(&self, signal: usize) -> &str {
        &self.signal_names[signal]
    }

    pub fn signal_names(&self) -> &[String] {
        &self.signal_names
    }

    pub fn input_names(&self) -> &[String] {
        &self.signal_names[..self.num_inputs]
    }

    pub fn is_input(&self, signal: usize) -> bool {
        signal < self.num_inputs
    }

    /// Gate driving `signal`, or `None` for a primary input.
    pub fn driver(&self, signal: usize) -> Option<GateId> {
        signal.checked_sub(self.num_inputs).map(GateId)
    }

    pub fn output_gate(&self) -> GateId {
        self.output
    }

    pub fn output_signal(&self) -> usize {
        self.gates[self.output.0].out
    }

    pub fn output_var(&self) -> Var {
        Var(self.output_signal() as u32)
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.signal_names.iter().position(|n| n == name)
    }

    /// Values of every signal under input assignment `x` (signal order).
    pub fn simulate(&self, x: &Bits) -> Bits {
        assert_eq!(x.len(), self.num_inputs, "test width must equal the input count");
        let mut values = Bits::zeros(self.num_signals());
        for i in 0..self.num_inputs {
            values.set(i, x.get(i));
        }
        for g in &self.gates {
            let v = g.kind.eval(g.fanins.iter().map(|&s| values.get(s)));
            values.set(g.out, v);
        }
        values
    }

    /// Output value under input assignment `x`.
    pub fn eval(&self, x: &Bits) -> bool {
        self.simulate(x).get(self.output_signal())
    }

    /// Renders the circuit in the line-oriented netlist format.
    pub fn to_netlist(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# circuit {}\n", self.name));
        for name in self.input_names() {
            out.push_str(&format!("INPUT {name}\n"));
        }
        for g in &self.gates {
            let args: Vec<&str> = g.fanins.iter().map(|&s| self.signal_name(s)).collect();
            out.push_str(&format!(
                "{} = {}({})\n",
                self.signal_name(g.out),
                g.kind,
                args.join(", ")
            ));
        }
        out.push_str(&format!("OUTPUT {}\n", self.signal_name(self.output_signal())));
        out
    }

    /// Signals in the transitive fanin of the output, as a membership vector.
    pub fn output_cone(&self) -> Vec<bool> {
        let mut live = vec![false; self.num_signals()];
        live[self.output_signal()] = true;
        for g in self.gates.iter().rev() {
            if live[g.out] {
                for &f in &g.fanins {
                    live[f] = true;
                }
            }
        }
        live
    }
}

/// A gate description whose fanins are still names.
#[derive(Clone, Debug)]
pub(crate) struct RawGate {
    pub name: String,
    pub kind: GateKind,
    pub fanins: Vec<String>,
    /// Source line for diagnostics (0 when built programmatically).
    pub line: usize,
}

/// Incremental construction of a [`Circuit`] with fanins declared first.
///
/// Multi-input XOR and XNOR gates are lowered to balanced trees of two-input
/// gates; the intermediate signals are named `<name>~<k>`.
#[derive(Clone, Debug, Default)]
pub struct CircuitBuilder {
    name: String,
    names: Vec<String>,
    by_name: HashMap<String, usize>,
    num_inputs: usize,
    gates: Vec<Gate>,
    fresh: usize,
}

impl CircuitBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        CircuitBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    fn declare(&mut self, name: String) -> Result<usize> {
        if self.by_name.contains_key(&name) {
            return Err(Error::MultipleDrivers(name));
        }
        let s = self.names.len();
        self.by_name.insert(name.clone(), s);
        self.names.push(name);
        Ok(s)
    }

    pub fn input(&mut self, name: impl Into<String>) -> Result<usize> {
        if !self.gates.is_empty() {
            return Err(Error::InvalidCircuit("inputs must be declared before gates".into()));
        }
        let s = self.declare(name.into())?;
        self.num_inputs += 1;
        Ok(s)
    }

    pub fn signal(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn gate(&mut self, name: impl Into<String>, kind: GateKind, fanins: &[usize]) -> Result<usize> {
        let name = name.into();
        if let Some(&f) = fanins.iter().find(|&&f| f >= self.names.len()) {
            return Err(Error::InvalidCircuit(format!(
                "fanin signal {f} of `{name}` is not declared"
            )));
        }
        match (kind.is_unary(), fanins.len()) {
            (true, 1) => {}
            (false, n) if n >= 2 => {}
            (_, n) => {
                return Err(Error::InvalidCircuit(format!(
                    "gate `{name}` of kind {kind} cannot take {n} fanins"
                )))
            }
        }
        if matches!(kind, GateKind::Xor | GateKind::Xnor) && fanins.len() > 2 {
            let mid = fanins.len() / 2;
            let left = self.xor_tree(&name, &fanins[..mid])?;
            let right = self.xor_tree(&name, &fanins[mid..])?;
            return self.push_gate(name, kind, vec![left, right]);
        }
        self.push_gate(name, kind, fanins.to_vec())
    }

    fn xor_tree(&mut self, base: &str, fanins: &[usize]) -> Result<usize> {
        if fanins.len() == 1 {
            return Ok(fanins[0]);
        }
        let mid = fanins.len() / 2;
        let left = self.xor_tree(base, &fanins[..mid])?;
        let right = self.xor_tree(base, &fanins[mid..])?;
        self.fresh += 1;
        let name = format!("{base}~{}", self.fresh);
        self.push_gate(name, GateKind::Xor, vec![left, right])
    }

    fn push_gate(&mut self, name: String, kind: GateKind, fanins: Vec<usize>) -> Result<usize> {
        let out = self.declare(name)?;
        self.gates.push(Gate { kind, fanins, out });
        Ok(out)
    }

    pub fn build(self, output: usize) -> Result<Circuit> {
        if output >= self.names.len() {
            return Err(Error::InvalidCircuit(format!("output signal {output} is not declared")));
        }
        if output < self.num_inputs {
            return Err(Error::InvalidCircuit(format!(
                "output `{}` must be driven by a gate",
                self.names[output]
            )));
        }
        Ok(Circuit {
            name: self.name,
            signal_names: self.names,
            num_inputs: self.num_inputs,
            output: GateId(output - self.num_inputs),
            gates: self.gates,
        })
    }

    /// Builds from unordered named gates, sorting them topologically.
    /// Among ready gates the one declared first goes first.
    pub(crate) fn from_raw(
        name: impl Into<String>,
        inputs: &[(String, usize)],
        raw: &[RawGate],
        output: &(String, usize),
    ) -> Result<Circuit> {
        let mut b = CircuitBuilder::new(name);
        let mut declared: HashMap<&str, usize> = HashMap::new();
        for (i, (n, _)) in inputs.iter().enumerate() {
            if declared.insert(n.as_str(), i).is_some() {
                return Err(Error::MultipleDrivers(n.clone()));
            }
        }
        let mut gate_of: HashMap<&str, usize> = HashMap::new();
        for (i, g) in raw.iter().enumerate() {
            if declared.contains_key(g.name.as_str()) || gate_of.insert(g.name.as_str(), i).is_some() {
                return Err(Error::MultipleDrivers(g.name.clone()));
            }
        }
        // Kahn's algorithm keyed on declaration index.
        let mut pending = vec![0usize; raw.len()];
        let mut users: Vec<Vec<usize>> = vec![Vec::new(); raw.len()];
        for (i, g) in raw.iter().enumerate() {
            for f in &g.fanins {
                if declared.contains_key(f.as_str()) {
                    continue;
                }
                match gate_of.get(f.as_str()) {
                    Some(&j) => {
                        pending[i] += 1;
                        users[j].push(i);
                    }
                    None => {
                        return Err(Error::DanglingReference {
                            signal: f.clone(),
                            line: g.line,
                        })
                    }
                }
            }
        }
        if !declared.contains_key(output.0.as_str()) && !gate_of.contains_key(output.0.as_str()) {
            return Err(Error::DanglingReference {
                signal: output.0.clone(),
                line: output.1,
            });
        }
        for (n, _) in inputs {
            b.input(n.clone())?;
        }
        let mut ready: BTreeSet<usize> = (0..raw.len()).filter(|&i| pending[i] == 0).collect();
        let mut placed = 0;
        while let Some(i) = ready.pop_first() {
            let g = &raw[i];
            let fanins: Vec<usize> = g
                .fanins
                .iter()
                .map(|f| b.signal(f).expect("fanins placed before users"))
                .collect();
            b.gate(g.name.clone(), g.kind, &fanins).map_err(|e| match e {
                Error::InvalidCircuit(m) if g.line > 0 => Error::Syntax {
                    line: g.line,
                    column: 1,
                    message: m,
                },
                e => e,
            })?;
            placed += 1;
            for &u in &users[i] {
                pending[u] -= 1;
                if pending[u] == 0 {
                    ready.insert(u);
                }
            }
        }
        if placed < raw.len() {
            let stuck = (0..raw.len()).find(|&i| pending[i] > 0).expect("some gate is stuck");
            return Err(Error::Cycle(raw[stuck].name.clone()));
        }
        let out = b.signal(&output.0).expect("checked above");
        b.build(out)
    }
}
