//! ASCII AIGER (`aag`) reader for combinational, single-output graphs.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::{Circuit, CircuitBuilder, GateKind};

fn err(msg: impl Into<String>) -> Error {
    Error::Aiger(msg.into())
}

fn num(tok: Option<&str>, what: &str) -> Result<u64> {
    tok.ok_or_else(|| err(format!("missing {what}")))?
        .parse()
        .map_err(|_| err(format!("malformed {what}")))
}

struct Lowering<'a> {
    b: CircuitBuilder,
    /// Signal for each variable that is an input or an AND gate.
    var_signal: HashMap<u64, usize>,
    /// AND definitions by lhs variable.
    ands: &'a HashMap<u64, (u64, u64)>,
    negated: HashMap<u64, usize>,
    in_progress: Vec<u64>,
    constants: [Option<usize>; 2],
}

impl Lowering<'_> {
    fn var(&mut self, v: u64) -> Result<usize> {
        if let Some(&s) = self.var_signal.get(&v) {
            return Ok(s);
        }
        let &(r0, r1) = self
            .ands
            .get(&v)
            .ok_or_else(|| err(format!("variable {v} is used but never defined")))?;
        if self.in_progress.contains(&v) {
            return Err(Error::Cycle(format!("a{v}")));
        }
        self.in_progress.push(v);
        let a = self.lit(r0)?;
        let b = self.lit(r1)?;
        self.in_progress.pop();
        let s = self.b.gate(format!("a{v}"), GateKind::And, &[a, b])?;
        self.var_signal.insert(v, s);
        Ok(s)
    }

    fn constant(&mut self, value: bool) -> Result<usize> {
        if let Some(s) = self.constants[value as usize] {
            return Ok(s);
        }
        // x ⊕ x = 0, ¬(x ⊕ x) = 1
        let x = *self
            .var_signal
            .values()
            .min()
            .ok_or_else(|| err("constant literals need at least one input"))?;
        let kind = if value { GateKind::Xnor } else { GateKind::Xor };
        let s = self.b.gate(format!("const{}", value as u8), kind, &[x, x])?;
        self.constants[value as usize] = Some(s);
        Ok(s)
    }

    fn lit(&mut self, l: u64) -> Result<usize> {
        if l < 2 {
            return self.constant(l == 1);
        }
        let s = self.var(l / 2)?;
        if l.is_multiple_of(2) {
            return Ok(s);
        }
        if let Some(&n) = self.negated.get(&(l / 2)) {
            return Ok(n);
        }
        let n = self.b.gate(format!("n{}", l / 2), GateKind::Not, &[s])?;
        self.negated.insert(l / 2, n);
        Ok(n)
    }
}

/// Parses the ASCII AIGER format. Inverted edges become NOT gates named
/// `n<var>`, AND gates are named `a<var>`, inputs take their symbol names
/// when present (otherwise `i<k>`).
pub fn parse_aiger_ascii(text: &str) -> Result<Circuit> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| err("empty file"))?;
    let mut h = header.split_whitespace();
    if h.next() != Some("aag") {
        return Err(err("header must start with `aag`"));
    }
    let max_var = num(h.next(), "M")?;
    let ni = num(h.next(), "I")? as usize;
    let nl = num(h.next(), "L")?;
    let no = num(h.next(), "O")?;
    let na = num(h.next(), "A")? as usize;
    if h.next().is_some() {
        return Err(err("only the basic `aag M I L O A` header is supported"));
    }
    if nl > 0 {
        return Err(err(format!(
            "{nl} latches present; only combinational graphs are supported"
        )));
    }
    if no != 1 {
        return Err(err(format!("expected exactly one output, found {no}")));
    }
    let mut next_line = |what: &str| lines.next().ok_or_else(|| err(format!("missing {what} line")));

    let mut input_lits = Vec::with_capacity(ni);
    for _ in 0..ni {
        let l = num(Some(next_line("input")?.trim()), "input literal")?;
        if l < 2 || l % 2 == 1 || l / 2 > max_var {
            return Err(err(format!("invalid input literal {l}")));
        }
        input_lits.push(l);
    }
    let out_lit = num(Some(next_line("output")?.trim()), "output literal")?;
    let mut ands = HashMap::new();
    for _ in 0..na {
        let line = next_line("and")?;
        let mut t = line.split_whitespace();
        let lhs = num(t.next(), "and lhs")?;
        let r0 = num(t.next(), "and rhs0")?;
        let r1 = num(t.next(), "and rhs1")?;
        if lhs < 2 || lhs % 2 == 1 || lhs / 2 > max_var || r0 / 2 > max_var || r1 / 2 > max_var {
            return Err(err(format!("invalid and line `{line}`")));
        }
        if ands.insert(lhs / 2, (r0, r1)).is_some() {
            return Err(Error::MultipleDrivers(format!("a{}", lhs / 2)));
        }
    }
    if out_lit / 2 > max_var {
        return Err(err(format!("invalid output literal {out_lit}")));
    }

    let mut input_names: Vec<String> = (0..ni).map(|k| format!("i{k}")).collect();
    let mut output_name: Option<String> = None;
    for line in lines {
        if line.starts_with('c') {
            break;
        }
        let Some((sym, name)) = line.split_once(' ') else {
            continue;
        };
        if let Some(k) = sym.strip_prefix('i').and_then(|k| k.parse::<usize>().ok()) {
            if k < ni {
                input_names[k] = name.to_string();
            }
        } else if sym == "o0" {
            output_name = Some(name.to_string());
        }
    }

    let mut b = CircuitBuilder::new(output_name.clone().unwrap_or_else(|| "aig".into()));
    let mut var_signal = HashMap::new();
    for (k, &l) in input_lits.iter().enumerate() {
        let s = b.input(input_names[k].clone())?;
        if var_signal.insert(l / 2, s).is_some() {
            return Err(Error::MultipleDrivers(input_names[k].clone()));
        }
        if ands.contains_key(&(l / 2)) {
            return Err(Error::MultipleDrivers(format!("a{}", l / 2)));
        }
    }
    let mut low = Lowering {
        b,
        var_signal,
        ands: &ands,
        negated: HashMap::new(),
        in_progress: Vec::new(),
        constants: [None, None],
    };
    let mut out = low.lit(out_lit)?;
    let mut b = low.b;
    if out < ni {
        out = b.gate(output_name.unwrap_or_else(|| "o0".into()), GateKind::Buf, &[out])?;
    }
    b.build(out)
}
