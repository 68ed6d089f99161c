//! Line-oriented netlist format.
//!
//! ```text
//! # comment
//! INPUT x1
//! INPUT x2
//! y = AND(x1, x2)
//! z = NOT(y)
//! OUTPUT z
//! ```
//!
//! Gates may appear in any order; kinds are case-insensitive. A comment of
//! the form `# circuit <name>` names the circuit.

use crate::error::{Error, Result};

use super::{Circuit, CircuitBuilder, GateKind, RawGate};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_name_char(c: char) -> bool {
    !(c.is_whitespace() || matches!(c, '(' | ')' | ',' | '=' | '#'))
}

/// Checks that `s` is a single name token; `col` is the 1-based column of `s`.
fn name_token(s: &str, line: usize, col: usize) -> Result<String> {
    let t = s.trim();
    let offset = s.len() - s.trim_start().len();
    if t.is_empty() {
        return Err(syntax(line, col + offset, "expected a signal name"));
    }
    if let Some((i, c)) = t.char_indices().find(|&(_, c)| !is_name_char(c)) {
        return Err(syntax(line, col + offset + i, format!("unexpected `{c}` in name")));
    }
    Ok(t.to_string())
}

pub fn parse_netlist(text: &str) -> Result<Circuit> {
    let mut inputs: Vec<(String, usize)> = Vec::new();
    let mut output: Option<(String, usize)> = None;
    let mut gates = Vec::new();
    let mut name: Option<String> = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let body = match raw_line.find('#') {
            Some(i) => {
                let comment = raw_line[i + 1..].trim();
                if let Some(n) = comment.strip_prefix("circuit ") {
                    if name.is_none() && !n.trim().is_empty() {
                        name = Some(n.trim().to_string());
                    }
                }
                &raw_line[..i]
            }
            None => raw_line,
        };
        if body.trim().is_empty() {
            continue;
        }
        let lead = body.len() - body.trim_start().len();
        let trimmed = body.trim();
        let keyword = trimmed.split_whitespace().next().unwrap_or("");
        if keyword == "INPUT" || keyword == "OUTPUT" {
            let rest = &trimmed[keyword.len()..];
            let n = name_token(rest, line, lead + keyword.len() + 1)?;
            if keyword == "INPUT" {
                inputs.push((n, line));
            } else if output.is_some() {
                return Err(syntax(line, lead + 1, "more than one OUTPUT declaration"));
            } else {
                output = Some((n, line));
            }
            continue;
        }
        let eq = body
            .find('=')
            .ok_or_else(|| syntax(line, lead + 1, "expected `INPUT`, `OUTPUT` or `<name> = <KIND>(...)`"))?;
        let lhs = name_token(&body[..eq], line, 1)?;
        let rhs = &body[eq + 1..];
        let open = rhs
            .find('(')
            .ok_or_else(|| syntax(line, eq + 2, "expected `(` after gate kind"))?;
        let kind_str = rhs[..open].trim();
        let kind: GateKind = kind_str.parse().map_err(|_| {
            let col = eq + 2 + (rhs.len() - rhs.trim_start().len());
            syntax(line, col, format!("unknown gate kind `{kind_str}`"))
        })?;
        let close = rhs
            .rfind(')')
            .ok_or_else(|| syntax(line, body.len() + 1, "missing `)`"))?;
        if close < open {
            return Err(syntax(line, eq + 2 + close, "`)` before `(`"));
        }
        if !rhs[close + 1..].trim().is_empty() {
            return Err(syntax(line, eq + 3 + close, "trailing characters after `)`"));
        }
        let args_start = eq + 1 + open + 1;
        let mut fanins = Vec::new();
        let mut col = args_start + 1;
        for arg in rhs[open + 1..close].split(',') {
            fanins.push(name_token(arg, line, col)?);
            col += arg.len() + 1;
        }
        gates.push(RawGate {
            name: lhs,
            kind,
            fanins,
            line,
        });
    }

    let output = output.ok_or_else(|| syntax(text.lines().count().max(1), 1, "missing OUTPUT declaration"))?;
    let circuit_name = name.unwrap_or_else(|| "circuit".to_string());
    CircuitBuilder::from_raw(circuit_name, &inputs, &gates, &output)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::fixtures::{eqv, EQV_NETLIST};

    #[test]
    fn reference_netlist() {
        let n = eqv();
        assert_eq!(n.num_inputs(), 3);
        assert_eq!(n.num_gates(), 6);
        assert_eq!(n.signal_name(n.output_signal()), "z");
        assert_eq!(n.input_names(), ["x1", "x2", "x3"]);
    }

    #[test]
    fn identity_circuit() {
        let n = parse_netlist("INPUT x1\nz = BUF(x1)\nOUTPUT z").unwrap();
        assert_eq!((n.num_inputs(), n.num_gates()), (1, 1));
    }

    #[test]
    fn gates_in_any_order_are_sorted() {
        let n = parse_netlist("INPUT a\nINPUT b\nz = NOT(y)\ny = AND(a, b)\nOUTPUT z\n").unwrap();
        assert_eq!(n.signal_name(n.gates()[0].out), "y");
        assert_eq!(n.signal_name(n.output_signal()), "z");
    }

    #[test]
    fn dangling_reference() {
        let e = parse_netlist("INPUT a\nz = AND(a, q)\nOUTPUT z\n").unwrap_err();
        assert!(
            matches!(e, Error::DanglingReference { ref signal, line: 2 } if signal == "q"),
            "{e}"
        );
    }

    #[test]
    fn cycle_detected() {
        let e = parse_netlist("INPUT a\np = AND(a, q)\nq = OR(a, p)\nz = BUF(q)\nOUTPUT z\n").unwrap_err();
        assert!(matches!(e, Error::Cycle(_)), "{e}");
    }

    #[test]
    fn multiple_drivers() {
        let e = parse_netlist("INPUT a\nz = BUF(a)\nz = NOT(a)\nOUTPUT z\n").unwrap_err();
        assert!(matches!(e, Error::MultipleDrivers(ref s) if s == "z"));
        let e = parse_netlist("INPUT a\na = NOT(a)\nOUTPUT a\n").unwrap_err();
        assert!(matches!(e, Error::MultipleDrivers(_)));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_netlist("INPUT a\nz = FOO(a)\nOUTPUT z\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 2, column: 5, .. }), "{e}");
        let e = parse_netlist("INPUT a\nz = AND(a, )\nOUTPUT z\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 2, .. }), "{e}");
        let e = parse_netlist("INPUT a\nz BUF(a)\nOUTPUT z\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 2, column: 1, .. }), "{e}");
        let e = parse_netlist("INPUT a\nz = BUF(a)\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { .. }), "{e}");
    }

    #[test]
    fn writer_round_trips() {
        let n = eqv();
        let again = parse_netlist(&n.to_netlist()).unwrap();
        assert_eq!(n, again);
        assert!(EQV_NETLIST.starts_with('#'));
    }
}
