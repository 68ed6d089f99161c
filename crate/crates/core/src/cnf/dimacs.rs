//! DIMACS `cnf` reader and writer.
//!
//! Variable names and roles travel in comment lines
//! `c var <name> <index> <role>` ahead of the problem line, with one-based
//! indices. Files without them get anonymous names `v1..vn`.

use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::{Clause, CnfFormula, Lit, Role, Var, VarTable};

pub fn to_dimacs(f: &CnfFormula) -> String {
    let mut out = String::new();
    for v in f.vars.vars() {
        writeln!(out, "c var {} {} {}", f.vars.name(v), v.0 + 1, f.vars.role(v)).unwrap();
    }
    writeln!(out, "p cnf {} {}", f.num_vars(), f.len()).unwrap();
    for c in &f.clauses {
        for l in c.lits() {
            write!(out, "{} ", l.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

fn bad(line: usize, message: impl Into<String>) -> Error {
    Error::Dimacs {
        line,
        message: message.into(),
    }
}

pub fn from_dimacs(text: &str) -> Result<CnfFormula> {
    let mut named: Vec<(String, usize, Role, usize)> = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Lit> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        if let Some(rest) = t.strip_prefix('c') {
            let mut w = rest.split_whitespace();
            if w.next() == Some("var") {
                let (Some(name), Some(index), Some(role), None) = (w.next(), w.next(), w.next(), w.next()) else {
                    return Err(bad(lineno, "expected `c var <name> <index> <role>`"));
                };
                let index: usize = index.parse().map_err(|_| bad(lineno, "bad variable index"))?;
                let role = Role::parse(role).ok_or_else(|| bad(lineno, format!("unknown role `{role}`")))?;
                named.push((name.to_string(), index, role, lineno));
            }
            continue;
        }
        if let Some(rest) = t.strip_prefix('p') {
            if header.is_some() {
                return Err(bad(lineno, "duplicate problem line"));
            }
            let w: Vec<&str> = rest.split_whitespace().collect();
            if w.len() != 3 || w[0] != "cnf" {
                return Err(bad(lineno, "expected `p cnf <vars> <clauses>`"));
            }
            let nv = w[1].parse().map_err(|_| bad(lineno, "bad variable count"))?;
            let nc = w[2].parse().map_err(|_| bad(lineno, "bad clause count"))?;
            header = Some((nv, nc));
            continue;
        }
        let (nv, _) = header.ok_or_else(|| bad(lineno, "clause before problem line"))?;
        for tok in t.split_whitespace() {
            let l: i64 = tok.parse().map_err(|_| bad(lineno, format!("bad literal `{tok}`")))?;
            if l == 0 {
                let c = Clause::new(current.drain(..)).map_err(|_| bad(lineno, "tautological clause"))?;
                clauses.push(c);
            } else {
                let v = l.unsigned_abs() as usize;
                if v > nv {
                    return Err(bad(lineno, format!("literal {l} out of range 1..={nv}")));
                }
                current.push(Lit::new(Var(v as u32 - 1), l > 0));
            }
        }
    }
    let (nv, nc) = header.ok_or_else(|| bad(text.lines().count(), "missing problem line"))?;
    if !current.is_empty() {
        return Err(bad(text.lines().count(), "last clause is not terminated by 0"));
    }
    if clauses.len() != nc {
        return Err(bad(
            text.lines().count(),
            format!("header declares {nc} clauses, found {}", clauses.len()),
        ));
    }
    let vars = if named.is_empty() {
        VarTable::anonymous(nv)
    } else {
        if named.len() != nv {
            return Err(bad(
                named[0].3,
                format!("{} named variables for {nv} declared", named.len()),
            ));
        }
        named.sort_by_key(|n| n.1);
        let mut t = VarTable::new();
        for (i, (name, index, role, lineno)) in named.into_iter().enumerate() {
            if index != i + 1 {
                return Err(bad(lineno, format!("variable index {index} out of sequence")));
            }
            t.push(name, role).map_err(|_| bad(lineno, "duplicate variable name"))?;
        }
        t
    };
    Ok(CnfFormula { vars, clauses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::fixtures::eqv;
    use crate::cnf::tseitin_encode;

    #[test]
    fn example_formula_text() {
        let h = CnfFormula::from_signed(3, &[&[1, 2, 3], &[-1], &[-2], &[-3]]).unwrap();
        let text = to_dimacs(&h);
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('c')).collect();
        assert_eq!(body, ["p cnf 3 4", "1 2 3 0", "-1 0", "-2 0", "-3 0"]);
    }

    #[test]
    fn empty_formula() {
        assert_eq!(to_dimacs(&CnfFormula::default()), "p cnf 0 0\n");
        assert_eq!(from_dimacs("p cnf 0 0\n").unwrap(), CnfFormula::default());
    }

    #[test]
    fn circuit_encoding_round_trip() {
        let f = tseitin_encode(&eqv());
        let g = from_dimacs(&to_dimacs(&f)).unwrap();
        assert_eq!(f, g);
        assert_eq!(g.vars.name(Var(8)), "z");
        assert_eq!(g.vars.role(Var(8)), Role::Output);
    }

    #[test]
    fn unnamed_input() {
        let f = from_dimacs("c plain\np cnf 2 2\n1 -2 0\n2\n0\n").unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.vars.name(Var(1)), "v2");
    }

    #[test]
    fn malformed_inputs() {
        assert!(from_dimacs("1 2 0\n").is_err());
        assert!(from_dimacs("p cnf 2\n").is_err());
        assert!(from_dimacs("p cnf 2 1\n1 3 0\n").is_err());
        assert!(from_dimacs("p cnf 2 2\n1 0\n").is_err());
        assert!(from_dimacs("p cnf 1 1\n1 -1 0\n").is_err());
    }
}
