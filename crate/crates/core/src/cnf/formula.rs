use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

use super::{Bits, Clause, Lit, Var};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Role {
    Input,
    Internal,
    Output,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Input => "input",
            Role::Internal => "internal",
            Role::Output => "output",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        match s {
            "input" => Some(Role::Input),
            "internal" => Some(Role::Internal),
            "output" => Some(Role::Output),
            _ => None,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Bijection between signal names and variable indices, in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    roles: Vec<Role>,
    by_name: HashMap<String, Var>,
}

impl VarTable {
    pub fn new() -> Self {
        VarTable::default()
    }

    /// Table of `n` anonymous internal variables named `v1..vn`.
    pub fn anonymous(n: usize) -> Self {
        let mut t = VarTable::new();
        for i in 0..n {
            t.push(format!("v{}", i + 1), Role::Internal).expect("fresh names");
        }
        t
    }

    pub fn push(&mut self, name: impl Into<String>, role: Role) -> Result<Var> {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return Err(Error::MultipleDrivers(name));
        }
        let var = Var(self.names.len() as u32);
        self.by_name.insert(name.clone(), var);
        self.names.push(name);
        self.roles.push(role);
        Ok(var)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, var: Var) -> &str {
        &self.names[var.index()]
    }

    pub fn role(&self, var: Var) -> Role {
        self.roles[var.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.by_name.get(name).copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        (0..self.names.len() as u32).map(Var)
    }

    pub fn with_role(&self, role: Role) -> Vec<Var> {
        self.vars().filter(|&v| self.role(v) == role).collect()
    }

    /// Sub-table over `vars`, renumbered densely in the given order.
    pub fn restrict(&self, vars: &[Var]) -> VarTable {
        let mut t = VarTable::new();
        for &v in vars {
            t.push(self.name(v), self.role(v)).expect("distinct vars");
        }
        t
    }
}

/// A full assignment to an ordered set of variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Assignment {
    domain: Vec<Var>,
    bits: Bits,
}

impl Assignment {
    pub fn new(domain: Vec<Var>, bits: Bits) -> Result<Self> {
        if domain.len() != bits.len() {
            return Err(Error::DomainMismatch);
        }
        Ok(Assignment { domain, bits })
    }

    /// Assignment over variables `0..bits.len()`.
    pub fn dense(bits: Bits) -> Self {
        Assignment {
            domain: (0..bits.len() as u32).map(Var).collect(),
            bits,
        }
    }

    pub fn domain(&self) -> &[Var] {
        &self.domain
    }

    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn into_bits(self) -> Bits {
        self.bits
    }

    pub fn position(&self, var: Var) -> Option<usize> {
        self.domain.iter().position(|&v| v == var)
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        self.position(var).map(|i| self.bits.get(i))
    }

    /// Per-variable lookup table sized for `num_vars` variables.
    pub fn to_partial(&self, num_vars: usize) -> Result<Vec<Option<bool>>> {
        let mut out = vec![None; num_vars];
        for (i, &v) in self.domain.iter().enumerate() {
            if v.index() >= num_vars {
                return Err(Error::UnknownVariable(v.0));
            }
            out[v.index()] = Some(self.bits.get(i));
        }
        Ok(out)
    }

    pub fn satisfies_clause(&self, c: &Clause) -> Result<bool> {
        for &l in c.lits() {
            let value = self.value(l.var()).ok_or(Error::UnknownVariable(l.var().0))?;
            if l.eval(value) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bits.fmt(f)
    }
}

/// A CNF formula with stable clause indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    pub vars: VarTable,
    pub clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(vars: VarTable) -> Self {
        CnfFormula {
            vars,
            clauses: Vec::new(),
        }
    }

    /// Formula over anonymous variables `v1..vn` given as signed DIMACS literals.
    pub fn from_signed(num_vars: usize, clauses: &[&[i64]]) -> Result<Self> {
        let mut f = CnfFormula::new(VarTable::anonymous(num_vars));
        for c in clauses {
            let lits = c.iter().map(|&l| {
                debug_assert!(l != 0 && l.unsigned_abs() as usize <= num_vars);
                Lit::new(Var(l.unsigned_abs() as u32 - 1), l > 0)
            });
            f.push(Clause::new(lits)?)?;
        }
        Ok(f)
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn push(&mut self, clause: Clause) -> Result<usize> {
        if let Some(v) = clause.vars().find(|v| v.index() >= self.vars.len()) {
            return Err(Error::UnknownVariable(v.0));
        }
        self.clauses.push(clause);
        Ok(self.clauses.len() - 1)
    }

    /// Dense evaluation: bit `i` of `bits` is variable `i`.
    pub fn is_satisfied_by(&self, bits: &Bits) -> bool {
        self.clauses.iter().all(|c| c.is_satisfied_by(bits))
    }

    /// Indices, ascending, of the clauses falsified by `bits` (dense).
    pub fn falsified_by(&self, bits: &Bits) -> Vec<usize> {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_satisfied_by(bits))
            .map(|(i, _)| i)
            .collect()
    }

    /// Variables occurring in at least one clause.
    pub fn occurring(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_vars()];
        for c in &self.clauses {
            for v in c.vars() {
                seen[v.index()] = true;
            }
        }
        seen
    }

    /// Order-sensitive 64-bit fingerprint of the clause list.
    pub fn fingerprint(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        let mut mix = |x: u64| {
            for byte in x.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(PRIME);
            }
        };
        mix(self.num_vars() as u64);
        for c in &self.clauses {
            mix(u64::MAX);
            for l in c.lits() {
                mix(l.code() as u64);
            }
        }
        h
    }

    /// Clause indices (ascending) falsified by `p`, where `p` may cover any
    /// superset of the formula's occurring variables.
    pub fn falsified_clauses(&self, p: &Assignment) -> Result<Vec<usize>> {
        let partial = p.to_partial(self.num_vars().max(max_var(p) + 1))?;
        let mut out = Vec::new();
        for (i, c) in self.clauses.iter().enumerate() {
            let mut sat = false;
            for l in c.lits() {
                let value = partial
                    .get(l.var().index())
                    .copied()
                    .flatten()
                    .ok_or(Error::UnknownVariable(l.var().0))?;
                if l.eval(value) {
                    sat = true;
                    break;
                }
            }
            if !sat {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// `G|v`: drops clauses satisfied by `v` and strips literals falsified by
    /// it. The second component maps every reduced clause to its original index.
    pub fn cofactor(&self, v: &Assignment) -> Result<(CnfFormula, Vec<usize>)> {
        let partial = v.to_partial(self.num_vars())?;
        let mut reduced = CnfFormula::new(self.vars.clone());
        let mut parents = Vec::new();
        'clauses: for (i, c) in self.clauses.iter().enumerate() {
            let mut kept = Vec::with_capacity(c.len());
            for &l in c.lits() {
                match partial[l.var().index()] {
                    Some(value) if l.eval(value) => continue 'clauses,
                    Some(_) => {}
                    None => kept.push(l),
                }
            }
            reduced.clauses.push(Clause::new(kept).expect("subset of a clause"));
            parents.push(i);
        }
        Ok((reduced, parents))
    }
}

fn max_var(p: &Assignment) -> usize {
    p.domain().iter().map(|v| v.index()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Bits {
        s.parse().unwrap()
    }

    #[test]
    fn cofactor_strips_falsified_literals() {
        // (x1 ∨ w) ∧ (x1 ∨ ¬w)
        let g = CnfFormula::from_signed(2, &[&[1, 2], &[1, -2]]).unwrap();
        let v = Assignment::new(vec![Var(0)], bits("0")).unwrap();
        let (r, parents) = g.cofactor(&v).unwrap();
        assert_eq!(
            r.clauses,
            vec![
                Clause::new([Lit::pos(Var(1))]).unwrap(),
                Clause::new([Lit::neg(Var(1))]).unwrap()
            ]
        );
        assert_eq!(parents, vec![0, 1]);

        let v = Assignment::new(vec![Var(0)], bits("1")).unwrap();
        let (r, parents) = g.cofactor(&v).unwrap();
        assert!(r.is_empty() && parents.is_empty());
    }

    #[test]
    fn cofactor_can_produce_empty_clause() {
        let g = CnfFormula::from_signed(1, &[&[1]]).unwrap();
        let v = Assignment::new(vec![Var(0)], bits("0")).unwrap();
        let (r, parents) = g.cofactor(&v).unwrap();
        assert_eq!(r.clauses, vec![Clause::empty()]);
        assert_eq!(parents, vec![0]);
    }

    #[test]
    fn falsified_clauses_of_example_formula() {
        // C1 = v1 ∨ v2 ∨ v3, C2 = ¬v1, C3 = ¬v2, C4 = ¬v3
        let h = CnfFormula::from_signed(3, &[&[1, 2, 3], &[-1], &[-2], &[-3]]).unwrap();
        assert_eq!(h.falsified_clauses(&Assignment::dense(bits("000"))).unwrap(), vec![0]);
        assert_eq!(
            h.falsified_clauses(&Assignment::dense(bits("111"))).unwrap(),
            vec![1, 2, 3]
        );
        let g = CnfFormula::from_signed(2, &[&[1, 2]]).unwrap();
        assert!(g.falsified_clauses(&Assignment::dense(bits("10"))).unwrap().is_empty());
    }

    #[test]
    fn fingerprint_is_clause_order_sensitive() {
        let a = CnfFormula::from_signed(2, &[&[1], &[2]]).unwrap();
        let b = CnfFormula::from_signed(2, &[&[2], &[1]]).unwrap();
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), a.clone().fingerprint());
    }
}
