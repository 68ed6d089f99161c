use std::fmt;

use crate::error::{Error, Result};

use super::Bits;

/// Zero-based CNF variable index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn lit(self, positive: bool) -> Lit {
        Lit::new(self, positive)
    }
}

/// A literal, packed as `2 * var + negated`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: Var, positive: bool) -> Self {
        Lit(var.0 << 1 | (!positive) as u32)
    }

    #[inline]
    pub fn pos(var: Var) -> Self {
        Lit::new(var, true)
    }

    #[inline]
    pub fn neg(var: Var) -> Self {
        Lit::new(var, false)
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_code(code: usize) -> Self {
        Lit(code as u32)
    }

    /// Value of the literal when its variable takes `value`.
    #[inline]
    pub fn eval(self, value: bool) -> bool {
        value == self.is_positive()
    }

    /// Signed one-based DIMACS form.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var().0 as i64 + 1;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Disjunction of literals with at most one literal per variable, kept in
/// ascending variable order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Builds a clause, merging duplicate literals. Fails on `v ∨ ¬v`.
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Result<Self> {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0].var() == w[1].var()) {
            return Err(Error::Tautology);
        }
        Ok(Clause { lits })
    }

    pub fn empty() -> Self {
        Clause { lits: Vec::new() }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var())
    }

    pub fn contains_var(&self, var: Var) -> bool {
        self.lits.binary_search_by_key(&var, |l| l.var()).is_ok()
    }

    /// Evaluates the clause on a dense assignment (bit `i` is variable `i`).
    #[inline]
    pub fn is_satisfied_by(&self, bits: &Bits) -> bool {
        self.lits.iter().any(|l| l.eval(bits.get(l.var().index())))
    }

    /// The clause with every variable renamed through `map`.
    pub fn rename(&self, map: impl Fn(Var) -> Var) -> Clause {
        Clause::new(self.lits.iter().map(|l| Lit::new(map(l.var()), l.is_positive()))).expect("renaming is injective")
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.lits).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_dedup() {
        let c = Clause::new([Lit::neg(Var(3)), Lit::pos(Var(0)), Lit::pos(Var(0))]).unwrap();
        assert_eq!(c.lits(), &[Lit::pos(Var(0)), Lit::neg(Var(3))]);
        assert!(c.contains_var(Var(3)));
        assert!(!c.contains_var(Var(1)));
    }

    #[test]
    fn tautology_rejected() {
        assert!(matches!(
            Clause::new([Lit::pos(Var(1)), Lit::neg(Var(1))]),
            Err(Error::Tautology)
        ));
    }

    #[test]
    fn dimacs_literals() {
        assert_eq!(Lit::pos(Var(0)).to_dimacs(), 1);
        assert_eq!(Lit::neg(Var(4)).to_dimacs(), -5);
        assert_eq!(!Lit::neg(Var(4)), Lit::pos(Var(4)));
    }
}
