use std::collections::{HashMap, HashSet, VecDeque};

use crate::cnf::{directed_flips, Bits, CnfFormula};
use crate::error::{Error, Result, Stage};

use super::Ssa;

/// Default cap on the number of points [`find_ssa_within`] may evaluate.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Ssa),
    /// No candidate center admits an SSA inside the allowed set.
    NotFound,
}

struct Search<'a, A> {
    h: &'a CnfFormula,
    allowed: &'a A,
    center: Bits,
    /// `Some(c)`: the point roots an SSA using clause `c`; `None`: it cannot.
    memo: HashMap<Bits, Option<usize>>,
    steps: u64,
    budget: u64,
}

impl<A: Fn(&Bits) -> bool> Search<'_, A> {
    fn good(&mut self, p: &Bits) -> Result<bool> {
        if let Some(r) = self.memo.get(p) {
            return Ok(r.is_some());
        }
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::Budget {
                stage: Stage::SsaSearch,
                limit: self.budget,
            });
        }
        let r = self.eval(p)?;
        self.memo.insert(p.clone(), r);
        Ok(r.is_some())
    }

    fn eval(&mut self, p: &Bits) -> Result<Option<usize>> {
        if !(self.allowed)(p) {
            return Ok(None);
        }
        let mut options: Vec<(usize, usize, Vec<Bits>)> = Vec::new();
        'clauses: for (ci, c) in self.h.clauses.iter().enumerate() {
            if c.is_satisfied_by(p) {
                continue;
            }
            let mut unknown = 0;
            let mut next = Vec::with_capacity(c.len());
            for i in directed_flips(&self.center, p, c) {
                let q = p.flipped(i);
                match self.memo.get(&q) {
                    Some(None) => continue 'clauses,
                    Some(Some(_)) => {}
                    None => {
                        if !(self.allowed)(&q) {
                            continue 'clauses;
                        }
                        unknown += 1;
                    }
                }
                next.push(q);
            }
            options.push((unknown, ci, next));
        }
        options.sort_by_key(|o| (o.0, o.1));
        for (_, ci, next) in options {
            let mut all = true;
            for q in &next {
                if !self.good(q)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(Some(ci));
            }
        }
        Ok(None)
    }

    fn collect(&self) -> Result<Ssa> {
        let mut queue = VecDeque::from([self.center.clone()]);
        let mut pairs = Vec::new();
        let mut placed = HashSet::from([self.center.clone()]);
        while let Some(p) = queue.pop_front() {
            let ci = self.memo[&p].expect("reachable points are good");
            for i in directed_flips(&self.center, &p, &self.h.clauses[ci]) {
                let q = p.flipped(i);
                if placed.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
            pairs.push((p, ci));
        }
        Ssa::new(self.h, self.center.clone(), pairs)
    }
}

/// Searches for an SSA of `h` whose points all satisfy `allowed`, trying
/// each center in turn. Complete for every center: `NotFound` means no
/// clause choice works. `budget` bounds distinct points evaluated overall.
pub fn find_ssa_within<A, I>(h: &CnfFormula, allowed: &A, centers: I, budget: u64) -> Result<SearchOutcome>
where
    A: Fn(&Bits) -> bool,
    I: IntoIterator<Item = Bits>,
{
    let mut steps = 0;
    for center in centers {
        if center.len() != h.num_vars() {
            return Err(Error::DomainMismatch);
        }
        let mut s = Search {
            h,
            allowed,
            center: center.clone(),
            memo: HashMap::new(),
            steps,
            budget,
        };
        let found = s.good(&center)?;
        steps = s.steps;
        if found {
            return Ok(SearchOutcome::Found(s.collect()?));
        }
    }
    Ok(SearchOutcome::NotFound)
}
