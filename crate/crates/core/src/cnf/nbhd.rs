//! Hamming-distance neighbourhoods of falsifying assignments.

use crate::error::{Error, Result};

use super::{Assignment, Bits, Clause};

pub fn hamming(p: &Assignment, q: &Assignment) -> Result<usize> {
    if p.domain() != q.domain() {
        return Err(Error::DomainMismatch);
    }
    Ok(p.bits().hamming(q.bits()))
}

/// Positions in `p`'s domain of the variables of `c`, after checking that
/// `p` falsifies `c`.
fn clause_positions(p: &Assignment, c: &Clause) -> Result<Vec<usize>> {
    let mut positions = Vec::with_capacity(c.len());
    for &l in c.lits() {
        let i = p.position(l.var()).ok_or(Error::UnknownVariable(l.var().0))?;
        if l.eval(p.bits().get(i)) {
            return Err(Error::NotFalsified);
        }
        positions.push(i);
    }
    Ok(positions)
}

/// Assignments at distance one from `p` that satisfy `c`: one per literal.
pub fn nbhd(p: &Assignment, c: &Clause) -> Result<Vec<Assignment>> {
    let positions = clause_positions(p, c)?;
    Ok(positions
        .into_iter()
        .map(|i| Assignment::new(p.domain().to_vec(), p.bits().flipped(i)).expect("same width"))
        .collect())
}

/// The part of [`nbhd`] lying strictly farther from `q` than `p` is.
pub fn nbhd_directed(q: &Assignment, p: &Assignment, c: &Clause) -> Result<Vec<Assignment>> {
    if q.domain() != p.domain() {
        return Err(Error::DomainMismatch);
    }
    let positions = clause_positions(p, c)?;
    Ok(positions
        .into_iter()
        .filter(|&i| p.bits().get(i) == q.bits().get(i))
        .map(|i| Assignment::new(p.domain().to_vec(), p.bits().flipped(i)).expect("same width"))
        .collect())
}

/// Dense variant of [`nbhd_directed`] used on hot paths: `p` and `center`
/// are over variables `0..n` and `p` is assumed to falsify `c`.
#[inline]
pub(crate) fn directed_flips<'a>(center: &'a Bits, p: &'a Bits, c: &'a Clause) -> impl Iterator<Item = usize> + 'a {
    c.lits()
        .iter()
        .map(|l| l.var().index())
        .filter(move |&i| p.get(i) == center.get(i))
}
