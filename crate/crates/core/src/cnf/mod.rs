//! Clauses, formulas, assignments and circuit encodings.

mod bits;
mod clause;
mod dimacs;
mod formula;
mod nbhd;
mod tseitin;

pub use bits::Bits;
pub use clause::{Clause, Lit, Var};
pub use dimacs::{from_dimacs, to_dimacs};
pub use formula::{Assignment, CnfFormula, Role, VarTable};
pub(crate) use nbhd::directed_flips;
pub use nbhd::{hamming, nbhd, nbhd_directed};
pub use tseitin::{circuit_vars, encode_circuit, gate_clauses, tseitin_encode, CircuitEncoding};
