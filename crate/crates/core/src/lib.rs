//! Property checking of single-output combinational circuits with stable
//! sets of assignments.
//!
//! A circuit `N` is constant 0 iff `F_N ∧ z` is unsatisfiable, and an
//! unsatisfiable formula is exactly one that has a stable set of
//! assignments (SSA). Building an SSA of `F_N ∧ z`, or of a formula `H(V)`
//! it implies, yields a proof together with a set of tests that exercise
//! the circuit in the places the proof needs.

pub mod circuit;
pub mod cnf;
pub mod error;
pub mod sat;
pub mod semstr;
pub mod ssa;
pub mod testgen;

#[doc(hidden)]
pub mod testing;

pub use circuit::{Circuit, Cut, Gate, GateId, GateKind};
pub use cnf::{Assignment, Bits, Clause, CnfFormula, Lit, Var};
pub use error::{Error, Result, Stage};
pub use sat::{SatResult, SolverConfig};
pub use semstr::Projection;
pub use ssa::Ssa;
pub use testgen::{Test, TestKind, TestSet};
