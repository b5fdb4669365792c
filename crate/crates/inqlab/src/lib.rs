//! Finite-model workbench for intuitionistic inquisitive and dependence logics.
//!
//! Formulas are evaluated in two independent ways: by team semantics on finite
//! Kripke models ([`team`]) and by core semantics on finite inquisitive and
//! dependence algebras ([`algebra`]). The [`duality`] module translates between
//! the two sides, so each evaluator can serve as an oracle for the other.

pub mod algebra;
pub mod corpus;
pub mod duality;
pub mod formula;
pub mod io;
pub mod team;

pub use algebra::{FiniteAlgebra, Flavour};
pub use formula::{dnf, parse, Axiom, Formula};
pub use team::{Frame, Model, Team};
