//! Unit propagation, strong backdoors, backbones and the padded formula
//! families built on them.
//!
//! CNF formulas use set semantics: a formula is a set of clauses and a
//! clause is a set of literals. General propositional formulas are kept as
//! trees and never converted to CNF, since conversion changes the variable
//! set and with it every backbone and backdoor.

pub mod backbone;
pub mod bench;
pub mod backdoor;
pub mod beta;
pub mod constructions;
pub mod error;
pub mod formula;
pub mod generate;
pub mod solver;
pub mod subsolver;

#[cfg(test)]
mod test_support;

pub use backbone::{backbone_fixed_variables, has_large_backbone, has_nontrivial_backbone, is_backbone, BackboneReport};
pub use backdoor::{
    find_smallest_strong_backdoor, search_strong_backdoor, solve_via_backdoor, solve_via_bounded_backdoors,
    verify_strong_backdoor, BackdoorCertificate, BackdoorFailure, BackdoorVerdict, BoundedVerdict, SearchLimits,
    SearchOutcome,
};
pub use beta::Beta;
pub use error::{Error, ParseError, Result};
pub use formula::{
    fresh_variables, parse_any, AnyFormula, Clause, CnfFormula, Formula, Literal, PartialAssignment, PropFormula,
    Variable,
};
pub use solver::{brute_force_solve, dpll_solve, split_solve, Decide, SatResult, SolveStats};
pub use subsolver::{up_decided, up_subsolve, SubsolverOutcome, UnitPropagator};
