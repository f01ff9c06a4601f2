//! Backbones: variable sets with exactly one assignment leaving the formula
//! satisfiable.
//!
//! The empty set is a backbone of every satisfiable formula and unsatisfiable
//! formulas have none. Every backbone is a subset of the variables fixed
//! across all models, which [`backbone_fixed_variables`] computes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Serialize, Serializer};

use crate::beta::Beta;
use crate::error::{Error, Result};
use crate::formula::{assignments_over, models_with_cap, Formula, PartialAssignment, Variable};
use crate::solver::{Decide, SatResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BackboneReport {
    pub satisfiable: bool,
    /// Forced value of each fixed variable; empty when unsatisfiable.
    #[serde(serialize_with = "serialize_fixed")]
    pub fixed: BTreeMap<Variable, bool>,
}

#[derive(Serialize)]
struct FixedEntry {
    variable: Variable,
    value: bool,
}

fn serialize_fixed<S: Serializer>(fixed: &BTreeMap<Variable, bool>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(fixed.iter().map(|(&variable, &value)| FixedEntry { variable, value }))
}

impl BackboneReport {
    fn unsatisfiable() -> Self {
        BackboneReport {
            satisfiable: false,
            fixed: BTreeMap::new(),
        }
    }

    /// The maximal backbone.
    pub fn backbone(&self) -> BTreeSet<Variable> {
        self.fixed.keys().copied().collect()
    }
}

fn check_subset<F: Formula + ?Sized>(formula: &F, set: &BTreeSet<Variable>) -> Result<()> {
    let vars = formula.variables();
    match set.iter().find(|v| !vars.contains(v)) {
        Some(&v) => Err(Error::UnknownVariable(v)),
        None => Ok(()),
    }
}

/// True iff exactly one assignment of `set` leaves the formula satisfiable.
pub fn is_backbone<F: Decide + ?Sized>(formula: &F, set: &BTreeSet<Variable>) -> Result<bool> {
    check_subset(formula, set)?;
    let vars: Vec<Variable> = set.iter().copied().collect();
    let mut satisfiable_branches = 0;
    for a in assignments_over(&vars) {
        if formula.decide_under(&a)?.is_sat() {
            satisfiable_branches += 1;
            if satisfiable_branches > 1 {
                return Ok(false);
            }
        }
    }
    Ok(satisfiable_branches == 1)
}

/// Variables taking the same value in every model.
///
/// One solver call finds a model m; then each variable v is fixed iff the
/// formula with v bound to the opposite of m(v) is unsatisfiable. CNF inputs
/// use DPLL and general formulas the splitting solver, so neither path is
/// bounded by the brute-force cap.
pub fn backbone_fixed_variables<F: Decide + ?Sized>(formula: &F) -> Result<BackboneReport> {
    let SatResult::Satisfiable(model) = formula.decide()? else {
        return Ok(BackboneReport::unsatisfiable());
    };
    let mut fixed = BTreeMap::new();
    for v in formula.variables() {
        let value = model.get(v).unwrap_or(false);
        let flipped = PartialAssignment::new().with(v, !value);
        if !formula.decide_under(&flipped)?.is_sat() {
            fixed.insert(v, value);
        }
    }
    Ok(BackboneReport {
        satisfiable: true,
        fixed,
    })
}

/// The same report computed by intersecting all models; fails beyond `cap` variables.
pub fn backbone_by_enumeration<F: Formula + ?Sized>(formula: &F, cap: usize) -> Result<BackboneReport> {
    let mut models = models_with_cap(formula, cap)?;
    let Some(first) = models.next() else {
        return Ok(BackboneReport::unsatisfiable());
    };
    let mut fixed: BTreeMap<Variable, bool> = first.iter().collect();
    for m in models {
        fixed.retain(|&v, b| m.get(v) == Some(*b));
        if fixed.is_empty() {
            break;
        }
    }
    Ok(BackboneReport {
        satisfiable: true,
        fixed,
    })
}

pub fn has_nontrivial_backbone<F: Decide + ?Sized>(formula: &F) -> Result<bool> {
    let r = backbone_fixed_variables(formula)?;
    Ok(r.satisfiable && !r.fixed.is_empty())
}

/// Satisfiable with a backbone of at least `beta·|V|` variables. The maximal
/// backbone witnesses every smaller one, so only its size matters.
pub fn has_large_backbone<F: Decide + ?Sized>(formula: &F, beta: Beta) -> Result<bool> {
    let r = backbone_fixed_variables(formula)?;
    Ok(r.satisfiable && beta.is_met_by(r.fixed.len(), formula.variables().len()))
}
