//! Independent truth-table oracles shared by the integration tests.

#![allow(dead_code)]

use opaque_sat::{CnfFormula, Formula, PartialAssignment, PropFormula, Variable};

/// Clause lists as signed DIMACS integers.
pub fn clause_lists(f: &CnfFormula) -> Vec<Vec<i64>> {
    f.clauses().map(|c| c.literals().map(|l| l.to_dimacs()).collect()).collect()
}

/// Satisfiability by bitmask truth table, written without the library's enumeration.
pub fn cnf_sat(f: &CnfFormula) -> bool {
    let vars: Vec<u32> = f.variables().iter().map(|v| v.id()).collect();
    assert!(vars.len() <= 24, "oracle too slow beyond 24 variables");
    let clauses: Vec<Vec<(usize, bool)>> = clause_lists(f)
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|l| (vars.binary_search(&(l.unsigned_abs() as u32)).unwrap(), l > 0))
                .collect()
        })
        .collect();
    (0u64..1 << vars.len()).any(|mask| {
        clauses
            .iter()
            .all(|c| c.iter().any(|&(i, pos)| (mask >> i & 1 == 1) == pos))
    })
}

/// Every total assignment over the formula's variables.
pub fn assignments(vars: &[Variable]) -> Vec<PartialAssignment> {
    (0u64..1 << vars.len())
        .map(|mask| vars.iter().enumerate().map(|(i, &v)| (v, mask >> i & 1 == 1)).collect())
        .collect()
}

pub fn prop_sat(p: &PropFormula) -> bool {
    let vars: Vec<Variable> = p.variables().into_iter().collect();
    assignments(&vars).iter().any(|a| p.evaluate(a).unwrap())
}

/// The smallest integer q with q·(d − p) ≥ p·n, by counting up.
pub fn tail_length_by_search(p: u64, d: u64, n: u64) -> u64 {
    (0..).find(|q| q * (d - p) >= p * n).unwrap()
}
