//! Shared fixtures and proptest strategies for unit tests.

use proptest::prelude::*;

use crate::formula::{Clause, CnfFormula, Literal, PropFormula, Variable};

pub fn example_one() -> CnfFormula {
    CnfFormula::from_dimacs_clauses(&[&[1, -2, -3, 5], &[1, 2, 4, 5], &[3, -4], &[-1, 2, 3, 5]])
}

pub fn backbone_example() -> PropFormula {
    crate::formula::grammar::parse_formula("x1 & (x1 <-> !x2) & (x2 <-> x3) & (x2 | x4 | x5)").unwrap()
}

pub fn cnf_strategy(max_var: u32, max_width: usize, max_clauses: usize) -> impl Strategy<Value = CnfFormula> {
    let lit = (1..=max_var, any::<bool>()).prop_map(|(v, p)| Literal::new(Variable::new(v), p));
    let clause = proptest::collection::vec(lit, 1..=max_width).prop_map(Clause::new);
    proptest::collection::vec(clause, 0..=max_clauses).prop_map(CnfFormula::new)
}

pub fn prop_strategy(max_var: u32) -> impl Strategy<Value = PropFormula> {
    let leaf = prop_oneof![
        1 => Just(PropFormula::True),
        1 => Just(PropFormula::False),
        6 => (1..=max_var).prop_map(PropFormula::atom),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(PropFormula::not),
            proptest::collection::vec(inner.clone(), 2..4).prop_map(PropFormula::And),
            proptest::collection::vec(inner.clone(), 2..4).prop_map(PropFormula::Or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PropFormula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| PropFormula::iff(a, b)),
        ]
    })
}
