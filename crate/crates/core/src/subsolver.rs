//! The unit-propagation subsolver.
//!
//! Each round it either detects the empty clause (unsatisfiable), finds no
//! clauses left (satisfiable), or sets the literal of the least unit clause to
//! True and simplifies. With none of those available it rejects. Unit clauses
//! are compared by variable id, then positive before negative.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::formula::{CnfFormula, Formula, Literal, PartialAssignment, Variable};
use crate::solver::SatResult;

/// One propagation: the unit clause `{literal}` was chosen and `variable` set to `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    #[serde(rename = "clause")]
    pub literal: Literal,
    pub variable: Variable,
    pub value: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Rejects,
    Determines { result: SatResult },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsolverOutcome {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub trace: Vec<TraceStep>,
}

impl SubsolverOutcome {
    pub fn is_determined(&self) -> bool {
        matches!(self.verdict, Verdict::Determines { .. })
    }

    pub fn result(&self) -> Option<&SatResult> {
        match &self.verdict {
            Verdict::Determines { result } => Some(result),
            Verdict::Rejects => None,
        }
    }
}

/// A polynomial-time procedure that rejects or determines a formula.
pub trait Subsolver {
    fn determine(&self, formula: &CnfFormula) -> SubsolverOutcome;
}

/// The unit-propagation subsolver as a [`Subsolver`].
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitPropagation;

impl Subsolver for UnitPropagation {
    fn determine(&self, formula: &CnfFormula) -> SubsolverOutcome {
        up_subsolve(formula)
    }
}

/// Runs the subsolver on `formula`.
pub fn up_subsolve(formula: &CnfFormula) -> SubsolverOutcome {
    UnitPropagator::new(formula).run(&PartialAssignment::new())
}

pub fn up_decided(formula: &CnfFormula) -> bool {
    up_subsolve(formula).is_determined()
}

#[derive(Clone, Copy)]
struct DenseLit {
    var: usize,
    positive: bool,
}

impl DenseLit {
    fn code(self) -> usize {
        2 * self.var + usize::from(!self.positive)
    }
}

/// A formula indexed once for repeated propagation under different assumptions.
///
/// `run(a)` behaves exactly like `up_subsolve(F[a])`, including the trace and
/// the variable set of the reported model, without materializing `F[a]`.
pub struct UnitPropagator {
    vars: Vec<Variable>,
    index: HashMap<Variable, usize>,
    clauses: Vec<Vec<DenseLit>>,
    occurrences: Vec<Vec<usize>>,
}

impl UnitPropagator {
    pub fn new(formula: &CnfFormula) -> Self {
        let vars: Vec<Variable> = formula.variables().into_iter().collect();
        let index: HashMap<Variable, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut occurrences = vec![Vec::new(); 2 * vars.len()];
        let clauses: Vec<Vec<DenseLit>> = formula
            .clauses()
            .enumerate()
            .map(|(ci, c)| {
                c.literals()
                    .map(|l| {
                        let d = DenseLit {
                            var: index[&l.var()],
                            positive: l.is_positive(),
                        };
                        occurrences[d.code()].push(ci);
                        d
                    })
                    .collect()
            })
            .collect();
        UnitPropagator {
            vars,
            index,
            clauses,
            occurrences,
        }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    fn literal(&self, d: DenseLit) -> Literal {
        Literal::new(self.vars[d.var], d.positive)
    }

    /// Propagates on F[assumptions]. Bindings of variables outside V(F) are ignored.
    pub fn run(&self, assumptions: &PartialAssignment) -> SubsolverOutcome {
        let n = self.vars.len();
        let mut values: Vec<Option<bool>> = vec![None; n];
        for (v, b) in assumptions.iter() {
            if let Some(&i) = self.index.get(&v) {
                values[i] = Some(b);
            }
        }

        let mut satisfied = vec![false; self.clauses.len()];
        let mut open = vec![0u32; self.clauses.len()];
        let mut satisfied_count = 0usize;
        let mut empty_count = 0usize;
        let mut units: BTreeSet<Literal> = BTreeSet::new();
        let mut residual_vars = vec![false; n];

        for (ci, clause) in self.clauses.iter().enumerate() {
            let sat = clause
                .iter()
                .any(|l| values[l.var].is_some_and(|b| b == l.positive));
            if sat {
                satisfied[ci] = true;
                satisfied_count += 1;
                continue;
            }
            let mut free = clause.iter().filter(|l| values[l.var].is_none());
            let first = free.next();
            let count = 1 + free.count();
            match first {
                None => empty_count += 1,
                Some(&l) => {
                    open[ci] = count as u32;
                    if count == 1 {
                        units.insert(self.literal(l));
                    }
                }
            }
            for l in clause.iter().filter(|l| values[l.var].is_none()) {
                residual_vars[l.var] = true;
            }
        }

        let mut trace = Vec::new();
        loop {
            if empty_count > 0 {
                return SubsolverOutcome {
                    verdict: Verdict::Determines {
                        result: SatResult::Unsatisfiable,
                    },
                    trace,
                };
            }
            if satisfied_count == self.clauses.len() {
                // Residual variables never propagated default to False.
                let model = (0..n)
                    .filter(|&i| residual_vars[i])
                    .map(|i| (self.vars[i], values[i].unwrap_or(false)))
                    .collect();
                return SubsolverOutcome {
                    verdict: Verdict::Determines {
                        result: SatResult::Satisfiable(model),
                    },
                    trace,
                };
            }
            let Some(lit) = units.pop_first() else {
                return SubsolverOutcome {
                    verdict: Verdict::Rejects,
                    trace,
                };
            };
            units.remove(&!lit);
            let var = self.index[&lit.var()];
            debug_assert!(values[var].is_none());
            values[var] = Some(lit.is_positive());
            trace.push(TraceStep {
                step: trace.len(),
                literal: lit,
                variable: lit.var(),
                value: lit.is_positive(),
            });
            debug_assert!(trace.len() <= n, "more propagations than variables");

            let true_code = DenseLit { var, positive: lit.is_positive() }.code();
            for &ci in &self.occurrences[true_code] {
                if !satisfied[ci] {
                    satisfied[ci] = true;
                    satisfied_count += 1;
                }
            }
            for &ci in &self.occurrences[true_code ^ 1] {
                if satisfied[ci] {
                    continue;
                }
                open[ci] -= 1;
                match open[ci] {
                    0 => empty_count += 1,
                    1 => {
                        let l = self.clauses[ci]
                            .iter()
                            .find(|l| values[l.var].is_none())
                            .expect("one open literal");
                        units.insert(self.literal(*l));
                    }
                    _ => {}
                }
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::formula::{models, Clause};
    use proptest::prelude::*;

    /// Independent reference: literally simplify the clause set each round.
    pub(crate) fn naive_up(f: &CnfFormula) -> SubsolverOutcome {
        let original_vars = f.variables();
        let mut current = f.clone();
        let mut assigned = PartialAssignment::new();
        let mut trace = Vec::new();
        loop {
            if current.is_trivially_false() {
                return SubsolverOutcome {
                    verdict: Verdict::Determines { result: SatResult::Unsatisfiable },
                    trace,
                };
            }
            if current.is_trivially_true() {
                let model = original_vars
                    .iter()
                    .map(|&v| (v, assigned.get(v).unwrap_or(false)))
                    .collect();
                return SubsolverOutcome {
                    verdict: Verdict::Determines { result: SatResult::Satisfiable(model) },
                    trace,
                };
            }
            let Some(lit) = current.clauses().filter_map(Clause::as_unit).min() else {
                return SubsolverOutcome { verdict: Verdict::Rejects, trace };
            };
            assigned.assign(lit.var(), lit.is_positive());
            trace.push(TraceStep {
                step: trace.len(),
                literal: lit,
                variable: lit.var(),
                value: lit.is_positive(),
            });
            current = current.substitute_var(lit.var(), lit.is_positive()).unwrap();
        }
    }

    fn cnf(clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::from_dimacs_clauses(clauses)
    }

    #[test]
    fn example_two_branch_picks_x2_first() {
        let out = up_subsolve(&cnf(&[&[-4], &[2]]));
        assert!(matches!(out.result(), Some(SatResult::Satisfiable(_))));
        assert_eq!(out.trace[0].literal, Variable::new(2).positive());
        assert_eq!(out.trace[1].literal, Variable::new(4).negative());
    }

    #[test]
    fn empty_formula_is_satisfiable_with_empty_model() {
        let out = up_subsolve(&CnfFormula::default());
        assert_eq!(
            out.verdict,
            Verdict::Determines { result: SatResult::Satisfiable(PartialAssignment::new()) }
        );
        assert!(out.trace.is_empty());
    }

    #[test]
    fn binary_clause_is_rejected() {
        assert_eq!(up_subsolve(&cnf(&[&[1, 2]])).verdict, Verdict::Rejects);
    }

    #[test]
    fn complementary_units_are_refuted() {
        let out = up_subsolve(&cnf(&[&[1], &[-1]]));
        assert_eq!(out.verdict, Verdict::Determines { result: SatResult::Unsatisfiable });
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0].literal, Variable::new(1).positive());
    }

    #[test]
    fn empty_clause_wins_over_units() {
        let f = CnfFormula::new([Clause::empty(), Clause::from_dimacs(&[3])]);
        let out = up_subsolve(&f);
        assert_eq!(out.result(), Some(&SatResult::Unsatisfiable));
        assert!(out.trace.is_empty());
    }

    #[test]
    fn decided_predicate() {
        let example_one = cnf(&[&[1, -2, -3, 5], &[1, 2, 4, 5], &[3, -4], &[-1, 2, 3, 5]]);
        assert!(!up_decided(&example_one));
        assert!(up_decided(&CnfFormula::default()));
        assert!(up_decided(&cnf(&[&[3]])));
    }

    #[test]
    fn unassigned_variables_default_to_false() {
        // x1 propagates and satisfies both clauses; x2 is never touched.
        let out = up_subsolve(&cnf(&[&[1], &[1, 2]]));
        let Some(SatResult::Satisfiable(m)) = out.result() else { panic!() };
        assert_eq!(m.get(Variable::new(1)), Some(true));
        assert_eq!(m.get(Variable::new(2)), Some(false));
    }

    fn random_cnf_strategy() -> impl Strategy<Value = CnfFormula> {
        let lit = (1u32..=8, any::<bool>()).prop_map(|(v, p)| Literal::new(Variable::new(v), p));
        let clause = proptest::collection::vec(lit, 1..4).prop_map(Clause::new);
        proptest::collection::vec(clause, 0..12).prop_map(CnfFormula::new)
    }

    proptest! {
        #[test]
        fn matches_naive_reference(f in random_cnf_strategy()) {
            prop_assert_eq!(up_subsolve(&f), naive_up(&f));
        }

        #[test]
        fn run_under_assumptions_matches_simplify_then_solve(
            f in random_cnf_strategy(),
            a in proptest::collection::btree_map(1u32..=8, any::<bool>(), 0..4),
        ) {
            let vars = f.variables();
            let a: PartialAssignment = a
                .into_iter()
                .map(|(v, b)| (Variable::new(v), b))
                .filter(|(v, _)| vars.contains(v))
                .collect();
            let direct = up_subsolve(&f.assign_and_simplify(&a).unwrap());
            prop_assert_eq!(UnitPropagator::new(&f).run(&a), direct);
        }

        #[test]
        fn soundness_and_trace_validity(f in random_cnf_strategy()) {
            let out = up_subsolve(&f);
            prop_assert!(out.trace.len() <= f.variables().len());
            match out.result() {
                Some(SatResult::Satisfiable(m)) => prop_assert!(f.evaluate(m).unwrap()),
                Some(SatResult::Unsatisfiable) => prop_assert_eq!(models(&f).unwrap().count(), 0),
                None => {}
            }
            let mut current = f.clone();
            for step in &out.trace {
                prop_assert!(current.contains(&Clause::unit(step.literal)));
                current = current.substitute_var(step.variable, step.value).unwrap();
            }
        }
    }
}
