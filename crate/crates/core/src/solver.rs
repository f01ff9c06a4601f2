//! Complete satisfiability deciders used as ground truth.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::Result;
use crate::formula::{models, AnyFormula, CnfFormula, Formula, PartialAssignment, PropFormula, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "model", rename_all = "snake_case")]
pub enum SatResult {
    /// Carries a total assignment over the variables of the formula answered for.
    Satisfiable(PartialAssignment),
    Unsatisfiable,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Satisfiable(_))
    }

    pub fn model(&self) -> Option<&PartialAssignment> {
        match self {
            SatResult::Satisfiable(m) => Some(m),
            SatResult::Unsatisfiable => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub decisions: u64,
    pub propagations: u64,
    #[serde(serialize_with = "serialize_micros")]
    pub elapsed: Duration,
}

fn serialize_micros<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_micros())
}

struct Dpll {
    clauses: Vec<Vec<(usize, bool)>>,
    values: Vec<Option<bool>>,
    trail: Vec<usize>,
    stats: SolveStats,
}

enum Propagation {
    Conflict,
    AllSatisfied,
    Open,
}

impl Dpll {
    fn propagate(&mut self) -> Propagation {
        loop {
            let mut changed = false;
            let mut all_satisfied = true;
            for ci in 0..self.clauses.len() {
                let mut free = None;
                let mut free_count = 0;
                let mut sat = false;
                for &(v, pos) in &self.clauses[ci] {
                    match self.values[v] {
                        Some(b) if b == pos => {
                            sat = true;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            free_count += 1;
                            free = Some((v, pos));
                        }
                    }
                }
                if sat {
                    continue;
                }
                all_satisfied = false;
                match free_count {
                    0 => return Propagation::Conflict,
                    1 => {
                        let (v, pos) = free.unwrap();
                        self.values[v] = Some(pos);
                        self.trail.push(v);
                        self.stats.propagations += 1;
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return if all_satisfied {
                    Propagation::AllSatisfied
                } else {
                    Propagation::Open
                };
            }
        }
    }

    fn undo_to(&mut self, len: usize) {
        for v in self.trail.drain(len..) {
            self.values[v] = None;
        }
    }

    fn search(&mut self) -> bool {
        match self.propagate() {
            Propagation::Conflict => return false,
            Propagation::AllSatisfied => return true,
            Propagation::Open => {}
        }
        let var = self
            .values
            .iter()
            .position(Option::is_none)
            .expect("open clauses imply an unassigned variable");
        for value in [true, false] {
            let mark = self.trail.len();
            self.stats.decisions += 1;
            self.values[var] = Some(value);
            self.trail.push(var);
            if self.search() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

/// DPLL with unit propagation, branching on the lowest-id unassigned variable,
/// True first. Models are total over V(F); variables left open are False.
pub fn dpll_solve(formula: &CnfFormula) -> (SatResult, SolveStats) {
    let start = Instant::now();
    let vars: Vec<Variable> = formula.variables().into_iter().collect();
    let index: HashMap<Variable, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let clauses = formula
        .clauses()
        .map(|c| c.literals().map(|l| (index[&l.var()], l.is_positive())).collect())
        .collect();
    let mut dpll = Dpll {
        clauses,
        values: vec![None; vars.len()],
        trail: Vec::new(),
        stats: SolveStats::default(),
    };
    let sat = dpll.search();
    let result = if sat {
        SatResult::Satisfiable(
            vars.iter()
                .zip(&dpll.values)
                .map(|(&v, b)| (v, b.unwrap_or(false)))
                .collect(),
        )
    } else {
        SatResult::Unsatisfiable
    };
    dpll.stats.elapsed = start.elapsed();
    (result, dpll.stats)
}

/// Exhaustive decision: the first model in enumeration order, if any.
pub fn brute_force_solve<F: Formula + ?Sized>(formula: &F) -> Result<SatResult> {
    Ok(match models(formula)?.next() {
        Some(m) => SatResult::Satisfiable(m),
        None => SatResult::Unsatisfiable,
    })
}

/// Decides a general formula by splitting on its lowest variable and folding
/// constants after each substitution. No variable cap; the model is total
/// over V(Phi) with variables eliminated by folding set to False.
pub fn split_solve(formula: &PropFormula) -> SatResult {
    fn go(f: &PropFormula, path: &mut PartialAssignment) -> bool {
        if let Some(b) = f.as_constant() {
            return b;
        }
        let var = *f.variables().first().expect("non-constant formula has a variable");
        for value in [true, false] {
            path.assign(var, value);
            let g = f.substitute(&PartialAssignment::new().with(var, value));
            if go(&g, path) {
                return true;
            }
        }
        path.assign(var, false);
        false
    }
    let mut path = PartialAssignment::new();
    // Unassigned substitution folds constants the caller left in place.
    if go(&formula.substitute(&path), &mut path) {
        let model = formula
            .variables()
            .into_iter()
            .map(|v| (v, path.get(v).unwrap_or(false)))
            .collect();
        SatResult::Satisfiable(model)
    } else {
        SatResult::Unsatisfiable
    }
}

/// Formulas whose satisfiability can be decided under a partial assignment.
pub trait Decide: Formula {
    /// Decides F[a]. The model, if any, covers V(F) minus dom(a).
    fn decide_under(&self, a: &PartialAssignment) -> Result<SatResult>;

    fn decide(&self) -> Result<SatResult> {
        self.decide_under(&PartialAssignment::new())
    }
}

impl Decide for CnfFormula {
    fn decide_under(&self, a: &PartialAssignment) -> Result<SatResult> {
        let residual = self.assign_and_simplify(a)?;
        Ok(match dpll_solve(&residual).0 {
            SatResult::Satisfiable(m) => SatResult::Satisfiable(
                self.variables()
                    .into_iter()
                    .filter(|v| !a.contains(*v))
                    .map(|v| (v, m.get(v).unwrap_or(false)))
                    .collect(),
            ),
            SatResult::Unsatisfiable => SatResult::Unsatisfiable,
        })
    }
}

impl Decide for PropFormula {
    fn decide_under(&self, a: &PartialAssignment) -> Result<SatResult> {
        let vars = self.variables();
        if let Some(v) = a.domain().find(|v| !vars.contains(v)) {
            return Err(crate::error::Error::UnknownVariable(v));
        }
        Ok(match split_solve(&self.substitute(a)) {
            SatResult::Satisfiable(m) => SatResult::Satisfiable(
                vars.into_iter()
                    .filter(|v| !a.contains(*v))
                    .map(|v| (v, m.get(v).unwrap_or(false)))
                    .collect(),
            ),
            SatResult::Unsatisfiable => SatResult::Unsatisfiable,
        })
    }
}

impl Decide for AnyFormula {
    fn decide_under(&self, a: &PartialAssignment) -> Result<SatResult> {
        match self {
            AnyFormula::Cnf(f) => f.decide_under(a),
            AnyFormula::Prop(p) => p.decide_under(a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::grammar::parse_formula;
    use crate::formula::{model_count, Clause, Literal};
    use proptest::prelude::*;

    #[test]
    fn example_one_is_satisfiable() {
        let f = CnfFormula::from_dimacs_clauses(&[&[1, -2, -3, 5], &[1, 2, 4, 5], &[3, -4], &[-1, 2, 3, 5]]);
        let (r, stats) = dpll_solve(&f);
        assert!(f.evaluate(r.model().unwrap()).unwrap());
        assert!(brute_force_solve(&f).unwrap().is_sat());
        assert!(stats.decisions >= 1);
    }

    #[test]
    fn empty_clause_is_unsatisfiable() {
        let f = CnfFormula::new([Clause::empty()]);
        assert_eq!(dpll_solve(&f).0, SatResult::Unsatisfiable);
        assert_eq!(dpll_solve(&CnfFormula::default()).0, SatResult::Satisfiable(PartialAssignment::new()));
    }

    #[test]
    fn backbone_example_is_satisfiable() {
        let f = parse_formula("x1 & (x1 <-> !x2) & (x2 <-> x3) & (x2 | x4 | x5)").unwrap();
        let r = brute_force_solve(&f).unwrap();
        assert!(f.evaluate(r.model().unwrap()).unwrap());
        assert!(split_solve(&f).is_sat());
    }

    #[test]
    fn false_constant_and_counts() {
        assert_eq!(brute_force_solve(&PropFormula::False).unwrap(), SatResult::Unsatisfiable);
        assert_eq!(split_solve(&PropFormula::False), SatResult::Unsatisfiable);
        assert_eq!(model_count(&parse_formula("x1 | x2").unwrap()).unwrap(), 3);
    }

    #[test]
    fn dpll_is_deterministic() {
        let f = CnfFormula::from_dimacs_clauses(&[&[1, 2, 3], &[-1, -2], &[-2, -3], &[2, -3]]);
        let (a, _) = dpll_solve(&f);
        let (b, _) = dpll_solve(&f);
        assert_eq!(a, b);
        // Branches x1 = True first: ¬x2 follows, then x3 must be False.
        assert_eq!(a.model().unwrap().literals().iter().map(|l| l.to_dimacs()).collect::<Vec<_>>(), vec![1, -2, -3]);
    }

    #[test]
    fn decide_under_covers_remaining_variables() {
        let f = CnfFormula::from_dimacs_clauses(&[&[1, 2], &[3]]);
        let a = PartialAssignment::new().with(Variable::new(1), true);
        let m = f.decide_under(&a).unwrap();
        let m = m.model().unwrap();
        assert_eq!(m.domain().collect::<Vec<_>>(), vec![Variable::new(2), Variable::new(3)]);
    }

    fn cnf_strategy() -> impl Strategy<Value = CnfFormula> {
        let lit = (1u32..=10, any::<bool>()).prop_map(|(v, p)| Literal::new(Variable::new(v), p));
        let clause = proptest::collection::vec(lit, 1..4).prop_map(Clause::new);
        proptest::collection::vec(clause, 0..40).prop_map(CnfFormula::new)
    }

    proptest! {
        #[test]
        fn dpll_agrees_with_brute_force(f in cnf_strategy()) {
            let (r, _) = dpll_solve(&f);
            prop_assert_eq!(r.is_sat(), brute_force_solve(&f).unwrap().is_sat());
            if let Some(m) = r.model() {
                prop_assert!(f.evaluate(m).unwrap());
            }
        }

        #[test]
        fn split_solver_agrees_with_brute_force(f in crate::test_support::prop_strategy(7)) {
            let r = split_solve(&f);
            prop_assert_eq!(r.is_sat(), brute_force_solve(&f).unwrap().is_sat());
            if let Some(m) = r.model() {
                prop_assert!(f.evaluate(m).unwrap());
            }
        }
    }
}
