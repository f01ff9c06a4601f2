use super::{Formula, PartialAssignment, Variable};
use crate::error::{Error, Result};

/// Default bound on |V| for exhaustive enumeration.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 25;

/// Satisfying total assignments over V(F), in binary counting order
/// (lowest variable id most significant, False before True).
pub struct Models<'a, F: ?Sized> {
    formula: &'a F,
    vars: Vec<Variable>,
    next: u64,
    end: u64,
}

impl<F: Formula + ?Sized> Iterator for Models<'_, F> {
    type Item = PartialAssignment;

    fn next(&mut self) -> Option<PartialAssignment> {
        let n = self.vars.len();
        while self.next < self.end {
            let code = self.next;
            self.next += 1;
            let a: PartialAssignment = self
                .vars
                .iter()
                .enumerate()
                .map(|(j, &v)| (v, (code >> (n - 1 - j)) & 1 == 1))
                .collect();
            if self.formula.evaluate(&a).expect("assignment is total over V(F)") {
                return Some(a);
            }
        }
        None
    }
}

pub fn models_with_cap<F: Formula + ?Sized>(formula: &F, cap: usize) -> Result<Models<'_, F>> {
    let vars: Vec<Variable> = formula.variables().into_iter().collect();
    if vars.len() > cap || vars.len() >= 64 {
        return Err(Error::TooManyVariables {
            found: vars.len(),
            cap: cap.min(63),
        });
    }
    let end = 1u64 << vars.len();
    Ok(Models {
        formula,
        vars,
        next: 0,
        end,
    })
}

/// Models under [`DEFAULT_BRUTE_FORCE_CAP`].
pub fn models<F: Formula + ?Sized>(formula: &F) -> Result<Models<'_, F>> {
    models_with_cap(formula, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn model_count<F: Formula + ?Sized>(formula: &F) -> Result<u64> {
    Ok(models(formula)?.count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::grammar::parse_formula;
    use crate::formula::{Clause, CnfFormula, Literal};
    use rand::{Rng, SeedableRng};

    #[test]
    fn conjunction_has_one_model() {
        let f = parse_formula("x1 & !x2").unwrap();
        let all: Vec<_> = models(&f).unwrap().collect();
        assert_eq!(
            all,
            vec![PartialAssignment::new()
                .with(Variable::new(1), true)
                .with(Variable::new(2), false)]
        );
    }

    #[test]
    fn empty_clause_has_no_models() {
        let f = CnfFormula::new([Clause::empty()]);
        assert_eq!(models(&f).unwrap().count(), 0);
        assert_eq!(model_count(&CnfFormula::default()).unwrap(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let clause: Clause = (1..=30).map(|i| Literal::new(Variable::new(i), true)).collect();
        let f = CnfFormula::new([clause]);
        assert!(matches!(
            models(&f),
            Err(Error::TooManyVariables { found: 30, cap: 25 })
        ));
        assert!(models_with_cap(&f, 40).is_ok());
    }

    /// Independent count: walk all 2^n integer codes and test clauses bitwise.
    fn truth_table_count(clauses: &[Vec<i32>], n: u32) -> u64 {
        (0u32..(1 << n))
            .filter(|&code| {
                clauses.iter().all(|c| {
                    c.iter().any(|&l| {
                        let bit = (code >> (l.unsigned_abs() - 1)) & 1 == 1;
                        bit == (l > 0)
                    })
                })
            })
            .count() as u64
    }

    #[test]
    fn random_3cnf_counts_match_truth_table() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = 8u32;
            let m = rng.gen_range(1..30);
            let clauses: Vec<Vec<i32>> = (0..m)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = rng.gen_range(1..=n) as i32;
                            if rng.gen() { v } else { -v }
                        })
                        .collect()
                })
                .collect();
            let refs: Vec<&[i32]> = clauses.iter().map(|c| c.as_slice()).collect();
            let f = CnfFormula::from_dimacs_clauses(&refs);
            // Variables missing from F contribute a factor of two each to the table count.
            let missing = n - f.variables().len() as u32;
            let expected = truth_table_count(&clauses, n) >> missing;
            assert_eq!(model_count(&f).unwrap(), expected);
        }
    }
}
