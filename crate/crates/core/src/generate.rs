//! Seeded random instances.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, Literal, PropFormula, Variable};

/// `clauses` clauses of exactly `width` distinct variables over x1..x`vars`,
/// uniform polarities. Duplicates collapse, so the result may be smaller.
pub fn random_cnf(vars: u32, clauses: usize, width: usize, seed: u64) -> Result<CnfFormula> {
    if width == 0 || (vars as usize) < width {
        return Err(Error::InvalidParameters(format!(
            "need vars >= width >= 1, got vars={vars} width={width}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut formula = CnfFormula::default();
    for _ in 0..clauses {
        let picked = sample(&mut rng, vars as usize, width);
        let clause: Clause = picked
            .into_iter()
            .map(|i| Literal::new(Variable::new(i as u32 + 1), rng.gen()))
            .collect();
        formula.insert(clause);
    }
    Ok(formula)
}

/// A random formula tree over x1..x`vars` with at most `depth` operator levels.
pub fn random_prop(vars: u32, depth: u32, seed: u64) -> Result<PropFormula> {
    if vars == 0 {
        return Err(Error::InvalidParameters("need at least one variable".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_tree(&mut rng, vars, depth))
}

fn random_tree(rng: &mut ChaCha8Rng, vars: u32, depth: u32) -> PropFormula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..12) {
            0 => PropFormula::True,
            1 => PropFormula::False,
            _ => PropFormula::atom(rng.gen_range(1..=vars)),
        };
    }
    let child = |rng: &mut ChaCha8Rng| random_tree(rng, vars, depth - 1);
    match rng.gen_range(0..5) {
        0 => PropFormula::not(child(rng)),
        1 => {
            let n = rng.gen_range(2..=3);
            PropFormula::And((0..n).map(|_| child(rng)).collect())
        }
        2 => {
            let n = rng.gen_range(2..=3);
            PropFormula::Or((0..n).map(|_| child(rng)).collect())
        }
        3 => PropFormula::implies(child(rng), child(rng)),
        _ => PropFormula::iff(child(rng), child(rng)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::dimacs::{emit_dimacs, parse_dimacs};
    use crate::formula::grammar::{emit_formula, parse_formula};
    use crate::formula::Formula;

    #[test]
    fn same_seed_same_formula() {
        assert_eq!(random_cnf(12, 50, 3, 7).unwrap(), random_cnf(12, 50, 3, 7).unwrap());
        assert_ne!(random_cnf(12, 50, 3, 7).unwrap(), random_cnf(12, 50, 3, 8).unwrap());
        assert_eq!(random_prop(5, 4, 1).unwrap(), random_prop(5, 4, 1).unwrap());
    }

    #[test]
    fn shape_of_random_cnf() {
        let f = random_cnf(12, 50, 3, 2).unwrap();
        assert!(f.len() <= 50);
        assert!(f.variables().iter().all(|v| (1..=12).contains(&v.id())));
        assert!(f.clauses().all(|c| c.len() == 3 && c.variables().count() == 3));
    }

    #[test]
    fn invalid_parameters() {
        assert!(random_cnf(2, 5, 3, 0).is_err());
        assert!(random_cnf(3, 5, 0, 0).is_err());
        assert!(random_prop(0, 3, 0).is_err());
    }

    #[test]
    fn generated_formulas_round_trip() {
        for seed in 0..50 {
            let f = random_cnf(10, 30, 3, seed).unwrap();
            assert_eq!(parse_dimacs(&emit_dimacs(&f)).unwrap(), f);
            let p = random_prop(6, 5, seed).unwrap();
            assert_eq!(parse_formula(&emit_formula(&p)).unwrap(), p);
        }
    }
}
