use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::{Formula, Literal, PartialAssignment, PropFormula, Variable};
use crate::error::{Error, Result};

/// A set of literals. May be empty, may be tautological.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Clause {
    literals: BTreeSet<Literal>,
}

impl Clause {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Self {
        literals.into_iter().collect()
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn unit(lit: Literal) -> Self {
        Clause::new([lit])
    }

    /// Panics on a zero literal.
    pub fn from_dimacs(lits: &[i32]) -> Self {
        lits.iter()
            .map(|&l| Literal::from_dimacs(l).expect("DIMACS literal 0 inside a clause"))
            .collect()
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.literals.iter().copied()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.literals.contains(&lit)
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// The literal of a unit clause.
    pub fn as_unit(&self) -> Option<Literal> {
        if self.literals.len() == 1 {
            self.literals.first().copied()
        } else {
            None
        }
    }

    pub fn is_tautology(&self) -> bool {
        self.literals.iter().any(|&l| l.is_positive() && self.contains(!l))
    }

    pub fn variables(&self) -> impl Iterator<Item = Variable> + '_ {
        self.literals.iter().map(|l| l.var())
    }
}

impl FromIterator<Literal> for Clause {
    fn from_iter<I: IntoIterator<Item = Literal>>(iter: I) -> Self {
        Clause {
            literals: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A CNF formula as a set of clauses.
///
/// The empty set is trivially True; a set containing the empty clause is
/// trivially False. Duplicate clauses and duplicate literals are merged on
/// construction.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CnfFormula {
    clauses: BTreeSet<Clause>,
}

impl CnfFormula {
    pub fn new(clauses: impl IntoIterator<Item = Clause>) -> Self {
        clauses.into_iter().collect()
    }

    /// Shorthand used heavily in tests: clauses as DIMACS literal slices.
    pub fn from_dimacs_clauses(clauses: &[&[i32]]) -> Self {
        clauses.iter().map(|c| Clause::from_dimacs(c)).collect()
    }

    pub fn clauses(&self) -> impl ExactSizeIterator<Item = &Clause> + '_ {
        self.clauses.iter()
    }

    pub fn contains(&self, clause: &Clause) -> bool {
        self.clauses.contains(clause)
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Returns false if the clause was already present.
    pub fn insert(&mut self, clause: Clause) -> bool {
        self.clauses.insert(clause)
    }

    pub fn remove(&mut self, clause: &Clause) -> bool {
        self.clauses.remove(clause)
    }

    pub fn is_trivially_true(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn is_trivially_false(&self) -> bool {
        self.clauses.contains(&Clause::empty())
    }

    /// Largest variable id, 0 when there are no variables.
    pub fn max_variable_id(&self) -> u32 {
        self.clauses
            .iter()
            .flat_map(|c| c.variables())
            .map(Variable::id)
            .max()
            .unwrap_or(0)
    }

    /// F[a]: clauses satisfied by `a` are dropped, falsified literals are
    /// removed from the rest.
    pub fn assign_and_simplify(&self, a: &PartialAssignment) -> Result<CnfFormula> {
        if !a.is_empty() {
            let vars = self.variables();
            if let Some(v) = a.domain().find(|v| !vars.contains(v)) {
                return Err(Error::UnknownVariable(v));
            }
        }
        Ok(self.simplify_unchecked(a))
    }

    /// F[v/x] for a single variable.
    pub fn substitute_var(&self, var: Variable, value: bool) -> Result<CnfFormula> {
        self.assign_and_simplify(&PartialAssignment::new().with(var, value))
    }

    /// Like `assign_and_simplify` but silently ignores bindings outside V(F).
    pub(crate) fn simplify_unchecked(&self, a: &PartialAssignment) -> CnfFormula {
        self.clauses
            .iter()
            .filter(|c| !c.literals().any(|l| a.literal_value(l) == Some(true)))
            .map(|c| c.literals().filter(|&l| !a.contains(l.var())).collect())
            .collect()
    }

    /// Every clause has a literal made true by `a`. Unbound variables count as
    /// not making anything true.
    pub fn satisfied_by(&self, a: &PartialAssignment) -> bool {
        self.clauses
            .iter()
            .all(|c| c.literals().any(|l| a.literal_value(l) == Some(true)))
    }

    /// The same formula as an AND of ORs of literals. The empty formula becomes
    /// `T` and the empty clause becomes `F`; single-literal clauses become bare literals.
    pub fn to_prop(&self) -> PropFormula {
        if self.clauses.is_empty() {
            return PropFormula::True;
        }
        let lit = |l: Literal| {
            let atom = PropFormula::Atom(l.var());
            if l.is_positive() {
                atom
            } else {
                PropFormula::Not(Box::new(atom))
            }
        };
        let mut conjuncts: Vec<PropFormula> = self
            .clauses
            .iter()
            .map(|c| match c.len() {
                0 => PropFormula::False,
                1 => lit(c.as_unit().unwrap()),
                _ => PropFormula::Or(c.literals().map(lit).collect()),
            })
            .collect();
        if conjuncts.len() == 1 {
            conjuncts.pop().unwrap()
        } else {
            PropFormula::And(conjuncts)
        }
    }
}

impl FromIterator<Clause> for CnfFormula {
    fn from_iter<I: IntoIterator<Item = Clause>>(iter: I) -> Self {
        CnfFormula {
            clauses: iter.into_iter().collect(),
        }
    }
}

impl Formula for CnfFormula {
    fn variables(&self) -> BTreeSet<Variable> {
        self.clauses.iter().flat_map(|c| c.variables()).collect()
    }

    fn evaluate(&self, a: &PartialAssignment) -> Result<bool> {
        let mut value = true;
        for c in &self.clauses {
            let mut clause_value = false;
            for l in c.literals() {
                let b = a.literal_value(l).ok_or(Error::UnboundVariable(l.var()))?;
                clause_value |= b;
            }
            value &= clause_value;
        }
        Ok(value)
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
