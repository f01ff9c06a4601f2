//! Formula representations: set-semantics CNF, general propositional trees,
//! partial assignments, and the text formats for both.

mod assignment;
mod cnf;
pub mod dimacs;
pub mod grammar;
mod models;
mod prop;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Not;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ParseError, Result};

pub use assignment::{assignments_over, PartialAssignment};
pub use cnf::{Clause, CnfFormula};
pub use models::{model_count, models, models_with_cap, Models, DEFAULT_BRUTE_FORCE_CAP};
pub use prop::PropFormula;

/// A formula read from text in either supported format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyFormula {
    Cnf(CnfFormula),
    Prop(PropFormula),
}

impl AnyFormula {
    pub fn into_prop(self) -> PropFormula {
        match self {
            AnyFormula::Cnf(f) => f.to_prop(),
            AnyFormula::Prop(p) => p,
        }
    }
}

impl Formula for AnyFormula {
    fn variables(&self) -> BTreeSet<Variable> {
        match self {
            AnyFormula::Cnf(f) => f.variables(),
            AnyFormula::Prop(p) => p.variables(),
        }
    }

    fn evaluate(&self, a: &PartialAssignment) -> Result<bool> {
        match self {
            AnyFormula::Cnf(f) => f.evaluate(a),
            AnyFormula::Prop(p) => p.evaluate(a),
        }
    }
}

/// Reads DIMACS when the first non-blank character can start a DIMACS file
/// (`c`, `p`, `%`, a digit or `-`), and the propositional grammar otherwise.
pub fn parse_any(text: &str) -> std::result::Result<AnyFormula, ParseError> {
    let first = text.chars().find(|c| !c.is_whitespace());
    if matches!(first, Some('c' | 'p' | '%' | '-' | '0'..='9')) {
        dimacs::parse_dimacs(text).map(AnyFormula::Cnf)
    } else {
        grammar::parse_formula(text).map(AnyFormula::Prop)
    }
}

/// A propositional variable `x<id>`, `id >= 1`. Ordered by id.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Variable(u32);

impl Variable {
    /// Panics on zero; use `try_new` for untrusted input.
    pub fn new(id: u32) -> Self {
        Self::try_new(id).expect("variable ids start at 1")
    }

    pub fn try_new(id: u32) -> Option<Self> {
        (id >= 1).then_some(Variable(id))
    }

    pub fn id(self) -> u32 {
        self.0
    }

    pub fn positive(self) -> Literal {
        Literal::new(self, true)
    }

    pub fn negative(self) -> Literal {
        Literal::new(self, false)
    }
}

impl TryFrom<u32> for Variable {
    type Error = String;

    fn try_from(id: u32) -> std::result::Result<Self, String> {
        Variable::try_new(id).ok_or_else(|| "variable id 0".to_string())
    }
}

impl From<Variable> for u32 {
    fn from(v: Variable) -> u32 {
        v.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Accepts `x12` or a bare `12`.
impl FromStr for Variable {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let digits = s.strip_prefix('x').unwrap_or(s);
        let id: u32 = digits
            .parse()
            .map_err(|_| format!("invalid variable name `{s}`"))?;
        Variable::try_new(id).ok_or_else(|| format!("invalid variable name `{s}`"))
    }
}

/// A variable with a polarity.
///
/// Literals order by variable id first and put the positive literal before
/// the negative one. The unit-propagation subsolver picks unit clauses in
/// exactly this order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    var: Variable,
    positive: bool,
}

impl Literal {
    pub fn new(var: Variable, positive: bool) -> Self {
        Literal { var, positive }
    }

    /// From a nonzero DIMACS integer.
    pub fn from_dimacs(lit: i32) -> Option<Self> {
        let var = Variable::try_new(lit.unsigned_abs())?;
        Some(Literal::new(var, lit > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let id = i64::from(self.var.id());
        if self.positive {
            id
        } else {
            -id
        }
    }

    pub fn var(self) -> Variable {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    /// The truth value of this literal when its variable takes `value`.
    pub fn value_under(self, value: bool) -> bool {
        value == self.positive
    }

    fn sort_key(self) -> (Variable, bool) {
        (self.var, !self.positive)
    }
}

impl Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        Literal::new(self.var, !self.positive)
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Literal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "!{}", self.var)
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Literal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.to_dimacs())
    }
}

/// Anything with a variable set and a truth value under total assignments.
pub trait Formula {
    /// V(F).
    fn variables(&self) -> BTreeSet<Variable>;

    /// Fails with `UnboundVariable` when `assignment` misses a variable of the formula.
    fn evaluate(&self, assignment: &PartialAssignment) -> Result<bool>;
}

/// The `count` smallest variable ids absent from `vars`, ascending.
pub fn fresh_variables_excluding(vars: &BTreeSet<Variable>, count: usize) -> Vec<Variable> {
    let mut out = Vec::with_capacity(count);
    let mut next = 1u32;
    let mut taken = vars.iter().peekable();
    while out.len() < count {
        while taken.peek().is_some_and(|v| v.id() < next) {
            taken.next();
        }
        if taken.peek().is_some_and(|v| v.id() == next) {
            taken.next();
        } else {
            out.push(Variable(next));
        }
        next = next.checked_add(1).expect("variable universe exhausted");
    }
    out
}

/// The `count` smallest variables not occurring in `formula`, ascending.
pub fn fresh_variables<F: Formula + ?Sized>(formula: &F, count: usize) -> Vec<Variable> {
    fresh_variables_excluding(&formula.variables(), count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(ids: &[u32]) -> BTreeSet<Variable> {
        ids.iter().map(|&i| Variable::new(i)).collect()
    }

    #[test]
    fn parse_any_picks_the_format_from_the_first_character() {
        assert!(matches!(parse_any("p cnf 1 1\n1 0\n"), Ok(AnyFormula::Cnf(_))));
        assert!(matches!(parse_any("\n c comment\np cnf 2 1\n1 -2 0\n"), Ok(AnyFormula::Cnf(_))));
        assert!(matches!(parse_any("  x1 & !x2"), Ok(AnyFormula::Prop(_))));
        assert!(matches!(parse_any("(T)"), Ok(AnyFormula::Prop(_))));
        assert!(parse_any("x1 &").is_err());
    }

    #[test]
    fn fresh_after_dense_prefix() {
        let f = CnfFormula::from_dimacs_clauses(&[&[-1, 2, 3, -3]]);
        assert_eq!(fresh_variables(&f, 1), vec![Variable::new(4)]);
    }

    #[test]
    fn fresh_fills_gaps_first() {
        let got = fresh_variables_excluding(&vars(&[2, 5]), 3);
        assert_eq!(got, vec![Variable::new(1), Variable::new(3), Variable::new(4)]);
    }

    #[test]
    fn fresh_zero_count() {
        assert!(fresh_variables_excluding(&vars(&[1, 2]), 0).is_empty());
    }

    #[test]
    fn literal_order_is_variable_major_positive_first() {
        let x2 = Variable::new(2).positive();
        let nx4 = Variable::new(4).negative();
        let nx2 = Variable::new(2).negative();
        assert!(x2 < nx4);
        assert!(x2 < nx2);
        assert!(nx2 < nx4);
    }

    #[test]
    fn variable_from_str() {
        assert_eq!("x7".parse::<Variable>().unwrap(), Variable::new(7));
        assert_eq!("7".parse::<Variable>().unwrap(), Variable::new(7));
        assert!("x0".parse::<Variable>().is_err());
        assert!("y1".parse::<Variable>().is_err());
    }

    proptest::proptest! {
        #[test]
        fn fresh_variables_disjoint_ascending(ids in proptest::collection::btree_set(1u32..40, 0..20), n in 0usize..30) {
            let taken = vars(&ids.iter().copied().collect::<Vec<_>>());
            let fresh = fresh_variables_excluding(&taken, n);
            proptest::prop_assert_eq!(fresh.len(), n);
            proptest::prop_assert!(fresh.windows(2).all(|w| w[0] < w[1]));
            proptest::prop_assert!(fresh.iter().all(|v| !taken.contains(v)));
            // No absent id below the largest fresh one was skipped.
            if let Some(max) = fresh.last() {
                for id in 1..max.id() {
                    let v = Variable::new(id);
                    proptest::prop_assert!(taken.contains(&v) || fresh.contains(&v));
                }
            }
        }
    }
}
