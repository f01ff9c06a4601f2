use std::collections::BTreeSet;
use std::fmt;

use super::{Formula, PartialAssignment, Variable};
use crate::error::{Error, Result};

/// A propositional formula tree. `And` and `Or` are n-ary with at least one child.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropFormula {
    True,
    False,
    Atom(Variable),
    Not(Box<PropFormula>),
    And(Vec<PropFormula>),
    Or(Vec<PropFormula>),
    Implies(Box<PropFormula>, Box<PropFormula>),
    Iff(Box<PropFormula>, Box<PropFormula>),
}

use PropFormula::*;

impl PropFormula {
    pub fn atom(id: u32) -> Self {
        Atom(Variable::new(id))
    }

    pub fn not(f: PropFormula) -> Self {
        Not(Box::new(f))
    }

    pub fn implies(a: PropFormula, b: PropFormula) -> Self {
        Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: PropFormula, b: PropFormula) -> Self {
        Iff(Box::new(a), Box::new(b))
    }

    pub fn constant(b: bool) -> Self {
        if b {
            True
        } else {
            False
        }
    }

    pub fn as_constant(&self) -> Option<bool> {
        match self {
            True => Some(true),
            False => Some(false),
            _ => None,
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        match self {
            True | False => {}
            Atom(v) => {
                out.insert(*v);
            }
            Not(c) => c.collect_vars(out),
            And(cs) | Or(cs) => cs.iter().for_each(|c| c.collect_vars(out)),
            Implies(a, b) | Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Replaces bound atoms by constants and folds constants bottom-up.
    ///
    /// Folding only fires where a child is a constant; no other rewriting is
    /// done. Bindings outside V(Phi) are ignored.
    pub fn substitute(&self, a: &PartialAssignment) -> PropFormula {
        match self {
            True => True,
            False => False,
            Atom(v) => match a.get(*v) {
                Some(b) => PropFormula::constant(b),
                None => Atom(*v),
            },
            Not(c) => fold_not(c.substitute(a)),
            And(cs) => fold_nary(cs.iter().map(|c| c.substitute(a)), false),
            Or(cs) => fold_nary(cs.iter().map(|c| c.substitute(a)), true),
            Implies(l, r) => {
                let l = l.substitute(a);
                let r = r.substitute(a);
                match (l.as_constant(), r.as_constant()) {
                    (Some(true), _) => r,
                    (Some(false), _) | (_, Some(true)) => True,
                    (_, Some(false)) => fold_not(l),
                    _ => PropFormula::implies(l, r),
                }
            }
            Iff(l, r) => {
                let l = l.substitute(a);
                let r = r.substitute(a);
                match (l.as_constant(), r.as_constant()) {
                    (Some(true), _) => r,
                    (Some(false), _) => fold_not(r),
                    (_, Some(true)) => l,
                    (_, Some(false)) => fold_not(l),
                    _ => PropFormula::iff(l, r),
                }
            }
        }
    }

    fn eval_with(&self, a: &PartialAssignment) -> Result<bool> {
        Ok(match self {
            True => true,
            False => false,
            Atom(v) => a.get(*v).ok_or(Error::UnboundVariable(*v))?,
            Not(c) => !c.eval_with(a)?,
            And(cs) => {
                let mut acc = true;
                for c in cs {
                    acc &= c.eval_with(a)?;
                }
                acc
            }
            Or(cs) => {
                let mut acc = false;
                for c in cs {
                    acc |= c.eval_with(a)?;
                }
                acc
            }
            Implies(l, r) => {
                let l = l.eval_with(a)?;
                let r = r.eval_with(a)?;
                !l || r
            }
            Iff(l, r) => l.eval_with(a)? == r.eval_with(a)?,
        })
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            True | False | Atom(_) => 0,
            Not(c) => c.size(),
            And(cs) | Or(cs) => cs.iter().map(|c| c.size()).sum(),
            Implies(a, b) | Iff(a, b) => a.size() + b.size(),
        }
    }
}

fn fold_not(c: PropFormula) -> PropFormula {
    match c.as_constant() {
        Some(b) => PropFormula::constant(!b),
        None => PropFormula::not(c),
    }
}

/// `absorbing` is the constant that swallows the whole node: False for AND, True for OR.
fn fold_nary(children: impl Iterator<Item = PropFormula>, absorbing: bool) -> PropFormula {
    let mut kept = Vec::new();
    for c in children {
        match c.as_constant() {
            Some(b) if b == absorbing => return PropFormula::constant(absorbing),
            Some(_) => {}
            None => kept.push(c),
        }
    }
    match kept.len() {
        0 => PropFormula::constant(!absorbing),
        1 => kept.pop().unwrap(),
        _ if absorbing => Or(kept),
        _ => And(kept),
    }
}

impl Formula for PropFormula {
    fn variables(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn evaluate(&self, a: &PartialAssignment) -> Result<bool> {
        self.eval_with(a)
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::grammar::emit_formula(self))
    }
}

/// Serialized as its canonical grammar text.
impl serde::Serialize for PropFormula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
