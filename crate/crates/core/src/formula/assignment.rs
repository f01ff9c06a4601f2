use std::collections::btree_map;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{Literal, Variable};

/// A finite map from variables to truth values. Its domain is the set S it assigns.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialAssignment {
    bindings: BTreeMap<Variable, bool>,
}

impl PartialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `var`, returning the previous value if it was already bound.
    pub fn assign(&mut self, var: Variable, value: bool) -> Option<bool> {
        self.bindings.insert(var, value)
    }

    pub fn with(mut self, var: Variable, value: bool) -> Self {
        self.assign(var, value);
        self
    }

    pub fn get(&self, var: Variable) -> Option<bool> {
        self.bindings.get(&var).copied()
    }

    pub fn contains(&self, var: Variable) -> bool {
        self.bindings.contains_key(&var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = Variable> + '_ {
        self.bindings.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Variable, bool)> + '_ {
        self.bindings.iter().map(|(&v, &b)| (v, b))
    }

    /// Value of a literal, if its variable is bound.
    pub fn literal_value(&self, lit: Literal) -> Option<bool> {
        self.get(lit.var()).map(|b| lit.value_under(b))
    }

    /// The bindings as true literals, ascending.
    pub fn literals(&self) -> Vec<Literal> {
        self.iter().map(|(v, b)| Literal::new(v, b)).collect()
    }

    /// Restriction to the variables accepted by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(Variable) -> bool) -> Self {
        self.iter().filter(|&(v, _)| keep(v)).collect()
    }

    /// Union of two assignments; `other` wins on overlap.
    pub fn union(&self, other: &PartialAssignment) -> Self {
        let mut out = self.clone();
        out.bindings.extend(other.iter());
        out
    }

    /// True when both agree on every shared variable.
    pub fn consistent_with(&self, other: &PartialAssignment) -> bool {
        self.iter().all(|(v, b)| other.get(v).is_none_or(|o| o == b))
    }
}

impl FromIterator<(Variable, bool)> for PartialAssignment {
    fn from_iter<I: IntoIterator<Item = (Variable, bool)>>(iter: I) -> Self {
        PartialAssignment {
            bindings: iter.into_iter().collect(),
        }
    }
}

impl FromIterator<Literal> for PartialAssignment {
    fn from_iter<I: IntoIterator<Item = Literal>>(iter: I) -> Self {
        iter.into_iter().map(|l| (l.var(), l.is_positive())).collect()
    }
}

impl<'a> IntoIterator for &'a PartialAssignment {
    type Item = (&'a Variable, &'a bool);
    type IntoIter = btree_map::Iter<'a, Variable, bool>;

    fn into_iter(self) -> Self::IntoIter {
        self.bindings.iter()
    }
}

impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (v, b)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}={}", if b { "T" } else { "F" })?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serialized as a sorted list of DIMACS literals, e.g. `[1, -2, 3]`.
impl Serialize for PartialAssignment {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.literals().iter().map(|l| l.to_dimacs()))
    }
}

/// All `2^n` assignments over `vars` in binary counting order: the first
/// variable is the most significant bit, False = 0 and True = 1.
pub fn assignments_over(vars: &[Variable]) -> impl Iterator<Item = PartialAssignment> + '_ {
    let n = vars.len();
    assert!(n < 64, "cannot enumerate 2^{n} assignments");
    (0u64..(1u64 << n)).map(move |code| {
        vars.iter()
            .enumerate()
            .map(|(j, &v)| (v, (code >> (n - 1 - j)) & 1 == 1))
            .collect()
    })
}
