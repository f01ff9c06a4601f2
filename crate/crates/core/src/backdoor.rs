//! Strong backdoors with respect to the unit-propagation subsolver.
//!
//! Branches over a candidate set S are visited in binary counting order over
//! S sorted ascending (see [`assignments_over`]). Candidate sets are visited by
//! increasing cardinality, lexicographically within a cardinality.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{assignments_over, CnfFormula, Formula, PartialAssignment, Variable};
use crate::solver::SatResult;
use crate::subsolver::{TraceStep, UnitPropagator, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchOutcome {
    pub assignment: PartialAssignment,
    pub satisfiable: bool,
    pub trace: Vec<TraceStep>,
}

/// Proof that every branch over `backdoor` is determined by the subsolver.
/// Only [`verify_strong_backdoor`] and the search functions build one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BackdoorCertificate {
    backdoor: BTreeSet<Variable>,
    branches: Vec<BranchOutcome>,
}

impl BackdoorCertificate {
    pub fn backdoor(&self) -> &BTreeSet<Variable> {
        &self.backdoor
    }

    /// One entry per assignment of the backdoor, `2^|S|` in total.
    pub fn branches(&self) -> &[BranchOutcome] {
        &self.branches
    }

    pub fn branch(&self, a: &PartialAssignment) -> Option<&BranchOutcome> {
        self.branches.iter().find(|b| &b.assignment == a)
    }
}

/// A branch on which the subsolver rejects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BackdoorFailure {
    pub backdoor: BTreeSet<Variable>,
    pub failing_assignment: PartialAssignment,
    /// Propagations performed before the subsolver gave up.
    pub trace: Vec<TraceStep>,
}

impl fmt::Display for BackdoorFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.failing_assignment)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BackdoorVerdict {
    Certified(BackdoorCertificate),
    Failed(BackdoorFailure),
}

impl BackdoorVerdict {
    pub fn certificate(&self) -> Option<&BackdoorCertificate> {
        match self {
            BackdoorVerdict::Certified(c) => Some(c),
            BackdoorVerdict::Failed(_) => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.certificate().is_some()
    }
}

fn check_candidate(formula: &CnfFormula, set: &BTreeSet<Variable>) -> Result<Vec<Variable>> {
    if set.is_empty() {
        return Err(Error::EmptyBackdoorSet);
    }
    let vars = formula.variables();
    if let Some(&v) = set.iter().find(|v| !vars.contains(v)) {
        return Err(Error::UnknownVariable(v));
    }
    Ok(set.iter().copied().collect())
}

fn verify_with(propagator: &UnitPropagator, set: &[Variable]) -> BackdoorVerdict {
    let backdoor: BTreeSet<Variable> = set.iter().copied().collect();
    let mut branches = Vec::with_capacity(1 << set.len());
    for a in assignments_over(set) {
        let out = propagator.run(&a);
        match out.verdict {
            Verdict::Rejects => {
                return BackdoorVerdict::Failed(BackdoorFailure {
                    backdoor,
                    failing_assignment: a,
                    trace: out.trace,
                })
            }
            Verdict::Determines { result } => branches.push(BranchOutcome {
                assignment: a,
                satisfiable: result.is_sat(),
                trace: out.trace,
            }),
        }
    }
    BackdoorVerdict::Certified(BackdoorCertificate { backdoor, branches })
}

/// Checks every assignment of `set`; the first rejecting branch is reported.
pub fn verify_strong_backdoor(formula: &CnfFormula, set: &BTreeSet<Variable>) -> Result<BackdoorVerdict> {
    let vars = check_candidate(formula, set)?;
    Ok(verify_with(&UnitPropagator::new(formula), &vars))
}

/// k-subsets of `0..n` in lexicographic order.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Nonempty subsets of `vars` by increasing size up to `cap`, lexicographic within a size.
pub fn subsets_by_cardinality(vars: &[Variable], cap: usize) -> impl Iterator<Item = Vec<Variable>> + '_ {
    (1..=cap.min(vars.len()))
        .flat_map(move |k| Combinations::new(vars.len(), k))
        .map(move |idx| idx.into_iter().map(|i| vars[i]).collect())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchLimits {
    /// Largest candidate size; `None` means |V(F)|.
    pub size_cap: Option<usize>,
    pub deadline: Option<Instant>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found {
        certificate: BackdoorCertificate,
        subsets_checked: u64,
    },
    /// Every subset up to the cap failed.
    Exhausted { cap: usize, subsets_checked: u64 },
    TimedOut { subsets_checked: u64 },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&BackdoorCertificate> {
        match self {
            SearchOutcome::Found { certificate, .. } => Some(certificate),
            _ => None,
        }
    }
}

/// Blind search for the smallest strong backdoor under `limits`.
pub fn search_strong_backdoor(formula: &CnfFormula, limits: SearchLimits) -> SearchOutcome {
    let vars: Vec<Variable> = formula.variables().into_iter().collect();
    let cap = limits.size_cap.unwrap_or(vars.len()).min(vars.len());
    let propagator = UnitPropagator::new(formula);
    let mut checked = 0u64;
    for subset in subsets_by_cardinality(&vars, cap) {
        if limits.deadline.is_some_and(|d| Instant::now() >= d) {
            return SearchOutcome::TimedOut {
                subsets_checked: checked,
            };
        }
        checked += 1;
        if let BackdoorVerdict::Certified(certificate) = verify_with(&propagator, &subset) {
            return SearchOutcome::Found {
                certificate,
                subsets_checked: checked,
            };
        }
    }
    SearchOutcome::Exhausted {
        cap,
        subsets_checked: checked,
    }
}

/// The first verifying subset in enumeration order, hence of minimum size.
/// `None` when nothing of size at most `size_cap` verifies or V(F) is empty.
pub fn find_smallest_strong_backdoor(
    formula: &CnfFormula,
    size_cap: Option<usize>,
) -> Option<(BTreeSet<Variable>, BackdoorCertificate)> {
    let limits = SearchLimits {
        size_cap,
        deadline: None,
    };
    match search_strong_backdoor(formula, limits) {
        SearchOutcome::Found { certificate, .. } => Some((certificate.backdoor.clone(), certificate)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GuidedSolve {
    pub result: SatResult,
    /// Subsolver invocations.
    pub calls: u64,
}

/// Total model over V(F): the branch, then the subsolver's model, then False.
fn combine_model(all_vars: &[Variable], branch: &PartialAssignment, residual: &PartialAssignment) -> PartialAssignment {
    all_vars
        .iter()
        .map(|&v| (v, branch.get(v).or(residual.get(v)).unwrap_or(false)))
        .collect()
}

/// Decides F by running the subsolver on every branch over `set`, stopping
/// at the first satisfiable one.
pub fn solve_via_backdoor(formula: &CnfFormula, set: &BTreeSet<Variable>) -> Result<GuidedSolve> {
    let vars = check_candidate(formula, set)?;
    let all_vars: Vec<Variable> = formula.variables().into_iter().collect();
    let propagator = UnitPropagator::new(formula);
    let mut calls = 0u64;
    for a in assignments_over(&vars) {
        calls += 1;
        let out = propagator.run(&a);
        match out.verdict {
            Verdict::Rejects => {
                return Err(Error::NotAStrongBackdoor(Box::new(BackdoorFailure {
                    backdoor: set.clone(),
                    failing_assignment: a,
                    trace: out.trace,
                })))
            }
            Verdict::Determines {
                result: SatResult::Satisfiable(m),
            } => {
                return Ok(GuidedSolve {
                    result: SatResult::Satisfiable(combine_model(&all_vars, &a, &m)),
                    calls,
                })
            }
            Verdict::Determines { .. } => {}
        }
    }
    Ok(GuidedSolve {
        result: SatResult::Unsatisfiable,
        calls,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "model", rename_all = "snake_case")]
pub enum BoundedVerdict {
    Satisfiable(PartialAssignment),
    Unsatisfiable,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedSolve {
    pub verdict: BoundedVerdict,
    pub calls: u64,
}

/// Tries every subset of V(F) of size at most `k` and every assignment of it.
///
/// Satisfiable at the first branch the subsolver satisfies; Unsatisfiable as
/// soon as one subset has all branches determined unsatisfiable; Unknown otherwise.
pub fn solve_via_bounded_backdoors(formula: &CnfFormula, k: usize) -> Result<BoundedSolve> {
    if k == 0 {
        return Err(Error::InvalidParameters("backdoor size bound must be at least 1".into()));
    }
    let all_vars: Vec<Variable> = formula.variables().into_iter().collect();
    let propagator = UnitPropagator::new(formula);
    let mut calls = 0u64;
    for subset in subsets_by_cardinality(&all_vars, k) {
        let mut all_unsat = true;
        for a in assignments_over(&subset) {
            calls += 1;
            match propagator.run(&a).verdict {
                Verdict::Determines {
                    result: SatResult::Satisfiable(m),
                } => {
                    return Ok(BoundedSolve {
                        verdict: BoundedVerdict::Satisfiable(combine_model(&all_vars, &a, &m)),
                        calls,
                    })
                }
                Verdict::Determines { .. } => {}
                Verdict::Rejects => all_unsat = false,
            }
        }
        if all_unsat {
            return Ok(BoundedSolve {
                verdict: BoundedVerdict::Unsatisfiable,
                calls,
            });
        }
    }
    Ok(BoundedSolve {
        verdict: BoundedVerdict::Unknown,
        calls,
    })
}

/// Σ_{j=0..k} C(n, j)·2^j, the most subsolver calls [`solve_via_bounded_backdoors`] can make.
pub fn bounded_call_limit(n: usize, k: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for j in 0..=k.min(n) {
        if j > 0 {
            binom = binom * (n - j + 1) as u128 / j as u128;
        }
        total += binom << j;
    }
    total
}
