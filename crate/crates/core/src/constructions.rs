//! Padded formula families and their recognizers.
//!
//! Backdoor family: a CNF base F over n variables plus positive unit clauses
//! over the first n^k − n fresh variables. Assigning V(F) leaves only units
//! (and possibly the empty clause), so V(F) is a strong backdoor that a
//! recognizer reads off without any search.
//!
//! Backbone family: a general base G conjoined with q(G) fresh positive atoms,
//! which are forced in every model and make up at least a β fraction of the
//! variables whenever G is satisfiable.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde::Serialize;

use crate::backbone::{has_large_backbone, has_nontrivial_backbone};
use crate::beta::Beta;
use crate::error::{Error, Result};
use crate::formula::dimacs::{emit_dimacs, emit_dimacs_with_comments, METADATA_PREFIX};
use crate::formula::grammar::emit_formula;
use crate::formula::{fresh_variables, parse_any, AnyFormula, Clause, CnfFormula, Formula, PartialAssignment, PropFormula, Variable};
use crate::solver::split_solve;

/// Upper bound on tail variables a padding may introduce.
pub const MAX_TAIL_VARIABLES: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BackdoorFamilyInstance {
    pub padded: CnfFormula,
    pub base: CnfFormula,
    pub tail_vars: Vec<Variable>,
    pub k: u32,
}

impl BackdoorFamilyInstance {
    pub fn base_vars(&self) -> usize {
        self.padded.variables().len() - self.tail_vars.len()
    }

    pub fn metadata(&self) -> String {
        format!("{METADATA_PREFIX} family=backdoor k={} base-vars={}", self.k, self.base_vars())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BackboneFamilyInstance {
    pub padded: PropFormula,
    pub base: PropFormula,
    pub tail_vars: Vec<Variable>,
    pub beta: Beta,
    pub q: u64,
}

impl BackboneFamilyInstance {
    pub fn metadata(&self) -> String {
        format!("{METADATA_PREFIX} family=backbone beta={} q={}", self.beta, self.q)
    }
}

/// q(G) = ⌈β·|V(G)| / (1 − β)⌉.
pub fn q_of<F: Formula + ?Sized>(g: &F, beta: Beta) -> Result<u64> {
    match g.variables().len() {
        0 => Err(Error::ZeroVariableFormula),
        n => Ok(beta.tail_length(n)),
    }
}

fn tail_count(n: usize, k: u32) -> Result<usize> {
    let too_large = Error::PaddingTooLarge {
        limit: MAX_TAIL_VARIABLES,
    };
    let total = n.checked_pow(k).ok_or(too_large)?;
    let tail = total - n;
    if tail > MAX_TAIL_VARIABLES {
        return Err(Error::PaddingTooLarge {
            limit: MAX_TAIL_VARIABLES,
        });
    }
    Ok(tail)
}

/// F ∪ {{v} : v among the first |V(F)|^k − |V(F)| fresh variables}.
pub fn pad_backdoor_family(base: &CnfFormula, k: u32) -> Result<BackdoorFamilyInstance> {
    if k == 0 {
        return Err(Error::InvalidParameters("padding exponent must be at least 1".into()));
    }
    let n = base.variables().len();
    if n == 0 {
        return Err(Error::ZeroVariableFormula);
    }
    let tail_vars = fresh_variables(base, tail_count(n, k)?);
    let mut padded = base.clone();
    for &v in &tail_vars {
        padded.insert(Clause::unit(v.positive()));
    }
    Ok(BackdoorFamilyInstance {
        padded,
        base: base.clone(),
        tail_vars,
        k,
    })
}

/// Integer k-th root, if `total` is a perfect k-th power.
fn exact_root(total: usize, k: u32) -> Option<usize> {
    let guess = (total as f64).powf(1.0 / f64::from(k)).round() as usize;
    (guess.saturating_sub(1)..=guess + 1).find(|&r| r.checked_pow(k) == Some(total))
}

/// Membership test for the backdoor family at exponent `k ≥ 2`.
///
/// With N = |V(G)| = n^k, the tail must be m = N − n variables each occurring
/// only in its own positive unit clause, and every id up to the largest tail
/// variable must occur in G (otherwise the tail is not the first m fresh
/// variables of the rest). When more candidates qualify than needed the
/// largest ids are taken as the tail.
pub fn recognize_backdoor_family(g: &CnfFormula, k: u32) -> Option<BackdoorFamilyInstance> {
    if k < 2 {
        return None;
    }
    let vars = g.variables();
    let n = exact_root(vars.len(), k).filter(|&n| n > 0)?;
    let m = vars.len() - n;

    let mut occurrences = vec![0u32; vars.last().map_or(0, |v| v.id() as usize) + 1];
    for clause in g.clauses() {
        for v in clause.variables() {
            occurrences[v.id() as usize] += 1;
        }
    }
    // Longest run 1..=prefix contained in V(G).
    let prefix = vars
        .iter()
        .zip(1u32..)
        .take_while(|(v, id)| v.id() == *id)
        .count() as u32;
    let candidates: Vec<Variable> = vars
        .iter()
        .copied()
        .filter(|&v| {
            v.id() <= prefix && occurrences[v.id() as usize] == 1 && g.contains(&Clause::unit(v.positive()))
        })
        .collect();
    if candidates.len() < m {
        return None;
    }
    let tail_vars = candidates[candidates.len() - m..].to_vec();
    let mut base = g.clone();
    for &v in &tail_vars {
        base.remove(&Clause::unit(v.positive()));
    }
    debug_assert_eq!(fresh_variables(&base, m), tail_vars);
    Some(BackdoorFamilyInstance {
        padded: g.clone(),
        base,
        tail_vars,
        k,
    })
}

/// The base variables, a strong backdoor of the padded formula of size |V(padded)|^(1/k).
pub fn extract_backdoor(inst: &BackdoorFamilyInstance) -> BTreeSet<Variable> {
    inst.base.variables()
}

/// AND(G, v_1, ..., v_q) over the first q = q(G) fresh variables.
pub fn pad_backbone_family(base: &PropFormula, beta: Beta) -> Result<BackboneFamilyInstance> {
    let q = q_of(base, beta)?;
    let count = usize::try_from(q)
        .ok()
        .filter(|&c| c <= MAX_TAIL_VARIABLES)
        .ok_or(Error::PaddingTooLarge {
            limit: MAX_TAIL_VARIABLES,
        })?;
    let tail_vars = fresh_variables(base, count);
    let mut conjuncts = Vec::with_capacity(count + 1);
    conjuncts.push(base.clone());
    conjuncts.extend(tail_vars.iter().map(|&v| PropFormula::Atom(v)));
    Ok(BackboneFamilyInstance {
        padded: PropFormula::And(conjuncts),
        base: base.clone(),
        tail_vars,
        beta,
        q,
    })
}

/// Membership test for the backbone family: the formula must be exactly
/// AND(G, v_1, ..., v_q) with v_i the first q(G) fresh variables of G, in order.
pub fn recognize_backbone_family(phi: &PropFormula, beta: Beta) -> Option<BackboneFamilyInstance> {
    let PropFormula::And(children) = phi else {
        return None;
    };
    let (base, tail) = children.split_first()?;
    let q = q_of(base, beta).ok()?;
    if tail.len() as u64 != q {
        return None;
    }
    let expected = fresh_variables(base, tail.len());
    let matches = tail
        .iter()
        .zip(&expected)
        .all(|(c, &v)| *c == PropFormula::Atom(v));
    matches.then(|| BackboneFamilyInstance {
        padded: phi.clone(),
        base: base.clone(),
        tail_vars: expected,
        beta,
        q,
    })
}

/// The formula g(H): a backbone-family member exactly when H is satisfiable.
///
/// Zero-variable inputs map to pad(x1) when they evaluate True and to
/// pad(x1 ∧ ¬x1) when they evaluate False.
pub fn reduce_sat_to_large_backbone(h: &PropFormula, beta: Beta) -> Result<PropFormula> {
    if !h.variables().is_empty() {
        return Ok(pad_backbone_family(h, beta)?.padded);
    }
    let base = if h.evaluate(&PartialAssignment::new())? {
        fixed_member_base()
    } else {
        fixed_non_member_base()
    };
    Ok(pad_backbone_family(&base, beta)?.padded)
}

fn fixed_member_base() -> PropFormula {
    PropFormula::atom(1)
}

fn fixed_non_member_base() -> PropFormula {
    PropFormula::And(vec![PropFormula::atom(1), PropFormula::not(PropFormula::atom(1))])
}

/// L_A membership by definition: recognized, and a backbone of at least β·|V|.
pub fn in_backbone_language(phi: &PropFormula, beta: Beta) -> Result<bool> {
    if recognize_backbone_family(phi, beta).is_none() {
        return Ok(false);
    }
    has_large_backbone(phi, beta)
}

/// L_A membership with a nontrivial backbone in place of a large one.
pub fn in_backbone_language_nontrivial(phi: &PropFormula, beta: Beta) -> Result<bool> {
    if recognize_backbone_family(phi, beta).is_none() {
        return Ok(false);
    }
    has_nontrivial_backbone(phi)
}

/// L_A membership through the NP certificate: recognized, and the base is satisfiable.
pub fn in_backbone_language_via_base(phi: &PropFormula, beta: Beta) -> bool {
    recognize_backbone_family(phi, beta).is_some_and(|inst| split_solve(&inst.base).is_sat())
}

/// A many-one reduction supplied from outside: input text in, formula text out.
pub trait ReductionHook {
    fn reduce(&self, input: &str) -> Result<String>;
}

impl<F> ReductionHook for F
where
    F: Fn(&str) -> Result<String>,
{
    fn reduce(&self, input: &str) -> Result<String> {
        self(input)
    }
}

/// Runs a program with the input on stdin and takes its stdout as the formula.
#[derive(Debug, Clone)]
pub struct ExecutableHook {
    pub program: PathBuf,
    pub args: Vec<String>,
}

impl ExecutableHook {
    pub fn new(program: impl Into<PathBuf>) -> Self {
        ExecutableHook {
            program: program.into(),
            args: Vec::new(),
        }
    }

    pub fn arg(mut self, arg: impl Into<String>) -> Self {
        self.args.push(arg.into());
        self
    }
}

impl ReductionHook for ExecutableHook {
    fn reduce(&self, input: &str) -> Result<String> {
        let name = self.program.display().to_string();
        let fail = |msg: String| Error::ReductionHookFailure(format!("{name}: {msg}"));
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| fail(e.to_string()))?;
        let mut stdin = child.stdin.take().expect("stdin is piped");
        let payload = input.to_owned();
        // A separate writer keeps a chatty child from blocking on a full stdout pipe.
        let writer = std::thread::spawn(move || stdin.write_all(payload.as_bytes()));
        let output = child.wait_with_output().map_err(|e| fail(e.to_string()))?;
        match writer.join() {
            Ok(Ok(())) => {}
            // The child may legitimately exit without reading all of its input.
            Ok(Err(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            Ok(Err(e)) => return Err(fail(e.to_string())),
            Err(_) => return Err(fail("stdin writer panicked".into())),
        }
        if !output.status.success() {
            let stderr = String::from_utf8_lossy(&output.stderr);
            return Err(fail(format!("exited with {}: {}", output.status, stderr.trim())));
        }
        String::from_utf8(output.stdout).map_err(|_| fail("output is not UTF-8".into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Backdoor { k: u32 },
    Backbone { beta: Beta },
}

/// Byte lengths under the canonical emitters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthReport {
    /// |x|.
    pub input_len: usize,
    /// |r(x)|.
    pub reduced_len: usize,
    pub tail_vars: usize,
    /// Bytes added by padding: total_len − reduced_len.
    pub tail_len: usize,
    pub total_len: usize,
    /// tail_len / (reduced_len · log2 reduced_len); reported only.
    pub tail_over_nlogn: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PaddedInstance {
    Backdoor(BackdoorFamilyInstance),
    Backbone(BackboneFamilyInstance),
}

impl PaddedInstance {
    /// Canonical text of the padded formula, metadata comment included for DIMACS.
    pub fn emit(&self) -> String {
        match self {
            PaddedInstance::Backdoor(inst) => emit_dimacs_with_comments(&inst.padded, &[inst.metadata()]),
            PaddedInstance::Backbone(inst) => format!("{}\n", emit_formula(&inst.padded)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComposedReduction {
    pub instance: PaddedInstance,
    pub lengths: LengthReport,
}

/// Pads r(x) into the chosen family and accounts for the lengths involved.
///
/// Hook output is read with [`parse_any`]. The backdoor family needs CNF. For the backbone
/// family, CNF output is read as a conjunction of disjunctions.
pub fn compose_padded_reduction(
    hook: &dyn ReductionHook,
    family: Family,
    input: &str,
) -> Result<ComposedReduction> {
    let reduced = parse_any(&hook.reduce(input)?)?;
    let (instance, reduced_len, total_len) = match (family, reduced) {
        (Family::Backdoor { k }, AnyFormula::Cnf(f)) => {
            let inst = pad_backdoor_family(&f, k)?;
            let lens = (emit_dimacs(&inst.base).len(), emit_dimacs(&inst.padded).len());
            (PaddedInstance::Backdoor(inst), lens.0, lens.1)
        }
        (Family::Backdoor { .. }, AnyFormula::Prop(_)) => {
            return Err(Error::ReductionHookFailure(
                "the backdoor family needs DIMACS output from the hook".into(),
            ))
        }
        (Family::Backbone { beta }, reduced) => {
            let inst = pad_backbone_family(&reduced.into_prop(), beta)?;
            let lens = (emit_formula(&inst.base).len(), emit_formula(&inst.padded).len());
            (PaddedInstance::Backbone(inst), lens.0, lens.1)
        }
    };
    let tail_vars = match &instance {
        PaddedInstance::Backdoor(i) => i.tail_vars.len(),
        PaddedInstance::Backbone(i) => i.tail_vars.len(),
    };
    let tail_len = total_len.saturating_sub(reduced_len);
    let b = reduced_len as f64;
    let tail_over_nlogn = if reduced_len > 1 {
        tail_len as f64 / (b * b.log2())
    } else {
        f64::NAN
    };
    Ok(ComposedReduction {
        instance,
        lengths: LengthReport {
            input_len: input.len(),
            reduced_len,
            tail_vars,
            tail_len,
            total_len,
            tail_over_nlogn,
        },
    })
}
