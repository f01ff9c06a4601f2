use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::Path;
use std::time::{Duration, Instant};

use opaque_sat::backbone::{backbone_fixed_variables, is_backbone};
use opaque_sat::backdoor::{
    search_strong_backdoor, solve_via_backdoor, solve_via_bounded_backdoors, verify_strong_backdoor,
    BackdoorVerdict, BoundedVerdict, SearchLimits, SearchOutcome,
};
use opaque_sat::constructions::{
    compose_padded_reduction, extract_backdoor, pad_backbone_family, pad_backdoor_family,
    recognize_backbone_family, recognize_backdoor_family, reduce_sat_to_large_backbone, ExecutableHook, Family,
    PaddedInstance,
};
use opaque_sat::formula::dimacs::{emit_dimacs, emit_dimacs_with_comments};
use opaque_sat::formula::grammar::emit_formula;
use opaque_sat::generate::random_cnf;
use opaque_sat::subsolver::{up_subsolve, Verdict};
use opaque_sat::{
    brute_force_solve, dpll_solve, parse_any, split_solve, AnyFormula, CnfFormula, Decide, Formula,
    PartialAssignment, SatResult, Variable,
};
use serde_json::{json, Value};

use crate::args::{BackboneCommand, BackdoorCommand, Cli, Command, GenCommand, OutputPath, RecognizeCommand};
use crate::report::{Failure, Report, EXIT_NEGATIVE};

type Outcome = Result<Report, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Solve(args) => solve(&args.input.file, args.oracle, args.up, args.trace),
        Command::Backdoor(cmd) => backdoor(cmd),
        Command::Backbone(cmd) => backbone(cmd),
        Command::Gen(cmd) => generate(cmd),
        Command::Recognize(cmd) => recognize(cmd),
        Command::Bench(args) => crate::bench::run(args, cli.json),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        return Ok(text);
    }
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<AnyFormula, Failure> {
    parse_any(&read_text(path)?).map_err(|e| Failure::input(format!("{}:{e}", path.display())))
}

fn load_cnf(path: &Path) -> Result<CnfFormula, Failure> {
    match load(path)? {
        AnyFormula::Cnf(f) => Ok(f),
        AnyFormula::Prop(_) => Err(Failure::usage(format!(
            "{}: this command needs a DIMACS CNF file",
            path.display()
        ))),
    }
}

fn set_text(set: &BTreeSet<Variable>) -> String {
    let names: Vec<String> = set.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", names.join(", "))
}

fn ids(set: &BTreeSet<Variable>) -> Vec<u32> {
    set.iter().map(|v| v.id()).collect()
}

/// SAT-competition style `s`/`v` lines.
fn result_lines(result: &SatResult) -> String {
    match result {
        SatResult::Satisfiable(m) => format!("s SATISFIABLE\n{}", model_line(m)),
        SatResult::Unsatisfiable => "s UNSATISFIABLE\n".to_string(),
    }
}

fn model_line(m: &PartialAssignment) -> String {
    let mut line = String::from("v");
    for lit in m.literals() {
        write!(line, " {}", lit.to_dimacs()).unwrap();
    }
    line.push_str(" 0\n");
    line
}

fn solve(path: &Path, oracle: bool, up: bool, trace: bool) -> Outcome {
    if up {
        let f = load_cnf(path)?;
        let out = up_subsolve(&f);
        let mut human = match &out.verdict {
            Verdict::Determines { result } => result_lines(result),
            Verdict::Rejects => "s REJECTS\n".to_string(),
        };
        if trace {
            for step in &out.trace {
                writeln!(human, "c step {}: unit {{{}}} sets {}={}", step.step, step.literal, step.variable, tv(step.value))
                    .unwrap();
            }
        }
        let payload = json!({"solver": "unit_propagation", "outcome": out});
        return Ok(Report::new("solve", payload, human));
    }
    let formula = load(path)?;
    let start = Instant::now();
    let (result, solver, stats) = match (&formula, oracle) {
        (_, true) => (brute_force_solve(&formula)?, "brute_force", None),
        (AnyFormula::Cnf(f), false) => {
            let (r, s) = dpll_solve(f);
            (r, "dpll", Some(s))
        }
        (AnyFormula::Prop(p), false) => (split_solve(p), "split", None),
    };
    let elapsed = start.elapsed();
    let mut payload = json!({"solver": solver, "result": result});
    if let Some(s) = stats {
        payload["stats"] = json!(s);
    }
    let mut human = result_lines(&result);
    if let Some(s) = stats {
        writeln!(human, "c decisions {} propagations {}", s.decisions, s.propagations).unwrap();
    }
    writeln!(human, "c {solver} in {elapsed:.2?}").unwrap();
    Ok(Report::new("solve", payload, human))
}

fn tv(b: bool) -> &'static str {
    if b {
        "T"
    } else {
        "F"
    }
}

fn backdoor(cmd: &BackdoorCommand) -> Outcome {
    match cmd {
        BackdoorCommand::Verify { set, input } => {
            let f = load_cnf(&input.file)?;
            let s: BTreeSet<Variable> = set.vars.iter().copied().collect();
            let verdict = verify_strong_backdoor(&f, &s)?;
            let human = match &verdict {
                BackdoorVerdict::Certified(cert) => {
                    let mut text = format!(
                        "strong backdoor {}: all {} branches determined\n",
                        set_text(&s),
                        cert.branches().len()
                    );
                    for b in cert.branches() {
                        let units: Vec<String> = b.trace.iter().map(|t| t.literal.to_string()).collect();
                        writeln!(
                            text,
                            "  {} {} after {}",
                            b.assignment,
                            if b.satisfiable { "sat" } else { "unsat" },
                            if units.is_empty() { "no propagation".to_string() } else { units.join(", ") }
                        )
                        .unwrap();
                    }
                    text
                }
                BackdoorVerdict::Failed(fail) => format!(
                    "not a strong backdoor {}: the subsolver rejects under {}\n",
                    set_text(&s),
                    fail.failing_assignment
                ),
            };
            let code = if verdict.is_certified() { 0 } else { EXIT_NEGATIVE };
            Ok(Report::new("backdoor verify", json!({"verdict": verdict}), human).with_code(code))
        }
        BackdoorCommand::Find { cap, timeout_ms, input } => {
            let f = load_cnf(&input.file)?;
            let limits = SearchLimits {
                size_cap: *cap,
                deadline: timeout_ms.map(|ms| Instant::now() + Duration::from_millis(ms)),
            };
            let outcome = search_strong_backdoor(&f, limits);
            let (human, code) = match &outcome {
                SearchOutcome::Found {
                    certificate,
                    subsets_checked,
                } => (
                    format!(
                        "smallest strong backdoor {} (size {}, {subsets_checked} subsets checked)\n",
                        set_text(certificate.backdoor()),
                        certificate.backdoor().len()
                    ),
                    0,
                ),
                SearchOutcome::Exhausted { cap, subsets_checked } => (
                    format!("no strong backdoor of size at most {cap} ({subsets_checked} subsets checked)\n"),
                    EXIT_NEGATIVE,
                ),
                SearchOutcome::TimedOut { subsets_checked } => {
                    (format!("timed out after {subsets_checked} subsets\n"), EXIT_NEGATIVE)
                }
            };
            Ok(Report::new("backdoor find", json!({"outcome": outcome}), human).with_code(code))
        }
        BackdoorCommand::Solve { set, input } => {
            let f = load_cnf(&input.file)?;
            let s: BTreeSet<Variable> = set.vars.iter().copied().collect();
            match solve_via_backdoor(&f, &s) {
                Ok(run) => {
                    let mut human = result_lines(&run.result);
                    writeln!(human, "c subsolver calls {}", run.calls).unwrap();
                    let payload = json!({"backdoor": ids(&s), "result": run.result, "calls": run.calls});
                    Ok(Report::new("backdoor solve", payload, human))
                }
                Err(opaque_sat::Error::NotAStrongBackdoor(fail)) => {
                    let human = format!(
                        "not a strong backdoor {}: the subsolver rejects under {}\n",
                        set_text(&s),
                        fail.failing_assignment
                    );
                    let payload = json!({"backdoor": ids(&s), "failure": fail});
                    Ok(Report::new("backdoor solve", payload, human).with_code(EXIT_NEGATIVE))
                }
                Err(e) => Err(e.into()),
            }
        }
        BackdoorCommand::Bounded { k, input } => {
            let f = load_cnf(&input.file)?;
            let run = solve_via_bounded_backdoors(&f, *k)?;
            let mut human = match &run.verdict {
                BoundedVerdict::Satisfiable(m) => format!("s SATISFIABLE\n{}", model_line(m)),
                BoundedVerdict::Unsatisfiable => "s UNSATISFIABLE\n".into(),
                BoundedVerdict::Unknown => "s UNKNOWN\n".into(),
            };
            writeln!(human, "c subsolver calls {}", run.calls).unwrap();
            let payload = json!({"k": k, "verdict": run.verdict, "calls": run.calls});
            Ok(Report::new("backdoor bounded", payload, human))
        }
    }
}

fn backbone(cmd: &BackboneCommand) -> Outcome {
    match cmd {
        BackboneCommand::Report(input) => {
            let f = load(&input.file)?;
            let report = backbone_fixed_variables(&f)?;
            let human = if report.satisfiable {
                let mut text = format!(
                    "satisfiable; maximal backbone {} of {} variables\n",
                    report.fixed.len(),
                    f.variables().len()
                );
                for (v, b) in &report.fixed {
                    writeln!(text, "  {v} = {}", tv(*b)).unwrap();
                }
                text
            } else {
                "unsatisfiable; no backbone\n".into()
            };
            Ok(Report::new("backbone report", json!({"report": report}), human))
        }
        BackboneCommand::Check { set, input } => {
            let f = load(&input.file)?;
            let s: BTreeSet<Variable> = set.vars.iter().copied().collect();
            let holds = is_backbone(&f, &s)?;
            let human = format!("{} is {}a backbone\n", set_text(&s), if holds { "" } else { "not " });
            let code = if holds { 0 } else { EXIT_NEGATIVE };
            Ok(Report::new("backbone check", json!({"set": ids(&s), "backbone": holds}), human).with_code(code))
        }
        BackboneCommand::Large { beta, input } => {
            let f = load(&input.file)?;
            let report = backbone_fixed_variables(&f)?;
            let total = f.variables().len();
            let holds = report.satisfiable && beta.is_met_by(report.fixed.len(), total);
            let human = if report.satisfiable {
                format!(
                    "maximal backbone {} of {total} variables {} beta {beta}\n",
                    report.fixed.len(),
                    if holds { "meets" } else { "falls short of" }
                )
            } else {
                "unsatisfiable; no backbone\n".into()
            };
            let payload = json!({"beta": beta, "fixed": report.fixed.len(), "variables": total, "large": holds});
            Ok(Report::new("backbone large", payload, human).with_code(if holds { 0 } else { EXIT_NEGATIVE }))
        }
        BackboneCommand::Nontrivial(input) => {
            let f = load(&input.file)?;
            let report = backbone_fixed_variables(&f)?;
            let holds = report.satisfiable && !report.fixed.is_empty();
            let human = format!("{} nontrivial backbone\n", if holds { "has a" } else { "no" });
            let payload = json!({"nontrivial": holds, "fixed": report.fixed.len()});
            Ok(Report::new("backbone nontrivial", payload, human).with_code(if holds { 0 } else { EXIT_NEGATIVE }))
        }
    }
}

fn write_formula(text: String, out: &OutputPath, command: &str, extra: Value) -> Outcome {
    let mut payload = json!({"formula": text});
    if let (Value::Object(p), Value::Object(e)) = (&mut payload, extra) {
        p.extend(e);
    }
    if let Some(path) = &out.output {
        fs::write(path, &text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        let human = format!("wrote {}\n", path.display());
        return Ok(Report::new(command, payload, human));
    }
    let report = Report::new(command, payload, String::new());
    Ok(Report::raw(text, report.json))
}

fn generate(cmd: &GenCommand) -> Outcome {
    match cmd {
        GenCommand::PadBackdoor { k, input, out } => {
            let inst = pad_backdoor_family(&load_cnf(&input.file)?, *k)?;
            let text = emit_dimacs_with_comments(&inst.padded, &[inst.metadata()]);
            let extra = json!({"k": k, "base_vars": inst.base_vars(), "tail_vars": inst.tail_vars.len()});
            write_formula(text, out, "gen pad-backdoor", extra)
        }
        GenCommand::PadBackbone { beta, input, out } => {
            let inst = pad_backbone_family(&load(&input.file)?.into_prop(), *beta)?;
            let extra = json!({"beta": beta, "q": inst.q});
            write_formula(format!("{}\n", emit_formula(&inst.padded)), out, "gen pad-backbone", extra)
        }
        GenCommand::Reduce { beta, input, out } => {
            let g = reduce_sat_to_large_backbone(&load(&input.file)?.into_prop(), *beta)?;
            write_formula(format!("{}\n", emit_formula(&g)), out, "gen reduce", json!({"beta": beta}))
        }
        GenCommand::Compose {
            hook,
            hook_args,
            k,
            beta,
            file,
            out,
        } => {
            let family = match (k, beta) {
                (Some(k), None) => Family::Backdoor { k: *k },
                (None, Some(beta)) => Family::Backbone { beta: *beta },
                _ => return Err(Failure::usage("give exactly one of -k and --beta")),
            };
            let mut exe = ExecutableHook::new(hook);
            for a in hook_args {
                exe = exe.arg(a.clone());
            }
            let composed = compose_padded_reduction(&exe, family, &read_text(file)?)?;
            let text = composed.instance.emit();
            let tail = match &composed.instance {
                PaddedInstance::Backdoor(i) => i.tail_vars.len(),
                PaddedInstance::Backbone(i) => i.tail_vars.len(),
            };
            let extra = json!({"family": family, "lengths": composed.lengths, "tail_vars": tail});
            let mut report = write_formula(text, out, "gen compose", extra)?;
            let l = &composed.lengths;
            if out.output.is_some() {
                writeln!(
                    report.human,
                    "c input {} bytes, reduced {} bytes, padded {} bytes ({} tail variables)",
                    l.input_len, l.reduced_len, l.total_len, l.tail_vars
                )
                .unwrap();
            }
            Ok(report)
        }
        GenCommand::Random {
            vars,
            clauses,
            width,
            seed,
            out,
        } => {
            let f = random_cnf(*vars, *clauses, *width, *seed)?;
            let stamp = format!("c opaque-sat {} random vars={vars} clauses={clauses} width={width} seed={seed}", crate::report::VERSION);
            let extra = json!({"seed": seed, "vars": vars, "clauses": f.len(), "width": width});
            write_formula(emit_dimacs_with_comments(&f, &[stamp]), out, "gen random", extra)
        }
    }
}

fn recognize(cmd: &RecognizeCommand) -> Outcome {
    match cmd {
        RecognizeCommand::Backdoor { k, input } => {
            let g = load_cnf(&input.file)?;
            let Some(inst) = recognize_backdoor_family(&g, *k) else {
                let payload = json!({"member": false, "k": k});
                return Ok(Report::new("recognize backdoor", payload, "not a member\n".into()).with_code(EXIT_NEGATIVE));
            };
            let backdoor = extract_backdoor(&inst);
            let human = format!(
                "member (k={k}): base over {} variables, {} tail variables\nbackdoor {}\n",
                backdoor.len(),
                inst.tail_vars.len(),
                set_text(&backdoor)
            );
            let payload = json!({
                "member": true,
                "k": k,
                "backdoor": ids(&backdoor),
                "tail_vars": inst.tail_vars,
                "base": emit_dimacs(&inst.base),
            });
            Ok(Report::new("recognize backdoor", payload, human))
        }
        RecognizeCommand::Backbone { beta, input } => {
            let phi = load(&input.file)?.into_prop();
            let Some(inst) = recognize_backbone_family(&phi, *beta) else {
                let payload = json!({"member": false, "beta": beta});
                return Ok(Report::new("recognize backbone", payload, "not a member\n".into()).with_code(EXIT_NEGATIVE));
            };
            let human = format!(
                "member (beta={beta}): q={} tail variables over base {}\n",
                inst.q,
                emit_formula(&inst.base)
            );
            let payload = json!({
                "member": true,
                "beta": beta,
                "q": inst.q,
                "tail_vars": inst.tail_vars,
                "base": emit_formula(&inst.base),
                "base_satisfiable": inst.base.decide()?.is_sat(),
            });
            Ok(Report::new("recognize backbone", payload, human))
        }
    }
}
