use std::time::Duration;

use opaque_sat::bench::{run_bench, BenchConfig, BenchRecord, BenchVerdict};
use serde_json::json;

use crate::args::BenchArgs;
use crate::report::{Failure, Report, EXIT_NEGATIVE, VERSION};

const COLUMNS: [&str; 13] = [
    "instance",
    "total_vars",
    "k",
    "recognize_ns",
    "extract_ns",
    "backdoor_size",
    "guided_calls",
    "guided_ns",
    "dpll_ns",
    "search_outcome",
    "verdict",
    "instance_seed",
    "search_ns",
];

pub fn run(args: &BenchArgs, json: bool) -> Result<Report, Failure> {
    let config = BenchConfig {
        base_vars: args.base_vars,
        base_clauses: args.base_clauses,
        width: args.width,
        k: args.k,
        count: args.count,
        seed: args.seed,
        search_cap: args.search_cap,
        search_timeout: args.search_timeout_ms.map(Duration::from_millis),
    };
    let records = run_bench(&config)?;
    let code = if records.iter().any(|r| r.verdict == BenchVerdict::Conflict) {
        EXIT_NEGATIVE
    } else {
        0
    };
    let text = if json { String::new() } else { csv_text(&records, args.seed, args.no_timings)? };
    let rows: Vec<_> = records.iter().map(|r| row_json(r, args.no_timings)).collect();
    let payload = json!({"config": config, "records": rows});
    let report = Report::new("bench", payload, String::new());
    Ok(Report::raw(text, report.json).with_code(code))
}

fn nanos(d: Duration, hide: bool) -> String {
    if hide {
        String::new()
    } else {
        d.as_nanos().to_string()
    }
}

fn verdict_name(v: BenchVerdict) -> &'static str {
    match v {
        BenchVerdict::Sat => "sat",
        BenchVerdict::Unsat => "unsat",
        BenchVerdict::Conflict => "conflict",
    }
}

fn csv_text(records: &[BenchRecord], seed: u64, hide: bool) -> Result<String, Failure> {
    let mut out = format!("# opaque-sat {VERSION} seed={seed}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        let fail = |e: csv::Error| Failure::input(e.to_string());
        w.write_record(COLUMNS).map_err(fail)?;
        for r in records {
            w.write_record([
                r.instance.to_string(),
                r.total_vars.to_string(),
                r.k.to_string(),
                nanos(r.recognize_time, hide),
                nanos(r.extract_time, hide),
                r.backdoor_size.to_string(),
                r.guided_calls.to_string(),
                nanos(r.guided_time, hide),
                nanos(r.dpll_time, hide),
                r.search.to_string(),
                verdict_name(r.verdict).to_string(),
                r.instance_seed.to_string(),
                nanos(r.search_time, hide),
            ])
            .map_err(fail)?;
        }
        w.flush()?;
    }
    String::from_utf8(out).map_err(|e| Failure::input(e.to_string()))
}

fn row_json(r: &BenchRecord, hide: bool) -> serde_json::Value {
    let ns = |d: Duration| if hide { json!(null) } else { json!(d.as_nanos() as u64) };
    json!({
        "instance": r.instance,
        "instance_seed": r.instance_seed,
        "total_vars": r.total_vars,
        "k": r.k,
        "recognize_ns": ns(r.recognize_time),
        "extract_ns": ns(r.extract_time),
        "backdoor_size": r.backdoor_size,
        "guided_calls": r.guided_calls,
        "guided_ns": ns(r.guided_time),
        "dpll_ns": ns(r.dpll_time),
        "search": r.search,
        "search_ns": ns(r.search_time),
        "verdict": r.verdict,
    })
}
