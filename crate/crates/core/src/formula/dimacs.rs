//! DIMACS CNF reading and writing.

use std::fmt::Write as _;

use super::{Clause, CnfFormula, Literal};
use crate::error::ParseError;

/// Header written by [`emit_dimacs`] and the metadata prefix used by the
/// family generators.
pub const METADATA_PREFIX: &str = "c opaque-sat";

/// Everything recovered from a DIMACS file besides the clause set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DimacsReport {
    pub declared_vars: usize,
    pub declared_clauses: usize,
    /// Clauses dropped because an identical clause was already present.
    pub duplicate_clauses: usize,
    /// Literals dropped because they repeated inside their clause.
    pub duplicate_literals: usize,
    /// `c opaque-sat ...` lines, verbatim. Never used for recognition.
    pub metadata: Vec<String>,
    pub warnings: Vec<String>,
}

impl DimacsReport {
    pub fn header_mismatch(&self) -> bool {
        !self.warnings.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct ParsedDimacs {
    pub formula: CnfFormula,
    pub report: DimacsReport,
}

/// Parses DIMACS CNF with set semantics: duplicate clauses and literals are
/// merged and counted. Header/body count disagreements become warnings.
pub fn parse_dimacs_detailed(text: &str) -> Result<ParsedDimacs, ParseError> {
    let mut report = DimacsReport::default();
    let mut header: Option<(usize, usize)> = None;
    let mut formula = CnfFormula::default();
    let mut current: Vec<Literal> = Vec::new();
    let mut current_open = false;
    let mut body_clauses = 0usize;
    let mut max_var = 0u32;
    let mut last_pos = (1, 1);

    'lines: for (line_idx, line) in text.lines().enumerate() {
        let lineno = line_idx + 1;
        let trimmed = line.trim_start();
        if trimmed.starts_with('c') {
            if line.starts_with(METADATA_PREFIX) {
                report.metadata.push(line.trim_end().to_string());
            }
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            let col = line.len() - trimmed.len() + 1;
            if header.is_some() {
                return Err(ParseError::new(lineno, col, "duplicate problem line"));
            }
            if current_open || body_clauses > 0 {
                return Err(ParseError::new(lineno, col, "problem line after clauses"));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(ParseError::new(lineno, col, "expected `p cnf <vars> <clauses>`"));
            }
            let parse_count = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| ParseError::new(lineno, col, format!("invalid count `{s}`")))
            };
            header = Some((parse_count(fields[2])?, parse_count(fields[3])?));
            continue;
        }
        let mut offset = 0usize;
        for token in line.split_whitespace() {
            let start = line[offset..].find(token).map(|p| p + offset).unwrap_or(offset);
            offset = start + token.len();
            let col = line[..start].chars().count() + 1;
            last_pos = (lineno, col);
            if header.is_none() {
                return Err(ParseError::new(lineno, col, "clause before the `p cnf` line"));
            }
            let value: i32 = match token.parse() {
                Ok(v) => v,
                Err(_) => {
                    if token.starts_with('%') {
                        break 'lines;
                    }
                    return Err(ParseError::new(lineno, col, format!("invalid literal `{token}`")));
                }
            };
            if value == 0 {
                let before = current.len();
                let clause: Clause = current.drain(..).collect();
                report.duplicate_literals += before - clause.len();
                if !formula.insert(clause) {
                    report.duplicate_clauses += 1;
                }
                body_clauses += 1;
                current_open = false;
            } else {
                let lit = Literal::from_dimacs(value).expect("nonzero");
                max_var = max_var.max(lit.var().id());
                current.push(lit);
                current_open = true;
            }
        }
    }

    if current_open {
        return Err(ParseError::new(last_pos.0, last_pos.1, "clause not terminated by 0"));
    }
    let (declared_vars, declared_clauses) =
        header.ok_or_else(|| ParseError::new(1, 1, "missing `p cnf` line"))?;
    report.declared_vars = declared_vars;
    report.declared_clauses = declared_clauses;
    if declared_clauses != body_clauses {
        report.warnings.push(format!(
            "header declares {declared_clauses} clauses, body has {body_clauses}"
        ));
    }
    if (max_var as usize) > declared_vars {
        report.warnings.push(format!(
            "header declares {declared_vars} variables, body uses x{max_var}"
        ));
    }
    Ok(ParsedDimacs { formula, report })
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, ParseError> {
    parse_dimacs_detailed(text).map(|p| p.formula)
}

/// Canonical DIMACS text: header with the largest variable id and the clause
/// count, one clause per line in set order.
pub fn emit_dimacs(f: &CnfFormula) -> String {
    emit_dimacs_with_comments(f, &[])
}

/// As [`emit_dimacs`], preceded by the given comment lines (each must start with `c`).
pub fn emit_dimacs_with_comments(f: &CnfFormula, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        debug_assert!(c.starts_with('c'));
        out.push_str(c);
        out.push('\n');
    }
    writeln!(out, "p cnf {} {}", f.max_variable_id(), f.len()).unwrap();
    for clause in f.clauses() {
        for lit in clause.literals() {
            write!(out, "{} ", lit.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_simple_clause() {
        let f = parse_dimacs("p cnf 2 1\n1 -2 0").unwrap();
        assert_eq!(f, CnfFormula::from_dimacs_clauses(&[&[1, -2]]));
    }

    #[test]
    fn parses_empty_clause() {
        let f = parse_dimacs("p cnf 1 1\n0").unwrap();
        assert!(f.is_trivially_false());
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn comments_and_multiline_clauses() {
        let text = "c hello\nc opaque-sat family=backdoor k=2 base-vars=1\np cnf 3 2\n1 2\n 3 0 -1\n0\n";
        let p = parse_dimacs_detailed(text).unwrap();
        assert_eq!(p.formula, CnfFormula::from_dimacs_clauses(&[&[1, 2, 3], &[-1]]));
        assert_eq!(p.report.metadata.len(), 1);
        assert!(!p.report.header_mismatch());
    }

    #[test]
    fn duplicates_are_counted_and_header_mismatch_warns() {
        let p = parse_dimacs_detailed("p cnf 2 3\n1 1 2 0\n2 1 0\n-2 0\n").unwrap();
        assert_eq!(p.formula.len(), 2);
        assert_eq!(p.report.duplicate_literals, 1);
        assert_eq!(p.report.duplicate_clauses, 1);
        assert!(!p.report.header_mismatch());

        let p = parse_dimacs_detailed("p cnf 1 5\n1 2 0\n").unwrap();
        assert_eq!(p.report.warnings.len(), 2);
    }

    #[test]
    fn malformed_input_reports_position() {
        let e = parse_dimacs("p cnf 2 1\n1 foo 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_dimacs("1 2 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        assert!(parse_dimacs("p cnf 2 1\n1 2\n").is_err());
        assert!(parse_dimacs("p dnf 2 1\n1 2 0\n").is_err());
        assert!(parse_dimacs("c only comments\n").is_err());
    }

    #[test]
    fn emit_is_canonical() {
        let f = parse_dimacs("p cnf 9 2\n-2 1 0\n3 0\n").unwrap();
        assert_eq!(emit_dimacs(&f), "p cnf 3 2\n1 -2 0\n3 0\n");
        assert_eq!(emit_dimacs(&CnfFormula::default()), "p cnf 0 0\n");
    }

    fn dimacs_text() -> impl Strategy<Value = String> {
        let clause = proptest::collection::vec((1i32..12, any::<bool>()), 0..5).prop_map(|lits| {
            let mut s: String = lits
                .iter()
                .map(|&(v, p)| format!("{} ", if p { v } else { -v }))
                .collect();
            s.push('0');
            s
        });
        proptest::collection::vec(clause, 0..10)
            .prop_map(|cs| format!("c generated\np cnf 11 {}\n{}\n", cs.len(), cs.join("\n")))
    }

    proptest! {
        #[test]
        fn emit_parse_normalizes(text in dimacs_text()) {
            let f = parse_dimacs(&text).unwrap();
            let canonical = emit_dimacs(&f);
            prop_assert_eq!(parse_dimacs(&canonical).unwrap(), f.clone());
            prop_assert_eq!(emit_dimacs(&parse_dimacs(&canonical).unwrap()), canonical);
        }
    }
}
