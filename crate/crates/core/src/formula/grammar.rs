//! Text syntax for propositional formulas.
//!
//! ```text
//! iff     := implies ( "<->" implies )*      left-associative
//! implies := or ( "->" implies )?            right-associative
//! or      := and ( "|" and )*                n-ary
//! and     := unary ( "&" unary )*            n-ary
//! unary   := "!" unary | atom
//! atom    := "T" | "F" | "x" digits | "(" iff ")"
//! ```
//!
//! An unparenthesized chain `a & b & c` is a single n-ary node; parentheses
//! always create a separate node, so `emit_formula` followed by
//! `parse_formula` returns the same tree for every formula whose n-ary nodes
//! have at least two children.

use super::{PropFormula, Variable};
use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    True,
    False,
    Var(Variable),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    token: Token,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        let mut push = |token, width: usize, i: &mut usize, column: &mut usize| {
            out.push(Spanned {
                token,
                line: start_line,
                column: start_col,
            });
            *i += width;
            *column += width;
        };
        match c {
            '\n' => {
                line += 1;
                column = 1;
                i += 1;
            }
            c if c.is_whitespace() => {
                column += 1;
                i += 1;
            }
            '(' => push(Token::LParen, 1, &mut i, &mut column),
            ')' => push(Token::RParen, 1, &mut i, &mut column),
            '!' => push(Token::Not, 1, &mut i, &mut column),
            '&' => push(Token::And, 1, &mut i, &mut column),
            '|' => push(Token::Or, 1, &mut i, &mut column),
            '-' if chars.get(i + 1) == Some(&'>') => push(Token::Implies, 2, &mut i, &mut column),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push(Token::Iff, 3, &mut i, &mut column)
            }
            'T' => push(Token::True, 1, &mut i, &mut column),
            'F' => push(Token::False, 1, &mut i, &mut column),
            'x' => {
                let digits: String = chars[i + 1..]
                    .iter()
                    .take_while(|c| c.is_ascii_digit())
                    .collect();
                let var = digits
                    .parse::<u32>()
                    .ok()
                    .and_then(Variable::try_new)
                    .ok_or_else(|| ParseError::new(line, column, "expected a variable `x<id>` with id >= 1"))?;
                push(Token::Var(var), 1 + digits.len(), &mut i, &mut column);
            }
            other => {
                return Err(ParseError::new(line, column, format!("unexpected character `{other}`")));
            }
        }
        if i < chars.len() && matches!(chars[i - 1], 'T' | 'F' | '0'..='9')
            && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
        {
            return Err(ParseError::new(line, column, "identifier runs into the next token"));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.token)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map(|t| (t.line, t.column))
            .unwrap_or(self.end)
    }

    fn error(&self, msg: &str) -> ParseError {
        let (l, c) = self.here();
        ParseError::new(l, c, msg)
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<PropFormula, ParseError> {
        let mut lhs = self.implies()?;
        while self.eat(&Token::Iff) {
            let rhs = self.implies()?;
            lhs = PropFormula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<PropFormula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Token::Implies) {
            let rhs = self.implies()?;
            return Ok(PropFormula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<PropFormula, ParseError> {
        let mut items = vec![self.and()?];
        while self.eat(&Token::Or) {
            items.push(self.and()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            PropFormula::Or(items)
        })
    }

    fn and(&mut self) -> Result<PropFormula, ParseError> {
        let mut items = vec![self.unary()?];
        while self.eat(&Token::And) {
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            PropFormula::And(items)
        })
    }

    fn unary(&mut self) -> Result<PropFormula, ParseError> {
        if self.eat(&Token::Not) {
            return Ok(PropFormula::not(self.unary()?));
        }
        let tok = self.peek().cloned();
        match tok {
            Some(Token::True) => {
                self.pos += 1;
                Ok(PropFormula::True)
            }
            Some(Token::False) => {
                self.pos += 1;
                Ok(PropFormula::False)
            }
            Some(Token::Var(v)) => {
                self.pos += 1;
                Ok(PropFormula::Atom(v))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Token::RParen) {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(_) => Err(self.error("expected a formula")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses a formula. Errors carry the 1-based line and column.
pub fn parse_formula(text: &str) -> Result<PropFormula, ParseError> {
    let tokens = tokenize(text)?;
    let end = text
        .lines()
        .enumerate()
        .last()
        .map(|(i, l)| (i + 1, l.chars().count() + 1))
        .unwrap_or((1, 1));
    let mut p = Parser { tokens, pos: 0, end };
    let f = p.iff()?;
    if p.pos != p.tokens.len() {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}

const PREC_IFF: u8 = 1;
const PREC_IMPLIES: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_NOT: u8 = 5;
const PREC_ATOM: u8 = 6;

fn precedence(f: &PropFormula) -> u8 {
    match f {
        PropFormula::Iff(..) => PREC_IFF,
        PropFormula::Implies(..) => PREC_IMPLIES,
        PropFormula::Or(cs) | PropFormula::And(cs) if cs.len() == 1 => precedence(&cs[0]),
        PropFormula::Or(_) => PREC_OR,
        PropFormula::And(_) => PREC_AND,
        PropFormula::Not(_) => PREC_NOT,
        _ => PREC_ATOM,
    }
}

fn emit_into(f: &PropFormula, min_prec: u8, out: &mut String) {
    let parens = precedence(f) < min_prec;
    if parens {
        out.push('(');
    }
    match f {
        PropFormula::True => out.push('T'),
        PropFormula::False => out.push('F'),
        PropFormula::Atom(v) => {
            out.push('x');
            out.push_str(&v.id().to_string());
        }
        PropFormula::Not(c) => {
            out.push('!');
            emit_into(c, PREC_NOT, out);
        }
        PropFormula::And(cs) | PropFormula::Or(cs) if cs.len() == 1 => emit_into(&cs[0], min_prec, out),
        PropFormula::And(cs) => emit_chain(cs, " & ", PREC_NOT, out),
        PropFormula::Or(cs) => emit_chain(cs, " | ", PREC_AND, out),
        PropFormula::Implies(a, b) => {
            emit_into(a, PREC_OR, out);
            out.push_str(" -> ");
            emit_into(b, PREC_IMPLIES, out);
        }
        PropFormula::Iff(a, b) => {
            emit_into(a, PREC_IFF, out);
            out.push_str(" <-> ");
            emit_into(b, PREC_IMPLIES, out);
        }
    }
    if parens {
        out.push(')');
    }
}

fn emit_chain(children: &[PropFormula], sep: &str, child_prec: u8, out: &mut String) {
    for (i, c) in children.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        emit_into(c, child_prec, out);
    }
}

/// Canonical text form: single spaces around binary operators, minimal parentheses.
pub fn emit_formula(f: &PropFormula) -> String {
    let mut out = String::new();
    emit_into(f, 0, &mut out);
    out
}
