use std::io::{self, Write};

use opaque_sat::Error;
use serde_json::{json, Map, Value};

pub const EXIT_OK: u8 = 0;
/// The property asked about does not hold, or the input is not a family member.
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// What a command prints, in both renderings, and how it exits.
pub struct Report {
    pub human: String,
    pub json: Value,
    pub code: u8,
}

impl Report {
    /// `payload` must be a JSON object; the tool name, version and command are prepended.
    pub fn new(command: &str, payload: Value, human: String) -> Self {
        let mut obj = Map::new();
        obj.insert("tool".into(), json!("opaque-sat"));
        obj.insert("version".into(), json!(VERSION));
        obj.insert("command".into(), json!(command));
        if let Value::Object(fields) = payload {
            obj.extend(fields);
        }
        Report {
            human,
            json: Value::Object(obj),
            code: EXIT_OK,
        }
    }

    /// Pre-rendered output used for both modes, such as CSV or formula text.
    pub fn raw(text: String, json: Value) -> Self {
        Report {
            human: text,
            json,
            code: EXIT_OK,
        }
    }

    pub fn with_code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }

    pub fn print(&self, json: bool) -> io::Result<()> {
        let mut out = io::stdout().lock();
        if json {
            serde_json::to_writer_pretty(&mut out, &self.json)?;
            out.write_all(b"\n")?;
        } else {
            out.write_all(self.human.as_bytes())?;
            if !self.human.is_empty() && !self.human.ends_with('\n') {
                out.write_all(b"\n")?;
            }
        }
        out.flush()
    }
}

/// A command that could not run; the message goes to standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::ReductionHookFailure(_) => EXIT_INPUT,
            Error::NotAStrongBackdoor(_) => EXIT_NEGATIVE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input(e.to_string())
    }
}
