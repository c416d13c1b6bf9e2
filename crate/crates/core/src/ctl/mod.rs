//! CTL formulas, parsing, and explicit-state checking by fixpoint labeling.

mod check;
mod enf;
mod formula;
mod parser;
mod trace_format;

use thiserror::Error;

pub use check::{check, counterexample, sat_set, CheckResult};
pub use enf::{to_enf, NormalFormula};
pub use formula::{CmpOp, Comparison, Formula};
pub use parser::{parse_formula, parse_spec_file, SyntaxError};
pub use trace_format::{format_trace, TraceStyle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("unknown atom '{0}'")]
    UnknownAtom(String),
    #[error("check result does not belong to this structure and spec")]
    ResultMismatch,
}

/// One `SPEC` line: an optional label, the text as written, and its parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecEntry {
    pub name: Option<String>,
    pub source_text: String,
    pub formula: Formula,
}

impl SpecEntry {
    pub fn new(name: Option<&str>, source_text: &str) -> Result<Self, SyntaxError> {
        Ok(Self {
            name: name.map(str::to_string),
            source_text: source_text.to_string(),
            formula: parse_formula(source_text)?,
        })
    }

    /// The label, or `spec<N>` (1-based) when the entry is unnamed.
    pub fn display_name(&self, position: usize) -> String {
        self.name.clone().unwrap_or_else(|| format!("spec{}", position + 1))
    }
}
