use std::fmt::Write;
use std::str::FromStr;

use crate::kripke::Trace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceStyle {
    /// Every variable at every step.
    Full,
    /// All variables at the first step, then only the ones that changed.
    Delta,
}

impl FromStr for TraceStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(TraceStyle::Full),
            "delta" => Ok(TraceStyle::Delta),
            other => Err(format!("unknown trace style '{other}' (expected full or delta)")),
        }
    }
}

/// Renders a trace in a SMV-style layout. Steps are numbered from 1.
pub fn format_trace(trace: &Trace, style: TraceStyle) -> String {
    let mut out = String::new();
    if let Some(note) = &trace.note {
        writeln!(out, "-- {note} --").unwrap();
    }
    for (i, step) in trace.steps.iter().enumerate() {
        if trace.loop_back == Some(i) {
            writeln!(out, "-- loop starts at step {} --", i + 1).unwrap();
        }
        writeln!(out, "-> State: {} <-", i + 1).unwrap();
        let previous = match style {
            TraceStyle::Delta if i > 0 => Some(&trace.steps[i - 1].values),
            _ => None,
        };
        for (j, (name, value)) in step.values.iter().enumerate() {
            let unchanged = previous.is_some_and(|prev| prev.get(j).is_some_and(|(n, v)| n == name && v == value));
            if !unchanged {
                writeln!(out, "  {name} = {value}").unwrap();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{TraceStep, Value};

    fn step(state: usize, wait: i64) -> TraceStep {
        TraceStep {
            state,
            values: vec![("turn".into(), Value::Int(1)), ("light0.wait".into(), Value::Int(wait))],
        }
    }

    #[test]
    fn full_single_step() {
        let t = Trace {
            steps: vec![step(0, 0)],
            loop_back: None,
            note: None,
        };
        assert_eq!(
            format_trace(&t, TraceStyle::Full),
            "-> State: 1 <-\n  turn = 1\n  light0.wait = 0\n"
        );
    }

    #[test]
    fn delta_shows_only_changes() {
        let t = Trace {
            steps: vec![step(0, 1), step(1, 2), step(2, 3)],
            loop_back: Some(1),
            note: None,
        };
        assert_eq!(
            format_trace(&t, TraceStyle::Delta),
            "-> State: 1 <-\n  turn = 1\n  light0.wait = 1\n\
             -- loop starts at step 2 --\n-> State: 2 <-\n  light0.wait = 2\n\
             -> State: 3 <-\n  light0.wait = 3\n"
        );
        assert_eq!(format_trace(&t, TraceStyle::Full).matches("turn = 1").count(), 3);
    }
}
