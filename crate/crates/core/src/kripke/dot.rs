use std::fmt::Write;

use thiserror::Error;

use super::KripkeStructure;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown atom '{0}'")]
pub struct UnknownAtom(pub String);

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl KripkeStructure {
    /// Renders the structure as a Graphviz digraph. Each node lists its
    /// snapshot plus whichever of the `annotate` atoms hold there; initial
    /// states are drawn with a double border and an incoming arrow.
    pub fn export_dot(&self, annotate: &[&str]) -> Result<String, UnknownAtom> {
        let labels = annotate
            .iter()
            .map(|&name| {
                self.label(name)
                    .map(|set| (name, set))
                    .ok_or_else(|| UnknownAtom(name.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;

        let mut out = String::new();
        out.push_str("digraph kripke {\n");
        out.push_str("  node [shape=box, fontname=\"monospace\"];\n");
        for s in 0..self.state_count() {
            let mut label = format!("s{s}");
            for (name, value) in self.snapshot(s) {
                write!(label, "\\n{}={}", escape(name), escape(&value.to_string())).unwrap();
            }
            for (name, set) in &labels {
                if set.contains(s) {
                    write!(label, "\\n[{}]", escape(name)).unwrap();
                }
            }
            let extra = if self.initial().contains(s) {
                ", peripheries=2"
            } else {
                ""
            };
            writeln!(out, "  s{s} [label=\"{label}\"{extra}];").unwrap();
        }
        for s in self.initial().iter() {
            writeln!(out, "  init{s} [shape=point, label=\"\"];").unwrap();
            writeln!(out, "  init{s} -> s{s};").unwrap();
        }
        for s in 0..self.state_count() {
            for t in self.successors(s) {
                writeln!(out, "  s{s} -> s{t};").unwrap();
            }
        }
        out.push_str("}\n");
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loop_dot() {
        let ks = KripkeStructure::from_parts(1, &[0], &[(0, 0)], vec![("p".into(), vec![0])]).unwrap();
        let dot = ks.export_dot(&["p"]).unwrap();
        assert_eq!(dot.matches(" -> s0;").count(), 2); // init arrow + self-loop
        assert_eq!(dot.matches("s0 -> s0;").count(), 1);
        assert!(dot.contains("label=\"s0\\nstate=0\\n[p]\""));
        assert!(dot.starts_with("digraph kripke {"));
        assert!(dot.ends_with("}\n"));
    }

    #[test]
    fn unknown_atom_is_an_error() {
        let ks = KripkeStructure::from_parts(1, &[0], &[(0, 0)], vec![]).unwrap();
        assert_eq!(ks.export_dot(&["nosuch"]).unwrap_err(), UnknownAtom("nosuch".into()));
    }
}
