use crate::kripke::{KripkeStructure, StateSet, Trace};

use super::enf::{to_enf, NormalFormula};
use super::formula::Formula;
use super::{CheckError, SpecEntry};

/// Outcome of checking one formula against a structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    /// Every initial state satisfies the formula.
    pub holds: bool,
    pub sat: StateSet,
    pub formula: Formula,
}

/// The set of states satisfying `f`.
pub fn sat_set(ks: &KripkeStructure, f: &Formula) -> Result<StateSet, CheckError> {
    if let Some(missing) = f.atoms().into_iter().find(|a| ks.label(a).is_none()) {
        return Err(CheckError::UnknownAtom(missing.to_string()));
    }
    Ok(sat_normal(ks, &to_enf(f)))
}

fn sat_normal(ks: &KripkeStructure, f: &NormalFormula) -> StateSet {
    match f {
        NormalFormula::True => ks.all_states(),
        NormalFormula::Atom(name) => ks.label(name).cloned().expect("atoms are validated before evaluation"),
        NormalFormula::Not(g) => sat_normal(ks, g).complement(),
        NormalFormula::And(a, b) => sat_normal(ks, a).intersection(&sat_normal(ks, b)),
        NormalFormula::EX(g) => ks.pre_exists(&sat_normal(ks, g)),
        NormalFormula::EU(a, b) => exists_until(ks, &sat_normal(ks, a), sat_normal(ks, b)),
        NormalFormula::EG(g) => exists_globally(ks, sat_normal(ks, g)),
    }
}

/// Least fixpoint of `Z = target ∪ (hold ∩ pre_exists(Z))`. Only the states
/// added in the previous round can contribute new predecessors, so each
/// round takes the preimage of that frontier alone.
fn exists_until(ks: &KripkeStructure, hold: &StateSet, target: StateSet) -> StateSet {
    let mut reached = target;
    let mut frontier = reached.clone();
    while !frontier.is_empty() {
        let mut added = ks.pre_exists(&frontier);
        added.intersect_with(hold);
        added.difference_with(&reached);
        reached.union_with(&added);
        frontier = added;
    }
    reached
}

/// Greatest fixpoint of `Z = hold ∩ pre_exists(Z)`.
fn exists_globally(ks: &KripkeStructure, hold: StateSet) -> StateSet {
    let mut current = hold.clone();
    loop {
        let next = hold.intersection(&ks.pre_exists(&current));
        if next == current {
            return current;
        }
        current = next;
    }
}

pub fn check(ks: &KripkeStructure, spec: &SpecEntry) -> Result<CheckResult, CheckError> {
    let sat = sat_set(ks, &spec.formula)?;
    Ok(CheckResult {
        holds: ks.initial().is_subset(&sat),
        sat,
        formula: spec.formula.clone(),
    })
}

/// Builds a counterexample for a failed check.
///
/// * `AG φ`: shortest path from an initial state into a `¬φ` state.
/// * `!EF φ`: shortest path from an initial state into a `φ` state.
/// * `AF φ`: lasso staying in `¬φ` forever.
/// * propositional formulas: a single violating initial state.
/// * anything else: a single violating initial state with a note saying
///   no path-shaped counterexample is produced.
pub fn counterexample(
    ks: &KripkeStructure,
    spec: &SpecEntry,
    result: &CheckResult,
) -> Result<Option<Trace>, CheckError> {
    if result.formula != spec.formula
        || result.sat.universe() != ks.state_count()
        || result.holds != ks.initial().is_subset(&result.sat)
    {
        return Err(CheckError::ResultMismatch);
    }
    if result.holds {
        return Ok(None);
    }
    let trace = match &spec.formula {
        Formula::AG(inner) => {
            let bad = sat_set(ks, inner)?.complement();
            ks.shortest_path(ks.initial(), &bad)
        }
        Formula::Not(outer) if matches!(**outer, Formula::EF(_)) => {
            let Formula::EF(inner) = &**outer else { unreachable!() };
            ks.shortest_path(ks.initial(), &sat_set(ks, inner)?)
        }
        Formula::AF(inner) => {
            let avoid = sat_set(ks, inner)?.complement();
            ks.find_lasso(ks.initial(), &avoid)
        }
        f => {
            let violating = ks
                .initial()
                .difference(&result.sat)
                .first()
                .expect("a failed check has a violating initial state");
            let mut trace = ks.trace_of(&[violating], None);
            if !f.is_propositional() {
                trace.note = Some("no path-style counterexample for this formula shape".into());
            }
            Some(trace)
        }
    };
    Ok(Some(trace.expect("a failed AG/AF check always has a path witness")))
}
