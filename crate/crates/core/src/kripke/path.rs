use super::{KripkeStructure, StateSet, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub state: usize,
    pub values: Vec<(String, Value)>,
}

/// A finite path through a structure, optionally closed into a lasso.
///
/// When `loop_back` is `Some(k)`, the last step has a transition back to
/// `steps[k]`, so the trace denotes the infinite path
/// `steps[..k] (steps[k..])^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub loop_back: Option<usize>,
    pub note: Option<String>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn states(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.state).collect()
    }

    pub fn last_state(&self) -> Option<usize> {
        self.steps.last().map(|s| s.state)
    }

    /// Value of `variable` at step `step`.
    pub fn value(&self, step: usize, variable: &str) -> Option<&Value> {
        self.steps[step]
            .values
            .iter()
            .find(|(n, _)| n == variable)
            .map(|(_, v)| v)
    }
}

impl KripkeStructure {
    /// Wraps a sequence of state indices into a [`Trace`] with snapshots.
    pub fn trace_of(&self, states: &[usize], loop_back: Option<usize>) -> Trace {
        Trace {
            steps: states
                .iter()
                .map(|&state| TraceStep {
                    state,
                    values: self.snapshot(state).map(|(n, v)| (n.to_string(), v.clone())).collect(),
                })
                .collect(),
            loop_back,
            note: None,
        }
    }

    /// Checks that consecutive steps (and the loop-back edge, if any)
    /// follow the transition relation.
    pub fn is_valid_trace(&self, trace: &Trace) -> bool {
        if trace.steps.is_empty() || trace.steps.iter().any(|s| s.state >= self.state_count) {
            return false;
        }
        let consecutive = trace
            .steps
            .windows(2)
            .all(|w| self.has_transition(w[0].state, w[1].state));
        let loop_ok = match trace.loop_back {
            None => true,
            Some(k) => {
                k < trace.steps.len() && self.has_transition(trace.steps.last().unwrap().state, trace.steps[k].state)
            }
        };
        consecutive && loop_ok
    }

    /// Breadth-first shortest path from any state in `from` to any state in
    /// `to`. Layers are expanded in ascending index order and the lowest
    /// matching index in the first layer that meets `to` is chosen.
    pub fn shortest_path(&self, from: &StateSet, to: &StateSet) -> Option<Trace> {
        let path = self.shortest_path_indices(from, to, None)?;
        Some(self.trace_of(&path, None))
    }

    fn shortest_path_indices(&self, from: &StateSet, to: &StateSet, within: Option<&StateSet>) -> Option<Vec<usize>> {
        const UNSEEN: usize = usize::MAX;
        let allowed = |s: usize| within.is_none_or(|w| w.contains(s));
        let mut parent = vec![UNSEEN; self.state_count];
        let mut layer: Vec<usize> = from.iter().filter(|&s| allowed(s)).collect();
        for &s in &layer {
            parent[s] = s;
        }
        while !layer.is_empty() {
            if let Some(&hit) = layer.iter().find(|&&s| to.contains(s)) {
                let mut path = vec![hit];
                let mut cur = hit;
                while parent[cur] != cur {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            let mut next = Vec::new();
            for &s in &layer {
                for t in self.successors(s) {
                    if parent[t] == UNSEEN && allowed(t) {
                        parent[t] = s;
                        next.push(t);
                    }
                }
            }
            next.sort_unstable();
            layer = next;
        }
        None
    }

    /// The states of `within` from which some infinite path stays inside
    /// `within` forever (greatest fixpoint of `within ∩ pre_exists(·)`).
    pub fn infinite_core(&self, within: &StateSet) -> StateSet {
        let mut core = within.clone();
        loop {
            let next = within.intersection(&self.pre_exists(&core));
            if next == core {
                return core;
            }
            core = next;
        }
    }

    /// Finds a lasso that starts in `from`, stays in `within`, and closes a
    /// cycle inside `within`.
    ///
    /// The start is the lowest-index state of `from` that admits such a
    /// lasso. From there the walk repeatedly takes the lowest-index
    /// successor that can still stay inside `within` forever, until a state
    /// repeats; the first repeated state is the loop-back point.
    pub fn find_lasso(&self, from: &StateSet, within: &StateSet) -> Option<Trace> {
        let core = self.infinite_core(within);
        let start = from.intersection(&core).first()?;
        let mut position = vec![usize::MAX; self.state_count];
        let mut states = Vec::new();
        let mut cur = start;
        while position[cur] == usize::MAX {
            position[cur] = states.len();
            states.push(cur);
            cur = self
                .successors(cur)
                .find(|&t| core.contains(t))
                .expect("every core state has a successor in the core");
        }
        Some(self.trace_of(&states, Some(position[cur])))
    }
}
