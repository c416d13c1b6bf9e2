//! Finite Kripke structures: construction by breadth-first reachability,
//! state sets, preimages, paths and DOT export.

mod dot;
mod path;
mod state_set;

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use dot::UnknownAtom;
pub use path::{Trace, TraceStep};
pub use state_set::StateSet;

/// A variable value as shown in traces and graph labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(i64),
    Sym(Cow<'static, str>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Sym(s) => f.write_str(s),
        }
    }
}

/// A programmatic description of a transition system.
///
/// `successors` must return a nonempty set for every reachable state and
/// `encode` must be injective on the reachable states; the builder uses the
/// encoding both for deduplication and to order successor sets.
pub trait ModelProgram {
    type State;

    fn initial(&self) -> Vec<Self::State>;

    fn successors(&self, state: &Self::State) -> Vec<Self::State>;

    fn encode(&self, state: &Self::State) -> Vec<u8>;

    /// Names of the variables reported by [`ModelProgram::snapshot`].
    fn variables(&self) -> Vec<String>;

    /// Values aligned with [`ModelProgram::variables`].
    fn snapshot(&self, state: &Self::State) -> Vec<Value>;
}

/// A named atomic proposition over the model's states.
pub struct AtomSpec<S> {
    pub name: String,
    predicate: Box<dyn Fn(&S) -> bool + Send + Sync>,
}

impl<S> AtomSpec<S> {
    pub fn new(name: impl Into<String>, predicate: impl Fn(&S) -> bool + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            predicate: Box::new(predicate),
        }
    }

    pub fn holds(&self, state: &S) -> bool {
        (self.predicate)(state)
    }
}

impl<S> fmt::Debug for AtomSpec<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AtomSpec").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildLimits {
    pub max_states: usize,
    pub max_transitions: usize,
}

impl Default for BuildLimits {
    fn default() -> Self {
        Self {
            max_states: 10_000_000,
            max_transitions: 100_000_000,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error(
        "state space exceeds limits ({states} states, {transitions} transitions explored; \
         caps are {max_states} states, {max_transitions} transitions)"
    )]
    CapExceeded {
        states: usize,
        transitions: usize,
        max_states: usize,
        max_transitions: usize,
    },
    #[error("state has no successors: {snapshot}")]
    NonTotal { snapshot: String },
    #[error("duplicate atom '{0}'")]
    DuplicateAtom(String),
    #[error("model has no initial states")]
    NoInitialStates,
    #[error("build limits must be at least 1")]
    InvalidLimits,
    #[error("state index {index} out of range for {state_count} states")]
    StateOutOfRange { index: usize, state_count: usize },
}

/// A finite state graph with a total transition relation, initial states
/// and atom labels. Immutable once built.
#[derive(Debug, Clone)]
pub struct KripkeStructure {
    state_count: usize,
    initial: StateSet,
    fwd_offsets: Vec<usize>,
    fwd_targets: Vec<u32>,
    bwd_offsets: Vec<usize>,
    bwd_targets: Vec<u32>,
    atom_names: Vec<String>,
    atom_index: HashMap<String, usize>,
    labels: Vec<StateSet>,
    variables: Vec<String>,
    values: Vec<Box<[Value]>>,
}

/// Materializes the reachable fragment of `program`.
///
/// States are numbered in BFS discovery order. Initial states and every
/// successor set are visited in ascending encoding order, which makes the
/// numbering independent of the order the model returns states in.
pub fn build_structure<M: ModelProgram>(
    program: &M,
    atoms: &[AtomSpec<M::State>],
    limits: BuildLimits,
) -> Result<KripkeStructure, BuildError> {
    if limits.max_states == 0 || limits.max_transitions == 0 {
        return Err(BuildError::InvalidLimits);
    }
    let mut atom_index = HashMap::with_capacity(atoms.len());
    for (i, atom) in atoms.iter().enumerate() {
        if atom_index.insert(atom.name.clone(), i).is_some() {
            return Err(BuildError::DuplicateAtom(atom.name.clone()));
        }
    }

    let mut initial = sorted_by_encoding(program, program.initial());
    if initial.is_empty() {
        return Err(BuildError::NoInitialStates);
    }
    if initial.len() > limits.max_states {
        return Err(BuildError::CapExceeded {
            states: initial.len(),
            transitions: 0,
            max_states: limits.max_states,
            max_transitions: limits.max_transitions,
        });
    }

    let mut index: HashMap<Box<[u8]>, u32> = HashMap::new();
    let mut states: Vec<M::State> = Vec::with_capacity(initial.len());
    for (key, state) in initial.drain(..) {
        index.insert(key, states.len() as u32);
        states.push(state);
    }
    let initial_count = states.len();

    let mut fwd_offsets = vec![0usize];
    let mut fwd_targets: Vec<u32> = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let succs = sorted_by_encoding(program, program.successors(&states[next]));
        if succs.is_empty() {
            return Err(BuildError::NonTotal {
                snapshot: render_snapshot(&program.variables(), &program.snapshot(&states[next])),
            });
        }
        let row_start = fwd_targets.len();
        for (key, succ) in succs {
            let target = match index.get(&key) {
                Some(&t) => t,
                None => {
                    if states.len() >= limits.max_states {
                        return Err(BuildError::CapExceeded {
                            states: states.len() + 1,
                            transitions: fwd_targets.len(),
                            max_states: limits.max_states,
                            max_transitions: limits.max_transitions,
                        });
                    }
                    let t = states.len() as u32;
                    index.insert(key, t);
                    states.push(succ);
                    t
                }
            };
            if fwd_targets.len() >= limits.max_transitions {
                return Err(BuildError::CapExceeded {
                    states: states.len(),
                    transitions: fwd_targets.len() + 1,
                    max_states: limits.max_states,
                    max_transitions: limits.max_transitions,
                });
            }
            fwd_targets.push(target);
        }
        fwd_targets[row_start..].sort_unstable();
        fwd_offsets.push(fwd_targets.len());
        next += 1;
    }
    drop(index);

    let state_count = states.len();
    let labels = atoms
        .iter()
        .map(|atom| {
            StateSet::from_indices(
                state_count,
                states.iter().enumerate().filter(|(_, s)| atom.holds(s)).map(|(i, _)| i),
            )
        })
        .collect();
    let values = states.iter().map(|s| program.snapshot(s).into_boxed_slice()).collect();
    let (bwd_offsets, bwd_targets) = transpose(state_count, &fwd_offsets, &fwd_targets);

    Ok(KripkeStructure {
        state_count,
        initial: StateSet::from_indices(state_count, 0..initial_count),
        fwd_offsets,
        fwd_targets,
        bwd_offsets,
        bwd_targets,
        atom_names: atoms.iter().map(|a| a.name.clone()).collect(),
        atom_index,
        labels,
        variables: program.variables(),
        values,
    })
}

fn sorted_by_encoding<M: ModelProgram>(program: &M, states: Vec<M::State>) -> Vec<(Box<[u8]>, M::State)> {
    let mut keyed: Vec<_> = states
        .into_iter()
        .map(|s| (program.encode(&s).into_boxed_slice(), s))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    keyed
}

fn render_snapshot(variables: &[String], values: &[Value]) -> String {
    variables
        .iter()
        .zip(values)
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn transpose(state_count: usize, offsets: &[usize], targets: &[u32]) -> (Vec<usize>, Vec<u32>) {
    let mut in_degree = vec![0usize; state_count];
    for &t in targets {
        in_degree[t as usize] += 1;
    }
    let mut bwd_offsets = Vec::with_capacity(state_count + 1);
    bwd_offsets.push(0);
    for d in &in_degree {
        bwd_offsets.push(bwd_offsets.last().unwrap() + d);
    }
    let mut fill = bwd_offsets[..state_count].to_vec();
    let mut bwd_targets = vec![0u32; targets.len()];
    // sources are visited in ascending order, so each row comes out sorted
    for s in 0..state_count {
        for &t in &targets[offsets[s]..offsets[s + 1]] {
            bwd_targets[fill[t as usize]] = s as u32;
            fill[t as usize] += 1;
        }
    }
    (bwd_offsets, bwd_targets)
}

impl KripkeStructure {
    /// Builds a structure directly from an explicit edge list, keeping every
    /// state (reachable or not). Used for hand-written and randomly generated
    /// structures. Each state gets a single `state` variable holding its index.
    pub fn from_parts(
        state_count: usize,
        initial: &[usize],
        edges: &[(usize, usize)],
        labels: Vec<(String, Vec<usize>)>,
    ) -> Result<Self, BuildError> {
        let check = |index: usize| {
            if index < state_count {
                Ok(())
            } else {
                Err(BuildError::StateOutOfRange { index, state_count })
            }
        };
        if initial.is_empty() {
            return Err(BuildError::NoInitialStates);
        }
        for &i in initial {
            check(i)?;
        }
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); state_count];
        for &(s, t) in edges {
            check(s)?;
            check(t)?;
            rows[s].push(t as u32);
        }
        let mut fwd_offsets = vec![0];
        let mut fwd_targets = Vec::with_capacity(edges.len());
        for (s, row) in rows.iter_mut().enumerate() {
            if row.is_empty() {
                return Err(BuildError::NonTotal {
                    snapshot: format!("state={s}"),
                });
            }
            row.sort_unstable();
            row.dedup();
            fwd_targets.extend_from_slice(row);
            fwd_offsets.push(fwd_targets.len());
        }
        let mut atom_index = HashMap::new();
        let mut atom_names = Vec::new();
        let mut label_sets = Vec::new();
        for (name, members) in labels {
            if atom_index.insert(name.clone(), atom_names.len()).is_some() {
                return Err(BuildError::DuplicateAtom(name));
            }
            for &m in &members {
                check(m)?;
            }
            atom_names.push(name);
            label_sets.push(StateSet::from_indices(state_count, members));
        }
        let (bwd_offsets, bwd_targets) = transpose(state_count, &fwd_offsets, &fwd_targets);
        Ok(Self {
            state_count,
            initial: StateSet::from_indices(state_count, initial.iter().copied()),
            fwd_offsets,
            fwd_targets,
            bwd_offsets,
            bwd_targets,
            atom_names,
            atom_index,
            labels: label_sets,
            variables: vec!["state".to_string()],
            values: (0..state_count)
                .map(|i| vec![Value::Int(i as i64)].into_boxed_slice())
                .collect(),
        })
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn transition_count(&self) -> usize {
        self.fwd_targets.len()
    }

    pub fn initial(&self) -> &StateSet {
        &self.initial
    }

    /// Successors of `state` in ascending index order.
    pub fn successors(&self, state: usize) -> impl Iterator<Item = usize> + '_ {
        self.fwd_targets[self.fwd_offsets[state]..self.fwd_offsets[state + 1]]
            .iter()
            .map(|&t| t as usize)
    }

    /// Predecessors of `state` in ascending index order.
    pub fn predecessors(&self, state: usize) -> impl Iterator<Item = usize> + '_ {
        self.bwd_targets[self.bwd_offsets[state]..self.bwd_offsets[state + 1]]
            .iter()
            .map(|&t| t as usize)
    }

    pub fn has_transition(&self, from: usize, to: usize) -> bool {
        self.fwd_targets[self.fwd_offsets[from]..self.fwd_offsets[from + 1]]
            .binary_search(&(to as u32))
            .is_ok()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atom_names
    }

    /// States labeled with `atom`, or `None` if the atom was never registered.
    pub fn label(&self, atom: &str) -> Option<&StateSet> {
        self.atom_index.get(atom).map(|&i| &self.labels[i])
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn values(&self, state: usize) -> &[Value] {
        &self.values[state]
    }

    /// Variable/value pairs captured for `state` at build time.
    pub fn snapshot(&self, state: usize) -> impl Iterator<Item = (&str, &Value)> {
        self.variables.iter().map(String::as_str).zip(self.values[state].iter())
    }

    pub fn empty_set(&self) -> StateSet {
        StateSet::empty(self.state_count)
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.state_count)
    }

    /// `{ s | some successor of s is in target }`.
    pub fn pre_exists(&self, target: &StateSet) -> StateSet {
        debug_assert_eq!(target.universe(), self.state_count);
        let mut out = self.empty_set();
        for t in target.iter() {
            for p in self.predecessors(t) {
                out.insert(p);
            }
        }
        out
    }

    /// `{ s | every successor of s is in target }`.
    pub fn pre_forall(&self, target: &StateSet) -> StateSet {
        self.pre_exists(&target.complement()).complement()
    }
}
