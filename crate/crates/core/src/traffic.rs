//! The adaptive four-way signal controller as a finite transition system.
//!
//! One state per clock tick. The green signal rotates NORTH (0), WEST (1),
//! SOUTH (2), EAST (3). When a green expires, the next signal receives a
//! green whose length depends on its queue, `min(n × t_v, T_thr)` ticks,
//! where `n` is drawn nondeterministically from `0..=q_max`. Each signal
//! carries a wait counter: ticks since it last showed green.

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ctl::{parse_spec_file, CmpOp, Comparison, SpecEntry};
use crate::kripke::{AtomSpec, ModelProgram, Value};

/// Ticks for one vehicle to cross the intersection.
pub const VEHICLE_CROSSING_TICKS: u32 = 1;

pub const SIGNAL_COUNT: usize = 4;

pub const SIGNAL_NAMES: [&str; SIGNAL_COUNT] = ["NORTH", "WEST", "SOUTH", "EAST"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrafficParams {
    /// Longest green any signal may receive, in ticks.
    pub t_thr_ticks: u32,
    /// Largest queue length drawn at a handover.
    pub q_max: u32,
    /// Wait counters saturate here.
    pub wait_cap: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("t_thr_ticks must be at least 1")]
    ZeroThreshold,
    #[error("wait_cap {wait_cap} is too small; need at least {required} for t_thr_ticks")]
    WaitCapTooSmall { wait_cap: u32, required: u32 },
}

impl TrafficParams {
    /// Parameters with the default wait cap, `3 × (t_thr + 1) + 3`.
    pub fn new(t_thr_ticks: u32, q_max: u32) -> Self {
        Self {
            t_thr_ticks,
            q_max,
            wait_cap: 3 * (t_thr_ticks + 1) + 3,
        }
    }

    /// Default parameters: 18-tick threshold, queues of up to 20.
    pub fn full_scale() -> Self {
        Self::new(18, 20)
    }

    /// A small configuration that checks in well under a second.
    pub fn ci() -> Self {
        Self::new(5, 7)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.t_thr_ticks == 0 {
            return Err(ParamError::ZeroThreshold);
        }
        let required = 3 * (self.t_thr_ticks + 1) + 1;
        if self.wait_cap < required {
            return Err(ParamError::WaitCapTooSmall {
                wait_cap: self.wait_cap,
                required,
            });
        }
        Ok(())
    }

    /// Longest possible wait with correct green durations: three full
    /// greens of `t_thr` ticks.
    pub fn wait_bound(&self) -> u32 {
        3 * self.t_thr_ticks
    }

    /// Longest possible wait when every green overruns by one tick.
    pub fn buggy_wait(&self) -> u32 {
        3 * (self.t_thr_ticks + 1)
    }
}

/// Counter convention of the controller.
///
/// `Fixed` loads the countdown with `duration - 1`, so a green lasts exactly
/// `min(n, T_thr)` ticks (at least one). `Buggy` loads it with
/// `min(n, T_thr)` itself, so counting down from `T_thr` to zero inclusive
/// yields `T_thr + 1` ticks of green.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Buggy,
    Fixed,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Buggy => "buggy",
            Variant::Fixed => "fixed",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "buggy" => Ok(Variant::Buggy),
            "fixed" => Ok(Variant::Fixed),
            other => Err(format!("unknown variant '{other}' (expected buggy or fixed)")),
        }
    }
}

/// Green time granted to a signal with `n` queued vehicles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreenPlan {
    pub n: u32,
    pub t_cal: u32,
    pub duration_ticks: u32,
}

impl GreenPlan {
    pub fn new(n: u32, t_thr_ticks: u32, variant: Variant) -> Self {
        let t_cal = n.saturating_mul(VEHICLE_CROSSING_TICKS);
        let cv = t_cal.min(t_thr_ticks);
        let duration_ticks = match variant {
            Variant::Fixed => cv.max(1),
            Variant::Buggy => cv + 1,
        };
        Self {
            n,
            t_cal,
            duration_ticks,
        }
    }

    /// Countdown value loaded at the start of the green: the number of
    /// further ticks after the current one.
    pub fn initial_counter(&self) -> u32 {
        self.duration_ticks - 1
    }
}

pub fn green_ticks(n: u32, params: &TrafficParams, variant: Variant) -> u32 {
    GreenPlan::new(n, params.t_thr_ticks, variant).duration_ticks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ControllerState {
    pub turn: u8,
    pub counter: u32,
    pub wait: [u32; SIGNAL_COUNT],
}

impl ControllerState {
    pub fn is_green(&self, signal: usize) -> bool {
        self.turn as usize == signal
    }
}

fn distinct_counters(params: &TrafficParams, variant: Variant) -> Vec<u32> {
    let mut counters: Vec<u32> = (0..=params.q_max)
        .map(|n| GreenPlan::new(n, params.t_thr_ticks, variant).initial_counter())
        .collect();
    counters.sort_unstable();
    counters.dedup();
    counters
}

/// Start states: NORTH is green with every possible initial countdown and
/// all wait counters at zero.
pub fn initial_states(params: &TrafficParams, variant: Variant) -> Vec<ControllerState> {
    distinct_counters(params, variant)
        .into_iter()
        .map(|counter| ControllerState {
            turn: 0,
            counter,
            wait: [0; SIGNAL_COUNT],
        })
        .collect()
}

pub fn successors(s: &ControllerState, params: &TrafficParams, variant: Variant) -> Vec<ControllerState> {
    let tick = |w: u32| (w + 1).min(params.wait_cap);
    let turn = s.turn as usize;
    if s.counter > 0 {
        let mut wait = s.wait.map(tick);
        wait[turn] = 0;
        return vec![ControllerState {
            turn: s.turn,
            counter: s.counter - 1,
            wait,
        }];
    }
    let next = (turn + 1) % SIGNAL_COUNT;
    let mut wait = s.wait.map(tick);
    wait[turn] = 1;
    wait[next] = 0;
    distinct_counters(params, variant)
        .into_iter()
        .map(|counter| ControllerState {
            turn: next as u8,
            counter,
            wait,
        })
        .collect()
}

/// The controller as a [`ModelProgram`].
#[derive(Debug, Clone, Copy)]
pub struct TrafficModel {
    pub params: TrafficParams,
    pub variant: Variant,
}

impl TrafficModel {
    pub fn new(params: TrafficParams, variant: Variant) -> Result<Self, ParamError> {
        params.validate()?;
        Ok(Self { params, variant })
    }
}

impl ModelProgram for TrafficModel {
    type State = ControllerState;

    fn initial(&self) -> Vec<ControllerState> {
        initial_states(&self.params, self.variant)
    }

    fn successors(&self, state: &ControllerState) -> Vec<ControllerState> {
        successors(state, &self.params, self.variant)
    }

    fn encode(&self, s: &ControllerState) -> Vec<u8> {
        let mut out = Vec::with_capacity(1 + 4 * (1 + SIGNAL_COUNT));
        out.push(s.turn);
        out.extend_from_slice(&s.counter.to_be_bytes());
        for w in s.wait {
            out.extend_from_slice(&w.to_be_bytes());
        }
        out
    }

    fn variables(&self) -> Vec<String> {
        let mut vars = vec!["turn".to_string(), "counter".to_string()];
        for i in 0..SIGNAL_COUNT {
            vars.push(format!("light{i}.colour"));
            vars.push(format!("light{i}.wait"));
        }
        vars
    }

    fn snapshot(&self, s: &ControllerState) -> Vec<Value> {
        let mut values = vec![Value::Int(s.turn as i64), Value::Int(s.counter as i64)];
        for i in 0..SIGNAL_COUNT {
            values.push(Value::Sym(Cow::Borrowed(if s.is_green(i) { "green" } else { "red" })));
            values.push(Value::Int(s.wait[i] as i64));
        }
        values
    }
}

fn signal_path(path: &str) -> Option<(usize, &str)> {
    let rest = path.strip_prefix("light")?;
    let (index, field) = rest.split_once('.')?;
    let index: usize = index.parse().ok()?;
    (index < SIGNAL_COUNT).then_some((index, field))
}

/// Interprets a canonical comparison atom over the controller's variables.
///
/// Recognized variables are `turn`, `counter`, and per signal `i`:
/// `light{i}.colour` (`green`/`red`, `=`/`!=` only), `light{i}.wait`, and
/// `light{i}.counter`. A light's counter is only defined while it is green,
/// so `light{i}.counter` comparisons are false for red signals.
pub fn resolve_atom(name: &str) -> Option<AtomSpec<ControllerState>> {
    let cmp = Comparison::parse(name)?;
    let op = cmp.op;
    match cmp.path.as_str() {
        "turn" => {
            let k = cmp.int_value()?;
            return Some(AtomSpec::new(name, move |s: &ControllerState| {
                op.eval(s.turn as i64, k)
            }));
        }
        "counter" => {
            let k = cmp.int_value()?;
            return Some(AtomSpec::new(name, move |s: &ControllerState| {
                op.eval(s.counter as i64, k)
            }));
        }
        _ => {}
    }
    let (signal, field) = signal_path(&cmp.path)?;
    match field {
        "colour" => {
            let want_green = match cmp.value.as_str() {
                "green" => true,
                "red" => false,
                _ => return None,
            };
            let negate = match op {
                CmpOp::Eq => false,
                CmpOp::Ne => true,
                _ => return None,
            };
            Some(AtomSpec::new(name, move |s: &ControllerState| {
                (s.is_green(signal) == want_green) != negate
            }))
        }
        "wait" => {
            let k = cmp.int_value()?;
            Some(AtomSpec::new(name, move |s: &ControllerState| {
                op.eval(s.wait[signal] as i64, k)
            }))
        }
        "counter" => {
            let k = cmp.int_value()?;
            Some(AtomSpec::new(name, move |s: &ControllerState| {
                s.is_green(signal) && op.eval(s.counter as i64, k)
            }))
        }
        _ => None,
    }
}

/// The standard atom vocabulary: colour and zero-counter atoms for every
/// light, the wait bound `3 × t_thr`, and the overshoot probe
/// `wait = 3 × (t_thr + 1)`.
pub fn atom_catalog(params: &TrafficParams) -> Vec<AtomSpec<ControllerState>> {
    let mut names = Vec::new();
    for i in 0..SIGNAL_COUNT {
        names.push(format!("light{i}.colour=green"));
        names.push(format!("light{i}.colour=red"));
        names.push(format!("light{i}.counter=0"));
        names.push(format!("light{i}.wait<={}", params.wait_bound()));
        names.push(format!("light{i}.wait={}", params.buggy_wait()));
    }
    names
        .iter()
        .map(|n| resolve_atom(n).expect("catalog atoms are well-formed"))
        .collect()
}

/// The catalog plus every atom mentioned by `specs` that this model can
/// interpret. Atoms it cannot interpret are left out and surface as
/// unknown-atom errors when checked.
pub fn atoms_for_specs(params: &TrafficParams, specs: &[SpecEntry]) -> Vec<AtomSpec<ControllerState>> {
    let mut atoms = atom_catalog(params);
    for spec in specs {
        for name in spec.formula.atoms() {
            if atoms.iter().any(|a| a.name == name) {
                continue;
            }
            if let Some(atom) = resolve_atom(name) {
                atoms.push(atom);
            }
        }
    }
    atoms
}

/// Which property family a suite entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecGroup {
    /// `AF (light_i.counter = 0 -> AX light_{i+1}.colour = green)`.
    RoundRobin,
    /// `AG (light_i.colour = red -> AF light_i.colour = green)`.
    Liveness,
    /// `AG (light_i.wait <= 3 × t_thr)`.
    MaxWait,
    /// `AG (light_i.counter = 0 -> AX light_{i+1}.colour = green)`.
    RoundRobinGlobal,
    /// `!EF (light_i.wait = 3 × (t_thr + 1))`: holds iff the overshoot is unreachable.
    BugProbe,
}

impl SpecGroup {
    pub const ALL: [SpecGroup; 5] = [
        SpecGroup::RoundRobin,
        SpecGroup::Liveness,
        SpecGroup::MaxWait,
        SpecGroup::RoundRobinGlobal,
        SpecGroup::BugProbe,
    ];

    pub fn prefix(self) -> &'static str {
        match self {
            SpecGroup::RoundRobin => "round_robin",
            SpecGroup::Liveness => "liveness",
            SpecGroup::MaxWait => "max_wait",
            SpecGroup::RoundRobinGlobal => "round_robin_ag",
            SpecGroup::BugProbe => "bug_probe",
        }
    }

    /// Group of a suite entry name such as `max_wait_2`.
    pub fn of(name: &str) -> Option<SpecGroup> {
        let (prefix, index) = name.rsplit_once('_')?;
        index.parse::<usize>().ok()?;
        SpecGroup::ALL.into_iter().find(|g| g.prefix() == prefix)
    }

    fn formula(self, i: usize, params: &TrafficParams) -> String {
        let next = (i + 1) % SIGNAL_COUNT;
        match self {
            SpecGroup::RoundRobin => format!("AF (light{i}.counter = 0 -> AX light{next}.colour = green)"),
            SpecGroup::Liveness => format!("AG (light{i}.colour = red -> AF light{i}.colour = green)"),
            SpecGroup::MaxWait => format!("AG (light{i}.wait <= {})", params.wait_bound()),
            SpecGroup::RoundRobinGlobal => {
                format!("AG (light{i}.counter = 0 -> AX light{next}.colour = green)")
            }
            SpecGroup::BugProbe => format!("!EF (light{i}.wait = {})", params.buggy_wait()),
        }
    }
}

/// Spec-file text of the built-in suite.
pub fn builtin_spec_text(params: &TrafficParams) -> String {
    let mut text = String::new();
    for group in SpecGroup::ALL {
        for i in 0..SIGNAL_COUNT {
            text.push_str(&format!("SPEC {}_{i}: {}\n", group.prefix(), group.formula(i, params)));
        }
    }
    text
}

/// Twenty entries: four each of round-robin, liveness and max wait
/// (bound `3 × t_thr`), then the four `AG` readings of round-robin and four
/// overshoot probes.
pub fn builtin_spec_suite(params: &TrafficParams) -> Vec<SpecEntry> {
    parse_spec_file(&builtin_spec_text(params)).expect("built-in suite parses")
}
