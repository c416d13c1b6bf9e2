//! Test-only oracles. Nothing here calls into the checker's fixpoint code;
//! semantics are evaluated by bounded path enumeration instead.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use proptest::prelude::*;
use rand::Rng;
use signalcheck::ctl::Formula;
use signalcheck::kripke::KripkeStructure;

pub const ATOMS: [&str; 3] = ["p", "q", "r"];

/// An explicit graph with labels, kept separately from the structure under
/// test so the oracle reads the raw description rather than the built form.
#[derive(Debug, Clone)]
pub struct Graph {
    pub n: usize,
    pub initial: Vec<usize>,
    pub succ: Vec<Vec<usize>>,
    pub labels: HashMap<String, Vec<bool>>,
}

impl Graph {
    pub fn to_structure(&self) -> KripkeStructure {
        let edges: Vec<(usize, usize)> = self
            .succ
            .iter()
            .enumerate()
            .flat_map(|(s, ts)| ts.iter().map(move |&t| (s, t)))
            .collect();
        let labels = self
            .labels
            .iter()
            .map(|(name, v)| {
                (
                    name.clone(),
                    v.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect(),
                )
            })
            .collect();
        KripkeStructure::from_parts(self.n, &self.initial, &edges, labels).unwrap()
    }
}

pub fn random_graph<R: Rng>(rng: &mut R, max_states: usize) -> Graph {
    let n = rng.random_range(1..=max_states);
    let succ = (0..n)
        .map(|_| {
            let degree = rng.random_range(1..=3.min(n));
            let mut ts: Vec<usize> = (0..degree).map(|_| rng.random_range(0..n)).collect();
            ts.sort_unstable();
            ts.dedup();
            ts
        })
        .collect();
    let mut initial: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.3)).collect();
    if initial.is_empty() {
        initial.push(0);
    }
    let labels = ATOMS
        .iter()
        .map(|a| (a.to_string(), (0..n).map(|_| rng.random_bool(0.5)).collect()))
        .collect();
    Graph {
        n,
        initial,
        succ,
        labels,
    }
}

pub fn random_formula<R: Rng>(rng: &mut R, depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.2) {
        return match rng.random_range(0..8) {
            0 => Formula::True,
            1 => Formula::False,
            i => Formula::atom(ATOMS[i % ATOMS.len()]),
        };
    }
    let sub = |rng: &mut R| random_formula(rng, depth - 1);
    match rng.random_range(0..15) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 => Formula::ax(sub(rng)),
        5 => Formula::ex(sub(rng)),
        6 => Formula::af(sub(rng)),
        7 => Formula::ef(sub(rng)),
        8 => Formula::ag(sub(rng)),
        9 => Formula::eg(sub(rng)),
        10 | 11 => Formula::au(sub(rng), sub(rng)),
        12 | 13 => Formula::eu(sub(rng), sub(rng)),
        _ => Formula::not(sub(rng)),
    }
}

pub fn graph_strategy(max_states: usize) -> impl Strategy<Value = Graph> {
    (1..=max_states).prop_flat_map(|n| {
        let succ = prop::collection::vec(prop::collection::btree_set(0..n, 1..=3.min(n)), n);
        let init = prop::collection::btree_set(0..n, 1..=n);
        let labels = prop::collection::vec(prop::collection::vec(any::<bool>(), n), ATOMS.len());
        (Just(n), succ, init, labels).prop_map(|(n, succ, init, labels)| Graph {
            n,
            initial: init.into_iter().collect(),
            succ: succ.into_iter().map(|s| s.into_iter().collect()).collect(),
            labels: ATOMS.iter().map(|a| a.to_string()).zip(labels).collect(),
        })
    })
}

pub fn formula_strategy(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        prop::sample::select(ATOMS.to_vec()).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.clone().prop_map(Formula::ax),
            inner.clone().prop_map(Formula::ex),
            inner.clone().prop_map(Formula::af),
            inner.clone().prop_map(Formula::ef),
            inner.clone().prop_map(Formula::ag),
            inner.clone().prop_map(Formula::eg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::au(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::eu(a, b)),
        ]
    })
}

/// Brute-force CTL semantics by bounded path enumeration.
///
/// On a graph with `n` states, a path prefix of `n + 1` states must repeat a
/// state, so it can be pumped into an infinite path. That makes prefixes of
/// length `n + 1` sufficient to decide the `G`, `F` and `U` operators
/// exactly; reachability needs only prefixes of length `n`.
pub fn oracle_eval(g: &Graph, f: &Formula) -> Vec<bool> {
    let n = g.n;
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(a) => g.labels[a].clone(),
        Formula::Not(x) => oracle_eval(g, x).into_iter().map(|b| !b).collect(),
        Formula::And(a, b) => zip(g, a, b, |x, y| x && y),
        Formula::Or(a, b) => zip(g, a, b, |x, y| x || y),
        Formula::Implies(a, b) => zip(g, a, b, |x, y| !x || y),
        Formula::EX(x) => {
            let v = oracle_eval(g, x);
            (0..n).map(|s| g.succ[s].iter().any(|&t| v[t])).collect()
        }
        Formula::AX(x) => {
            let v = oracle_eval(g, x);
            (0..n).map(|s| g.succ[s].iter().all(|&t| v[t])).collect()
        }
        Formula::EF(x) => {
            let v = oracle_eval(g, x);
            (0..n).map(|s| exists_until(g, &vec![true; n], &v, s, n)).collect()
        }
        Formula::AF(x) => {
            let v = oracle_eval(g, x);
            (0..n).map(|s| forall_until(g, &vec![true; n], &v, s, n + 1)).collect()
        }
        Formula::EU(a, b) => {
            let (va, vb) = (oracle_eval(g, a), oracle_eval(g, b));
            (0..n).map(|s| exists_until(g, &va, &vb, s, n)).collect()
        }
        Formula::AU(a, b) => {
            let (va, vb) = (oracle_eval(g, a), oracle_eval(g, b));
            (0..n).map(|s| forall_until(g, &va, &vb, s, n + 1)).collect()
        }
        Formula::EG(x) => {
            let v = oracle_eval(g, x);
            (0..n).map(|s| exists_always(g, &v, s, n + 1)).collect()
        }
        Formula::AG(x) => {
            let v = oracle_eval(g, x);
            (0..n).map(|s| forall_always(g, &v, s, n)).collect()
        }
    }
}

fn zip(g: &Graph, a: &Formula, b: &Formula, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    oracle_eval(g, a)
        .into_iter()
        .zip(oracle_eval(g, b))
        .map(|(x, y)| op(x, y))
        .collect()
}

/// Some path prefix of at most `len` states reaches `b` through `a` states.
fn exists_until(g: &Graph, a: &[bool], b: &[bool], s: usize, len: usize) -> bool {
    b[s] || (a[s] && len > 1 && g.succ[s].iter().any(|&t| exists_until(g, a, b, t, len - 1)))
}

/// Every path prefix of `len` states reaches `b` through `a` states.
fn forall_until(g: &Graph, a: &[bool], b: &[bool], s: usize, len: usize) -> bool {
    b[s] || (a[s] && len > 1 && g.succ[s].iter().all(|&t| forall_until(g, a, b, t, len - 1)))
}

fn exists_always(g: &Graph, v: &[bool], s: usize, len: usize) -> bool {
    v[s] && (len == 1 || g.succ[s].iter().any(|&t| exists_always(g, v, t, len - 1)))
}

fn forall_always(g: &Graph, v: &[bool], s: usize, len: usize) -> bool {
    v[s] && (len == 1 || g.succ[s].iter().all(|&t| forall_always(g, v, t, len - 1)))
}

/// Whether an infinite path starting in `from` stays within `within`.
pub fn oracle_lasso_exists(g: &Graph, from: &[usize], within: &[bool]) -> bool {
    from.iter().any(|&s| exists_always(g, within, s, g.n + 1))
}

/// Length (in transitions) of the shortest path from `from` to `to`, found
/// by enumerating all paths of increasing length.
pub fn oracle_distance(g: &Graph, from: &[usize], to: &[bool]) -> Option<usize> {
    fn reaches(g: &Graph, s: usize, to: &[bool], steps: usize) -> bool {
        if steps == 0 {
            return to[s];
        }
        g.succ[s].iter().any(|&t| reaches(g, t, to, steps - 1))
    }
    (0..g.n).find(|&k| from.iter().any(|&s| reaches(g, s, to, k)))
}

pub type TrafficTuple = (u32, u32, [u32; 4]);

/// The controller's transition rule on `(turn, counter, wait[4])` tuples,
/// written directly from the rules without going through the library.
pub fn traffic_successors(t_thr: u32, q_max: u32, wait_cap: u32, buggy: bool, s: TrafficTuple) -> Vec<TrafficTuple> {
    let load = |n: u32| {
        let cv = n.min(t_thr);
        if buggy {
            cv
        } else {
            cv.max(1) - 1
        }
    };
    let (turn, counter, wait) = s;
    let mut next = Vec::new();
    if counter > 0 {
        let mut w = [0; 4];
        for i in 0..4 {
            w[i] = if i == turn as usize {
                0
            } else {
                (wait[i] + 1).min(wait_cap)
            };
        }
        next.push((turn, counter - 1, w));
    } else {
        let t2 = (turn + 1) % 4;
        let mut w = [0; 4];
        for i in 0..4 {
            w[i] = if i == t2 as usize {
                0
            } else if i == turn as usize {
                1
            } else {
                (wait[i] + 1).min(wait_cap)
            };
        }
        for n in 0..=q_max {
            next.push((t2, load(n), w));
        }
    }
    next
}

pub fn traffic_initial(t_thr: u32, q_max: u32, buggy: bool) -> Vec<TrafficTuple> {
    (0..=q_max)
        .map(|n| {
            let cv = n.min(t_thr);
            (0, if buggy { cv } else { cv.max(1) - 1 }, [0; 4])
        })
        .collect()
}

/// Independent enumeration of the controller's reachable tuples.
pub fn traffic_reachable(t_thr: u32, q_max: u32, wait_cap: u32, buggy: bool) -> HashSet<TrafficTuple> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    for s in traffic_initial(t_thr, q_max, buggy) {
        if seen.insert(s) {
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        for t in traffic_successors(t_thr, q_max, wait_cap, buggy, s) {
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    seen
}

/// Reference xoshiro256++ seeded through SplitMix64, written from the
/// published algorithms.
pub struct RefXoshiro {
    s: [u64; 4],
}

impl RefXoshiro {
    pub fn new(seed: u64) -> Self {
        let mut x = seed;
        let mut s = [0u64; 4];
        for slot in &mut s {
            x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = x;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            *slot = z ^ (z >> 31);
        }
        Self { s }
    }

    pub fn next(&mut self) -> u64 {
        let s = &mut self.s;
        let out = s[0].wrapping_add(s[3]).rotate_left(23).wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        out
    }

    pub fn arrives(&mut self, p: f64) -> bool {
        ((self.next() >> 11) as f64) / 9_007_199_254_740_992.0 < p
    }
}

#[derive(Debug, PartialEq)]
pub struct RefOutcome {
    pub arrived: [u64; 4],
    pub served: [u64; 4],
    pub wait_sum: [u64; 4],
    pub wait_max: [u64; 4],
    /// (first tick, lane) of every green that starts inside the horizon.
    pub greens: Vec<(u64, usize)>,
}

/// Straightforward tick loop over one combined arrival list per lane; the
/// first `admitted[i]` entries have passed the entry counter.
pub fn reference_sim(
    adaptive: bool,
    t_thr: u64,
    period: u64,
    probs: [f64; 4],
    horizon: u64,
    seed: u64,
    cap: u64,
) -> RefOutcome {
    let mut rng = RefXoshiro::new(seed);
    let mut lines: [Vec<u64>; 4] = Default::default();
    let mut head = [0usize; 4];
    let mut arrived = [0u64; 4];
    let mut served = [0u64; 4];
    let mut wait_sum = [0u64; 4];
    let mut wait_max = [0u64; 4];
    let mut greens = vec![(0, 0)];
    let mut lane = 0usize;
    let mut green_end = if adaptive { t_thr } else { period };
    for now in 0..horizon {
        for i in 0..4 {
            if rng.arrives(probs[i]) {
                arrived[i] += 1;
                lines[i].push(now);
            }
        }
        // vehicles within the detection zone are the first `cap` waiting ones
        if head[lane] < lines[lane].len() {
            let t = lines[lane][head[lane]];
            head[lane] += 1;
            served[lane] += 1;
            wait_sum[lane] += now - t;
            wait_max[lane] = wait_max[lane].max(now - t);
        }
        if now + 1 == green_end {
            lane = (lane + 1) % 4;
            let waiting = (lines[lane].len() - head[lane]) as u64;
            // vehicles that arrived this tick are counted only if the zone had room
            let counted = waiting.min(cap);
            let d = if adaptive { counted.min(t_thr).max(1) } else { period };
            green_end = now + 1 + d;
            if now + 1 < horizon {
                greens.push((now + 1, lane));
            }
        }
    }
    RefOutcome {
        arrived,
        served,
        wait_sum,
        wait_max,
        greens,
    }
}
