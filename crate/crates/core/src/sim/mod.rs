//! Discrete-time simulation of the four-lane intersection.
//!
//! Each lane has an entry counter some distance upstream and an exit
//! counter at the stop line. The controller only sees the two counts; their
//! difference is the queue it plans the next green for. One vehicle crosses
//! per green tick.

mod compare;
mod rng;

use std::collections::VecDeque;
use std::fmt::Write;
use std::str::FromStr;

use thiserror::Error;

use crate::traffic::{GreenPlan, Variant, SIGNAL_COUNT};

pub use compare::{compare_modes, CompareRow, Comparison, COMPARE_CSV_HEADER};
pub use rng::ArrivalRng;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlMode {
    /// Green length from the measured queue, capped at `t_thr`.
    Adaptive,
    /// Every green lasts `fixed_period_ticks`.
    FixedPeriod,
}

impl FromStr for ControlMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "adaptive" => Ok(ControlMode::Adaptive),
            "fixed" => Ok(ControlMode::FixedPeriod),
            other => Err(format!("unknown mode '{other}' (expected adaptive or fixed)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub mode: ControlMode,
    pub t_thr_ticks: u32,
    pub fixed_period_ticks: u32,
    /// Per-lane chance of one arrival per tick.
    pub arrival_prob: [f64; SIGNAL_COUNT],
    pub horizon_ticks: u64,
    pub seed: u64,
    /// Queue length the entry counter can see; vehicles beyond it wait
    /// upstream uncounted.
    pub detection_distance_ticks: u32,
}

impl SimConfig {
    pub fn new(mode: ControlMode, t_thr_ticks: u32) -> Self {
        Self {
            mode,
            t_thr_ticks,
            fixed_period_ticks: t_thr_ticks,
            arrival_prob: [0.1; SIGNAL_COUNT],
            horizon_ticks: 10_000,
            seed: 1,
            detection_distance_ticks: t_thr_ticks,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let invalid = |msg: String| Err(SimError::InvalidConfig(msg));
        if let Some(p) = self.arrival_prob.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return invalid(format!("arrival probability {p} is outside [0, 1]"));
        }
        if self.horizon_ticks == 0 {
            return invalid("horizon must be at least 1 tick".into());
        }
        if self.t_thr_ticks == 0 {
            return invalid("t_thr must be at least 1 tick".into());
        }
        if self.fixed_period_ticks == 0 {
            return invalid("fixed period must be at least 1 tick".into());
        }
        if self.detection_distance_ticks < self.t_thr_ticks {
            return invalid(format!(
                "detection distance {} is shorter than t_thr {}",
                self.detection_distance_ticks, self.t_thr_ticks
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LaneState {
    pub entry_count: u64,
    pub exit_count: u64,
    /// Arrival ticks of the vehicles between the two counters, oldest first.
    pub queue: VecDeque<u64>,
    /// Arrival ticks of vehicles backed up past the entry counter.
    pub upstream: VecDeque<u64>,
}

impl LaneState {
    /// The controller's queue estimate.
    pub fn counted_queue(&self) -> u64 {
        self.entry_count - self.exit_count
    }

    pub fn upstream_overflow(&self) -> usize {
        self.upstream.len()
    }
}

/// Plans the green for lane `next` at the moment the current green expires.
pub fn controller_decide(lanes: &[LaneState; SIGNAL_COUNT], next: usize, config: &SimConfig) -> GreenPlan {
    let n = u32::try_from(lanes[next].counted_queue()).unwrap_or(u32::MAX);
    match config.mode {
        ControlMode::Adaptive => GreenPlan::new(n, config.t_thr_ticks, Variant::Fixed),
        ControlMode::FixedPeriod => GreenPlan {
            n,
            t_cal: n,
            duration_ticks: config.fixed_period_ticks,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwitchEvent {
    /// First tick of the new green.
    pub tick: u64,
    pub lane: usize,
    pub duration_ticks: u32,
    /// `entry - exit` for the lane when the green was planned.
    pub counted_queue: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LaneStats {
    pub vehicles_arrived: u64,
    pub vehicles_served: u64,
    pub still_queued: u64,
    pub upstream_overflow: u64,
    pub total_wait_ticks: u64,
    pub avg_wait_ticks: f64,
    pub max_wait_ticks: u64,
    pub green_ticks: u64,
    pub busy_green_ticks: u64,
    /// Fraction of green ticks in which a vehicle crossed.
    pub green_utilization: f64,
}

impl LaneStats {
    fn finish(&mut self) {
        self.avg_wait_ticks = ratio(self.total_wait_ticks, self.vehicles_served);
        self.green_utilization = ratio(self.busy_green_ticks, self.green_ticks);
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimStats {
    pub lanes: [LaneStats; SIGNAL_COUNT],
    pub total: LaneStats,
}

pub const STATS_CSV_HEADER: &str = "lane,vehicles_arrived,vehicles_served,still_queued,upstream_overflow,\
avg_wait_ticks,max_wait_ticks,green_utilization";

impl SimStats {
    /// One row per lane plus an `all` row; LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(STATS_CSV_HEADER);
        out.push('\n');
        let rows = self
            .lanes
            .iter()
            .enumerate()
            .map(|(i, l)| (i.to_string(), l))
            .chain(std::iter::once(("all".to_string(), &self.total)));
        for (label, l) in rows {
            writeln!(
                out,
                "{label},{},{},{},{},{:.4},{},{:.4}",
                l.vehicles_arrived,
                l.vehicles_served,
                l.still_queued,
                l.upstream_overflow,
                l.avg_wait_ticks,
                l.max_wait_ticks,
                l.green_utilization
            )
            .unwrap();
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct SimRun {
    pub stats: SimStats,
    pub schedule: Vec<SwitchEvent>,
    pub lanes: [LaneState; SIGNAL_COUNT],
}

pub fn run_simulation(config: &SimConfig) -> Result<SimStats, SimError> {
    simulate(config).map(|run| run.stats)
}

/// Runs the simulation and also returns the green schedule and final lane
/// states.
///
/// Per tick: every lane first admits backed-up vehicles into the counted
/// zone, then draws one arrival; the green lane serves at most one
/// vehicle; if its green has run out, the next lane's green is planned.
/// The very first green (lane 0 at tick 0) precedes any measurement and
/// lasts `t_thr` ticks in adaptive mode, the fixed period otherwise.
pub fn simulate(config: &SimConfig) -> Result<SimRun, SimError> {
    config.validate()?;
    let cap = config.detection_distance_ticks as usize;
    let mut rng = ArrivalRng::new(config.seed);
    let mut lanes: [LaneState; SIGNAL_COUNT] = Default::default();
    let mut stats: [LaneStats; SIGNAL_COUNT] = Default::default();

    let mut green = 0usize;
    let mut remaining = match config.mode {
        ControlMode::Adaptive => config.t_thr_ticks,
        ControlMode::FixedPeriod => config.fixed_period_ticks,
    };
    let mut schedule = vec![SwitchEvent {
        tick: 0,
        lane: 0,
        duration_ticks: remaining,
        counted_queue: 0,
    }];

    for now in 0..config.horizon_ticks {
        for (i, lane) in lanes.iter_mut().enumerate() {
            while lane.queue.len() < cap {
                let Some(arrived) = lane.upstream.pop_front() else {
                    break;
                };
                lane.queue.push_back(arrived);
                lane.entry_count += 1;
            }
            if rng.bernoulli(config.arrival_prob[i]) {
                stats[i].vehicles_arrived += 1;
                if lane.upstream.is_empty() && lane.queue.len() < cap {
                    lane.queue.push_back(now);
                    lane.entry_count += 1;
                } else {
                    lane.upstream.push_back(now);
                }
            }
        }

        let lane = &mut lanes[green];
        let s = &mut stats[green];
        s.green_ticks += 1;
        if let Some(arrived) = lane.queue.pop_front() {
            lane.exit_count += 1;
            let wait = now - arrived;
            s.vehicles_served += 1;
            s.busy_green_ticks += 1;
            s.total_wait_ticks += wait;
            s.max_wait_ticks = s.max_wait_ticks.max(wait);
        }

        remaining -= 1;
        if remaining == 0 {
            green = (green + 1) % SIGNAL_COUNT;
            let plan = controller_decide(&lanes, green, config);
            debug_assert_eq!(lanes[green].counted_queue(), lanes[green].queue.len() as u64);
            remaining = plan.duration_ticks;
            if now + 1 < config.horizon_ticks {
                schedule.push(SwitchEvent {
                    tick: now + 1,
                    lane: green,
                    duration_ticks: plan.duration_ticks,
                    counted_queue: lanes[green].counted_queue(),
                });
            }
        }
    }

    let mut total = LaneStats::default();
    for (s, lane) in stats.iter_mut().zip(&lanes) {
        s.still_queued = lane.queue.len() as u64;
        s.upstream_overflow = lane.upstream.len() as u64;
        s.finish();
        total.vehicles_arrived += s.vehicles_arrived;
        total.vehicles_served += s.vehicles_served;
        total.still_queued += s.still_queued;
        total.upstream_overflow += s.upstream_overflow;
        total.total_wait_ticks += s.total_wait_ticks;
        total.max_wait_ticks = total.max_wait_ticks.max(s.max_wait_ticks);
        total.green_ticks += s.green_ticks;
        total.busy_green_ticks += s.busy_green_ticks;
    }
    total.finish();

    Ok(SimRun {
        stats: SimStats { lanes: stats, total },
        schedule,
        lanes,
    })
}
