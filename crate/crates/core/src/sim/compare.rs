use std::fmt::Write;

use super::{run_simulation, ControlMode, SimConfig, SimError};

pub const COMPARE_CSV_HEADER: &str = "rate,adaptive_avg_wait,fixed_avg_wait,adaptive_max_wait,fixed_max_wait";

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub rate: f64,
    pub adaptive_avg_wait: f64,
    pub fixed_avg_wait: f64,
    pub adaptive_max_wait: u64,
    pub fixed_max_wait: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rows: Vec<CompareRow>,
    /// Non-fatal observations: average wait dropping as load rises, or
    /// adaptive control doing worse than fixed.
    pub warnings: Vec<String>,
}

impl Comparison {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(COMPARE_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{:.4},{:.4},{:.4},{},{}",
                r.rate, r.adaptive_avg_wait, r.fixed_avg_wait, r.adaptive_max_wait, r.fixed_max_wait
            )
            .unwrap();
        }
        out
    }
}

/// Runs both control modes with the same seed at each arrival rate
/// (applied to all four lanes).
pub fn compare_modes(base: &SimConfig, rates: &[f64]) -> Result<Comparison, SimError> {
    if rates.is_empty() {
        return Err(SimError::InvalidConfig("rate list is empty".into()));
    }
    let mut rows = Vec::with_capacity(rates.len());
    for &rate in rates {
        let run = |mode| {
            let config = SimConfig {
                mode,
                arrival_prob: [rate; 4],
                ..base.clone()
            };
            run_simulation(&config)
        };
        let adaptive = run(ControlMode::Adaptive)?;
        let fixed = run(ControlMode::FixedPeriod)?;
        rows.push(CompareRow {
            rate,
            adaptive_avg_wait: adaptive.total.avg_wait_ticks,
            fixed_avg_wait: fixed.total.avg_wait_ticks,
            adaptive_max_wait: adaptive.total.max_wait_ticks,
            fixed_max_wait: fixed.total.max_wait_ticks,
        });
    }

    let mut warnings = Vec::new();
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.rate < a.rate {
            continue;
        }
        if b.adaptive_avg_wait < a.adaptive_avg_wait {
            warnings.push(format!(
                "adaptive average wait falls from {:.4} to {:.4} as rate rises from {} to {}",
                a.adaptive_avg_wait, b.adaptive_avg_wait, a.rate, b.rate
            ));
        }
        if b.fixed_avg_wait < a.fixed_avg_wait {
            warnings.push(format!(
                "fixed average wait falls from {:.4} to {:.4} as rate rises from {} to {}",
                a.fixed_avg_wait, b.fixed_avg_wait, a.rate, b.rate
            ));
        }
    }
    for r in &rows {
        if r.adaptive_avg_wait > r.fixed_avg_wait {
            warnings.push(format!(
                "adaptive average wait {:.4} exceeds fixed {:.4} at rate {}",
                r.adaptive_avg_wait, r.fixed_avg_wait, r.rate
            ));
        }
    }
    Ok(Comparison { rows, warnings })
}
