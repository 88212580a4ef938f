use std::fmt;

use serde::{Deserialize, Serialize};

use super::samples::{sample_window, KpiKind, KpiSample};
use super::timeline::LifecycleTimeline;
use super::KpiError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AggregateMode {
    Sum,
    Makespan,
    Mean,
    P95,
}

impl AggregateMode {
    pub const ALL: [AggregateMode; 4] = [
        AggregateMode::Sum,
        AggregateMode::Makespan,
        AggregateMode::Mean,
        AggregateMode::P95,
    ];
}

impl fmt::Display for AggregateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            AggregateMode::Sum => "Sum",
            AggregateMode::Makespan => "Makespan",
            AggregateMode::Mean => "Mean",
            AggregateMode::P95 => "P95",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub kind: KpiKind,
    pub mode: AggregateMode,
    pub value_ns: u64,
    pub sample_count: usize,
}

/// Aggregates homogeneous samples without a source timeline.
///
/// Without a timeline `Makespan` equals `Sum`, which is exact for campaigns
/// that run their operations one after another.
pub fn aggregate(samples: &[KpiSample], mode: AggregateMode) -> Result<AggregateStats, KpiError> {
    aggregate_with_timeline(samples, mode, None)
}

/// Aggregates samples; `Makespan` uses the boundary events in `timeline`
/// (latest end minus earliest start) when one is given.
pub fn aggregate_with_timeline(
    samples: &[KpiSample],
    mode: AggregateMode,
    timeline: Option<&LifecycleTimeline>,
) -> Result<AggregateStats, KpiError> {
    let first = samples.first().ok_or(KpiError::EmptySampleSet)?;
    let kind = first.kind;
    if samples.iter().any(|s| s.kind != kind) {
        return Err(KpiError::MixedKinds);
    }
    let n = samples.len();
    let sum: u128 = samples.iter().map(|s| u128::from(s.duration_ns)).sum();
    let total = || u64::try_from(sum).map_err(|_| KpiError::DurationOverflow);

    let value_ns = match mode {
        AggregateMode::Sum => total()?,
        // Rounded to the nearest nanosecond, halves up.
        AggregateMode::Mean => ((sum + n as u128 / 2) / n as u128) as u64,
        AggregateMode::P95 => percentile_nearest_rank(samples.iter().map(|s| s.duration_ns), 95),
        AggregateMode::Makespan => match timeline {
            None => total()?,
            Some(tl) => {
                let mut start = u64::MAX;
                let mut end = 0;
                for s in samples {
                    let (a, b) = sample_window(tl, s)?;
                    start = start.min(a);
                    end = end.max(b);
                }
                end - start
            }
        },
    };
    Ok(AggregateStats {
        kind,
        mode,
        value_ns,
        sample_count: n,
    })
}

/// Nearest-rank percentile: the value at rank `ceil(p/100 * n)` of the
/// sorted values. Panics on an empty input.
pub fn percentile_nearest_rank<I: IntoIterator<Item = u64>>(values: I, p: u32) -> u64 {
    let mut sorted: Vec<u64> = values.into_iter().collect();
    assert!(!sorted.is_empty(), "percentile of an empty set");
    sorted.sort_unstable();
    let n = sorted.len();
    let rank = (p as usize * n).div_ceil(100).max(1);
    sorted[rank.min(n) - 1]
}
