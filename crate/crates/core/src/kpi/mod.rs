//! Operational and functional KPIs.
//!
//! Lifecycle events are collected into a [`LifecycleTimeline`]; the delay
//! KPIs are differences between boundary phases of that timeline:
//!
//! | KPI | start                 | end               |
//! |-----|-----------------------|-------------------|
//! | OPD | `OnboardRequested`    | `VmActive`        |
//! | DPD | `InstantiateRequested`| `VnfOperational`  |
//! | ROD | `ActionExecuted`      | `ActionCompleted` |

mod aggregate;
pub mod capability;
mod qod;
mod samples;
mod timeline;

use thiserror::Error;

pub use aggregate::{aggregate, aggregate_with_timeline, percentile_nearest_rank, AggregateMode, AggregateStats};
pub use capability::{
    compare_capabilities, footprint_ratio, CapabilityManifest, ComparisonMatrix, FeatureKey, FeatureStatus,
    Footprint, FootprintRatios, MatrixRow, VimPlatform,
};
pub use qod::{qod_score, QodInputs, QodScore, QodWeights, DEFAULT_TAU_NS};
pub use samples::{dpd, opd, rod, sample_window, KpiKind, KpiSample};
pub use timeline::{ActionKind, ClockDomain, LifecycleEvent, LifecyclePhase, LifecycleTimeline};

fn order_detail(first: LifecyclePhase, second: LifecyclePhase) -> String {
    if first == second {
        format!("{first} recorded twice")
    } else {
        format!("{first} must precede {second}")
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KpiError {
    #[error("phase order violation on `{instance_id}`: {}", order_detail(*.first, *.second))]
    PhaseOrderViolation {
        instance_id: String,
        first: LifecyclePhase,
        second: LifecyclePhase,
    },
    #[error("invalid event: {0}")]
    InvalidEvent(String),
    #[error("`{id}` has no {phase} event")]
    MissingPhase { id: String, phase: LifecyclePhase },
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("weights must be non-negative and sum to 1, got {0:?}")]
    InvalidWeights([f64; 5]),
    #[error("invalid QoD inputs: {0}")]
    InvalidInputs(String),
    #[error("summed durations exceed u64 nanoseconds")]
    DurationOverflow,
    #[error("empty sample set")]
    EmptySampleSet,
    #[error("samples of different KPI kinds cannot be aggregated together")]
    MixedKinds,
    #[error("reference footprint has zero `{0}`")]
    DivisionByZeroDimension(&'static str),
    #[error("clock domain mismatch: expected {expected}, found {found}")]
    ClockDomainMismatch { expected: ClockDomain, found: ClockDomain },
}
