use std::fmt;

use serde::{Deserialize, Serialize};

use super::timeline::{ActionKind, LifecyclePhase, LifecycleTimeline};
use super::KpiError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KpiKind {
    /// On-boarding process delay.
    #[serde(rename = "OPD")]
    Opd,
    /// Deployment process delay.
    #[serde(rename = "DPD")]
    Dpd,
    /// Run-time orchestration delay.
    #[serde(rename = "ROD")]
    Rod,
}

impl KpiKind {
    /// Phases bounding a sample of this kind.
    pub fn boundaries(self) -> (LifecyclePhase, LifecyclePhase) {
        match self {
            KpiKind::Opd => (LifecyclePhase::OnboardRequested, LifecyclePhase::VmActive),
            KpiKind::Dpd => (LifecyclePhase::InstantiateRequested, LifecyclePhase::VnfOperational),
            KpiKind::Rod => (LifecyclePhase::ActionExecuted, LifecyclePhase::ActionCompleted),
        }
    }
}

impl fmt::Display for KpiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            KpiKind::Opd => "OPD",
            KpiKind::Dpd => "DPD",
            KpiKind::Rod => "ROD",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KpiSample {
    pub kind: KpiKind,
    pub vnf_name: String,
    pub instance_id: String,
    pub duration_ns: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action_kind: Option<ActionKind>,
    /// Measurement uncertainty, set for wall-clock samples taken by polling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uncertainty_ns: Option<u64>,
}

fn instance_sample(
    timeline: &LifecycleTimeline,
    instance_id: &str,
    kind: KpiKind,
) -> Result<KpiSample, KpiError> {
    let (start_phase, end_phase) = kind.boundaries();
    let missing = |phase| KpiError::MissingPhase {
        id: instance_id.to_string(),
        phase,
    };
    let start = timeline
        .instance_events(instance_id)
        .find(|e| e.phase == start_phase)
        .ok_or_else(|| missing(start_phase))?;
    let end = timeline
        .phase_time(instance_id, end_phase)
        .ok_or_else(|| missing(end_phase))?;
    Ok(KpiSample {
        kind,
        vnf_name: start.vnf_name.clone(),
        instance_id: instance_id.to_string(),
        duration_ns: end - start.timestamp_ns,
        action_id: None,
        action_kind: None,
        uncertainty_ns: None,
    })
}

/// On-boarding delay: `OnboardRequested` to `VmActive`.
pub fn opd(timeline: &LifecycleTimeline, instance_id: &str) -> Result<KpiSample, KpiError> {
    instance_sample(timeline, instance_id, KpiKind::Opd)
}

/// Deployment delay: `InstantiateRequested` to `VnfOperational`.
pub fn dpd(timeline: &LifecycleTimeline, instance_id: &str) -> Result<KpiSample, KpiError> {
    instance_sample(timeline, instance_id, KpiKind::Dpd)
}

/// Run-time orchestration delay of one action: `ActionExecuted` to `ActionCompleted`.
pub fn rod(timeline: &LifecycleTimeline, action_id: &str) -> Result<KpiSample, KpiError> {
    let mut executed = None;
    let mut completed = None;
    for e in timeline.action_events(action_id) {
        match e.phase {
            LifecyclePhase::ActionExecuted => executed = Some(e),
            LifecyclePhase::ActionCompleted => completed = Some(e),
            _ => {}
        }
    }
    let missing = |phase| KpiError::MissingPhase {
        id: action_id.to_string(),
        phase,
    };
    match (executed, completed) {
        (None, None) => Err(KpiError::UnknownAction(action_id.to_string())),
        (None, Some(_)) => Err(missing(LifecyclePhase::ActionExecuted)),
        (Some(_), None) => Err(missing(LifecyclePhase::ActionCompleted)),
        (Some(start), Some(end)) => Ok(KpiSample {
            kind: KpiKind::Rod,
            vnf_name: start.vnf_name.clone(),
            instance_id: start.instance_id.clone(),
            duration_ns: end.timestamp_ns - start.timestamp_ns,
            action_id: Some(action_id.to_string()),
            action_kind: start.action_kind,
            uncertainty_ns: None,
        }),
    }
}

/// Start and end timestamps of the interval a sample measures.
pub fn sample_window(timeline: &LifecycleTimeline, sample: &KpiSample) -> Result<(u64, u64), KpiError> {
    let (start_phase, end_phase) = sample.kind.boundaries();
    let (id, start, end) = match (&sample.kind, &sample.action_id) {
        (KpiKind::Rod, Some(action)) => {
            let find = |phase| {
                timeline
                    .action_events(action)
                    .find(|e| e.phase == phase)
                    .map(|e| e.timestamp_ns)
            };
            (action.as_str(), find(start_phase), find(end_phase))
        }
        _ => (
            sample.instance_id.as_str(),
            timeline.phase_time(&sample.instance_id, start_phase),
            timeline.phase_time(&sample.instance_id, end_phase),
        ),
    };
    let missing = |phase| KpiError::MissingPhase {
        id: id.to_string(),
        phase,
    };
    Ok((start.ok_or_else(|| missing(start_phase))?, end.ok_or_else(|| missing(end_phase))?))
}
