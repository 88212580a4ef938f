//! JSON bodies of the northbound interface and the native state vocabulary.

use std::collections::BTreeMap;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::kpi::LifecyclePhase;
use crate::mano::{DecisionTrace, NsState, NsStatus, OperationKind, OperationRecord, OperationState, PackageStatus, VnfStatus};
use crate::nfvi::VmState;

pub const NS_READY: &str = "READY";
pub const OP_COMPLETED: &str = "COMPLETED";
pub const OP_FAILED: &str = "FAILED";

pub fn ns_state_str(s: NsState) -> &'static str {
    match s {
        NsState::Created => "NOT_INSTANTIATED",
        NsState::Instantiating => "BUILDING",
        NsState::Operational => NS_READY,
        NsState::Scaling => "SCALING",
        NsState::Terminated => "TERMINATED",
    }
}

pub fn vm_state_str(s: VmState) -> &'static str {
    match s {
        VmState::Booting => "BUILD",
        VmState::Active => "ACTIVE",
        VmState::Configuring => "CONFIGURING",
        VmState::Operational => "RUNNING",
        VmState::Migrating => "MIGRATING",
        VmState::Terminated => "DELETED",
    }
}

pub fn op_state_str(s: OperationState) -> &'static str {
    match s {
        OperationState::Processing => "PROCESSING",
        OperationState::Completed => OP_COMPLETED,
        OperationState::Failed => OP_FAILED,
    }
}

/// A native state string seen on the wire, mapped to the phase it marks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhaseMapping {
    Phase(LifecyclePhase),
    /// A state with no lifecycle meaning here; reported, never guessed.
    Unmapped(String),
}

pub fn map_native_state(state: &str) -> PhaseMapping {
    let phase = match state {
        "BUILD" => LifecyclePhase::OnboardRequested,
        "ACTIVE" => LifecyclePhase::VmActive,
        "CONFIGURING" => LifecyclePhase::InstantiateRequested,
        "RUNNING" => LifecyclePhase::VnfOperational,
        "MIGRATING" => LifecyclePhase::ActionExecuted,
        "DELETED" => LifecyclePhase::Terminated,
        other => return PhaseMapping::Unmapped(other.to_string()),
    };
    PhaseMapping::Phase(phase)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VnfView {
    pub name: String,
    pub vnf_name: String,
    pub instance_id: String,
    pub state: String,
    #[serde(default)]
    pub phase_timestamps: BTreeMap<LifecyclePhase, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsView {
    pub id: String,
    pub nsd_id: String,
    pub state: String,
    pub vnfs: Vec<VnfView>,
}

impl NsView {
    pub fn is_ready(&self) -> bool {
        self.state == NS_READY
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackageView {
    pub id: String,
    pub vnf_name: String,
    pub instance_id: String,
    pub state: String,
    #[serde(default)]
    pub phase_timestamps: BTreeMap<LifecyclePhase, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpView {
    pub id: String,
    pub kind: OperationKind,
    pub state: String,
    pub executed_at: u64,
    #[serde(default)]
    pub completed_at: Option<u64>,
    #[serde(default)]
    pub instance_id: Option<String>,
    #[serde(default)]
    pub vnf_name: Option<String>,
    #[serde(default)]
    pub decision_trace: Option<DecisionTrace>,
    #[serde(default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Created {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpAccepted {
    pub op_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CreateNs {
    pub nsd_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VnfAction {
    pub vnf_name: String,
}

pub const SCALE_OUT: &str = "SCALE_OUT";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleRequest {
    #[serde(default = "scale_out_kind")]
    pub kind: String,
    pub vnf_name: String,
}

fn scale_out_kind() -> String {
    SCALE_OUT.into()
}

/// One point of a measure series: RFC 3339 UTC timestamp and value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measure(pub String, pub f64);

/// Nanoseconds since the Unix epoch as RFC 3339 UTC with nanosecond digits.
pub fn rfc3339(ns: u64) -> String {
    DateTime::<Utc>::from_timestamp_nanos(ns as i64).to_rfc3339_opts(SecondsFormat::Nanos, true)
}

pub fn parse_rfc3339(text: &str) -> Option<u64> {
    DateTime::parse_from_rfc3339(text)
        .ok()?
        .timestamp_nanos_opt()
        .and_then(|n| u64::try_from(n).ok())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
}

impl From<VnfStatus> for VnfView {
    fn from(v: VnfStatus) -> Self {
        VnfView {
            name: v.name,
            vnf_name: v.vnf_name,
            instance_id: v.instance_id,
            state: vm_state_str(v.state).to_string(),
            phase_timestamps: v.phase_timestamps,
        }
    }
}

impl From<NsStatus> for NsView {
    fn from(s: NsStatus) -> Self {
        NsView {
            id: s.ns_instance_id,
            nsd_id: s.nsd_id,
            state: ns_state_str(s.state).to_string(),
            vnfs: s.vnfs.into_iter().map(VnfView::from).collect(),
        }
    }
}

impl From<PackageStatus> for PackageView {
    fn from(p: PackageStatus) -> Self {
        PackageView {
            id: p.id,
            vnf_name: p.vnf_name,
            instance_id: p.instance_id,
            state: vm_state_str(p.state).to_string(),
            phase_timestamps: p.phase_timestamps,
        }
    }
}

impl From<OperationRecord> for OpView {
    fn from(o: OperationRecord) -> Self {
        OpView {
            id: o.op_id,
            kind: o.kind,
            state: op_state_str(o.state).to_string(),
            executed_at: o.executed_at,
            completed_at: o.completed_at,
            instance_id: o.instance_id,
            vnf_name: o.vnf_name,
            decision_trace: o.decision_trace,
            error: o.error,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn native_states_round_trip() {
        for s in [
            VmState::Booting,
            VmState::Active,
            VmState::Configuring,
            VmState::Operational,
            VmState::Migrating,
            VmState::Terminated,
        ] {
            assert!(matches!(map_native_state(vm_state_str(s)), PhaseMapping::Phase(_)));
        }
        assert_eq!(map_native_state("PAUSED"), PhaseMapping::Unmapped("PAUSED".into()));
    }

    #[test]
    fn timestamps_round_trip() {
        for t in [0, 1, 1_500_000_000_123, u64::from(u32::MAX) * 1_000_000_007] {
            assert_eq!(parse_rfc3339(&rfc3339(t)), Some(t));
        }
        assert_eq!(rfc3339(1), "1970-01-01T00:00:00.000000001Z");
    }
}
