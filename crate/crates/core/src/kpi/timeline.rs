use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::KpiError;

/// Lifecycle phases observed for a VNF instance.
///
/// The first six form a chain that must be respected per instance:
/// `OnboardRequested < ImageTransferred < VmActive < InstantiateRequested <
/// VnfConfigured < VnfOperational`. Action phases are ordered per action id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LifecyclePhase {
    OnboardRequested,
    ImageTransferred,
    VmActive,
    InstantiateRequested,
    VnfConfigured,
    VnfOperational,
    ActionExecuted,
    ActionCompleted,
    Terminated,
}

impl LifecyclePhase {
    pub const ALL: [LifecyclePhase; 9] = [
        LifecyclePhase::OnboardRequested,
        LifecyclePhase::ImageTransferred,
        LifecyclePhase::VmActive,
        LifecyclePhase::InstantiateRequested,
        LifecyclePhase::VnfConfigured,
        LifecyclePhase::VnfOperational,
        LifecyclePhase::ActionExecuted,
        LifecyclePhase::ActionCompleted,
        LifecyclePhase::Terminated,
    ];

    /// Position on the deployment chain, if the phase is on it.
    pub fn chain_rank(self) -> Option<u8> {
        match self {
            LifecyclePhase::OnboardRequested => Some(0),
            LifecyclePhase::ImageTransferred => Some(1),
            LifecyclePhase::VmActive => Some(2),
            LifecyclePhase::InstantiateRequested => Some(3),
            LifecyclePhase::VnfConfigured => Some(4),
            LifecyclePhase::VnfOperational => Some(5),
            _ => None,
        }
    }

    pub fn is_action(self) -> bool {
        matches!(
            self,
            LifecyclePhase::ActionExecuted | LifecyclePhase::ActionCompleted
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LifecyclePhase::OnboardRequested => "OnboardRequested",
            LifecyclePhase::ImageTransferred => "ImageTransferred",
            LifecyclePhase::VmActive => "VmActive",
            LifecyclePhase::InstantiateRequested => "InstantiateRequested",
            LifecyclePhase::VnfConfigured => "VnfConfigured",
            LifecyclePhase::VnfOperational => "VnfOperational",
            LifecyclePhase::ActionExecuted => "ActionExecuted",
            LifecyclePhase::ActionCompleted => "ActionCompleted",
            LifecyclePhase::Terminated => "Terminated",
        }
    }
}

impl fmt::Display for LifecyclePhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LifecyclePhase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LifecyclePhase::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown lifecycle phase `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ActionKind {
    ScaleOut,
    ScaleIn,
    Migrate,
    Update,
}

/// Which clock produced a timeline's timestamps. Timelines from different
/// domains never mix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClockDomain {
    /// Simulator virtual time, read in-process.
    Virtual,
    /// Timestamps reported by the target itself over the wire.
    TargetReported,
    /// Harness monotonic wall clock.
    Wall,
}

impl fmt::Display for ClockDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClockDomain::Virtual => "virtual",
            ClockDomain::TargetReported => "target_reported",
            ClockDomain::Wall => "wall",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LifecycleEvent {
    pub instance_id: String,
    pub vnf_name: String,
    pub phase: LifecyclePhase,
    pub timestamp_ns: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action_kind: Option<ActionKind>,
}

impl LifecycleEvent {
    pub fn new(
        instance_id: impl Into<String>,
        vnf_name: impl Into<String>,
        phase: LifecyclePhase,
        timestamp_ns: u64,
    ) -> Self {
        LifecycleEvent {
            instance_id: instance_id.into(),
            vnf_name: vnf_name.into(),
            phase,
            timestamp_ns,
            action_id: None,
            action_kind: None,
        }
    }

    pub fn action(
        instance_id: impl Into<String>,
        vnf_name: impl Into<String>,
        phase: LifecyclePhase,
        timestamp_ns: u64,
        action_id: impl Into<String>,
        kind: ActionKind,
    ) -> Self {
        LifecycleEvent {
            instance_id: instance_id.into(),
            vnf_name: vnf_name.into(),
            phase,
            timestamp_ns,
            action_id: Some(action_id.into()),
            action_kind: Some(kind),
        }
    }
}

/// Time-ordered lifecycle events of one campaign, on one clock.
///
/// Ties on timestamp keep insertion order. Every insertion is checked against
/// the per-instance phase chain and the per-action execute/complete order; a
/// rejected event leaves the timeline untouched.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LifecycleTimeline {
    clock: ClockDomain,
    events: Vec<LifecycleEvent>,
}

impl LifecycleTimeline {
    pub fn new(clock: ClockDomain) -> Self {
        LifecycleTimeline {
            clock,
            events: Vec::new(),
        }
    }

    pub fn clock(&self) -> ClockDomain {
        self.clock
    }

    pub fn events(&self) -> &[LifecycleEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Inserts `event`, keeping the ordering and phase-order invariants.
    pub fn record(&mut self, event: LifecycleEvent) -> Result<(), KpiError> {
        self.check(&event)?;
        let at = self
            .events
            .partition_point(|e| e.timestamp_ns <= event.timestamp_ns);
        self.events.insert(at, event);
        Ok(())
    }

    /// Records every event in order; stops at the first rejection.
    pub fn record_all<I>(&mut self, events: I) -> Result<(), KpiError>
    where
        I: IntoIterator<Item = LifecycleEvent>,
    {
        events.into_iter().try_for_each(|e| self.record(e))
    }

    /// Appends all events of `other`. Both timelines must share a clock.
    pub fn merge(&mut self, other: &LifecycleTimeline) -> Result<(), KpiError> {
        if other.clock != self.clock {
            return Err(KpiError::ClockDomainMismatch {
                expected: self.clock,
                found: other.clock,
            });
        }
        self.record_all(other.events.iter().cloned())
    }

    /// Timestamp of the first event of `instance_id` in `phase`.
    pub fn phase_time(&self, instance_id: &str, phase: LifecyclePhase) -> Option<u64> {
        self.events
            .iter()
            .find(|e| e.instance_id == instance_id && e.phase == phase)
            .map(|e| e.timestamp_ns)
    }

    pub fn instance_events<'a>(&'a self, instance_id: &'a str) -> impl Iterator<Item = &'a LifecycleEvent> + 'a {
        self.events.iter().filter(move |e| e.instance_id == instance_id)
    }

    pub fn action_events<'a>(&'a self, action_id: &'a str) -> impl Iterator<Item = &'a LifecycleEvent> + 'a {
        self.events
            .iter()
            .filter(move |e| e.action_id.as_deref() == Some(action_id))
    }

    fn check(&self, event: &LifecycleEvent) -> Result<(), KpiError> {
        let phase = event.phase;
        if phase.is_action() != event.action_id.is_some() {
            return Err(KpiError::InvalidEvent(format!(
                "{phase} on `{}` must {}carry an action id",
                event.instance_id,
                if phase.is_action() { "" } else { "not " }
            )));
        }
        if event.action_id.is_some() != event.action_kind.is_some() {
            return Err(KpiError::InvalidEvent(
                "action kind must accompany the action id".into(),
            ));
        }

        let violation = |first: LifecyclePhase, second: LifecyclePhase| KpiError::PhaseOrderViolation {
            instance_id: event.instance_id.clone(),
            first,
            second,
        };

        if let Some(action_id) = &event.action_id {
            for other in self.action_events(action_id) {
                if other.phase == phase {
                    return Err(violation(other.phase, phase));
                }
                let (exec, done) = if phase == LifecyclePhase::ActionExecuted {
                    (event.timestamp_ns, other.timestamp_ns)
                } else {
                    (other.timestamp_ns, event.timestamp_ns)
                };
                if exec > done {
                    return Err(violation(LifecyclePhase::ActionExecuted, LifecyclePhase::ActionCompleted));
                }
            }
            return Ok(());
        }

        for other in self.instance_events(&event.instance_id) {
            if other.phase == LifecyclePhase::Terminated {
                if phase == LifecyclePhase::Terminated || event.timestamp_ns > other.timestamp_ns {
                    return Err(violation(phase, LifecyclePhase::Terminated));
                }
                continue;
            }
            if phase == LifecyclePhase::Terminated {
                if other.timestamp_ns > event.timestamp_ns {
                    return Err(violation(other.phase, phase));
                }
                continue;
            }
            let (Some(mine), Some(theirs)) = (phase.chain_rank(), other.phase.chain_rank()) else {
                continue;
            };
            if mine == theirs {
                return Err(violation(other.phase, phase));
            }
            if theirs < mine && other.timestamp_ns > event.timestamp_ns {
                return Err(violation(other.phase, phase));
            }
            if theirs > mine && other.timestamp_ns < event.timestamp_ns {
                return Err(violation(phase, other.phase));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use LifecyclePhase::*;

    fn ev(phase: LifecyclePhase, t: u64) -> LifecycleEvent {
        LifecycleEvent::new("i0", "vBNG", phase, t)
    }

    #[test]
    fn records_in_order() {
        let mut tl = LifecycleTimeline::new(ClockDomain::Virtual);
        tl.record(ev(OnboardRequested, 0)).unwrap();
        tl.record(ev(VmActive, 5)).unwrap();
        assert_eq!(tl.len(), 2);
    }

    #[test]
    fn rejects_out_of_order_phase() {
        let mut tl = LifecycleTimeline::new(ClockDomain::Virtual);
        tl.record(ev(VmActive, 5)).unwrap();
        let err = tl.record(ev(OnboardRequested, 7)).unwrap_err();
        assert_eq!(
            err,
            KpiError::PhaseOrderViolation {
                instance_id: "i0".into(),
                first: OnboardRequested,
                second: VmActive
            }
        );
        assert_eq!(tl.len(), 1);
    }

    #[test]
    fn action_pair_is_valid() {
        let mut tl = LifecycleTimeline::new(ClockDomain::Virtual);
        tl.record(LifecycleEvent::action("i0", "vBNG", ActionExecuted, 1, "a1", ActionKind::ScaleOut))
            .unwrap();
        tl.record(LifecycleEvent::action("i0", "vBNG", ActionCompleted, 4, "a1", ActionKind::ScaleOut))
            .unwrap();
        assert_eq!(tl.action_events("a1").count(), 2);
    }

    #[test]
    fn action_completed_before_executed_rejected() {
        let mut tl = LifecycleTimeline::new(ClockDomain::Virtual);
        tl.record(LifecycleEvent::action("i0", "v", ActionCompleted, 1, "a1", ActionKind::Migrate))
            .unwrap();
        assert!(tl
            .record(LifecycleEvent::action("i0", "v", ActionExecuted, 2, "a1", ActionKind::Migrate))
            .is_err());
    }

    #[test]
    fn action_id_required_iff_action_phase() {
        let mut tl = LifecycleTimeline::new(ClockDomain::Virtual);
        assert!(matches!(tl.record(ev(ActionExecuted, 0)), Err(KpiError::InvalidEvent(_))));
        let mut bad = ev(VmActive, 0);
        bad.action_id = Some("a".into());
        bad.action_kind = Some(ActionKind::Update);
        assert!(matches!(tl.record(bad), Err(KpiError::InvalidEvent(_))));
    }

    #[test]
    fn ties_keep_insertion_order() {
        let mut tl = LifecycleTimeline::new(ClockDomain::Virtual);
        for p in [OnboardRequested, ImageTransferred, VmActive] {
            tl.record(ev(p, 0)).unwrap();
        }
        let phases: Vec<_> = tl.events().iter().map(|e| e.phase).collect();
        assert_eq!(phases, vec![OnboardRequested, ImageTransferred, VmActive]);
    }

    #[test]
    fn nothing_after_termination() {
        let mut tl = LifecycleTimeline::new(ClockDomain::Virtual);
        tl.record(ev(VmActive, 3)).unwrap();
        assert!(tl.record(ev(Terminated, 2)).is_err());
        tl.record(ev(Terminated, 9)).unwrap();
        assert!(tl.record(ev(VnfOperational, 10)).is_err());
        assert!(tl.record(ev(Terminated, 11)).is_err());
    }

    #[test]
    fn merge_rejects_other_clock() {
        let mut a = LifecycleTimeline::new(ClockDomain::Virtual);
        let b = LifecycleTimeline::new(ClockDomain::Wall);
        assert!(matches!(a.merge(&b), Err(KpiError::ClockDomainMismatch { .. })));
    }

    #[test]
    fn phase_names_round_trip() {
        for p in LifecyclePhase::ALL {
            assert_eq!(p.as_str().parse::<LifecyclePhase>().unwrap(), p);
        }
    }
}
