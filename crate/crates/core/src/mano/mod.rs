//! Simulated MANO orchestrator.
//!
//! Accepts lifecycle commands, drives placements and VM lifecycles on a
//! [`VimState`], and records every emitted event on one virtual clock. Each
//! command receives an ordinal (0, 1, 2, ...) in arrival order; the fault
//! plan forces placement rejections by ordinal so retry counts are exact.
//!
//! On a rejection the next candidate in policy order is tried. The decision
//! latency is `attempts * placement_ns_per_attempt`; together with
//! `nbi_processing_ns` it is added once to the first delay of the command.

mod config;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::descriptor::{resolve_nsd, validate_package, DescriptorError, NsDescriptor, Resources, Violation, VnfPackage};
use crate::kpi::{
    ActionKind, ClockDomain, KpiError, LifecycleEvent, LifecyclePhase, LifecycleTimeline, QodInputs,
};
use crate::nfvi::{Metric, SimClock, SimError, VimState, VmState};

pub use config::{FaultEntry, OrchestratorConfig, QodHorizon};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ManoError {
    #[error("package failed validation: {0:?}")]
    ValidationFailed(Vec<Violation>),
    #[error("no feasible node")]
    NoFeasibleNode,
    #[error("no onboarded package for `{0}`")]
    MissingPackage(String),
    #[error("wrong state: {0}")]
    WrongState(String),
    #[error("unknown NS instance `{0}`")]
    UnknownNs(String),
    #[error("unknown NSD `{0}`")]
    UnknownNsd(String),
    #[error("unknown VNF `{0}`")]
    UnknownVnf(String),
    #[error("unknown package `{0}`")]
    UnknownPackage(String),
    #[error("unknown operation `{0}`")]
    UnknownOperation(String),
    #[error("unknown instance `{0}`")]
    UnknownInstance(String),
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
    #[error("package `{0}` is bound to a running NS")]
    PackageInUse(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Kpi(#[from] KpiError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NsState {
    Created,
    Instantiating,
    Operational,
    Scaling,
    Terminated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replica {
    pub vnf_name: String,
    pub instance_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsInstance {
    pub ns_instance_id: String,
    pub nsd_id: String,
    /// VNF name to the instance created by onboarding its package.
    pub vnf_instances: BTreeMap<String, String>,
    pub replicas: Vec<Replica>,
    pub state: NsState,
    #[serde(skip)]
    pending: Vec<String>,
    #[serde(skip)]
    configured: usize,
}

impl NsInstance {
    /// Every instance of the NS: constituents in deployment order, then replicas.
    pub fn all_instances(&self) -> Vec<String> {
        let mut out: Vec<String> = self.vnf_instances.values().cloned().collect();
        out.extend(self.replicas.iter().map(|r| r.instance_id.clone()));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTrace {
    pub action_id: String,
    pub candidate_nodes_considered: Vec<String>,
    pub attempts: u32,
    pub chosen_node: String,
    pub decision_latency_ns: u64,
    pub qod_inputs: QodInputs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OperationKind {
    Onboard,
    Instantiate,
    ScaleOut,
    Migrate,
    Terminate,
    DeletePackage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OperationState {
    Processing,
    Completed,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperationRecord {
    pub op_id: String,
    pub kind: OperationKind,
    pub state: OperationState,
    pub executed_at: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completed_at: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ns_instance_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vnf_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision_trace: Option<DecisionTrace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredPackage {
    pub package_id: String,
    pub package: VnfPackage,
    pub instance_id: String,
    pub bound_ns: Option<String>,
}

/// Result of onboarding one package.
#[derive(Debug, Clone, PartialEq)]
pub struct Onboarded {
    pub package_id: String,
    pub instance_id: String,
    pub op_id: String,
    pub events: Vec<LifecycleEvent>,
    pub trace: DecisionTrace,
}

/// Result of a run-time action (scale-out or migration).
#[derive(Debug, Clone, PartialEq)]
pub struct ActionOutcome {
    pub op_id: String,
    pub instance_id: String,
    pub events: Vec<LifecycleEvent>,
    pub trace: DecisionTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VnfStatus {
    /// Unique display name of the instance (replicas carry a suffix).
    pub name: String,
    pub vnf_name: String,
    pub instance_id: String,
    pub state: VmState,
    pub phase_timestamps: BTreeMap<LifecyclePhase, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsStatus {
    pub ns_instance_id: String,
    pub nsd_id: String,
    pub state: NsState,
    pub vnfs: Vec<VnfStatus>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceInfo {
    pub id: String,
    pub name: String,
    pub vnf_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackageStatus {
    pub id: String,
    pub vnf_name: String,
    pub instance_id: String,
    pub state: VmState,
    pub phase_timestamps: BTreeMap<LifecyclePhase, u64>,
}

struct Decision {
    chosen: String,
    trace: DecisionTrace,
}

#[derive(Debug, Clone)]
pub struct Orchestrator {
    cfg: OrchestratorConfig,
    vim: VimState,
    clock: SimClock,
    packages: BTreeMap<String, StoredPackage>,
    nsds: BTreeMap<String, NsDescriptor>,
    ns: BTreeMap<String, NsInstance>,
    operations: BTreeMap<String, OperationRecord>,
    names: BTreeMap<String, String>,
    timeline: LifecycleTimeline,
    next_ordinal: u64,
    next_instance: u64,
    next_package: u64,
    next_ns: u64,
}

impl Orchestrator {
    pub fn new(cfg: OrchestratorConfig, vim: VimState) -> Result<Self, ManoError> {
        cfg.validate()?;
        Ok(Orchestrator {
            cfg,
            vim,
            clock: SimClock::new(),
            packages: BTreeMap::new(),
            nsds: BTreeMap::new(),
            ns: BTreeMap::new(),
            operations: BTreeMap::new(),
            names: BTreeMap::new(),
            timeline: LifecycleTimeline::new(ClockDomain::Virtual),
            next_ordinal: 0,
            next_instance: 0,
            next_package: 0,
            next_ns: 0,
        })
    }

    pub fn config(&self) -> &OrchestratorConfig {
        &self.cfg
    }

    pub fn vim(&self) -> &VimState {
        &self.vim
    }

    pub fn now(&self) -> u64 {
        self.clock.now()
    }

    /// Every event emitted so far.
    pub fn timeline(&self) -> &LifecycleTimeline {
        &self.timeline
    }

    /// Ordinal the next command will receive.
    pub fn next_ordinal(&self) -> u64 {
        self.next_ordinal
    }

    pub fn ns_instance(&self, ns_id: &str) -> Option<&NsInstance> {
        self.ns.get(ns_id)
    }

    pub fn packages(&self) -> impl Iterator<Item = &StoredPackage> {
        self.packages.values()
    }

    pub fn nsd(&self, nsd_id: &str) -> Option<&NsDescriptor> {
        self.nsds.get(nsd_id)
    }

    pub fn operation(&self, op_id: &str) -> Result<&OperationRecord, ManoError> {
        self.operations
            .get(op_id)
            .ok_or_else(|| ManoError::UnknownOperation(op_id.to_string()))
    }

    fn begin_command(&mut self) -> (u64, String) {
        let ordinal = self.next_ordinal;
        self.next_ordinal += 1;
        (ordinal, format!("op-{ordinal}"))
    }

    fn forced_rejections(&self, ordinal: u64) -> u32 {
        self.cfg
            .fault_plan
            .iter()
            .filter(|f| f.ordinal == ordinal)
            .map(|f| f.rejections)
            .sum()
    }

    fn fresh_instance_id(&mut self) -> String {
        let id = format!("vnfi-{}", self.next_instance);
        self.next_instance += 1;
        id
    }

    fn unique_name(&self, base: &str) -> String {
        let taken: BTreeSet<&str> = self
            .names
            .iter()
            .filter(|(id, _)| {
                self.vim
                    .instance(id)
                    .is_none_or(|vm| vm.state != VmState::Terminated)
            })
            .map(|(_, n)| n.as_str())
            .collect();
        if !taken.contains(base) {
            return base.to_string();
        }
        (2..)
            .map(|k| format!("{base}-{k}"))
            .find(|n| !taken.contains(n.as_str()))
            .expect("unbounded suffixes")
    }

    fn record_events(&mut self, events: &[LifecycleEvent]) -> Result<(), ManoError> {
        self.timeline.record_all(events.iter().cloned())?;
        Ok(())
    }

    fn record_failure(&mut self, op_id: &str, kind: OperationKind, err: &ManoError) {
        self.operations.insert(
            op_id.to_string(),
            OperationRecord {
                op_id: op_id.to_string(),
                kind,
                state: OperationState::Failed,
                executed_at: self.clock.now(),
                completed_at: None,
                ns_instance_id: None,
                vnf_name: None,
                instance_id: None,
                decision_trace: None,
                error: Some(err.to_string()),
            },
        );
    }

    /// Picks a node among `candidates` (policy order), skipping as many as
    /// the fault plan forces for this ordinal.
    fn decide(
        &self,
        ordinal: u64,
        action_id: &str,
        demand: &Resources,
        candidates: Vec<String>,
    ) -> Result<Decision, ManoError> {
        let forced = self.forced_rejections(ordinal) as usize;
        let chosen = candidates.get(forced).cloned().ok_or(ManoError::NoFeasibleNode)?;
        let attempts = forced as u32 + 1;
        let decision_latency_ns = u64::from(attempts) * self.cfg.placement_ns_per_attempt;
        let qod_inputs = self.qod_inputs(&chosen, demand, attempts, decision_latency_ns);
        Ok(Decision {
            trace: DecisionTrace {
                action_id: action_id.to_string(),
                candidate_nodes_considered: candidates,
                attempts,
                chosen_node: chosen.clone(),
                decision_latency_ns,
                qod_inputs,
            },
            chosen,
        })
    }

    /// QoD inputs for placing `demand` on `node_id`, before allocation.
    fn qod_inputs(
        &self,
        node_id: &str,
        demand: &Resources,
        attempts: u32,
        decision_latency_ns: u64,
    ) -> QodInputs {
        let node = self.vim.node(node_id).expect("candidate nodes exist");
        let before = node.residual();
        let after = before.checked_sub(demand).unwrap_or(Resources::ZERO);
        let headroom = |residual: &Resources, own: &Resources| {
            residual
                .dims()
                .iter()
                .zip(own.dims())
                .filter(|(_, d)| *d > 0)
                .map(|(&r, d)| (r as f64 / d as f64).min(1.0))
                .fold(1.0_f64, f64::min)
        };
        let (mut hb, mut ha) = (Vec::new(), Vec::new());
        for own in node.allocations.values() {
            hb.push(headroom(&before, own));
            ha.push(headroom(&after, own));
        }
        QodInputs {
            required_short: *demand,
            required_long: self.cfg.long_term_demand(demand),
            offered_residual: before,
            colocated_headroom_before: hb,
            colocated_headroom_after: ha,
            attempts,
            decision_latency_ns,
        }
    }

    /// Onboards a package: places and boots its VM.
    pub fn onboard(&mut self, pkg: VnfPackage) -> Result<Onboarded, ManoError> {
        let (ordinal, op_id) = self.begin_command();
        let result = self.onboard_inner(ordinal, &op_id, pkg);
        if let Err(e) = &result {
            self.record_failure(&op_id, OperationKind::Onboard, e);
        }
        result
    }

    fn onboard_inner(&mut self, ordinal: u64, op_id: &str, pkg: VnfPackage) -> Result<Onboarded, ManoError> {
        let violations = validate_package(&pkg);
        if !violations.is_empty() {
            return Err(ManoError::ValidationFailed(violations));
        }
        let demand = pkg.vnfd.flavor.resources();
        let candidates = self.vim.rank_candidates(&demand, self.cfg.placement_policy);
        let decision = self.decide(ordinal, op_id, &demand, candidates)?;

        let instance_id = self.fresh_instance_id();
        self.vim.allocate(&decision.chosen, &instance_id, demand)?;
        let overhead = self.cfg.nbi_processing_ns + decision.trace.decision_latency_ns;
        let t0 = self.clock.now();
        let (_, events) = self
            .vim
            .boot_vm_with_overhead(&instance_id, &pkg, overhead, &mut self.clock)?;
        self.record_events(&events)?;

        let package_id = format!("pkg-{}", self.next_package);
        self.next_package += 1;
        let name = self.unique_name(&pkg.vnfd.name);
        self.names.insert(instance_id.clone(), name);
        self.operations.insert(
            op_id.to_string(),
            OperationRecord {
                op_id: op_id.to_string(),
                kind: OperationKind::Onboard,
                state: OperationState::Completed,
                executed_at: t0,
                completed_at: Some(self.clock.now()),
                ns_instance_id: None,
                vnf_name: Some(pkg.vnfd.name.clone()),
                instance_id: Some(instance_id.clone()),
                decision_trace: Some(decision.trace.clone()),
                error: None,
            },
        );
        self.packages.insert(
            package_id.clone(),
            StoredPackage {
                package_id: package_id.clone(),
                package: pkg,
                instance_id: instance_id.clone(),
                bound_ns: None,
            },
        );
        Ok(Onboarded {
            package_id,
            instance_id,
            op_id: op_id.to_string(),
            events,
            trace: decision.trace,
        })
    }

    /// Stores an NSD after resolving it against the onboarded VNFDs.
    pub fn register_nsd(&mut self, nsd: NsDescriptor) -> Result<String, ManoError> {
        let known: Vec<_> = self.packages.values().map(|p| p.package.vnfd.clone()).collect();
        resolve_nsd(&nsd, &known)?;
        let id = nsd.id.clone();
        self.nsds.insert(id.clone(), nsd);
        Ok(id)
    }

    pub fn register_nsd_document(&mut self, text: &str) -> Result<String, ManoError> {
        let known: Vec<_> = self.packages.values().map(|p| p.package.vnfd.clone()).collect();
        let nsd = crate::descriptor::parse_nsd(text, &known)?;
        self.register_nsd(nsd)
    }

    /// Creates an NS instance record. Bookkeeping only: no ordinal, no delay.
    pub fn create_ns(&mut self, nsd_id: &str) -> Result<String, ManoError> {
        if !self.nsds.contains_key(nsd_id) {
            return Err(ManoError::UnknownNsd(nsd_id.to_string()));
        }
        let id = format!("ns-{}", self.next_ns);
        self.next_ns += 1;
        self.ns.insert(
            id.clone(),
            NsInstance {
                ns_instance_id: id.clone(),
                nsd_id: nsd_id.to_string(),
                vnf_instances: BTreeMap::new(),
                replicas: Vec::new(),
                state: NsState::Created,
                pending: Vec::new(),
                configured: 0,
            },
        );
        Ok(id)
    }

    /// Creates and fully instantiates an NS from a registered NSD.
    pub fn instantiate_ns(&mut self, nsd_id: &str) -> Result<(NsInstance, Vec<LifecycleEvent>), ManoError> {
        let ns_id = self.create_ns(nsd_id)?;
        match self.instantiate(&ns_id) {
            Ok((_, events)) => Ok((self.ns[&ns_id].clone(), events)),
            Err(e) => {
                self.ns.remove(&ns_id);
                Err(e)
            }
        }
    }

    /// Instantiates every constituent of a `Created` NS in forwarding-graph
    /// order. Returns the operation id and the events.
    pub fn instantiate(&mut self, ns_id: &str) -> Result<(String, Vec<LifecycleEvent>), ManoError> {
        let op_id = self.begin_instantiate(ns_id)?;
        let mut events = Vec::new();
        while let Some(step) = self.instantiate_next(ns_id)? {
            events.extend(step);
        }
        Ok((op_id, events))
    }

    /// Binds constituent VMs and moves the NS to `Instantiating`. Fails with
    /// `MissingPackage` before binding anything if a constituent has no
    /// onboarded, unbound, active VM.
    pub fn begin_instantiate(&mut self, ns_id: &str) -> Result<String, ManoError> {
        let (_, op_id) = self.begin_command();
        let result = self.begin_instantiate_inner(ns_id, &op_id);
        if let Err(e) = &result {
            self.record_failure(&op_id, OperationKind::Instantiate, e);
        }
        result.map(|_| op_id)
    }

    fn begin_instantiate_inner(&mut self, ns_id: &str, op_id: &str) -> Result<(), ManoError> {
        let ns = self
            .ns
            .get(ns_id)
            .ok_or_else(|| ManoError::UnknownNs(ns_id.to_string()))?;
        if ns.state != NsState::Created {
            return Err(ManoError::WrongState(format!("NS `{ns_id}` is {:?}", ns.state)));
        }
        let nsd = &self.nsds[&ns.nsd_id];
        let order: Vec<String> = nsd.deployment_order().into_iter().map(str::to_string).collect();

        let mut bindings = Vec::new();
        for vnfd_id in &order {
            let pkg = self
                .packages
                .values()
                .find(|p| {
                    p.package.vnfd.id == *vnfd_id
                        && p.bound_ns.is_none()
                        && !bindings.iter().any(|(id, _): &(String, String)| *id == p.package_id)
                        && self
                            .vim
                            .instance(&p.instance_id)
                            .is_some_and(|vm| vm.state == VmState::Active)
                })
                .ok_or_else(|| ManoError::MissingPackage(vnfd_id.clone()))?;
            bindings.push((pkg.package_id.clone(), vnfd_id.clone()));
        }

        let now = self.clock.now();
        let mut vnf_instances = BTreeMap::new();
        let mut pending = Vec::new();
        for (pkg_id, _) in &bindings {
            let pkg = self.packages.get_mut(pkg_id).expect("found above");
            pkg.bound_ns = Some(ns_id.to_string());
            vnf_instances.insert(pkg.package.vnfd.name.clone(), pkg.instance_id.clone());
            pending.push(pkg.instance_id.clone());
        }
        let ns = self.ns.get_mut(ns_id).expect("checked above");
        ns.vnf_instances = vnf_instances;
        ns.pending = pending;
        ns.state = NsState::Instantiating;
        self.operations.insert(
            op_id.to_string(),
            OperationRecord {
                op_id: op_id.to_string(),
                kind: OperationKind::Instantiate,
                state: OperationState::Processing,
                executed_at: now,
                completed_at: None,
                ns_instance_id: Some(ns_id.to_string()),
                vnf_name: None,
                instance_id: None,
                decision_trace: None,
                error: None,
            },
        );
        Ok(())
    }

    /// Configures the next pending VNF of an `Instantiating` NS; `None` once
    /// the NS is operational.
    pub fn instantiate_next(&mut self, ns_id: &str) -> Result<Option<Vec<LifecycleEvent>>, ManoError> {
        let ns = self
            .ns
            .get(ns_id)
            .ok_or_else(|| ManoError::UnknownNs(ns_id.to_string()))?;
        if ns.state != NsState::Instantiating {
            return Ok(None);
        }
        let first = ns.configured == 0;
        let Some(instance_id) = ns.pending.first().cloned() else {
            return Ok(None);
        };
        let vnfd = self
            .packages
            .values()
            .find(|p| p.instance_id == instance_id)
            .map(|p| p.package.vnfd.clone())
            .expect("bound instances have packages");
        let overhead = if first { self.cfg.nbi_processing_ns } else { 0 };
        let events = self
            .vim
            .instantiate_vnf_with_overhead(&instance_id, &vnfd, overhead, &mut self.clock)?;
        self.record_events(&events)?;

        let now = self.clock.now();
        let ns = self.ns.get_mut(ns_id).expect("checked above");
        ns.pending.remove(0);
        ns.configured += 1;
        if ns.pending.is_empty() {
            ns.state = NsState::Operational;
            if let Some(op) = self
                .operations
                .values_mut()
                .rev()
                .find(|o| o.kind == OperationKind::Instantiate && o.ns_instance_id.as_deref() == Some(ns_id))
            {
                op.state = OperationState::Completed;
                op.completed_at = Some(now);
            }
        }
        Ok(Some(events))
    }

    fn operational_ns(&self, ns_id: &str) -> Result<&NsInstance, ManoError> {
        let ns = self
            .ns
            .get(ns_id)
            .ok_or_else(|| ManoError::UnknownNs(ns_id.to_string()))?;
        if ns.state != NsState::Operational {
            return Err(ManoError::WrongState(format!("NS `{ns_id}` is {:?}", ns.state)));
        }
        Ok(ns)
    }

    /// Adds one replica of `vnf_name`, with the original VNFD unchanged.
    pub fn scale_out(&mut self, ns_id: &str, vnf_name: &str) -> Result<ActionOutcome, ManoError> {
        let (ordinal, op_id) = self.begin_command();
        let result = self.scale_out_inner(ordinal, &op_id, ns_id, vnf_name);
        if let Err(e) = &result {
            self.record_failure(&op_id, OperationKind::ScaleOut, e);
        }
        result
    }

    fn scale_out_inner(
        &mut self,
        ordinal: u64,
        op_id: &str,
        ns_id: &str,
        vnf_name: &str,
    ) -> Result<ActionOutcome, ManoError> {
        let ns = self.operational_ns(ns_id)?;
        let original = ns
            .vnf_instances
            .get(vnf_name)
            .ok_or_else(|| ManoError::UnknownVnf(vnf_name.to_string()))?;
        let pkg = self
            .packages
            .values()
            .find(|p| &p.instance_id == original)
            .map(|p| p.package.clone())
            .expect("bound instances have packages");
        let replica_count = ns.replicas.iter().filter(|r| r.vnf_name == vnf_name).count();

        let demand = pkg.vnfd.flavor.resources();
        let candidates = self.vim.rank_candidates(&demand, self.cfg.placement_policy);
        let decision = self.decide(ordinal, op_id, &demand, candidates)?;

        let instance_id = self.fresh_instance_id();
        self.vim.allocate(&decision.chosen, &instance_id, demand)?;
        let t0 = self.clock.now();
        let overhead = self.cfg.nbi_processing_ns + decision.trace.decision_latency_ns;
        let executed = LifecycleEvent::action(
            &instance_id,
            vnf_name,
            LifecyclePhase::ActionExecuted,
            t0,
            op_id,
            ActionKind::ScaleOut,
        );
        let (_, boot) = self
            .vim
            .boot_vm_with_overhead(&instance_id, &pkg, overhead, &mut self.clock)?;
        let configure = self.vim.instantiate_vnf(&instance_id, &pkg.vnfd, &mut self.clock)?;
        let done = self.clock.now();
        let completed = LifecycleEvent::action(
            &instance_id,
            vnf_name,
            LifecyclePhase::ActionCompleted,
            done,
            op_id,
            ActionKind::ScaleOut,
        );

        let mut events = vec![executed];
        events.extend(boot);
        events.extend(configure);
        events.push(completed);
        self.record_events(&events)?;

        let name = self.unique_name(&format!("{vnf_name}-r{}", replica_count + 1));
        self.names.insert(instance_id.clone(), name);
        let ns = self.ns.get_mut(ns_id).expect("checked above");
        ns.replicas.push(Replica {
            vnf_name: vnf_name.to_string(),
            instance_id: instance_id.clone(),
        });
        self.operations.insert(
            op_id.to_string(),
            OperationRecord {
                op_id: op_id.to_string(),
                kind: OperationKind::ScaleOut,
                state: OperationState::Completed,
                executed_at: t0,
                completed_at: Some(done),
                ns_instance_id: Some(ns_id.to_string()),
                vnf_name: Some(vnf_name.to_string()),
                instance_id: Some(instance_id.clone()),
                decision_trace: Some(decision.trace.clone()),
                error: None,
            },
        );
        Ok(ActionOutcome {
            op_id: op_id.to_string(),
            instance_id,
            events,
            trace: decision.trace,
        })
    }

    /// Live-migrates the original instance of `vnf_name` to another node
    /// chosen by the placement policy.
    pub fn migrate(&mut self, ns_id: &str, vnf_name: &str) -> Result<ActionOutcome, ManoError> {
        let (ordinal, op_id) = self.begin_command();
        let result = self.migrate_inner(ordinal, &op_id, ns_id, vnf_name);
        if let Err(e) = &result {
            self.record_failure(&op_id, OperationKind::Migrate, e);
        }
        result
    }

    fn migrate_inner(
        &mut self,
        ordinal: u64,
        op_id: &str,
        ns_id: &str,
        vnf_name: &str,
    ) -> Result<ActionOutcome, ManoError> {
        let ns = self.operational_ns(ns_id)?;
        let instance_id = ns
            .vnf_instances
            .get(vnf_name)
            .ok_or_else(|| ManoError::UnknownVnf(vnf_name.to_string()))?
            .clone();
        let vm = self
            .vim
            .instance(&instance_id)
            .ok_or_else(|| ManoError::UnknownInstance(instance_id.clone()))?;
        let current = vm.node_id.clone();
        let demand = vm.flavor.resources();
        let candidates = self
            .vim
            .rank_candidates_where(&demand, self.cfg.placement_policy, |n| n.node_id != current);
        let decision = self.decide(ordinal, op_id, &demand, candidates)?;

        let overhead = self.cfg.nbi_processing_ns + decision.trace.decision_latency_ns;
        let events = self.vim.migrate_with_overhead(
            &instance_id,
            &decision.chosen,
            op_id,
            overhead,
            &mut self.clock,
        )?;
        self.record_events(&events)?;
        self.operations.insert(
            op_id.to_string(),
            OperationRecord {
                op_id: op_id.to_string(),
                kind: OperationKind::Migrate,
                state: OperationState::Completed,
                executed_at: events[0].timestamp_ns,
                completed_at: Some(events[1].timestamp_ns),
                ns_instance_id: Some(ns_id.to_string()),
                vnf_name: Some(vnf_name.to_string()),
                instance_id: Some(instance_id.clone()),
                decision_trace: Some(decision.trace.clone()),
                error: None,
            },
        );
        Ok(ActionOutcome {
            op_id: op_id.to_string(),
            instance_id,
            events,
            trace: decision.trace,
        })
    }

    /// Terminates every instance of an NS (in any state) and forgets it.
    pub fn terminate_ns(&mut self, ns_id: &str) -> Result<Vec<LifecycleEvent>, ManoError> {
        let (_, op_id) = self.begin_command();
        let Some(ns) = self.ns.get(ns_id) else {
            let err = ManoError::UnknownNs(ns_id.to_string());
            self.record_failure(&op_id, OperationKind::Terminate, &err);
            return Err(err);
        };
        let instances = ns.all_instances();
        let t0 = self.clock.now();
        self.clock.advance(self.cfg.nbi_processing_ns);

        let mut events = Vec::new();
        for id in &instances {
            if let Some(e) = self.vim.terminate(id, &mut self.clock)? {
                events.push(e);
            }
        }
        self.record_events(&events)?;
        for pkg in self.packages.values_mut() {
            if pkg.bound_ns.as_deref() == Some(ns_id) {
                pkg.bound_ns = None;
            }
        }
        self.ns.remove(ns_id);
        self.operations.insert(
            op_id.clone(),
            OperationRecord {
                op_id,
                kind: OperationKind::Terminate,
                state: OperationState::Completed,
                executed_at: t0,
                completed_at: Some(self.clock.now()),
                ns_instance_id: Some(ns_id.to_string()),
                vnf_name: None,
                instance_id: None,
                decision_trace: None,
                error: None,
            },
        );
        Ok(events)
    }

    /// Removes a package that is not bound to an NS, terminating its VM if
    /// it is still live.
    pub fn delete_package(&mut self, package_id: &str) -> Result<Vec<LifecycleEvent>, ManoError> {
        let (_, op_id) = self.begin_command();
        let result = (|| {
            let pkg = self
                .packages
                .get(package_id)
                .ok_or_else(|| ManoError::UnknownPackage(package_id.to_string()))?;
            if pkg.bound_ns.is_some() {
                return Err(ManoError::PackageInUse(package_id.to_string()));
            }
            let instance_id = pkg.instance_id.clone();
            let live = self
                .vim
                .instance(&instance_id)
                .is_some_and(|vm| vm.state != VmState::Terminated);
            let mut events = Vec::new();
            if live {
                self.clock.advance(self.cfg.nbi_processing_ns);
                if let Some(e) = self.vim.terminate(&instance_id, &mut self.clock)? {
                    events.push(e);
                }
                self.record_events(&events)?;
            }
            self.packages.remove(package_id);
            Ok(events)
        })();
        if let Err(e) = &result {
            self.record_failure(&op_id, OperationKind::DeletePackage, e);
        }
        result
    }

    fn phase_timestamps(&self, instance_id: &str) -> BTreeMap<LifecyclePhase, u64> {
        let mut out = BTreeMap::new();
        for e in self.timeline.instance_events(instance_id) {
            if !e.phase.is_action() {
                out.entry(e.phase).or_insert(e.timestamp_ns);
            }
        }
        out
    }

    pub fn instance_name(&self, instance_id: &str) -> Option<&str> {
        self.names.get(instance_id).map(String::as_str)
    }

    fn vnf_status(&self, instance_id: &str) -> Option<VnfStatus> {
        let vm = self.vim.instance(instance_id)?;
        Some(VnfStatus {
            name: self.names.get(instance_id).cloned().unwrap_or_else(|| vm.vnf_name.clone()),
            vnf_name: vm.vnf_name.clone(),
            instance_id: instance_id.to_string(),
            state: vm.state,
            phase_timestamps: self.phase_timestamps(instance_id),
        })
    }

    pub fn ns_status(&self, ns_id: &str) -> Result<NsStatus, ManoError> {
        let ns = self
            .ns
            .get(ns_id)
            .ok_or_else(|| ManoError::UnknownNs(ns_id.to_string()))?;
        let order: Vec<String> = self.nsds[&ns.nsd_id]
            .deployment_order()
            .into_iter()
            .filter_map(|id| {
                self.packages
                    .values()
                    .find(|p| p.package.vnfd.id == id && p.bound_ns.as_deref() == Some(ns_id))
                    .map(|p| p.instance_id.clone())
            })
            .chain(ns.replicas.iter().map(|r| r.instance_id.clone()))
            .collect();
        Ok(NsStatus {
            ns_instance_id: ns_id.to_string(),
            nsd_id: ns.nsd_id.clone(),
            state: ns.state,
            vnfs: order.iter().filter_map(|id| self.vnf_status(id)).collect(),
        })
    }

    pub fn package_status(&self, package_id: &str) -> Result<PackageStatus, ManoError> {
        let pkg = self
            .packages
            .get(package_id)
            .ok_or_else(|| ManoError::UnknownPackage(package_id.to_string()))?;
        let vm = self
            .vim
            .instance(&pkg.instance_id)
            .ok_or_else(|| ManoError::UnknownInstance(pkg.instance_id.clone()))?;
        Ok(PackageStatus {
            id: package_id.to_string(),
            vnf_name: pkg.package.vnfd.name.clone(),
            instance_id: pkg.instance_id.clone(),
            state: vm.state,
            phase_timestamps: self.phase_timestamps(&pkg.instance_id),
        })
    }

    /// Live instances in creation order.
    pub fn live_instances(&self) -> Vec<InstanceInfo> {
        let mut vms: Vec<_> = self
            .vim
            .instances()
            .filter(|vm| vm.state != VmState::Terminated)
            .collect();
        vms.sort_by_key(|vm| {
            vm.instance_id
                .trim_start_matches("vnfi-")
                .parse::<u64>()
                .unwrap_or(u64::MAX)
        });
        vms.into_iter()
            .map(|vm| InstanceInfo {
                id: vm.instance_id.clone(),
                name: self
                    .names
                    .get(&vm.instance_id)
                    .cloned()
                    .unwrap_or_else(|| vm.vnf_name.clone()),
                vnf_name: vm.vnf_name.clone(),
            })
            .collect()
    }

    /// Metric name to metric id for one instance.
    pub fn instance_metrics(&self, instance_id: &str) -> Result<BTreeMap<String, String>, ManoError> {
        if self.vim.instance(instance_id).is_none() {
            return Err(ManoError::UnknownInstance(instance_id.to_string()));
        }
        Ok(Metric::ALL
            .into_iter()
            .map(|m| (m.as_str().to_string(), format!("{instance_id}.{m}")))
            .collect())
    }

    /// Measure series `(timestamp_ns, value)` of a metric id.
    pub fn measures(&self, metric_id: &str) -> Result<Vec<(u64, f64)>, ManoError> {
        let unknown = || ManoError::UnknownMetric(metric_id.to_string());
        let (instance_id, metric) = metric_id.rsplit_once('.').ok_or_else(unknown)?;
        let metric: Metric = metric.parse().map_err(|_| unknown())?;
        self.vim
            .metric_series(instance_id, metric, self.clock.now())
            .map_err(|_| unknown())
    }
}

#[cfg(test)]
mod tests;
