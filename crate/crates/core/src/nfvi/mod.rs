//! Discrete-event model of a VIM-managed compute pool.
//!
//! All time is virtual: operations read the start time from a [`SimClock`],
//! emit lifecycle events at `start + delays` and advance the clock to the
//! last emitted timestamp. Nothing sleeps. Every operation is transactional:
//! on error the state (including the jitter generator) is unchanged.

mod delay;
mod metrics;
mod placement;

use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::descriptor::{ResourceFlavor, Resources, VnfDescriptor, VnfPackage};
use crate::kpi::{ActionKind, LifecycleEvent, LifecyclePhase};

pub use delay::DelayModel;
pub use metrics::{Metric, MetricModel, MetricSample};
pub use placement::{best_fit_score, PlacementPolicy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("invalid node capacity: {0}")]
    InvalidCapacity(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("no feasible node")]
    NoFeasibleNode,
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown instance `{0}`")]
    UnknownInstance(String),
    #[error("node `{node_id}` cannot admit `{instance_id}`")]
    AdmissionViolation { node_id: String, instance_id: String },
    #[error("duplicate instance `{0}`")]
    DuplicateInstance(String),
    #[error("no allocation for instance `{0}`")]
    NoAllocation(String),
    #[error("instance `{instance_id}` is {state}, expected {expected}")]
    WrongState {
        instance_id: String,
        state: VmState,
        expected: VmState,
    },
}

/// Virtual time source of one simulation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimClock {
    now_ns: u64,
}

impl SimClock {
    pub fn new() -> Self {
        SimClock::default()
    }

    pub fn starting_at(now_ns: u64) -> Self {
        SimClock { now_ns }
    }

    pub fn now(&self) -> u64 {
        self.now_ns
    }

    pub fn advance(&mut self, ns: u64) {
        self.now_ns = self.now_ns.saturating_add(ns);
    }

    /// Moves forward to `t`; never moves back.
    pub fn advance_to(&mut self, t: u64) {
        self.now_ns = self.now_ns.max(t);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputeNode {
    pub node_id: String,
    pub capacity: Resources,
    pub allocations: BTreeMap<String, Resources>,
}

impl ComputeNode {
    pub fn allocated(&self) -> Resources {
        self.allocations.values().copied().sum()
    }

    pub fn residual(&self) -> Resources {
        self.capacity
            .checked_sub(&self.allocated())
            .expect("admission invariant: allocations never exceed capacity")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VmState {
    Booting,
    Active,
    Configuring,
    Operational,
    Migrating,
    Terminated,
}

impl fmt::Display for VmState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VmInstance {
    pub instance_id: String,
    pub vnf_name: String,
    pub node_id: String,
    pub state: VmState,
    pub flavor: ResourceFlavor,
    pub complexity_hint: u32,
    pub created_at: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminated_at: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VimState {
    nodes: Vec<ComputeNode>,
    instances: BTreeMap<String, VmInstance>,
    delay: DelayModel,
    metrics: MetricModel,
    rng: ChaCha8Rng,
}

// DelayModel and MetricModel hold f64 fields that are never NaN after validation.
impl Eq for DelayModel {}
impl Eq for MetricModel {}

impl VimState {
    /// Builds a pool with nodes `n0..n{k-1}`, default delay and metric models.
    pub fn create_pool(capacities: &[Resources]) -> Result<VimState, SimError> {
        for (i, c) in capacities.iter().enumerate() {
            if c.dims().contains(&0) {
                return Err(SimError::InvalidCapacity(format!(
                    "node n{i} has a zero dimension: {c:?}"
                )));
            }
        }
        let delay = DelayModel::default();
        Ok(VimState {
            nodes: capacities
                .iter()
                .enumerate()
                .map(|(i, c)| ComputeNode {
                    node_id: format!("n{i}"),
                    capacity: *c,
                    allocations: BTreeMap::new(),
                })
                .collect(),
            instances: BTreeMap::new(),
            rng: ChaCha8Rng::seed_from_u64(delay.seed),
            delay,
            metrics: MetricModel::default(),
        })
    }

    /// Replaces the delay model and reseeds the jitter generator from it.
    pub fn with_delay_model(mut self, delay: DelayModel) -> Result<VimState, SimError> {
        delay.validate()?;
        self.rng = ChaCha8Rng::seed_from_u64(delay.seed);
        self.delay = delay;
        Ok(self)
    }

    pub fn with_metric_model(mut self, metrics: MetricModel) -> VimState {
        self.metrics = metrics;
        self
    }

    pub fn nodes(&self) -> &[ComputeNode] {
        &self.nodes
    }

    pub fn node(&self, node_id: &str) -> Option<&ComputeNode> {
        self.nodes.iter().find(|n| n.node_id == node_id)
    }

    pub fn delay_model(&self) -> &DelayModel {
        &self.delay
    }

    pub fn metric_model(&self) -> &MetricModel {
        &self.metrics
    }

    pub fn instance(&self, instance_id: &str) -> Option<&VmInstance> {
        self.instances.get(instance_id)
    }

    pub fn instances(&self) -> impl Iterator<Item = &VmInstance> {
        self.instances.values()
    }

    /// Residual capacity per node, in node order.
    pub fn residuals(&self) -> Vec<Resources> {
        self.nodes.iter().map(ComputeNode::residual).collect()
    }

    /// True when no node holds any allocation.
    pub fn is_empty(&self) -> bool {
        self.nodes.iter().all(|n| n.allocations.is_empty())
    }

    /// Node currently holding an allocation for `instance_id`.
    pub fn allocation_node(&self, instance_id: &str) -> Option<&str> {
        self.nodes
            .iter()
            .find(|n| n.allocations.contains_key(instance_id))
            .map(|n| n.node_id.as_str())
    }

    fn node_index(&self, node_id: &str) -> Result<usize, SimError> {
        self.nodes
            .iter()
            .position(|n| n.node_id == node_id)
            .ok_or_else(|| SimError::UnknownNode(node_id.to_string()))
    }

    pub fn allocate(&mut self, node_id: &str, instance_id: &str, demand: Resources) -> Result<(), SimError> {
        let idx = self.node_index(node_id)?;
        if self.allocation_node(instance_id).is_some() || self.instances.contains_key(instance_id) {
            return Err(SimError::DuplicateInstance(instance_id.to_string()));
        }
        let node = &mut self.nodes[idx];
        if !node.residual().admits(&demand) {
            return Err(SimError::AdmissionViolation {
                node_id: node_id.to_string(),
                instance_id: instance_id.to_string(),
            });
        }
        node.allocations.insert(instance_id.to_string(), demand);
        Ok(())
    }

    /// Drops the allocation of `instance_id`, returning what was freed.
    pub fn release(&mut self, instance_id: &str) -> Option<Resources> {
        self.nodes
            .iter_mut()
            .find_map(|n| n.allocations.remove(instance_id))
    }

    /// Boots the VM of an allocated instance.
    ///
    /// Emits `OnboardRequested` at the clock's current time `t0`,
    /// `ImageTransferred` after the image transfer and `VmActive` after the
    /// boot delay; the instance ends `Active`.
    pub fn boot_vm(
        &mut self,
        instance_id: &str,
        pkg: &VnfPackage,
        clock: &mut SimClock,
    ) -> Result<(VmInstance, Vec<LifecycleEvent>), SimError> {
        self.boot_vm_with_overhead(instance_id, pkg, 0, clock)
    }

    /// As [`boot_vm`](Self::boot_vm), with `overhead_ns` of unjittered
    /// orchestrator time added to the first delay.
    pub fn boot_vm_with_overhead(
        &mut self,
        instance_id: &str,
        pkg: &VnfPackage,
        overhead_ns: u64,
        clock: &mut SimClock,
    ) -> Result<(VmInstance, Vec<LifecycleEvent>), SimError> {
        let node_id = self
            .allocation_node(instance_id)
            .ok_or_else(|| SimError::NoAllocation(instance_id.to_string()))?
            .to_string();
        if self.instances.contains_key(instance_id) {
            return Err(SimError::DuplicateInstance(instance_id.to_string()));
        }
        let vnfd = &pkg.vnfd;
        let t0 = clock.now();
        let transfer = self.delay.jittered(self.delay.image_transfer_ns(pkg), &mut self.rng);
        let boot = self
            .delay
            .jittered(self.delay.boot_ns(&vnfd.flavor, vnfd.complexity_hint), &mut self.rng);
        let transferred = t0 + overhead_ns + transfer;
        let active = transferred + boot;

        let vm = VmInstance {
            instance_id: instance_id.to_string(),
            vnf_name: vnfd.name.clone(),
            node_id,
            state: VmState::Active,
            flavor: vnfd.flavor.clone(),
            complexity_hint: vnfd.complexity_hint,
            created_at: t0,
            terminated_at: None,
        };
        let events = vec![
            LifecycleEvent::new(instance_id, &vnfd.name, LifecyclePhase::OnboardRequested, t0),
            LifecycleEvent::new(instance_id, &vnfd.name, LifecyclePhase::ImageTransferred, transferred),
            LifecycleEvent::new(instance_id, &vnfd.name, LifecyclePhase::VmActive, active),
        ];
        self.instances.insert(instance_id.to_string(), vm.clone());
        clock.advance_to(active);
        Ok((vm, events))
    }

    fn expect_state(&self, instance_id: &str, expected: VmState) -> Result<&VmInstance, SimError> {
        let vm = self
            .instances
            .get(instance_id)
            .ok_or_else(|| SimError::UnknownInstance(instance_id.to_string()))?;
        if vm.state != expected {
            return Err(SimError::WrongState {
                instance_id: instance_id.to_string(),
                state: vm.state,
                expected,
            });
        }
        Ok(vm)
    }

    /// Configures the VNF inside an `Active` VM: `InstantiateRequested` at
    /// `t0`, `VnfConfigured` after the configuration delay and
    /// `VnfOperational` at the same instant.
    pub fn instantiate_vnf(
        &mut self,
        instance_id: &str,
        vnfd: &VnfDescriptor,
        clock: &mut SimClock,
    ) -> Result<Vec<LifecycleEvent>, SimError> {
        self.instantiate_vnf_with_overhead(instance_id, vnfd, 0, clock)
    }

    pub fn instantiate_vnf_with_overhead(
        &mut self,
        instance_id: &str,
        vnfd: &VnfDescriptor,
        overhead_ns: u64,
        clock: &mut SimClock,
    ) -> Result<Vec<LifecycleEvent>, SimError> {
        let name = self.expect_state(instance_id, VmState::Active)?.vnf_name.clone();
        let t0 = clock.now();
        let cfg = self
            .delay
            .jittered(self.delay.configure_ns(vnfd.complexity_hint), &mut self.rng);
        let configured = t0 + overhead_ns + cfg;
        let vm = self.instances.get_mut(instance_id).expect("checked above");
        vm.state = VmState::Operational;
        clock.advance_to(configured);
        Ok(vec![
            LifecycleEvent::new(instance_id, &name, LifecyclePhase::InstantiateRequested, t0),
            LifecycleEvent::new(instance_id, &name, LifecyclePhase::VnfConfigured, configured),
            LifecycleEvent::new(instance_id, &name, LifecyclePhase::VnfOperational, configured),
        ])
    }

    /// Live-migrates an `Operational` instance to `target_node`. The delay is
    /// the flavor memory at the transfer rate; migrating onto the current
    /// node completes immediately and leaves the allocation in place.
    pub fn migrate(
        &mut self,
        instance_id: &str,
        target_node: &str,
        action_id: &str,
        clock: &mut SimClock,
    ) -> Result<Vec<LifecycleEvent>, SimError> {
        self.migrate_with_overhead(instance_id, target_node, action_id, 0, clock)
    }

    pub fn migrate_with_overhead(
        &mut self,
        instance_id: &str,
        target_node: &str,
        action_id: &str,
        overhead_ns: u64,
        clock: &mut SimClock,
    ) -> Result<Vec<LifecycleEvent>, SimError> {
        let vm = self.expect_state(instance_id, VmState::Operational)?;
        let (name, flavor, source) = (vm.vnf_name.clone(), vm.flavor.clone(), vm.node_id.clone());
        let target_idx = self.node_index(target_node)?;
        let t0 = clock.now();

        let completed = if source == target_node {
            t0 + overhead_ns
        } else {
            let demand = self
                .nodes
                .iter()
                .find_map(|n| n.allocations.get(instance_id).copied())
                .ok_or_else(|| SimError::NoAllocation(instance_id.to_string()))?;
            if !self.nodes[target_idx].residual().admits(&demand) {
                return Err(SimError::NoFeasibleNode);
            }
            let transfer = self.delay.jittered(self.delay.migration_ns(&flavor), &mut self.rng);
            self.release(instance_id);
            self.nodes[target_idx]
                .allocations
                .insert(instance_id.to_string(), demand);
            t0 + overhead_ns + transfer
        };

        let vm = self.instances.get_mut(instance_id).expect("checked above");
        vm.node_id = target_node.to_string();
        vm.state = VmState::Operational;
        clock.advance_to(completed);
        Ok(vec![
            LifecycleEvent::action(instance_id, &name, LifecyclePhase::ActionExecuted, t0, action_id, ActionKind::Migrate),
            LifecycleEvent::action(
                instance_id,
                &name,
                LifecyclePhase::ActionCompleted,
                completed,
                action_id,
                ActionKind::Migrate,
            ),
        ])
    }

    /// Terminates an instance in any live state and releases its allocation.
    /// An allocated instance that never booted is released without an event.
    pub fn terminate(&mut self, instance_id: &str, clock: &mut SimClock) -> Result<Option<LifecycleEvent>, SimError> {
        let Some(vm) = self.instances.get_mut(instance_id) else {
            return match self.release(instance_id) {
                Some(_) => Ok(None),
                None => Err(SimError::UnknownInstance(instance_id.to_string())),
            };
        };
        if vm.state == VmState::Terminated {
            return Err(SimError::WrongState {
                instance_id: instance_id.to_string(),
                state: vm.state,
                expected: VmState::Operational,
            });
        }
        let t = clock.now();
        vm.state = VmState::Terminated;
        vm.terminated_at = Some(t);
        let event = LifecycleEvent::new(instance_id, &vm.vnf_name, LifecyclePhase::Terminated, t);
        self.release(instance_id);
        Ok(Some(event))
    }

    /// One CPU and one memory sample per live instance at time `at_ns`.
    pub fn sample_metrics(&self, at_ns: u64) -> Vec<MetricSample> {
        self.instances
            .values()
            .filter(|vm| vm.state != VmState::Terminated)
            .flat_map(|vm| {
                Metric::ALL.into_iter().map(move |metric| MetricSample {
                    instance_id: vm.instance_id.clone(),
                    metric,
                    timestamp_ns: at_ns,
                    value: self.metrics.value(vm, metric, at_ns),
                })
            })
            .collect()
    }

    /// Measure series of one metric from instance creation up to `now_ns`
    /// (or termination), spaced by the model's sample interval.
    pub fn metric_series(&self, instance_id: &str, metric: Metric, now_ns: u64) -> Result<Vec<(u64, f64)>, SimError> {
        let vm = self
            .instances
            .get(instance_id)
            .ok_or_else(|| SimError::UnknownInstance(instance_id.to_string()))?;
        let end = vm.terminated_at.unwrap_or(now_ns).min(now_ns);
        Ok(self
            .metrics
            .series_times(vm.created_at, end)
            .into_iter()
            .map(|t| (t, self.metrics.value(vm, metric, t)))
            .collect())
    }
}
