use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use log::warn;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::wire::{
    map_native_state, parse_rfc3339, CreateNs, Created, ErrorBody, Measure, NsView, OpAccepted, OpView, PackageView,
    PhaseMapping, ScaleRequest, VnfAction, OP_COMPLETED, OP_FAILED, SCALE_OUT,
};
use super::{ActionHandle, DriverError, PackageHandle, TargetDriver};
use crate::descriptor::{nsd_to_json, package_to_json, NsDescriptor, VnfPackage};
use crate::kpi::{ActionKind, ClockDomain, LifecycleEvent, LifecyclePhase, LifecycleTimeline};
use crate::mano::{InstanceInfo, OperationKind};

/// Where event timestamps come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClockSource {
    /// Phase timestamps reported by the target.
    Target,
    /// The harness clock at dispatch and at first observation while polling.
    #[default]
    Harness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct EndpointConfig {
    pub base_url: String,
    pub auth_token: Option<String>,
    /// Deadline for one call including retries, and for one wait-for-state.
    pub timeout_ms: u64,
    pub poll_interval_ms: u64,
    pub clock_source: ClockSource,
}

impl Default for EndpointConfig {
    fn default() -> Self {
        EndpointConfig {
            base_url: "http://127.0.0.1:8080".into(),
            auth_token: None,
            timeout_ms: 5_000,
            poll_interval_ms: 20,
            clock_source: ClockSource::Harness,
        }
    }
}

/// HTTP driver for the JSON northbound interface.
pub struct NbiClient {
    cfg: EndpointConfig,
    agent: ureq::Agent,
    timeline: LifecycleTimeline,
    epoch: Instant,
}

impl NbiClient {
    pub fn new(cfg: EndpointConfig) -> Self {
        let agent = ureq::AgentBuilder::new()
            .timeout(Duration::from_millis(cfg.timeout_ms.max(1)))
            .build();
        let clock = match cfg.clock_source {
            ClockSource::Target => ClockDomain::TargetReported,
            ClockSource::Harness => ClockDomain::Wall,
        };
        NbiClient {
            cfg,
            agent,
            timeline: LifecycleTimeline::new(clock),
            epoch: Instant::now(),
        }
    }

    pub fn config(&self) -> &EndpointConfig {
        &self.cfg
    }

    fn harness(&self) -> bool {
        self.cfg.clock_source == ClockSource::Harness
    }

    fn wall_ns(&self) -> u64 {
        self.epoch.elapsed().as_nanos() as u64
    }

    fn deadline(&self) -> Instant {
        Instant::now() + Duration::from_millis(self.cfg.timeout_ms)
    }

    fn pause(&self) {
        std::thread::sleep(Duration::from_millis(self.cfg.poll_interval_ms.max(1)));
    }

    /// One call. Connection failures are retried until the deadline; a
    /// request that may have reached the target is retried only for GET.
    fn call(&self, method: &str, path: &str, body: Option<String>) -> Result<String, DriverError> {
        let url = format!("{}{}", self.cfg.base_url.trim_end_matches('/'), path);
        let deadline = self.deadline();
        loop {
            let mut req = self.agent.request(method, &url);
            if let Some(t) = &self.cfg.auth_token {
                req = req.set("X-Auth-Token", t);
            }
            let result = match &body {
                Some(b) => req.set("Content-Type", "application/json").send_string(b),
                None => req.call(),
            };
            match result {
                Ok(resp) => {
                    return resp
                        .into_string()
                        .map_err(|e| DriverError::ProtocolError(e.to_string()));
                }
                Err(ureq::Error::Status(status, resp)) => {
                    let raw = resp.into_string().unwrap_or_default();
                    let message = serde_json::from_str::<ErrorBody>(&raw).map_or(raw, |e| e.message);
                    return Err(DriverError::HttpError { status, message });
                }
                Err(ureq::Error::Transport(t)) => {
                    let retryable = method == "GET"
                        || matches!(t.kind(), ureq::ErrorKind::ConnectionFailed | ureq::ErrorKind::Dns);
                    if !retryable {
                        return Err(DriverError::ProtocolError(t.to_string()));
                    }
                    if Instant::now() >= deadline {
                        return Err(DriverError::Timeout);
                    }
                    self.pause();
                }
            }
        }
    }

    fn get<T: DeserializeOwned>(&self, path: &str) -> Result<T, DriverError> {
        decode(&self.call("GET", path, None)?)
    }

    fn post<B: Serialize, T: DeserializeOwned>(&self, path: &str, body: &B) -> Result<T, DriverError> {
        let body = serde_json::to_string(body).expect("wire types serialize");
        decode(&self.call("POST", path, Some(body))?)
    }

    fn observe(&mut self, instance_id: &str, vnf_name: &str, phase: LifecyclePhase, t: u64) -> Result<(), DriverError> {
        if self.timeline.phase_time(instance_id, phase).is_some() {
            return Ok(());
        }
        self.timeline
            .record(LifecycleEvent::new(instance_id, vnf_name, phase, t))
            .map_err(|e| DriverError::ProtocolError(format!("inconsistent target timestamps: {e}")))
    }

    fn observe_reported(
        &mut self,
        instance_id: &str,
        vnf_name: &str,
        stamps: &BTreeMap<LifecyclePhase, u64>,
    ) -> Result<(), DriverError> {
        for (&phase, &t) in stamps {
            if !phase.is_action() {
                self.observe(instance_id, vnf_name, phase, t)?;
            }
        }
        Ok(())
    }

    /// Polls `fetch` until `done` holds or the deadline passes.
    fn wait_for<T>(
        &mut self,
        mut fetch: impl FnMut(&mut Self) -> Result<T, DriverError>,
        done: impl Fn(&T) -> bool,
    ) -> Result<(T, u64), DriverError> {
        let deadline = self.deadline();
        loop {
            let value = fetch(self)?;
            let seen = self.wall_ns();
            if done(&value) {
                return Ok((value, seen));
            }
            if Instant::now() >= deadline {
                return Err(DriverError::Timeout);
            }
            self.pause();
        }
    }

    fn run_action(&mut self, ns_id: &str, verb: &str, vnf_name: &str) -> Result<ActionHandle, DriverError> {
        let dispatched = self.wall_ns();
        let path = format!("/ns_instances/{ns_id}/{verb}");
        let accepted: OpAccepted = if verb == "scale" {
            self.post(&path, &ScaleRequest { kind: SCALE_OUT.into(), vnf_name: vnf_name.into() })?
        } else {
            self.post(&path, &VnfAction { vnf_name: vnf_name.into() })?
        };
        let op_path = format!("/operations/{}", accepted.op_id);
        let (op, seen) = self.wait_for(
            |c| c.get::<OpView>(&op_path),
            |op| op.state == OP_COMPLETED || op.state == OP_FAILED,
        )?;
        if op.state == OP_FAILED {
            return Err(DriverError::OperationFailed {
                op_id: op.id,
                message: op.error.unwrap_or_default(),
            });
        }
        let instance_id = op
            .instance_id
            .clone()
            .ok_or_else(|| DriverError::ProtocolError("completed action names no instance".into()))?;
        let completed = op
            .completed_at
            .ok_or_else(|| DriverError::ProtocolError("completed action has no completion time".into()))?;
        let (executed, completed) = if self.harness() {
            (dispatched, seen)
        } else {
            (op.executed_at, completed)
        };
        let kind = match op.kind {
            OperationKind::ScaleOut => ActionKind::ScaleOut,
            OperationKind::Migrate => ActionKind::Migrate,
            other => return Err(DriverError::ProtocolError(format!("unexpected operation kind {other:?}"))),
        };
        let name = op.vnf_name.clone().unwrap_or_else(|| vnf_name.to_string());
        for (phase, t) in [(LifecyclePhase::ActionExecuted, executed), (LifecyclePhase::ActionCompleted, completed)] {
            self.timeline
                .record(LifecycleEvent::action(&instance_id, &name, phase, t, &op.id, kind))
                .map_err(|e| DriverError::ProtocolError(format!("inconsistent action timestamps: {e}")))?;
        }
        if !self.harness() {
            let view = self.poll_ns_status(ns_id)?;
            if let Some(vnf) = view.vnfs.iter().find(|v| v.instance_id == instance_id) {
                self.observe_reported(&vnf.instance_id, &vnf.vnf_name, &vnf.phase_timestamps)?;
            }
        }
        Ok(ActionHandle {
            op_id: op.id,
            instance_id,
            trace: op.decision_trace,
        })
    }
}

fn decode<T: DeserializeOwned>(text: &str) -> Result<T, DriverError> {
    serde_json::from_str(text).map_err(|e| DriverError::ProtocolError(format!("malformed response body: {e}")))
}

fn is_phase(state: &str, wanted: &[LifecyclePhase]) -> bool {
    match map_native_state(state) {
        PhaseMapping::Phase(p) => wanted.contains(&p),
        PhaseMapping::Unmapped(s) => {
            warn!("target reported unmapped state `{s}`");
            false
        }
    }
}

impl TargetDriver for NbiClient {
    fn clock_domain(&self) -> ClockDomain {
        self.timeline.clock()
    }

    fn sample_uncertainty_ns(&self) -> Option<u64> {
        self.harness().then_some(self.cfg.poll_interval_ms * 1_000_000)
    }

    fn onboard_package(&mut self, pkg: &VnfPackage) -> Result<PackageHandle, DriverError> {
        let dispatched = self.wall_ns();
        let created: Created = decode(&self.call("POST", "/packages", Some(package_to_json(pkg)))?)?;
        let instance_id = created
            .instance_id
            .ok_or_else(|| DriverError::ProtocolError("package creation names no instance".into()))?;
        let path = format!("/packages/{}", created.id);
        let (view, seen) = self.wait_for(
            |c| c.get::<PackageView>(&path),
            |v| is_phase(&v.state, &[LifecyclePhase::VmActive, LifecyclePhase::VnfOperational]),
        )?;
        if self.harness() {
            self.observe(&instance_id, &view.vnf_name, LifecyclePhase::OnboardRequested, dispatched)?;
            self.observe(&instance_id, &view.vnf_name, LifecyclePhase::VmActive, seen)?;
        } else {
            self.observe_reported(&instance_id, &view.vnf_name, &view.phase_timestamps)?;
        }
        Ok(PackageHandle {
            package_id: created.id,
            instance_id,
        })
    }

    fn register_nsd(&mut self, nsd: &NsDescriptor) -> Result<String, DriverError> {
        let created: Created = decode(&self.call("POST", "/ns_descriptors", Some(nsd_to_json(nsd)))?)?;
        Ok(created.id)
    }

    fn instantiate_ns(&mut self, nsd_id: &str) -> Result<String, DriverError> {
        let created: Created = self.post("/ns_instances", &CreateNs { nsd_id: nsd_id.into() })?;
        let ns_id = created.id;
        let dispatched = self.wall_ns();
        let _: OpAccepted = decode(&self.call("POST", &format!("/ns_instances/{ns_id}/instantiate"), None)?)?;
        let path = format!("/ns_instances/{ns_id}");
        let (view, seen) = self.wait_for(|c| c.get::<NsView>(&path), NsView::is_ready)?;
        for vnf in &view.vnfs {
            if self.harness() {
                self.observe(&vnf.instance_id, &vnf.vnf_name, LifecyclePhase::InstantiateRequested, dispatched)?;
                self.observe(&vnf.instance_id, &vnf.vnf_name, LifecyclePhase::VnfOperational, seen)?;
            } else {
                self.observe_reported(&vnf.instance_id, &vnf.vnf_name, &vnf.phase_timestamps)?;
            }
        }
        Ok(ns_id)
    }

    fn scale_out(&mut self, ns_id: &str, vnf_name: &str) -> Result<ActionHandle, DriverError> {
        self.run_action(ns_id, "scale", vnf_name)
    }

    fn migrate(&mut self, ns_id: &str, vnf_name: &str) -> Result<ActionHandle, DriverError> {
        self.run_action(ns_id, "migrate", vnf_name)
    }

    fn terminate_ns(&mut self, ns_id: &str) -> Result<(), DriverError> {
        self.call("DELETE", &format!("/ns_instances/{ns_id}"), None)?;
        Ok(())
    }

    fn delete_package(&mut self, package_id: &str) -> Result<(), DriverError> {
        self.call("DELETE", &format!("/packages/{package_id}"), None)?;
        Ok(())
    }

    fn poll_ns_status(&mut self, ns_id: &str) -> Result<NsView, DriverError> {
        self.get(&format!("/ns_instances/{ns_id}"))
    }

    fn list_instances(&mut self) -> Result<Vec<InstanceInfo>, DriverError> {
        self.get("/instances")
    }

    /// The NBI lists metric units; ids are `<instance_id>.<metric>`.
    fn list_instance_metrics(&mut self, instance_id: &str) -> Result<BTreeMap<String, String>, DriverError> {
        let units: BTreeMap<String, String> = self.get(&format!("/instances/{instance_id}/metrics"))?;
        Ok(units
            .into_keys()
            .map(|m| {
                let id = format!("{instance_id}.{m}");
                (m, id)
            })
            .collect())
    }

    fn fetch_measures(&mut self, metric_id: &str) -> Result<Vec<(u64, f64)>, DriverError> {
        let points: Vec<Measure> = self.get(&format!("/metrics/{metric_id}/measures"))?;
        points
            .into_iter()
            .map(|Measure(t, v)| {
                parse_rfc3339(&t)
                    .map(|t| (t, v))
                    .ok_or_else(|| DriverError::ProtocolError(format!("bad measure timestamp `{t}`")))
            })
            .collect()
    }

    fn timeline(&mut self) -> Result<LifecycleTimeline, DriverError> {
        Ok(self.timeline.clone())
    }
}
