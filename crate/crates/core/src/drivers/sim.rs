use std::collections::BTreeMap;

use super::{ActionHandle, DriverError, NsView, PackageHandle, TargetDriver};
use crate::descriptor::{NsDescriptor, VnfPackage};
use crate::kpi::{ClockDomain, LifecycleTimeline};
use crate::mano::{InstanceInfo, Orchestrator};

/// In-process driver over a simulated orchestrator.
#[derive(Debug, Clone)]
pub struct SimDriver {
    orch: Orchestrator,
}

impl SimDriver {
    pub fn new(orch: Orchestrator) -> Self {
        SimDriver { orch }
    }

    pub fn orchestrator(&self) -> &Orchestrator {
        &self.orch
    }

    pub fn into_inner(self) -> Orchestrator {
        self.orch
    }
}

impl TargetDriver for SimDriver {
    fn clock_domain(&self) -> ClockDomain {
        ClockDomain::Virtual
    }

    fn onboard_package(&mut self, pkg: &VnfPackage) -> Result<PackageHandle, DriverError> {
        let out = self.orch.onboard(pkg.clone())?;
        Ok(PackageHandle {
            package_id: out.package_id,
            instance_id: out.instance_id,
        })
    }

    fn register_nsd(&mut self, nsd: &NsDescriptor) -> Result<String, DriverError> {
        Ok(self.orch.register_nsd(nsd.clone())?)
    }

    fn instantiate_ns(&mut self, nsd_id: &str) -> Result<String, DriverError> {
        let (ns, _) = self.orch.instantiate_ns(nsd_id)?;
        Ok(ns.ns_instance_id)
    }

    fn scale_out(&mut self, ns_id: &str, vnf_name: &str) -> Result<ActionHandle, DriverError> {
        let out = self.orch.scale_out(ns_id, vnf_name)?;
        Ok(ActionHandle {
            op_id: out.op_id,
            instance_id: out.instance_id,
            trace: Some(out.trace),
        })
    }

    fn migrate(&mut self, ns_id: &str, vnf_name: &str) -> Result<ActionHandle, DriverError> {
        let out = self.orch.migrate(ns_id, vnf_name)?;
        Ok(ActionHandle {
            op_id: out.op_id,
            instance_id: out.instance_id,
            trace: Some(out.trace),
        })
    }

    fn terminate_ns(&mut self, ns_id: &str) -> Result<(), DriverError> {
        self.orch.terminate_ns(ns_id)?;
        Ok(())
    }

    fn delete_package(&mut self, package_id: &str) -> Result<(), DriverError> {
        self.orch.delete_package(package_id)?;
        Ok(())
    }

    fn poll_ns_status(&mut self, ns_id: &str) -> Result<NsView, DriverError> {
        Ok(self.orch.ns_status(ns_id)?.into())
    }

    fn list_instances(&mut self) -> Result<Vec<InstanceInfo>, DriverError> {
        Ok(self.orch.live_instances())
    }

    fn list_instance_metrics(&mut self, instance_id: &str) -> Result<BTreeMap<String, String>, DriverError> {
        Ok(self.orch.instance_metrics(instance_id)?)
    }

    fn fetch_measures(&mut self, metric_id: &str) -> Result<Vec<(u64, f64)>, DriverError> {
        Ok(self.orch.measures(metric_id)?)
    }

    fn timeline(&mut self) -> Result<LifecycleTimeline, DriverError> {
        Ok(self.orch.timeline().clone())
    }
}
