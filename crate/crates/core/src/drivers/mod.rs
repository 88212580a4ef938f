//! Target drivers.
//!
//! A [`TargetDriver`] is the only way the benchmark touches a MANO target.
//! [`SimDriver`] calls the simulated orchestrator in-process; [`NbiClient`]
//! speaks the JSON northbound interface served by [`nbi_serve`] (or by any
//! target exposing the same resources).

mod client;
mod collect;
mod server;
mod sim;
pub mod wire;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::descriptor::{NsDescriptor, VnfPackage};
use crate::kpi::{ClockDomain, LifecycleTimeline};
use crate::mano::{DecisionTrace, InstanceInfo, ManoError};

pub use client::{ClockSource, EndpointConfig, NbiClient};
pub use collect::{collect_metrics, metric_file_name, read_metric_csv};
pub use server::{nbi_serve, NbiServer, ServeConfig};
pub use sim::SimDriver;
pub use wire::NsView;

#[derive(Debug, Error)]
pub enum DriverError {
    #[error("target did not answer before the deadline")]
    Timeout,
    #[error("protocol error: {0}")]
    ProtocolError(String),
    #[error("HTTP {status}: {message}")]
    HttpError { status: u16, message: String },
    #[error(transparent)]
    Target(#[from] ManoError),
    #[error("operation `{op_id}` failed: {message}")]
    OperationFailed { op_id: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PackageHandle {
    pub package_id: String,
    pub instance_id: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionHandle {
    pub op_id: String,
    pub instance_id: String,
    pub trace: Option<DecisionTrace>,
}

pub trait TargetDriver {
    /// Clock in which the events of [`timeline`](Self::timeline) are stamped.
    fn clock_domain(&self) -> ClockDomain;

    /// Observation uncertainty attached to every KPI sample, if any.
    fn sample_uncertainty_ns(&self) -> Option<u64> {
        None
    }

    fn onboard_package(&mut self, pkg: &VnfPackage) -> Result<PackageHandle, DriverError>;

    fn register_nsd(&mut self, nsd: &NsDescriptor) -> Result<String, DriverError>;

    /// Creates and instantiates an NS; returns once it is operational.
    fn instantiate_ns(&mut self, nsd_id: &str) -> Result<String, DriverError>;

    fn scale_out(&mut self, ns_id: &str, vnf_name: &str) -> Result<ActionHandle, DriverError>;

    fn migrate(&mut self, ns_id: &str, vnf_name: &str) -> Result<ActionHandle, DriverError>;

    fn terminate_ns(&mut self, ns_id: &str) -> Result<(), DriverError>;

    fn delete_package(&mut self, package_id: &str) -> Result<(), DriverError>;

    fn poll_ns_status(&mut self, ns_id: &str) -> Result<NsView, DriverError>;

    fn list_instances(&mut self) -> Result<Vec<InstanceInfo>, DriverError>;

    /// Metric name to metric id.
    fn list_instance_metrics(&mut self, instance_id: &str) -> Result<BTreeMap<String, String>, DriverError>;

    /// `(timestamp_ns, value)` points of one metric.
    fn fetch_measures(&mut self, metric_id: &str) -> Result<Vec<(u64, f64)>, DriverError>;

    /// Lifecycle events observed so far.
    fn timeline(&mut self) -> Result<LifecycleTimeline, DriverError>;
}

#[cfg(test)]
mod tests;
