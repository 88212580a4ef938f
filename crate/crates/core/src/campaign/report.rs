use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CampaignError;
use crate::kpi::{ActionKind, AggregateStats, CapabilityManifest, ClockDomain, KpiKind, KpiSample, QodScore};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetInfo {
    pub kind: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignMeta {
    pub name: String,
    pub seed: u64,
    pub repetitions: u32,
    pub clock_domain: ClockDomain,
    pub config_digest: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportSample {
    pub repetition: u32,
    #[serde(flatten)]
    pub sample: KpiSample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QodEntry {
    pub repetition: u32,
    pub action_id: String,
    pub action_kind: ActionKind,
    pub vnf_name: String,
    pub attempts: u32,
    pub chosen_node: String,
    pub score: QodScore,
}

/// Mean utilization of one instance over its measure series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilizationSummary {
    pub repetition: u32,
    pub instance_name: String,
    pub vnf_name: String,
    /// Created by a run-time action rather than by the deployment.
    pub replica: bool,
    pub cpu_mean_pct: f64,
    pub memory_mean_mb: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpiReport {
    pub report_version: u32,
    pub target: TargetInfo,
    pub campaign: CampaignMeta,
    pub incomplete: bool,
    pub errors: Vec<String>,
    pub capability_manifest: Option<CapabilityManifest>,
    /// Constituent VNF names of the NSD, in deployment order.
    pub vnf_names: Vec<String>,
    pub samples: Vec<ReportSample>,
    pub aggregates: Vec<AggregateStats>,
    pub qod: Vec<QodEntry>,
    pub utilization: Vec<UtilizationSummary>,
}

impl KpiReport {
    pub fn samples_of(&self, kind: KpiKind) -> impl Iterator<Item = &KpiSample> {
        self.samples.iter().map(|s| &s.sample).filter(move |s| s.kind == kind)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, CampaignError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CampaignError::UnreadableReport(e.to_string()))?;
        match value.get("report_version").and_then(|v| v.as_u64()) {
            Some(v) if v == u64::from(REPORT_VERSION) => {}
            Some(v) => return Err(CampaignError::SchemaVersionMismatch { found: v, expected: REPORT_VERSION }),
            None => return Err(CampaignError::UnreadableReport("missing report_version".into())),
        }
        serde_json::from_value(value).map_err(|e| CampaignError::UnreadableReport(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, CampaignError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CampaignError::UnreadableReport(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), CampaignError> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}
