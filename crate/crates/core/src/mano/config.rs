use serde::{Deserialize, Serialize};

use super::ManoError;
use crate::descriptor::Resources;
use crate::nfvi::PlacementPolicy;

/// Forced placement rejections for the command with this ordinal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultEntry {
    pub ordinal: u64,
    pub rejections: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct QodHorizon {
    pub short_ns: u64,
    pub long_ns: u64,
}

impl Default for QodHorizon {
    fn default() -> Self {
        QodHorizon {
            short_ns: 60_000_000_000,
            long_ns: 3_600_000_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OrchestratorConfig {
    pub nbi_processing_ns: u64,
    pub placement_ns_per_attempt: u64,
    pub placement_policy: PlacementPolicy,
    pub fault_plan: Vec<FaultEntry>,
    pub qod_horizon: QodHorizon,
    /// Relative demand growth per elapsed short horizon, used to project the
    /// long-horizon requirement. Zero keeps it equal to the short one.
    pub long_term_growth: f64,
}

impl Default for OrchestratorConfig {
    fn default() -> Self {
        OrchestratorConfig {
            nbi_processing_ns: 200_000_000,
            placement_ns_per_attempt: 50_000_000,
            placement_policy: PlacementPolicy::FirstFit,
            fault_plan: Vec::new(),
            qod_horizon: QodHorizon::default(),
            long_term_growth: 0.0,
        }
    }
}

impl OrchestratorConfig {
    /// No orchestrator-added time at all.
    pub fn zero_overhead() -> Self {
        OrchestratorConfig {
            nbi_processing_ns: 0,
            placement_ns_per_attempt: 0,
            ..OrchestratorConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), ManoError> {
        let h = self.qod_horizon;
        if h.short_ns == 0 || h.long_ns < h.short_ns {
            return Err(ManoError::InvalidConfig(
                "qod_horizon needs 0 < short_ns <= long_ns".into(),
            ));
        }
        if !self.long_term_growth.is_finite() || self.long_term_growth < 0.0 {
            return Err(ManoError::InvalidConfig("long_term_growth must be finite and >= 0".into()));
        }
        Ok(())
    }

    pub fn long_term_demand(&self, short: &Resources) -> Resources {
        let h = self.qod_horizon;
        let periods = h.long_ns as f64 / h.short_ns as f64 - 1.0;
        let factor = 1.0 + self.long_term_growth * periods;
        let scale = |v: u64| (v as f64 * factor).ceil() as u64;
        Resources {
            vcpus: scale(short.vcpus),
            memory_mb: scale(short.memory_mb),
            storage_gb: scale(short.storage_gb),
        }
    }
}
