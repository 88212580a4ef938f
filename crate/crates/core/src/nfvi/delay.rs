use rand::Rng;
use serde::{Deserialize, Serialize};

use super::SimError;
use crate::descriptor::{ResourceFlavor, VnfPackage};

const NS_PER_S: f64 = 1e9;

/// Delay parameters of the simulated VIM.
///
/// ```text
/// transfer  = image_size_mb / transfer_rate_mb_per_s
/// boot      = sched + boot_base + boot_per_vcpu * vcpus + boot_per_service * hint
/// configure = cfg_base + cfg_per_service * hint
/// migrate   = flavor memory_mb / transfer_rate_mb_per_s
/// ```
///
/// Each delay is scaled by `1 + u * jitter_pct / 100` with `u` drawn
/// uniformly from `[-1, 1]`. A transfer rate of zero disables transfer
/// delays altogether.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DelayModel {
    pub sched_ns: u64,
    pub transfer_rate_mb_per_s: f64,
    pub boot_base_ns: u64,
    pub boot_per_vcpu_ns: u64,
    pub boot_per_service_ns: u64,
    pub cfg_base_ns: u64,
    pub cfg_per_service_ns: u64,
    pub jitter_pct: f64,
    pub seed: u64,
}

impl Default for DelayModel {
    fn default() -> Self {
        DelayModel {
            sched_ns: 500_000_000,
            transfer_rate_mb_per_s: 200.0,
            boot_base_ns: 10_000_000_000,
            boot_per_vcpu_ns: 1_000_000_000,
            boot_per_service_ns: 4_000_000_000,
            cfg_base_ns: 5_000_000_000,
            cfg_per_service_ns: 4_000_000_000,
            jitter_pct: 0.0,
            seed: 0,
        }
    }
}

impl DelayModel {
    /// Every delay is zero.
    pub fn zero() -> Self {
        DelayModel {
            sched_ns: 0,
            transfer_rate_mb_per_s: 0.0,
            boot_base_ns: 0,
            boot_per_vcpu_ns: 0,
            boot_per_service_ns: 0,
            cfg_base_ns: 0,
            cfg_per_service_ns: 0,
            jitter_pct: 0.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !self.transfer_rate_mb_per_s.is_finite() || self.transfer_rate_mb_per_s < 0.0 {
            return Err(SimError::InvalidModel("transfer_rate_mb_per_s must be finite and >= 0".into()));
        }
        if !(0.0..=100.0).contains(&self.jitter_pct) {
            return Err(SimError::InvalidModel("jitter_pct must lie in [0, 100]".into()));
        }
        Ok(())
    }

    pub fn transfer_ns(&self, size_mb: u64) -> f64 {
        if self.transfer_rate_mb_per_s == 0.0 {
            0.0
        } else {
            size_mb as f64 * NS_PER_S / self.transfer_rate_mb_per_s
        }
    }

    pub fn image_transfer_ns(&self, pkg: &VnfPackage) -> f64 {
        self.transfer_ns(pkg.image_size_mb)
    }

    pub fn boot_ns(&self, flavor: &ResourceFlavor, complexity_hint: u32) -> f64 {
        (self.sched_ns as f64)
            + self.boot_base_ns as f64
            + self.boot_per_vcpu_ns as f64 * flavor.vcpus as f64
            + self.boot_per_service_ns as f64 * f64::from(complexity_hint)
    }

    pub fn configure_ns(&self, complexity_hint: u32) -> f64 {
        self.cfg_base_ns as f64 + self.cfg_per_service_ns as f64 * f64::from(complexity_hint)
    }

    pub fn migration_ns(&self, flavor: &ResourceFlavor) -> f64 {
        self.transfer_ns(flavor.memory_mb)
    }

    /// Applies one jitter draw to a nominal delay. Always consumes one draw.
    pub fn jittered<R: Rng>(&self, nominal_ns: f64, rng: &mut R) -> u64 {
        let u: f64 = rng.gen_range(-1.0..=1.0);
        let factor = 1.0 + u * self.jitter_pct / 100.0;
        (nominal_ns * factor).round().max(0.0) as u64
    }
}
