use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::VmInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    CpuUtilPct,
    MemoryUsageMb,
}

impl Metric {
    pub const ALL: [Metric; 2] = [Metric::CpuUtilPct, Metric::MemoryUsageMb];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::CpuUtilPct => "cpu_util_pct",
            Metric::MemoryUsageMb => "memory_usage_mb",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Metric::CpuUtilPct => "%",
            Metric::MemoryUsageMb => "MB",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSample {
    pub instance_id: String,
    pub metric: Metric,
    pub timestamp_ns: u64,
    pub value: f64,
}

/// Utilization generator of the simulated VIM.
///
/// CPU is a per-VNF baseline plus uniform noise, clamped to `[0, 100]`.
/// Memory is a fixed fraction of the flavor memory. Noise is a pure function
/// of `(seed, instance, metric, time)`, so repeated reads agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricModel {
    pub cpu_base_pct: BTreeMap<String, f64>,
    pub default_cpu_base_pct: f64,
    pub cpu_noise_pct: f64,
    pub memory_fraction: BTreeMap<String, f64>,
    pub default_memory_fraction: f64,
    /// Spacing of points in a measure series.
    pub sample_interval_ns: u64,
    /// Most recent points kept per series.
    pub max_points: usize,
    pub seed: u64,
}

impl Default for MetricModel {
    fn default() -> Self {
        let cpu = [
            ("vBNG", 50.0),
            ("vGDHCP", 20.0),
            ("vBRG", 25.0),
            ("vGMUX", 55.0),
            ("vInfra", 35.0),
        ];
        MetricModel {
            cpu_base_pct: cpu.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            default_cpu_base_pct: 30.0,
            cpu_noise_pct: 5.0,
            memory_fraction: BTreeMap::new(),
            default_memory_fraction: 0.6,
            sample_interval_ns: 10_000_000_000,
            max_points: 64,
            seed: 0,
        }
    }
}

impl MetricModel {
    pub fn cpu_base(&self, vnf_name: &str) -> f64 {
        self.cpu_base_pct
            .get(vnf_name)
            .copied()
            .unwrap_or(self.default_cpu_base_pct)
    }

    pub fn memory_fraction(&self, vnf_name: &str) -> f64 {
        self.memory_fraction
            .get(vnf_name)
            .copied()
            .unwrap_or(self.default_memory_fraction)
            .clamp(0.0, 1.0)
    }

    pub fn value(&self, vm: &VmInstance, metric: Metric, at_ns: u64) -> f64 {
        match metric {
            Metric::CpuUtilPct => {
                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(
                    self.seed,
                    &[vm.instance_id.as_bytes(), metric.as_str().as_bytes(), &at_ns.to_le_bytes()],
                ));
                let u: f64 = rng.gen_range(-1.0..=1.0);
                (self.cpu_base(&vm.vnf_name) + u * self.cpu_noise_pct).clamp(0.0, 100.0)
            }
            Metric::MemoryUsageMb => self.memory_fraction(&vm.vnf_name) * vm.flavor.memory_mb as f64,
        }
    }

    /// Series timestamps for an instance alive from `from_ns` to `to_ns`.
    pub fn series_times(&self, from_ns: u64, to_ns: u64) -> Vec<u64> {
        if to_ns < from_ns {
            return Vec::new();
        }
        let step = self.sample_interval_ns.max(1);
        let count = (to_ns - from_ns) / step + 1;
        let skip = count.saturating_sub(self.max_points as u64);
        (skip..count).map(|k| from_ns + k * step).collect()
    }
}

/// FNV-1a over the parts, finished with a splitmix64 round.
fn mix_seed(seed: u64, parts: &[&[u8]]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for part in parts {
        for &b in *part {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h ^= 0xff;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_times_keep_latest() {
        let model = MetricModel {
            sample_interval_ns: 10,
            max_points: 3,
            ..MetricModel::default()
        };
        assert_eq!(model.series_times(5, 5), vec![5]);
        assert_eq!(model.series_times(0, 25), vec![0, 10, 20]);
        assert_eq!(model.series_times(0, 55), vec![30, 40, 50]);
        assert!(model.series_times(9, 3).is_empty());
    }

    #[test]
    fn mix_seed_separates_parts() {
        assert_ne!(mix_seed(0, &[b"ab", b"c"]), mix_seed(0, &[b"a", b"bc"]));
        assert_ne!(mix_seed(0, &[b"x"]), mix_seed(1, &[b"x"]));
    }
}
