//! Functional KPIs: deployment footprint, supported VIM platforms and the
//! feature palette of a MANO target, plus comparisons between two targets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::KpiError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Footprint {
    pub vcpus: u64,
    pub memory_gb: u64,
    pub storage_gb: u64,
    /// Unknown for targets that do not publish it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ip_addresses: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VimPlatform {
    OpenStack,
    VMware,
    AWS,
    OpenVIM,
    Other,
}

impl VimPlatform {
    pub const ALL: [VimPlatform; 5] = [
        VimPlatform::OpenStack,
        VimPlatform::VMware,
        VimPlatform::AWS,
        VimPlatform::OpenVIM,
        VimPlatform::Other,
    ];
}

impl fmt::Display for VimPlatform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKey {
    BareMetalInstall,
    KubernetesInstall,
    PerformanceMonitoring,
    Cli,
    LcmScaling,
    MultiUser,
    MultiSite,
}

impl FeatureKey {
    pub const ALL: [FeatureKey; 7] = [
        FeatureKey::BareMetalInstall,
        FeatureKey::KubernetesInstall,
        FeatureKey::PerformanceMonitoring,
        FeatureKey::Cli,
        FeatureKey::LcmScaling,
        FeatureKey::MultiUser,
        FeatureKey::MultiSite,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureKey::BareMetalInstall => "bare_metal_install",
            FeatureKey::KubernetesInstall => "kubernetes_install",
            FeatureKey::PerformanceMonitoring => "performance_monitoring",
            FeatureKey::Cli => "cli",
            FeatureKey::LcmScaling => "lcm_scaling",
            FeatureKey::MultiUser => "multi_user",
            FeatureKey::MultiSite => "multi_site",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureStatus {
    Supported,
    Unsupported,
    #[default]
    Untested,
}

impl fmt::Display for FeatureStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapabilityManifest {
    pub target_name: String,
    #[serde(default)]
    pub footprint: Footprint,
    #[serde(default)]
    pub vim_platforms: BTreeSet<VimPlatform>,
    #[serde(default)]
    pub features: BTreeMap<FeatureKey, FeatureStatus>,
    /// Largest VNF population the target manages effectively, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_managed_vnfs: Option<u64>,
}

impl CapabilityManifest {
    pub fn feature(&self, key: FeatureKey) -> FeatureStatus {
        self.features.get(&key).copied().unwrap_or_default()
    }

    /// Multi-VIM support derived from the platform set.
    pub fn multi_vim(&self) -> FeatureStatus {
        match self.vim_platforms.len() {
            0 => FeatureStatus::Untested,
            1 => FeatureStatus::Unsupported,
            _ => FeatureStatus::Supported,
        }
    }

    pub fn vim_support(&self, platform: VimPlatform) -> FeatureStatus {
        if self.vim_platforms.is_empty() {
            FeatureStatus::Untested
        } else if self.vim_platforms.contains(&platform) {
            FeatureStatus::Supported
        } else {
            FeatureStatus::Unsupported
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FootprintRatios {
    pub vcpus: f64,
    pub memory: f64,
    pub storage: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ip: Option<f64>,
}

/// Per-dimension ratio `a / b`. The IP ratio is present when both targets
/// publish an address count.
pub fn footprint_ratio(a: &CapabilityManifest, b: &CapabilityManifest) -> Result<FootprintRatios, KpiError> {
    let ratio = |dim: &'static str, x: u64, y: u64| {
        if y == 0 {
            Err(KpiError::DivisionByZeroDimension(dim))
        } else {
            Ok(x as f64 / y as f64)
        }
    };
    let (fa, fb) = (&a.footprint, &b.footprint);
    let ip = match (fa.ip_addresses, fb.ip_addresses) {
        (Some(x), Some(y)) => Some(ratio("ip_addresses", x, y)?),
        _ => None,
    };
    Ok(FootprintRatios {
        vcpus: ratio("vcpus", fa.vcpus, fb.vcpus)?,
        memory: ratio("memory_gb", fa.memory_gb, fb.memory_gb)?,
        storage: ratio("storage_gb", fa.storage_gb, fb.storage_gb)?,
        ip,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub criterion: String,
    pub a: FeatureStatus,
    pub b: FeatureStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonMatrix {
    pub a_name: String,
    pub b_name: String,
    pub rows: Vec<MatrixRow>,
}

impl ComparisonMatrix {
    pub fn row(&self, criterion: &str) -> Option<&MatrixRow> {
        self.rows.iter().find(|r| r.criterion == criterion)
    }

    /// `criterion,<a_name>,<b_name>` followed by one line per row.
    pub fn to_csv(&self) -> String {
        let mut out = format!("criterion,{},{}\n", self.a_name, self.b_name);
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.criterion, r.a, r.b));
        }
        out
    }
}

/// Side-by-side feature matrix. Rows follow the declared feature order with
/// the derived `multi_vim` row after `performance_monitoring`, then one
/// `vim:<platform>` row per platform.
pub fn compare_capabilities(a: &CapabilityManifest, b: &CapabilityManifest) -> ComparisonMatrix {
    let mut rows = Vec::new();
    for key in FeatureKey::ALL {
        rows.push(MatrixRow {
            criterion: key.as_str().to_string(),
            a: a.feature(key),
            b: b.feature(key),
        });
        if key == FeatureKey::PerformanceMonitoring {
            rows.push(MatrixRow {
                criterion: "multi_vim".into(),
                a: a.multi_vim(),
                b: b.multi_vim(),
            });
        }
    }
    for platform in VimPlatform::ALL {
        rows.push(MatrixRow {
            criterion: format!("vim:{platform}"),
            a: a.vim_support(platform),
            b: b.vim_support(platform),
        });
    }
    ComparisonMatrix {
        a_name: a.target_name.clone(),
        b_name: b.target_name.clone(),
        rows,
    }
}

/// Manifests of the published OSM and ONAP releases.
pub mod manifests {
    use super::*;
    use FeatureStatus::*;

    fn features(entries: &[(FeatureKey, FeatureStatus)]) -> BTreeMap<FeatureKey, FeatureStatus> {
        entries.iter().copied().collect()
    }

    pub fn osm4() -> CapabilityManifest {
        CapabilityManifest {
            target_name: "OSM-4".into(),
            footprint: Footprint {
                vcpus: 2,
                memory_gb: 8,
                storage_gb: 40,
                ip_addresses: Some(1),
            },
            vim_platforms: [
                VimPlatform::OpenStack,
                VimPlatform::VMware,
                VimPlatform::AWS,
                VimPlatform::OpenVIM,
            ]
            .into(),
            features: features(&[
                (FeatureKey::BareMetalInstall, Supported),
                (FeatureKey::KubernetesInstall, Unsupported),
                (FeatureKey::PerformanceMonitoring, Supported),
                (FeatureKey::Cli, Supported),
                (FeatureKey::LcmScaling, Unsupported),
                (FeatureKey::MultiUser, Supported),
                (FeatureKey::MultiSite, Untested),
            ]),
            max_managed_vnfs: None,
        }
    }

    /// 20 floating plus 3 static addresses.
    pub fn onap_b() -> CapabilityManifest {
        CapabilityManifest {
            target_name: "ONAP-B".into(),
            footprint: Footprint {
                vcpus: 88,
                memory_gb: 176,
                storage_gb: 1760,
                ip_addresses: Some(23),
            },
            vim_platforms: [VimPlatform::OpenStack].into(),
            features: features(&[
                (FeatureKey::BareMetalInstall, Unsupported),
                (FeatureKey::KubernetesInstall, Supported),
                (FeatureKey::PerformanceMonitoring, Supported),
                (FeatureKey::Cli, Supported),
                (FeatureKey::LcmScaling, Unsupported),
                (FeatureKey::MultiUser, Supported),
                (FeatureKey::MultiSite, Untested),
            ]),
            max_managed_vnfs: None,
        }
    }

    pub fn osm5() -> CapabilityManifest {
        CapabilityManifest {
            target_name: "OSM-5".into(),
            footprint: Footprint {
                vcpus: 2,
                memory_gb: 4,
                storage_gb: 20,
                ip_addresses: None,
            },
            ..Default::default()
        }
    }

    pub fn onap_c_openstack() -> CapabilityManifest {
        CapabilityManifest {
            target_name: "ONAP-C (OpenStack)".into(),
            footprint: Footprint {
                vcpus: 88,
                memory_gb: 176,
                storage_gb: 1760,
                ip_addresses: None,
            },
            ..Default::default()
        }
    }

    pub fn onap_c_kubernetes() -> CapabilityManifest {
        CapabilityManifest {
            target_name: "ONAP-C (Kubernetes)".into(),
            footprint: Footprint {
                vcpus: 112,
                memory_gb: 224,
                storage_gb: 160,
                ip_addresses: None,
            },
            ..Default::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::manifests::*;
    use super::*;

    #[test]
    fn osm4_vs_onapb_ratios() {
        let r = footprint_ratio(&osm4(), &onap_b()).unwrap();
        assert!((r.vcpus - 2.0 / 88.0).abs() < 1e-15);
        assert!((r.memory - 8.0 / 176.0).abs() < 1e-15);
        assert!((r.storage - 40.0 / 1760.0).abs() < 1e-15);
        assert!((r.ip.unwrap() - 1.0 / 23.0).abs() < 1e-15);
    }

    #[test]
    fn identical_manifests_give_unit_ratios() {
        let r = footprint_ratio(&onap_b(), &onap_b()).unwrap();
        assert_eq!((r.vcpus, r.memory, r.storage, r.ip), (1.0, 1.0, 1.0, Some(1.0)));
    }

    #[test]
    fn zero_dimension_rejected() {
        let empty = CapabilityManifest::default();
        assert_eq!(
            footprint_ratio(&osm4(), &empty),
            Err(KpiError::DivisionByZeroDimension("vcpus"))
        );
    }

    #[test]
    fn multi_vim_and_lcm_rows() {
        let m = compare_capabilities(&osm4(), &onap_b());
        let row = m.row("multi_vim").unwrap();
        assert_eq!((row.a, row.b), (FeatureStatus::Supported, FeatureStatus::Unsupported));
        let row = m.row("lcm_scaling").unwrap();
        assert_eq!((row.a, row.b), (FeatureStatus::Unsupported, FeatureStatus::Unsupported));
    }

    #[test]
    fn empty_manifests_all_untested() {
        let m = compare_capabilities(&CapabilityManifest::default(), &CapabilityManifest::default());
        assert_eq!(m.rows.len(), FeatureKey::ALL.len() + 1 + VimPlatform::ALL.len());
        assert!(m
            .rows
            .iter()
            .all(|r| r.a == FeatureStatus::Untested && r.b == FeatureStatus::Untested));
    }

    #[test]
    fn manifest_json_uses_snake_case_keys() {
        let json = serde_json::to_value(osm4()).unwrap();
        assert_eq!(json["features"]["lcm_scaling"], "Unsupported");
        let back: CapabilityManifest = serde_json::from_value(json).unwrap();
        assert_eq!(back, osm4());
    }
}
