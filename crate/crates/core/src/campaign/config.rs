use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::CampaignError;
use crate::descriptor::{
    builtin_vcpe, nsd_to_json, package_to_json, parse_nsd, parse_package, NsDescriptor, Resources, VnfPackage,
};
use crate::drivers::EndpointConfig;
use crate::kpi::{AggregateMode, CapabilityManifest, QodWeights, DEFAULT_TAU_NS};
use crate::mano::OrchestratorConfig;
use crate::nfvi::{DelayModel, MetricModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub pool: Vec<Resources>,
    pub delay_model: DelayModel,
    pub orchestrator: OrchestratorConfig,
    pub metrics: MetricModel,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            pool: vec![Resources::new(8, 16384, 160); 3],
            delay_model: DelayModel::default(),
            orchestrator: OrchestratorConfig::default(),
            metrics: MetricModel::default(),
        }
    }
}

impl SimConfig {
    /// Every delay and overhead set to zero.
    pub fn zero_delay() -> Self {
        SimConfig {
            delay_model: DelayModel::zero(),
            orchestrator: OrchestratorConfig::zero_overhead(),
            ..SimConfig::default()
        }
    }
}

fn sim_name() -> String {
    "manobench-sim".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetConfig {
    Sim {
        #[serde(default = "sim_name")]
        name: String,
        #[serde(default)]
        sim: SimConfig,
    },
    Http {
        name: String,
        endpoint: EndpointConfig,
    },
}

impl TargetConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            TargetConfig::Sim { .. } => "sim",
            TargetConfig::Http { .. } => "http",
        }
    }

    pub fn name(&self) -> &str {
        match self {
            TargetConfig::Sim { name, .. } | TargetConfig::Http { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DescriptorSource {
    Fixture { fixture: String },
    Files { packages: Vec<PathBuf>, nsd: PathBuf },
}

impl Default for DescriptorSource {
    fn default() -> Self {
        DescriptorSource::Fixture { fixture: "vcpe".into() }
    }
}

/// One step after instantiation. JSON: `{"scale_out": "vGMUX"}`,
/// `{"migrate": "vBNG"}` or `"terminate"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionSpec {
    ScaleOut(String),
    Migrate(String),
    Terminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ManifestSource {
    Inline(CapabilityManifest),
    Path(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QodSettings {
    pub weights: QodWeights,
    pub tau_ns: f64,
}

impl Default for QodSettings {
    fn default() -> Self {
        QodSettings {
            weights: QodWeights::default(),
            tau_ns: DEFAULT_TAU_NS,
        }
    }
}

fn one() -> u32 {
    1
}

fn default_modes() -> Vec<AggregateMode> {
    vec![AggregateMode::Sum, AggregateMode::Makespan]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub campaign_name: String,
    pub target: TargetConfig,
    #[serde(default)]
    pub descriptors: DescriptorSource,
    #[serde(default)]
    pub actions: Vec<ActionSpec>,
    #[serde(default = "one")]
    pub repetitions: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_modes")]
    pub aggregate_modes: Vec<AggregateMode>,
    #[serde(default)]
    pub capability_manifest: Option<ManifestSource>,
    #[serde(default)]
    pub qod: QodSettings,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl CampaignConfig {
    /// A one-repetition vCPE campaign against a default simulator.
    pub fn vcpe_sim(name: &str) -> Self {
        CampaignConfig {
            campaign_name: name.into(),
            target: TargetConfig::Sim {
                name: sim_name(),
                sim: SimConfig::default(),
            },
            descriptors: DescriptorSource::default(),
            actions: Vec::new(),
            repetitions: 1,
            seed: 0,
            aggregate_modes: default_modes(),
            capability_manifest: None,
            qod: QodSettings::default(),
            base_dir: PathBuf::from("."),
        }
    }

    pub fn from_json(text: &str, base_dir: &Path) -> Result<Self, CampaignError> {
        let mut cfg: CampaignConfig =
            serde_json::from_str(text).map_err(|e| CampaignError::Config(format!("campaign config: {e}")))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CampaignError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CampaignError::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_json(&text, &base)
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn validate(&self) -> Result<(), CampaignError> {
        let bad = |m: String| Err(CampaignError::Config(m));
        if self.repetitions == 0 {
            return bad("repetitions must be >= 1".into());
        }
        if self.aggregate_modes.is_empty() {
            return bad("aggregate_modes must not be empty".into());
        }
        self.qod
            .weights
            .validate()
            .map_err(|e| CampaignError::Config(format!("qod weights: {e}")))?;
        if !(self.qod.tau_ns.is_finite() && self.qod.tau_ns > 0.0) {
            return bad("qod.tau_ns must be > 0".into());
        }
        match &self.target {
            TargetConfig::Sim { sim, .. } => {
                sim.delay_model
                    .validate()
                    .map_err(|e| CampaignError::Config(format!("delay_model: {e}")))?;
                sim.orchestrator
                    .validate()
                    .map_err(|e| CampaignError::Config(format!("orchestrator: {e}")))?;
            }
            TargetConfig::Http { endpoint, .. } => {
                if endpoint.timeout_ms == 0 || endpoint.poll_interval_ms == 0 {
                    return bad("endpoint timeout_ms and poll_interval_ms must be > 0".into());
                }
            }
        }
        match &self.descriptors {
            DescriptorSource::Fixture { fixture } if fixture != "vcpe" => {
                return bad(format!("unknown fixture `{fixture}`"));
            }
            DescriptorSource::Fixture { .. } => {}
            DescriptorSource::Files { packages, nsd } => {
                for p in packages.iter().chain(std::iter::once(nsd)) {
                    if !self.resolve(p).is_file() {
                        return bad(format!("descriptor file {} does not exist", self.resolve(p).display()));
                    }
                }
            }
        }
        if let Some(ManifestSource::Path(p)) = &self.capability_manifest {
            if !self.resolve(p).is_file() {
                return bad(format!("manifest file {} does not exist", self.resolve(p).display()));
            }
        }
        Ok(())
    }

    pub fn load_descriptors(&self) -> Result<(NsDescriptor, Vec<VnfPackage>), CampaignError> {
        match &self.descriptors {
            DescriptorSource::Fixture { .. } => Ok(builtin_vcpe()),
            DescriptorSource::Files { packages, nsd } => {
                let read = |p: &Path| {
                    fs::read_to_string(self.resolve(p))
                        .map_err(|e| CampaignError::Config(format!("cannot read {}: {e}", p.display())))
                };
                let pkgs = packages
                    .iter()
                    .map(|p| {
                        parse_package(&read(p)?).map_err(|e| CampaignError::Config(format!("{}: {e}", p.display())))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let vnfds: Vec<_> = pkgs.iter().map(|p| p.vnfd.clone()).collect();
                let nsd = parse_nsd(&read(nsd)?, &vnfds)
                    .map_err(|e| CampaignError::Config(format!("{}: {e}", nsd.display())))?;
                Ok((nsd, pkgs))
            }
        }
    }

    pub fn load_manifest(&self) -> Result<Option<CapabilityManifest>, CampaignError> {
        match &self.capability_manifest {
            None => Ok(None),
            Some(ManifestSource::Inline(m)) => Ok(Some(m.clone())),
            Some(ManifestSource::Path(p)) => {
                let text = fs::read_to_string(self.resolve(p))
                    .map_err(|e| CampaignError::Config(format!("cannot read {}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map(Some)
                    .map_err(|e| CampaignError::Config(format!("{}: {e}", p.display())))
            }
        }
    }

    /// SHA-256 over the methodology: resolved descriptors, actions,
    /// repetitions, seed, aggregate modes and QoD settings. The target is
    /// left out so runs against different targets can be compared.
    pub fn digest(&self) -> Result<String, CampaignError> {
        let (nsd, pkgs) = self.load_descriptors()?;
        let methodology = serde_json::json!({
            "packages": pkgs.iter().map(package_to_json).collect::<Vec<_>>(),
            "nsd": nsd_to_json(&nsd),
            "actions": self.actions,
            "repetitions": self.repetitions,
            "seed": self.seed,
            "aggregate_modes": self.aggregate_modes,
            "qod": self.qod,
        });
        Ok(hex::encode(Sha256::digest(methodology.to_string().as_bytes())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let cfg = CampaignConfig::from_json(
            r#"{"campaign_name": "c", "target": {"kind": "sim"},
                "actions": [{"scale_out": "vGMUX"}, {"migrate": "vBNG"}, "terminate"]}"#,
            Path::new("."),
        )
        .unwrap();
        assert_eq!(cfg.repetitions, 1);
        assert_eq!(cfg.descriptors, DescriptorSource::default());
        assert_eq!(
            cfg.actions,
            [ActionSpec::ScaleOut("vGMUX".into()), ActionSpec::Migrate("vBNG".into()), ActionSpec::Terminate]
        );
        assert_eq!(cfg.target.kind(), "sim");
    }

    #[test]
    fn rejects_bad_configs() {
        let base = Path::new(".");
        for text in [
            r#"{"campaign_name": "c", "target": {"kind": "sim"}, "repetitions": 0}"#,
            r#"{"campaign_name": "c", "target": {"kind": "sim"}, "descriptors": {"fixture": "ims"}}"#,
            r#"{"campaign_name": "c", "target": {"kind": "sim"}, "descriptors": {"packages": ["nope.json"], "nsd": "nsd.json"}}"#,
            r#"{"campaign_name": "c", "target": {"kind": "sim"}, "qod": {"weights": [1, 1, 0, 0, 0]}}"#,
            r#"{"campaign_name": "c"}"#,
        ] {
            assert!(matches!(CampaignConfig::from_json(text, base), Err(CampaignError::Config(_))), "{text}");
        }
    }

    #[test]
    fn digest_ignores_target() {
        let a = CampaignConfig::vcpe_sim("x");
        let mut b = a.clone();
        b.target = TargetConfig::Http {
            name: "remote".into(),
            endpoint: EndpointConfig::default(),
        };
        assert_eq!(a.digest().unwrap(), b.digest().unwrap());
        b.seed = 1;
        assert_ne!(a.digest().unwrap(), b.digest().unwrap());
    }
}
