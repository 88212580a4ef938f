use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{CampaignError, KpiReport};
use crate::kpi::{compare_capabilities, footprint_ratio, ComparisonMatrix, FootprintRatios, KpiKind};

/// Per-VNF mean OPD/DPD of two reports and their difference `a - b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VnfDelta {
    pub vnf_name: String,
    pub opd_a_ns: u64,
    pub opd_b_ns: u64,
    pub opd_delta_ns: i64,
    pub dpd_a_ns: u64,
    pub dpd_b_ns: u64,
    pub dpd_delta_ns: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub a_name: String,
    pub b_name: String,
    pub matrix: Option<ComparisonMatrix>,
    pub footprint_ratios: Option<FootprintRatios>,
    pub vnf_deltas: Vec<VnfDelta>,
    pub warnings: Vec<String>,
}

/// Mean deployment delay per VNF name, rounded halves up.
fn per_vnf_means(report: &KpiReport, kind: KpiKind) -> BTreeMap<String, u64> {
    let mut acc: BTreeMap<String, (u64, u64)> = BTreeMap::new();
    for s in report.samples_of(kind) {
        let e = acc.entry(s.vnf_name.clone()).or_default();
        e.0 += s.duration_ns;
        e.1 += 1;
    }
    acc.into_iter().map(|(k, (sum, n))| (k, (sum + n / 2) / n)).collect()
}

pub fn compare(a: &KpiReport, b: &KpiReport) -> Comparison {
    let mut warnings = Vec::new();
    if a.campaign.config_digest != b.campaign.config_digest {
        warnings.push("reports come from different campaign methodologies (config digests differ)".to_string());
    }
    if a.campaign.clock_domain != b.campaign.clock_domain {
        warnings.push(format!(
            "clock domains differ: {:?} vs {:?}",
            a.campaign.clock_domain, b.campaign.clock_domain
        ));
    }
    for (r, label) in [(a, "a"), (b, "b")] {
        if r.incomplete {
            warnings.push(format!("report {label} is incomplete"));
        }
    }

    let (matrix, footprint_ratios) = match (&a.capability_manifest, &b.capability_manifest) {
        (Some(ma), Some(mb)) => {
            let ratios = match footprint_ratio(ma, mb) {
                Ok(r) => Some(r),
                Err(e) => {
                    warnings.push(format!("footprint ratios: {e}"));
                    None
                }
            };
            (Some(compare_capabilities(ma, mb)), ratios)
        }
        _ => {
            warnings.push("capability manifest missing; no matrix or footprint ratios".to_string());
            (None, None)
        }
    };

    let (opd_a, opd_b) = (per_vnf_means(a, KpiKind::Opd), per_vnf_means(b, KpiKind::Opd));
    let (dpd_a, dpd_b) = (per_vnf_means(a, KpiKind::Dpd), per_vnf_means(b, KpiKind::Dpd));
    if a.vnf_names != b.vnf_names {
        warnings.push("VNF sets differ; deltas cover the common VNFs only".to_string());
    }
    let mut vnf_deltas = Vec::new();
    for name in a.vnf_names.iter().filter(|n| b.vnf_names.contains(n)) {
        let (Some(&oa), Some(&ob), Some(&da), Some(&db)) =
            (opd_a.get(name), opd_b.get(name), dpd_a.get(name), dpd_b.get(name))
        else {
            warnings.push(format!("`{name}` lacks OPD or DPD samples in one report"));
            continue;
        };
        vnf_deltas.push(VnfDelta {
            vnf_name: name.clone(),
            opd_a_ns: oa,
            opd_b_ns: ob,
            opd_delta_ns: oa as i64 - ob as i64,
            dpd_a_ns: da,
            dpd_b_ns: db,
            dpd_delta_ns: da as i64 - db as i64,
        });
    }
    if vnf_deltas.is_empty() {
        warnings.push("no common VNFs; delta table is empty".to_string());
    }

    Comparison {
        a_name: a.target.name.clone(),
        b_name: b.target.name.clone(),
        matrix,
        footprint_ratios,
        vnf_deltas,
        warnings,
    }
}

impl Comparison {
    /// Writes `capability_matrix.csv`, `footprint_ratios.csv` (when
    /// available), `vnf_deltas.csv` and `comparison.json`.
    pub fn write(&self, out_dir: &Path) -> Result<Vec<PathBuf>, CampaignError> {
        fs::create_dir_all(out_dir)?;
        let mut written = Vec::new();
        if let Some(m) = &self.matrix {
            let p = out_dir.join("capability_matrix.csv");
            fs::write(&p, m.to_csv())?;
            written.push(p);
        }
        if let Some(r) = &self.footprint_ratios {
            let p = out_dir.join("footprint_ratios.csv");
            let mut text = String::from("dimension,ratio\n");
            for (dim, v) in [("vcpus", Some(r.vcpus)), ("memory", Some(r.memory)), ("storage", Some(r.storage)), ("ip", r.ip)] {
                if let Some(v) = v {
                    text.push_str(&format!("{dim},{v}\n"));
                }
            }
            fs::write(&p, text)?;
            written.push(p);
        }
        let p = out_dir.join("vnf_deltas.csv");
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_path(&p)
            .map_err(std::io::Error::other)?;
        w.write_record(["vnf_name", "opd_a_ns", "opd_b_ns", "opd_delta_ns", "dpd_a_ns", "dpd_b_ns", "dpd_delta_ns"])
            .map_err(std::io::Error::other)?;
        for d in &self.vnf_deltas {
            w.serialize(d).map_err(std::io::Error::other)?;
        }
        w.flush()?;
        written.push(p);
        let p = out_dir.join("comparison.json");
        fs::write(&p, serde_json::to_string_pretty(self).expect("comparisons serialize") + "\n")?;
        written.push(p);
        Ok(written)
    }
}
