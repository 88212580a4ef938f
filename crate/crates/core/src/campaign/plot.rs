use std::fs;
use std::path::{Path, PathBuf};

use super::{CampaignError, KpiReport};
use crate::kpi::KpiKind;

type Rows = Vec<(String, String)>;

/// File names written by [`emit_plot_data`], in write order.
pub const PLOT_FILES: [&str; 8] = [
    "opd_per_vnf.csv",
    "opd_aggregate.csv",
    "dpd_per_vnf.csv",
    "dpd_aggregate.csv",
    "cpu_per_vnf.csv",
    "cpu_aggregate.csv",
    "memory_per_vnf.csv",
    "memory_aggregate.csv",
];

fn table(value_col: &str, rows: &[(String, String)]) -> String {
    let mut out = format!("label,{value_col}\n");
    for (label, value) in rows {
        out.push_str(&format!("{label},{value}\n"));
    }
    out
}

/// Writes one `label,value_*` CSV per chart. Per-VNF rows come
/// from deployment samples (replicas excluded); aggregate rows are the
/// report's aggregates for delays, and the sum and mean of the per-VNF
/// rows for utilization. Labels carry `#<repetition>` when a report has
/// more than one repetition.
pub fn emit_plot_data(report: &KpiReport, out_dir: &Path) -> Result<Vec<PathBuf>, CampaignError> {
    fs::create_dir_all(out_dir)?;
    let multi = report.campaign.repetitions > 1;
    let label = |name: &str, rep: u32| if multi { format!("{name}#{rep}") } else { name.to_string() };

    let delay_rows = |kind: KpiKind| -> (Rows, Rows) {
        let per_vnf = report
            .samples
            .iter()
            .filter(|s| s.sample.kind == kind)
            .map(|s| (label(&s.sample.vnf_name, s.repetition), s.sample.duration_ns.to_string()))
            .collect();
        let agg = report
            .aggregates
            .iter()
            .filter(|a| a.kind == kind)
            .map(|a| (a.mode.to_string(), a.value_ns.to_string()))
            .collect();
        (per_vnf, agg)
    };
    let util_rows = |value: &dyn Fn(&super::UtilizationSummary) -> f64| {
        let deployed: Vec<_> = report.utilization.iter().filter(|u| !u.replica).collect();
        let per_vnf: Vec<(String, String)> = deployed
            .iter()
            .map(|u| (label(&u.vnf_name, u.repetition), value(u).to_string()))
            .collect();
        let sum: f64 = deployed.iter().map(|u| value(u)).sum();
        let mut agg = vec![("Sum".to_string(), sum.to_string())];
        if !deployed.is_empty() {
            agg.push(("Mean".to_string(), (sum / deployed.len() as f64).to_string()));
        }
        (per_vnf, agg)
    };

    let (opd_v, opd_a) = delay_rows(KpiKind::Opd);
    let (dpd_v, dpd_a) = delay_rows(KpiKind::Dpd);
    let (cpu_v, cpu_a) = util_rows(&|u| u.cpu_mean_pct);
    let (mem_v, mem_a) = util_rows(&|u| u.memory_mean_mb);
    let contents = [
        table("value_ns", &opd_v),
        table("value_ns", &opd_a),
        table("value_ns", &dpd_v),
        table("value_ns", &dpd_a),
        table("value_pct", &cpu_v),
        table("value_pct", &cpu_a),
        table("value_mb", &mem_v),
        table("value_mb", &mem_a),
    ];
    let mut written = Vec::new();
    for (name, text) in PLOT_FILES.iter().zip(contents) {
        let p = out_dir.join(name);
        fs::write(&p, text)?;
        written.push(p);
    }
    Ok(written)
}
