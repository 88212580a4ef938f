//! Campaign runner, reports, comparisons and plot data.
//!
//! A campaign drives one target through, per repetition: onboard every
//! package, instantiate the NS, run the configured actions, read metrics,
//! then clean up (terminate and delete packages) whatever happened before.
//! Simulated targets get fresh state per repetition, seeded from the
//! campaign seed and the repetition index.

mod compare;
mod config;
mod plot;
mod report;

use std::path::Path;

use log::{info, warn};
use thiserror::Error;

use crate::descriptor::NsDescriptor;
use crate::drivers::{collect_metrics, ActionHandle, DriverError, NbiClient, SimDriver, TargetDriver};
use crate::kpi::{
    aggregate, aggregate_with_timeline, dpd, opd, qod_score, rod, ActionKind, AggregateMode, AggregateStats, KpiError,
    KpiKind, KpiSample, LifecycleTimeline,
};
use crate::mano::Orchestrator;
use crate::nfvi::{Metric, VimState};

pub use compare::{compare, Comparison, VnfDelta};
pub use config::{ActionSpec, CampaignConfig, DescriptorSource, ManifestSource, QodSettings, SimConfig, TargetConfig};
pub use plot::{emit_plot_data, PLOT_FILES};
pub use report::{
    CampaignMeta, KpiReport, QodEntry, ReportSample, TargetInfo, UtilizationSummary, REPORT_VERSION,
};

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("target error: {0}")]
    Target(#[from] DriverError),
    #[error("KPI error: {0}")]
    Kpi(#[from] KpiError),
    #[error("unreadable report: {0}")]
    UnreadableReport(String),
    #[error("report_version {found} is not the supported version {expected}")]
    SchemaVersionMismatch { found: u64, expected: u32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Seed of repetition `rep`: a splitmix64 round over the campaign seed.
pub fn repetition_seed(seed: u64, rep: u32) -> u64 {
    let mut z = seed ^ u64::from(rep).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A fresh simulated orchestrator for one repetition.
pub fn build_sim(sim: &SimConfig, seed: u64) -> Result<Orchestrator, CampaignError> {
    let config_err = |e: &dyn std::fmt::Display| CampaignError::Config(e.to_string());
    let delay = crate::nfvi::DelayModel { seed, ..sim.delay_model.clone() };
    let metrics = crate::nfvi::MetricModel { seed, ..sim.metrics.clone() };
    let vim = VimState::create_pool(&sim.pool)
        .and_then(|v| v.with_delay_model(delay))
        .map_err(|e| config_err(&e))?
        .with_metric_model(metrics);
    Orchestrator::new(sim.orchestrator.clone(), vim).map_err(|e| config_err(&e))
}

fn make_driver(cfg: &CampaignConfig, rep: u32) -> Result<Box<dyn TargetDriver>, CampaignError> {
    Ok(match &cfg.target {
        TargetConfig::Sim { sim, .. } => {
            Box::new(SimDriver::new(build_sim(sim, repetition_seed(cfg.seed, rep))?))
        }
        TargetConfig::Http { endpoint, .. } => Box::new(NbiClient::new(endpoint.clone())),
    })
}

struct Repetition {
    samples: Vec<KpiSample>,
    timeline: LifecycleTimeline,
    qod: Vec<QodEntry>,
    utilization: Vec<UtilizationSummary>,
    errors: Vec<String>,
}

/// Runs a campaign with the driver its config names.
pub fn run(cfg: &CampaignConfig, out_dir: Option<&Path>) -> Result<KpiReport, CampaignError> {
    run_with(cfg, out_dir, |rep| make_driver(cfg, rep))
}

/// Runs a campaign, asking `driver_for` for the driver of each repetition.
/// With `out_dir`, metric CSVs go to `metrics/rep-<r>/`, then the report
/// and plot data are written.
pub fn run_with<F>(cfg: &CampaignConfig, out_dir: Option<&Path>, mut driver_for: F) -> Result<KpiReport, CampaignError>
where
    F: FnMut(u32) -> Result<Box<dyn TargetDriver>, CampaignError>,
{
    cfg.validate()?;
    let (nsd, packages) = cfg.load_descriptors()?;
    let manifest = cfg.load_manifest()?;
    let digest = cfg.digest()?;

    let mut reps = Vec::new();
    let mut clock_domain = None;
    for rep in 0..cfg.repetitions {
        let mut driver = driver_for(rep)?;
        clock_domain.get_or_insert(driver.clock_domain());
        let metrics_dir = out_dir.map(|d| d.join("metrics").join(format!("rep-{rep}")));
        info!("repetition {rep} of campaign `{}`", cfg.campaign_name);
        let r = run_repetition(cfg, rep, driver.as_mut(), &nsd, &packages, metrics_dir.as_deref());
        for e in &r.errors {
            warn!("repetition {rep}: {e}");
        }
        reps.push(r);
    }

    let mut errors = Vec::new();
    let mut samples = Vec::new();
    let mut qod = Vec::new();
    let mut utilization = Vec::new();
    for (rep, r) in reps.iter().enumerate() {
        errors.extend(r.errors.iter().map(|e| format!("repetition {rep}: {e}")));
        samples.extend(r.samples.iter().map(|s| ReportSample {
            repetition: rep as u32,
            sample: s.clone(),
        }));
        qod.extend(r.qod.iter().cloned());
        utilization.extend(r.utilization.iter().cloned());
    }
    let aggregates = aggregates(&reps, &cfg.aggregate_modes)?;

    let vnf_names = nsd
        .deployment_order()
        .into_iter()
        .map(|id| {
            packages
                .iter()
                .find(|p| p.vnfd.id == id)
                .map_or_else(|| id.to_string(), |p| p.vnfd.name.clone())
        })
        .collect();
    let report = KpiReport {
        report_version: REPORT_VERSION,
        target: TargetInfo {
            kind: cfg.target.kind().into(),
            name: cfg.target.name().into(),
        },
        campaign: CampaignMeta {
            name: cfg.campaign_name.clone(),
            seed: cfg.seed,
            repetitions: cfg.repetitions,
            clock_domain: clock_domain.expect("repetitions >= 1"),
            config_digest: digest,
        },
        incomplete: !errors.is_empty(),
        errors,
        capability_manifest: manifest,
        vnf_names,
        samples,
        aggregates,
        qod,
        utilization,
    };
    if let Some(dir) = out_dir {
        report.write(&dir.join("report.json"))?;
        emit_plot_data(&report, &dir.join("plot"))?;
    }
    Ok(report)
}

/// Sum, Mean and P95 pool the samples of all repetitions. Makespan is
/// taken per repetition on its own timeline and summed over repetitions.
fn aggregates(reps: &[Repetition], modes: &[AggregateMode]) -> Result<Vec<AggregateStats>, KpiError> {
    let mut out = Vec::new();
    for kind in [KpiKind::Opd, KpiKind::Dpd, KpiKind::Rod] {
        let pooled: Vec<KpiSample> = reps
            .iter()
            .flat_map(|r| r.samples.iter().filter(|s| s.kind == kind).cloned())
            .collect();
        if pooled.is_empty() {
            continue;
        }
        for &mode in modes {
            if mode != AggregateMode::Makespan {
                out.push(aggregate(&pooled, mode)?);
                continue;
            }
            let mut value_ns = 0;
            for r in reps {
                let own: Vec<KpiSample> = r.samples.iter().filter(|s| s.kind == kind).cloned().collect();
                if !own.is_empty() {
                    value_ns += aggregate_with_timeline(&own, mode, Some(&r.timeline))?.value_ns;
                }
            }
            out.push(AggregateStats {
                kind,
                mode,
                value_ns,
                sample_count: pooled.len(),
            });
        }
    }
    Ok(out)
}

fn run_repetition(
    cfg: &CampaignConfig,
    rep: u32,
    driver: &mut dyn TargetDriver,
    nsd: &NsDescriptor,
    packages: &[crate::descriptor::VnfPackage],
    metrics_dir: Option<&Path>,
) -> Repetition {
    let mut errors = Vec::new();
    let mut onboarded = Vec::new();
    let mut deployment = Vec::new();
    let mut actions: Vec<(ActionHandle, ActionKind, String)> = Vec::new();
    let mut ns_id = None;
    let mut ns_live = false;

    let main: Result<(), DriverError> = (|| {
        for p in packages {
            onboarded.push(driver.onboard_package(p)?);
        }
        let nsd_id = driver.register_nsd(nsd)?;
        let id = driver.instantiate_ns(&nsd_id)?;
        ns_id = Some(id.clone());
        ns_live = true;
        deployment = driver
            .poll_ns_status(&id)?
            .vnfs
            .into_iter()
            .map(|v| v.instance_id)
            .collect();
        for action in &cfg.actions {
            match action {
                ActionSpec::ScaleOut(vnf) => {
                    actions.push((driver.scale_out(&id, vnf)?, ActionKind::ScaleOut, vnf.clone()));
                }
                ActionSpec::Migrate(vnf) => {
                    actions.push((driver.migrate(&id, vnf)?, ActionKind::Migrate, vnf.clone()));
                }
                ActionSpec::Terminate => {
                    driver.terminate_ns(&id)?;
                    ns_live = false;
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = main {
        errors.push(e.to_string());
    }

    let utilization = match utilization(driver, rep, &deployment) {
        Ok(u) => u,
        Err(e) => {
            errors.push(format!("metrics: {e}"));
            Vec::new()
        }
    };
    if let Some(dir) = metrics_dir {
        if let Err(e) = collect_metrics(driver, dir) {
            errors.push(format!("metrics collection: {e}"));
        }
    }

    let mut samples = Vec::new();
    let mut qod = Vec::new();
    let timeline = match driver.timeline() {
        Ok(t) => t,
        Err(e) => {
            errors.push(format!("timeline: {e}"));
            LifecycleTimeline::new(driver.clock_domain())
        }
    };
    let extracted: Result<(), KpiError> = (|| {
        for id in &deployment {
            samples.push(opd(&timeline, id)?);
        }
        for id in &deployment {
            samples.push(dpd(&timeline, id)?);
        }
        for (handle, kind, vnf) in &actions {
            samples.push(rod(&timeline, &handle.op_id)?);
            if let Some(trace) = &handle.trace {
                qod.push(QodEntry {
                    repetition: rep,
                    action_id: handle.op_id.clone(),
                    action_kind: *kind,
                    vnf_name: vnf.clone(),
                    attempts: trace.attempts,
                    chosen_node: trace.chosen_node.clone(),
                    score: qod_score(&trace.qod_inputs, &cfg.qod.weights, cfg.qod.tau_ns)?,
                });
            }
        }
        Ok(())
    })();
    if let Err(e) = extracted {
        errors.push(format!("KPI extraction: {e}"));
    }
    let uncertainty = driver.sample_uncertainty_ns();
    for s in &mut samples {
        s.uncertainty_ns = uncertainty;
    }

    // Cleanup runs whatever happened above.
    if let (Some(id), true) = (&ns_id, ns_live) {
        if let Err(e) = driver.terminate_ns(id) {
            errors.push(format!("cleanup terminate: {e}"));
        }
    }
    for h in &onboarded {
        if let Err(e) = driver.delete_package(&h.package_id) {
            errors.push(format!("cleanup delete {}: {e}", h.package_id));
        }
    }

    Repetition {
        samples,
        timeline,
        qod,
        utilization,
        errors,
    }
}

fn utilization(
    driver: &mut dyn TargetDriver,
    rep: u32,
    deployment: &[String],
) -> Result<Vec<UtilizationSummary>, DriverError> {
    let mut out = Vec::new();
    for inst in driver.list_instances()? {
        let ids = driver.list_instance_metrics(&inst.id)?;
        let mut mean = |metric: Metric| -> Result<(f64, usize), DriverError> {
            let Some(id) = ids.get(metric.as_str()) else {
                return Ok((0.0, 0));
            };
            let points = driver.fetch_measures(id)?;
            let n = points.len();
            let sum: f64 = points.iter().map(|(_, v)| v).sum();
            Ok((if n == 0 { 0.0 } else { sum / n as f64 }, n))
        };
        let (cpu, n) = mean(Metric::CpuUtilPct)?;
        let (mem, _) = mean(Metric::MemoryUsageMb)?;
        out.push(UtilizationSummary {
            repetition: rep,
            instance_name: inst.name,
            vnf_name: inst.vnf_name,
            replica: !deployment.contains(&inst.id),
            cpu_mean_pct: cpu,
            memory_mean_mb: mem,
            points: n,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
