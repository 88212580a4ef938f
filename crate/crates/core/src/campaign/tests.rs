use super::*;
use crate::drivers::{nbi_serve, ClockSource, EndpointConfig, ServeConfig};
use crate::kpi::capability::manifests;
use crate::mano::FaultEntry;

fn zero_cfg() -> CampaignConfig {
    let mut cfg = CampaignConfig::vcpe_sim("zero");
    cfg.target = TargetConfig::Sim {
        name: "sim".into(),
        sim: SimConfig::zero_delay(),
    };
    cfg
}

#[test]
fn zero_delays_give_zero_kpis() {
    let mut cfg = zero_cfg();
    cfg.actions = vec![ActionSpec::ScaleOut("vGMUX".into()), ActionSpec::Migrate("vBNG".into())];
    let report = run(&cfg, None).unwrap();
    assert!(!report.incomplete, "{:?}", report.errors);
    assert_eq!(report.samples_of(KpiKind::Opd).count(), 5);
    assert_eq!(report.samples_of(KpiKind::Dpd).count(), 5);
    assert_eq!(report.samples_of(KpiKind::Rod).count(), 2);
    assert!(report.samples.iter().all(|s| s.sample.duration_ns == 0));
}

#[test]
fn same_seed_same_bytes() {
    let mut cfg = CampaignConfig::vcpe_sim("det");
    cfg.seed = 42;
    cfg.repetitions = 2;
    cfg.actions = vec![ActionSpec::ScaleOut("vGMUX".into())];
    if let TargetConfig::Sim { sim, .. } = &mut cfg.target {
        sim.delay_model.jitter_pct = 10.0;
    }
    let a = run(&cfg, None).unwrap().to_json();
    let b = run(&cfg, None).unwrap().to_json();
    assert_eq!(a, b);
    cfg.seed = 43;
    assert_ne!(a, run(&cfg, None).unwrap().to_json());
}

#[test]
fn one_scale_out_gives_one_rod_and_one_qod() {
    let mut cfg = CampaignConfig::vcpe_sim("scale");
    cfg.actions = vec![ActionSpec::ScaleOut("vGMUX".into())];
    let report = run(&cfg, None).unwrap();
    assert_eq!(report.samples_of(KpiKind::Rod).count(), 1);
    assert_eq!(report.qod.len(), 1);
    assert_eq!(report.qod[0].vnf_name, "vGMUX");
    assert!(report.samples.iter().all(|s| report.vnf_names.contains(&s.sample.vnf_name)));
    assert_eq!(report.utilization.len(), 6);
    assert_eq!(report.utilization.iter().filter(|u| u.replica).count(), 1);
}

#[test]
fn failed_action_still_cleans_up() {
    let mut sim = SimConfig::default();
    // The scale-out is command 6.
    sim.orchestrator.fault_plan = vec![FaultEntry { ordinal: 6, rejections: 99 }];
    let orch = build_sim(&sim, 0).unwrap();
    let server = nbi_serve(orch, ServeConfig::default()).unwrap();
    let endpoint = EndpointConfig {
        base_url: server.url(),
        clock_source: ClockSource::Target,
        ..EndpointConfig::default()
    };
    let mut cfg = CampaignConfig::vcpe_sim("fail");
    cfg.target = TargetConfig::Http {
        name: "remote-sim".into(),
        endpoint,
    };
    cfg.actions = vec![ActionSpec::ScaleOut("vGMUX".into())];
    let report = run(&cfg, None).unwrap();
    assert!(report.incomplete);
    assert!(report.errors[0].contains("409"), "{:?}", report.errors);
    assert_eq!(report.samples_of(KpiKind::Opd).count(), 5);
    let orch = server.orchestrator();
    let orch = orch.lock().unwrap();
    assert!(orch.vim().nodes().iter().all(|n| n.allocations.is_empty()));
    assert_eq!(orch.packages().count(), 0);
    drop(orch);
    server.shutdown();
}

#[test]
fn compare_with_itself() {
    let mut cfg = CampaignConfig::vcpe_sim("self");
    cfg.capability_manifest = Some(ManifestSource::Inline(manifests::osm4()));
    let report = run(&cfg, None).unwrap();
    let c = compare(&report, &report);
    let r = c.footprint_ratios.unwrap();
    assert_eq!((r.vcpus, r.memory, r.storage, r.ip), (1.0, 1.0, 1.0, Some(1.0)));
    assert_eq!(c.vnf_deltas.len(), 5);
    assert!(c.vnf_deltas.iter().all(|d| d.opd_delta_ns == 0 && d.dpd_delta_ns == 0));
    assert!(c.warnings.is_empty(), "{:?}", c.warnings);
}

#[test]
fn compare_published_manifests() {
    let mut a = run(&zero_cfg(), None).unwrap();
    let mut b = a.clone();
    a.capability_manifest = Some(manifests::osm4());
    b.capability_manifest = Some(manifests::onap_b());
    let c = compare(&a, &b);
    assert!((c.footprint_ratios.unwrap().vcpus - 0.0227).abs() < 5e-5);
    assert_eq!(c.matrix.unwrap().rows.len(), 13);
}

#[test]
fn disjoint_vnf_sets_warn() {
    let a = run(&zero_cfg(), None).unwrap();
    let mut b = a.clone();
    b.vnf_names = vec!["vFW".into()];
    for s in &mut b.samples {
        s.sample.vnf_name = "vFW".into();
    }
    let c = compare(&a, &b);
    assert!(c.vnf_deltas.is_empty());
    assert!(c.warnings.iter().any(|w| w.contains("no common VNFs")));
}

#[test]
fn report_version_is_checked() {
    let report = run(&zero_cfg(), None).unwrap();
    let text = report.to_json().replace("\"report_version\": 1", "\"report_version\": 2");
    assert!(matches!(
        KpiReport::from_json(&text),
        Err(CampaignError::SchemaVersionMismatch { found: 2, .. })
    ));
    assert!(matches!(KpiReport::from_json("{"), Err(CampaignError::UnreadableReport(_))));
    assert_eq!(KpiReport::from_json(&report.to_json()).unwrap(), report);
}

#[test]
fn plot_data_matches_aggregates() {
    let mut cfg = CampaignConfig::vcpe_sim("plot");
    cfg.aggregate_modes = AggregateMode::ALL.to_vec();
    let dir = tempfile::tempdir().unwrap();
    let report = run(&cfg, Some(dir.path())).unwrap();
    let plot = dir.path().join("plot");
    for f in PLOT_FILES {
        assert!(plot.join(f).is_file(), "{f}");
    }
    let rows = |f: &str| -> Vec<(String, String)> {
        std::fs::read_to_string(plot.join(f))
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| {
                let (a, b) = l.split_once(',').unwrap();
                (a.to_string(), b.to_string())
            })
            .collect()
    };
    let per_vnf = rows("opd_per_vnf.csv");
    assert_eq!(per_vnf.len(), 5);
    let sum: u64 = per_vnf.iter().map(|(_, v)| v.parse::<u64>().unwrap()).sum();
    let agg = rows("opd_aggregate.csv");
    assert_eq!(agg[0], ("Sum".to_string(), sum.to_string()));
    let opd: Vec<_> = report.samples_of(KpiKind::Opd).cloned().collect();
    assert_eq!(agg[2].1, aggregate(&opd, AggregateMode::Mean).unwrap().value_ns.to_string());
    assert_eq!(rows("cpu_per_vnf.csv").len(), 5);
    assert!(dir.path().join("report.json").is_file());
    assert_eq!(std::fs::read_dir(dir.path().join("metrics/rep-0")).unwrap().count(), 10);
}

#[test]
fn default_delays_order_vnfs() {
    let report = run(&CampaignConfig::vcpe_sim("order"), None).unwrap();
    for kind in [KpiKind::Opd, KpiKind::Dpd] {
        let get = |n: &str| report.samples_of(kind).find(|s| s.vnf_name == n).unwrap().duration_ns;
        for heavy in ["vBNG", "vInfra"] {
            for light in ["vGDHCP", "vBRG", "vGMUX"] {
                assert!(get(heavy) > get(light), "{kind} {heavy} vs {light}");
            }
        }
    }
}
