//! A full vCPE campaign against the in-process simulator.
//!
//! `cargo run --example sim_campaign -- [out_dir]` writes report.json,
//! plot data and metric CSVs when an output directory is given.

use std::path::PathBuf;

use manobench::campaign::{run, ActionSpec, CampaignConfig, CampaignError, TargetConfig};
use manobench::kpi::{AggregateMode, KpiKind};

fn main() -> Result<(), CampaignError> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let mut cfg = CampaignConfig::vcpe_sim("vcpe-example");
    cfg.seed = 42;
    cfg.repetitions = 3;
    cfg.actions = vec![ActionSpec::ScaleOut("vGMUX".into()), ActionSpec::Migrate("vBNG".into())];
    cfg.aggregate_modes = AggregateMode::ALL.to_vec();
    if let TargetConfig::Sim { sim, .. } = &mut cfg.target {
        sim.delay_model.jitter_pct = 5.0;
    }

    let report = run(&cfg, out.as_deref())?;
    println!("digest {}", &report.campaign.config_digest[..16]);
    println!("incomplete: {} errors: {:?}", report.incomplete, report.errors);
    for kind in [KpiKind::Opd, KpiKind::Dpd, KpiKind::Rod] {
        println!("{kind}: {} samples", report.samples_of(kind).count());
    }
    for a in &report.aggregates {
        println!("  {} {:<8} {:>8.2} s over {}", a.kind, a.mode, a.value_ns as f64 / 1e9, a.sample_count);
    }
    for q in &report.qod {
        println!(
            "  rep {} {} {:?} {} -> {} attempts {} QoD {:.3}",
            q.repetition, q.action_id, q.action_kind, q.vnf_name, q.chosen_node, q.attempts, q.score.composite
        );
    }
    if let Some(dir) = out {
        println!("wrote {}", dir.display());
    }
    Ok(())
}
