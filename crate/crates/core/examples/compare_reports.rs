//! Run one campaign against two differently tuned simulators and compare.

use manobench::campaign::{compare, run, CampaignConfig, CampaignError, ManifestSource, TargetConfig};
use manobench::kpi::capability::manifests;

fn main() -> Result<(), CampaignError> {
    let mut fast = CampaignConfig::vcpe_sim("vcpe");
    fast.capability_manifest = Some(ManifestSource::Inline(manifests::osm4()));
    let mut slow = fast.clone();
    slow.capability_manifest = Some(ManifestSource::Inline(manifests::onap_b()));
    if let TargetConfig::Sim { name, sim } = &mut slow.target {
        *name = "slow-sim".into();
        sim.delay_model.boot_base_ns *= 3;
        sim.delay_model.transfer_rate_mb_per_s /= 2.0;
    }

    let c = compare(&run(&fast, None)?, &run(&slow, None)?);
    println!("{} vs {}", c.a_name, c.b_name);
    for d in &c.vnf_deltas {
        println!(
            "  {:<6} OPD {:>6.2} s  DPD {:>6.2} s",
            d.vnf_name,
            d.opd_delta_ns as f64 / 1e9,
            d.dpd_delta_ns as f64 / 1e9
        );
    }
    if let Some(r) = c.footprint_ratios {
        println!("footprint vCPU ratio {:.4}", r.vcpus);
    }
    println!("warnings: {:?}", c.warnings);

    let dir = tempfile::tempdir()?;
    for p in c.write(dir.path())? {
        println!("wrote {}", p.file_name().unwrap().to_string_lossy());
    }
    Ok(())
}
