//! Dump per-instance CPU and memory series to CSV, then read one back.

use manobench::campaign::{build_sim, SimConfig};
use manobench::descriptor::builtin_vcpe;
use manobench::drivers::{collect_metrics, read_metric_csv, SimDriver};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut orch = build_sim(&SimConfig::default(), 3)?;
    let (nsd, packages) = builtin_vcpe();
    for p in packages {
        orch.onboard(p)?;
    }
    let nsd_id = orch.register_nsd(nsd)?;
    orch.instantiate_ns(&nsd_id)?;

    let dir = tempfile::tempdir()?;
    let mut driver = SimDriver::new(orch);
    let files = collect_metrics(&mut driver, dir.path())?;
    for f in &files {
        let points = read_metric_csv(f)?;
        let mean = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
        println!(
            "{:<28} {:>3} points mean {:>8.2}",
            f.file_name().unwrap().to_string_lossy(),
            points.len(),
            mean
        );
    }
    let head = std::fs::read_to_string(&files[0])?;
    println!("{}", head.lines().take(3).collect::<Vec<_>>().join("\n"));
    Ok(())
}
