//! Emit the per-VNF and aggregate CSVs a plotting tool would consume.

use manobench::campaign::{emit_plot_data, run, ActionSpec, CampaignConfig, CampaignError, PLOT_FILES};

fn main() -> Result<(), CampaignError> {
    let mut cfg = CampaignConfig::vcpe_sim("plots");
    cfg.actions = vec![ActionSpec::ScaleOut("vGMUX".into())];
    let report = run(&cfg, None)?;

    let dir = tempfile::tempdir()?;
    emit_plot_data(&report, dir.path())?;
    for f in PLOT_FILES {
        println!("== {f}");
        print!("{}", std::fs::read_to_string(dir.path().join(f))?);
    }
    Ok(())
}
