use std::fs;
use std::path::{Path, PathBuf};

use super::wire::{parse_rfc3339, rfc3339};
use super::{DriverError, TargetDriver};

/// `<instance name>_<metric>.csv`, with characters unsafe in file names
/// replaced by `_`.
pub fn metric_file_name(instance_name: &str, metric: &str) -> String {
    let clean = |s: &str| -> String {
        s.chars()
            .map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' })
            .collect()
    };
    format!("{}_{}.csv", clean(instance_name), clean(metric))
}

/// Fetches every metric of every live instance and writes one CSV per
/// `(instance, metric)` with columns `timestamp,value`. Timestamps are RFC
/// 3339 UTC, counted from the Unix epoch for virtual clocks. Returns the
/// written paths in instance then metric order.
pub fn collect_metrics(driver: &mut dyn TargetDriver, out_dir: &Path) -> Result<Vec<PathBuf>, DriverError> {
    let instances = driver.list_instances()?;
    if instances.is_empty() {
        return Ok(Vec::new());
    }
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for inst in instances {
        for (metric, metric_id) in driver.list_instance_metrics(&inst.id)? {
            let points = driver.fetch_measures(&metric_id)?;
            let path = out_dir.join(metric_file_name(&inst.name, &metric));
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(["timestamp", "value"])?;
            for (t, v) in points {
                w.write_record([rfc3339(t), v.to_string()])?;
            }
            w.flush()?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Reads a file written by [`collect_metrics`] back into `(timestamp_ns, value)`.
pub fn read_metric_csv(path: &Path) -> Result<Vec<(u64, f64)>, DriverError> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let bad = |what: &str| DriverError::ProtocolError(format!("{}: bad {what}", path.display()));
        let t = parse_rfc3339(rec.get(0).unwrap_or("")).ok_or_else(|| bad("timestamp"))?;
        let v: f64 = rec.get(1).unwrap_or("").parse().map_err(|_| bad("value"))?;
        out.push((t, v));
    }
    Ok(out)
}
