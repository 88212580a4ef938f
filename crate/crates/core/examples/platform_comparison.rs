//! Capability matrices and footprint ratios of published MANO releases.

use manobench::kpi::capability::manifests;
use manobench::kpi::{compare_capabilities, footprint_ratio, KpiError};

fn main() -> Result<(), KpiError> {
    let pairs = [
        (manifests::osm4(), manifests::onap_b()),
        (manifests::osm5(), manifests::onap_c_openstack()),
        (manifests::osm5(), manifests::onap_c_kubernetes()),
    ];
    for (a, b) in &pairs {
        let r = footprint_ratio(a, b)?;
        print!(
            "{} / {}: vCPU {:.3}%  RAM {:.3}%  storage {:.3}%",
            a.target_name,
            b.target_name,
            100.0 * r.vcpus,
            100.0 * r.memory,
            100.0 * r.storage
        );
        match r.ip {
            Some(ip) => println!("  IP {:.2}%", 100.0 * ip),
            None => println!(),
        }
    }
    let (a, b) = &pairs[0];
    print!("\n{}", compare_capabilities(a, b).to_csv());
    Ok(())
}
