//! Serve the simulator over HTTP and benchmark it through the NBI client.

use manobench::campaign::{build_sim, run, ActionSpec, CampaignConfig, SimConfig, TargetConfig};
use manobench::drivers::{nbi_serve, ClockSource, EndpointConfig, NbiClient, ServeConfig, TargetDriver};
use manobench::kpi::KpiKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let server = nbi_serve(
        build_sim(&SimConfig::default(), 1)?,
        ServeConfig {
            auth_token: Some("s3cret".into()),
            ..ServeConfig::default()
        },
    )?;
    println!("simulated target at {}", server.url());

    let mut anon = NbiClient::new(EndpointConfig {
        base_url: server.url(),
        ..EndpointConfig::default()
    });
    println!("without token: {}", anon.list_instances().unwrap_err());

    for source in [ClockSource::Target, ClockSource::Harness] {
        let mut cfg = CampaignConfig::vcpe_sim("over-http");
        cfg.actions = vec![ActionSpec::ScaleOut("vGMUX".into())];
        cfg.target = TargetConfig::Http {
            name: "remote-sim".into(),
            endpoint: EndpointConfig {
                base_url: server.url(),
                auth_token: Some("s3cret".into()),
                poll_interval_ms: 5,
                clock_source: source,
                ..EndpointConfig::default()
            },
        };
        let report = run(&cfg, None)?;
        println!("{source:?} clock ({}):", report.campaign.clock_domain);
        for s in report.samples_of(KpiKind::Opd).chain(report.samples_of(KpiKind::Rod)) {
            println!(
                "  {} {:<6} {:>12} ns  +/- {:?}",
                s.kind, s.vnf_name, s.duration_ns, s.uncertainty_ns
            );
        }
    }
    server.shutdown();
    Ok(())
}
