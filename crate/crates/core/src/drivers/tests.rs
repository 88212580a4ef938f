use super::*;
use crate::descriptor::{builtin_vcpe, package_to_json, Resources};
use crate::kpi::{opd, rod, LifecyclePhase};
use crate::mano::{Orchestrator, OrchestratorConfig};
use crate::nfvi::VimState;

fn orch() -> Orchestrator {
    let vim = VimState::create_pool(&[Resources::new(8, 16384, 160); 3]).unwrap();
    Orchestrator::new(OrchestratorConfig::default(), vim).unwrap()
}

fn serve() -> NbiServer {
    nbi_serve(orch(), ServeConfig::default()).unwrap()
}

fn client(url: String, clock_source: ClockSource) -> NbiClient {
    NbiClient::new(EndpointConfig {
        base_url: url,
        timeout_ms: 2_000,
        poll_interval_ms: 5,
        clock_source,
        ..EndpointConfig::default()
    })
}

fn deploy(d: &mut dyn TargetDriver) -> String {
    let (nsd, pkgs) = builtin_vcpe();
    for p in &pkgs {
        d.onboard_package(p).unwrap();
    }
    d.register_nsd(&nsd).unwrap();
    d.instantiate_ns(&nsd.id).unwrap()
}

#[test]
fn post_package_returns_created() {
    let server = serve();
    let (_, pkgs) = builtin_vcpe();
    let resp = ureq::post(&format!("{}/packages", server.url()))
        .send_string(&package_to_json(&pkgs[0]))
        .unwrap();
    assert_eq!(resp.status(), 201);
    let created: wire::Created = serde_json::from_str(&resp.into_string().unwrap()).unwrap();
    assert_eq!(created.id, "pkg-0");
    server.shutdown();
}

#[test]
fn unknown_ns_is_404() {
    let server = serve();
    let mut c = client(server.url(), ClockSource::Target);
    match c.poll_ns_status("ns-missing") {
        Err(DriverError::HttpError { status, .. }) => assert_eq!(status, 404),
        other => panic!("expected 404, got {other:?}"),
    }
    server.shutdown();
}

#[test]
fn auth_token_is_enforced() {
    let cfg = ServeConfig {
        auth_token: Some("s3cret".into()),
        ..ServeConfig::default()
    };
    let server = nbi_serve(orch(), cfg).unwrap();
    let mut anon = client(server.url(), ClockSource::Target);
    assert!(matches!(anon.list_instances(), Err(DriverError::HttpError { status: 401, .. })));
    let mut c = NbiClient::new(EndpointConfig {
        base_url: server.url(),
        auth_token: Some("s3cret".into()),
        ..EndpointConfig::default()
    });
    assert!(c.list_instances().unwrap().is_empty());
    server.shutdown();
}

#[test]
fn malformed_body_is_protocol_error() {
    let raw = tiny_http::Server::http("127.0.0.1:0").unwrap();
    let addr = raw.server_addr().to_ip().unwrap();
    let handle = std::thread::spawn(move || {
        let req = raw.recv().unwrap();
        req.respond(tiny_http::Response::from_string("{not json")).unwrap();
    });
    let mut c = client(format!("http://{addr}"), ClockSource::Target);
    assert!(matches!(c.list_instances(), Err(DriverError::ProtocolError(_))));
    handle.join().unwrap();
}

#[test]
fn unreachable_target_times_out() {
    let mut c = NbiClient::new(EndpointConfig {
        base_url: "http://127.0.0.1:1".into(),
        timeout_ms: 150,
        poll_interval_ms: 10,
        ..EndpointConfig::default()
    });
    assert!(matches!(c.list_instances(), Err(DriverError::Timeout)));
}

#[test]
fn http_target_clock_matches_sim() {
    let server = serve();
    let mut http = client(server.url(), ClockSource::Target);
    let ns = deploy(&mut http);
    let action = http.scale_out(&ns, "vGMUX").unwrap();
    assert!(action.trace.is_some());

    let mut sim = SimDriver::new(orch());
    let sim_ns = deploy(&mut sim);
    let sim_action = sim.scale_out(&sim_ns, "vGMUX").unwrap();

    let (a, b) = (http.timeline().unwrap(), sim.timeline().unwrap());
    assert_eq!(a.clock(), crate::kpi::ClockDomain::TargetReported);
    for inst in sim.list_instances().unwrap() {
        assert_eq!(opd(&a, &inst.id).unwrap().duration_ns, opd(&b, &inst.id).unwrap().duration_ns);
    }
    assert_eq!(
        rod(&a, &action.op_id).unwrap().duration_ns,
        rod(&b, &sim_action.op_id).unwrap().duration_ns
    );
    http.terminate_ns(&ns).unwrap();
    assert!(matches!(http.terminate_ns(&ns), Err(DriverError::HttpError { status: 404, .. })));
    server.shutdown();
}

#[test]
fn harness_clock_records_observations() {
    let server = serve();
    let mut c = client(server.url(), ClockSource::Harness);
    let ns = deploy(&mut c);
    let t = c.timeline().unwrap();
    assert_eq!(t.clock(), crate::kpi::ClockDomain::Wall);
    assert_eq!(c.sample_uncertainty_ns(), Some(5_000_000));
    let view = c.poll_ns_status(&ns).unwrap();
    for vnf in &view.vnfs {
        assert!(t.phase_time(&vnf.instance_id, LifecyclePhase::OnboardRequested).is_some());
        assert!(t.phase_time(&vnf.instance_id, LifecyclePhase::VnfOperational).is_some());
    }
    server.shutdown();
}

#[test]
fn csv_round_trip() {
    let mut sim = SimDriver::new(orch());
    deploy(&mut sim);
    let dir = tempfile::tempdir().unwrap();
    let paths = collect_metrics(&mut sim, dir.path()).unwrap();
    assert_eq!(paths.len(), 10);
    assert!(paths[0].ends_with("vBNG_cpu_util_pct.csv"));
    let first = sim.list_instances().unwrap()[0].id.clone();
    let metrics = sim.list_instance_metrics(&first).unwrap();
    let expected = sim.fetch_measures(&metrics["cpu_util_pct"]).unwrap();
    let back = read_metric_csv(&paths[0]).unwrap();
    assert_eq!(back, expected);
    let header = std::fs::read_to_string(&paths[0]).unwrap();
    assert!(header.starts_with("timestamp,value\n1970-01-01T00:00:00"));
}

#[test]
fn zero_instances_write_no_files() {
    let mut sim = SimDriver::new(orch());
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("metrics");
    assert!(collect_metrics(&mut sim, &out).unwrap().is_empty());
    assert!(!out.exists());
}
