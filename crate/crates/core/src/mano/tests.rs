use super::*;
use crate::descriptor::builtin_vcpe;
use crate::kpi::{dpd, opd, rod};
use crate::nfvi::{DelayModel, PlacementPolicy};

fn pool(n: usize) -> VimState {
    VimState::create_pool(&vec![Resources::new(8, 16384, 160); n]).unwrap()
}

fn orch(cfg: OrchestratorConfig, nodes: usize) -> Orchestrator {
    Orchestrator::new(cfg, pool(nodes)).unwrap()
}

fn onboard_all(o: &mut Orchestrator) -> Vec<String> {
    let (nsd, pkgs) = builtin_vcpe();
    let ids = pkgs.into_iter().map(|p| o.onboard(p).unwrap().package_id).collect();
    o.register_nsd(nsd).unwrap();
    ids
}

fn deployed(cfg: OrchestratorConfig, nodes: usize) -> (Orchestrator, String) {
    let mut o = orch(cfg, nodes);
    onboard_all(&mut o);
    let (ns, _) = o.instantiate_ns("vcpe-ns").unwrap();
    (o, ns.ns_instance_id)
}

#[test]
fn deploys_fixture_in_graph_order() {
    let (o, ns) = deployed(OrchestratorConfig::default(), 3);
    let status = o.ns_status(&ns).unwrap();
    assert_eq!(status.state, NsState::Operational);
    let names: Vec<_> = status.vnfs.iter().map(|v| v.vnf_name.as_str()).collect();
    assert_eq!(names, ["vBNG", "vGDHCP", "vBRG", "vGMUX", "vInfra"]);
    for v in &status.vnfs {
        assert_eq!(v.state, VmState::Operational);
        assert_eq!(v.phase_timestamps.len(), 6);
    }
}

#[test]
fn fault_plan_gives_exact_attempts() {
    let cfg = OrchestratorConfig {
        fault_plan: vec![FaultEntry { ordinal: 0, rejections: 2 }],
        ..OrchestratorConfig::default()
    };
    let mut o = orch(cfg, 3);
    let (_, pkgs) = builtin_vcpe();
    let out = o.onboard(pkgs[0].clone()).unwrap();
    assert_eq!(out.trace.attempts, 3);
    assert_eq!(out.trace.chosen_node, "n2");
    assert_eq!(out.trace.candidate_nodes_considered, ["n0", "n1", "n2"]);
    assert_eq!(out.trace.decision_latency_ns, 150_000_000);

    let next = o.onboard(pkgs[1].clone()).unwrap();
    assert_eq!(next.trace.attempts, 1);
}

#[test]
fn too_many_rejections_fail_cleanly() {
    let cfg = OrchestratorConfig {
        fault_plan: vec![FaultEntry { ordinal: 0, rejections: 3 }],
        ..OrchestratorConfig::default()
    };
    let mut o = orch(cfg, 3);
    let before = o.vim().clone();
    let (_, pkgs) = builtin_vcpe();
    assert_eq!(o.onboard(pkgs[0].clone()), Err(ManoError::NoFeasibleNode));
    assert_eq!(o.vim(), &before);
    assert_eq!(o.operation("op-0").unwrap().state, OperationState::Failed);
}

#[test]
fn overheads_added_once_to_first_delay() {
    let cfg = OrchestratorConfig {
        nbi_processing_ns: 1_000,
        placement_ns_per_attempt: 10,
        ..OrchestratorConfig::default()
    };
    let mut o = Orchestrator::new(cfg, pool(2).with_delay_model(DelayModel::zero()).unwrap()).unwrap();
    onboard_all(&mut o);
    let first = &o.live_instances()[0].id;
    assert_eq!(opd(o.timeline(), first).unwrap().duration_ns, 1_010);
    let (ns, _) = o.instantiate_ns("vcpe-ns").unwrap();
    let ids: Vec<_> = o.ns_status(&ns.ns_instance_id).unwrap().vnfs.into_iter().map(|v| v.instance_id).collect();
    assert_eq!(dpd(o.timeline(), &ids[0]).unwrap().duration_ns, 1_000);
    for id in &ids[1..] {
        assert_eq!(dpd(o.timeline(), id).unwrap().duration_ns, 0);
    }
}

#[test]
fn missing_package_binds_nothing() {
    let mut o = orch(OrchestratorConfig::default(), 3);
    let (nsd, pkgs) = builtin_vcpe();
    for p in pkgs {
        o.onboard(p).unwrap();
    }
    o.register_nsd(nsd).unwrap();
    o.instantiate_ns("vcpe-ns").unwrap();
    // All packages are now bound; a second NS has nothing to bind.
    let ns2 = o.create_ns("vcpe-ns").unwrap();
    assert_eq!(o.instantiate(&ns2), Err(ManoError::MissingPackage("vBNG".into())));
    assert_eq!(o.ns_instance(&ns2).unwrap().state, NsState::Created);

    let mut o = orch(OrchestratorConfig::default(), 3);
    let (nsd, pkgs) = builtin_vcpe();
    for p in &pkgs {
        o.onboard(p.clone()).unwrap();
    }
    o.register_nsd(nsd).unwrap();
    let gmux = o.packages().find(|p| p.package.vnfd.name == "vGMUX").unwrap().package_id.clone();
    o.delete_package(&gmux).unwrap();
    let ns = o.create_ns("vcpe-ns").unwrap();
    assert_eq!(o.instantiate(&ns), Err(ManoError::MissingPackage("vGMUX".into())));
    assert!(o.packages().all(|p| p.bound_ns.is_none()));
}

#[test]
fn scale_out_rod_is_replica_opd_plus_dpd() {
    let (mut o, ns) = deployed(OrchestratorConfig::default(), 3);
    let out = o.scale_out(&ns, "vGMUX").unwrap();
    let t = o.timeline();
    let r = rod(t, &out.op_id).unwrap();
    let sum = opd(t, &out.instance_id).unwrap().duration_ns + dpd(t, &out.instance_id).unwrap().duration_ns;
    assert_eq!(r.duration_ns, sum);
    assert_eq!(r.action_kind, Some(ActionKind::ScaleOut));
    assert_eq!(o.instance_name(&out.instance_id), Some("vGMUX-r1"));
    assert_eq!(o.ns_status(&ns).unwrap().vnfs.len(), 6);
}

#[test]
fn scale_out_without_capacity_leaves_ns_unchanged() {
    // One node of 10 vCPU hosts exactly the five 2-vCPU VNFs.
    let vim = VimState::create_pool(&[Resources::new(10, 20480, 200)]).unwrap();
    let mut o = Orchestrator::new(OrchestratorConfig::default(), vim).unwrap();
    onboard_all(&mut o);
    let (ns, _) = o.instantiate_ns("vcpe-ns").unwrap();
    let before = o.ns_status(&ns.ns_instance_id).unwrap();
    let vim_before = o.vim().clone();
    assert_eq!(o.scale_out(&ns.ns_instance_id, "vGMUX").unwrap_err(), ManoError::NoFeasibleNode);
    assert_eq!(o.ns_status(&ns.ns_instance_id).unwrap(), before);
    assert_eq!(o.vim(), &vim_before);
}

#[test]
fn migrate_moves_to_other_node() {
    let (mut o, ns) = deployed(OrchestratorConfig::default(), 3);
    let id = o.ns_instance(&ns).unwrap().vnf_instances["vBRG"].clone();
    let from = o.vim().instance(&id).unwrap().node_id.clone();
    let out = o.migrate(&ns, "vBRG").unwrap();
    let to = o.vim().instance(&id).unwrap().node_id.clone();
    assert_ne!(from, to);
    assert_eq!(out.trace.chosen_node, to);
    assert!(!out.trace.candidate_nodes_considered.contains(&from));
    // 4096 MB at 200 MB/s plus NBI and one placement attempt.
    assert_eq!(rod(o.timeline(), &out.op_id).unwrap().duration_ns, 20_480_000_000 + 250_000_000);
}

#[test]
fn terminate_releases_everything_once() {
    let (mut o, ns) = deployed(OrchestratorConfig::default(), 3);
    o.scale_out(&ns, "vBNG").unwrap();
    let events = o.terminate_ns(&ns).unwrap();
    assert_eq!(events.len(), 6);
    assert!(o.vim().residuals().iter().all(|r| *r == Resources::new(8, 16384, 160)));
    assert_eq!(o.terminate_ns(&ns), Err(ManoError::UnknownNs(ns.clone())));
    assert!(o.live_instances().is_empty());
}

#[test]
fn terminate_during_instantiation() {
    let mut o = orch(OrchestratorConfig::default(), 3);
    onboard_all(&mut o);
    let ns = o.create_ns("vcpe-ns").unwrap();
    o.begin_instantiate(&ns).unwrap();
    o.instantiate_next(&ns).unwrap().unwrap();
    assert_eq!(o.ns_instance(&ns).unwrap().state, NsState::Instantiating);
    assert!(matches!(o.scale_out(&ns, "vBNG"), Err(ManoError::WrongState(_))));
    let events = o.terminate_ns(&ns).unwrap();
    assert_eq!(events.len(), 5);
    assert!(o.vim().nodes().iter().all(|n| n.allocations.is_empty()));
    assert!(o.timeline().events().iter().all(|e| e.timestamp_ns <= o.now()));
}

#[test]
fn conservation_through_lifecycle() {
    let capacity = Resources::new(8, 16384, 160);
    let check = |o: &Orchestrator| {
        for n in o.vim().nodes() {
            assert_eq!(n.residual().saturating_add(&n.allocated()), capacity);
        }
    };
    let (mut o, ns) = deployed(OrchestratorConfig::default(), 3);
    check(&o);
    o.scale_out(&ns, "vGMUX").unwrap();
    check(&o);
    o.migrate(&ns, "vBNG").unwrap();
    check(&o);
    o.terminate_ns(&ns).unwrap();
    check(&o);
}

#[test]
fn first_fit_is_deterministic() {
    let run = || {
        let (mut o, ns) = deployed(OrchestratorConfig::default(), 3);
        o.scale_out(&ns, "vGMUX").unwrap();
        o.terminate_ns(&ns).unwrap();
        o.timeline().events().to_vec()
    };
    assert_eq!(run(), run());
    let (o, _) = deployed(OrchestratorConfig::default(), 3);
    let nodes: Vec<_> = o.vim().instances().map(|vm| vm.node_id.as_str()).collect();
    // 8 vCPU per node fits four 2-vCPU VNFs before moving on.
    assert_eq!(nodes.iter().filter(|n| **n == "n0").count(), 4);
}

#[test]
fn qod_inputs_reflect_colocation() {
    let cfg = OrchestratorConfig {
        placement_policy: PlacementPolicy::FirstFit,
        ..OrchestratorConfig::default()
    };
    let mut o = orch(cfg, 1);
    let (_, pkgs) = builtin_vcpe();
    let first = o.onboard(pkgs[0].clone()).unwrap();
    assert!(first.trace.qod_inputs.colocated_headroom_before.is_empty());
    // 6 vCPU free before, 4 after, against a co-located demand of 2.
    for p in &pkgs[1..3] {
        o.onboard(p.clone()).unwrap();
    }
    let fourth = o.onboard(pkgs[3].clone()).unwrap();
    let q = &fourth.trace.qod_inputs;
    assert_eq!(q.offered_residual, Resources::new(2, 4096, 40));
    assert_eq!(q.colocated_headroom_before, vec![1.0; 3]);
    assert_eq!(q.colocated_headroom_after, vec![0.0; 3]);
}

#[test]
fn long_term_demand_projection() {
    let cfg = OrchestratorConfig {
        long_term_growth: 0.5,
        qod_horizon: QodHorizon { short_ns: 10, long_ns: 30 },
        ..OrchestratorConfig::default()
    };
    assert_eq!(cfg.long_term_demand(&Resources::new(2, 100, 3)), Resources::new(4, 200, 6));
    assert_eq!(
        OrchestratorConfig::default().long_term_demand(&Resources::new(2, 100, 3)),
        Resources::new(2, 100, 3)
    );
}

#[test]
fn measures_by_metric_id() {
    let (o, _) = deployed(OrchestratorConfig::default(), 3);
    let inst = &o.live_instances()[0];
    let ids = o.instance_metrics(&inst.id).unwrap();
    assert_eq!(ids.len(), 2);
    let series = o.measures(&ids["cpu_util_pct"]).unwrap();
    assert!(!series.is_empty());
    assert!(matches!(o.measures("nope"), Err(ManoError::UnknownMetric(_))));
}
