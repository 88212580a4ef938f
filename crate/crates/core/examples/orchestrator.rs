//! Drive the simulated orchestrator directly: deploy, scale, migrate, inspect.

use manobench::descriptor::{builtin_vcpe, Resources};
use manobench::kpi::{opd, qod_score, rod, QodWeights, DEFAULT_TAU_NS};
use manobench::mano::{FaultEntry, ManoError, Orchestrator, OrchestratorConfig};
use manobench::nfvi::{DelayModel, VimState};

fn secs(ns: u64) -> f64 {
    ns as f64 / 1e9
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vim = VimState::create_pool(&[Resources::new(8, 16384, 160); 3])?.with_delay_model(DelayModel::default())?;
    let cfg = OrchestratorConfig {
        // The scale-out below is command 6; its first candidate refuses.
        fault_plan: vec![FaultEntry { ordinal: 6, rejections: 1 }],
        ..OrchestratorConfig::default()
    };
    let mut orch = Orchestrator::new(cfg, vim)?;

    let (nsd, packages) = builtin_vcpe();
    let mut ids = Vec::new();
    for p in packages {
        let on = orch.onboard(p)?;
        println!("{} -> {} ({})", on.package_id, on.instance_id, on.op_id);
        ids.push(on.instance_id);
    }
    let nsd_id = orch.register_nsd(nsd)?;
    let (ns, _) = orch.instantiate_ns(&nsd_id)?;
    println!("{} {:?} at t = {:.2} s", ns.ns_instance_id, ns.state, secs(orch.now()));
    for id in &ids {
        let s = opd(orch.timeline(), id)?;
        println!("  OPD {:<6} {:.2} s", s.vnf_name, secs(s.duration_ns));
    }

    let out = orch.scale_out(&ns.ns_instance_id, "vGMUX")?;
    let trace = &out.trace;
    println!(
        "scale-out {}: tried {:?}, {} attempts, chose {}",
        out.op_id, trace.candidate_nodes_considered, trace.attempts, trace.chosen_node
    );
    let q = qod_score(&trace.qod_inputs, &QodWeights::default(), DEFAULT_TAU_NS)?;
    println!("  ROD {:.2} s  QoD {:.3}", secs(rod(orch.timeline(), &out.op_id)?.duration_ns), q.composite);

    let mv = orch.migrate(&ns.ns_instance_id, "vBNG")?;
    println!("migrate {}: ROD {:.2} s", mv.op_id, secs(rod(orch.timeline(), &mv.op_id)?.duration_ns));

    for inst in orch.live_instances() {
        println!("  live {} {} on {:?}", inst.id, inst.name, orch.vim().allocation_node(&inst.id));
    }
    match orch.scale_out(&ns.ns_instance_id, "vFW") {
        Err(e @ ManoError::UnknownVnf(_)) => println!("vFW: {e}"),
        other => println!("unexpected: {other:?}"),
    }

    orch.terminate_ns(&ns.ns_instance_id)?;
    println!("after terminate: pool empty = {}", orch.vim().is_empty());
    Ok(())
}
