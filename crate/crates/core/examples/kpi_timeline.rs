//! Record lifecycle events by hand and derive OPD, DPD, ROD and aggregates.

use manobench::kpi::{
    aggregate, aggregate_with_timeline, dpd, opd, rod, ActionKind, AggregateMode, ClockDomain, KpiError,
    LifecycleEvent, LifecyclePhase as P, LifecycleTimeline,
};

const S: u64 = 1_000_000_000;

fn main() -> Result<(), KpiError> {
    let mut tl = LifecycleTimeline::new(ClockDomain::Wall);
    for (i, (name, start)) in [("vBNG", 0), ("vGMUX", 2 * S)].into_iter().enumerate() {
        let id = format!("i{i}");
        tl.record_all([
            LifecycleEvent::new(&id, name, P::OnboardRequested, start),
            LifecycleEvent::new(&id, name, P::ImageTransferred, start + 5 * S),
            LifecycleEvent::new(&id, name, P::VmActive, start + 12 * S),
            LifecycleEvent::new(&id, name, P::InstantiateRequested, start + 12 * S),
            LifecycleEvent::new(&id, name, P::VnfOperational, start + 20 * S),
        ])?;
    }
    tl.record(LifecycleEvent::action("i1", "vGMUX", P::ActionExecuted, 30 * S, "op-1", ActionKind::ScaleOut))?;
    tl.record(LifecycleEvent::action("i1", "vGMUX", P::ActionCompleted, 41 * S, "op-1", ActionKind::ScaleOut))?;

    // Out-of-order phases are refused and leave the timeline as it was.
    let early = LifecycleEvent::new("i0", "vBNG", P::VnfConfigured, S);
    println!("rejected: {}", tl.record(early).unwrap_err());
    let again = LifecycleEvent::new("i0", "vBNG", P::VmActive, 12 * S);
    println!("rejected: {}", tl.record(again).unwrap_err());

    let opds = vec![opd(&tl, "i0")?, opd(&tl, "i1")?];
    let dpds = vec![dpd(&tl, "i0")?, dpd(&tl, "i1")?];
    println!("ROD op-1 = {} s", rod(&tl, "op-1")?.duration_ns as f64 / 1e9);
    for (label, samples) in [("OPD", &opds), ("DPD", &dpds)] {
        for s in samples.iter() {
            println!("{label} {:<6} {:>5.1} s", s.vnf_name, s.duration_ns as f64 / 1e9);
        }
        for mode in AggregateMode::ALL {
            let a = aggregate_with_timeline(samples, mode, Some(&tl))?;
            println!("{label} {mode:<8} {:>5.1} s", a.value_ns as f64 / 1e9);
        }
    }
    // Without the timeline there is no overlap information: makespan = sum.
    println!("OPD makespan w/o timeline {} s", aggregate(&opds, AggregateMode::Makespan)?.value_ns / S);
    Ok(())
}
