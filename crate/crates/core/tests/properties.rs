use proptest::prelude::*;

use manobench::descriptor::{
    builtin_vcpe, parse_nsd, parse_vnfd, vnfd_to_json, DescriptorError, ResourceFlavor, Resources, VnfDescriptor,
};
use manobench::kpi::{
    aggregate, dpd, opd, percentile_nearest_rank, qod_score, sample_window, AggregateMode, KpiKind, KpiSample,
    QodInputs, QodWeights, DEFAULT_TAU_NS,
};
use manobench::mano::{Orchestrator, OrchestratorConfig};
use manobench::nfvi::{DelayModel, VimState};

fn vnfd() -> impl Strategy<Value = VnfDescriptor> {
    (
        "[a-zA-Z][a-zA-Z0-9_-]{0,12}",
        "[a-z][a-z0-9.-]{0,20}",
        1u64..64,
        1u64..131_072,
        0u64..2000,
        prop::collection::btree_set("[a-z]{1,8}", 0..5),
        1u32..10,
    )
        .prop_map(|(name, image, vcpus, mem, disk, cps, hint)| VnfDescriptor {
            id: format!("{name}-id"),
            name,
            image_ref: image,
            flavor: ResourceFlavor::new("f", vcpus, mem, disk),
            connection_points: cps.into_iter().collect(),
            complexity_hint: hint,
        })
}

fn resources() -> impl Strategy<Value = Resources> {
    (0u64..64, 0u64..131_072, 0u64..2000).prop_map(|(c, m, s)| Resources::new(c, m, s))
}

fn sample(d: u64) -> KpiSample {
    KpiSample {
        kind: KpiKind::Opd,
        vnf_name: "v".into(),
        instance_id: "i".into(),
        duration_ns: d,
        action_id: None,
        action_kind: None,
        uncertainty_ns: None,
    }
}

fn delay_model() -> impl Strategy<Value = DelayModel> {
    (0u64..2_000_000_000, 0.0f64..1000.0, 0u64..20_000_000_000, 0u64..5_000_000_000, 0.0f64..50.0, any::<u64>())
        .prop_map(|(sched, rate, boot, cfg, jitter, seed)| DelayModel {
            sched_ns: sched,
            transfer_rate_mb_per_s: rate,
            boot_base_ns: boot,
            cfg_base_ns: cfg,
            jitter_pct: jitter,
            seed,
            ..DelayModel::default()
        })
}

fn deployed(model: DelayModel) -> Orchestrator {
    let vim = VimState::create_pool(&[Resources::new(8, 16384, 160); 3])
        .and_then(|v| v.with_delay_model(model))
        .unwrap();
    let mut orch = Orchestrator::new(OrchestratorConfig::default(), vim).unwrap();
    let (nsd, pkgs) = builtin_vcpe();
    for p in pkgs {
        orch.onboard(p).unwrap();
    }
    let id = orch.register_nsd(nsd).unwrap();
    orch.instantiate_ns(&id).unwrap();
    orch
}

proptest! {
    #[test]
    fn vnfd_round_trips(v in vnfd()) {
        prop_assert_eq!(parse_vnfd(&vnfd_to_json(&v)).unwrap(), v);
    }

    #[test]
    fn nsd_graph_rejects_repeats_and_strangers(k in 0usize..5, stranger in "[a-z]{3,6}") {
        let (_, pkgs) = builtin_vcpe();
        let known: Vec<_> = pkgs.iter().map(|p| p.vnfd.clone()).collect();
        let ids: Vec<_> = known.iter().map(|v| v.id.clone()).collect();
        let mut graph = ids.clone();
        graph.push(ids[k].clone());
        let doc = serde_json::json!({"id": "ns", "name": "ns", "constituent_vnfds": ids, "forwarding_graph": graph});
        prop_assert_eq!(parse_nsd(&doc.to_string(), &known), Err(DescriptorError::DuplicateGraphEntry(ids[k].clone())));
        let doc = serde_json::json!({"id": "ns", "name": "ns", "constituent_vnfds": [ids[k], stranger]});
        prop_assert_eq!(parse_nsd(&doc.to_string(), &known), Err(DescriptorError::UnresolvedReference(stranger)));
    }

    #[test]
    fn qod_components_stay_in_unit_interval(
        short in resources(), long in resources(), offered in resources(),
        head in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 0..5),
        attempts in 1u32..50, latency in 0u64..100_000_000_000,
        raw in prop::array::uniform5(0.0f64..1.0),
    ) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-6);
        let weights = QodWeights(raw.map(|w| w / total));
        prop_assume!(weights.validate().is_ok());
        let inputs = QodInputs {
            required_short: short,
            required_long: long,
            offered_residual: offered,
            colocated_headroom_before: head.iter().map(|h| h.0).collect(),
            colocated_headroom_after: head.iter().map(|h| h.1).collect(),
            attempts,
            decision_latency_ns: latency,
        };
        let s = qod_score(&inputs, &weights, DEFAULT_TAU_NS).unwrap();
        for c in s.components().into_iter().chain([s.composite]) {
            prop_assert!((0.0..=1.0).contains(&c), "{c}");
        }
    }

    #[test]
    fn sum_is_additive(a in prop::collection::vec(0u64..1 << 40, 1..50), b in prop::collection::vec(0u64..1 << 40, 1..50)) {
        let (sa, sb): (Vec<_>, Vec<_>) = (a.iter().map(|&d| sample(d)).collect(), b.iter().map(|&d| sample(d)).collect());
        let both: Vec<_> = sa.iter().chain(&sb).cloned().collect();
        let sum = |s: &[KpiSample]| aggregate(s, AggregateMode::Sum).unwrap().value_ns;
        prop_assert_eq!(sum(&both), sum(&sa) + sum(&sb));
    }

    #[test]
    fn p95_of_constant_is_the_constant(v in any::<u64>(), n in 1usize..200) {
        let s: Vec<_> = (0..n).map(|_| sample(v)).collect();
        prop_assert_eq!(aggregate(&s, AggregateMode::P95).unwrap().value_ns, v);
        prop_assert_eq!(percentile_nearest_rank(vec![v; n], 95), v);
        prop_assert_eq!(aggregate(&s, AggregateMode::Mean).unwrap().value_ns, v);
    }

    #[test]
    fn oversized_sums_are_errors_not_panics(n in 2usize..20) {
        let s: Vec<_> = (0..n).map(|_| sample(u64::MAX)).collect();
        prop_assert_eq!(aggregate(&s, AggregateMode::Sum), Err(manobench::kpi::KpiError::DurationOverflow));
    }

    #[test]
    fn admission_never_overcommits(ops in prop::collection::vec((0usize..3, resources(), any::<bool>()), 1..60)) {
        let mut vim = VimState::create_pool(&[Resources::new(16, 32768, 500); 3]).unwrap();
        let mut live = Vec::new();
        for (k, (node, demand, release)) in ops.into_iter().enumerate() {
            if release && !live.is_empty() {
                let id: String = live.remove(k % live.len());
                prop_assert!(vim.release(&id).is_some());
                continue;
            }
            let before = vim.clone();
            let id = format!("i{k}");
            match vim.allocate(&format!("n{node}"), &id, demand) {
                Ok(()) => live.push(id),
                Err(_) => prop_assert_eq!(&before, &vim),
            }
            for n in vim.nodes() {
                prop_assert!(n.capacity.admits(&n.allocated()));
            }
        }
    }

    #[test]
    fn deployment_windows_are_ordered(model in delay_model()) {
        let orch = deployed(model);
        let tl = orch.timeline();
        prop_assert!(tl.events().windows(2).all(|w| w[0].timestamp_ns <= w[1].timestamp_ns));
        for inst in orch.live_instances() {
            for s in [opd(tl, &inst.id).unwrap(), dpd(tl, &inst.id).unwrap()] {
                let (start, end) = sample_window(tl, &s).unwrap();
                prop_assert!(start <= end);
                prop_assert_eq!(end - start, s.duration_ns);
            }
        }
    }

    #[test]
    fn simulation_is_a_function_of_its_seed(model in delay_model()) {
        let a = deployed(model.clone());
        let b = deployed(model);
        prop_assert_eq!(a.timeline(), b.timeline());
        prop_assert_eq!(a.vim(), b.vim());
    }
}
