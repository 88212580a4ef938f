//! Score placement decisions and show how each input moves the composite.

use manobench::descriptor::Resources;
use manobench::kpi::{qod_score, KpiError, QodInputs, QodWeights, DEFAULT_TAU_NS};

fn main() -> Result<(), KpiError> {
    let demand = Resources::new(2, 4096, 40);
    let ideal = QodInputs {
        required_short: demand,
        required_long: demand,
        offered_residual: Resources::new(8, 16384, 160),
        colocated_headroom_before: vec![1.0, 1.0],
        colocated_headroom_after: vec![1.0, 1.0],
        attempts: 1,
        decision_latency_ns: 0,
    };
    let w = QodWeights::default();
    let show = |label: &str, inputs: &QodInputs| -> Result<(), KpiError> {
        let s = qod_score(inputs, &w, DEFAULT_TAU_NS)?;
        let c = s.components().map(|v| format!("{v:.3}")).join(" ");
        println!("{label:<22} composite {:.4}  [{c}]", s.composite);
        Ok(())
    };

    show("ideal", &ideal)?;
    show("second attempt", &QodInputs { attempts: 2, ..ideal.clone() })?;
    show("250 ms to decide", &QodInputs { decision_latency_ns: 250_000_000, ..ideal.clone() })?;
    show(
        "squeezed neighbour",
        &QodInputs {
            colocated_headroom_after: vec![1.0, 0.4],
            ..ideal.clone()
        },
    )?;
    show(
        "short on memory",
        &QodInputs {
            offered_residual: Resources::new(8, 2048, 160),
            ..ideal.clone()
        },
    )?;
    show(
        "growth not covered",
        &QodInputs {
            required_long: Resources::new(16, 32768, 320),
            ..ideal.clone()
        },
    )?;

    let latency_only = QodWeights([0.0, 0.0, 0.0, 0.0, 1.0]);
    let s = qod_score(&QodInputs { decision_latency_ns: 1_000_000_000, ..ideal }, &latency_only, DEFAULT_TAU_NS)?;
    println!("timeliness-only weights, 1 s latency: {:.4} (= 1/e)", s.composite);
    Ok(())
}
