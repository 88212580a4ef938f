//! Quality-of-decision scoring for placement decisions of run-time actions.
//!
//! Five components in `[0, 1]`, combined by a weighted arithmetic mean:
//!
//! - short-term fulfillment: `min(1, min_dim offered/required_short)`
//! - long-term fulfillment: same against `required_long`
//! - non-intrusiveness: `1 - max_j max(0, before_j - after_j)` over co-located VNFs
//! - attempt efficiency: `1 / attempts`
//! - timeliness: `exp(-latency / tau)`
//!
//! A required dimension of zero counts as fulfilled.

use serde::{Deserialize, Serialize};

use super::KpiError;
use crate::descriptor::Resources;

pub const DEFAULT_TAU_NS: f64 = 1e9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QodInputs {
    pub required_short: Resources,
    pub required_long: Resources,
    pub offered_residual: Resources,
    pub colocated_headroom_before: Vec<f64>,
    pub colocated_headroom_after: Vec<f64>,
    pub attempts: u32,
    pub decision_latency_ns: u64,
}

/// Weights in component order: short, long, non-intrusiveness, attempts, timeliness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QodWeights(pub [f64; 5]);

impl Default for QodWeights {
    fn default() -> Self {
        QodWeights([0.2; 5])
    }
}

impl QodWeights {
    pub fn validate(&self) -> Result<(), KpiError> {
        let sum: f64 = self.0.iter().sum();
        if self.0.iter().any(|w| !w.is_finite() || *w < 0.0) || (sum - 1.0).abs() > 1e-9 {
            return Err(KpiError::InvalidWeights(self.0));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QodScore {
    pub fulfillment_short: f64,
    pub fulfillment_long: f64,
    pub non_intrusiveness: f64,
    pub attempt_efficiency: f64,
    pub timeliness: f64,
    pub composite: f64,
    pub weights: QodWeights,
}

impl QodScore {
    pub fn components(&self) -> [f64; 5] {
        [
            self.fulfillment_short,
            self.fulfillment_long,
            self.non_intrusiveness,
            self.attempt_efficiency,
            self.timeliness,
        ]
    }
}

fn fulfillment(offered: &Resources, required: &Resources) -> f64 {
    offered
        .dims()
        .iter()
        .zip(required.dims())
        .map(|(&o, r)| if r == 0 { 1.0 } else { o as f64 / r as f64 })
        .fold(1.0_f64, f64::min)
}

pub fn qod_score(inputs: &QodInputs, weights: &QodWeights, tau_ns: f64) -> Result<QodScore, KpiError> {
    weights.validate()?;
    if !tau_ns.is_finite() || tau_ns <= 0.0 {
        return Err(KpiError::InvalidInputs(format!("tau_ns must be positive, got {tau_ns}")));
    }
    if inputs.attempts < 1 {
        return Err(KpiError::InvalidInputs("attempts must be at least 1".into()));
    }
    if inputs.colocated_headroom_before.len() != inputs.colocated_headroom_after.len() {
        return Err(KpiError::InvalidInputs(
            "headroom before/after lists differ in length".into(),
        ));
    }
    let headroom = inputs
        .colocated_headroom_before
        .iter()
        .chain(&inputs.colocated_headroom_after);
    for &h in headroom {
        if !(0.0..=1.0).contains(&h) {
            return Err(KpiError::InvalidInputs(format!("headroom fraction {h} outside [0, 1]")));
        }
    }

    let worst_loss = inputs
        .colocated_headroom_before
        .iter()
        .zip(&inputs.colocated_headroom_after)
        .map(|(b, a)| (b - a).max(0.0))
        .fold(0.0_f64, f64::max);

    let fulfillment_short = fulfillment(&inputs.offered_residual, &inputs.required_short);
    let fulfillment_long = fulfillment(&inputs.offered_residual, &inputs.required_long);
    let non_intrusiveness = 1.0 - worst_loss;
    let attempt_efficiency = 1.0 / f64::from(inputs.attempts);
    let timeliness = (-(inputs.decision_latency_ns as f64) / tau_ns).exp();

    let components = [
        fulfillment_short,
        fulfillment_long,
        non_intrusiveness,
        attempt_efficiency,
        timeliness,
    ];
    let composite: f64 = components
        .iter()
        .zip(weights.0)
        .map(|(c, w)| c * w)
        .sum::<f64>()
        .clamp(0.0, 1.0);

    Ok(QodScore {
        fulfillment_short,
        fulfillment_long,
        non_intrusiveness,
        attempt_efficiency,
        timeliness,
        composite,
        weights: *weights,
    })
}
