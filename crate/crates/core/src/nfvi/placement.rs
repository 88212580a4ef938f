use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ComputeNode, SimError, VimState};
use crate::descriptor::Resources;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlacementPolicy {
    /// Lowest-id admitting node.
    #[default]
    FirstFit,
    /// Admitting node leaving the least normalized residual, lowest id on ties.
    BestFit,
    /// Uniform over admitting nodes.
    Random(u64),
}

/// `Σ_dim residual_after / capacity`; lower is a tighter fit.
pub fn best_fit_score(node: &ComputeNode, demand: &Resources) -> f64 {
    let residual = node.residual();
    residual
        .dims()
        .iter()
        .zip(demand.dims())
        .zip(node.capacity.dims())
        .map(|((&r, d), c)| (r - d) as f64 / c as f64)
        .sum()
}

impl VimState {
    /// Admitting nodes in the order the policy would try them.
    pub fn rank_candidates(&self, demand: &Resources, policy: PlacementPolicy) -> Vec<String> {
        self.rank_candidates_where(demand, policy, |_| true)
    }

    pub(crate) fn rank_candidates_where<F>(&self, demand: &Resources, policy: PlacementPolicy, keep: F) -> Vec<String>
    where
        F: Fn(&ComputeNode) -> bool,
    {
        let mut admitting: Vec<&ComputeNode> = self
            .nodes
            .iter()
            .filter(|n| keep(n) && n.residual().admits(demand))
            .collect();
        match policy {
            PlacementPolicy::FirstFit => {}
            PlacementPolicy::BestFit => {
                // Stable sort keeps id order among equal scores.
                admitting.sort_by(|a, b| {
                    best_fit_score(a, demand)
                        .partial_cmp(&best_fit_score(b, demand))
                        .unwrap_or(Ordering::Equal)
                });
            }
            PlacementPolicy::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                admitting.shuffle(&mut rng);
            }
        }
        admitting.into_iter().map(|n| n.node_id.clone()).collect()
    }

    /// Chooses a node for `demand`. Pure query: nothing is allocated.
    pub fn place(&self, demand: &Resources, policy: PlacementPolicy) -> Result<String, SimError> {
        self.rank_candidates(demand, policy)
            .into_iter()
            .next()
            .ok_or(SimError::NoFeasibleNode)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pool() -> VimState {
        VimState::create_pool(&[Resources::new(2, 4096, 40), Resources::new(8, 16384, 160)]).unwrap()
    }

    #[test]
    fn first_fit_picks_lowest_id() {
        assert_eq!(pool().place(&Resources::new(2, 4096, 40), PlacementPolicy::FirstFit).unwrap(), "n0");
    }

    #[test]
    fn best_fit_picks_tightest() {
        let state = pool();
        let demand = Resources::new(2, 4096, 40);
        // Brute force: n0 leaves 0+0+0, n1 leaves 6/8 + 12288/16384 + 120/160.
        assert_eq!(best_fit_score(&state.nodes[0], &demand), 0.0);
        assert_eq!(best_fit_score(&state.nodes[1], &demand), 0.75 * 3.0);
        assert_eq!(state.place(&demand, PlacementPolicy::BestFit).unwrap(), "n0");
    }

    #[test]
    fn nothing_fits() {
        assert_eq!(
            pool().place(&Resources::new(16, 1, 1), PlacementPolicy::BestFit),
            Err(SimError::NoFeasibleNode)
        );
        let empty = VimState::create_pool(&[]).unwrap();
        assert_eq!(empty.place(&Resources::new(1, 1, 1), PlacementPolicy::FirstFit), Err(SimError::NoFeasibleNode));
    }

    #[test]
    fn random_is_seeded_and_admitting() {
        let state = VimState::create_pool(&[Resources::new(4, 4096, 40); 6]).unwrap();
        let demand = Resources::new(1, 1, 1);
        let a = state.place(&demand, PlacementPolicy::Random(7)).unwrap();
        let b = state.place(&demand, PlacementPolicy::Random(7)).unwrap();
        assert_eq!(a, b);
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..200 {
            seen.insert(state.place(&demand, PlacementPolicy::Random(seed)).unwrap());
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn placement_does_not_mutate() {
        let state = pool();
        let before = state.clone();
        let _ = state.place(&Resources::new(1, 1, 1), PlacementPolicy::BestFit);
        assert_eq!(before, state);
    }
}
