use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PathEnsemble;
use crate::environment::{AmbushAreaSet, OutcomeMap};
use crate::error::{Error, Result};
use crate::game::LossModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub trials: u64,
    pub mean: f64,
    pub std_error: f64,
}

/// Loss of walking `nodes` when RED ambushes `area`. Loss accrues on
/// entering a node (never the first one) under `model`.
pub fn path_loss(nodes: &[usize], area: usize, areas: &AmbushAreaSet, alpha: &[f64], model: LossModel) -> f64 {
    nodes
        .windows(2)
        .filter(|w| areas.area_of(w[1]) == area && model.charges(areas, w[0], w[1]))
        .map(|w| alpha[w[1]])
        .sum()
}

/// Samples a path by weight and an ambush area from `q`, `trials` times.
///
/// Trial `t` draws from its own ChaCha8 stream `t` under `seed`, so results
/// do not depend on evaluation order.
pub fn simulate(
    ensemble: &PathEnsemble,
    q: &[f64],
    areas: &AmbushAreaSet,
    outcome: &OutcomeMap,
    model: LossModel,
    trials: u64,
    seed: u64,
) -> Result<SimulationResult> {
    if trials == 0 {
        return Err(Error::Argument("trials must be at least 1".into()));
    }
    if q.len() != areas.len() {
        return Err(Error::Dimension(format!("q has {} entries for {} areas", q.len(), areas.len())));
    }
    let path_dist = WeightedIndex::new(ensemble.paths.iter().map(|p| p.weight))
        .map_err(|e| Error::Argument(format!("path weights: {e}")))?;
    let area_dist = WeightedIndex::new(q).map_err(|e| Error::Argument(format!("ambush distribution: {e}")))?;

    let alpha = outcome.alpha();
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t);
        let path = &ensemble.paths[path_dist.sample(&mut rng)];
        let area = area_dist.sample(&mut rng);
        let loss = path_loss(&path.nodes, area, areas, alpha, model);
        let delta = loss - mean;
        mean += delta / (t + 1) as f64;
        m2 += delta * (loss - mean);
    }
    let std_error = if trials > 1 {
        (m2 / (trials - 1) as f64 / trials as f64).sqrt()
    } else {
        0.0
    };
    Ok(SimulationResult {
        trials,
        mean,
        std_error,
    })
}
