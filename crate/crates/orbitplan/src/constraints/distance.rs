//! Pairwise separation over sampled trajectories.

use super::ConstraintError;
use crate::astro::Ephemeris;

fn pair_distances<'a>(
    agents: &'a [Ephemeris],
    objects: &'a [Ephemeris],
) -> Result<impl Iterator<Item = f64> + 'a, ConstraintError> {
    if agents.len() + objects.len() < 2 || agents.is_empty() {
        return Err(ConstraintError::TooFewObjects);
    }
    let n_samples = agents[0].grid.n_samples;
    let iter = (0..n_samples).flat_map(move |k| {
        let agent_agent = (0..agents.len()).flat_map(move |i| {
            ((i + 1)..agents.len())
                .map(move |j| (agents[i].states[k].r - agents[j].states[k].r).norm())
        });
        let agent_object = (0..agents.len()).flat_map(move |i| {
            (0..objects.len())
                .map(move |j| (agents[i].states[k].r - objects[j].states[k].r).norm())
        });
        agent_agent.chain(agent_object)
    });
    Ok(iter)
}

/// Minimum Euclidean separation over all sample times and all agent-agent
/// and agent-object pairs, km.
pub fn min_pairwise_distance(
    agents: &[Ephemeris],
    objects: &[Ephemeris],
) -> Result<f64, ConstraintError> {
    Ok(pair_distances(agents, objects)?.fold(f64::INFINITY, f64::min))
}

/// Smooth lower bound on the minimum distance: the negative-p-norm softmin
/// d_min * (sum (d_min / d_i)^p)^(-1/p). Used on gradient-based steps;
/// exact [`min_pairwise_distance`] decides feasibility verdicts.
pub fn softmin_pairwise_distance(
    agents: &[Ephemeris],
    objects: &[Ephemeris],
    exponent: f64,
) -> Result<f64, ConstraintError> {
    let distances: Vec<f64> = pair_distances(agents, objects)?.collect();
    let d_min = distances.iter().copied().fold(f64::INFINITY, f64::min);
    if d_min == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = distances.iter().map(|d| (d_min / d).powf(exponent)).sum();
    Ok(d_min * sum.powf(-1.0 / exponent))
}
