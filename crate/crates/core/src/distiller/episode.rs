use rand::Rng;

use crate::error::Result;
use crate::metrics::Target;

use super::mcts::{MctsConfig, PolicyValue, Searcher};
use super::reward::Reward;
use super::TrainingExample;

/// Outcome of one self-play episode.
#[derive(Debug, Clone, PartialEq)]
pub struct Episode {
    pub examples: Vec<TrainingExample>,
    /// Action indices of the final circuit.
    pub actions: Vec<usize>,
    /// Sum of step rewards: 1 on success, -1 on failure.
    pub z: f64,
}

impl Episode {
    pub fn succeeded(&self) -> bool {
        self.z > 0.0
    }
}

/// How the next action is chosen from the search policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionChoice {
    Sample,
    /// Most visited action, lowest index on ties.
    Argmax,
}

/// Grows a circuit from empty, one searched move at a time, until the
/// reward is terminal. Every visited state is labelled with the episode
/// reward.
pub fn run_episode<N: PolicyValue + ?Sized, R: Rng>(
    searcher: &mut Searcher,
    net: &N,
    choice: ActionChoice,
    rng: &mut R,
) -> Result<Episode> {
    let mut actions = Vec::new();
    let mut visited = Vec::new();
    let mut z = 0.0;
    loop {
        let pi = searcher.search(&actions, net)?.pi;
        visited.push((searcher.encode(&actions), pi.clone()));
        let a = match choice {
            ActionChoice::Sample => sample_index(&pi, rng),
            ActionChoice::Argmax => argmax(&pi),
        };
        actions.push(a);
        let r = searcher.reward_of(&actions)?;
        z += r.value();
        if r != Reward::Continue {
            break;
        }
    }
    Ok(Episode {
        examples: visited
            .into_iter()
            .map(|(state, pi)| TrainingExample { state, pi, z })
            .collect(),
        actions,
        z,
    })
}

/// One sampled episode from scratch with fresh caches.
pub fn self_play_episode<N: PolicyValue + ?Sized, R: Rng>(
    target: &Target,
    net: &N,
    config: &MctsConfig,
    rng: &mut R,
) -> Result<Episode> {
    let mut s = Searcher::new(target, config)?;
    run_episode(&mut s, net, ActionChoice::Sample, rng)
}

fn argmax(pi: &[f64]) -> usize {
    let mut best = 0;
    for (i, &p) in pi.iter().enumerate() {
        if p > pi[best] {
            best = i;
        }
    }
    best
}

fn sample_index<R: Rng>(pi: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in pi.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    pi.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}
