use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metrics::{b_ave, gate_fidelity, EvalMode, EvalReport, Target};
use crate::neuralnet::TrainConfig;
use crate::qsim::{unitary_of, Circuit, MAX_UNITARY_QUBITS};
use crate::seed::derive_seed;

use super::episode::{run_episode, ActionChoice};
use super::mcts::{MctsConfig, PolicyValue, Searcher};
use super::ReplayBuffer;

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeLog {
    pub episode: usize,
    pub length: usize,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossLog {
    pub episode: usize,
    pub step: usize,
    pub loss: f64,
}

/// Result of a distillation run.
#[derive(Debug, Clone)]
pub struct DistillOutcome {
    /// Shortest circuit that reached reward 1.
    pub circuit: Circuit,
    /// Exact-mode report of `circuit` against the target.
    pub report: EvalReport,
    /// Per-state scores of `circuit` on the reward panel.
    pub panel_scores: Vec<f64>,
    pub episodes: usize,
    pub history: Vec<EpisodeLog>,
    pub losses: Vec<LossLog>,
    pub replay: ReplayBuffer,
}

/// Self-play search for a short circuit reproducing `target`'s outputs.
pub fn distill<N: PolicyValue + ?Sized>(
    target: &Target,
    config: &MctsConfig,
    training: &TrainConfig,
    net: &mut N,
) -> Result<DistillOutcome> {
    distill_resume(target, config, training, net, None)
}

/// As [`distill`], continuing from a saved replay buffer.
pub fn distill_resume<N: PolicyValue + ?Sized>(
    target: &Target,
    config: &MctsConfig,
    training: &TrainConfig,
    net: &mut N,
    replay: Option<ReplayBuffer>,
) -> Result<DistillOutcome> {
    training.validate()?;
    let mut searcher = Searcher::new(target, config)?;
    let g = searcher.space().len();
    let mut replay =
        replay.unwrap_or_else(|| ReplayBuffer::new(config.replay_capacity, config.max_len, g));
    let mut train_rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, 0x7A1));
    let mut best: Option<Vec<usize>> = None;
    let mut last_improvement = 0;
    let mut history = Vec::new();
    let mut losses = Vec::new();
    let mut step = 0;
    let mut episodes = 0;

    let consider = |found: Vec<Vec<usize>>, best: &mut Option<Vec<usize>>| {
        let mut improved = false;
        for a in found {
            if best.as_ref().is_none_or(|b| a.len() < b.len()) {
                *best = Some(a);
                improved = true;
            }
        }
        improved
    };

    while episodes < config.episodes {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, 1_000 + episodes as u64));
        let ep = run_episode(&mut searcher, &*net, ActionChoice::Sample, &mut rng)?;
        episodes += 1;
        history.push(EpisodeLog {
            episode: episodes,
            length: ep.actions.len(),
            z: ep.z,
        });
        for ex in ep.examples {
            replay.push(ex)?;
        }
        if consider(searcher.take_successes(), &mut best) {
            last_improvement = episodes;
        }
        if let Some(b) = &best {
            if b.len() == 1 || episodes - last_improvement >= config.patience {
                break;
            }
        }
        if episodes % config.train_every == 0 && !replay.is_empty() {
            let mut trained = false;
            for _ in 0..training.steps_per_phase {
                let batch = replay.sample(training.batch_size, &mut train_rng);
                if let Some(loss) = net.train(&batch, training)? {
                    trained = true;
                    step += 1;
                    losses.push(LossLog {
                        episode: episodes,
                        step,
                        loss,
                    });
                }
            }
            if trained {
                searcher.invalidate_predictions();
            }
        }
    }

    if episodes > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, 0xF1A));
        run_episode(&mut searcher, &*net, ActionChoice::Argmax, &mut rng)?;
        consider(searcher.take_successes(), &mut best);
    }

    let actions = best.ok_or(Error::NoCircuitFound { episodes })?;
    let circuit = searcher.circuit(&actions)?;
    let panel_scores = searcher.panel_reward().scores(&circuit)?;
    let mut report = b_ave(
        &circuit,
        target,
        config.eval_inputs,
        EvalMode::Exact,
        derive_seed(config.seed, 0xE7A1),
    )?;
    if target.n() <= MAX_UNITARY_QUBITS {
        report.gate_fidelity = Some(gate_fidelity(
            &unitary_of(target.reference())?,
            &unitary_of(&circuit)?,
        )?);
    }
    Ok(DistillOutcome {
        circuit,
        report,
        panel_scores,
        episodes,
        history,
        losses,
        replay,
    })
}
