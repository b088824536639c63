use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::distiller::{ActionSpace, MctsConfig};
use crate::error::{Error, Result};
use crate::metrics::Target;
use crate::neuralnet::{NetConfig, TrainConfig};

/// Distillation config file. Flat `key = value` pairs (TOML syntax); every
/// key except `target` is optional.
///
/// ```toml
/// target = "iqft-2"
/// seed = 7
/// max_len = 8
/// sims_per_move = 200
/// channels = 32
/// ```
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistillFile {
    pub target: String,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub c_puct: Option<f64>,
    pub sims_per_move: Option<usize>,
    pub b_th: Option<f64>,
    pub max_len: Option<usize>,
    pub test_inputs: Option<usize>,
    pub episodes: Option<usize>,
    pub patience: Option<usize>,
    pub replay_capacity: Option<usize>,
    pub train_every: Option<usize>,
    pub eval_inputs: Option<usize>,
    pub reward_shots: Option<usize>,
    pub lr: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub batch_size: Option<usize>,
    pub dropout: Option<f64>,
    pub steps_per_phase: Option<usize>,
    pub channels: Option<usize>,
    pub conv_layers: Option<usize>,
    pub leaky_slope: Option<f64>,
    pub resume_checkpoint: Option<PathBuf>,
    pub resume_replay: Option<PathBuf>,
}

/// Everything a distillation run needs, with defaults filled in.
#[derive(Debug, Clone)]
pub struct DistillSettings {
    pub target: Target,
    pub search: MctsConfig,
    pub training: TrainConfig,
    pub network: NetConfig,
    pub output_dir: PathBuf,
    pub resume_checkpoint: Option<PathBuf>,
    pub resume_replay: Option<PathBuf>,
}

/// `iqft-<n>` or `identity-<n>`.
pub fn parse_target(s: &str) -> Result<Target> {
    let bad = || Error::InvalidConfig(format!("unknown target {s:?}; expected iqft-<n> or identity-<n>"));
    let (kind, n) = s.rsplit_once('-').ok_or_else(bad)?;
    let n: usize = n.parse().map_err(|_| bad())?;
    match kind {
        "iqft" => Target::iqft(n),
        "identity" if n >= 1 => Ok(Target::identity(n)),
        _ => Err(bad()),
    }
}

impl DistillFile {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", origin.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        DistillFile::parse(&text, path)
    }

    /// Fills defaults; `seed` overrides the file's seed.
    pub fn settings(&self, seed: Option<u64>) -> Result<DistillSettings> {
        let target = parse_target(&self.target)?;
        let n = target.n();
        let seed = seed.or(self.seed).unwrap_or(0);
        let d = MctsConfig::for_qubits(n);
        let search = MctsConfig {
            c_puct: self.c_puct.unwrap_or(d.c_puct),
            sims_per_move: self.sims_per_move.unwrap_or(d.sims_per_move),
            b_th: self.b_th.unwrap_or(d.b_th),
            max_len: self.max_len.unwrap_or(d.max_len),
            test_inputs: self.test_inputs.unwrap_or(d.test_inputs),
            seed,
            episodes: self.episodes.unwrap_or(d.episodes),
            patience: self.patience.unwrap_or(d.patience),
            replay_capacity: self.replay_capacity.unwrap_or(d.replay_capacity),
            train_every: self.train_every.unwrap_or(d.train_every),
            eval_inputs: self.eval_inputs.unwrap_or(d.eval_inputs),
            reward_shots: self.reward_shots.or(d.reward_shots),
        };
        search.validate()?;
        let t = TrainConfig::default();
        let training = TrainConfig {
            lr: self.lr.unwrap_or(t.lr),
            betas: (self.beta1.unwrap_or(t.betas.0), self.beta2.unwrap_or(t.betas.1)),
            eps: t.eps,
            batch_size: self.batch_size.unwrap_or(t.batch_size),
            dropout: self.dropout.unwrap_or(t.dropout),
            steps_per_phase: self.steps_per_phase.unwrap_or(t.steps_per_phase),
        };
        training.validate()?;
        let g = ActionSpace::new(n)?.len();
        let nd = NetConfig::new(g, search.max_len);
        let network = NetConfig {
            channels: self.channels.unwrap_or(nd.channels),
            conv_layers: self.conv_layers.unwrap_or(nd.conv_layers),
            leaky_slope: self.leaky_slope.unwrap_or(nd.leaky_slope),
            seed,
            ..nd
        };
        network.validate()?;
        Ok(DistillSettings {
            target,
            search,
            training,
            network,
            output_dir: self.output_dir.clone().unwrap_or_else(|| PathBuf::from("distill-out")),
            resume_checkpoint: self.resume_checkpoint.clone(),
            resume_replay: self.resume_replay.clone(),
        })
    }
}
