//! Circuit search: gate menu, reward, PUCT tree search guided by a
//! policy/value model, self-play episodes and the outer distillation loop.

mod action;
mod distill;
mod episode;
mod mcts;
mod replay;
mod reward;

pub use action::ActionSpace;
pub use distill::{distill, distill_resume, DistillOutcome, EpisodeLog, LossLog};
pub use episode::{run_episode, self_play_episode, ActionChoice, Episode};
pub use mcts::{mcts_policy, EdgeStats, MctsConfig, PolicyValue, SearchResult, Searcher};
pub use replay::{ReplayBuffer, TrainingExample};
pub use reward::{reward, test_panel, PanelReward, Reward};
