use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::metrics::Target;
use crate::neuralnet::TrainConfig;
use crate::qsim::Circuit;

use super::reward::{test_panel, PanelReward, Reward};
use super::{ActionSpace, TrainingExample};

/// Tree-search and episode-loop settings.
#[derive(Debug, Clone, PartialEq)]
pub struct MctsConfig {
    pub c_puct: f64,
    pub sims_per_move: usize,
    /// Reward threshold `B_th` on every test state.
    pub b_th: f64,
    pub max_len: usize,
    /// Size of the fixed test-state panel.
    pub test_inputs: usize,
    pub seed: u64,
    /// Self-play episode budget.
    pub episodes: usize,
    /// Episodes without a shorter circuit before the search stops.
    pub patience: usize,
    pub replay_capacity: usize,
    /// Train after every this many episodes.
    pub train_every: usize,
    /// Inputs for the final exact-mode report.
    pub eval_inputs: usize,
    /// Score candidates from this many shots instead of exactly.
    pub reward_shots: Option<usize>,
}

impl MctsConfig {
    /// Defaults for an `n`-qubit target (`max_len = 4n`).
    pub fn for_qubits(n: usize) -> Self {
        MctsConfig {
            c_puct: 1.5,
            sims_per_move: 200,
            b_th: 0.9,
            max_len: 4 * n.max(1),
            test_inputs: 5,
            seed: 0,
            episodes: 2000,
            patience: 20,
            replay_capacity: 10_000,
            train_every: 10,
            eval_inputs: 20,
            reward_shots: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.b_th > 0.0 && self.b_th < 1.0) {
            return bad("b_th must lie in (0, 1)");
        }
        if self.max_len == 0 {
            return bad("max_len must be at least 1");
        }
        if self.sims_per_move == 0 {
            return bad("sims_per_move must be at least 1");
        }
        if self.test_inputs == 0 {
            return bad("test_inputs must be at least 1");
        }
        if !(self.c_puct >= 0.0 && self.c_puct.is_finite()) {
            return bad("c_puct must be a finite non-negative number");
        }
        if self.train_every == 0 || self.replay_capacity == 0 {
            return bad("train_every and replay_capacity must be at least 1");
        }
        if self.reward_shots == Some(0) {
            return Err(Error::ZeroShots);
        }
        Ok(())
    }
}

/// A policy/value model consulted by the tree search.
pub trait PolicyValue {
    /// Log-probabilities over the actions and a value in `[-1, 1]` for an
    /// encoded circuit.
    fn predict(&self, state: &[u16]) -> Result<(Vec<f64>, f64)>;

    /// One optimisation step on `batch`. Models that do not learn return `None`.
    fn train(&mut self, _batch: &[TrainingExample], _cfg: &TrainConfig) -> Result<Option<f64>> {
        Ok(None)
    }
}

#[derive(Debug, Clone)]
struct Edge {
    n: u32,
    q: f64,
    p: f64,
    child: Option<usize>,
}

#[derive(Debug, Clone)]
struct Node {
    terminal: Option<f64>,
    edges: Vec<Edge>,
}

/// Visit statistics of one root edge after a search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeStats {
    pub n: u32,
    pub q: f64,
    pub p: f64,
}

/// Result of searching from one root.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub pi: Vec<f64>,
    pub root: Vec<EdgeStats>,
}

/// Tree search over one target, with reward and prediction caches.
///
/// Rewards are cached for the whole run. Predictions are cached until
/// [`Searcher::invalidate_predictions`] is called after the model changes.
pub struct Searcher {
    space: ActionSpace,
    reward: PanelReward,
    config: MctsConfig,
    rewards: HashMap<Vec<usize>, Reward>,
    predictions: HashMap<Vec<u16>, (Vec<f64>, f64)>,
    successes: Vec<Vec<usize>>,
}

impl Searcher {
    pub fn new(target: &Target, config: &MctsConfig) -> Result<Self> {
        config.validate()?;
        let panel = test_panel(target.n(), config.test_inputs, panel_seed(config.seed))?;
        let mut reward = PanelReward::new(target, panel, config.b_th, config.max_len)?;
        if let Some(shots) = config.reward_shots {
            reward = reward.with_shots(shots, config.seed);
        }
        Ok(Searcher {
            space: ActionSpace::new(target.n())?,
            reward,
            config: config.clone(),
            rewards: HashMap::new(),
            predictions: HashMap::new(),
            successes: Vec::new(),
        })
    }

    pub fn space(&self) -> &ActionSpace {
        &self.space
    }

    pub fn config(&self) -> &MctsConfig {
        &self.config
    }

    pub fn panel_reward(&self) -> &PanelReward {
        &self.reward
    }

    pub fn invalidate_predictions(&mut self) {
        self.predictions.clear();
    }

    /// Successful action sequences seen since the last call, in discovery order.
    pub fn take_successes(&mut self) -> Vec<Vec<usize>> {
        std::mem::take(&mut self.successes)
    }

    pub fn encode(&self, actions: &[usize]) -> Vec<u16> {
        let mut out = vec![0u16; self.config.max_len];
        for (slot, &a) in out.iter_mut().zip(actions) {
            *slot = (a + 1) as u16;
        }
        out
    }

    pub fn circuit(&self, actions: &[usize]) -> Result<Circuit> {
        self.space.circuit(actions)
    }

    pub fn reward_of(&mut self, actions: &[usize]) -> Result<Reward> {
        if let Some(&r) = self.rewards.get(actions) {
            return Ok(r);
        }
        let r = self.reward.score(&self.space.circuit(actions)?)?;
        if r == Reward::Success {
            self.successes.push(actions.to_vec());
        }
        self.rewards.insert(actions.to_vec(), r);
        Ok(r)
    }

    fn evaluate<N: PolicyValue + ?Sized>(&mut self, actions: &[usize], net: &N) -> Result<(Vec<f64>, f64)> {
        let key = self.encode(actions);
        if let Some(hit) = self.predictions.get(&key) {
            return Ok(hit.clone());
        }
        let (logp, v) = net.predict(&key)?;
        if logp.len() != self.space.len() {
            return Err(Error::ShapeMismatch(format!(
                "model returned {} log-probabilities for {} actions",
                logp.len(),
                self.space.len()
            )));
        }
        let mut p: Vec<f64> = logp.iter().map(|x| x.exp()).collect();
        let s: f64 = p.iter().sum();
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidDistribution(format!("policy sums to {s}")));
        }
        p.iter_mut().for_each(|x| *x /= s);
        self.predictions.insert(key, (p.clone(), v));
        Ok((p, v))
    }

    fn expand(&self, priors: Vec<f64>) -> Node {
        Node {
            terminal: None,
            edges: priors
                .into_iter()
                .map(|p| Edge {
                    n: 0,
                    q: 0.0,
                    p,
                    child: None,
                })
                .collect(),
        }
    }

    /// Runs `sims_per_move` simulations from the circuit `root` and returns
    /// the visit-count policy.
    pub fn search<N: PolicyValue + ?Sized>(&mut self, root: &[usize], net: &N) -> Result<SearchResult> {
        if root.len() >= self.config.max_len {
            return Err(Error::CircuitTooLong {
                len: root.len() + 1,
                max: self.config.max_len,
            });
        }
        let c = self.config.c_puct;
        let (priors, _) = self.evaluate(root, net)?;
        let mut nodes = vec![self.expand(priors)];
        let mut actions = root.to_vec();
        let mut path: Vec<(usize, usize)> = Vec::new();
        for _ in 0..self.config.sims_per_move {
            actions.truncate(root.len());
            path.clear();
            let mut node = 0;
            let value = loop {
                let a = select(&nodes[node].edges, c);
                path.push((node, a));
                actions.push(a);
                if let Some(child) = nodes[node].edges[a].child {
                    if let Some(v) = nodes[child].terminal {
                        break v;
                    }
                    node = child;
                    continue;
                }
                let r = self.reward_of(&actions)?;
                let (leaf, v) = if r.is_terminal() {
                    let v = r.value();
                    (
                        Node {
                            terminal: Some(v),
                            edges: Vec::new(),
                        },
                        v,
                    )
                } else {
                    let (p, v) = self.evaluate(&actions, net)?;
                    (self.expand(p), v)
                };
                nodes.push(leaf);
                let id = nodes.len() - 1;
                nodes[node].edges[a].child = Some(id);
                break v;
            };
            for &(node, a) in &path {
                let e = &mut nodes[node].edges[a];
                e.q = (e.n as f64 * e.q + value) / (e.n as f64 + 1.0);
                e.n += 1;
            }
        }
        let root_edges = &nodes[0].edges;
        let total: u32 = root_edges.iter().map(|e| e.n).sum();
        Ok(SearchResult {
            pi: root_edges.iter().map(|e| e.n as f64 / total as f64).collect(),
            root: root_edges
                .iter()
                .map(|e| EdgeStats { n: e.n, q: e.q, p: e.p })
                .collect(),
        })
    }
}

/// PUCT selection; ties go to the lowest action index.
fn select(edges: &[Edge], c_puct: f64) -> usize {
    let total: u32 = edges.iter().map(|e| e.n).sum();
    let sqrt_total = (total as f64).sqrt();
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (a, e) in edges.iter().enumerate() {
        let score = e.q + c_puct * e.p * sqrt_total / (1.0 + e.n as f64);
        if score > best_score {
            best = a;
            best_score = score;
        }
    }
    best
}

pub(crate) fn panel_seed(seed: u64) -> u64 {
    crate::seed::derive_seed(seed, 0x7E57)
}

/// Visit-count policy for one search from `root` towards `target`.
pub fn mcts_policy<N: PolicyValue + ?Sized>(
    root: &Circuit,
    target: &Target,
    net: &N,
    config: &MctsConfig,
) -> Result<Vec<f64>> {
    let mut s = Searcher::new(target, config)?;
    let actions = root
        .gates()
        .iter()
        .map(|g| {
            s.space()
                .index_of(g)
                .ok_or_else(|| Error::NotInActionSpace(g.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(s.search(&actions, net)?.pi)
}
