use crate::circuits::{default_input_gates, random_input_state};
use crate::error::{Error, Result};
use crate::metrics::{bhattacharyya, Target};
use crate::qsim::{measure_dist, run_circuit, sample, Circuit, ProbDist, StateVector};
use crate::seed::derive_seed;

/// Outcome of scoring one partial circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reward {
    /// Every test state clears the threshold.
    Success,
    Continue,
    /// Maximum length reached without success.
    Failure,
}

impl Reward {
    pub fn value(self) -> f64 {
        match self {
            Reward::Success => 1.0,
            Reward::Continue => 0.0,
            Reward::Failure => -1.0,
        }
    }

    pub fn is_terminal(self) -> bool {
        self != Reward::Continue
    }
}

/// Scores `candidate` against `target` on each of `test_states`.
pub fn reward(
    candidate: &Circuit,
    target: &Target,
    test_states: &[StateVector],
    b_th: f64,
    at_max_len: bool,
) -> Result<Reward> {
    if test_states.is_empty() {
        return Err(Error::EmptyAverage);
    }
    let mut ok = true;
    for psi in test_states {
        let got = measure_dist(&run_circuit(candidate, psi)?);
        let want = target.output(psi)?;
        if bhattacharyya(&got, &want)? <= b_th {
            ok = false;
            break;
        }
    }
    Ok(classify(ok, at_max_len))
}

fn classify(success: bool, at_max_len: bool) -> Reward {
    if success {
        Reward::Success
    } else if at_max_len {
        Reward::Failure
    } else {
        Reward::Continue
    }
}

/// The `k` random test states of a distillation run.
pub fn test_panel(n: usize, k: usize, seed: u64) -> Result<Vec<StateVector>> {
    (0..k)
        .map(|i| random_input_state(n, default_input_gates(n), derive_seed(seed, i as u64)))
        .collect()
}

/// Reward function with the target outputs on a fixed panel precomputed.
#[derive(Debug, Clone)]
pub struct PanelReward {
    panel: Vec<StateVector>,
    answers: Vec<ProbDist>,
    b_th: f64,
    max_len: usize,
    shots: Option<(usize, u64)>,
}

impl PanelReward {
    pub fn new(target: &Target, panel: Vec<StateVector>, b_th: f64, max_len: usize) -> Result<Self> {
        if panel.is_empty() {
            return Err(Error::EmptyAverage);
        }
        let answers = panel
            .iter()
            .map(|psi| target.output(psi))
            .collect::<Result<Vec<_>>>()?;
        Ok(PanelReward {
            panel,
            answers,
            b_th,
            max_len,
            shots: None,
        })
    }

    /// Score from `shots` samples of each candidate output instead of the
    /// exact distribution. Sampling seeds depend on the circuit, so the
    /// reward is still a function of the circuit.
    pub fn with_shots(mut self, shots: usize, seed: u64) -> Self {
        self.shots = Some((shots, seed));
        self
    }

    pub fn panel(&self) -> &[StateVector] {
        &self.panel
    }

    pub fn threshold(&self) -> f64 {
        self.b_th
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Per-state Bhattacharyya coefficients.
    pub fn scores(&self, candidate: &Circuit) -> Result<Vec<f64>> {
        let key = fnv(&candidate.to_string());
        self.panel
            .iter()
            .zip(&self.answers)
            .enumerate()
            .map(|(i, (psi, want))| {
                let mut got = measure_dist(&run_circuit(candidate, psi)?);
                if let Some((shots, seed)) = self.shots {
                    got = sample(&got, shots, derive_seed(seed ^ key, i as u64))?;
                }
                bhattacharyya(&got, want)
            })
            .collect()
    }

    pub fn score(&self, candidate: &Circuit) -> Result<Reward> {
        let ok = self.scores(candidate)?.iter().all(|&b| b > self.b_th);
        Ok(classify(ok, candidate.len() >= self.max_len))
    }
}

fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}
