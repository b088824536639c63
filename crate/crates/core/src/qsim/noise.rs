use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use super::dist::{draw, ProbDist};
use super::state::{run_circuit, Pauli, StateVector};
use crate::error::{Error, Result};

/// Stochastic Pauli noise plus symmetric readout flips.
///
/// After every 1-qubit gate the touched qubit receives a uniformly random
/// Pauli with probability `p1`; after a 2-qubit gate each touched qubit
/// independently receives one with probability `p2`. Each measured bit is
/// flipped with probability `readout`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub readout: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            p1: 0.001,
            p2: 0.01,
            readout: 0.03,
        }
    }
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, readout: f64) -> Result<Self> {
        let m = NoiseModel { p1, p2, readout };
        m.validate()?;
        Ok(m)
    }

    pub fn noiseless() -> Self {
        NoiseModel {
            p1: 0.0,
            p2: 0.0,
            readout: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("p1", self.p1), ("p2", self.p2), ("readout", self.readout)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidProbability { name, value });
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.readout == 0.0
    }
}

/// Monte-Carlo trajectory execution of `circuit` on `input`.
///
/// Returns the empirical outcome distribution over `shots` trajectories.
/// Deterministic given `seed`.
pub fn run_noisy(
    circuit: &Circuit,
    input: &StateVector,
    noise: &NoiseModel,
    shots: usize,
    seed: u64,
) -> Result<ProbDist> {
    noise.validate()?;
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let n = circuit.n();
    // also checks the width
    let ideal_cdf = run_circuit(circuit, input)?.probabilities().cdf();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; 1 << n];
    for _ in 0..shots {
        let mut state: Option<StateVector> = None;
        for (k, gate) in circuit.gates().iter().enumerate() {
            if let Some(s) = state.as_mut() {
                s.apply(gate)?;
            }
            let (ids, len) = gate.operands();
            let p = if len == 1 { noise.p1 } else { noise.p2 };
            for &q in &ids[..len] {
                if p > 0.0 && rng.gen::<f64>() < p {
                    let pauli = match rng.gen_range(0..3) {
                        0 => Pauli::X,
                        1 => Pauli::Y,
                        _ => Pauli::Z,
                    };
                    // Fault-free trajectories never materialize a state.
                    let s = match state.as_mut() {
                        Some(s) => s,
                        None => state.insert(run_circuit(&prefix(circuit, k + 1), input)?),
                    };
                    s.pauli(q, pauli);
                }
            }
        }
        let mut outcome = match &state {
            None => draw(&ideal_cdf, &mut rng),
            Some(s) => draw(&s.probabilities().cdf(), &mut rng),
        };
        if noise.readout > 0.0 {
            for q in 0..n {
                if rng.gen::<f64>() < noise.readout {
                    outcome ^= 1 << q;
                }
            }
        }
        counts[outcome] += 1;
    }
    Ok(ProbDist::from_counts(n, &counts, shots))
}

fn prefix(circuit: &Circuit, len: usize) -> Circuit {
    Circuit::from_gates(circuit.n(), circuit.gates()[..len].to_vec()).expect("prefix of a valid circuit")
}
