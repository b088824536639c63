//! Dual policy/value network with hand-written forward and backward passes,
//! Adam training and a portable checkpoint format.

mod checkpoint;
mod layers;
mod net;

pub use checkpoint::{checkpoint_load, checkpoint_load_expecting, checkpoint_save};
pub use net::{gradient_check, loss, DualNet, NetConfig, Tensor, TrainMode};

use crate::distiller::ActionSpace;
use crate::error::{Error, Result};
use crate::qsim::Circuit;

/// Optimiser settings.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub lr: f64,
    pub betas: (f64, f64),
    pub eps: f64,
    pub batch_size: usize,
    pub dropout: f64,
    /// Minibatch steps per training phase of the distillation loop.
    pub steps_per_phase: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lr: 0.001,
            betas: (0.9, 0.999),
            eps: 1e-8,
            batch_size: 32,
            dropout: 0.3,
            steps_per_phase: 20,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let (b1, b2) = self.betas;
        let ok = self.lr >= 0.0
            && self.lr.is_finite()
            && (0.0..1.0).contains(&b1)
            && (0.0..1.0).contains(&b2)
            && self.eps > 0.0
            && self.batch_size >= 1
            && (0.0..1.0).contains(&self.dropout);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("bad training settings {self:?}")))
        }
    }
}

/// Length-`max_len` encoding of an action-space circuit: `1 + action index`
/// per gate, zeros after the last gate.
pub fn encode_state(circuit: &Circuit, max_len: usize) -> Result<Vec<u16>> {
    ActionSpace::new(circuit.n())?.encode(circuit, max_len)
}
