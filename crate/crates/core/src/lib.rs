//! Quantum-circuit distillation toolkit.
//!
//! * [`qsim`]: statevector simulation, unitaries, sampling and a Pauli noise model.
//! * [`circuits`]: inverse-QFT families, phase estimation, a Shor order-finding
//!   instance and random input preparation.
//! * [`metrics`]: Bhattacharyya coefficient, gate fidelity and the
//!   random-input average `B_ave`.
//! * [`distiller`]: MCTS circuit search with self-play training.
//! * [`neuralnet`]: the dual policy/value network used by the search.
//! * [`cli`]: configuration, file formats and the commands behind `qdistill`.
//!
//! Bit order: basis index bit `q` is qubit `q`, so qubit 0 is the least
//! significant bit.

pub mod circuits;
pub mod cli;
pub mod distiller;
pub mod error;
pub mod metrics;
pub mod neuralnet;
pub mod qsim;
pub mod seed;
pub mod tolerances;

pub use error::{Error, Result};
