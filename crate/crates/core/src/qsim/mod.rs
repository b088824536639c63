//! Dense statevector simulation of the distiller's gate set, with an optional
//! trajectory-sampled noise model.

mod circuit;
mod dist;
mod gate;
mod noise;
mod state;
mod unitary;

pub use circuit::Circuit;
pub use dist::{sample, ProbDist};
pub use gate::{Gate, GateKind, DISTILLER_PHASES};
pub use noise::{run_noisy, NoiseModel};
pub use state::{apply_gate, measure_dist, run_circuit, StateVector, MAX_QUBITS};
pub use unitary::{unitary_of, UnitaryMatrix, MAX_UNITARY_QUBITS};

