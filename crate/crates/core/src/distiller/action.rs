use crate::error::{Error, Result};
use crate::qsim::{Circuit, Gate, DISTILLER_PHASES, MAX_QUBITS};

const ANGLE_TOL: f64 = 1e-12;

/// The gate menu circuits are grown from, in a fixed order:
/// `H(q)` for every qubit, then `X(q)`, then `P(q, φ_k)` (qubit-major, the
/// four phases in the order of [`DISTILLER_PHASES`]), then `CNOT(c, t)` for
/// every ordered pair `c != t` (control-major).
#[derive(Debug, Clone, PartialEq)]
pub struct ActionSpace {
    n: usize,
    gates: Vec<Gate>,
}

impl ActionSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange {
                n,
                min: 1,
                max: MAX_QUBITS,
            });
        }
        let mut gates = Vec::with_capacity(6 * n + n * (n - 1));
        gates.extend((0..n).map(Gate::Hadamard));
        gates.extend((0..n).map(Gate::Not));
        for qubit in 0..n {
            for &angle in &DISTILLER_PHASES {
                gates.push(Gate::PhaseShift { qubit, angle });
            }
        }
        for control in 0..n {
            for target in (0..n).filter(|&t| t != control) {
                gates.push(Gate::CNot { control, target });
            }
        }
        Ok(ActionSpace { n, gates })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of actions `G`.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Panics if `index >= len()`.
    pub fn gate(&self, index: usize) -> Gate {
        self.gates[index]
    }

    pub fn index_of(&self, gate: &Gate) -> Option<usize> {
        self.gates.iter().position(|g| match (g, gate) {
            (
                Gate::PhaseShift { qubit: a, angle: x },
                Gate::PhaseShift { qubit: b, angle: y },
            ) => a == b && (x - y).abs() < ANGLE_TOL,
            _ => g == gate,
        })
    }

    /// Circuit built from a sequence of action indices.
    pub fn circuit(&self, actions: &[usize]) -> Result<Circuit> {
        let gates = actions
            .iter()
            .map(|&a| {
                if a < self.len() {
                    Ok(self.gate(a))
                } else {
                    Err(Error::NotInActionSpace(format!("action #{a}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Circuit::from_gates(self.n, gates)
    }

    /// Length-`max_len` vector holding `1 + action index` per gate and zeros
    /// after the last gate.
    pub fn encode(&self, circuit: &Circuit, max_len: usize) -> Result<Vec<u16>> {
        if circuit.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: circuit.n(),
            });
        }
        if circuit.len() > max_len {
            return Err(Error::CircuitTooLong {
                len: circuit.len(),
                max: max_len,
            });
        }
        let mut out = vec![0u16; max_len];
        for (slot, g) in out.iter_mut().zip(circuit.gates()) {
            let idx = self
                .index_of(g)
                .ok_or_else(|| Error::NotInActionSpace(g.to_string()))?;
            *slot = (idx + 1) as u16;
        }
        Ok(out)
    }
}
