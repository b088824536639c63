use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::circuit::Circuit;
use super::dist::ProbDist;
use super::gate::Gate;
use crate::error::{Error, Result};
use crate::tolerances::TOLERANCES;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 24;

/// Pure state of `n` qubits as `2^n` amplitudes.
///
/// Basis index bit `q` is the value of qubit `q`; qubit 0 is the least
/// significant bit of every measured bitstring.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

/// Single-qubit Paulis injected by the noise model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Pauli {
    X,
    Y,
    Z,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n: usize) -> Self {
        Self::basis(n, 0)
    }

    /// Computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Self {
        assert!(n <= MAX_QUBITS, "register of {n} qubits is too large");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    /// Wraps raw amplitudes, checking length and normalization.
    pub fn from_amps(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: len.next_power_of_two(),
                got: len,
            });
        }
        let n = len.trailing_zeros() as usize;
        let s = StateVector { n, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > TOLERANCES.norm {
            return Err(Error::NotNormalized(norm));
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// In-place unitary action of `gate`.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n)?;
        match *gate {
            Gate::Hadamard(q) => {
                let m = 1usize << q;
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let a = self.amps[i];
                        let b = self.amps[i | m];
                        self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                        self.amps[i | m] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
            Gate::Not(q) => self.pauli(q, Pauli::X),
            Gate::PhaseShift { qubit, angle } => {
                let m = 1usize << qubit;
                let phase = Complex64::from_polar(1.0, angle);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & m != 0 {
                        *a *= phase;
                    }
                }
            }
            Gate::CNot { control, target } => {
                let (cm, tm) = (1usize << control, 1usize << target);
                for i in 0..self.amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
            }
            Gate::Swap(a, b) => {
                let (am, bm) = (1usize << a, 1usize << b);
                for i in 0..self.amps.len() {
                    if i & am != 0 && i & bm == 0 {
                        self.amps.swap(i, i ^ am ^ bm);
                    }
                }
            }
            Gate::ControlledPhase {
                control,
                target,
                angle,
            } => {
                let m = (1usize << control) | (1usize << target);
                let phase = Complex64::from_polar(1.0, angle);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & m == m {
                        *a *= phase;
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn pauli(&mut self, q: usize, p: Pauli) {
        let m = 1usize << q;
        let i_unit = Complex64::new(0.0, 1.0);
        for i in 0..self.amps.len() {
            if i & m != 0 {
                continue;
            }
            let (a0, a1) = (self.amps[i], self.amps[i | m]);
            match p {
                Pauli::X => {
                    self.amps[i] = a1;
                    self.amps[i | m] = a0;
                }
                Pauli::Y => {
                    self.amps[i] = -i_unit * a1;
                    self.amps[i | m] = i_unit * a0;
                }
                Pauli::Z => self.amps[i | m] = -a1,
            }
        }
    }

    /// Born-rule distribution over basis states.
    pub fn probabilities(&self) -> ProbDist {
        let p = self.amps.iter().map(|a| a.norm_sqr()).collect();
        ProbDist::from_raw(self.n, p)
    }
}

/// Returns `gate · state`.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// Applies the gates of `circuit` to `input` in order.
pub fn run_circuit(circuit: &Circuit, input: &StateVector) -> Result<StateVector> {
    if circuit.n() != input.n() {
        return Err(Error::DimensionMismatch {
            expected: circuit.n(),
            got: input.n(),
        });
    }
    let mut s = input.clone();
    for g in circuit.gates() {
        s.apply(g)?;
    }
    Ok(s)
}

/// Exact measurement distribution, `p_i = |amp_i|^2`.
pub fn measure_dist(state: &StateVector) -> ProbDist {
    state.probabilities()
}
