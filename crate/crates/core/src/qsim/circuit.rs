use std::fmt;

use serde::{Deserialize, Serialize};

use super::gate::Gate;
use crate::error::{Error, Result};

/// An ordered gate sequence over `n` qubits.
///
/// Every gate is validated against `n` on insertion, so a `Circuit` value is
/// always well-formed. The JSON form is `{"n": .., "gates": [..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircuitRecord")]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitRecord {
    n: usize,
    gates: Vec<Gate>,
}

impl TryFrom<CircuitRecord> for Circuit {
    type Error = Error;

    fn try_from(r: CircuitRecord) -> Result<Self> {
        Circuit::from_gates(r.n, r.gates)
    }
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit {
            n,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.validate(n)?;
        }
        Ok(Circuit { n, gates })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Builder-style [`push`](Self::push).
    pub fn with(mut self, gate: Gate) -> Result<Self> {
        self.push(gate)?;
        Ok(self)
    }

    /// `self` followed by `other`. Both must have the same width.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        Ok(Circuit { n: self.n, gates })
    }

    /// Appends `sub` acting on qubits `offset..offset + sub.n()`.
    pub fn append_at(&mut self, sub: &Circuit, offset: usize) -> Result<()> {
        if offset + sub.n > self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: offset + sub.n,
            });
        }
        self.gates
            .extend(sub.gates.iter().map(|g| g.shifted(offset)));
        Ok(())
    }

    /// The same circuit with every `ControlledPhase` and `Swap` expanded.
    pub fn decomposed(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().flat_map(Gate::decompose).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Circuit> {
        serde_json::from_str(s).map_err(|e| Error::CircuitFormat(e.to_string()))
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}q]", self.n)?;
        for g in &self.gates {
            write!(f, " {g}")?;
        }
        Ok(())
    }
}
