use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The phase angles the distiller may place: `-2π/2^k` for `k = 1..=4`.
pub const DISTILLER_PHASES: [f64; 4] = [-PI, -PI / 2.0, -PI / 4.0, -PI / 8.0];

/// Gate family, without operands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    Hadamard,
    Not,
    PhaseShift,
    CNot,
    Swap,
    ControlledPhase,
}

impl GateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GateKind::Hadamard => "hadamard",
            GateKind::Not => "not",
            GateKind::PhaseShift => "phase_shift",
            GateKind::CNot => "cnot",
            GateKind::Swap => "swap",
            GateKind::ControlledPhase => "controlled_phase",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Hadamard | GateKind::Not | GateKind::PhaseShift => 1,
            GateKind::CNot | GateKind::Swap | GateKind::ControlledPhase => 2,
        }
    }
}

/// A gate with its operands. Two-qubit gates list the control first.
///
/// `PhaseShift` multiplies the `|1>` component by `e^{i angle}`;
/// `ControlledPhase` does the same for `|11>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GateRecord", into = "GateRecord")]
pub enum Gate {
    Hadamard(usize),
    Not(usize),
    PhaseShift { qubit: usize, angle: f64 },
    CNot { control: usize, target: usize },
    Swap(usize, usize),
    ControlledPhase { control: usize, target: usize, angle: f64 },
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Hadamard(_) => GateKind::Hadamard,
            Gate::Not(_) => GateKind::Not,
            Gate::PhaseShift { .. } => GateKind::PhaseShift,
            Gate::CNot { .. } => GateKind::CNot,
            Gate::Swap(..) => GateKind::Swap,
            Gate::ControlledPhase { .. } => GateKind::ControlledPhase,
        }
    }

    /// Operand qubits, control first.
    pub fn qubits(&self) -> Vec<usize> {
        let (ids, len) = self.operands();
        ids[..len].to_vec()
    }

    pub(crate) fn operands(&self) -> ([usize; 2], usize) {
        match *self {
            Gate::Hadamard(q) | Gate::Not(q) | Gate::PhaseShift { qubit: q, .. } => ([q, 0], 1),
            Gate::CNot { control, target } | Gate::ControlledPhase { control, target, .. } => {
                ([control, target], 2)
            }
            Gate::Swap(a, b) => ([a, b], 2),
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::PhaseShift { angle, .. } | Gate::ControlledPhase { angle, .. } => Some(angle),
            _ => None,
        }
    }

    /// Checks operand distinctness and range against an `n`-qubit register.
    pub fn validate(&self, n: usize) -> Result<()> {
        let (ids, len) = self.operands();
        for &q in &ids[..len] {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
        }
        if len == 2 && ids[0] == ids[1] {
            return Err(Error::RepeatedQubit(ids[0]));
        }
        Ok(())
    }

    /// Same gate with every operand moved by `offset`.
    pub fn shifted(&self, offset: usize) -> Gate {
        match *self {
            Gate::Hadamard(q) => Gate::Hadamard(q + offset),
            Gate::Not(q) => Gate::Not(q + offset),
            Gate::PhaseShift { qubit, angle } => Gate::PhaseShift {
                qubit: qubit + offset,
                angle,
            },
            Gate::CNot { control, target } => Gate::CNot {
                control: control + offset,
                target: target + offset,
            },
            Gate::Swap(a, b) => Gate::Swap(a + offset, b + offset),
            Gate::ControlledPhase {
                control,
                target,
                angle,
            } => Gate::ControlledPhase {
                control: control + offset,
                target: target + offset,
                angle,
            },
        }
    }

    /// Expansion into `{Hadamard, Not, PhaseShift, CNot}`.
    ///
    /// `ControlledPhase(θ)` becomes `P(c, θ/2) · CX · P(t, -θ/2) · CX · P(t, θ/2)` and
    /// `Swap` becomes three alternating CNOTs. Other gates are returned unchanged.
    pub fn decompose(&self) -> Vec<Gate> {
        match *self {
            Gate::ControlledPhase {
                control,
                target,
                angle,
            } => vec![
                Gate::PhaseShift {
                    qubit: control,
                    angle: angle / 2.0,
                },
                Gate::CNot { control, target },
                Gate::PhaseShift {
                    qubit: target,
                    angle: -angle / 2.0,
                },
                Gate::CNot { control, target },
                Gate::PhaseShift {
                    qubit: target,
                    angle: angle / 2.0,
                },
            ],
            Gate::Swap(a, b) => vec![
                Gate::CNot {
                    control: a,
                    target: b,
                },
                Gate::CNot {
                    control: b,
                    target: a,
                },
                Gate::CNot {
                    control: a,
                    target: b,
                },
            ],
            g => vec![g],
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Hadamard(q) => write!(f, "H({q})"),
            Gate::Not(q) => write!(f, "X({q})"),
            Gate::PhaseShift { qubit, angle } => write!(f, "P({qubit}, {angle:.6})"),
            Gate::CNot { control, target } => write!(f, "CX({control}->{target})"),
            Gate::Swap(a, b) => write!(f, "SWAP({a}, {b})"),
            Gate::ControlledPhase {
                control,
                target,
                angle,
            } => write!(f, "CP({control}->{target}, {angle:.6})"),
        }
    }
}

/// On-disk shape of a gate: `{"kind": ..., "qubits": [...], "angle": ...}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct GateRecord {
    kind: GateKind,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
}

impl From<Gate> for GateRecord {
    fn from(g: Gate) -> Self {
        GateRecord {
            kind: g.kind(),
            qubits: g.qubits(),
            angle: g.angle(),
        }
    }
}

impl TryFrom<GateRecord> for Gate {
    type Error = String;

    fn try_from(r: GateRecord) -> std::result::Result<Self, Self::Error> {
        let kind = r.kind;
        if r.qubits.len() != kind.arity() {
            return Err(format!(
                "{} takes {} qubit(s), got {}",
                kind.as_str(),
                kind.arity(),
                r.qubits.len()
            ));
        }
        let needs_angle = matches!(kind, GateKind::PhaseShift | GateKind::ControlledPhase);
        let angle = match (needs_angle, r.angle) {
            (true, Some(a)) if a.is_finite() => a,
            (true, Some(_)) => return Err(format!("{} angle must be finite", kind.as_str())),
            (true, None) => return Err(format!("{} requires an angle", kind.as_str())),
            (false, Some(_)) => return Err(format!("{} takes no angle", kind.as_str())),
            (false, None) => 0.0,
        };
        let q = &r.qubits;
        Ok(match kind {
            GateKind::Hadamard => Gate::Hadamard(q[0]),
            GateKind::Not => Gate::Not(q[0]),
            GateKind::PhaseShift => Gate::PhaseShift { qubit: q[0], angle },
            GateKind::CNot => Gate::CNot {
                control: q[0],
                target: q[1],
            },
            GateKind::Swap => Gate::Swap(q[0], q[1]),
            GateKind::ControlledPhase => Gate::ControlledPhase {
                control: q[0],
                target: q[1],
                angle,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_rejects_bad_operands() {
        assert!(Gate::Hadamard(2).validate(3).is_ok());
        assert!(matches!(
            Gate::Hadamard(3).validate(3),
            Err(Error::QubitOutOfRange { qubit: 3, n: 3 })
        ));
        assert!(matches!(
            Gate::CNot {
                control: 1,
                target: 1
            }
            .validate(3),
            Err(Error::RepeatedQubit(1))
        ));
    }

    #[test]
    fn record_requires_angle_for_phase() {
        let json = r#"{"kind":"phase_shift","qubits":[0]}"#;
        assert!(serde_json::from_str::<Gate>(json).is_err());
        let json = r#"{"kind":"hadamard","qubits":[0],"angle":1.0}"#;
        assert!(serde_json::from_str::<Gate>(json).is_err());
        let json = r#"{"kind":"cnot","qubits":[0]}"#;
        assert!(serde_json::from_str::<Gate>(json).is_err());
    }

    #[test]
    fn decomposition_sizes() {
        let cp = Gate::ControlledPhase {
            control: 0,
            target: 1,
            angle: -PI / 2.0,
        };
        assert_eq!(cp.decompose().len(), 5);
        assert_eq!(Gate::Swap(0, 2).decompose().len(), 3);
        assert_eq!(Gate::Hadamard(0).decompose(), vec![Gate::Hadamard(0)]);
    }
}
