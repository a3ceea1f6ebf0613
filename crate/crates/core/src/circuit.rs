//! Circuit intermediate representation and structural metrics.
//!
//! A [`Circuit`] is an ordered list of [`Gate`]s over a fixed register plus a
//! global phase. Gates name their qubits control-first. The global phase is a
//! field, not a gate, so it never contributes to counts or depth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The gate set understood by the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    PauliX,
    Hadamard,
    /// `diag(1, e^{iφ})`.
    Phase,
    /// `diag(1, 1, 1, e^{iφ})`; symmetric in its two qubits.
    ControlledPhase,
    ControlledNot,
    Swap,
    ControlledSwap,
    /// `diag(e^{-iλ/2}, e^{iλ/2})`.
    RotationZ,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::PauliX | GateKind::Hadamard | GateKind::Phase | GateKind::RotationZ => 1,
            GateKind::ControlledPhase | GateKind::ControlledNot | GateKind::Swap => 2,
            GateKind::ControlledSwap => 3,
        }
    }

    pub fn takes_angle(self) -> bool {
        matches!(
            self,
            GateKind::Phase | GateKind::ControlledPhase | GateKind::RotationZ
        )
    }

    /// Diagonal in the computational basis.
    pub fn is_diagonal(self) -> bool {
        self.takes_angle()
    }

    /// Maps every basis state to a single basis state times a phase.
    pub fn is_monomial(self) -> bool {
        !matches!(self, GateKind::Hadamard)
    }

    pub fn is_self_inverse(self) -> bool {
        !self.takes_angle()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

impl Gate {
    fn fixed(kind: GateKind, qubits: Vec<usize>) -> Self {
        Gate {
            kind,
            qubits,
            angle: None,
        }
    }

    fn rotation(kind: GateKind, qubits: Vec<usize>, angle: f64) -> Self {
        Gate {
            kind,
            qubits,
            angle: Some(angle),
        }
    }

    pub fn x(q: usize) -> Self {
        Self::fixed(GateKind::PauliX, vec![q])
    }

    pub fn h(q: usize) -> Self {
        Self::fixed(GateKind::Hadamard, vec![q])
    }

    pub fn phase(q: usize, angle: f64) -> Self {
        Self::rotation(GateKind::Phase, vec![q], angle)
    }

    pub fn cphase(control: usize, target: usize, angle: f64) -> Self {
        Self::rotation(GateKind::ControlledPhase, vec![control, target], angle)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::fixed(GateKind::ControlledNot, vec![control, target])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::fixed(GateKind::Swap, vec![a, b])
    }

    pub fn cswap(control: usize, a: usize, b: usize) -> Self {
        Self::fixed(GateKind::ControlledSwap, vec![control, a, b])
    }

    pub fn rz(q: usize, angle: f64) -> Self {
        Self::rotation(GateKind::RotationZ, vec![q], angle)
    }

    /// Angle of a parameterized gate, zero for fixed gates.
    pub fn angle_or_zero(&self) -> f64 {
        self.angle.unwrap_or(0.0)
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        let expected = self.kind.arity();
        if self.qubits.len() != expected {
            return Err(Error::ArityMismatch {
                kind: self.kind,
                expected,
                got: self.qubits.len(),
            });
        }
        for (i, &q) in self.qubits.iter().enumerate() {
            if q >= width {
                return Err(Error::IndexOutOfRange { qubit: q, width });
            }
            if self.qubits[..i].contains(&q) {
                return Err(Error::DuplicateQubit {
                    kind: self.kind,
                    qubit: q,
                });
            }
        }
        match (self.kind.takes_angle(), self.angle) {
            (true, None) => Err(Error::MissingAngle { kind: self.kind }),
            (false, Some(_)) => Err(Error::UnexpectedAngle { kind: self.kind }),
            (true, Some(a)) if !a.is_finite() => Err(Error::NonFiniteAngle("gate angle")),
            _ => Ok(()),
        }
    }

    pub fn inverse(&self) -> Self {
        Gate {
            kind: self.kind,
            qubits: self.qubits.clone(),
            angle: self.angle.map(|a| -a),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    global_phase: f64,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            global_phase: 0.0,
            gates: Vec::new(),
        }
    }

    pub fn with_gates(n_qubits: usize, gates: Vec<Gate>) -> Self {
        Circuit {
            n_qubits,
            global_phase: 0.0,
            gates,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn set_global_phase(&mut self, phase: f64) {
        self.global_phase = phase;
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends `other` after `self`; global phases add.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::WidthMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        self.global_phase += other.global_phase;
        Ok(self)
    }

    /// The adjoint circuit: reversed order, negated angles and global phase.
    pub fn inverse(&self) -> Self {
        Circuit {
            n_qubits: self.n_qubits,
            global_phase: -self.global_phase,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn is_diagonal_by_construction(&self) -> bool {
        self.gates.iter().all(|g| g.kind.is_diagonal())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(Error::InvalidWidth {
                got: 0,
                reason: "a circuit needs at least one qubit",
            });
        }
        if !self.global_phase.is_finite() {
            return Err(Error::NonFiniteAngle("global phase"));
        }
        self.gates
            .iter()
            .try_for_each(|g| g.validate(self.n_qubits))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    /// Parses and validates a circuit.
    pub fn from_json(text: &str) -> Result<Self> {
        let circuit: Circuit =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        circuit.validate()?;
        Ok(circuit)
    }
}

/// Gate counts by arity plus ASAP depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GateMetrics {
    pub one_qubit_count: usize,
    pub two_qubit_count: usize,
    pub three_qubit_count: usize,
    pub total: usize,
    pub depth: usize,
}

/// Counts gates by arity and computes depth by greedy ASAP layering: each
/// gate lands one layer after the latest layer touching any of its qubits.
pub fn count_gates(circuit: &Circuit) -> Result<GateMetrics> {
    circuit.validate()?;
    let mut metrics = GateMetrics::default();
    let mut frontier = vec![0usize; circuit.n_qubits()];
    for gate in circuit.gates() {
        match gate.kind.arity() {
            1 => metrics.one_qubit_count += 1,
            2 => metrics.two_qubit_count += 1,
            _ => metrics.three_qubit_count += 1,
        }
        let layer = gate.qubits.iter().map(|&q| frontier[q]).max().unwrap_or(0) + 1;
        for &q in &gate.qubits {
            frontier[q] = layer;
        }
        metrics.depth = metrics.depth.max(layer);
    }
    metrics.total = metrics.one_qubit_count + metrics.two_qubit_count + metrics.three_qubit_count;
    Ok(metrics)
}

pub(crate) fn binomial2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Predicted counts for a QATE circuit on `n` qubits: `n-1` phase gates,
/// `C(n-1, 2)` controlled phases and `2(n-1)` CNOTs from the two ladders.
/// Depth is not predicted and left at zero.
pub fn qate_gate_count(n: usize) -> Result<GateMetrics> {
    if n < 2 {
        return Err(Error::InvalidWidth {
            got: n,
            reason: "the pyramid needs at least two qubits",
        });
    }
    let one = n - 1;
    let two = binomial2(n - 1) + 2 * (n - 1);
    Ok(GateMetrics {
        one_qubit_count: one,
        two_qubit_count: two,
        three_qubit_count: 0,
        total: one + two,
        depth: 0,
    })
}

/// Total gate count `3n + C(n, 2)` of the reference direct implementation.
pub fn baseline_gate_count(n: usize) -> usize {
    3 * n + binomial2(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_accepts_well_formed_cnot() {
        Circuit::with_gates(2, vec![Gate::cx(0, 1)])
            .validate()
            .unwrap();
    }

    #[test]
    fn validate_rejects_out_of_range() {
        let err = Circuit::with_gates(2, vec![Gate::phase(5, 0.1)])
            .validate()
            .unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { qubit: 5, width: 2 }));
    }

    #[test]
    fn validate_rejects_duplicate_qubits() {
        let err = Circuit::with_gates(2, vec![Gate::cx(1, 1)])
            .validate()
            .unwrap_err();
        assert!(matches!(err, Error::DuplicateQubit { qubit: 1, .. }));
    }

    #[test]
    fn validate_rejects_arity_and_angle_errors() {
        let bad_arity = Gate {
            kind: GateKind::ControlledSwap,
            qubits: vec![0, 1],
            angle: None,
        };
        assert!(matches!(
            bad_arity.validate(3),
            Err(Error::ArityMismatch {
                expected: 3,
                got: 2,
                ..
            })
        ));
        let no_angle = Gate {
            kind: GateKind::Phase,
            qubits: vec![0],
            angle: None,
        };
        assert!(matches!(
            no_angle.validate(1),
            Err(Error::MissingAngle { .. })
        ));
        let stray = Gate {
            kind: GateKind::Hadamard,
            qubits: vec![0],
            angle: Some(1.0),
        };
        assert!(matches!(
            stray.validate(1),
            Err(Error::UnexpectedAngle { .. })
        ));
        assert!(Gate::phase(0, f64::NAN).validate(1).is_err());
        let mut c = Circuit::new(1);
        c.set_global_phase(f64::INFINITY);
        assert!(c.validate().is_err());
        assert!(Circuit::new(0).validate().is_err());
    }

    #[test]
    fn single_phase_metrics() {
        let m = count_gates(&Circuit::with_gates(1, vec![Gate::phase(0, 0.3)])).unwrap();
        assert_eq!(
            (m.one_qubit_count, m.two_qubit_count, m.three_qubit_count),
            (1, 0, 0)
        );
        assert_eq!(m.depth, 1);
        assert_eq!(m.total, 1);
    }

    #[test]
    fn disjoint_gates_share_a_layer() {
        let c = Circuit::with_gates(2, vec![Gate::phase(0, 0.1), Gate::phase(1, 0.2)]);
        assert_eq!(count_gates(&c).unwrap().depth, 1);
    }

    #[test]
    fn dependent_gates_serialize() {
        let c = Circuit::with_gates(2, vec![Gate::cx(0, 1), Gate::phase(1, 0.2)]);
        assert_eq!(count_gates(&c).unwrap().depth, 2);
    }

    #[test]
    fn depth_counts_three_qubit_gates() {
        let c = Circuit::with_gates(
            4,
            vec![Gate::cswap(0, 1, 2), Gate::h(3), Gate::cx(2, 3), Gate::h(0)],
        );
        let m = count_gates(&c).unwrap();
        assert_eq!(m.three_qubit_count, 1);
        assert_eq!(m.total, 4);
        assert_eq!(m.depth, 2);
    }

    #[test]
    fn count_gates_propagates_validation() {
        let c = Circuit::with_gates(1, vec![Gate::cx(0, 1)]);
        assert!(count_gates(&c).is_err());
    }

    #[test]
    fn qate_prediction_examples() {
        let m4 = qate_gate_count(4).unwrap();
        assert_eq!(
            (m4.one_qubit_count, m4.two_qubit_count, m4.total),
            (3, 9, 12)
        );
        let m5 = qate_gate_count(5).unwrap();
        assert_eq!(
            (m5.one_qubit_count, m5.two_qubit_count, m5.total),
            (4, 14, 18)
        );
        let m2 = qate_gate_count(2).unwrap();
        assert_eq!(
            (m2.one_qubit_count, m2.two_qubit_count, m2.total),
            (1, 2, 3)
        );
        assert!(matches!(
            qate_gate_count(1),
            Err(Error::InvalidWidth { .. })
        ));
    }

    #[test]
    fn baseline_examples() {
        assert_eq!(baseline_gate_count(4), 18);
        assert_eq!(baseline_gate_count(1), 3);
        assert_eq!(baseline_gate_count(9), 63);
    }

    #[test]
    fn inverse_reverses_and_negates() {
        let mut c = Circuit::with_gates(2, vec![Gate::h(0), Gate::cphase(0, 1, 0.4)]);
        c.set_global_phase(0.25);
        let inv = c.inverse();
        assert_eq!(inv.gates()[0], Gate::cphase(0, 1, -0.4));
        assert_eq!(inv.gates()[1], Gate::h(0));
        assert_eq!(inv.global_phase(), -0.25);
    }

    #[test]
    fn json_layout_matches_interchange_format() {
        let mut c = Circuit::with_gates(
            2,
            vec![Gate::h(0), Gate::cphase(0, 1, 0.123_456_789_012_345_68)],
        );
        c.set_global_phase(-1.5);
        let json = c.to_json().unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["n_qubits"], 2);
        assert_eq!(value["global_phase"], -1.5);
        assert_eq!(value["gates"][0]["kind"], "Hadamard");
        assert!(value["gates"][0].get("angle").is_none());
        assert_eq!(value["gates"][1]["kind"], "ControlledPhase");
        assert_eq!(value["gates"][1]["qubits"], serde_json::json!([0, 1]));
        let back = Circuit::from_json(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn from_json_validates() {
        let text =
            r#"{"n_qubits": 2, "global_phase": 0.0, "gates": [{"kind": "PauliX", "qubits": [3]}]}"#;
        assert!(matches!(
            Circuit::from_json(text),
            Err(Error::IndexOutOfRange { .. })
        ));
    }
}
