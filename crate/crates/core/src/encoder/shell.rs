use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// The two CNOT ladders controlled by qubit 0, one CNOT per target
/// `1..n`. Sandwiching a diagonal payload on qubits `1..n` between them
/// reflects the payload into the lower half of the diagonal:
/// `d[N-1-i] = d[i]`.
pub fn build_qpa_shell(n: usize) -> Result<(Circuit, Circuit)> {
    if n < 2 {
        return Err(Error::InvalidWidth {
            got: n,
            reason: "the pyramid needs at least two qubits",
        });
    }
    let ladder = Circuit::with_gates(n, (1..n).map(|k| Gate::cx(0, k)).collect());
    Ok((ladder.clone(), ladder))
}

/// `left ∘ payload ∘ right`, keeping the payload's global phase.
pub fn wrap_in_shell(payload: &Circuit) -> Result<Circuit> {
    let n = payload.n_qubits();
    let (left, right) = build_qpa_shell(n)?;
    if let Some(g) = payload.gates().iter().find(|g| g.qubits.contains(&0)) {
        return Err(Error::InvalidParameter(format!(
            "payload gate {:?} touches the ladder control qubit",
            g.kind
        )));
    }
    let mut circuit = left;
    circuit.append(payload)?.append(&right)?;
    Ok(circuit)
}
