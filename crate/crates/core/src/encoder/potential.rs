use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::grid::{PotentialKind, PotentialSpec};

/// `e^{-iηZ_q Δt/r}` on each of the spec's qubits.
///
/// With `RZ(λ) = diag(e^{-iλ/2}, e^{iλ/2})` this is `RZ(2ηΔt/r)`, so on
/// cell `k` the phase is `e^{-iV_k Δt/r}` with `V_k = η Σ_q (1 - 2b_q(k))`.
pub fn build_potential_circuit(n: usize, spec: &PotentialSpec, dt: f64, r: u32) -> Result<Circuit> {
    if r != 1 && r != 2 {
        return Err(Error::InvalidParameter(format!(
            "split factor must be 1 or 2, got {r}"
        )));
    }
    if !dt.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "time step {dt} is not finite"
        )));
    }
    let mut circuit = Circuit::new(n);
    if spec.kind == PotentialKind::None {
        return Ok(circuit);
    }
    if spec.qubits.is_empty() {
        return Err(Error::InvalidPotential(
            "potential has no qubit positions and cannot be built as a circuit".into(),
        ));
    }
    let angle = 2.0 * spec.eta * dt / r as f64;
    for &q in &spec.qubits {
        if q >= n {
            return Err(Error::IndexOutOfRange { qubit: q, width: n });
        }
        circuit.push(Gate::rz(q, angle));
    }
    circuit.validate()?;
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{potential_profile, Grid};
    use crate::statevector::extract_diagonal;
    use num_complex::Complex64;

    #[test]
    fn single_step_on_two_qubits() {
        let grid = Grid::new(10.0, 2).unwrap();
        let (eta, dt) = (0.8, 0.3);
        for r in [1, 2] {
            let spec = PotentialSpec::standard(PotentialKind::SingleStep, eta, &grid).unwrap();
            let d = extract_diagonal(&build_potential_circuit(2, &spec, dt, r).unwrap()).unwrap();
            let a = eta * dt / r as f64;
            let want = [-a, -a, a, a];
            for (z, w) in d.iter().zip(want) {
                assert!((z - Complex64::from_polar(1.0, w)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn circuit_matches_profile() {
        let grid = Grid::new(5.0, 4).unwrap();
        let spec = PotentialSpec::from_qubits(PotentialKind::MultiStep, 0.6, vec![0, 2, 3], &grid)
            .unwrap();
        let v = potential_profile(&grid, &spec).unwrap();
        let d = extract_diagonal(&build_potential_circuit(4, &spec, 0.25, 2).unwrap()).unwrap();
        for (z, v) in d.iter().zip(v) {
            assert!((z - Complex64::from_polar(1.0, -v * 0.125)).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_eta_and_none() {
        let grid = Grid::new(10.0, 3).unwrap();
        let flat = PotentialSpec::standard(PotentialKind::SingleStep, 0.0, &grid).unwrap();
        let d = extract_diagonal(&build_potential_circuit(3, &flat, 0.1, 2).unwrap()).unwrap();
        assert!(d.iter().all(|z| (z - 1.0).norm() < 1e-15));
        assert!(build_potential_circuit(3, &PotentialSpec::none(), 0.1, 2)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn invalid_inputs() {
        let grid = Grid::new(10.0, 3).unwrap();
        let spec = PotentialSpec::standard(PotentialKind::MultiStep, 1.0, &grid).unwrap();
        assert!(build_potential_circuit(2, &spec, 0.1, 2).is_err());
        assert!(build_potential_circuit(3, &spec, 0.1, 3).is_err());
        let oracle_only =
            PotentialSpec::piecewise(PotentialKind::SingleStep, vec![0.0], vec![0.0, 1.0]).unwrap();
        assert!(build_potential_circuit(3, &oracle_only, 0.1, 2).is_err());
    }
}
