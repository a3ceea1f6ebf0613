use super::wrap_angle;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::grid::{Extent, PhaseProfile};

/// Degree-two multilinear encoding over all `n` qubits, with no reflection
/// shell: one phase per qubit and one controlled phase per pair. Exact when
/// `θ` is quadratic in the full index.
pub fn build_direct_diagonal(n: usize, theta_full: &PhaseProfile) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidWidth {
            got: 0,
            reason: "a circuit needs at least one qubit",
        });
    }
    if theta_full.extent() != Extent::Full || theta_full.len() != 1 << n {
        return Err(Error::ProfileLength {
            expected: 1 << n,
            got: theta_full.len(),
        });
    }
    let theta = theta_full.theta();
    let weight = |q: usize| 1usize << (n - 1 - q);
    let a0 = theta[0];
    let alpha: Vec<f64> = (0..n).map(|q| theta[weight(q)] - a0).collect();
    let mut circuit = Circuit::new(n);
    for (q, a) in alpha.iter().enumerate() {
        circuit.push(Gate::phase(q, -wrap_angle(*a)));
    }
    for k in 0..n {
        for l in k + 1..n {
            let beta = theta[weight(k) + weight(l)] - alpha[k] - alpha[l] - a0;
            circuit.push(Gate::cphase(k, l, -wrap_angle(beta)));
        }
    }
    circuit.set_global_phase(-wrap_angle(a0));
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::count_gates;
    use crate::grid::{kinetic_phase_profile, Grid};
    use crate::statevector::extract_diagonal;
    use num_complex::Complex64;

    fn max_error(c: &Circuit, theta: &[f64]) -> f64 {
        extract_diagonal(c)
            .unwrap()
            .iter()
            .zip(theta)
            .map(|(z, &t)| (z - Complex64::from_polar(1.0, -t)).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn quadratic_two_qubits() {
        let p = PhaseProfile::full(vec![0.0, 0.1, 0.4, 0.9]).unwrap();
        assert!(max_error(&build_direct_diagonal(2, &p).unwrap(), p.theta()) < 1e-14);
    }

    #[test]
    fn constant_is_global_phase() {
        let p = PhaseProfile::full(vec![1.3; 8]).unwrap();
        let c = build_direct_diagonal(3, &p).unwrap();
        assert!(c.gates().iter().all(|g| g.angle_or_zero() == 0.0));
        assert!((c.global_phase() + 1.3).abs() < 1e-15);
    }

    #[test]
    fn kinetic_three_qubits() {
        let grid = Grid::new(10.0, 3).unwrap();
        let k = kinetic_phase_profile(&grid, 0.1, 1.0).unwrap();
        let c = build_direct_diagonal(3, &k).unwrap();
        assert!(max_error(&c, k.theta()) < 1e-12);
        let m = count_gates(&c).unwrap();
        assert_eq!((m.one_qubit_count, m.two_qubit_count), (3, 3));
    }

    #[test]
    fn wrong_length() {
        let p = PhaseProfile::full(vec![0.0; 4]).unwrap();
        assert!(build_direct_diagonal(3, &p).is_err());
    }
}
