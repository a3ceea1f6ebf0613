//! Circuit builders for diagonal phase operators, step potentials and the
//! Fourier transform.

mod direct;
mod potential;
mod qate;
mod qft;
mod qwe;
mod shell;

pub use direct::build_direct_diagonal;
pub use potential::build_potential_circuit;
pub use qate::{build_qate_circuit, encode_qate, solve_qate, PairAngle, QateCoefficients};
pub use qft::build_qft;
pub use qwe::{build_qwe_circuit, WindowSpec};
pub use shell::{build_qpa_shell, wrap_in_shell};

use std::f64::consts::{PI, TAU};

use crate::circuit::{Circuit, Gate};

/// Reduces an angle into `(-π, π]`.
pub fn wrap_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// `diag(e^{i·slope·k})` as one phase gate per qubit.
pub fn build_phase_ramp(n: usize, slope: f64) -> Circuit {
    let gates = (0..n)
        .map(|q| Gate::phase(q, wrap_angle(slope * (1u64 << (n - 1 - q)) as f64)))
        .collect();
    Circuit::with_gates(n, gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::extract_diagonal;
    use num_complex::Complex64;

    #[test]
    fn wrap_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_angle(0.0), 0.0);
        for k in -20..20 {
            let a = 0.37 * k as f64;
            let w = wrap_angle(a);
            assert!(w > -PI && w <= PI);
            assert!(((a - w) / TAU - ((a - w) / TAU).round()).abs() < 1e-12);
        }
    }

    #[test]
    fn ramp_is_linear() {
        let slope = 0.913;
        let d = extract_diagonal(&build_phase_ramp(4, slope)).unwrap();
        for (k, z) in d.iter().enumerate() {
            let want = Complex64::from_polar(1.0, slope * k as f64);
            assert!((z - want).norm() < 1e-12);
        }
    }
}
