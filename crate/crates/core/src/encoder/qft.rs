use std::f64::consts::TAU;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Fourier transform with matrix entries `ω^{jk}/√N`, `ω = e^{2πi/N}`.
///
/// Hadamard and controlled-phase cascade per qubit, then a swap network for
/// the bit reversal. `inverse` gives the adjoint.
pub fn build_qft(n: usize, inverse: bool) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidWidth {
            got: 0,
            reason: "a circuit needs at least one qubit",
        });
    }
    let mut circuit = Circuit::new(n);
    for q in 0..n {
        circuit.push(Gate::h(q));
        for k in q + 1..n {
            circuit.push(Gate::cphase(k, q, TAU / (1u64 << (k - q + 1)) as f64));
        }
    }
    for q in 0..n / 2 {
        circuit.push(Gate::swap(q, n - 1 - q));
    }
    Ok(if inverse { circuit.inverse() } else { circuit })
}
