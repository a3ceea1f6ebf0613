//! Swap-test fidelity estimation and the closed-form error budget.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::statevector::{fidelity_exact, run, RandomSource, StateVector};

/// Widest register pair the swap test will simulate (joint width `2n + 1`).
pub const MAX_SWAP_REGISTER: usize = 11;

/// Ancilla on qubit 0, first register on `1..=n`, second on `n+1..=2n`.
pub fn swap_test_circuit(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidWidth {
            got: 0,
            reason: "swap test registers need at least one qubit",
        });
    }
    let mut circuit = Circuit::new(2 * n + 1);
    circuit.push(Gate::h(0));
    for k in 0..n {
        circuit.push(Gate::cswap(0, 1 + k, 1 + n + k));
    }
    circuit.push(Gate::h(0));
    Ok(circuit)
}

/// Runs the swap test on `|0⟩⊗a⊗b` and returns the ancilla's `Pr(0)`.
pub fn swap_test_probability_zero(a: &StateVector, b: &StateVector) -> Result<f64> {
    let n = a.n_qubits();
    if b.n_qubits() != n {
        return Err(Error::WidthMismatch {
            expected: n,
            got: b.n_qubits(),
        });
    }
    if n > MAX_SWAP_REGISTER {
        return Err(Error::WidthTooLarge {
            n,
            limit: MAX_SWAP_REGISTER,
        });
    }
    let joint = StateVector::zero(1).tensor(a).tensor(b);
    let out = run(&swap_test_circuit(n)?, &joint)?;
    let half = out.len() / 2;
    let p0: f64 = out.amplitudes()[..half].iter().map(|z| z.norm_sqr()).sum();
    Ok(p0.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub exact: f64,
    /// `2·Pr̂(0) - 1`, clamped to `[0, 1]`.
    pub estimated: f64,
    pub shots: u64,
    /// Binomial standard error of `Pr̂(0)`, scaled by two to match `estimated`.
    pub std_error: f64,
}

/// Samples the swap-test ancilla `shots` times.
pub fn swap_test_estimate(
    a: &StateVector,
    b: &StateVector,
    shots: u64,
    rng: &mut RandomSource,
) -> Result<FidelityReport> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let p0 = swap_test_probability_zero(a, b)?;
    let zeros = (0..shots).filter(|_| rng.next_f64() < p0).count() as u64;
    let p_hat = zeros as f64 / shots as f64;
    Ok(FidelityReport {
        exact: fidelity_exact(a, b)?,
        estimated: (2.0 * p_hat - 1.0).clamp(0.0, 1.0),
        shots,
        std_error: 2.0 * (p_hat * (1.0 - p_hat) / shots as f64).sqrt(),
    })
}

/// Inputs of `h³ + L₂σ_g² + Δt(T₁+T₂)/(T₁T₂) + σ_cr²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudgetParams {
    pub h: f64,
    /// Two-qubit gate count.
    pub l2: usize,
    pub sigma_g2: f64,
    pub t1: f64,
    pub t2: f64,
    pub dt: f64,
    pub sigma_cr2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub discretization: f64,
    pub gate: f64,
    pub decoherence: f64,
    pub readout: f64,
    pub total: f64,
}

/// Evaluates the budget with all asymptotic constants set to one.
pub fn error_budget(params: &ErrorBudgetParams) -> Result<ErrorBudget> {
    let p = params;
    let positive = |name: &str, v: f64| {
        if v.is_finite() && v > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "{name} must be positive, got {v}"
            )))
        }
    };
    let nonnegative = |name: &str, v: f64| {
        if v.is_finite() && v >= 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "{name} must be nonnegative, got {v}"
            )))
        }
    };
    positive("h", p.h)?;
    positive("T1", p.t1)?;
    positive("T2", p.t2)?;
    nonnegative("sigma_g2", p.sigma_g2)?;
    nonnegative("sigma_cr2", p.sigma_cr2)?;
    nonnegative("dt", p.dt)?;
    let discretization = p.h.powi(3);
    let gate = p.l2 as f64 * p.sigma_g2;
    let decoherence = p.dt * (p.t1 + p.t2) / (p.t1 * p.t2);
    let readout = p.sigma_cr2;
    Ok(ErrorBudget {
        discretization,
        gate,
        decoherence,
        readout,
        total: discretization + gate + decoherence + readout,
    })
}
