//! Dense statevector simulation.
//!
//! Qubit 0 is the most significant bit of a basis index, so for `n` qubits
//! qubit `q` owns the bit `1 << (n - 1 - q)`. With this ordering a gate on
//! qubit `q` corresponds to the Kronecker product `I ⊗ .. ⊗ G ⊗ .. ⊗ I` with
//! `G` in position `q`.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

/// Largest register for which [`extract_unitary`] materializes a matrix.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Allowed deviation of a state's norm from one.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Off-diagonal magnitude above which a circuit counts as non-diagonal.
pub const DIAGONAL_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
fn bit(n_qubits: usize, qubit: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros basis state.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[index] = ONE;
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    /// Wraps amplitudes that are already normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = width_of(amplitudes.len())?;
        let state = StateVector {
            n_qubits,
            amplitudes,
        };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Scales arbitrary amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = width_of(amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized(norm));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Kronecker product `self ⊗ other`; `self` occupies the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amplitudes = Vec::with_capacity(self.len() * other.len());
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes,
        }
    }

    /// Multiplies every amplitude by `e^{iφ}`.
    pub fn rotate_phase(&mut self, phase: f64) {
        if phase != 0.0 {
            let factor = Complex64::from_polar(1.0, phase);
            self.amplitudes.iter_mut().for_each(|a| *a *= factor);
        }
    }

    /// Multiplies amplitude `k` by `e^{-i angles[k]}`.
    pub fn apply_diagonal_phases(&mut self, angles: &[f64]) -> Result<()> {
        if angles.len() != self.len() {
            return Err(Error::ProfileLength {
                expected: self.len(),
                got: angles.len(),
            });
        }
        for (a, &t) in self.amplitudes.iter_mut().zip(angles) {
            *a *= Complex64::from_polar(1.0, -t);
        }
        Ok(())
    }

    /// Applies one gate in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let n = self.n_qubits;
        let q = &gate.qubits;
        let amps = &mut self.amplitudes;
        match gate.kind {
            GateKind::PauliX => {
                let m = bit(n, q[0]);
                for i in 0..amps.len() {
                    if i & m == 0 {
                        amps.swap(i, i | m);
                    }
                }
            }
            GateKind::Hadamard => {
                let m = bit(n, q[0]);
                let s = std::f64::consts::FRAC_1_SQRT_2;
                for i in 0..amps.len() {
                    if i & m == 0 {
                        let (a, b) = (amps[i], amps[i | m]);
                        amps[i] = (a + b) * s;
                        amps[i | m] = (a - b) * s;
                    }
                }
            }
            GateKind::Phase => {
                let m = bit(n, q[0]);
                let f = Complex64::from_polar(1.0, gate.angle_or_zero());
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & m != 0 {
                        *a *= f;
                    }
                }
            }
            GateKind::ControlledPhase => {
                let m = bit(n, q[0]) | bit(n, q[1]);
                let f = Complex64::from_polar(1.0, gate.angle_or_zero());
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & m == m {
                        *a *= f;
                    }
                }
            }
            GateKind::RotationZ => {
                let m = bit(n, q[0]);
                let half = gate.angle_or_zero() / 2.0;
                let (f0, f1) = (
                    Complex64::from_polar(1.0, -half),
                    Complex64::from_polar(1.0, half),
                );
                for (i, a) in amps.iter_mut().enumerate() {
                    *a *= if i & m == 0 { f0 } else { f1 };
                }
            }
            GateKind::ControlledNot => {
                let (c, t) = (bit(n, q[0]), bit(n, q[1]));
                for i in 0..amps.len() {
                    if i & c != 0 && i & t == 0 {
                        amps.swap(i, i | t);
                    }
                }
            }
            GateKind::Swap => {
                let (a, b) = (bit(n, q[0]), bit(n, q[1]));
                for i in 0..amps.len() {
                    if i & a != 0 && i & b == 0 {
                        amps.swap(i, i ^ a ^ b);
                    }
                }
            }
            GateKind::ControlledSwap => {
                let (c, a, b) = (bit(n, q[0]), bit(n, q[1]), bit(n, q[2]));
                for i in 0..amps.len() {
                    if i & c != 0 && i & a != 0 && i & b == 0 {
                        amps.swap(i, i ^ a ^ b);
                    }
                }
            }
        }
        Ok(())
    }
}

fn width_of(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Applies a single gate, returning the new state.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// Runs every gate in order, then applies `e^{i·global_phase}`.
pub fn run(circuit: &Circuit, initial: &StateVector) -> Result<StateVector> {
    let mut state = initial.clone();
    run_in_place(circuit, &mut state)?;
    Ok(state)
}

pub fn run_in_place(circuit: &Circuit, state: &mut StateVector) -> Result<()> {
    if circuit.n_qubits() != state.n_qubits() {
        return Err(Error::WidthMismatch {
            expected: circuit.n_qubits(),
            got: state.n_qubits(),
        });
    }
    circuit.validate()?;
    for gate in circuit.gates() {
        state.apply(gate)?;
    }
    state.rotate_phase(circuit.global_phase());
    Ok(())
}

/// Column `j` is the circuit applied to basis state `j`.
pub fn extract_unitary(circuit: &Circuit) -> Result<Array2<Complex64>> {
    let n = circuit.n_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::WidthTooLarge {
            n,
            limit: MAX_DENSE_QUBITS,
        });
    }
    circuit.validate()?;
    let dim = 1 << n;
    let mut unitary = Array2::zeros((dim, dim));
    for j in 0..dim {
        let column = run(circuit, &StateVector::basis(n, j))?;
        for (i, a) in column.amplitudes().iter().enumerate() {
            unitary[(i, j)] = *a;
        }
    }
    Ok(unitary)
}

/// Follows one basis state through a circuit made only of monomial gates.
/// Phases are accumulated as a single angle.
fn trace_basis_state(circuit: &Circuit, mut index: usize) -> (usize, Complex64) {
    let n = circuit.n_qubits();
    let mut phase = circuit.global_phase();
    for gate in circuit.gates() {
        let q = &gate.qubits;
        let set = |i: usize, k: usize| i & bit(n, q[k]) != 0;
        match gate.kind {
            GateKind::PauliX => index ^= bit(n, q[0]),
            GateKind::Phase => {
                if set(index, 0) {
                    phase += gate.angle_or_zero();
                }
            }
            GateKind::ControlledPhase => {
                if set(index, 0) && set(index, 1) {
                    phase += gate.angle_or_zero();
                }
            }
            GateKind::RotationZ => {
                let half = gate.angle_or_zero() / 2.0;
                phase += if set(index, 0) { half } else { -half };
            }
            GateKind::ControlledNot => {
                if set(index, 0) {
                    index ^= bit(n, q[1]);
                }
            }
            GateKind::Swap => {
                if set(index, 0) != set(index, 1) {
                    index ^= bit(n, q[0]) | bit(n, q[1]);
                }
            }
            GateKind::ControlledSwap => {
                if set(index, 0) && set(index, 1) != set(index, 2) {
                    index ^= bit(n, q[1]) | bit(n, q[2]);
                }
            }
            GateKind::Hadamard => unreachable!("hadamard is not monomial"),
        }
    }
    (index, Complex64::from_polar(1.0, phase))
}

/// Returns the main diagonal after checking every column maps its basis
/// state to itself up to phase. Circuits built only from permutation and
/// phase gates are traced one basis state at a time; anything else is
/// simulated column by column.
pub fn extract_diagonal(circuit: &Circuit) -> Result<Vec<Complex64>> {
    circuit.validate()?;
    let n = circuit.n_qubits();
    let dim = 1usize << n;
    if circuit.gates().iter().all(|g| g.kind.is_monomial()) {
        return (0..dim)
            .map(|j| match trace_basis_state(circuit, j) {
                (i, phase) if i == j => Ok(phase),
                _ => Err(Error::NotDiagonal {
                    column: j,
                    weight: 1.0,
                }),
            })
            .collect();
    }
    extract_diagonal_dense(circuit)
}

/// Column-by-column simulation without the monomial shortcut.
pub fn extract_diagonal_dense(circuit: &Circuit) -> Result<Vec<Complex64>> {
    circuit.validate()?;
    let n = circuit.n_qubits();
    let dim = 1usize << n;
    let mut diagonal = Vec::with_capacity(dim);
    for j in 0..dim {
        let column = run(circuit, &StateVector::basis(n, j))?;
        let weight = column
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, a)| a.norm())
            .fold(0.0, f64::max);
        if weight > DIAGONAL_TOLERANCE {
            return Err(Error::NotDiagonal { column: j, weight });
        }
        diagonal.push(column.amplitudes()[j]);
    }
    Ok(diagonal)
}

/// Seeded generator for measurement sampling.
///
/// Backed by ChaCha8 seeded through `SeedableRng::seed_from_u64`, whose
/// output is fixed across platforms. Uniform doubles take the top 53 bits of
/// each 64-bit word: `(w >> 11) * 2^-53`.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    n_qubits: usize,
    shots: u64,
    counts: BTreeMap<usize, u64>,
}

impl Histogram {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    /// Nonzero counts keyed by basis index.
    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn count(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    pub fn frequency(&self, index: usize) -> f64 {
        self.count(index) as f64 / self.shots as f64
    }
}

/// Draws `shots` independent outcomes from `|amplitude|²` by inverting the
/// cumulative distribution with one uniform draw per shot.
pub fn sample(state: &StateVector, shots: u64, rng: &mut RandomSource) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut cdf = Vec::with_capacity(state.len());
    let mut acc = 0.0;
    for a in state.amplitudes() {
        acc += a.norm_sqr();
        cdf.push(acc);
    }
    let total = acc;
    if (total.sqrt() - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(total.sqrt()));
    }
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let u = rng.next_f64() * total;
        let outcome = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
        *counts.entry(outcome).or_insert(0) += 1;
    }
    Ok(Histogram {
        n_qubits: state.n_qubits(),
        shots,
        counts,
    })
}

/// `⟨a|b⟩`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::WidthMismatch {
            expected: a.n_qubits(),
            got: b.n_qubits(),
        });
    }
    Ok(a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// `|⟨a|b⟩|²`, clamped into `[0, 1]` against rounding.
pub fn fidelity_exact(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(inner_product(a, b)?.norm_sqr().clamp(0.0, 1.0))
}
