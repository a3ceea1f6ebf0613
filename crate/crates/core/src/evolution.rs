//! Second-order Trotterized evolution of a Gaussian packet, on the
//! simulator and with a classical split-step reference.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::{swap_test_estimate, FidelityReport};
use crate::circuit::Circuit;
use crate::encoder::{build_phase_ramp, build_potential_circuit, build_qft, encode_qate};
use crate::error::{Error, Result};
use crate::grid::{
    gaussian_packet, kinetic_phase_profile, momentum_samples, position_samples, potential_profile,
    Grid, PacketSpec, PotentialKind, PotentialSpec,
};
use crate::statevector::{
    fidelity_exact, run_in_place, sample, Histogram, RandomSource, StateVector,
};

/// Which transform maps position amplitudes to momentum amplitudes. With
/// the `ω = e^{2πi/N}` convention of [`build_qft`] this is the inverse.
const POSITION_TO_MOMENTUM_IS_INVERSE: bool = true;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Bare transform between the two grids.
    Paper,
    /// Transform wrapped in the linear phase ramps of the half-offset grids.
    Centered,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Mode::Paper),
            "centered" => Ok(Mode::Centered),
            other => Err(Error::InvalidParameter(format!("unknown mode {other:?}"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Paper => "paper",
            Mode::Centered => "centered",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub grid: Grid,
    pub packet: PacketSpec,
    pub potential: PotentialSpec,
    /// Time per reported step.
    pub dt: f64,
    /// Trotter substeps per reported step.
    pub trotter_steps: usize,
    pub total_steps: usize,
    pub mode: Mode,
    pub shots: u64,
    pub seed: u64,
    pub mass: f64,
}

impl EvolutionConfig {
    /// d = 10, Δt = 0.1, 10 000 shots, unit mass, k0 = 1 and a unit single
    /// step, one reported step of ten substeps.
    pub fn table_one(n_qubits: usize) -> Result<Self> {
        let grid = Grid::new(10.0, n_qubits)?;
        Ok(EvolutionConfig {
            grid,
            packet: PacketSpec::default(),
            potential: PotentialSpec::standard(PotentialKind::SingleStep, 1.0, &grid)?,
            dt: 0.1,
            trotter_steps: 10,
            total_steps: 1,
            mode: Mode::Centered,
            shots: 10_000,
            seed: 0,
            mass: 1.0,
        })
    }

    /// Substep length `δ = Δt / Nt`.
    pub fn substep(&self) -> f64 {
        self.dt / self.trotter_steps as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.trotter_steps == 0 {
            return Err(Error::InvalidParameter(
                "trotter_steps must be at least 1".into(),
            ));
        }
        if !(self.dt.is_finite() && self.dt >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dt must be nonnegative, got {}",
                self.dt
            )));
        }
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive, got {}",
                self.mass
            )));
        }
        if self.shots == 0 {
            return Err(Error::ZeroShots);
        }
        if !self.packet.k0.is_finite() {
            return Err(Error::InvalidParameter("k0 must be finite".into()));
        }
        self.potential.validate(&self.grid)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult {
    pub quantum: Vec<StateVector>,
    pub oracle: Vec<StateVector>,
    pub histograms: Vec<Histogram>,
    pub exact_fidelities: Vec<f64>,
    pub swap_fidelities: Vec<FidelityReport>,
}

/// One Trotter substep of length `δ`, in gate order:
/// `V(δ/2)`, [ramp], transform to momentum, `K(δ)`, transform back,
/// [ramp⁻¹], `V(δ/2)`.
pub fn trotter_step_circuit(config: &EvolutionConfig) -> Result<Circuit> {
    config.validate()?;
    let n = config.grid.n_qubits();
    let delta = config.substep();
    let half_potential = build_potential_circuit(n, &config.potential, delta, 2)?;
    let kinetic = encode_qate(&kinetic_phase_profile(&config.grid, delta, config.mass)?)?;
    let to_momentum = build_qft(n, POSITION_TO_MOMENTUM_IS_INVERSE)?;
    let to_position = build_qft(n, !POSITION_TO_MOMENTUM_IS_INVERSE)?;

    let mut circuit = half_potential.clone();
    let ramp = build_phase_ramp(n, centering_slope(n));
    if config.mode == Mode::Centered {
        circuit.append(&ramp)?;
    }
    circuit
        .append(&to_momentum)?
        .append(&kinetic)?
        .append(&to_position)?;
    if config.mode == Mode::Centered {
        circuit.append(&ramp.inverse())?;
    }
    circuit.append(&half_potential)?;
    Ok(circuit)
}

/// Slope of `diag(e^{-2πi a k/N})` with `a = 1/2 - N/2`, the position-side
/// factor relating the centred transform to the plain one.
fn centering_slope(n: usize) -> f64 {
    let big_n = (1u64 << n) as f64;
    PI * (big_n - 1.0) / big_n
}

/// Noiseless quantum states at every reported step, starting from the packet.
pub fn evolve_quantum_states(config: &EvolutionConfig) -> Result<Vec<StateVector>> {
    let step = trotter_step_circuit(config)?;
    let mut state = gaussian_packet(&config.grid, &config.packet)?;
    let mut states = Vec::with_capacity(config.total_steps + 1);
    states.push(state.clone());
    for _ in 0..config.total_steps {
        for _ in 0..config.trotter_steps {
            run_in_place(&step, &mut state)?;
        }
        states.push(state.clone());
    }
    Ok(states)
}

/// Quantum evolution with per-step histograms and swap-test estimates
/// against the oracle. One seeded stream feeds all sampling, step by step:
/// histogram first, then the swap test.
pub fn evolve_quantum(config: &EvolutionConfig) -> Result<EvolutionResult> {
    let quantum = evolve_quantum_states(config)?;
    let oracle = evolve_classical_oracle(config)?;
    let mut rng = RandomSource::new(config.seed);
    let mut histograms = Vec::with_capacity(quantum.len());
    let mut exact_fidelities = Vec::with_capacity(quantum.len());
    let mut swap_fidelities = Vec::with_capacity(quantum.len());
    for (q, o) in quantum.iter().zip(&oracle) {
        histograms.push(sample(q, config.shots, &mut rng)?);
        exact_fidelities.push(fidelity_exact(o, q)?);
        swap_fidelities.push(swap_test_estimate(o, q, config.shots, &mut rng)?);
    }
    Ok(EvolutionResult {
        quantum,
        oracle,
        histograms,
        exact_fidelities,
        swap_fidelities,
    })
}

/// Split-step reference on the same grids, using a direct transform
/// `M_{jk} = e^{-i p_j x_k}/√N`.
pub fn evolve_classical_oracle(config: &EvolutionConfig) -> Result<Vec<StateVector>> {
    evolve_oracle_with_substeps(config, config.trotter_steps)
}

/// The oracle with its own substep count per reported step.
pub fn evolve_oracle_with_substeps(
    config: &EvolutionConfig,
    substeps: usize,
) -> Result<Vec<StateVector>> {
    config.validate()?;
    if substeps == 0 {
        return Err(Error::InvalidParameter(
            "substeps must be at least 1".into(),
        ));
    }
    let grid = &config.grid;
    let big_n = grid.len();
    let delta = config.dt / substeps as f64;
    let x = position_samples(grid);
    let p = momentum_samples(grid);
    let v = potential_profile(grid, &config.potential)?;
    let norm = 1.0 / (big_n as f64).sqrt();
    let transform: Vec<Complex64> = p
        .iter()
        .flat_map(|&pj| {
            x.iter()
                .map(move |&xk| Complex64::from_polar(norm, -pj * xk))
        })
        .collect();
    let half_v: Vec<Complex64> = v
        .iter()
        .map(|&vk| Complex64::from_polar(1.0, -vk * delta / 2.0))
        .collect();
    let kinetic: Vec<Complex64> = p
        .iter()
        .map(|&pj| Complex64::from_polar(1.0, -pj * pj * delta / (2.0 * config.mass)))
        .collect();

    let mut psi = gaussian_packet(grid, &config.packet)?.into_amplitudes();
    let mut phi = vec![Complex64::new(0.0, 0.0); big_n];
    let mut states = Vec::with_capacity(config.total_steps + 1);
    states.push(StateVector::from_amplitudes(psi.clone())?);
    for _ in 0..config.total_steps {
        for _ in 0..substeps {
            psi.iter_mut().zip(&half_v).for_each(|(a, f)| *a *= f);
            for (j, out) in phi.iter_mut().enumerate() {
                let row = &transform[j * big_n..(j + 1) * big_n];
                *out = row.iter().zip(&psi).map(|(m, a)| m * a).sum::<Complex64>() * kinetic[j];
            }
            for (k, out) in psi.iter_mut().enumerate() {
                *out = (0..big_n)
                    .map(|j| transform[j * big_n + k].conj() * phi[j])
                    .sum::<Complex64>()
                    * half_v[k];
            }
        }
        states.push(StateVector::from_amplitudes(psi.clone())?);
    }
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::{extract_diagonal, extract_unitary};

    fn config(n: usize) -> EvolutionConfig {
        EvolutionConfig::table_one(n).unwrap()
    }

    #[test]
    fn zero_time_step_is_identity() {
        let mut c = config(4);
        c.dt = 0.0;
        for mode in [Mode::Centered, Mode::Paper] {
            c.mode = mode;
            let u = extract_unitary(&trotter_step_circuit(&c).unwrap()).unwrap();
            let err = (&u - &ndarray::Array2::<Complex64>::eye(16))
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-10, "{mode}: {err}");
        }
    }

    #[test]
    fn free_evolution_has_no_splitting_error() {
        let mut c = config(4);
        c.potential = PotentialSpec::none();
        c.trotter_steps = 7;
        let mut repeated = Circuit::new(4);
        let step = trotter_step_circuit(&c).unwrap();
        for _ in 0..7 {
            repeated.append(&step).unwrap();
        }
        c.trotter_steps = 1;
        let single = trotter_step_circuit(&c).unwrap();
        let a = extract_unitary(&repeated).unwrap();
        let b = extract_unitary(&single).unwrap();
        let err = (&a - &b).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn centered_step_matches_oracle_matrix() {
        let mut c = config(4);
        c.total_steps = 1;
        c.trotter_steps = 1;
        let quantum = evolve_quantum_states(&c).unwrap();
        let oracle = evolve_classical_oracle(&c).unwrap();
        assert!(fidelity_exact(&quantum[1], &oracle[1]).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn free_packet_five_qubits() {
        let mut c = config(5);
        c.potential = PotentialSpec::none();
        c.trotter_steps = 50;
        let q = evolve_quantum_states(&c).unwrap();
        let o = evolve_classical_oracle(&c).unwrap();
        assert!(fidelity_exact(&q[1], &o[1]).unwrap() >= 0.999);
    }

    #[test]
    fn zero_steps_hold_initial_state() {
        let mut c = config(4);
        c.total_steps = 0;
        c.shots = 100;
        let r = evolve_quantum(&c).unwrap();
        assert_eq!(r.quantum.len(), 1);
        assert!((r.exact_fidelities[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_free_momentum_distribution_is_invariant() {
        let mut c = config(5);
        c.potential = PotentialSpec::none();
        c.total_steps = 4;
        c.packet.k0 = 0.0;
        let states = evolve_classical_oracle(&c).unwrap();
        let to_momentum = build_qft(5, POSITION_TO_MOMENTUM_IS_INVERSE).unwrap();
        let ramp = build_phase_ramp(5, centering_slope(5));
        let momentum_probs = |s: &StateVector| {
            let mut s = s.clone();
            run_in_place(&ramp, &mut s).unwrap();
            run_in_place(&to_momentum, &mut s).unwrap();
            s.probabilities()
        };
        let first = momentum_probs(&states[0]);
        for s in &states {
            assert!((s.norm() - 1.0).abs() < 1e-10);
            let probs = momentum_probs(s);
            for (a, b) in first.iter().zip(&probs) {
                assert!((a - b).abs() < 1e-10);
            }
            let pos = s.probabilities();
            for k in 0..32 {
                assert!((pos[k] - pos[31 - k]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn kinetic_block_is_diagonal() {
        let c = config(5);
        let k = encode_qate(&kinetic_phase_profile(&c.grid, c.substep(), 1.0).unwrap()).unwrap();
        assert!(extract_diagonal(&k).is_ok());
    }

    #[test]
    fn config_validation() {
        let mut c = config(3);
        c.trotter_steps = 0;
        assert!(trotter_step_circuit(&c).is_err());
        let mut c = config(3);
        c.mass = 0.0;
        assert!(evolve_classical_oracle(&c).is_err());
        assert!(trotter_step_circuit(&config(1)).is_err());
        assert_eq!("paper".parse::<Mode>().unwrap(), Mode::Paper);
        assert!("other".parse::<Mode>().is_err());
    }
}
