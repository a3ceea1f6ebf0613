//! Position and momentum grids, phase profiles, step potentials and the
//! initial wave packet.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::StateVector;

/// Widest register a grid may describe.
pub const MAX_GRID_QUBITS: usize = 30;

/// Uniform grid of `N = 2^n` cells on `[-d, d]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    d: f64,
    n_qubits: usize,
}

impl Grid {
    pub fn new(d: f64, n_qubits: usize) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "half-range d must be positive and finite, got {d}"
            )));
        }
        if n_qubits == 0 || n_qubits > MAX_GRID_QUBITS {
            return Err(Error::InvalidWidth {
                got: n_qubits,
                reason: "grid needs between 1 and 30 qubits",
            });
        }
        Ok(Grid { d, n_qubits })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Number of samples `N`.
    pub fn len(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `Δx = 2d/N`. Dividing by a power of two is exact, so `Δx·N = 2d`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.d / self.len() as f64
    }
}

/// Cell centres `x_k = -d + (k + 1/2)Δx`.
///
/// Evaluated as `Δx·(k + 1/2 - N/2)` so that `x_k = -x_{N-1-k}` holds
/// bit for bit.
pub fn position_samples(grid: &Grid) -> Vec<f64> {
    let half = grid.len() as f64 / 2.0;
    let dx = grid.spacing();
    (0..grid.len())
        .map(|k| dx * (k as f64 + 0.5 - half))
        .collect()
}

/// Momentum samples `p_j = (π/d)(j + 1/2 - N/2)`.
pub fn momentum_samples(grid: &Grid) -> Vec<f64> {
    let half = grid.len() as f64 / 2.0;
    let scale = PI / grid.d();
    (0..grid.len())
        .map(|j| scale * (j as f64 + 0.5 - half))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extent {
    Full,
    Half,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Kinetic,
    Custom,
}

/// Angles θ targeted by the encoders as `diag(e^{-iθ})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseProfile {
    theta: Vec<f64>,
    extent: Extent,
    provenance: Provenance,
}

impl PhaseProfile {
    pub fn new(theta: Vec<f64>, extent: Extent, provenance: Provenance) -> Result<Self> {
        if theta.is_empty() || !theta.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(theta.len()));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFiniteAngle("phase profile"));
        }
        Ok(PhaseProfile {
            theta,
            extent,
            provenance,
        })
    }

    pub fn full(theta: Vec<f64>) -> Result<Self> {
        Self::new(theta, Extent::Full, Provenance::Custom)
    }

    pub fn half(theta: Vec<f64>) -> Result<Self> {
        Self::new(theta, Extent::Half, Provenance::Custom)
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn extent(&self) -> Extent {
        self.extent
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Register width the profile is meant for.
    pub fn n_qubits(&self) -> usize {
        let bits = self.theta.len().trailing_zeros() as usize;
        match self.extent {
            Extent::Full => bits,
            Extent::Half => bits + 1,
        }
    }

    /// First half of a full profile.
    pub fn first_half(&self) -> Result<PhaseProfile> {
        match self.extent {
            Extent::Half => Ok(self.clone()),
            Extent::Full if self.theta.len() < 2 => Err(Error::ProfileLength {
                expected: 2,
                got: self.theta.len(),
            }),
            Extent::Full => Ok(PhaseProfile {
                theta: self.theta[..self.theta.len() / 2].to_vec(),
                extent: Extent::Half,
                provenance: self.provenance,
            }),
        }
    }

    /// Half profile followed by its mirror image.
    pub fn reflected(&self) -> PhaseProfile {
        match self.extent {
            Extent::Full => self.clone(),
            Extent::Half => {
                let mut theta = self.theta.clone();
                theta.extend(self.theta.iter().rev());
                PhaseProfile {
                    theta,
                    extent: Extent::Full,
                    provenance: self.provenance,
                }
            }
        }
    }

    pub fn is_palindromic(&self, tol: f64) -> bool {
        let n = self.theta.len();
        (0..n / 2).all(|j| (self.theta[j] - self.theta[n - 1 - j]).abs() <= tol)
    }

    /// `e^{-iθ_j}` for every entry.
    pub fn target_diagonal(&self) -> Vec<Complex64> {
        self.theta
            .iter()
            .map(|&t| Complex64::from_polar(1.0, -t))
            .collect()
    }
}

/// `θ_j = p_j² Δt / (2m)`, stored as nonnegative angles.
pub fn kinetic_phase_profile(grid: &Grid, dt: f64, mass: f64) -> Result<PhaseProfile> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mass must be positive, got {mass}"
        )));
    }
    if !(dt.is_finite() && dt >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "time step must be nonnegative, got {dt}"
        )));
    }
    let theta = momentum_samples(grid)
        .into_iter()
        .map(|p| p * p * dt / (2.0 * mass))
        .collect();
    PhaseProfile::new(theta, Extent::Full, Provenance::Kinetic)
}

/// Parameters of `ψ₀(x) ∝ e^{-x²/2} e^{i k₀ x}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketSpec {
    pub k0: f64,
}

impl Default for PacketSpec {
    fn default() -> Self {
        PacketSpec { k0: 1.0 }
    }
}

pub fn gaussian_packet(grid: &Grid, spec: &PacketSpec) -> Result<StateVector> {
    if !spec.k0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "k0 must be finite, got {}",
            spec.k0
        )));
    }
    let amplitudes = position_samples(grid)
        .into_iter()
        .map(|x| Complex64::from_polar((-x * x / 2.0).exp(), spec.k0 * x))
        .collect();
    StateVector::normalized(amplitudes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    None,
    SingleStep,
    DoubleStep,
    MultiStep,
}

impl PotentialKind {
    /// Qubit carrying the Pauli-Z factor when none is given explicitly.
    pub fn default_qubit(self) -> Option<usize> {
        match self {
            PotentialKind::None => None,
            PotentialKind::SingleStep => Some(0),
            PotentialKind::DoubleStep => Some(1),
            PotentialKind::MultiStep => Some(2),
        }
    }
}

impl std::str::FromStr for PotentialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(PotentialKind::None),
            "single" | "single_step" | "single-step" => Ok(PotentialKind::SingleStep),
            "double" | "double_step" | "double-step" => Ok(PotentialKind::DoubleStep),
            "multi" | "multi_step" | "multi-step" => Ok(PotentialKind::MultiStep),
            other => Err(Error::InvalidPotential(format!("unknown kind {other:?}"))),
        }
    }
}

/// A piecewise-constant potential.
///
/// `qubits` lists the Pauli-Z positions used by the circuit builder. The
/// same potential seen on the grid is `levels[i]` for `x < boundaries[i]`
/// (and past the last boundary, the last level).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    pub eta: f64,
    pub qubits: Vec<usize>,
    pub boundaries: Vec<f64>,
    pub levels: Vec<f64>,
}

impl PotentialSpec {
    pub fn none() -> Self {
        PotentialSpec {
            kind: PotentialKind::None,
            eta: 0.0,
            qubits: Vec::new(),
            boundaries: Vec::new(),
            levels: vec![0.0],
        }
    }

    /// Step potential `η Σ_q Z_q`, with the grid boundaries where it jumps.
    ///
    /// On cell `k` the value is `η Σ_q (1 - 2 b_q(k))` where `b_q(k)` is the
    /// bit of `k` owned by qubit `q`.
    pub fn from_qubits(
        kind: PotentialKind,
        eta: f64,
        qubits: Vec<usize>,
        grid: &Grid,
    ) -> Result<Self> {
        if kind == PotentialKind::None {
            return Ok(Self::none());
        }
        if !eta.is_finite() {
            return Err(Error::InvalidPotential(format!(
                "eta must be finite, got {eta}"
            )));
        }
        if qubits.is_empty() {
            return Err(Error::InvalidPotential("no qubit positions given".into()));
        }
        let n = grid.n_qubits();
        for (i, &q) in qubits.iter().enumerate() {
            if q >= n {
                return Err(Error::IndexOutOfRange { qubit: q, width: n });
            }
            if qubits[..i].contains(&q) {
                return Err(Error::InvalidPotential(format!("qubit {q} listed twice")));
            }
        }
        let value = |k: usize| -> f64 {
            eta * qubits
                .iter()
                .map(|&q| if k >> (n - 1 - q) & 1 == 1 { -1.0 } else { 1.0 })
                .sum::<f64>()
        };
        let dx = grid.spacing();
        let mut boundaries = Vec::new();
        let mut levels = vec![value(0)];
        for k in 1..grid.len() {
            let v = value(k);
            if v != *levels.last().unwrap() {
                boundaries.push(-grid.d() + k as f64 * dx);
                levels.push(v);
            }
        }
        Ok(PotentialSpec {
            kind,
            eta,
            qubits,
            boundaries,
            levels,
        })
    }

    /// Uses the kind's default qubit.
    pub fn standard(kind: PotentialKind, eta: f64, grid: &Grid) -> Result<Self> {
        match kind.default_qubit() {
            None => Ok(Self::none()),
            Some(q) => Self::from_qubits(kind, eta, vec![q], grid),
        }
    }

    /// Arbitrary step profile with no circuit realization.
    pub fn piecewise(kind: PotentialKind, boundaries: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        let eta = levels.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let spec = PotentialSpec {
            kind,
            eta,
            qubits: Vec::new(),
            boundaries,
            levels,
        };
        spec.check_shape()?;
        Ok(spec)
    }

    fn check_shape(&self) -> Result<()> {
        if self.levels.len() != self.boundaries.len() + 1 {
            return Err(Error::InvalidPotential(format!(
                "{} boundaries need {} levels, got {}",
                self.boundaries.len(),
                self.boundaries.len() + 1,
                self.levels.len()
            )));
        }
        if self
            .levels
            .iter()
            .chain(&self.boundaries)
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidPotential(
                "non-finite boundary or level".into(),
            ));
        }
        if self.boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPotential(
                "boundaries must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        self.check_shape()?;
        let d = grid.d();
        if let Some(b) = self.boundaries.iter().find(|&&b| b <= -d || b >= d) {
            return Err(Error::InvalidPotential(format!(
                "boundary {b} lies outside (-{d}, {d})"
            )));
        }
        if let Some(&q) = self.qubits.iter().find(|&&q| q >= grid.n_qubits()) {
            return Err(Error::IndexOutOfRange {
                qubit: q,
                width: grid.n_qubits(),
            });
        }
        Ok(())
    }
}

/// `V(x_k)` on every grid point.
pub fn potential_profile(grid: &Grid, spec: &PotentialSpec) -> Result<Vec<f64>> {
    if spec.kind == PotentialKind::None {
        return Ok(vec![0.0; grid.len()]);
    }
    spec.validate(grid)?;
    Ok(position_samples(grid)
        .into_iter()
        .map(|x| spec.levels[spec.boundaries.partition_point(|&b| b <= x)])
        .collect())
}
