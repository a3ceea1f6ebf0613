use serde::{Deserialize, Serialize};

use super::{wrap_angle, wrap_in_shell};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::grid::{Extent, PhaseProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairAngle {
    pub k: usize,
    pub l: usize,
    pub angle: f64,
}

/// Degree-two multilinear expansion of a half profile over qubits `1..n`.
///
/// With `b_k(j)` the bit of half-index `j` owned by qubit `k` (weight
/// `2^{n-1-k}`), the encoded phase is
/// `φ(j) = a_global + Σ b_k alpha_k + Σ_{k<l} b_k b_l beta_{kl}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QateCoefficients {
    pub n_qubits: usize,
    pub a_global: f64,
    /// `alpha[i]` belongs to qubit `i + 1`.
    pub alpha: Vec<f64>,
    /// Canonical pairs `k < l` in lexicographic order.
    pub beta: Vec<PairAngle>,
}

impl QateCoefficients {
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_width(n_qubits)?;
        Ok(QateCoefficients {
            n_qubits,
            a_global: 0.0,
            alpha: vec![0.0; n_qubits - 1],
            beta: pairs(n_qubits)
                .map(|(k, l)| PairAngle { k, l, angle: 0.0 })
                .collect(),
        })
    }

    pub fn alpha(&self, qubit: usize) -> f64 {
        self.alpha[qubit - 1]
    }

    pub fn beta(&self, k: usize, l: usize) -> f64 {
        let (k, l) = if k < l { (k, l) } else { (l, k) };
        self.beta
            .iter()
            .find(|p| p.k == k && p.l == l)
            .map_or(0.0, |p| p.angle)
    }

    /// `φ(j)` for a half-index.
    pub fn realized_phase(&self, j: usize) -> f64 {
        let n = self.n_qubits;
        let set = |q: usize| j >> (n - 1 - q) & 1 == 1;
        let linear: f64 = (1..n).filter(|&k| set(k)).map(|k| self.alpha(k)).sum();
        let quadratic: f64 = self
            .beta
            .iter()
            .filter(|p| set(p.k) && set(p.l))
            .map(|p| p.angle)
            .sum();
        self.a_global + linear + quadratic
    }

    fn check_shape(&self) -> Result<()> {
        check_width(self.n_qubits)?;
        let pair_count = (self.n_qubits - 1) * (self.n_qubits - 2) / 2;
        if self.alpha.len() != self.n_qubits - 1 {
            return Err(Error::ProfileLength {
                expected: self.n_qubits - 1,
                got: self.alpha.len(),
            });
        }
        if self.beta.len() != pair_count {
            return Err(Error::ProfileLength {
                expected: pair_count,
                got: self.beta.len(),
            });
        }
        for p in &self.beta {
            if !(1 <= p.k && p.k < p.l && p.l < self.n_qubits) {
                return Err(Error::InvalidParameter(format!(
                    "pair ({}, {}) is not canonical for {} qubits",
                    p.k, p.l, self.n_qubits
                )));
            }
        }
        let finite = self.a_global.is_finite()
            && self.alpha.iter().all(|a| a.is_finite())
            && self.beta.iter().all(|p| p.angle.is_finite());
        if !finite {
            return Err(Error::NonFiniteAngle("QATE coefficients"));
        }
        Ok(())
    }
}

fn check_width(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidWidth {
            got: n,
            reason: "the pyramid needs at least two qubits",
        });
    }
    Ok(())
}

/// Canonical pairs of payload qubits `1 <= k < l < n`.
pub(crate) fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(move |k| (k + 1..n).map(move |l| (k, l)))
}

/// Interpolates the half profile at every half-index with at most two bits
/// set. Exact on all indices when `θ` is quadratic in `j`.
pub fn solve_qate(theta_half: &PhaseProfile) -> Result<QateCoefficients> {
    if theta_half.extent() != Extent::Half {
        return Err(Error::InvalidParameter(
            "QATE expects a half profile".into(),
        ));
    }
    let theta = theta_half.theta();
    let n = theta_half.n_qubits();
    check_width(n)?;
    let weight = |k: usize| 1usize << (n - 1 - k);
    let a_global = theta[0];
    let alpha: Vec<f64> = (1..n).map(|k| theta[weight(k)] - a_global).collect();
    let beta = pairs(n)
        .map(|(k, l)| PairAngle {
            k,
            l,
            angle: theta[weight(k) + weight(l)] - alpha[k - 1] - alpha[l - 1] - a_global,
        })
        .collect();
    Ok(QateCoefficients {
        n_qubits: n,
        a_global,
        alpha,
        beta,
    })
}

/// Shell around `Phase(k, -alpha_k)` and `ControlledPhase(k, l, -beta_kl)`
/// with global phase `-a_global`. Every gate is emitted, including
/// zero-angle ones.
pub fn build_qate_circuit(n: usize, coeffs: &QateCoefficients) -> Result<Circuit> {
    if coeffs.n_qubits != n {
        return Err(Error::WidthMismatch {
            expected: n,
            got: coeffs.n_qubits,
        });
    }
    coeffs.check_shape()?;
    let mut payload = Circuit::new(n);
    for k in 1..n {
        payload.push(Gate::phase(k, -wrap_angle(coeffs.alpha(k))));
    }
    for p in &coeffs.beta {
        payload.push(Gate::cphase(p.k, p.l, -wrap_angle(p.angle)));
    }
    payload.set_global_phase(-wrap_angle(coeffs.a_global));
    wrap_in_shell(&payload)
}

/// Solves and builds in one go from either a half or a full profile. A
/// full profile contributes only its first half.
pub fn encode_qate(profile: &PhaseProfile) -> Result<Circuit> {
    let half = profile.first_half()?;
    let coeffs = solve_qate(&half)?;
    build_qate_circuit(coeffs.n_qubits, &coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{count_gates, qate_gate_count};
    use crate::grid::{kinetic_phase_profile, Grid};
    use crate::statevector::extract_diagonal;
    use num_complex::Complex64;
    use proptest::prelude::*;

    /// Largest deviation after removing the phase offset at index 0.
    fn aligned_error(got: &[Complex64], theta: &[f64]) -> f64 {
        let offset = got[0] * Complex64::from_polar(1.0, theta[0]);
        got.iter()
            .zip(theta)
            .map(|(z, &t)| (z - offset * Complex64::from_polar(1.0, -t)).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn quadratic_three_qubit_example() {
        let half = PhaseProfile::half(vec![0.0, 0.05, 0.2, 0.45]).unwrap();
        let c = solve_qate(&half).unwrap();
        assert_eq!(c.a_global, 0.0);
        assert!((c.alpha(1) - 0.2).abs() < 1e-15);
        assert!((c.alpha(2) - 0.05).abs() < 1e-15);
        assert!((c.beta(1, 2) - 0.2).abs() < 1e-15);
        for j in 0..4 {
            assert!((c.realized_phase(j) - half.theta()[j]).abs() < 1e-15);
        }

        let d = extract_diagonal(&build_qate_circuit(3, &c).unwrap()).unwrap();
        let full = [0.0, 0.05, 0.2, 0.45, 0.45, 0.2, 0.05, 0.0];
        for (z, t) in d.iter().zip(full) {
            assert!((z - Complex64::from_polar(1.0, -t)).norm() < 1e-12);
        }
    }

    #[test]
    fn constant_profile() {
        let c = solve_qate(&PhaseProfile::half(vec![0.7; 4]).unwrap()).unwrap();
        assert_eq!(c.a_global, 0.7);
        assert!(c.alpha.iter().all(|&a| a == 0.0));
        assert!(c.beta.iter().all(|p| p.angle == 0.0));
    }

    #[test]
    fn composite_relation() {
        let half = PhaseProfile::half(vec![0.3, 1.1, -0.4, 2.0]).unwrap();
        let c = solve_qate(&half).unwrap();
        let t = half.theta();
        assert!((c.beta(1, 2) - (t[3] - (c.alpha(1) + c.alpha(2)) - t[0])).abs() < 1e-15);
    }

    #[test]
    fn zero_coefficients_are_identity() {
        let c = QateCoefficients::zero(4).unwrap();
        let d = extract_diagonal(&build_qate_circuit(4, &c).unwrap()).unwrap();
        assert!(d.iter().all(|z| (z - 1.0).norm() < 1e-15));
    }

    #[test]
    fn rejects_wrong_sizes() {
        assert!(solve_qate(&PhaseProfile::full(vec![0.0; 4]).unwrap()).is_err());
        assert!(solve_qate(&PhaseProfile::half(vec![0.0]).unwrap()).is_err());
        let c = QateCoefficients::zero(3).unwrap();
        assert!(matches!(
            build_qate_circuit(4, &c),
            Err(Error::WidthMismatch { .. })
        ));
        let mut short = c.clone();
        short.alpha.pop();
        assert!(build_qate_circuit(3, &short).is_err());
    }

    #[test]
    fn kinetic_five_qubits_is_exact() {
        let grid = Grid::new(10.0, 5).unwrap();
        let k = kinetic_phase_profile(&grid, 0.1, 1.0).unwrap();
        let d = extract_diagonal(&encode_qate(&k).unwrap()).unwrap();
        for (z, t) in d.iter().zip(k.theta()) {
            assert!((z - Complex64::from_polar(1.0, -t)).norm() < 1e-12);
        }
    }

    #[test]
    fn counts_match_prediction() {
        for n in 2..=10 {
            let c = QateCoefficients::zero(n).unwrap();
            let mut got = count_gates(&build_qate_circuit(n, &c).unwrap()).unwrap();
            got.depth = 0;
            assert_eq!(got, qate_gate_count(n).unwrap());
        }
    }

    #[test]
    fn small_registers_are_exact_for_any_profile() {
        let half = PhaseProfile::half(vec![0.4, -2.9, 1.7, 3.3]).unwrap();
        let circuit = encode_qate(&half).unwrap();
        let d = extract_diagonal(&circuit).unwrap();
        assert!(aligned_error(&d, half.reflected().theta()) < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn quadratic_profiles_are_exact(
            n in 2usize..=8,
            c0 in -5.0f64..5.0,
            c1 in -2.0f64..2.0,
            c2 in -1.0f64..1.0,
        ) {
            let l = 1usize << (n - 1);
            let half: Vec<f64> = (0..l)
                .map(|j| { let j = j as f64; c0 + c1 * j + c2 * j * j })
                .collect();
            let profile = PhaseProfile::half(half).unwrap();
            let d = extract_diagonal(&encode_qate(&profile).unwrap()).unwrap();
            prop_assert!(aligned_error(&d, profile.reflected().theta()) < 1e-10);
        }

        #[test]
        fn arbitrary_profiles_are_bisymmetric_and_interpolate(
            half in prop::collection::vec(-10.0f64..10.0, 16),
        ) {
            let profile = PhaseProfile::half(half).unwrap();
            let coeffs = solve_qate(&profile).unwrap();
            let d = extract_diagonal(&build_qate_circuit(5, &coeffs).unwrap()).unwrap();
            for i in 0..32 {
                prop_assert!((d[i] - d[31 - i]).norm() < 1e-12);
            }
            for j in (0..16usize).filter(|j| j.count_ones() <= 2) {
                let want = Complex64::from_polar(1.0, -profile.theta()[j]);
                prop_assert!((d[j] - want).norm() < 1e-12);
            }
        }
    }
}
