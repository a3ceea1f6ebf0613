use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::qate::pairs;
use super::{wrap_angle, wrap_in_shell};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::grid::{Extent, PhaseProfile};

const PIVOT_TOLERANCE: f64 = 1e-9;

/// Half-indices to reproduce exactly and the controlled-phase allowance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub indices: BTreeSet<usize>,
    pub cp_budget: usize,
}

impl WindowSpec {
    /// Window with the default budget of `n - 1` controlled phases.
    pub fn new(indices: impl IntoIterator<Item = usize>, n: usize) -> Self {
        WindowSpec {
            indices: indices.into_iter().collect(),
            cp_budget: n.saturating_sub(1),
        }
    }

    pub fn with_budget(mut self, cp_budget: usize) -> Self {
        self.cp_budget = cp_budget;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Term {
    Linear(usize),
    Pair(usize, usize),
}

impl Term {
    fn covers(self, bits: impl Fn(usize) -> bool) -> bool {
        match self {
            Term::Linear(k) => bits(k),
            Term::Pair(k, l) => bits(k) && bits(l),
        }
    }
}

/// Outcome of eliminating the window system for a given set of terms.
struct Solution {
    rank: usize,
    consistent: bool,
    /// Value per term, `None` for free terms.
    values: Vec<Option<f64>>,
}

/// Row-reduces `A x = b` and back-substitutes with free variables at zero.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>, cols: usize) -> Solution {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&i| a[i][c].abs() > PIVOT_TOLERANCE)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
        else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let pivot_row = a[r].clone();
        for i in 0..rows {
            if i != r && a[i][c].abs() > 0.0 {
                let f = a[i][c] / pivot_row[c];
                for (x, y) in a[i][c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= f * y;
                }
                b[i] -= f * b[r];
            }
        }
        pivots.push(c);
        r += 1;
    }
    let consistent = b[r..].iter().all(|v| v.abs() <= PIVOT_TOLERANCE);
    let mut values = vec![None; cols];
    for (i, &c) in pivots.iter().enumerate() {
        values[c] = Some(b[i] / a[i][c]);
    }
    Solution {
        rank: r,
        consistent,
        values,
    }
}

/// Windowed encoding: exact on `window.indices`, unconstrained elsewhere.
///
/// The global phase is pinned to `θ[0]`. The phase gates on qubits seen in
/// the window are always available; controlled phases are added one at a
/// time in canonical pair order, keeping only those that raise the rank,
/// until the window equations become consistent. Only solved (pivot) terms
/// turn into gates.
pub fn build_qwe_circuit(
    n: usize,
    theta_half: &PhaseProfile,
    window: &WindowSpec,
) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::InvalidWidth {
            got: n,
            reason: "the pyramid needs at least two qubits",
        });
    }
    let l = 1usize << (n - 1);
    if theta_half.extent() != Extent::Half || theta_half.len() != l {
        return Err(Error::ProfileLength {
            expected: l,
            got: theta_half.len(),
        });
    }
    if window.indices.is_empty() {
        return Err(Error::InvalidParameter("window is empty".into()));
    }
    if let Some(&j) = window.indices.iter().find(|&&j| j >= l) {
        return Err(Error::InvalidParameter(format!(
            "window index {j} is outside the half range 0..{l}"
        )));
    }
    let theta = theta_half.theta();
    let global = theta[0];
    let rows: Vec<usize> = window.indices.iter().copied().collect();
    let rhs: Vec<f64> = rows.iter().map(|&j| theta[j] - global).collect();
    let bit = |j: usize, q: usize| j >> (n - 1 - q) & 1 == 1;

    let mut terms: Vec<Term> = (1..n)
        .filter(|&k| rows.iter().any(|&j| bit(j, k)))
        .map(Term::Linear)
        .collect();
    let matrix = |terms: &[Term]| -> Vec<Vec<f64>> {
        rows.iter()
            .map(|&j| {
                terms
                    .iter()
                    .map(|t| if t.covers(|q| bit(j, q)) { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect()
    };

    let mut solution = solve(matrix(&terms), rhs.clone(), terms.len());
    let mut used = 0;
    let mut candidates = pairs(n).map(|(k, l)| Term::Pair(k, l));
    while !solution.consistent {
        if used == window.cp_budget {
            return Err(Error::InfeasibleWindow(format!(
                "{} window positions need more than {} controlled phase(s)",
                rows.len(),
                window.cp_budget
            )));
        }
        let next = candidates.by_ref().find_map(|pair| {
            let mut trial = terms.clone();
            trial.push(pair);
            let s = solve(matrix(&trial), rhs.clone(), trial.len());
            (s.rank > solution.rank).then_some((trial, s))
        });
        let Some((trial, s)) = next else {
            return Err(Error::InfeasibleWindow(format!(
                "no quadratic term reproduces the {} window positions",
                rows.len()
            )));
        };
        terms = trial;
        solution = s;
        used += 1;
    }

    let mut payload = Circuit::new(n);
    let mut pairs_out = Vec::new();
    for (term, value) in terms.iter().zip(&solution.values) {
        let Some(v) = value else { continue };
        match *term {
            Term::Linear(k) => {
                payload.push(Gate::phase(k, -wrap_angle(*v)));
            }
            Term::Pair(k, l) => pairs_out.push(Gate::cphase(k, l, -wrap_angle(*v))),
        }
    }
    for g in pairs_out {
        payload.push(g);
    }
    let mut circuit = if payload.is_empty() {
        payload
    } else {
        wrap_in_shell(&payload)?
    };
    circuit.set_global_phase(-wrap_angle(global));
    Ok(circuit)
}
