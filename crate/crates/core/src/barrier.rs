//! Minimax energy barrier between the ground space and a logical error.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::codes::GroupSpan;
use crate::error::Result;
use crate::hamiltonian::CodeHamiltonian;
use crate::pauli::PauliOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BarrierOptions {
    /// Maximum weight of the Pauli applied in one step.
    pub step_weight: usize,
    /// Budget on distinct cosets visited in a single sweep.
    pub max_states: usize,
}

impl Default for BarrierOptions {
    fn default() -> Self {
        BarrierOptions {
            step_weight: 1,
            max_states: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessStep {
    /// Pauli applied at this step.
    pub applied: PauliOperator,
    /// Accumulated error after the step.
    pub error: PauliOperator,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarrierResult {
    /// Barrier height in energy units, or the certified lower bound when `exact` is false.
    pub barrier: f64,
    pub exact: bool,
    pub witness: Vec<WitnessStep>,
    /// Minimum-weight representative of the final logical coset.
    pub endpoint: Option<PauliOperator>,
    pub states_visited: usize,
    /// `r·J`: every level must be crossed, each costing at least `J`.
    pub argument_bound: f64,
}

impl BarrierResult {
    /// Largest energy along the witness, recomputed from scratch.
    pub fn witness_max_energy(&self, h: &CodeHamiltonian) -> Result<f64> {
        let mut worst = 0.0f64;
        for step in &self.witness {
            worst = worst.max(h.error_energy(&step.error)?);
        }
        Ok(worst)
    }
}

enum Sweep {
    Found {
        path: Vec<PauliOperator>,
        visited: usize,
    },
    Exhausted {
        visited: usize,
    },
    OverBudget {
        visited: usize,
    },
}

struct Search<'a> {
    h: &'a CodeHamiltonian,
    span: GroupSpan,
    moves: Vec<PauliOperator>,
    max_states: usize,
}

impl Search<'_> {
    fn violations(&self, key: &[u64]) -> usize {
        let rep = PauliOperator::from_symplectic(self.h.n_qubits(), key);
        self.h
            .terms()
            .iter()
            .filter(|t| t.pauli.symplectic_parity(&rep) == 1)
            .count()
    }

    /// Keys are already reduced, so a nonzero key with trivial syndrome is logical.
    fn is_logical(&self, key: &[u64]) -> bool {
        if key.iter().all(|w| *w == 0) {
            return false;
        }
        let rep = PauliOperator::from_symplectic(self.h.n_qubits(), key);
        self.h
            .code()
            .generators()
            .iter()
            .all(|g| g.symplectic_parity(&rep) == 0)
    }

    /// Breadth-first sweep over cosets that violate at most `limit` terms.
    fn sweep(&self, limit: usize) -> Sweep {
        let n = self.h.n_qubits();
        let start = self.span.reduce(&PauliOperator::identity(n));
        let mut parent: HashMap<Vec<u64>, Option<(Vec<u64>, usize)>> = HashMap::new();
        parent.insert(start.clone(), None);
        let mut queue = VecDeque::from([start]);
        while let Some(key) = queue.pop_front() {
            for (m, mv) in self.moves.iter().enumerate() {
                let mut next = key.clone();
                next.iter_mut()
                    .zip(mv.symplectic())
                    .for_each(|(a, b)| *a ^= b);
                let next = self.span.reduce_vec(next);
                if parent.contains_key(&next) || self.violations(&next) > limit {
                    continue;
                }
                parent.insert(next.clone(), Some((key.clone(), m)));
                if self.is_logical(&next) {
                    let mut path = Vec::new();
                    let mut cur = next;
                    while let Some(Some((prev, m))) = parent.get(&cur) {
                        path.push(self.moves[*m].clone());
                        cur = prev.clone();
                    }
                    path.reverse();
                    return Sweep::Found {
                        path,
                        visited: parent.len(),
                    };
                }
                if parent.len() >= self.max_states {
                    return Sweep::OverBudget {
                        visited: parent.len(),
                    };
                }
                queue.push_back(next);
            }
        }
        Sweep::Exhausted {
            visited: parent.len(),
        }
    }
}

fn min_weight_representative(op: &PauliOperator, span_ops: &[PauliOperator]) -> PauliOperator {
    if span_ops.len() > 20 {
        return op.clone();
    }
    let mut best = op.unsigned();
    for mask in 1u64..(1u64 << span_ops.len()) {
        let mut cand = op.clone();
        for (j, s) in span_ops.iter().enumerate() {
            if (mask >> j) & 1 == 1 {
                cand = cand.product(s);
            }
        }
        let cand = cand.unsigned();
        let better = cand.weight() < best.weight()
            || (cand.weight() == best.weight() && cand.lex_cmp(&best).is_lt());
        if better {
            best = cand;
        }
    }
    best
}

/// Minimax energy over single-step Pauli paths from the identity coset to a coset
/// that acts as a nontrivial logical operator.
///
/// Cosets are taken modulo the stabilizer and gauge group. Thresholds are raised
/// one violation at a time; the first threshold whose breadth-first sweep reaches
/// a logical coset is the barrier, and the sweep yields a shortest witness. When a
/// sweep runs out of budget the result is the threshold that was being tested,
/// which is a lower bound because all lower thresholds were exhausted.
pub fn energy_barrier(h: &CodeHamiltonian, options: BarrierOptions) -> Result<BarrierResult> {
    let code = h.code();
    let n = h.n_qubits();
    let moves: Vec<PauliOperator> = (1..=options.step_weight.max(1).min(n))
        .flat_map(|w| PauliOperator::all_of_weight(n, w))
        .collect();
    let search = Search {
        h,
        span: code.trivial_span(),
        moves,
        max_states: options.max_states.max(1),
    };
    let unit = h.J();
    let argument_bound = h.levels() as f64 * unit;
    let mut visited_total = 0;
    for limit in 0..=h.terms().len() {
        match search.sweep(limit) {
            Sweep::Found { path, visited } => {
                visited_total += visited;
                let mut error = PauliOperator::identity(n);
                let mut witness = Vec::with_capacity(path.len());
                for applied in path {
                    error = applied.product(&error).unsigned();
                    witness.push(WitnessStep {
                        energy: h.error_energy(&error)?,
                        applied,
                        error: error.clone(),
                    });
                }
                let span_ops: Vec<PauliOperator> = code
                    .generators()
                    .iter()
                    .chain(code.gauge_x())
                    .chain(code.gauge_z())
                    .cloned()
                    .collect();
                let endpoint = witness
                    .last()
                    .map(|s| min_weight_representative(&s.error, &span_ops));
                return Ok(BarrierResult {
                    barrier: limit as f64 * unit,
                    exact: true,
                    witness,
                    endpoint,
                    states_visited: visited_total,
                    argument_bound,
                });
            }
            Sweep::Exhausted { visited } => visited_total += visited,
            Sweep::OverBudget { visited } => {
                return Ok(BarrierResult {
                    barrier: limit as f64 * unit,
                    exact: false,
                    witness: Vec::new(),
                    endpoint: None,
                    states_visited: visited_total + visited,
                    argument_bound,
                });
            }
        }
    }
    // No logical coset reachable at all, e.g. when the code encodes nothing.
    Ok(BarrierResult {
        barrier: f64::INFINITY,
        exact: true,
        witness: Vec::new(),
        endpoint: None,
        states_visited: visited_total,
        argument_bound,
    })
}
