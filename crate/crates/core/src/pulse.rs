//! Bang-bang circuits for Pauli exponentials and commuting Hamiltonian steps.
//!
//! `exp(-i t P)` is built by conjugating a single-qubit rotation on a pivot
//! qubit with a CNOT fan: CNOTs into the pivot turn `Z_p` into `Z_a Z_p`, and
//! CNOTs out of the pivot turn `X_p` into `X_p X_a`. Mixed strings first map
//! every factor to `Z` with self-inverse basis changes.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::codes::StabilizerCode;
use crate::error::{Error, Result};
use crate::hamiltonian::CodeHamiltonian;
use crate::linalg::{check_dense_cap, CMat};
use crate::pauli::{PauliAxis, PauliOperator};

/// Default qubit cap for dense circuit unitaries.
pub const DEFAULT_CIRCUIT_MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum Gate {
    Cnot {
        control: usize,
        target: usize,
    },
    /// Self-inverse Clifford `(σ_axis + Z)/√2` exchanging `Z` and `σ_axis`; the
    /// identity for `Z`.
    Basis {
        qubit: usize,
        axis: PauliAxis,
    },
    /// `exp(-i · angle · σ_axis)`
    Rotation {
        qubit: usize,
        axis: PauliAxis,
        angle: f64,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Basis { qubit, .. } | Gate::Rotation { qubit, .. } => vec![qubit],
        }
    }

    /// 2×2 matrix of a single-qubit gate.
    pub fn single_qubit_matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match *self {
            Gate::Cnot { .. } => None,
            Gate::Basis { axis, .. } => Some(basis_change_matrix(axis)),
            Gate::Rotation { axis, angle, .. } => {
                let s = axis.matrix();
                let (cos, sin) = (angle.cos(), angle.sin());
                let mut m = [[c(0.0, 0.0); 2]; 2];
                for r in 0..2 {
                    for k in 0..2 {
                        let id = if r == k { cos } else { 0.0 };
                        m[r][k] = c(id, 0.0) + c(0.0, -sin) * s[r][k];
                    }
                }
                Some(m)
            }
        }
    }
}

/// `(σ + Z)/√2` for `σ ∈ {X, Y}`, the identity for `Z`.
pub fn basis_change_matrix(axis: PauliAxis) -> [[Complex64; 2]; 2] {
    let h = FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match axis {
        PauliAxis::X => [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
        PauliAxis::Y => [[c(h, 0.0), c(0.0, -h)], [c(0.0, h), c(-h, 0.0)]],
        PauliAxis::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Cnot { control, target } => write!(f, "CX {control} {target}"),
            Gate::Basis { qubit, axis } => write!(f, "BASIS {qubit} {axis}"),
            Gate::Rotation { qubit, axis, angle } => write!(f, "ROT {qubit} {axis} {angle:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Control,
    Target,
    Exclusive,
}

/// Layered circuit; gates inside a layer commute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseCircuit {
    pub n_qubits: usize,
    pub layers: Vec<Vec<Gate>>,
    /// Number of repeated Hamiltonian steps this circuit represents.
    #[serde(default = "one")]
    pub steps: usize,
}

fn one() -> usize {
    1
}

impl PulseCircuit {
    pub fn empty(n_qubits: usize) -> Self {
        PulseCircuit {
            n_qubits,
            layers: Vec::new(),
            steps: 1,
        }
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates()
            .filter(|g| matches!(g, Gate::Cnot { .. }))
            .count()
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flatten()
    }

    /// Checks qubit ranges and that every layer is made of commuting gates:
    /// a qubit is either touched by one single-qubit gate, or used only as a
    /// control, or only as a target, of CNOTs in that layer.
    pub fn check_layers(&self) -> Result<()> {
        for (index, layer) in self.layers.iter().enumerate() {
            let mut roles: BTreeMap<usize, Role> = BTreeMap::new();
            for gate in layer {
                let claims: Vec<(usize, Role)> = match *gate {
                    Gate::Cnot { control, target } => {
                        if control == target {
                            return Err(Error::CircuitFormat(format!(
                                "layer {index}: CNOT with control equal to target"
                            )));
                        }
                        vec![(control, Role::Control), (target, Role::Target)]
                    }
                    Gate::Basis { qubit, .. } | Gate::Rotation { qubit, .. } => {
                        vec![(qubit, Role::Exclusive)]
                    }
                };
                for (q, role) in claims {
                    if q >= self.n_qubits {
                        return Err(Error::CircuitFormat(format!(
                            "layer {index}: qubit {q} outside a {}-qubit register",
                            self.n_qubits
                        )));
                    }
                    match roles.insert(q, role) {
                        Some(prev) if prev != role || role == Role::Exclusive => {
                            return Err(Error::CircuitFormat(format!(
                                "layer {index}: conflicting gates on qubit {q}"
                            )));
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(())
    }

    /// Places `other` after `self`.
    pub fn append(&mut self, other: PulseCircuit) {
        self.layers.extend(other.layers);
    }

    /// Runs circuits with disjoint supports side by side, layer by layer.
    pub fn parallel(n_qubits: usize, parts: &[PulseCircuit]) -> Result<PulseCircuit> {
        let depth = parts.iter().map(PulseCircuit::depth).max().unwrap_or(0);
        let mut layers = vec![Vec::new(); depth];
        for part in parts {
            for (k, layer) in part.layers.iter().enumerate() {
                layers[k].extend(layer.iter().copied());
            }
        }
        let out = PulseCircuit {
            n_qubits,
            layers,
            steps: 1,
        };
        out.check_layers()?;
        Ok(out)
    }

    /// Dense unitary, gates applied in listed order.
    pub fn unitary(&self, max_qubits: usize) -> Result<CMat> {
        check_dense_cap("circuit unitary", self.n_qubits, max_qubits)?;
        let dim = 1usize << self.n_qubits;
        let mut u = CMat::identity(dim, dim);
        for gate in self.gates() {
            apply_gate(&mut u, gate, self.n_qubits);
        }
        Ok(u)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("QUBITS {}\n", self.n_qubits);
        for (k, layer) in self.layers.iter().enumerate() {
            if k > 0 {
                out.push_str("---\n");
            }
            for gate in layer {
                out.push_str(&gate.to_string());
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: PulseCircuit = serde_json::from_str(text)?;
        c.check_layers()?;
        Ok(c)
    }
}

impl FromStr for PulseCircuit {
    type Err = Error;

    /// Parses the line format; `#` starts a comment line. Without a `QUBITS` header the register is sized
    /// to the largest qubit index used.
    fn from_str(text: &str) -> Result<Self> {
        let bad = |line: usize, msg: &str| Error::CircuitFormat(format!("line {line}: {msg}"));
        let mut declared = None;
        let mut layers: Vec<Vec<Gate>> = vec![Vec::new()];
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let words: Vec<&str> = raw.split_whitespace().collect();
            let qubit = |s: &str| -> Result<usize> {
                s.parse()
                    .map_err(|_| bad(line, &format!("bad qubit index {s:?}")))
            };
            let axis = |s: &str| -> Result<PauliAxis> {
                s.parse().map_err(|_| bad(line, &format!("bad axis {s:?}")))
            };
            match words.as_slice() {
                [] => {}
                [first, ..] if first.starts_with('#') => {}
                ["---"] => layers.push(Vec::new()),
                ["QUBITS", n] => declared = Some(qubit(n)?),
                ["CX", c, t] => layers.last_mut().expect("non-empty").push(Gate::Cnot {
                    control: qubit(c)?,
                    target: qubit(t)?,
                }),
                ["BASIS", q, a] => layers.last_mut().expect("non-empty").push(Gate::Basis {
                    qubit: qubit(q)?,
                    axis: axis(a)?,
                }),
                ["ROT", q, a, angle] => {
                    let angle: f64 = angle
                        .parse()
                        .map_err(|_| bad(line, &format!("bad angle {angle:?}")))?;
                    layers.last_mut().expect("non-empty").push(Gate::Rotation {
                        qubit: qubit(q)?,
                        axis: axis(a)?,
                        angle,
                    })
                }
                _ => return Err(bad(line, &format!("unrecognized instruction {raw:?}"))),
            }
        }
        if layers.len() == 1 && layers[0].is_empty() {
            layers.clear();
        }
        let used = layers
            .iter()
            .flatten()
            .flat_map(Gate::qubits)
            .max()
            .map_or(0, |q| q + 1);
        let circuit = PulseCircuit {
            n_qubits: declared.unwrap_or(used),
            layers,
            steps: 1,
        };
        circuit.check_layers()?;
        Ok(circuit)
    }
}

fn apply_gate(u: &mut CMat, gate: &Gate, n: usize) {
    let dim = u.nrows();
    let bit = |q: usize| 1usize << (n - 1 - q);
    match *gate {
        Gate::Cnot { control, target } => {
            let (cb, tb) = (bit(control), bit(target));
            for row in 0..dim {
                if row & cb != 0 && row & tb == 0 {
                    u.swap_rows(row, row | tb);
                }
            }
        }
        _ => {
            let m = gate.single_qubit_matrix().expect("single-qubit gate");
            let q = gate.qubits()[0];
            let b = bit(q);
            for row in 0..dim {
                if row & b != 0 {
                    continue;
                }
                let (r0, r1) = (row, row | b);
                for col in 0..dim {
                    let a0 = u[(r0, col)];
                    let a1 = u[(r1, col)];
                    u[(r0, col)] = m[0][0] * a0 + m[0][1] * a1;
                    u[(r1, col)] = m[1][0] * a0 + m[1][1] * a1;
                }
            }
        }
    }
}

/// Dense unitary of `c`, refusing registers above `max_qubits`.
pub fn circuit_unitary(c: &PulseCircuit, max_qubits: usize) -> Result<CMat> {
    c.unitary(max_qubits)
}

/// Circuit for `exp(-i t P)`.
///
/// Uniform `X` or `Z` strings take three layers, other strings five, and
/// single-qubit operators one. A `-` sign flips the angle; `±i` phases are
/// rejected because the operator is then not Hermitian.
pub fn compile_pauli_exponential(p: &PauliOperator, t: f64) -> Result<PulseCircuit> {
    if p.is_identity() {
        return Err(Error::InvalidArgument(
            "the identity has no exponential circuit to compile".into(),
        ));
    }
    let angle = match p.phase_exp() {
        0 => t,
        2 => -t,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "{p} is not Hermitian; only ± phases can be exponentiated"
            )))
        }
    };
    let n = p.n_qubits();
    let support = p.support();
    let pivot = *support.last().expect("non-identity");
    let others = &support[..support.len() - 1];
    let axes: Vec<PauliAxis> = support
        .iter()
        .map(|&q| p.axis(q).expect("support"))
        .collect();

    if support.len() == 1 {
        return Ok(PulseCircuit {
            n_qubits: n,
            layers: vec![vec![Gate::Rotation {
                qubit: pivot,
                axis: axes[0],
                angle,
            }]],
            steps: 1,
        });
    }

    let all = |a: PauliAxis| axes.iter().all(|x| *x == a);
    let (fan, rot_axis): (Vec<Gate>, PauliAxis) = if all(PauliAxis::X) {
        (
            others
                .iter()
                .map(|&q| Gate::Cnot {
                    control: pivot,
                    target: q,
                })
                .collect(),
            PauliAxis::X,
        )
    } else {
        (
            others
                .iter()
                .map(|&q| Gate::Cnot {
                    control: q,
                    target: pivot,
                })
                .collect(),
            PauliAxis::Z,
        )
    };
    let rotation = vec![Gate::Rotation {
        qubit: pivot,
        axis: rot_axis,
        angle,
    }];
    let basis: Vec<Gate> = support
        .iter()
        .zip(&axes)
        .filter(|(_, a)| **a != PauliAxis::Z)
        .map(|(&qubit, &axis)| Gate::Basis { qubit, axis })
        .collect();

    let mut layers = Vec::with_capacity(5);
    let needs_basis = rot_axis == PauliAxis::Z && !basis.is_empty();
    if needs_basis {
        layers.push(basis.clone());
    }
    layers.push(fan.clone());
    layers.push(rotation);
    layers.push(fan);
    if needs_basis {
        layers.push(basis);
    }
    let circuit = PulseCircuit {
        n_qubits: n,
        layers,
        steps: 1,
    };
    circuit.check_layers()?;
    Ok(circuit)
}

/// Circuit for `exp(-i H dt)`.
///
/// Terms commute, so the product of per-term exponentials is exact. Terms that
/// encode the same base generator at the same level act on disjoint blocks and
/// share layers, giving depth at most `5 · g · r` for `g` generators per block.
pub fn compile_hamiltonian_step(h: &CodeHamiltonian, dt: f64) -> Result<PulseCircuit> {
    let terms = h.terms();
    for (a, ta) in terms.iter().enumerate() {
        for tb in &terms[a + 1..] {
            if !ta.pauli.commutes(&tb.pauli)? {
                return Err(Error::NonCommuting {
                    first: ta.pauli.to_string(),
                    second: tb.pauli.to_string(),
                });
            }
        }
    }
    let mut groups: BTreeMap<(usize, usize), Vec<PulseCircuit>> = BTreeMap::new();
    for term in terms {
        let part = compile_pauli_exponential(&term.pauli, term.coeff * dt)?;
        groups
            .entry((term.level, term.generator))
            .or_default()
            .push(part);
    }
    let mut out = PulseCircuit::empty(h.n_qubits());
    for parts in groups.values() {
        out.append(PulseCircuit::parallel(h.n_qubits(), parts)?);
    }
    Ok(out)
}

/// `exp(-i H t)` as `steps` repetitions of one step of length `t / steps`.
pub fn compile_evolution(h: &CodeHamiltonian, t: f64, steps: usize) -> Result<PulseCircuit> {
    if steps == 0 {
        return Err(Error::InvalidArgument("need at least one step".into()));
    }
    let mut c = compile_hamiltonian_step(h, t / steps as f64)?;
    c.steps = steps;
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogicalPauli {
    I,
    X,
    Y,
    Z,
}

impl FromStr for LogicalPauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" => Ok(LogicalPauli::I),
            "X" => Ok(LogicalPauli::X),
            "Y" => Ok(LogicalPauli::Y),
            "Z" => Ok(LogicalPauli::Z),
            other => Err(Error::InvalidArgument(format!(
                "unknown logical Pauli {other:?}"
            ))),
        }
    }
}

/// One layer of `π/2` rotations, equal to the logical representative up to a global phase.
pub fn compile_logical_pauli(
    code: &StabilizerCode,
    which: LogicalPauli,
    index: usize,
) -> Result<PulseCircuit> {
    let missing = || Error::InvalidArgument(format!("code has no logical qubit {index}"));
    let op = match which {
        LogicalPauli::I => return Ok(PulseCircuit::empty(code.n_qubits())),
        LogicalPauli::X => code.logical_x().get(index).cloned().ok_or_else(missing)?,
        LogicalPauli::Z => code.logical_z().get(index).cloned().ok_or_else(missing)?,
        LogicalPauli::Y => code.logical_y(index).ok_or_else(missing)?,
    };
    let layer = op
        .support()
        .into_iter()
        .map(|q| Gate::Rotation {
            qubit: q,
            axis: op.axis(q).expect("support"),
            angle: std::f64::consts::FRAC_PI_2,
        })
        .collect();
    Ok(PulseCircuit {
        n_qubits: code.n_qubits(),
        layers: vec![layer],
        steps: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{five_qubit_code, nine_qubit_subsystem_code};
    use crate::linalg::{hermitian_eigen, operator_norm};

    fn expm_pauli(p: &PauliOperator, t: f64) -> CMat {
        let dense = p.to_dense(12).unwrap();
        let dim = dense.nrows();
        let (vals, vecs) = hermitian_eigen(&dense);
        let phases = CMat::from_fn(dim, dim, |r, c| {
            if r == c {
                Complex64::from_polar(1.0, -vals[r] * t)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        &vecs * phases * vecs.adjoint()
    }

    #[test]
    fn basis_changes_are_self_inverse_and_map_z() {
        for axis in PauliAxis::ALL {
            let b = basis_change_matrix(axis);
            let b = CMat::from_row_slice(2, 2, &[b[0][0], b[0][1], b[1][0], b[1][1]]);
            assert!((&b * &b - CMat::identity(2, 2)).norm() < 1e-15);
            let s = axis.matrix();
            let s = CMat::from_row_slice(2, 2, &[s[0][0], s[0][1], s[1][0], s[1][1]]);
            let z = PauliAxis::Z.matrix();
            let z = CMat::from_row_slice(2, 2, &[z[0][0], z[0][1], z[1][0], z[1][1]]);
            assert!((&b * &s * &b - z).norm() < 1e-15);
        }
    }

    #[test]
    fn xxxx_exponential_has_depth_three() {
        let p: PauliOperator = "XXXX".parse().unwrap();
        let c = compile_pauli_exponential(&p, 0.37).unwrap();
        assert_eq!(c.depth(), 3);
        assert_eq!(c.cnot_count(), 6);
        let diff = c.unitary(12).unwrap() - expm_pauli(&p, 0.37);
        assert!(operator_norm(&diff) < 1e-12);
    }

    #[test]
    fn mixed_string_depth_five() {
        let p: PauliOperator = "XZZXI".parse().unwrap();
        let c = compile_pauli_exponential(&p, 0.1).unwrap();
        assert_eq!(c.depth(), 5);
        let diff = c.unitary(12).unwrap() - expm_pauli(&p, 0.1);
        assert!(operator_norm(&diff) < 1e-10);
        assert_eq!(
            compile_pauli_exponential(&"IZIZ".parse().unwrap(), 1.0)
                .unwrap()
                .depth(),
            3
        );
        assert_eq!(
            compile_pauli_exponential(&"IIYI".parse().unwrap(), 1.0)
                .unwrap()
                .depth(),
            1
        );
    }

    #[test]
    fn signs_and_errors() {
        let p: PauliOperator = "-XY".parse().unwrap();
        let c = compile_pauli_exponential(&p, 0.4).unwrap();
        let diff = c.unitary(12).unwrap() - expm_pauli(&p, 0.4);
        assert!(operator_norm(&diff) < 1e-12);
        assert!(compile_pauli_exponential(&"+iXY".parse().unwrap(), 0.4).is_err());
        assert!(compile_pauli_exponential(&"II".parse().unwrap(), 0.4).is_err());
        let zero = compile_pauli_exponential(&"XZ".parse().unwrap(), 0.0).unwrap();
        assert!((zero.unitary(12).unwrap() - CMat::identity(4, 4)).norm() < 1e-14);
    }

    #[test]
    fn single_cnot_unitary() {
        let c: PulseCircuit = "CX 0 1\n".parse().unwrap();
        let u = c.unitary(12).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(u[(0, 0)], one);
        assert_eq!(u[(1, 1)], one);
        assert_eq!(u[(3, 2)], one);
        assert_eq!(u[(2, 3)], one);
        let empty = PulseCircuit::empty(2).unitary(12).unwrap();
        assert_eq!(empty, CMat::identity(4, 4));
    }

    #[test]
    fn layer_rules() {
        assert!("CX 0 1\nCX 2 1\n".parse::<PulseCircuit>().is_ok());
        assert!("CX 0 1\nCX 0 2\n".parse::<PulseCircuit>().is_ok());
        assert!("CX 0 1\nCX 1 2\n".parse::<PulseCircuit>().is_err());
        assert!("ROT 0 X 0.1\nBASIS 0 Y\n".parse::<PulseCircuit>().is_err());
        assert!("QUBITS 2\nCX 0 2\n".parse::<PulseCircuit>().is_err());
        assert!("FOO 1\n".parse::<PulseCircuit>().is_err());
    }

    #[test]
    fn text_and_json_round_trip() {
        let c = compile_pauli_exponential(&"XZZXI".parse().unwrap(), 0.123456789).unwrap();
        let back: PulseCircuit = c.to_text().parse().unwrap();
        assert_eq!(back, c);
        assert_eq!(PulseCircuit::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn hamiltonian_step_flat() {
        let h = CodeHamiltonian::build_flat(&five_qubit_code(), 1.0).unwrap();
        let dt = 0.3;
        let c = compile_hamiltonian_step(&h, dt).unwrap();
        assert!(c.depth() <= 20);
        let dense = h.to_dense(12).unwrap();
        let (vals, vecs) = hermitian_eigen(&dense);
        let phases = CMat::from_fn(32, 32, |r, k| {
            if r == k {
                Complex64::from_polar(1.0, -vals[r] * dt)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let exact = &vecs * phases * vecs.adjoint();
        assert!(operator_norm(&(c.unitary(12).unwrap() - exact)) < 1e-10);
    }

    #[test]
    fn hamiltonian_step_level_two() {
        let h = CodeHamiltonian::build_concatenated(&five_qubit_code(), 2, 1.0).unwrap();
        let c = compile_hamiltonian_step(&h, 0.1).unwrap();
        assert!(c.depth() <= 40);
        c.check_layers().unwrap();
        // The first five layers run generator 0 on all five level-1 blocks.
        let rotations = c.layers[2]
            .iter()
            .filter(|g| matches!(g, Gate::Rotation { .. }))
            .count();
        assert_eq!(rotations, 5);
    }

    #[test]
    fn logical_paulis() {
        let five = five_qubit_code();
        let c = compile_logical_pauli(&five, LogicalPauli::X, 0).unwrap();
        assert_eq!(c.depth(), 1);
        assert_eq!(c.gate_count(), 5);
        let u = c.unitary(12).unwrap();
        let target = five.logical_x()[0].to_dense(12).unwrap();
        // (-i)^5 global phase.
        assert!((u - target * Complex64::new(0.0, -1.0)).norm() < 1e-12);
        let nine = nine_qubit_subsystem_code();
        let c = compile_logical_pauli(&nine, LogicalPauli::X, 0).unwrap();
        let qubits: Vec<usize> = c.gates().flat_map(Gate::qubits).collect();
        assert_eq!(qubits, vec![0, 1, 2]);
        assert_eq!(
            compile_logical_pauli(&nine, LogicalPauli::I, 0)
                .unwrap()
                .depth(),
            0
        );
        assert!(compile_logical_pauli(&nine, LogicalPauli::Z, 3).is_err());
    }
}
