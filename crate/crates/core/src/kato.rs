//! Kato's degenerate perturbation series for stabilizer Hamiltonians.
//!
//! For `H = H₀ + xV` with `H₀ = Σ_i E_i Π_i`:
//!
//! ```text
//! G_i^(0) = -Π_i,   G_i^(k) = Σ_{j≠i} Π_j / (E_j - E_i)^k
//! A_i^(m) = (-1)^(m-1) Σ_{k₁+…+k_{m+1} = m-1} G^(k₁) V G^(k₂) V … V G^(k_{m+1})
//! B_i^(m) = (-1)^(m-1) Σ_{k₁+…+k_{m+1} = m}   G^(k₁) V G^(k₂) V … V G^(k_{m+1})
//! ```
//!
//! so that `H P_i(x) = E_i P_i(x) + Σ_m x^m A_i^(m)` and `P_i(x) = Π_i + Σ_m x^m B_i^(m)`.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{StabilizerCode, Syndrome};
use crate::error::{Error, Result};
use crate::hamiltonian::CodeHamiltonian;
use crate::linalg::{
    check_dense_cap, hermitian_eigen, operator_norm, trace, CMat, LinearAction, PauliSum,
};
use crate::pauli::{PauliAxis, PauliOperator};

/// Default highest series order; the composition count grows like `C(2m, m)`.
pub const DEFAULT_MAX_ORDER: usize = 6;
/// Default qubit cap for dense perturbation work.
pub const DEFAULT_KATO_MAX_QUBITS: usize = 10;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// A single-qubit perturbation `λ · σ_axis` on one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationTerm {
    pub qubit: usize,
    pub axis: PauliAxis,
    pub lambda: f64,
}

/// `x · Σ λ_{Q,q} Q_q` over single-qubit Paulis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub terms: Vec<PerturbationTerm>,
    pub x: f64,
}

impl PerturbationSpec {
    /// All `3n` coefficients equal to one.
    pub fn uniform(n: usize, x: f64) -> Self {
        PerturbationSpec {
            terms: (0..n)
                .flat_map(|qubit| {
                    PauliAxis::ALL.map(|axis| PerturbationTerm {
                        qubit,
                        axis,
                        lambda: 1.0,
                    })
                })
                .collect(),
            x,
        }
    }

    /// Coefficients drawn uniformly from `[-1, 1]`, then normalized.
    pub fn random<R: Rng + ?Sized>(n: usize, x: f64, rng: &mut R) -> Self {
        let mut spec = PerturbationSpec::uniform(n, x);
        for t in &mut spec.terms {
            t.lambda = rng.random_range(-1.0..=1.0);
        }
        spec.normalized()
    }

    pub fn zero(x: f64) -> Self {
        PerturbationSpec {
            terms: Vec::new(),
            x,
        }
    }

    /// Rescales so that `max |λ| = 1`, folding the scale into `x`.
    pub fn normalized(mut self) -> Self {
        let scale = self
            .terms
            .iter()
            .map(|t| t.lambda.abs())
            .fold(0.0, f64::max);
        if scale > 0.0 {
            for t in &mut self.terms {
                t.lambda /= scale;
            }
            self.x *= scale;
        }
        self
    }

    /// `V = Σ λ Q` (without the strength `x`).
    pub fn operator(&self, n_qubits: usize) -> Result<PauliSum> {
        let mut v = PauliSum::new(n_qubits);
        for t in &self.terms {
            if t.qubit >= n_qubits {
                return Err(Error::InvalidArgument(format!(
                    "perturbation on qubit {} of a {n_qubits}-qubit register",
                    t.qubit
                )));
            }
            if t.lambda != 0.0 {
                v.push(
                    real(t.lambda),
                    PauliOperator::single(n_qubits, t.qubit, t.axis),
                );
            }
        }
        Ok(v)
    }
}

/// An operator in either Pauli-sum or dense form.
#[derive(Debug, Clone)]
pub enum Operator {
    Pauli(PauliSum),
    Dense(CMat),
}

impl LinearAction for Operator {
    fn dim(&self) -> usize {
        match self {
            Operator::Pauli(p) => p.dim(),
            Operator::Dense(d) => d.nrows(),
        }
    }

    fn left_mul(&self, m: &CMat) -> CMat {
        match self {
            Operator::Pauli(p) => p.left_mul(m),
            Operator::Dense(d) => d * m,
        }
    }

    fn right_mul(&self, m: &CMat) -> CMat {
        match self {
            Operator::Pauli(p) => p.right_mul(m),
            Operator::Dense(d) => m * d,
        }
    }

    fn to_dense(&self) -> CMat {
        match self {
            Operator::Pauli(p) => p.to_dense(),
            Operator::Dense(d) => d.clone(),
        }
    }
}

#[derive(Debug, Clone)]
enum Levels {
    /// Level `v` collects the syndromes of weight `v`; operators are combinations
    /// of the `2^m` stabilizer-group elements.
    Stabilizer {
        n_qubits: usize,
        generators: usize,
        group: Vec<PauliOperator>,
    },
    Dense {
        projectors: Vec<CMat>,
    },
}

/// Complete orthogonal family of level projectors with their energies.
#[derive(Debug, Clone)]
pub struct LevelDecomposition {
    dim: usize,
    energies: Vec<f64>,
    levels: Levels,
}

fn krawtchouk(m: usize, v: usize, t: usize) -> f64 {
    let binom = |a: usize, b: usize| -> f64 {
        if b > a {
            return 0.0;
        }
        (0..b).fold(1.0, |acc, i| acc * (a - i) as f64 / (i + 1) as f64)
    };
    (0..=v.min(t))
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * binom(t, j) * binom(m - t, v - j)
        })
        .sum()
}

impl LevelDecomposition {
    /// Levels of a stabilizer Hamiltonian: level `v` has energy `-mJ/2 + vJ`.
    pub fn from_hamiltonian(h: &CodeHamiltonian, max_qubits: usize) -> Result<Self> {
        check_dense_cap("level projectors", h.n_qubits(), max_qubits)?;
        let n = h.n_qubits();
        let gens: Vec<&PauliOperator> = h.terms().iter().map(|t| &t.pauli).collect();
        let m = gens.len();
        let mut group = Vec::with_capacity(1 << m);
        group.push(PauliOperator::identity(n));
        for mask in 1usize..(1 << m) {
            let low = mask.trailing_zeros() as usize;
            let prev = group[mask & (mask - 1)].clone();
            group.push(prev.product(gens[low]));
        }
        let energies = (0..=m)
            .map(|v| -(m as f64) * h.J() / 2.0 + v as f64 * h.J())
            .collect();
        Ok(LevelDecomposition {
            dim: 1 << n,
            energies,
            levels: Levels::Stabilizer {
                n_qubits: n,
                generators: m,
                group,
            },
        })
    }

    /// From explicit projectors; they must be complete and orthogonal.
    pub fn from_dense(energies: Vec<f64>, projectors: Vec<CMat>) -> Result<Self> {
        if energies.len() != projectors.len() || projectors.is_empty() {
            return Err(Error::InvalidArgument(
                "need one projector per energy".into(),
            ));
        }
        let dim = projectors[0].nrows();
        let mut sum = CMat::zeros(dim, dim);
        for p in &projectors {
            if p.nrows() != dim || p.ncols() != dim {
                return Err(Error::InvalidArgument("projector sizes differ".into()));
            }
            sum += p;
        }
        if (sum - CMat::identity(dim, dim)).norm() > 1e-9 {
            return Err(Error::InvalidArgument(
                "projectors do not sum to identity".into(),
            ));
        }
        Ok(LevelDecomposition {
            dim,
            energies,
            levels: Levels::Dense { projectors },
        })
    }

    /// Spectral decomposition of a dense Hermitian `H₀`, merging eigenvalues within `tol`.
    pub fn from_dense_hamiltonian(h0: &CMat, tol: f64) -> Result<Self> {
        let (vals, vecs) = hermitian_eigen(h0);
        let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
        for (k, v) in vals.iter().enumerate() {
            match groups.last_mut() {
                Some((e, idx)) if (v - *e).abs() <= tol => idx.push(k),
                _ => groups.push((*v, vec![k])),
            }
        }
        let dim = h0.nrows();
        let mut energies = Vec::new();
        let mut projectors = Vec::new();
        for (_, idx) in groups {
            let mut p = CMat::zeros(dim, dim);
            let mut mean = 0.0;
            for &k in &idx {
                let col = vecs.column(k);
                p += col * col.adjoint();
                mean += vals[k];
            }
            energies.push(mean / idx.len() as f64);
            projectors.push(p);
        }
        LevelDecomposition::from_dense(energies, projectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_levels(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Distance from level `i` to the nearest other level; infinite for a single level.
    pub fn gap(&self, i: usize) -> f64 {
        self.energies
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, e)| (e - self.energies[i]).abs())
            .fold(f64::INFINITY, f64::min)
    }

    fn group_combination(&self, coeff: impl Fn(usize) -> f64) -> Operator {
        match &self.levels {
            Levels::Stabilizer {
                n_qubits, group, ..
            } => {
                let mut s = PauliSum::new(*n_qubits);
                for (mask, op) in group.iter().enumerate() {
                    let c = coeff(mask);
                    if c != 0.0 {
                        s.push(real(c), op.clone());
                    }
                }
                Operator::Pauli(s)
            }
            Levels::Dense { .. } => unreachable!("dense levels have no group"),
        }
    }

    /// `Σ_j w_j Π_j`.
    fn level_combination(&self, weights: &[f64]) -> Operator {
        match &self.levels {
            Levels::Stabilizer { generators, .. } => {
                let m = *generators;
                let scale = 1.0 / (1u64 << m) as f64;
                self.group_combination(|mask| {
                    let t = mask.count_ones() as usize;
                    weights
                        .iter()
                        .enumerate()
                        .filter(|(_, w)| **w != 0.0)
                        .map(|(v, w)| w * krawtchouk(m, v, t))
                        .sum::<f64>()
                        * scale
                })
            }
            Levels::Dense { projectors } => {
                let mut out = CMat::zeros(self.dim, self.dim);
                for (p, w) in projectors.iter().zip(weights) {
                    if *w != 0.0 {
                        out += p * real(*w);
                    }
                }
                Operator::Dense(out)
            }
        }
    }

    pub fn projector(&self, i: usize) -> Operator {
        let mut w = vec![0.0; self.n_levels()];
        w[i] = 1.0;
        self.level_combination(&w)
    }

    /// `G_i^(k)`.
    pub fn resolvent_power(&self, i: usize, k: usize) -> Operator {
        let ei = self.energies[i];
        let w: Vec<f64> = self
            .energies
            .iter()
            .enumerate()
            .map(|(j, e)| match (k, j == i) {
                (0, true) => -1.0,
                (0, false) | (_, true) => 0.0,
                _ => 1.0 / (e - ei).powi(k as i32),
            })
            .collect();
        self.level_combination(&w)
    }

    /// Per-syndrome projectors `Π_{i,α}` inside level `i`; a dense level is one sector.
    pub fn sector_projectors(&self, i: usize) -> Vec<(Option<Syndrome>, Operator)> {
        match &self.levels {
            Levels::Stabilizer { generators, .. } => {
                let m = *generators;
                let scale = 1.0 / (1u64 << m) as f64;
                (0usize..(1 << m))
                    .filter(|a| a.count_ones() as usize == i)
                    .map(|alpha| {
                        let op = self.group_combination(|mask| {
                            if (alpha & mask).count_ones() % 2 == 0 {
                                scale
                            } else {
                                -scale
                            }
                        });
                        (Some(Syndrome::from_index(m, alpha)), op)
                    })
                    .collect()
            }
            Levels::Dense { projectors } => vec![(None, Operator::Dense(projectors[i].clone()))],
        }
    }
}

/// `Δ (4x‖V‖/Δ)^(p+1)` when `x‖V‖ ≤ Δ/8`, else `(Δ/2) q^(p+1) / (1-q)`.
pub fn truncation_bound(delta: f64, x: f64, norm_v: f64, p: usize) -> Result<f64> {
    if x == 0.0 || norm_v == 0.0 || delta.is_infinite() {
        return Ok(0.0);
    }
    let q = 4.0 * x * norm_v / delta;
    if q >= 1.0 {
        return Err(Error::Divergence { ratio: q });
    }
    let tail = q.powi(p as i32 + 1);
    Ok(if q <= 0.5 {
        delta * tail
    } else {
        delta / 2.0 * tail / (1.0 - q)
    })
}

/// `2 (4x‖V‖/Δ)^(p+1)` for the perturbed projector.
pub fn projector_truncation_bound(delta: f64, x: f64, norm_v: f64, p: usize) -> Result<f64> {
    if x == 0.0 || norm_v == 0.0 || delta.is_infinite() {
        return Ok(0.0);
    }
    let q = 4.0 * x * norm_v / delta;
    if q >= 1.0 {
        return Err(Error::Divergence { ratio: q });
    }
    Ok(2.0 * q.powi(p as i32 + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KatoConfig {
    pub max_order: usize,
    pub max_qubits: usize,
}

impl Default for KatoConfig {
    fn default() -> Self {
        KatoConfig {
            max_order: DEFAULT_MAX_ORDER,
            max_qubits: DEFAULT_KATO_MAX_QUBITS,
        }
    }
}

/// Norm of one `Π_{i,α} W Π_{i,β}` block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorBlock {
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub norm: f64,
}

/// The effective operator split by projector sandwiches; the four blocks sum to it.
#[derive(Debug, Clone)]
pub struct Classification {
    /// `Σ_α Π_{i,α} W Π_{i,α}`
    pub within_diagonal: CMat,
    /// `Σ_{α≠β} Π_{i,α} W Π_{i,β}`
    pub within_offdiagonal: CMat,
    /// `Π_i W (I-Π_i) + (I-Π_i) W Π_i`
    pub cross_level: CMat,
    /// `(I-Π_i) W (I-Π_i)`
    pub outside: CMat,
    /// Nonzero within-level sector blocks.
    pub sector_blocks: Vec<SectorBlock>,
    /// `‖Π_i W Π_j‖` for each other level `j`.
    pub cross_level_norms: Vec<(usize, f64)>,
}

/// `W_L` in `Π_i (Σ x^m A^(m)) Π_i = Σ_L W_L ⊗ L̄`.
#[derive(Debug, Clone, Serialize)]
pub struct LogicalComponent {
    pub label: String,
    pub norm: f64,
    /// Norm of the part of `W_L` that acts on gauge qubits; zero for subspace codes.
    pub gauge_nontrivial_norm: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SecondOrder {
    /// `b` in `A^(2) ≈ b Π_i`, from `tr A^(2) / tr Π_i`.
    pub coefficient: f64,
    /// `‖A^(2) - b Π_i‖`
    pub residual_norm: f64,
    pub proportional: bool,
}

#[derive(Debug, Clone)]
pub struct EffectiveHamiltonianReport {
    pub level: usize,
    pub energy: f64,
    pub x: f64,
    pub order: usize,
    pub gap: f64,
    pub norm_v: f64,
    /// `4x‖V‖/Δ`
    pub ratio: f64,
    pub truncation_bound: f64,
    pub projector_bound: f64,
    /// `J (12 n x / J)^(p+1)`: the same bound with `‖V‖ ≤ 3n` and `Δ = J`.
    pub coarse_bound: Option<f64>,
    /// `x‖V‖ < Δ/2`
    pub converged: bool,
    /// `x^m A^(m)` for `m = 1..=p`.
    pub series: Vec<CMat>,
    /// `B^(m)` for `m = 1..=p` (unscaled).
    pub projector_terms: Vec<CMat>,
    /// `E_i (Π_i + Σ x^m B^(m)) + Σ x^m A^(m)`
    pub effective: CMat,
    pub classification: Classification,
    pub logical: Vec<LogicalComponent>,
    pub first_order_norm: f64,
    pub first_order_vanishes: bool,
    pub second_order: Option<SecondOrder>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockNorms {
    pub within_diagonal: f64,
    pub within_offdiagonal: f64,
    pub cross_level: f64,
    pub outside: f64,
}

/// Norms-only view of a report, suitable for JSON.
#[derive(Debug, Clone, Serialize)]
pub struct ReportSummary {
    pub level: usize,
    pub energy: f64,
    pub x: f64,
    pub order: usize,
    pub gap: f64,
    pub norm_v: f64,
    pub ratio: f64,
    pub truncation_bound: f64,
    pub projector_bound: f64,
    pub coarse_bound: Option<f64>,
    pub converged: bool,
    pub series_norms: Vec<f64>,
    pub projector_term_norms: Vec<f64>,
    pub blocks: BlockNorms,
    pub sector_blocks: Vec<SectorBlock>,
    pub cross_level_norms: Vec<(usize, f64)>,
    pub logical: Vec<LogicalComponent>,
    pub first_order_norm: f64,
    pub first_order_vanishes: bool,
    pub second_order: Option<SecondOrder>,
}

impl EffectiveHamiltonianReport {
    pub fn summary(&self) -> ReportSummary {
        let c = &self.classification;
        ReportSummary {
            level: self.level,
            energy: self.energy,
            x: self.x,
            order: self.order,
            gap: self.gap,
            norm_v: self.norm_v,
            ratio: self.ratio,
            truncation_bound: self.truncation_bound,
            projector_bound: self.projector_bound,
            coarse_bound: self.coarse_bound,
            converged: self.converged,
            series_norms: self.series.iter().map(operator_norm).collect(),
            projector_term_norms: self.projector_terms.iter().map(operator_norm).collect(),
            blocks: BlockNorms {
                within_diagonal: operator_norm(&c.within_diagonal),
                within_offdiagonal: operator_norm(&c.within_offdiagonal),
                cross_level: operator_norm(&c.cross_level),
                outside: operator_norm(&c.outside),
            },
            sector_blocks: c.sector_blocks.clone(),
            cross_level_norms: c.cross_level_norms.clone(),
            logical: self.logical.clone(),
            first_order_norm: self.first_order_norm,
            first_order_vanishes: self.first_order_vanishes,
            second_order: self.second_order,
        }
    }

    /// `Σ_m x^m A^(m)`
    pub fn series_sum(&self) -> CMat {
        let dim = self.effective.nrows();
        self.series
            .iter()
            .fold(CMat::zeros(dim, dim), |acc, a| acc + a)
    }
}

/// Logical Pauli basis of a code together with the twirling groups.
struct LogicalFrame {
    n_qubits: usize,
    /// Per logical qubit: `X̄, Ȳ, Z̄`.
    logical: Vec<[PauliOperator; 3]>,
    /// Per gauge qubit: `X, Y, Z` gauge operators.
    gauge: Vec<[PauliOperator; 3]>,
}

fn pauli_triple(x: &PauliOperator, z: &PauliOperator) -> [PauliOperator; 3] {
    let xz = x.product(z);
    let phase = xz.phase_exp() + 1;
    [x.clone(), xz.with_phase(phase), z.clone()]
}

fn single(op: &PauliOperator) -> PauliSum {
    let mut s = PauliSum::new(op.n_qubits());
    s.push(ONE, op.clone());
    s
}

fn adjoint(op: &PauliOperator) -> PauliOperator {
    let phase = (4 - op.phase_exp()) % 4;
    op.clone().with_phase(phase)
}

impl LogicalFrame {
    fn new(code: &StabilizerCode) -> Self {
        LogicalFrame {
            n_qubits: code.n_qubits(),
            logical: code
                .logical_x()
                .iter()
                .zip(code.logical_z())
                .map(|(x, z)| pauli_triple(x, z))
                .collect(),
            gauge: code
                .gauge_x()
                .iter()
                .zip(code.gauge_z())
                .map(|(x, z)| pauli_triple(x, z))
                .collect(),
        }
    }

    /// Averages `M O M†` over `M ∈ {I, X, Y, Z}` of each listed pair.
    fn twirl(&self, o: &CMat, pairs: &[[PauliOperator; 3]]) -> CMat {
        let mut acc = o.clone();
        for triple in pairs {
            let mut sum = acc.clone();
            for m in triple {
                let left = single(m).left_mul(&acc);
                sum += single(&adjoint(m)).right_mul(&left);
            }
            acc = sum * real(0.25);
        }
        acc
    }

    fn decompose(&self, w: &CMat) -> Vec<LogicalComponent> {
        let k = self.logical.len();
        let mut out = Vec::with_capacity(1 << (2 * k));
        for index in 0..(1usize << (2 * k)) {
            let mut l = PauliOperator::identity(self.n_qubits);
            let mut label = String::with_capacity(k);
            for (j, triple) in self.logical.iter().enumerate() {
                match (index >> (2 * j)) & 3 {
                    0 => label.push('I'),
                    a => {
                        l = l.product(&triple[a - 1]);
                        label.push(['X', 'Y', 'Z'][a - 1]);
                    }
                }
            }
            let lw = single(&adjoint(&l)).left_mul(w);
            let wl = self.twirl(&lw, &self.logical);
            let gauge_nontrivial_norm = if self.gauge.is_empty() {
                0.0
            } else {
                operator_norm(&(&wl - self.twirl(&wl, &self.gauge)))
            };
            out.push(LogicalComponent {
                label,
                norm: operator_norm(&wl),
                gauge_nontrivial_norm,
            });
        }
        out
    }
}

/// Evaluates series terms for one `H₀` and one perturbation.
pub struct KatoEngine {
    decomp: LevelDecomposition,
    v: Operator,
    norm_v: f64,
    config: KatoConfig,
    frame: Option<LogicalFrame>,
    n_qubits: Option<usize>,
    j: f64,
}

impl KatoEngine {
    pub fn new(h: &CodeHamiltonian, spec: &PerturbationSpec, config: KatoConfig) -> Result<Self> {
        let decomp = LevelDecomposition::from_hamiltonian(h, config.max_qubits)?;
        let v = spec.operator(h.n_qubits())?;
        let norm_v = operator_norm(&v.to_dense());
        Ok(KatoEngine {
            decomp,
            v: Operator::Pauli(v),
            norm_v,
            config,
            frame: Some(LogicalFrame::new(h.code())),
            n_qubits: Some(h.n_qubits()),
            j: h.J(),
        })
    }

    /// Engine over explicit levels and a dense perturbation, with no code structure.
    pub fn from_parts(decomp: LevelDecomposition, v: CMat, config: KatoConfig) -> Result<Self> {
        if v.nrows() != decomp.dim() || v.ncols() != decomp.dim() {
            return Err(Error::InvalidArgument(
                "perturbation size differs from H0".into(),
            ));
        }
        let norm_v = operator_norm(&v);
        Ok(KatoEngine {
            decomp,
            v: Operator::Dense(v),
            norm_v,
            config,
            frame: None,
            n_qubits: None,
            j: 1.0,
        })
    }

    pub fn decomposition(&self) -> &LevelDecomposition {
        &self.decomp
    }

    pub fn norm_v(&self) -> f64 {
        self.norm_v
    }

    pub fn v_dense(&self) -> CMat {
        self.v.to_dense()
    }

    /// `H₀ + xV` as a dense matrix.
    pub fn perturbed_dense(&self, x: f64) -> CMat {
        let h0 = self
            .decomp
            .level_combination(self.decomp.energies())
            .to_dense();
        h0 + self.v.to_dense() * real(x)
    }

    pub fn resolvent_power(&self, i: usize, k: usize) -> Result<CMat> {
        self.check_level(i)?;
        Ok(self.decomp.resolvent_power(i, k).to_dense())
    }

    fn check_level(&self, i: usize) -> Result<()> {
        if i >= self.decomp.n_levels() {
            return Err(Error::InvalidArgument(format!(
                "level {i} out of range (0..{})",
                self.decomp.n_levels()
            )));
        }
        Ok(())
    }

    fn check_order(&self, m: usize) -> Result<()> {
        if m > self.config.max_order {
            return Err(Error::OrderTooLarge {
                order: m,
                max: self.config.max_order,
            });
        }
        if m == 0 {
            return Err(Error::InvalidArgument("series order starts at 1".into()));
        }
        Ok(())
    }

    /// `Σ G^(k₁) V G^(k₂) … V G^(k_{m+1})` over compositions of `total`.
    ///
    /// Compositions are visited in lexicographic order and shared prefixes are
    /// multiplied once; the top-level split is parallel and summed in order.
    fn composition_sum(&self, i: usize, m: usize, total: usize) -> CMat {
        let g: Vec<Operator> = (0..=total)
            .map(|k| self.decomp.resolvent_power(i, k))
            .collect();
        let parts: Vec<CMat> = (0..=total)
            .into_par_iter()
            .map(|k1| self.extend(g[k1].to_dense(), 1, total - k1, m, &g))
            .collect();
        let dim = self.decomp.dim();
        parts
            .into_iter()
            .fold(CMat::zeros(dim, dim), |acc, p| acc + p)
    }

    fn extend(
        &self,
        prefix: CMat,
        placed: usize,
        remaining: usize,
        m: usize,
        g: &[Operator],
    ) -> CMat {
        let pv = self.v.right_mul(&prefix);
        if placed == m {
            return g[remaining].right_mul(&pv);
        }
        let dim = self.decomp.dim();
        let mut acc = CMat::zeros(dim, dim);
        for k in 0..=remaining {
            acc += self.extend(g[k].right_mul(&pv), placed + 1, remaining - k, m, g);
        }
        acc
    }

    fn sign(m: usize) -> Complex64 {
        if m % 2 == 1 {
            ONE
        } else {
            -ONE
        }
    }

    /// `A_i^(m)`
    pub fn kato_term(&self, i: usize, m: usize) -> Result<CMat> {
        self.check_level(i)?;
        self.check_order(m)?;
        Ok(self.composition_sum(i, m, m - 1) * Self::sign(m))
    }

    /// `B_i^(m)`
    pub fn projector_term(&self, i: usize, m: usize) -> Result<CMat> {
        self.check_level(i)?;
        self.check_order(m)?;
        Ok(self.composition_sum(i, m, m) * Self::sign(m))
    }

    pub fn truncation_bound(&self, i: usize, x: f64, p: usize) -> Result<f64> {
        truncation_bound(self.decomp.gap(i), x, self.norm_v, p)
    }

    /// Effective Hamiltonian of level `i` to order `p` at strength `x`.
    pub fn effective_hamiltonian(
        &self,
        i: usize,
        x: f64,
        p: usize,
    ) -> Result<EffectiveHamiltonianReport> {
        self.check_level(i)?;
        self.check_order(p)?;
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "x must be non-negative, got {x}"
            )));
        }
        let gap = self.decomp.gap(i);
        let truncation = self.truncation_bound(i, x, p)?;
        let projector_bound = projector_truncation_bound(gap, x, self.norm_v, p)?;
        let ratio = if gap.is_infinite() {
            0.0
        } else {
            4.0 * x * self.norm_v / gap
        };
        let energy = self.decomp.energies()[i];
        let dim = self.decomp.dim();
        let pi = self.decomp.projector(i);
        let pi_dense = pi.to_dense();

        let mut series = Vec::with_capacity(p);
        let mut projector_terms = Vec::with_capacity(p);
        let mut a_terms = Vec::with_capacity(p);
        for m in 1..=p {
            let a = self.kato_term(i, m)?;
            series.push(&a * real(x.powi(m as i32)));
            a_terms.push(a);
            projector_terms.push(self.projector_term(i, m)?);
        }
        let mut effective = &pi_dense * real(energy);
        for (m, (s, b)) in series.iter().zip(&projector_terms).enumerate() {
            effective += s;
            effective += b * real(energy * x.powi(m as i32 + 1));
        }

        let classification = self.classify(i, &pi, &effective);
        let logical = match &self.frame {
            Some(frame) => {
                let perturbative = series.iter().fold(CMat::zeros(dim, dim), |acc, s| acc + s);
                let sandwiched = pi.right_mul(&pi.left_mul(&perturbative));
                frame.decompose(&sandwiched)
            }
            None => Vec::new(),
        };

        let first_order_norm = operator_norm(&a_terms[0]);
        let second_order = a_terms.get(1).map(|a2| {
            let rank = trace(&pi_dense).re;
            let coefficient = trace(a2).re / rank;
            let residual_norm = operator_norm(&(a2 - &pi_dense * real(coefficient)));
            SecondOrder {
                coefficient,
                residual_norm,
                proportional: residual_norm < 1e-10,
            }
        });
        let coarse_bound = self
            .n_qubits
            .map(|n| self.j * (12.0 * n as f64 * x / self.j).powi(p as i32 + 1));

        Ok(EffectiveHamiltonianReport {
            level: i,
            energy,
            x,
            order: p,
            gap,
            norm_v: self.norm_v,
            ratio,
            truncation_bound: truncation,
            projector_bound,
            coarse_bound,
            converged: x * self.norm_v < gap / 2.0,
            series,
            projector_terms,
            effective,
            classification,
            logical,
            first_order_norm,
            first_order_vanishes: first_order_norm < 1e-12,
            second_order,
        })
    }

    fn classify(&self, i: usize, pi: &Operator, w: &CMat) -> Classification {
        let dim = self.decomp.dim();
        let pw = pi.left_mul(w);
        let wp = pi.right_mul(w);
        let inside = pi.right_mul(&pw);
        let sectors = self.decomp.sector_projectors(i);
        let mut within_diagonal = CMat::zeros(dim, dim);
        let mut sector_blocks = Vec::new();
        let left: Vec<CMat> = sectors.iter().map(|(_, s)| s.left_mul(w)).collect();
        for (a, (sa, _)) in sectors.iter().enumerate() {
            for (b, (sb, pb)) in sectors.iter().enumerate() {
                let block = pb.right_mul(&left[a]);
                if a == b {
                    within_diagonal += &block;
                }
                if block.norm() > 1e-14 {
                    sector_blocks.push(SectorBlock {
                        alpha: sa.as_ref().map(Syndrome::to_string),
                        beta: sb.as_ref().map(Syndrome::to_string),
                        norm: operator_norm(&block),
                    });
                }
            }
        }
        let within_offdiagonal = &inside - &within_diagonal;
        let cross_level = &pw + &wp - &inside * real(2.0);
        let outside = w - &pw - &wp + &inside;
        let cross_level_norms = (0..self.decomp.n_levels())
            .filter(|j| *j != i)
            .map(|j| {
                let block = self.decomp.projector(j).right_mul(&pw);
                let norm = if block.norm() > 1e-14 {
                    operator_norm(&block)
                } else {
                    0.0
                };
                (j, norm)
            })
            .collect();
        Classification {
            within_diagonal,
            within_offdiagonal,
            cross_level,
            outside,
            sector_blocks,
            cross_level_norms,
        }
    }
}

/// Dense `Σ_j Π_j` spectral projector onto the eigenvectors with indices in `range`.
pub fn spectral_projector(vectors: &CMat, range: std::ops::Range<usize>) -> CMat {
    let dim = vectors.nrows();
    let mut p = CMat::zeros(dim, dim);
    for k in range {
        let col = vectors.column(k);
        p += col * col.adjoint();
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{five_qubit_code, nine_qubit_subsystem_code};
    use crate::linalg::hermitian_eigenvalues;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    fn two_level(delta: f64) -> KatoEngine {
        let decomp = LevelDecomposition::from_dense(
            vec![0.0, delta],
            vec![
                CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO]),
                CMat::from_row_slice(2, 2, &[ZERO, ZERO, ZERO, ONE]),
            ],
        )
        .unwrap();
        let v = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        KatoEngine::from_parts(decomp, v, KatoConfig::default()).unwrap()
    }

    #[test]
    fn two_level_resolvents() {
        let e = two_level(2.0);
        let g0 = e.resolvent_power(0, 0).unwrap();
        assert_eq!(g0[(0, 0)], -ONE);
        let g1 = e.resolvent_power(0, 1).unwrap();
        assert!((g1[(1, 1)] - real(0.5)).norm() < 1e-15);
        assert_eq!(g1[(0, 0)], ZERO);
    }

    #[test]
    fn two_level_second_order_energy() {
        let delta = 1.0;
        let e = two_level(delta);
        let a1 = e.kato_term(0, 1).unwrap();
        assert!(a1.norm() < 1e-15);
        let a2 = e.kato_term(0, 2).unwrap();
        assert!((a2[(0, 0)] - real(-1.0 / delta)).norm() < 1e-14);
        assert!(a2[(1, 1)].norm() < 1e-15);
        let x = 1e-3;
        let exact = (delta - (delta * delta + 4.0 * x * x).sqrt()) / 2.0;
        assert!((exact - x * x * a2[(0, 0)].re).abs() < 1e-11);
    }

    #[test]
    fn two_level_projector_first_order() {
        let delta = 1.0;
        let e = two_level(delta);
        let b1 = e.projector_term(0, 1).unwrap();
        // Exact ground vector ∝ (1, -x/Δ + O(x³)), so P ≈ Π₀ - (x/Δ)(|0⟩⟨1| + |1⟩⟨0|).
        assert!((b1[(0, 1)] - real(-1.0 / delta)).norm() < 1e-14);
        assert!((b1[(1, 0)] - real(-1.0 / delta)).norm() < 1e-14);
        assert!(b1[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn bounds() {
        assert_eq!(truncation_bound(1.0, 0.0, 1.0, 3).unwrap(), 0.0);
        assert!((truncation_bound(1.0, 0.125, 1.0, 1).unwrap() - 0.25).abs() < 1e-15);
        let loose = truncation_bound(1.0, 0.2, 1.0, 1).unwrap();
        assert!((loose - 0.5 * 0.64 / 0.2).abs() < 1e-12);
        assert!(matches!(
            truncation_bound(1.0, 0.25, 1.0, 2),
            Err(Error::Divergence { .. })
        ));
    }

    #[test]
    fn projectors_are_complete_and_orthogonal() {
        let h = CodeHamiltonian::build_flat(&five_qubit_code(), 1.0).unwrap();
        let d = LevelDecomposition::from_hamiltonian(&h, 10).unwrap();
        let ps: Vec<CMat> = (0..d.n_levels())
            .map(|i| d.projector(i).to_dense())
            .collect();
        let sum = ps.iter().fold(CMat::zeros(32, 32), |a, p| a + p);
        assert!((sum - CMat::identity(32, 32)).norm() < 1e-12);
        for (i, a) in ps.iter().enumerate() {
            for (j, b) in ps.iter().enumerate() {
                let prod = a * b;
                let expect = if i == j {
                    a.clone()
                } else {
                    CMat::zeros(32, 32)
                };
                assert!((prod - expect).norm() < 1e-12);
            }
            assert!((trace(a).re - [2.0, 8.0, 12.0, 8.0, 2.0][i]).abs() < 1e-12);
        }
        let h0 = h.to_dense(10).unwrap();
        let rebuilt = d.level_combination(d.energies()).to_dense();
        assert!((h0 - rebuilt).norm() < 1e-12);
        let sectors = d.sector_projectors(1);
        assert_eq!(sectors.len(), 4);
        let sum = sectors
            .iter()
            .fold(CMat::zeros(32, 32), |a, (_, p)| a + p.to_dense());
        assert!((sum - &ps[1]).norm() < 1e-12);
    }

    #[test]
    fn resolvent_k2_matches_projector_sum() {
        let h = CodeHamiltonian::build_flat(&five_qubit_code(), 1.0).unwrap();
        let e = KatoEngine::new(
            &h,
            &PerturbationSpec::uniform(5, 0.01),
            KatoConfig::default(),
        )
        .unwrap();
        let g2 = e.resolvent_power(0, 2).unwrap();
        let d = e.decomposition();
        let mut expect = CMat::zeros(32, 32);
        for j in 1..5 {
            expect += d.projector(j).to_dense() * real(1.0 / (j * j) as f64);
        }
        assert!((g2 - expect).norm() < 1e-12);
    }

    #[test]
    fn five_qubit_ground_level() {
        let h = CodeHamiltonian::build_flat(&five_qubit_code(), 1.0).unwrap();
        let e = KatoEngine::new(
            &h,
            &PerturbationSpec::uniform(5, 1e-3),
            KatoConfig::default(),
        )
        .unwrap();
        let r = e.effective_hamiltonian(0, 1e-3, 2).unwrap();
        assert!(r.first_order_vanishes);
        let so = r.second_order.unwrap();
        assert!(so.proportional);
        assert!(so.coefficient.abs() <= 15.0);
        // Each single-qubit Pauli Q costs m_Q violated generators.
        let code = five_qubit_code();
        let expect: f64 = PauliOperator::single_qubit_errors(5)
            .iter()
            .map(|q| -1.0 / code.syndrome(q).unwrap().weight() as f64)
            .sum();
        assert!((so.coefficient - expect).abs() < 1e-10);
        let c = &r.classification;
        let total = &c.within_diagonal + &c.within_offdiagonal + &c.cross_level + &c.outside;
        assert!((total - &r.effective).norm() < 1e-12);
        // The logical X, Y, Z parts need weight-3 processes.
        for comp in &r.logical[1..] {
            assert!(comp.norm < 1e-12, "{comp:?}");
        }
    }

    #[test]
    fn zero_perturbation_report() {
        let h = CodeHamiltonian::build_flat(&five_qubit_code(), 1.0).unwrap();
        let e = KatoEngine::new(&h, &PerturbationSpec::zero(0.1), KatoConfig::default()).unwrap();
        let r = e.effective_hamiltonian(1, 0.1, 3).unwrap();
        assert_eq!(r.truncation_bound, 0.0);
        let expect = e.decomposition().projector(1).to_dense() * real(r.energy);
        assert!((r.effective - expect).norm() < 1e-12);
    }

    #[test]
    fn divergence_and_order_cap() {
        let h = CodeHamiltonian::build_flat(&five_qubit_code(), 1.0).unwrap();
        let e = KatoEngine::new(
            &h,
            &PerturbationSpec::uniform(5, 0.5),
            KatoConfig::default(),
        )
        .unwrap();
        assert!(matches!(
            e.effective_hamiltonian(0, 0.5, 2),
            Err(Error::Divergence { .. })
        ));
        assert!(matches!(
            e.kato_term(0, 7),
            Err(Error::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn series_reproduces_exact_shifts() {
        let h = CodeHamiltonian::build_flat(&five_qubit_code(), 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = PerturbationSpec::random(5, 1e-2, &mut rng);
        let e = KatoEngine::new(&h, &spec, KatoConfig::default()).unwrap();
        let x = spec.x;
        let exact = hermitian_eigenvalues(&e.perturbed_dense(x));
        let p = 4;
        let r = e.effective_hamiltonian(0, x, p).unwrap();
        let mut approx = hermitian_eigenvalues(&r.series_sum());
        approx.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        let mut shifts: Vec<f64> = approx[approx.len() - 2..].to_vec();
        shifts.sort_by(f64::total_cmp);
        let e0 = r.energy;
        for (s, ex) in shifts.iter().zip(&exact[..2]) {
            assert!((s - (ex - e0)).abs() <= r.truncation_bound + 1e-13);
        }
    }

    #[test]
    fn nine_qubit_gauge_splitting() {
        let h = CodeHamiltonian::build_flat(&nine_qubit_subsystem_code(), 1.0).unwrap();
        let e = KatoEngine::new(
            &h,
            &PerturbationSpec::uniform(9, 1e-3),
            KatoConfig::default(),
        )
        .unwrap();
        let r = e.effective_hamiltonian(0, 1e-3, 2).unwrap();
        assert!(r.first_order_vanishes);
        let i = &r.logical[0];
        assert_eq!(i.label, "I");
        assert!(i.gauge_nontrivial_norm > 1e-9);
        for comp in &r.logical[1..] {
            assert!(comp.norm < 1e-12, "{comp:?}");
        }
        assert!(!r.second_order.unwrap().proportional);
    }
}
