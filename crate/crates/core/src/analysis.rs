//! Error-process counting, threshold polynomials, concatenation recursions and the
//! error-correction order parameter.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{Distance, GroupSpan, StabilizerCode, Syndrome};
use crate::error::{Error, Result};
use crate::linalg::{check_dense_cap, CMat, CVec, LinearAction, PauliSum};
use crate::pauli::PauliOperator;

/// `(12 n)^3` at `n = 5`: the cubic remainder constant used for both presets.
pub const CUBIC_COEFFICIENT: f64 = 216_000.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub code: String,
    pub n_qubits: usize,
    /// Ordered single-qubit pairs `(Q, R)` with `Q·R` in the stabilizer (or gauge) group.
    pub identity_processes: usize,
    /// Pairs with `Q = R`; always `3n`.
    pub same_error_processes: usize,
    /// Identity pairs whose product is a nontrivial gauge element.
    pub gauge_processes: usize,
    /// Dominant ground-to-excited channel count.
    pub leakage_channel: usize,
    /// Which counting rule produced `leakage_channel`.
    pub leakage_rule: LeakageRule,
    /// `(3n, 9n²)`
    pub naive_bounds: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeakageRule {
    /// Single-violation subspaces times the remaining generators.
    SubspaceCount,
    /// Direct enumeration of ordered two-qubit processes.
    ProcessEnumeration,
    /// Distance at most one: nothing is protected.
    Unprotected,
}

/// Ordered single-qubit Pauli pairs whose product is trivial on the logical information.
///
/// Returns `(all, same_error, via_gauge)`.
pub fn count_identity_processes(code: &StabilizerCode) -> (usize, usize, usize) {
    let singles = PauliOperator::single_qubit_errors(code.n_qubits());
    let trivial = code.trivial_span();
    let stabilizer = code.stabilizer_span();
    let (all, gauge) = singles
        .par_iter()
        .map(|q| {
            singles.iter().fold((0, 0), |(all, gauge), r| {
                let prod = q.product(r);
                if trivial.contains(&prod) {
                    (all + 1, gauge + usize::from(!stabilizer.contains(&prod)))
                } else {
                    (all, gauge)
                }
            })
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    (all, singles.len(), gauge)
}

/// `(single-violation subspaces) × (generators − 1)`.
pub fn leakage_subspace_rule(code: &StabilizerCode) -> usize {
    let m = code.generators().len();
    if m == 0 {
        return 0;
    }
    m * (m - 1)
}

/// Minimum weight over the coset `op · ⟨trivial span⟩`.
fn min_weight_mod(op: &PauliOperator, span_ops: &[PauliOperator]) -> usize {
    let mut best = op.weight();
    for mask in 1u64..(1u64 << span_ops.len()) {
        let mut cand = op.clone();
        for (j, s) in span_ops.iter().enumerate() {
            if (mask >> j) & 1 == 1 {
                cand = cand.product(s);
            }
        }
        best = best.min(cand.weight());
    }
    best
}

fn trivial_basis(code: &StabilizerCode) -> Vec<PauliOperator> {
    let mut span = GroupSpan::new(code.n_qubits());
    code.generators()
        .iter()
        .chain(code.gauge_x())
        .chain(code.gauge_z())
        .filter(|op| span.insert(op))
        .cloned()
        .collect()
}

/// Ordered pairs `(first, second)` of single-qubit Paulis, keyed by how many
/// generators the first step violates and the minimum weight of the net error
/// modulo the stabilizer and gauge group, restricted to nets violating exactly
/// one generator.
pub fn leakage_breakdown(code: &StabilizerCode) -> Result<BTreeMap<(usize, usize), usize>> {
    let basis = trivial_basis(code);
    if basis.len() > 20 {
        return Err(Error::CapExceeded {
            what: "coset minimum-weight search",
            requested: basis.len(),
            cap: 20,
        });
    }
    let singles = PauliOperator::single_qubit_errors(code.n_qubits());
    let syndromes: Vec<Syndrome> = singles.iter().map(|e| code.syndrome_unchecked(e)).collect();
    let mut cache: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut out = BTreeMap::new();
    for (a, first) in singles.iter().enumerate() {
        for (b, second) in singles.iter().enumerate() {
            let combined: Vec<bool> = syndromes[a]
                .bits()
                .iter()
                .zip(syndromes[b].bits())
                .map(|(x, y)| x ^ y)
                .collect();
            if combined.iter().filter(|v| **v).count() != 1 {
                continue;
            }
            let net = second.product(first).unsigned();
            let w = *cache
                .entry(net.symplectic())
                .or_insert_with(|| min_weight_mod(&net, &basis));
            *out.entry((syndromes[a].weight(), w)).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// Processes whose first step violates exactly two generators and whose net
/// error violates one and is a genuine two-qubit error modulo gauge.
pub fn leakage_process_enumeration(code: &StabilizerCode) -> Result<usize> {
    Ok(leakage_breakdown(code)?.get(&(2, 2)).copied().unwrap_or(0))
}

/// Dominant second-order leakage count: the subspace rule for subspace codes and
/// direct process enumeration for subsystem codes.
pub fn count_leakage_channel(code: &StabilizerCode) -> Result<(usize, LeakageRule)> {
    if code.distance(1) == Distance::Exact(1) {
        return Ok((0, LeakageRule::Unprotected));
    }
    if code.is_subsystem() {
        Ok((
            leakage_process_enumeration(code)?,
            LeakageRule::ProcessEnumeration,
        ))
    } else {
        Ok((leakage_subspace_rule(code), LeakageRule::SubspaceCount))
    }
}

pub fn count_report(code: &StabilizerCode) -> Result<CountReport> {
    let (identity_processes, same_error_processes, gauge_processes) =
        count_identity_processes(code);
    let (leakage_channel, leakage_rule) = count_leakage_channel(code)?;
    let n = code.n_qubits();
    Ok(CountReport {
        code: code.name().to_string(),
        n_qubits: n,
        identity_processes,
        same_error_processes,
        gauge_processes,
        leakage_channel,
        leakage_rule,
        naive_bounds: (3 * n, 9 * n * n),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub code: String,
    pub linear_coeff: f64,
    pub quadratic_coeff: f64,
    pub gamma_star: f64,
    pub x_star: f64,
    #[serde(rename = "J")]
    pub j: f64,
    /// Correction to a commonly quoted closed form of the root, when one applies.
    pub erratum: Option<String>,
}

/// Positive root of `c₁γ + c₂γ² = 1`.
pub fn threshold_root(c1: f64, c2: f64) -> Result<f64> {
    if c1 < 0.0 || c2 < 0.0 || (c1 == 0.0 && c2 == 0.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold polynomial needs non-negative, not both zero, coefficients (got {c1}, {c2})"
        )));
    }
    // Rationalized form avoids cancellation for small c₂.
    Ok(2.0 / (c1 + (c1 * c1 + 4.0 * c2).sqrt()))
}

pub fn threshold_from_coefficients(
    name: &str,
    c1: f64,
    c2: f64,
    j: f64,
) -> Result<ThresholdReport> {
    let gamma_star = threshold_root(c1, c2)?;
    Ok(ThresholdReport {
        code: name.to_string(),
        linear_coeff: c1,
        quadratic_coeff: c2,
        gamma_star,
        x_star: gamma_star * j,
        j,
        erratum: None,
    })
}

/// Threshold for a preset: `c₁` is the headline identity count plus the leakage
/// count, `c₂ = 60³`.
pub fn threshold(code: &StabilizerCode, j: f64) -> Result<ThresholdReport> {
    let (_, same, _) = count_identity_processes(code);
    let (leak, _) = count_leakage_channel(code)?;
    let mut report =
        threshold_from_coefficients(code.name(), (same + leak) as f64, CUBIC_COEFFICIENT, j)?;
    if code.name() == "five-qubit" {
        report.erratum =
            Some("the root is (sqrt(96081)-9)/144000; a denominator of 14400 is off by ten".into());
    }
    Ok(report)
}

/// `J (c₁γ² + c₂γ³)`, the bound on the logical coupling at `γ = x/J`.
pub fn vl_bound(gamma: f64, c1: f64, c2: f64, j: f64) -> f64 {
    j * (c1 * gamma * gamma + c2 * gamma.powi(3))
}

/// `x_r = x* (x/x*)^(2^r)` for `r = 0..=r_max`.
pub fn suppression_curve(x: f64, x_star: f64, r_max: usize) -> Result<Vec<f64>> {
    if !(x >= 0.0 && x_star > 0.0) {
        return Err(Error::InvalidArgument("need x >= 0 and x* > 0".into()));
    }
    let ratio = x / x_star;
    Ok((0..=r_max)
        .map(|r| {
            let exponent = 2f64.powi(r as i32);
            x_star * ratio.powf(exponent)
        })
        .collect())
}

/// `p* (p/p*)^((t+1)^r)`
pub fn classical_failure_recursion(p: f64, p_star: f64, t: u32, r: u32) -> Result<f64> {
    if !(p > 0.0 && p_star > 0.0) {
        return Err(Error::InvalidArgument("need p > 0 and p* > 0".into()));
    }
    let exponent = (t as f64 + 1.0).powi(r as i32);
    Ok(p_star * (p / p_star).powf(exponent))
}

/// `D = Σ_s E_s Π_s` over a minimum-weight transversal of correctable errors.
#[derive(Debug, Clone)]
pub struct OrderParameter {
    pub operator: CMat,
    /// One representative per syndrome, the identity for the trivial syndrome.
    pub transversal: Vec<(Syndrome, PauliOperator)>,
}

impl OrderParameter {
    /// `⟨φ| D ρ D† |φ⟩`: weight of `ρ` that `D` maps back onto `φ`.
    pub fn expectation(&self, phi: &CVec, rho: &CMat) -> f64 {
        let d_adj_phi = self.operator.adjoint() * phi;
        (d_adj_phi.adjoint() * rho * &d_adj_phi)[(0, 0)].re
    }

    /// Expectation for the pure state `ψ`, i.e. `|⟨φ|D|ψ⟩|²`.
    pub fn pure_expectation(&self, phi: &CVec, psi: &CVec) -> f64 {
        let d_psi = &self.operator * psi;
        phi.dotc(&d_psi).norm_sqr()
    }
}

fn syndrome_projector(code: &StabilizerCode, s: &Syndrome) -> PauliSum {
    let n = code.n_qubits();
    let gens = code.generators();
    let m = gens.len();
    let scale = 1.0 / (1u64 << m) as f64;
    let mut group = vec![PauliOperator::identity(n)];
    let mut out = PauliSum::new(n);
    out.push(Complex64::new(scale, 0.0), group[0].clone());
    for mask in 1usize..(1 << m) {
        let low = mask.trailing_zeros() as usize;
        let op = group[mask & (mask - 1)].product(&gens[low]);
        let flips = (0..m).filter(|j| (mask >> j) & 1 == 1 && s.bit(*j)).count();
        let sign = if flips % 2 == 0 { scale } else { -scale };
        out.push(Complex64::new(sign, 0.0), op.clone());
        group.push(op);
    }
    out
}

/// Builds `D` from the minimum-weight, lexicographically first error of each
/// syndrome up to weight `t`.
pub fn order_parameter(
    code: &StabilizerCode,
    t: usize,
    max_qubits: usize,
) -> Result<OrderParameter> {
    let n = code.n_qubits();
    check_dense_cap("order parameter", n, max_qubits)?;
    let trivial = code.trivial_span();
    let mut chosen: BTreeMap<Syndrome, PauliOperator> = BTreeMap::new();
    chosen.insert(
        Syndrome::zero(code.generators().len()),
        PauliOperator::identity(n),
    );
    for w in 0..=t.min(n) {
        let errors = if w == 0 {
            vec![PauliOperator::identity(n)]
        } else {
            PauliOperator::all_of_weight(n, w)
        };
        for e in errors {
            let s = code.syndrome_unchecked(&e);
            match chosen.get(&s) {
                None => {
                    chosen.insert(s, e);
                }
                Some(rep) => {
                    if !trivial.contains(&rep.product(&e)) {
                        return Err(Error::TransversalViolation {
                            first: rep.to_string(),
                            second: e.to_string(),
                        });
                    }
                }
            }
        }
    }
    let dim = 1usize << n;
    let mut operator = CMat::zeros(dim, dim);
    for (s, e) in &chosen {
        let projector = syndrome_projector(code, s).to_dense();
        let mut single = PauliSum::new(n);
        single.push(Complex64::new(1.0, 0.0), e.clone());
        operator += single.left_mul(&projector);
    }
    Ok(OrderParameter {
        operator,
        transversal: chosen.into_iter().collect(),
    })
}

/// A normalized codeword with logical `Z̄_j` eigenvalue `(-1)^bits[j]`; gauge
/// qubits of subsystem codes are fixed to `Z_g = +1`.
pub fn codeword(code: &StabilizerCode, bits: &[bool], max_qubits: usize) -> Result<CVec> {
    let n = code.n_qubits();
    check_dense_cap("codeword", n, max_qubits)?;
    if bits.len() != code.logical_z().len() {
        return Err(Error::InvalidArgument(format!(
            "expected {} logical bits, got {}",
            code.logical_z().len(),
            bits.len()
        )));
    }
    let dim = 1usize << n;
    let mut factors: Vec<(PauliOperator, f64)> =
        code.generators().iter().map(|g| (g.clone(), 1.0)).collect();
    factors.extend(
        code.logical_z()
            .iter()
            .zip(bits)
            .map(|(z, b)| (z.clone(), if *b { -1.0 } else { 1.0 })),
    );
    factors.extend(code.gauge_z().iter().map(|g| (g.clone(), 1.0)));
    for start in 0..dim {
        let mut v = CVec::zeros(dim);
        v[start] = Complex64::new(1.0, 0.0);
        for (op, sign) in &factors {
            let mut half = PauliSum::new(n);
            half.push(Complex64::new(0.5, 0.0), PauliOperator::identity(n));
            half.push(Complex64::new(0.5 * sign, 0.0), op.clone());
            let m = CMat::from_column_slice(dim, 1, v.as_slice());
            v = half.left_mul(&m).column(0).into_owned();
        }
        let norm = v.norm();
        if norm > 1e-6 {
            return Ok(v / Complex64::new(norm, 0.0));
        }
    }
    Err(Error::InvalidCode {
        name: code.name().to_string(),
        reason: "empty code space".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{five_qubit_code, nine_qubit_subsystem_code};

    #[test]
    fn counts_five_qubit() {
        let r = count_report(&five_qubit_code()).unwrap();
        assert_eq!(r.identity_processes, 15);
        assert_eq!(r.same_error_processes, 15);
        assert_eq!(r.leakage_channel, 12);
        assert_eq!(r.leakage_rule, LeakageRule::SubspaceCount);
        assert_eq!(r.naive_bounds, (15, 225));
    }

    #[test]
    fn counts_nine_qubit() {
        let r = count_report(&nine_qubit_subsystem_code()).unwrap();
        assert_eq!(r.same_error_processes, 27);
        assert_eq!(r.identity_processes, 63);
        assert_eq!(r.gauge_processes, 36);
        assert_eq!(r.leakage_channel, 44);
        assert_eq!(r.leakage_rule, LeakageRule::ProcessEnumeration);
    }

    #[test]
    fn five_qubit_rule_matches_enumeration_variant() {
        // For the perfect code, the subspace rule equals the enumeration of
        // processes whose first step violates one generator and whose net
        // error is a genuine two-qubit error.
        let b = leakage_breakdown(&five_qubit_code()).unwrap();
        assert_eq!(b.get(&(1, 2)).copied(), Some(12));
    }

    #[test]
    fn trivial_codes() {
        let free = StabilizerCode::from_strings("free", &[], &["X"], &["Z"], &[], &[]).unwrap();
        let (all, same, _) = count_identity_processes(&free);
        assert_eq!((all, same), (3, 3));
        assert_eq!(count_leakage_channel(&free).unwrap().0, 0);
    }

    #[test]
    fn thresholds() {
        let five = threshold(&five_qubit_code(), 1.0).unwrap();
        assert_eq!(five.linear_coeff, 27.0);
        assert!((five.gamma_star - 0.0020901).abs() < 1e-6);
        assert!(five.erratum.is_some());
        let nine = threshold(&nine_qubit_subsystem_code(), 1.0).unwrap();
        assert_eq!(nine.linear_coeff, 71.0);
        assert!((nine.gamma_star - 0.0019936).abs() < 1e-6);
        assert_eq!(threshold_root(2.0, 0.0).unwrap(), 0.5);
        let g = five.gamma_star;
        assert!((27.0 * g + CUBIC_COEFFICIENT * g * g - 1.0).abs() < 1e-12);
        // Closed form with the corrected denominator.
        assert!((g - (96081f64.sqrt() - 9.0) / 144000.0).abs() < 1e-15);
        assert!((vl_bound(g, 27.0, CUBIC_COEFFICIENT, 1.0) - g).abs() < 1e-9);
    }

    #[test]
    fn recursions() {
        let xs = 0.0020901;
        assert!(suppression_curve(xs, xs, 4)
            .unwrap()
            .iter()
            .all(|v| *v == xs));
        assert_eq!(suppression_curve(xs / 2.0, xs, 3).unwrap()[3], xs / 256.0);
        let p = classical_failure_recursion(0.01, 0.1, 1, 2).unwrap();
        assert!((p - 0.1 * 1e-4).abs() < 1e-18);
        assert_eq!(classical_failure_recursion(0.1, 0.1, 2, 3).unwrap(), 0.1);
    }

    #[test]
    fn order_parameter_recovers_single_errors() {
        let code = five_qubit_code();
        let d = order_parameter(&code, 1, 10).unwrap();
        assert_eq!(d.transversal.len(), 16);
        let phi = codeword(&code, &[false], 10).unwrap();
        for e in PauliOperator::single_qubit_errors(5) {
            let psi = e.to_dense(10).unwrap() * &phi;
            assert!((d.pure_expectation(&phi, &psi) - 1.0).abs() < 1e-10);
        }
        let flip = code.logical_x()[0].to_dense(10).unwrap() * &phi;
        assert!(d.pure_expectation(&phi, &flip).abs() < 1e-10);
        let rho = &phi * phi.adjoint();
        assert!((d.expectation(&phi, &rho) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn transversal_violation_detected() {
        // Weight-2 errors of the five-qubit code collide with single-qubit ones.
        assert!(matches!(
            order_parameter(&five_qubit_code(), 2, 10),
            Err(Error::TransversalViolation { .. })
        ));
    }

    #[test]
    fn codewords_are_stabilized() {
        let code = nine_qubit_subsystem_code();
        let phi = codeword(&code, &[true], 10).unwrap();
        for g in code.generators() {
            let gphi = g.to_dense(10).unwrap() * &phi;
            assert!((gphi - &phi).norm() < 1e-10);
        }
        let z = code.logical_z()[0].to_dense(10).unwrap() * &phi;
        assert!((z + &phi).norm() < 1e-10);
    }
}
