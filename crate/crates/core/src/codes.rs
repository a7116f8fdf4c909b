//! Stabilizer subspace and subsystem codes.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

/// Row-reduced GF(2) basis of a set of Pauli operators, phases ignored.
///
/// Each row owns a pivot bit that is clear in every other row, so reducing a
/// vector yields a unique representative of its coset.
#[derive(Debug, Clone)]
pub struct GroupSpan {
    n_qubits: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

fn lowest_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn bit(v: &[u64], b: usize) -> bool {
    (v[b / 64] >> (b % 64)) & 1 == 1
}

fn xor_into(a: &mut [u64], b: &[u64]) {
    a.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
}

impl GroupSpan {
    pub fn new(n_qubits: usize) -> Self {
        GroupSpan {
            n_qubits,
            rows: Vec::new(),
        }
    }

    pub fn from_operators<'a>(
        n_qubits: usize,
        ops: impl IntoIterator<Item = &'a PauliOperator>,
    ) -> Self {
        let mut span = GroupSpan::new(n_qubits);
        for op in ops {
            span.insert(op);
        }
        span
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce_vec(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (pivot, row) in &self.rows {
            if bit(&v, *pivot) {
                xor_into(&mut v, row);
            }
        }
        v
    }

    /// Canonical coset key of `op`.
    pub fn reduce(&self, op: &PauliOperator) -> Vec<u64> {
        self.reduce_vec(op.symplectic())
    }

    pub fn contains(&self, op: &PauliOperator) -> bool {
        self.reduce(op).iter().all(|&w| w == 0)
    }

    /// Adds `op`; returns false when it was already in the span.
    pub fn insert(&mut self, op: &PauliOperator) -> bool {
        assert_eq!(op.n_qubits(), self.n_qubits);
        let v = self.reduce(op);
        let Some(pivot) = lowest_bit(&v) else {
            return false;
        };
        for (_, row) in self.rows.iter_mut() {
            if bit(row, pivot) {
                xor_into(row, &v);
            }
        }
        self.rows.push((pivot, v));
        true
    }
}

/// Which generators anticommute with an error; bit `j` belongs to generator `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome {
    bits: Vec<bool>,
}

impl Syndrome {
    pub fn zero(len: usize) -> Self {
        Syndrome {
            bits: vec![false; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Syndrome { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, j: usize) -> bool {
        self.bits[j]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    /// Number of flipped generators.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    /// Little-endian integer value; only meaningful below 64 generators.
    pub fn index(&self) -> usize {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(j, _)| 1usize << j)
            .sum()
    }

    pub fn from_index(len: usize, index: usize) -> Self {
        Syndrome {
            bits: (0..len).map(|j| (index >> j) & 1 == 1).collect(),
        }
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{}", if *b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// One failed invariant found by [`StabilizerCode::validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    WrongSize {
        operator: String,
        expected: usize,
    },
    NonHermitianGenerator {
        generator: String,
    },
    GeneratorsAnticommute {
        first: String,
        second: String,
    },
    ContainsMinusIdentity {
        generator: String,
    },
    DependentGenerator {
        generator: String,
    },
    LogicalAnticommutesWithGenerator {
        logical: String,
        generator: String,
    },
    GaugeAnticommutesWithGenerator {
        gauge: String,
        generator: String,
    },
    BadLogicalPairing {
        first: String,
        second: String,
        expect_commute: bool,
    },
    BadGaugePairing {
        first: String,
        second: String,
        expect_commute: bool,
    },
    GaugeAnticommutesWithLogical {
        gauge: String,
        logical: String,
    },
    UnpairedOperators {
        kind: String,
        x_count: usize,
        z_count: usize,
    },
    QubitCountMismatch {
        generators: usize,
        logical: usize,
        gauge: usize,
        n: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub code: String,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Minimum distance, or a marker that it exceeds the search cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Distance {
    Exact(usize),
    GreaterThan(usize),
}

impl Distance {
    pub fn exact(self) -> Option<usize> {
        match self {
            Distance::Exact(d) => Some(d),
            Distance::GreaterThan(_) => None,
        }
    }
}

/// `[[n,k,d]]` or `[[n,k,r,d]]` parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CodeParameters {
    pub n: usize,
    pub k: usize,
    pub gauge: usize,
    pub distance: Distance,
}

impl fmt::Display for CodeParameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.distance {
            Distance::Exact(d) => d.to_string(),
            Distance::GreaterThan(w) => format!(">{w}"),
        };
        if self.gauge > 0 {
            write!(f, "[[{},{},{},{}]]", self.n, self.k, self.gauge, d)
        } else {
            write!(f, "[[{},{},{}]]", self.n, self.k, d)
        }
    }
}

/// A stabilizer code with optional gauge qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizerCode {
    name: String,
    n: usize,
    generators: Vec<PauliOperator>,
    #[serde(default)]
    logical_x: Vec<PauliOperator>,
    #[serde(default)]
    logical_z: Vec<PauliOperator>,
    #[serde(default)]
    gauge_x: Vec<PauliOperator>,
    #[serde(default)]
    gauge_z: Vec<PauliOperator>,
}

impl StabilizerCode {
    /// Assembles a code; sizes are checked here, algebra in [`validate`](Self::validate).
    pub fn new(
        name: impl Into<String>,
        n: usize,
        generators: Vec<PauliOperator>,
        logical_x: Vec<PauliOperator>,
        logical_z: Vec<PauliOperator>,
        gauge_x: Vec<PauliOperator>,
        gauge_z: Vec<PauliOperator>,
    ) -> Result<Self> {
        let code = StabilizerCode {
            name: name.into(),
            n,
            generators,
            logical_x,
            logical_z,
            gauge_x,
            gauge_z,
        };
        code.check_sizes()?;
        Ok(code)
    }

    /// Convenience constructor from Pauli strings.
    pub fn from_strings(
        name: &str,
        generators: &[&str],
        logical_x: &[&str],
        logical_z: &[&str],
        gauge_x: &[&str],
        gauge_z: &[&str],
    ) -> Result<Self> {
        let parse =
            |v: &[&str]| -> Result<Vec<PauliOperator>> { v.iter().map(|s| s.parse()).collect() };
        let generators = parse(generators)?;
        let logical_x = parse(logical_x)?;
        let logical_z = parse(logical_z)?;
        let n = generators
            .first()
            .or(logical_x.first())
            .or(logical_z.first())
            .map(PauliOperator::n_qubits)
            .ok_or_else(|| Error::InvalidCode {
                name: name.to_string(),
                reason: "no operators to infer the qubit count from".into(),
            })?;
        StabilizerCode::new(
            name,
            n,
            generators,
            logical_x,
            logical_z,
            parse(gauge_x)?,
            parse(gauge_z)?,
        )
    }

    fn check_sizes(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidCode {
                name: self.name.clone(),
                reason: "a code needs at least one qubit".into(),
            });
        }
        for op in self.all_operators() {
            if op.n_qubits() != self.n {
                return Err(Error::InvalidCode {
                    name: self.name.clone(),
                    reason: format!("{op} acts on {} qubits, expected {}", op.n_qubits(), self.n),
                });
            }
        }
        Ok(())
    }

    fn all_operators(&self) -> impl Iterator<Item = &PauliOperator> {
        self.generators
            .iter()
            .chain(&self.logical_x)
            .chain(&self.logical_z)
            .chain(&self.gauge_x)
            .chain(&self.gauge_z)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn logical_x(&self) -> &[PauliOperator] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliOperator] {
        &self.logical_z
    }

    pub fn gauge_x(&self) -> &[PauliOperator] {
        &self.gauge_x
    }

    pub fn gauge_z(&self) -> &[PauliOperator] {
        &self.gauge_z
    }

    pub fn is_subsystem(&self) -> bool {
        !self.gauge_x.is_empty()
    }

    /// Number of gauge qubits.
    pub fn gauge_qubits(&self) -> usize {
        self.gauge_x.len()
    }

    /// Number of encoded logical qubits, `n - generators - gauge`.
    pub fn logical_qubits(&self) -> usize {
        self.n
            .saturating_sub(self.generators.len() + self.gauge_x.len())
    }

    /// `Ȳ = i X̄ Z̄` for logical qubit `index`.
    pub fn logical_y(&self, index: usize) -> Option<PauliOperator> {
        let x = self.logical_x.get(index)?;
        let z = self.logical_z.get(index)?;
        let xz = x.product(z);
        Some(xz.clone().with_phase(xz.phase_exp() + 1))
    }

    pub fn stabilizer_span(&self) -> GroupSpan {
        GroupSpan::from_operators(self.n, &self.generators)
    }

    /// Span of the operators that leave the protected information alone: the
    /// stabilizer, extended by the gauge operators for subsystem codes.
    pub fn trivial_span(&self) -> GroupSpan {
        GroupSpan::from_operators(
            self.n,
            self.generators
                .iter()
                .chain(&self.gauge_x)
                .chain(&self.gauge_z),
        )
    }

    pub fn syndrome(&self, e: &PauliOperator) -> Result<Syndrome> {
        if e.n_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: e.n_qubits(),
            });
        }
        Ok(self.syndrome_unchecked(e))
    }

    pub(crate) fn syndrome_unchecked(&self, e: &PauliOperator) -> Syndrome {
        Syndrome {
            bits: self
                .generators
                .iter()
                .map(|g| g.symplectic_parity(e) == 1)
                .collect(),
        }
    }

    /// Checks every algebraic invariant and lists all failures.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for op in self.all_operators() {
            if op.n_qubits() != self.n {
                violations.push(Violation::WrongSize {
                    operator: op.to_string(),
                    expected: self.n,
                });
            }
        }
        if !violations.is_empty() {
            return ValidationReport {
                code: self.name.clone(),
                violations,
            };
        }

        for g in &self.generators {
            if !g.is_hermitian() {
                violations.push(Violation::NonHermitianGenerator {
                    generator: g.to_string(),
                });
            }
        }
        for (a, ga) in self.generators.iter().enumerate() {
            for gb in &self.generators[a + 1..] {
                if ga.symplectic_parity(gb) == 1 {
                    violations.push(Violation::GeneratorsAnticommute {
                        first: ga.to_string(),
                        second: gb.to_string(),
                    });
                }
            }
        }
        violations.extend(self.check_group_phases());

        for l in self.logical_x.iter().chain(&self.logical_z) {
            for g in &self.generators {
                if l.symplectic_parity(g) == 1 {
                    violations.push(Violation::LogicalAnticommutesWithGenerator {
                        logical: l.to_string(),
                        generator: g.to_string(),
                    });
                }
            }
        }
        for gauge in self.gauge_x.iter().chain(&self.gauge_z) {
            for g in &self.generators {
                if gauge.symplectic_parity(g) == 1 {
                    violations.push(Violation::GaugeAnticommutesWithGenerator {
                        gauge: gauge.to_string(),
                        generator: g.to_string(),
                    });
                }
            }
            for l in self.logical_x.iter().chain(&self.logical_z) {
                if gauge.symplectic_parity(l) == 1 {
                    violations.push(Violation::GaugeAnticommutesWithLogical {
                        gauge: gauge.to_string(),
                        logical: l.to_string(),
                    });
                }
            }
        }
        if self.logical_x.len() != self.logical_z.len() {
            violations.push(Violation::UnpairedOperators {
                kind: "logical".into(),
                x_count: self.logical_x.len(),
                z_count: self.logical_z.len(),
            });
        } else {
            violations.extend(pairing_violations(&self.logical_x, &self.logical_z, false));
        }
        if self.gauge_x.len() != self.gauge_z.len() {
            violations.push(Violation::UnpairedOperators {
                kind: "gauge".into(),
                x_count: self.gauge_x.len(),
                z_count: self.gauge_z.len(),
            });
        } else {
            violations.extend(pairing_violations(&self.gauge_x, &self.gauge_z, true));
        }
        let declared = self.logical_x.len();
        let used = self.generators.len() + self.gauge_x.len();
        if used > self.n || (declared > 0 && used + declared != self.n) {
            violations.push(Violation::QubitCountMismatch {
                generators: self.generators.len(),
                logical: declared,
                gauge: self.gauge_x.len(),
                n: self.n,
            });
        }
        ValidationReport {
            code: self.name.clone(),
            violations,
        }
    }

    /// Gaussian elimination that carries the actual group products, so a
    /// combination collapsing to `-I` is caught.
    fn check_group_phases(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut rows: Vec<(usize, PauliOperator)> = Vec::new();
        for g in &self.generators {
            let mut acc = g.clone();
            for (pivot, row) in &rows {
                if bit(&acc.symplectic(), *pivot) {
                    acc = acc.product(row);
                }
            }
            match lowest_bit(&acc.symplectic()) {
                Some(pivot) => {
                    for (_, row) in rows.iter_mut() {
                        if bit(&row.symplectic(), pivot) {
                            *row = row.product(&acc);
                        }
                    }
                    rows.push((pivot, acc));
                }
                None if acc.phase_exp() == 0 => out.push(Violation::DependentGenerator {
                    generator: g.to_string(),
                }),
                None => out.push(Violation::ContainsMinusIdentity {
                    generator: g.to_string(),
                }),
            }
        }
        out
    }

    /// Validates and turns failures into an error.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidCode {
                name: self.name.clone(),
                reason: format!("{v:?}"),
            }),
        }
    }

    /// True iff `op` commutes with every generator and is not in the trivial span.
    pub fn is_nontrivial_logical(&self, op: &PauliOperator) -> bool {
        self.syndrome_unchecked(op).is_zero() && !self.trivial_span().contains(op)
    }

    /// Brute-force minimum weight of a nontrivial logical operator, searched up to `max_weight`.
    pub fn distance(&self, max_weight: usize) -> Distance {
        let trivial = self.trivial_span();
        for w in 1..=max_weight.min(self.n) {
            let found = PauliOperator::all_of_weight(self.n, w)
                .iter()
                .any(|p| self.syndrome_unchecked(p).is_zero() && !trivial.contains(p));
            if found {
                return Distance::Exact(w);
            }
        }
        Distance::GreaterThan(max_weight.min(self.n))
    }

    pub fn parameters(&self, max_weight: usize) -> CodeParameters {
        CodeParameters {
            n: self.n,
            k: self.logical_qubits(),
            gauge: self.gauge_qubits(),
            distance: self.distance(max_weight),
        }
    }

    /// Whether minimum-weight lookup decoding with corrections of weight `<= t` fixes `e`.
    pub fn is_correctable(&self, e: &PauliOperator, t: usize) -> Result<bool> {
        let decoder = LookupDecoder::new(self, t);
        decoder.corrects(e)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let code: StabilizerCode = serde_json::from_str(text)?;
        code.check_sizes()?;
        Ok(code)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        StabilizerCode::from_json_str(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("code serializes")
    }
}

fn pairing_violations(xs: &[PauliOperator], zs: &[PauliOperator], gauge: bool) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut check = |a: &PauliOperator, b: &PauliOperator, expect_commute: bool| {
        let commute = a.symplectic_parity(b) == 0;
        if commute != expect_commute {
            let (first, second) = (a.to_string(), b.to_string());
            out.push(if gauge {
                Violation::BadGaugePairing {
                    first,
                    second,
                    expect_commute,
                }
            } else {
                Violation::BadLogicalPairing {
                    first,
                    second,
                    expect_commute,
                }
            });
        }
    };
    for i in 0..xs.len() {
        for (j, z) in zs.iter().enumerate() {
            check(&xs[i], z, i != j);
        }
        for j in i + 1..xs.len() {
            check(&xs[i], &xs[j], true);
            check(&zs[i], &zs[j], true);
        }
    }
    out
}

/// Minimum-weight syndrome lookup table.
///
/// Candidates are visited by increasing weight and, within a weight, in
/// lexicographic letter order; the first candidate claims its syndrome.
#[derive(Debug, Clone)]
pub struct LookupDecoder<'a> {
    code: &'a StabilizerCode,
    max_weight: usize,
    table: HashMap<Syndrome, PauliOperator>,
}

impl<'a> LookupDecoder<'a> {
    pub fn new(code: &'a StabilizerCode, max_weight: usize) -> Self {
        let total = code.generators.len();
        let full = if total < 63 {
            Some(1usize << total)
        } else {
            None
        };
        let mut table = HashMap::new();
        table.insert(Syndrome::zero(total), PauliOperator::identity(code.n));
        'outer: for w in 1..=max_weight.min(code.n) {
            for p in PauliOperator::all_of_weight(code.n, w) {
                if Some(table.len()) == full {
                    break 'outer;
                }
                table.entry(code.syndrome_unchecked(&p)).or_insert(p);
            }
        }
        LookupDecoder {
            code,
            max_weight,
            table,
        }
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn correction(&self, s: &Syndrome) -> Option<&PauliOperator> {
        self.table.get(s)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn corrects(&self, e: &PauliOperator) -> Result<bool> {
        let s = self.code.syndrome(e)?;
        Ok(match self.table.get(&s) {
            None => false,
            Some(c) => self.code.trivial_span().contains(&c.product(e)),
        })
    }
}

/// The [[5,1,3]] code with cyclic generators and transversal logicals.
pub fn five_qubit_code() -> StabilizerCode {
    StabilizerCode::from_strings(
        "five-qubit",
        &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"],
        &["XXXXX"],
        &["ZZZZZ"],
        &[],
        &[],
    )
    .expect("built-in code")
}

fn grid_op(cells: &[(usize, usize)], letter: char) -> String {
    let mut s = vec!['I'; 9];
    for &(r, c) in cells {
        s[3 * r + c] = letter;
    }
    s.into_iter().collect()
}

/// The [[9,1,4,3]] subsystem code on a 3×3 grid (qubit `3·row + col`).
///
/// Gauge pairs: `X` on cells `(0,c),(r,c)` of a column and `Z` on cells
/// `(r,0),(r,c)` of a row, for `r, c ∈ {1, 2}`; the pair with matching
/// `(r, c)` overlaps in exactly one cell.
pub fn nine_qubit_subsystem_code() -> StabilizerCode {
    let mut gx = Vec::new();
    let mut gz = Vec::new();
    for r in 1..3 {
        for c in 1..3 {
            gx.push(grid_op(&[(0, c), (r, c)], 'X'));
            gz.push(grid_op(&[(r, 0), (r, c)], 'Z'));
        }
    }
    let gx: Vec<&str> = gx.iter().map(String::as_str).collect();
    let gz: Vec<&str> = gz.iter().map(String::as_str).collect();
    StabilizerCode::from_strings(
        "nine-qubit",
        &["XXXXXXIII", "IIIXXXXXX", "ZZIZZIZZI", "IZZIZZIZZ"],
        &["XXXIIIIII"],
        &["ZIIZIIZII"],
        &gx,
        &gz,
    )
    .expect("built-in code")
}

/// Preset names accepted by [`preset`].
pub const PRESETS: [&str; 2] = ["five-qubit", "nine-qubit"];

pub fn preset(name: &str) -> Option<StabilizerCode> {
    match name {
        "five-qubit" | "five" | "5" => Some(five_qubit_code()),
        "nine-qubit" | "nine" | "9" => Some(nine_qubit_subsystem_code()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn builtins_validate() {
        assert!(five_qubit_code().validate().is_valid());
        let nine = nine_qubit_subsystem_code();
        assert!(nine.validate().is_valid(), "{:?}", nine.validate());
        assert_eq!(nine.generators().len(), 4);
        assert_eq!(nine.gauge_qubits(), 4);
        assert_eq!(nine.logical_qubits(), 1);
    }

    #[test]
    fn minus_identity_is_rejected() {
        let code =
            StabilizerCode::from_strings("bad", &["XX", "ZZ", "YY"], &[], &[], &[], &[]).unwrap();
        let report = code.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ContainsMinusIdentity { .. })));
    }

    #[test]
    fn empty_generator_list_is_valid() {
        let code = StabilizerCode::from_strings("free", &[], &["X"], &["Z"], &[], &[]).unwrap();
        assert!(code.validate().is_valid());
        assert_eq!(code.logical_qubits(), 1);
        assert_eq!(code.distance(1), Distance::Exact(1));
    }

    #[test]
    fn dependent_generators_are_flagged() {
        let code = StabilizerCode::from_strings("dup", &["ZZ", "ZZ"], &[], &[], &[], &[]).unwrap();
        assert!(matches!(
            code.validate().violations[0],
            Violation::DependentGenerator { .. }
        ));
    }

    #[test]
    fn bad_logical_pairing_is_flagged() {
        let code = StabilizerCode::from_strings("b", &["ZZI", "IZZ"], &["XXX"], &["XXX"], &[], &[])
            .unwrap();
        assert!(!code.validate().is_valid());
    }

    #[test]
    fn syndromes() {
        let code = five_qubit_code();
        assert!(code.syndrome(&p("IIIII")).unwrap().is_zero());
        let s = code.syndrome(&p("XIIII")).unwrap();
        assert_eq!(s.weight(), 1);
        assert!(s.bit(3));
        assert!(code.syndrome(&p("XZZXI")).unwrap().is_zero());
        assert!(code.syndrome(&p("XX")).is_err());
    }

    #[test]
    fn distances() {
        assert_eq!(five_qubit_code().distance(5), Distance::Exact(3));
        assert_eq!(nine_qubit_subsystem_code().distance(9), Distance::Exact(3));
        assert_eq!(five_qubit_code().distance(2), Distance::GreaterThan(2));
    }

    #[test]
    fn parameters_display() {
        assert_eq!(five_qubit_code().parameters(5).to_string(), "[[5,1,3]]");
        assert_eq!(
            nine_qubit_subsystem_code().parameters(9).to_string(),
            "[[9,1,4,3]]"
        );
    }

    #[test]
    fn correctability() {
        let code = five_qubit_code();
        for e in PauliOperator::single_qubit_errors(5) {
            assert!(code.is_correctable(&e, 1).unwrap());
        }
        assert!(code.is_correctable(&p("IIIII"), 1).unwrap());
        // XXXXX times the stabilizer XZZXI has weight 3 and is still logical.
        let logical = p("XXXXX").multiply(&p("XZZXI")).unwrap();
        assert_eq!(logical.weight(), 3);
        assert!(!code.is_correctable(&logical, 1).unwrap());
    }

    #[test]
    fn gauge_operators_are_harmless() {
        let code = nine_qubit_subsystem_code();
        for g in code.gauge_x().iter().chain(code.gauge_z()) {
            assert!(code.is_correctable(g, 0).unwrap());
        }
    }

    #[test]
    fn decoder_breaks_ties_lexicographically() {
        let code = nine_qubit_subsystem_code();
        let dec = LookupDecoder::new(&code, 1);
        // X on qubits 0, 3 and 6 share a syndrome; the lexicographically first
        // string is IIIIIIXII (I sorts before X).
        let s = code.syndrome(&p("XIIIIIIII")).unwrap();
        assert_eq!(dec.correction(&s).unwrap().letters(), "IIIIIIXII");
    }

    #[test]
    fn json_round_trip() {
        let code = nine_qubit_subsystem_code();
        let back = StabilizerCode::from_json_str(&code.to_json()).unwrap();
        assert_eq!(back, code);
        let minimal = r#"{"name":"rep","n":3,"generators":["ZZI","IZZ"],"logical_x":["XXX"],"logical_z":["ZII"]}"#;
        let rep = StabilizerCode::from_json_str(minimal).unwrap();
        assert!(rep.validate().is_valid());
        assert!(
            StabilizerCode::from_json_str(r#"{"name":"x","n":2,"generators":["ZZZ"]}"#).is_err()
        );
    }

    #[test]
    fn group_span_cosets() {
        let code = five_qubit_code();
        let span = code.stabilizer_span();
        assert_eq!(span.rank(), 4);
        let e = p("XIIII");
        let s = p("XZZXI");
        assert_eq!(span.reduce(&e), span.reduce(&e.multiply(&s).unwrap()));
        assert!(span.contains(&p("XZZXI").multiply(&p("IXZZX")).unwrap()));
    }
}
