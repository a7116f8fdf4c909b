//! The n-qubit Pauli group in binary-symplectic form.
//!
//! An operator is stored as `i^phase · Π_q (i^{x_q z_q} X^{x_q} Z^{z_q})`, so the
//! per-qubit factor with both bits set is exactly `Y = iXZ`. Under this convention
//! every string of `I/X/Y/Z` letters has phase 0 and the text prefix maps directly
//! onto the phase exponent: `+` → 0, `+i` → 1, `-` → 2, `-i` → 3.
//!
//! Qubit 0 is the leftmost letter and the most significant tensor factor of the
//! dense matrix.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{check_dense_cap, CMat};

const WORD: usize = 64;

/// A non-identity single-qubit Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliAxis::X => (true, false),
            PauliAxis::Y => (true, true),
            PauliAxis::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Option<PauliAxis> {
        match (x, z) {
            (false, false) => None,
            (true, false) => Some(PauliAxis::X),
            (true, true) => Some(PauliAxis::Y),
            (false, true) => Some(PauliAxis::Z),
        }
    }

    pub fn letter(self) -> char {
        match self {
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<PauliAxis> {
        match c {
            'X' => Some(PauliAxis::X),
            'Y' => Some(PauliAxis::Y),
            'Z' => Some(PauliAxis::Z),
            _ => None,
        }
    }

    /// The 2×2 matrix of this axis.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            PauliAxis::X => [[o, one], [one, o]],
            PauliAxis::Y => [[o, -i], [i, o]],
            PauliAxis::Z => [[one, o], [o, -one]],
        }
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for PauliAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => PauliAxis::from_letter(c.to_ascii_uppercase())
                .ok_or_else(|| Error::InvalidArgument(format!("unknown Pauli axis {s:?}"))),
            _ => Err(Error::InvalidArgument(format!("unknown Pauli axis {s:?}"))),
        }
    }
}

/// `i^k` for `k` taken mod 4.
pub fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// An element of the n-qubit Pauli group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

fn popcount_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(p, q)| (p & q).count_ones()).sum()
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliOperator {
            n,
            x: vec![0; w],
            z: vec![0; w],
            phase: 0,
        }
    }

    /// A single-qubit Pauli `axis` acting on `qubit` of an `n`-qubit register.
    pub fn single(n: usize, qubit: usize, axis: PauliAxis) -> Self {
        assert!(qubit < n, "qubit {qubit} out of range for {n} qubits");
        let mut p = PauliOperator::identity(n);
        p.set_axis(qubit, Some(axis));
        p
    }

    /// Builds an operator from one optional axis per qubit, with phase 0.
    pub fn from_axes(axes: &[Option<PauliAxis>]) -> Self {
        let mut p = PauliOperator::identity(axes.len());
        for (q, a) in axes.iter().enumerate() {
            p.set_axis(q, *a);
        }
        p
    }

    /// Builds an operator with `axis` on every qubit in `support`.
    pub fn uniform(n: usize, support: &[usize], axis: PauliAxis) -> Self {
        let mut p = PauliOperator::identity(n);
        for &q in support {
            p.set_axis(q, Some(axis));
        }
        p
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Phase exponent `k` of the `i^k` prefix, in `0..4`.
    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase_exp: u8) -> Self {
        self.phase = phase_exp % 4;
        self
    }

    /// Same operator without its phase prefix.
    pub fn unsigned(&self) -> Self {
        self.clone().with_phase(0)
    }

    pub fn x_bit(&self, q: usize) -> bool {
        (self.x[q / WORD] >> (q % WORD)) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        (self.z[q / WORD] >> (q % WORD)) & 1 == 1
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn axis(&self, q: usize) -> Option<PauliAxis> {
        PauliAxis::from_bits(self.x_bit(q), self.z_bit(q))
    }

    pub fn set_axis(&mut self, q: usize, axis: Option<PauliAxis>) {
        let (xb, zb) = axis.map_or((false, false), PauliAxis::bits);
        let (w, b) = (q / WORD, q % WORD);
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    /// Number of non-identity tensor factors.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Qubits carrying a non-identity factor, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.axis(q).is_some()).collect()
    }

    /// True when all bits are clear (the operator is a phase times identity).
    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Hermitian elements have an even phase exponent.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    fn check_same_size(&self, other: &PauliOperator) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Group product `self · other`.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check_same_size(other)?;
        Ok(self.product(other))
    }

    /// Group product without the size check; panics on mismatch.
    pub(crate) fn product(&self, other: &PauliOperator) -> PauliOperator {
        assert_eq!(self.n, other.n, "Pauli size mismatch");
        let x: Vec<u64> = self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect();
        let z: Vec<u64> = self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect();
        // Z^{z1} X^{x2} = (-1)^{z1·x2} X^{x2} Z^{z1}; the i^{xz} factors are re-balanced.
        let exp = self.phase as i64
            + other.phase as i64
            + popcount_and(&self.x, &self.z) as i64
            + popcount_and(&other.x, &other.z) as i64
            + 2 * popcount_and(&self.z, &other.x) as i64
            - popcount_and(&x, &z) as i64;
        PauliOperator {
            n: self.n,
            x,
            z,
            phase: exp.rem_euclid(4) as u8,
        }
    }

    /// Parity of the symplectic inner product; 0 means the operators commute.
    pub(crate) fn symplectic_parity(&self, other: &PauliOperator) -> u32 {
        (popcount_and(&self.x, &other.z) + popcount_and(&self.z, &other.x)) & 1
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        self.check_same_size(other)?;
        Ok(self.symplectic_parity(other) == 0)
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &PauliOperator) -> PauliOperator {
        let mut out = PauliOperator::identity(self.n + other.n);
        for q in 0..self.n {
            out.set_axis(q, self.axis(q));
        }
        for q in 0..other.n {
            out.set_axis(self.n + q, other.axis(q));
        }
        out.phase = (self.phase + other.phase) % 4;
        out
    }

    /// Places this operator on qubits `offset..offset + n` of a `total`-qubit register.
    pub fn embed(&self, total: usize, offset: usize) -> PauliOperator {
        assert!(offset + self.n <= total, "embedding out of range");
        let mut out = PauliOperator::identity(total);
        for q in 0..self.n {
            out.set_axis(offset + q, self.axis(q));
        }
        out.phase = self.phase;
        out
    }

    /// Letters only, without the phase prefix.
    pub fn letters(&self) -> String {
        (0..self.n)
            .map(|q| self.axis(q).map_or('I', PauliAxis::letter))
            .collect()
    }

    /// Lexicographic order of the letter strings with `I < X < Y < Z`.
    pub fn lex_cmp(&self, other: &PauliOperator) -> Ordering {
        let rank = |p: &PauliOperator, q: usize| match p.axis(q) {
            None => 0,
            Some(PauliAxis::X) => 1,
            Some(PauliAxis::Y) => 2,
            Some(PauliAxis::Z) => 3,
        };
        (0..self.n.min(other.n))
            .map(|q| rank(self, q).cmp(&rank(other, q)))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| self.n.cmp(&other.n))
    }

    /// Packed symplectic vector `[x words..., z words...]`, phase dropped.
    pub fn symplectic(&self) -> Vec<u64> {
        self.x.iter().chain(&self.z).copied().collect()
    }

    pub fn from_symplectic(n: usize, v: &[u64]) -> PauliOperator {
        let w = words_for(n);
        assert_eq!(v.len(), 2 * w);
        PauliOperator {
            n,
            x: v[..w].to_vec(),
            z: v[w..].to_vec(),
            phase: 0,
        }
    }

    fn masks(&self) -> (usize, usize) {
        // Basis index bit (n-1-q) carries qubit q.
        let mut xm = 0usize;
        let mut zm = 0usize;
        for q in 0..self.n {
            let bit = 1usize << (self.n - 1 - q);
            if self.x_bit(q) {
                xm |= bit;
            }
            if self.z_bit(q) {
                zm |= bit;
            }
        }
        (xm, zm)
    }

    /// Column action: `P|b⟩ = value(b) · |b ⊕ flip⟩`.
    pub(crate) fn monomial(&self) -> Monomial {
        let (flip, zmask) = self.masks();
        let base = (self.phase as u32 + (flip & zmask).count_ones()) % 4;
        Monomial {
            flip,
            zmask,
            base: base as u8,
        }
    }

    /// Dense `2^n × 2^n` matrix, refused above `max_qubits`.
    pub fn to_dense(&self, max_qubits: usize) -> Result<CMat> {
        check_dense_cap("Pauli matrix", self.n, max_qubits)?;
        let dim = 1usize << self.n;
        let m = self.monomial();
        let mut out = CMat::zeros(dim, dim);
        for b in 0..dim {
            out[(b ^ m.flip, b)] = m.value(b);
        }
        Ok(out)
    }

    /// All operators of exactly weight `w` on `n` qubits, in lexicographic letter order.
    pub fn all_of_weight(n: usize, w: usize) -> Vec<PauliOperator> {
        let mut out = Vec::new();
        for support in (0..n).combinations(w) {
            for axes in std::iter::repeat_n(PauliAxis::ALL, w).multi_cartesian_product() {
                let mut p = PauliOperator::identity(n);
                for (&q, a) in support.iter().zip(axes) {
                    p.set_axis(q, Some(a));
                }
                out.push(p);
            }
        }
        out.sort_by(|a, b| a.lex_cmp(b));
        out
    }

    /// The `3n` single-qubit Paulis, qubit-major then X, Y, Z.
    pub fn single_qubit_errors(n: usize) -> Vec<PauliOperator> {
        (0..n)
            .flat_map(|q| PauliAxis::ALL.map(|a| PauliOperator::single(n, q, a)))
            .collect()
    }
}

/// A Pauli operator viewed as a signed permutation matrix in the computational basis.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Monomial {
    pub flip: usize,
    pub zmask: usize,
    base: u8,
}

impl Monomial {
    /// Matrix entry at `(b ⊕ flip, b)`.
    #[inline]
    pub fn value(&self, b: usize) -> Complex64 {
        let sign = ((b & self.zmask).count_ones() % 2) as u8 * 2;
        i_pow(self.base + sign)
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.letters())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_pauli(text)
    }
}

/// Parses `[+|-|+i|-i]` followed by one or more of `I X Y Z`.
pub fn parse_pauli(text: &str) -> Result<PauliOperator> {
    let err = |reason: &str| Error::PauliParse {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let s = text.trim();
    let (phase, body) = if let Some(rest) = s.strip_prefix("+i") {
        (1, rest)
    } else if let Some(rest) = s.strip_prefix("-i") {
        (3, rest)
    } else if let Some(rest) = s.strip_prefix('+') {
        (0, rest)
    } else if let Some(rest) = s.strip_prefix('-') {
        (2, rest)
    } else {
        (0, s)
    };
    if body.is_empty() {
        return Err(err("empty operator"));
    }
    let mut axes = Vec::with_capacity(body.len());
    for c in body.chars() {
        match c {
            'I' => axes.push(None),
            _ => match PauliAxis::from_letter(c) {
                Some(a) => axes.push(Some(a)),
                None => return Err(err(&format!("invalid character {c:?}"))),
            },
        }
    }
    Ok(PauliOperator::from_axes(&axes).with_phase(phase))
}

impl Serialize for PauliOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_pauli(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn self_product_is_identity() {
        let x = p("X");
        let sq = x.multiply(&x).unwrap();
        assert!(sq.is_identity());
        assert_eq!(sq.phase_exp(), 0);
    }

    #[test]
    fn xz_is_minus_i_y() {
        let prod = p("X").multiply(&p("Z")).unwrap();
        assert_eq!(prod.to_string(), "-iY");
    }

    #[test]
    fn weights() {
        assert_eq!(p("IIIII").weight(), 0);
        assert_eq!(p("XZZXI").weight(), 4);
        assert_eq!(p("XXXIIIIII").weight(), 3);
        assert_eq!(p("ZZIZZIZZI").weight(), 6);
    }

    #[test]
    fn commutation_examples() {
        assert!(p("XI").commutes(&p("IX")).unwrap());
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(!p("XIIII").commutes(&p("ZXIXZ")).unwrap());
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(matches!(
            p("X").multiply(&p("XX")),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(p("X").commutes(&p("XX")).is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(parse_pauli("").is_err());
        assert!(parse_pauli("-i").is_err());
        assert!(parse_pauli("XQ").is_err());
        assert_eq!(p("-iXZ").phase_exp(), 3);
        assert_eq!(p("+iXZ").phase_exp(), 1);
        assert_eq!(p("-XZ").phase_exp(), 2);
    }

    #[test]
    fn dense_cap_is_enforced() {
        assert!(PauliOperator::identity(14).to_dense(13).is_err());
        assert_eq!(p("I").to_dense(13).unwrap(), CMat::identity(2, 2));
    }

    #[test]
    fn wide_registers_cross_word_boundaries() {
        let a = PauliOperator::single(130, 70, PauliAxis::X);
        let b = PauliOperator::single(130, 70, PauliAxis::Z);
        assert!(!a.commutes(&b).unwrap());
        assert_eq!(a.multiply(&b).unwrap().weight(), 1);
        assert_eq!(a.support(), vec![70]);
    }

    #[test]
    fn weight_enumeration_is_sorted_and_complete() {
        let ws = PauliOperator::all_of_weight(3, 2);
        assert_eq!(ws.len(), 3 * 9);
        assert!(ws.windows(2).all(|w| w[0].lex_cmp(&w[1]).is_lt()));
        assert_eq!(ws[0].letters(), "IXX");
    }
}
