//! Dense complex matrices and the few numerical kernels the engine needs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Monomial, PauliOperator};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Default qubit cap for dense matrices.
pub const DEFAULT_MAX_QUBITS: usize = 13;

pub fn check_dense_cap(what: &'static str, n_qubits: usize, max_qubits: usize) -> Result<()> {
    if n_qubits > max_qubits {
        return Err(Error::CapExceeded {
            what,
            requested: n_qubits,
            cap: max_qubits,
        });
    }
    Ok(())
}

const NORM_REL_TOL: f64 = 1e-10;
const NORM_MAX_ITERS: usize = 300;
const LANCZOS_MAX_STEPS: usize = 160;

/// Largest singular value by power iteration on `M†M`.
///
/// The start vector is fixed, so repeated calls give identical results. When the
/// leading singular values are too close for the iteration to settle quickly, the
/// iterate seeds a Lanczos run on `M†M` instead.
pub fn operator_norm(m: &CMat) -> f64 {
    let cols = m.ncols();
    if cols == 0 || m.nrows() == 0 {
        return 0.0;
    }
    let scale = m.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    // Golden-ratio offsets keep the start vector generic with respect to any fixed basis.
    let mut v = CVec::from_fn(cols, |k, _| {
        Complex64::new(0.5 + ((k + 1) as f64 * 0.618_033_988_749_895).fract(), 0.0)
    });
    v /= Complex64::new(v.norm(), 0.0);
    let adj = m.adjoint();
    let mut estimate = 0.0;
    for _ in 0..NORM_MAX_ITERS {
        let mv = m * &v;
        let next = mv.norm();
        if next == 0.0 {
            return 0.0;
        }
        let w = &adj * mv;
        let wn = w.norm();
        if wn == 0.0 {
            return next;
        }
        v = w / Complex64::new(wn, 0.0);
        if (next - estimate).abs() <= NORM_REL_TOL * next {
            return next.max(estimate);
        }
        estimate = next;
    }
    lanczos_top(m, &adj, v).max(estimate)
}

/// Largest eigenvalue of `M†M` (square-rooted) by Lanczos with full reorthogonalization.
fn lanczos_top(m: &CMat, adj: &CMat, start: CVec) -> f64 {
    let dim = m.ncols();
    let steps = LANCZOS_MAX_STEPS.min(dim);
    let mut basis: Vec<CVec> = vec![start];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut previous = f64::NEG_INFINITY;
    for k in 0..steps {
        let mut w = adj * (m * &basis[k]);
        alpha.push(basis[k].dotc(&w).re);
        for _ in 0..2 {
            for b in &basis {
                let c = b.dotc(&w);
                w.axpy(-c, b, Complex64::new(1.0, 0.0));
            }
        }
        let top = tridiagonal_top(&alpha, &beta);
        let b = w.norm();
        if b <= 1e-14 * top.abs().max(1e-300) || (top - previous).abs() <= 1e-14 * top {
            return top.max(0.0).sqrt();
        }
        previous = top;
        beta.push(b);
        basis.push(w / Complex64::new(b, 0.0));
    }
    previous.max(0.0).sqrt()
}

fn tridiagonal_top(alpha: &[f64], beta: &[f64]) -> f64 {
    let k = alpha.len();
    let t = DMatrix::<f64>::from_fn(k, k, |r, c| {
        if r == c {
            alpha[r]
        } else if r + 1 == c {
            beta[r]
        } else if c + 1 == r {
            beta[c]
        } else {
            0.0
        }
    });
    t.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let eig = m.clone().symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Eigenvalues (ascending) and the matching eigenvector columns of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = CMat::from_fn(m.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (vals, vecs)
}

pub fn trace(m: &CMat) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Something that can multiply a dense matrix from either side.
pub trait LinearAction {
    fn dim(&self) -> usize;
    /// `self · m`
    fn left_mul(&self, m: &CMat) -> CMat;
    /// `m · self`
    fn right_mul(&self, m: &CMat) -> CMat;
    fn to_dense(&self) -> CMat;
}

impl LinearAction for CMat {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn left_mul(&self, m: &CMat) -> CMat {
        self * m
    }

    fn right_mul(&self, m: &CMat) -> CMat {
        m * self
    }

    fn to_dense(&self) -> CMat {
        self.clone()
    }
}

/// A complex linear combination of Pauli operators on a fixed register.
///
/// Multiplication against dense matrices uses the signed-permutation structure of
/// each term, so a product costs `terms · dim²` instead of `dim³`.
#[derive(Debug, Clone)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(Complex64, PauliOperator)>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        PauliSum {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn push(&mut self, coeff: Complex64, op: PauliOperator) {
        assert_eq!(op.n_qubits(), self.n_qubits, "Pauli size mismatch");
        self.terms.push((coeff, op));
    }

    pub fn terms(&self) -> &[(Complex64, PauliOperator)] {
        &self.terms
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn is_empty(&self) -> bool {
        self.terms.iter().all(|(c, _)| c.norm() == 0.0)
    }

    fn monomials(&self) -> impl Iterator<Item = (Complex64, Monomial)> + '_ {
        self.terms
            .iter()
            .filter(|(c, _)| c.norm() != 0.0)
            .map(|(c, p)| (*c, p.monomial()))
    }
}

impl LinearAction for PauliSum {
    fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    fn left_mul(&self, m: &CMat) -> CMat {
        let dim = self.dim();
        assert_eq!(m.nrows(), dim);
        let mut out = CMat::zeros(dim, m.ncols());
        for (c, mono) in self.monomials() {
            for k in 0..dim {
                let f = c * mono.value(k);
                let target = k ^ mono.flip;
                for col in 0..m.ncols() {
                    out[(target, col)] += f * m[(k, col)];
                }
            }
        }
        out
    }

    fn right_mul(&self, m: &CMat) -> CMat {
        let dim = self.dim();
        assert_eq!(m.ncols(), dim);
        let mut out = CMat::zeros(m.nrows(), dim);
        for (c, mono) in self.monomials() {
            for col in 0..dim {
                let f = c * mono.value(col);
                let src = m.column(col ^ mono.flip);
                let mut dst = out.column_mut(col);
                dst.axpy(f, &src, Complex64::new(1.0, 0.0));
            }
        }
        out
    }

    fn to_dense(&self) -> CMat {
        let dim = self.dim();
        let mut out = CMat::zeros(dim, dim);
        for (c, mono) in self.monomials() {
            for b in 0..dim {
                out[(b ^ mono.flip, b)] += c * mono.value(b);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_method_matches_svd() {
        let m = CMat::from_fn(6, 6, |r, c| {
            Complex64::new(((r * 7 + c * 3) % 5) as f64 - 2.0, ((r + 2 * c) % 3) as f64)
        });
        let svd = m.clone().svd(false, false);
        let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
        assert!((operator_norm(&m) - top).abs() < 1e-8 * top);
        assert_eq!(operator_norm(&CMat::zeros(3, 3)), 0.0);
    }

    #[test]
    fn nearly_degenerate_norm() {
        let dim = 300;
        let m = CMat::from_fn(dim, dim, |r, c| {
            if r == c {
                Complex64::new(1.0 - 1e-9 * (r % 3) as f64 - (r as f64) * 1e-3, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!((operator_norm(&m) - 1.0).abs() < 1e-12);
        let lanczos = lanczos_top(
            &m,
            &m.adjoint(),
            CVec::from_element(dim, Complex64::new(1.0 / (dim as f64).sqrt(), 0.0)),
        );
        assert!((lanczos - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_sum_products_match_dense() {
        let mut s = PauliSum::new(3);
        s.push(Complex64::new(0.5, 0.0), "XZY".parse().unwrap());
        s.push(Complex64::new(0.0, -1.5), "IZI".parse().unwrap());
        let dense = s.to_dense();
        let m = CMat::from_fn(8, 8, |r, c| {
            Complex64::new(r as f64 - c as f64, (r * c) as f64)
        });
        assert!((s.left_mul(&m) - &dense * &m).norm() < 1e-12);
        assert!((s.right_mul(&m) - &m * &dense).norm() < 1e-12);
    }
}
