//! Stabilizer-code Hamiltonians and their concatenations.

use serde::{Deserialize, Serialize};

use crate::codes::StabilizerCode;
use crate::error::{Error, Result};
use crate::linalg::{check_dense_cap, hermitian_eigenvalues, CMat, LinearAction, PauliSum};
use crate::pauli::PauliOperator;
use num_complex::Complex64;

/// One Hamiltonian term `coeff · op`, tagged with where it sits in the concatenation tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    pub pauli: PauliOperator,
    /// 1 for physical-level generators, `r` for the top level.
    pub level: usize,
    /// Block index among the `n^(r-level)` blocks of this level.
    pub block: usize,
    /// Index of the base-code generator this term encodes.
    pub generator: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Structure {
    Flat { base: String, levels: usize },
    Concatenated { base: String, levels: usize },
}

impl Structure {
    pub fn levels(&self) -> usize {
        match self {
            Structure::Flat { levels, .. } | Structure::Concatenated { levels, .. } => *levels,
        }
    }

    pub fn base(&self) -> &str {
        match self {
            Structure::Flat { base, .. } | Structure::Concatenated { base, .. } => base,
        }
    }
}

/// `H = -(J/2) Σ S` over commuting Pauli terms.
#[derive(Debug, Clone)]
pub struct CodeHamiltonian {
    j: f64,
    n_qubits: usize,
    terms: Vec<Term>,
    structure: Structure,
    code: StabilizerCode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumLevel {
    pub energy: f64,
    /// Number of violated terms for every state in the level.
    pub violations: usize,
    pub degeneracy: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSummary {
    #[serde(rename = "J")]
    pub j: f64,
    pub n_qubits: usize,
    pub levels: Vec<SpectrumLevel>,
    pub ground_energy: f64,
    pub gap: f64,
}

impl SpectrumSummary {
    pub fn total_degeneracy(&self) -> u128 {
        self.levels.iter().map(|l| l.degeneracy).sum()
    }

    /// Same degeneracies and energies within `1e-9·J`.
    pub fn matches(&self, other: &SpectrumSummary) -> bool {
        self.levels.len() == other.levels.len()
            && self.levels.iter().zip(&other.levels).all(|(a, b)| {
                a.degeneracy == b.degeneracy && (a.energy - b.energy).abs() <= 1e-9 * self.j
            })
    }
}

#[derive(Serialize)]
struct HamiltonianJson<'a> {
    #[serde(rename = "J")]
    j: f64,
    n_qubits: usize,
    terms: &'a [Term],
    structure: &'a Structure,
}

fn check_j(j: f64) -> Result<()> {
    if !(j.is_finite() && j > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "J must be positive, got {j}"
        )));
    }
    Ok(())
}

/// Logical representatives of one concatenation level, indexed X, Y, Z.
struct LevelLogicals([PauliOperator; 3]);

impl LevelLogicals {
    fn get(&self, letter: char) -> &PauliOperator {
        match letter {
            'X' => &self.0[0],
            'Y' => &self.0[1],
            _ => &self.0[2],
        }
    }
}

fn y_from(x: &PauliOperator, z: &PauliOperator) -> PauliOperator {
    let xz = x.product(z);
    let phase = xz.phase_exp() + 1;
    xz.with_phase(phase)
}

/// Replaces every letter of `op` (on `n` qubits) by the matching logical of `inner`.
fn substitute(op: &PauliOperator, inner: &LevelLogicals) -> PauliOperator {
    let block = inner.0[0].n_qubits();
    let total = op.n_qubits() * block;
    let mut out = PauliOperator::identity(total).with_phase(op.phase_exp());
    for q in 0..op.n_qubits() {
        if let Some(axis) = op.axis(q) {
            let rep = inner.get(axis.letter()).embed(total, q * block);
            out = out.product(&rep);
        }
    }
    out
}

impl CodeHamiltonian {
    /// One term `-J/2 · S` per declared generator.
    pub fn build_flat(code: &StabilizerCode, j: f64) -> Result<Self> {
        check_j(j)?;
        code.ensure_valid()?;
        let terms = code
            .generators()
            .iter()
            .enumerate()
            .map(|(g, op)| Term {
                coeff: -j / 2.0,
                pauli: op.clone(),
                level: 1,
                block: 0,
                generator: g,
            })
            .collect();
        Ok(CodeHamiltonian {
            j,
            n_qubits: code.n_qubits(),
            terms,
            structure: Structure::Flat {
                base: code.name().to_string(),
                levels: 1,
            },
            code: code.clone(),
        })
    }

    /// Level-`r` concatenation of a one-logical-qubit code.
    ///
    /// Level-`l` terms are the base generators with every letter replaced by the
    /// level-`(l-1)` logical representative of the corresponding sub-block, using
    /// the code's declared `X̄`, `Z̄` and `Ȳ = i X̄ Z̄`. Gauge operators are encoded
    /// the same way but are not Hamiltonian terms.
    pub fn build_concatenated(base: &StabilizerCode, r: usize, j: f64) -> Result<Self> {
        check_j(j)?;
        base.ensure_valid()?;
        if r == 0 {
            return Err(Error::InvalidArgument("levels must be at least 1".into()));
        }
        if base.logical_x().len() != 1 || base.logical_z().len() != 1 {
            return Err(Error::InvalidCode {
                name: base.name().to_string(),
                reason: "concatenation needs exactly one logical qubit".into(),
            });
        }
        let n = base.n_qubits();
        let total =
            n.checked_pow(r as u32)
                .filter(|t| *t <= 1 << 20)
                .ok_or(Error::CapExceeded {
                    what: "concatenated register",
                    requested: usize::MAX,
                    cap: 1 << 20,
                })?;

        let bx = base.logical_x()[0].clone();
        let bz = base.logical_z()[0].clone();
        // reps[l-1] holds the level-l logicals.
        let mut reps = vec![LevelLogicals([bx.clone(), y_from(&bx, &bz), bz.clone()])];
        for _ in 2..=r {
            let inner = reps.last().expect("non-empty");
            let x = substitute(&bx, inner);
            let z = substitute(&bz, inner);
            let y = y_from(&x, &z);
            reps.push(LevelLogicals([x, y, z]));
        }

        let encode = |op: &PauliOperator, level: usize| -> PauliOperator {
            if level == 1 {
                op.clone()
            } else {
                substitute(op, &reps[level - 2])
            }
        };

        let mut terms = Vec::new();
        let mut gauge_x = Vec::new();
        let mut gauge_z = Vec::new();
        for level in 1..=r {
            let size = n.pow(level as u32);
            let blocks = total / size;
            let encoded: Vec<PauliOperator> =
                base.generators().iter().map(|g| encode(g, level)).collect();
            let enc_gx: Vec<PauliOperator> =
                base.gauge_x().iter().map(|g| encode(g, level)).collect();
            let enc_gz: Vec<PauliOperator> =
                base.gauge_z().iter().map(|g| encode(g, level)).collect();
            for block in 0..blocks {
                for (g, op) in encoded.iter().enumerate() {
                    terms.push(Term {
                        coeff: -j / 2.0,
                        pauli: op.embed(total, block * size),
                        level,
                        block,
                        generator: g,
                    });
                }
                gauge_x.extend(enc_gx.iter().map(|op| op.embed(total, block * size)));
                gauge_z.extend(enc_gz.iter().map(|op| op.embed(total, block * size)));
            }
        }

        for (a, ta) in terms.iter().enumerate() {
            for tb in &terms[a + 1..] {
                if ta.pauli.symplectic_parity(&tb.pauli) == 1 {
                    return Err(Error::NonCommuting {
                        first: ta.pauli.to_string(),
                        second: tb.pauli.to_string(),
                    });
                }
            }
        }

        let top = reps.last().expect("non-empty");
        let code = StabilizerCode::new(
            format!("{}^{}", base.name(), r),
            total,
            terms.iter().map(|t| t.pauli.clone()).collect(),
            vec![top.0[0].clone()],
            vec![top.0[2].clone()],
            gauge_x,
            gauge_z,
        )?;
        Ok(CodeHamiltonian {
            j,
            n_qubits: total,
            terms,
            structure: Structure::Concatenated {
                base: base.name().to_string(),
                levels: r,
            },
            code,
        })
    }

    #[allow(non_snake_case)]
    pub fn J(&self) -> f64 {
        self.j
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    /// The code whose stabilizer is generated by the terms (for concatenations,
    /// the concatenated code with encoded logicals and gauge operators).
    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    pub fn levels(&self) -> usize {
        self.structure.levels()
    }

    /// Terms anticommuting with `e`.
    pub fn violated_terms(&self, e: &PauliOperator) -> Result<usize> {
        if e.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: e.n_qubits(),
            });
        }
        Ok(self
            .terms
            .iter()
            .filter(|t| t.pauli.symplectic_parity(e) == 1)
            .count())
    }

    /// Energy of `e` applied to a ground state, measured from the ground energy.
    pub fn error_energy(&self, e: &PauliOperator) -> Result<f64> {
        self.violated_terms(e)?;
        Ok(self
            .terms
            .iter()
            .filter(|t| t.pauli.symplectic_parity(e) == 1)
            .map(|t| 2.0 * t.coeff.abs())
            .sum())
    }

    /// Exact spectrum from commutation counting: `v` violated terms out of `m`
    /// independent ones give energy `-mJ/2 + vJ` with `C(m,v)·2^(n-m)` states.
    pub fn spectrum(&self) -> Result<SpectrumSummary> {
        let m = self.terms.len();
        let n = self.n_qubits;
        if n > 127 {
            return Err(Error::CapExceeded {
                what: "integer degeneracy count",
                requested: n,
                cap: 127,
            });
        }
        let base: u128 = 1u128 << (n - m);
        let mut levels = Vec::with_capacity(m + 1);
        let mut binom: u128 = 1;
        for v in 0..=m {
            let degeneracy = binom.checked_mul(base).ok_or(Error::CapExceeded {
                what: "integer degeneracy count",
                requested: n,
                cap: 127,
            })?;
            levels.push(SpectrumLevel {
                energy: -(m as f64) * self.j / 2.0 + v as f64 * self.j,
                violations: v,
                degeneracy,
            });
            if v < m {
                binom = binom
                    .checked_mul((m - v) as u128)
                    .map(|b| b / (v as u128 + 1))
                    .ok_or(Error::CapExceeded {
                        what: "integer degeneracy count",
                        requested: n,
                        cap: 127,
                    })?;
            }
        }
        Ok(SpectrumSummary {
            j: self.j,
            n_qubits: n,
            ground_energy: levels[0].energy,
            gap: if m == 0 { 0.0 } else { self.j },
            levels,
        })
    }

    pub fn to_pauli_sum(&self) -> PauliSum {
        let mut s = PauliSum::new(self.n_qubits);
        for t in &self.terms {
            s.push(Complex64::new(t.coeff, 0.0), t.pauli.clone());
        }
        s
    }

    /// Dense Hermitian matrix `Σ coeff · P`.
    pub fn to_dense(&self, max_qubits: usize) -> Result<CMat> {
        check_dense_cap("dense Hamiltonian", self.n_qubits, max_qubits)?;
        Ok(self.to_pauli_sum().to_dense())
    }

    /// Spectrum from dense diagonalization; eigenvalues within `1e-9·J` are merged.
    pub fn numeric_spectrum(&self, max_qubits: usize) -> Result<SpectrumSummary> {
        let dense = self.to_dense(max_qubits)?;
        let vals = hermitian_eigenvalues(&dense);
        let tol = 1e-9 * self.j;
        let mut levels: Vec<SpectrumLevel> = Vec::new();
        let mut sums: Vec<f64> = Vec::new();
        for v in vals {
            match levels.last_mut() {
                Some(last) if (v - last.energy).abs() <= tol => {
                    last.degeneracy += 1;
                    *sums.last_mut().expect("paired") += v;
                }
                _ => {
                    levels.push(SpectrumLevel {
                        energy: v,
                        violations: 0,
                        degeneracy: 1,
                    });
                    sums.push(v);
                }
            }
        }
        let ground = levels[0].energy;
        for (level, sum) in levels.iter_mut().zip(&sums) {
            level.energy = sum / level.degeneracy as f64;
            level.violations = ((level.energy - ground) / self.j).round() as usize;
        }
        let gap = if levels.len() > 1 {
            levels[1].energy - levels[0].energy
        } else {
            0.0
        };
        Ok(SpectrumSummary {
            j: self.j,
            n_qubits: self.n_qubits,
            ground_energy: levels[0].energy,
            gap,
            levels,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&HamiltonianJson {
            j: self.j,
            n_qubits: self.n_qubits,
            terms: &self.terms,
            structure: &self.structure,
        })
        .expect("hamiltonian serializes")
    }
}
