//! Families of pairwise anticommuting Hermitian involutions (gamma matrices).
//!
//! Generators come in Jordan-Wigner pairs: the `k`-th pair is
//! `Z⊗…⊗Z ⊗ X ⊗ 𝟙⊗…⊗𝟙` and `Z⊗…⊗Z ⊗ Y ⊗ 𝟙⊗…⊗𝟙` with `k` leading `Z`
//! factors, on `⌈d/2⌉` qubits. The string of `Z`s is the grading operator
//! that makes later pairs anticommute with earlier ones.

use crate::error::{Error, Result};
use crate::linalg;
use crate::qsim::{pauli_x, pauli_y, pauli_z, tensor, ComplexMatrix, Observable};
use crate::tolerance::{MAX_CLIFFORD_GENERATORS, STRUCTURAL};

#[derive(Clone, Debug)]
pub struct GammaFamily {
    gammas: Vec<Observable>,
    dim: usize,
}

impl GammaFamily {
    /// Number of generators.
    pub fn d(&self) -> usize {
        self.gammas.len()
    }

    /// Hilbert-space dimension `2^⌈d/2⌉`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gammas(&self) -> &[Observable] {
        &self.gammas
    }

    /// `Σᵢ vᵢ γᵢ`. Since `(v·γ)² = |v|² 𝟙`, the spectrum is `±|v|`, so any
    /// vector in the unit ball yields a valid observable.
    pub fn embed_vector(&self, v: &[f64]) -> Result<Observable> {
        if v.len() > self.d() {
            return Err(Error::DimensionMismatch(format!(
                "vector of dimension {} needs at least {} generators, family has {}",
                v.len(),
                v.len(),
                self.d()
            )));
        }
        let norm = linalg::norm(v);
        if norm > 1.0 + STRUCTURAL {
            return Err(Error::NormViolation { norm, expected: "|v| <= 1" });
        }
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for (x, g) in v.iter().zip(&self.gammas) {
            if *x != 0.0 {
                acc = &acc + &g.matrix().scale_real(*x);
            }
        }
        Observable::new(acc)
    }

    /// Largest entry of `γᵢγⱼ + γⱼγᵢ − 2δᵢⱼ𝟙` over all pairs.
    pub fn anticommutator_defect(&self) -> f64 {
        let id = ComplexMatrix::identity(self.dim);
        let mut worst: f64 = 0.0;
        for (i, gi) in self.gammas.iter().enumerate() {
            for (j, gj) in self.gammas.iter().enumerate().skip(i) {
                let anti = &(gi.matrix() * gj.matrix()) + &(gj.matrix() * gi.matrix());
                let expected = if i == j { id.scale_real(2.0) } else { ComplexMatrix::zeros(self.dim, self.dim) };
                worst = worst.max(anti.max_abs_diff(&expected));
            }
        }
        worst
    }
}

/// Deterministic family of `d` generators, `1 ≤ d ≤` [`MAX_CLIFFORD_GENERATORS`].
pub fn generate(d: usize) -> Result<GammaFamily> {
    generate_with_limit(d, MAX_CLIFFORD_GENERATORS)
}

pub fn generate_with_limit(d: usize, max_d: usize) -> Result<GammaFamily> {
    if d == 0 {
        return Err(Error::OutOfRange("need at least one generator".into()));
    }
    if d > max_d {
        return Err(Error::ResourceLimit(format!(
            "{d} gamma generators requested, limit is {max_d}"
        )));
    }
    let qubits = d.div_ceil(2);
    let dim = 1usize << qubits;
    let id2 = ComplexMatrix::identity(2);
    let z = pauli_z();
    let mut gammas = Vec::with_capacity(d);
    for k in 0..qubits {
        for local in [pauli_x(), pauli_y()] {
            if gammas.len() == d {
                break;
            }
            let mut m = ComplexMatrix::identity(1);
            for q in 0..qubits {
                let factor = match q.cmp(&k) {
                    std::cmp::Ordering::Less => &z,
                    std::cmp::Ordering::Equal => &local,
                    std::cmp::Ordering::Greater => &id2,
                };
                m = tensor(&m, factor);
            }
            gammas.push(Observable::new(m)?);
        }
    }
    Ok(GammaFamily { gammas, dim })
}
