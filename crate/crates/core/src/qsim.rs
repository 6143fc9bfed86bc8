//! Dense complex-matrix quantum kernel: matrices, density matrices, bounded
//! observables, pure states, tensor products, partial traces and purification.
//!
//! Everything is immutable after construction. Constructors of
//! [`DensityMatrix`] and [`Observable`] validate their invariants at
//! [`STRUCTURAL`] tolerance, with spectral checks done on the Hermitian part
//! `(M + M†) / 2`.
//!
//! Matrices travel through files as `{"rows": n, "cols": m, "re": [...], "im": [...]}`
//! in row-major order (see [`MatrixJson`]).

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::{MAX_TOTAL_DIM, RANK_CUTOFF, STRUCTURAL};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

pub(crate) fn check_total_dim(dim: usize) -> Result<()> {
    if dim > MAX_TOTAL_DIM {
        return Err(Error::ResourceLimit(format!(
            "total dimension {dim} exceeds {MAX_TOTAL_DIM}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, entries)))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let entries: Vec<C64> = rows.iter().flatten().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_row_major(r, c, &entries)
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { C64::new(values[i], 0.0) } else { ZERO })
    }

    pub fn from_inner(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn dagger(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.dagger()) <= tol
    }

    /// Ascending eigenvalues and matching eigenvector columns of the Hermitian part.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, ComplexMatrix) {
        assert!(self.is_square(), "eigen-decomposition needs a square matrix");
        let eig = self.hermitian_part().0.symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let n = self.rows();
        let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        (values, Self(vectors))
    }

    /// Traces out the leading tensor factor of dimension `dim_first`.
    pub fn partial_trace_first(&self, dim_first: usize) -> Result<Self> {
        let n = self.rows();
        if !self.is_square() || dim_first == 0 || n % dim_first != 0 {
            return Err(Error::DimensionMismatch(format!(
                "cannot trace a factor of dimension {dim_first} out of {n}x{}",
                self.cols()
            )));
        }
        let rest = n / dim_first;
        Ok(Self::from_fn(rest, rest, |k, l| {
            (0..dim_first).map(|i| self.0[(i * rest + k, i * rest + l)]).sum()
        }))
    }

    /// Traces out the trailing tensor factor of dimension `dim_second`.
    pub fn partial_trace_second(&self, dim_second: usize) -> Result<Self> {
        let n = self.rows();
        if !self.is_square() || dim_second == 0 || n % dim_second != 0 {
            return Err(Error::DimensionMismatch(format!(
                "cannot trace a factor of dimension {dim_second} out of {n}x{}",
                self.cols()
            )));
        }
        let first = n / dim_second;
        Ok(Self::from_fn(first, first, |i, j| {
            (0..dim_second).map(|k| self.0[(i * dim_second + k, j * dim_second + k)]).sum()
        }))
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols(), v.len(), "matrix-vector shape mismatch");
        (self.0.clone() * DVector::from_column_slice(v)).iter().copied().collect()
    }

    pub fn to_json(&self) -> MatrixJson {
        let mut re = Vec::with_capacity(self.rows() * self.cols());
        let mut im = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                re.push(self.0[(i, j)].re);
                im.push(self.0[(i, j)].im);
            }
        }
        MatrixJson { rows: self.rows(), cols: self.cols(), re, im }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

/// Row-major JSON exchange form of a complex matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl TryFrom<&MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: &MatrixJson) -> Result<Self> {
        if j.re.len() != j.im.len() {
            return Err(Error::Malformed(format!(
                "re has {} entries but im has {}",
                j.re.len(),
                j.im.len()
            )));
        }
        if j.re.iter().chain(&j.im).any(|x| !x.is_finite()) {
            return Err(Error::Malformed("non-finite matrix entry".into()));
        }
        let entries: Vec<C64> = j.re.iter().zip(&j.im).map(|(&r, &i)| C64::new(r, i)).collect();
        ComplexMatrix::from_row_major(j.rows, j.cols, &entries)
    }
}

/// Kronecker product; dimensions multiply and entry `(i·rb + k, j·cb + l)` is `a(i,j)·b(k,l)`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidState(format!(
                "not square: {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        check_total_dim(matrix.rows())?;
        if !matrix.is_hermitian(STRUCTURAL) {
            return Err(Error::InvalidState("not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STRUCTURAL || tr.im.abs() > STRUCTURAL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let (values, _) = matrix.hermitian_eigen();
        if values[0] < -STRUCTURAL {
            return Err(Error::InvalidState(format!("negative eigenvalue {}", values[0])));
        }
        Ok(Self { matrix })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let a = psi.amplitudes();
        let n = a.len();
        Self {
            matrix: ComplexMatrix::from_fn(n, n, |i, j| a[i] * a[j].conj()),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        check_total_dim(a.dim() * b.dim())?;
        Ok(Self { matrix: tensor(&a.matrix, &b.matrix) })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Hermitian operator with spectrum inside `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidObservable(format!(
                "not square: {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        check_total_dim(matrix.rows())?;
        if !matrix.is_hermitian(STRUCTURAL) {
            return Err(Error::InvalidObservable("not Hermitian".into()));
        }
        let (values, _) = matrix.hermitian_eigen();
        let (lo, hi) = (values[0], values[values.len() - 1]);
        if lo < -1.0 - STRUCTURAL || hi > 1.0 + STRUCTURAL {
            return Err(Error::InvalidObservable(format!(
                "spectrum [{lo}, {hi}] leaves [-1, 1]"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn negated(&self) -> Self {
        Self { matrix: self.matrix.scale_real(-1.0) }
    }

    /// Transpose of a bounded Hermitian operator is again one.
    pub fn transposed(&self) -> Self {
        Self { matrix: self.matrix.transpose() }
    }

    /// Product of observables on distinct tensor factors stays within `[-1, 1]`.
    pub fn local_product(a: &Observable, b: &Observable) -> Result<Self> {
        check_total_dim(a.dim() * b.dim())?;
        Ok(Self { matrix: tensor(&a.matrix, &b.matrix) })
    }

    /// True when the operator squares to the identity, i.e. it is `P₊ − P₋`.
    pub fn is_projective(&self, tol: f64) -> bool {
        let sq = &self.matrix * &self.matrix;
        sq.max_abs_diff(&ComplexMatrix::identity(self.dim())) <= tol
    }

    /// Spectral projector `(𝟙 + s·O) / 2` for outcome `s = ±1`.
    pub fn outcome_effect(&self, outcome: i8) -> ComplexMatrix {
        let id = ComplexMatrix::identity(self.dim());
        (&id + &self.matrix.scale_real(f64::from(outcome))).scale_real(0.5)
    }
}

/// Normalised state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if amplitudes.is_empty() || (n - 1.0).abs() > STRUCTURAL {
            return Err(Error::NormViolation { norm: n, expected: "state norm = 1" });
        }
        Ok(Self { amplitudes })
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[k] = ONE;
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `⟨ψ| M |ψ⟩`.
    pub fn sandwich(&self, m: &ComplexMatrix) -> C64 {
        let mv = m.mul_vec(&self.amplitudes);
        self.amplitudes.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Applies `op` to the middle factor of a vector on `left ⊗ op.dim ⊗ right`.
pub fn apply_local(op: &ComplexMatrix, psi: &[C64], left: usize, right: usize) -> Vec<C64> {
    let mid = op.rows();
    assert_eq!(psi.len(), left * mid * right, "apply_local shape mismatch");
    let mut out = vec![ZERO; psi.len()];
    for l in 0..left {
        for i in 0..mid {
            for k in 0..mid {
                let a = op.get(i, k);
                if a == ZERO {
                    continue;
                }
                let dst = (l * mid + i) * right;
                let src = (l * mid + k) * right;
                for r in 0..right {
                    out[dst + r] += a * psi[src + r];
                }
            }
        }
    }
    out
}

/// `tr(ρ O)`; the imaginary part must vanish within [`STRUCTURAL`].
pub fn expectation(rho: &DensityMatrix, obs: &Observable) -> Result<f64> {
    if rho.dim() != obs.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state has dimension {} but observable {}",
            rho.dim(),
            obs.dim()
        )));
    }
    let v = trace_of_product(rho.matrix(), obs.matrix());
    debug_assert!(v.im.abs() < STRUCTURAL, "complex expectation {v}");
    Ok(v.re)
}

/// `tr(A B)` without forming the product.
pub fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.rows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..a.cols() {
            acc += a.get(i, k) * b.get(k, i);
        }
    }
    acc
}

pub fn partial_trace_first(rho: &DensityMatrix, dim_first: usize) -> Result<DensityMatrix> {
    Ok(DensityMatrix {
        matrix: rho.matrix().partial_trace_first(dim_first)?,
    })
}

pub fn partial_trace_second(rho: &DensityMatrix, dim_second: usize) -> Result<DensityMatrix> {
    Ok(DensityMatrix {
        matrix: rho.matrix().partial_trace_second(dim_second)?,
    })
}

/// A purification `|ψ⟩` on `system ⊗ ancilla`, ancilla dimension equal to the rank.
#[derive(Clone, Debug)]
pub struct Purification {
    pub state: PureState,
    pub system_dim: usize,
    pub ancilla_dim: usize,
}

impl Purification {
    pub fn marginal(&self) -> DensityMatrix {
        let rho = DensityMatrix::from_pure(&self.state);
        partial_trace_second(&rho, self.ancilla_dim).expect("dimensions match by construction")
    }
}

/// Spectral purification `Σₖ √λₖ |uₖ⟩ ⊗ |k⟩` over eigenvalues above [`RANK_CUTOFF`].
pub fn purify(rho: &DensityMatrix) -> Purification {
    let (values, vectors) = rho.matrix().hermitian_eigen();
    let n = rho.dim();
    let kept: Vec<usize> = (0..n).rev().filter(|&k| values[k] > RANK_CUTOFF).collect();
    let rank = kept.len().max(1);
    let mut amps = vec![ZERO; n * rank];
    for (slot, &k) in kept.iter().enumerate() {
        let w = values[k].sqrt();
        for i in 0..n {
            amps[i * rank + slot] = vectors.get(i, k) * w;
        }
    }
    // Dropped eigenvalues leave the norm short by at most n·RANK_CUTOFF.
    let total: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= total;
    }
    Purification {
        state: PureState { amplitudes: amps },
        system_dim: n,
        ancilla_dim: rank,
    }
}

/// `(1/√d) Σᵢ |i⟩|i⟩`.
pub fn maximally_entangled(dim: usize) -> Result<PureState> {
    if dim == 0 {
        return Err(Error::DimensionMismatch("dimension must be positive".into()));
    }
    check_total_dim(dim * dim)?;
    let w = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
    let mut amplitudes = vec![ZERO; dim * dim];
    for i in 0..dim {
        amplitudes[i * dim + i] = w;
    }
    Ok(PureState { amplitudes })
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO })
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => C64::new(0.0, -1.0),
        (1, 0) => C64::new(0.0, 1.0),
        _ => ZERO,
    })
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diag(&[1.0, -1.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let i4 = tensor(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));
    }

    #[test]
    fn tensor_diagonal_case() {
        let t = tensor(&pauli_z(), &ComplexMatrix::identity(2));
        assert_eq!(t, ComplexMatrix::diag(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn tensor_matches_index_formula() {
        let mut r = rng(1);
        let a = random::ginibre(2, 3, &mut r);
        let b = random::ginibre(3, 2, &mut r);
        let t = tensor(&a, &b);
        assert_eq!((t.rows(), t.cols()), (6, 6));
        for i in 0..2 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..2 {
                        assert_eq!(t.get(i * 3 + k, j * 2 + l), a.get(i, j) * b.get(k, l));
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_is_associative() {
        let mut r = rng(2);
        let (a, b, c) = (random::ginibre(2, 2, &mut r), random::ginibre(3, 1, &mut r), random::ginibre(2, 3, &mut r));
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        assert!(left.max_abs_diff(&right) <= 1e-12);
    }

    #[test]
    fn density_matrix_rejects_invalid_inputs() {
        let not_herm = ComplexMatrix::from_row_major(2, 2, &[ONE, ONE, ZERO, ZERO]).unwrap();
        assert!(matches!(DensityMatrix::new(not_herm), Err(Error::InvalidState(_))));
        let bad_trace = ComplexMatrix::identity(2);
        assert!(matches!(DensityMatrix::new(bad_trace), Err(Error::InvalidState(_))));
        let negative = ComplexMatrix::diag(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(negative), Err(Error::InvalidState(_))));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(DensityMatrix::new(rect).is_err());
    }

    #[test]
    fn observable_rejects_large_spectrum() {
        assert!(Observable::new(ComplexMatrix::diag(&[1.0, -1.0])).is_ok());
        assert!(matches!(
            Observable::new(ComplexMatrix::diag(&[1.2, 0.0])),
            Err(Error::InvalidObservable(_))
        ));
    }

    #[test]
    fn partial_trace_of_product_recovers_second_factor() {
        let mut r = rng(3);
        for _ in 0..20 {
            let sa = random::density_matrix(2, &mut r);
            let sb = random::density_matrix(3, &mut r);
            let prod = DensityMatrix::product(&sa, &sb).unwrap();
            let got = partial_trace_first(&prod, 2).unwrap();
            assert!(got.matrix().max_abs_diff(sb.matrix()) <= 1e-12);
            let other = partial_trace_second(&prod, 3).unwrap();
            assert!(other.matrix().max_abs_diff(sa.matrix()) <= 1e-12);
        }
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let phi = DensityMatrix::from_pure(&maximally_entangled(2).unwrap());
        let m = partial_trace_first(&phi, 2).unwrap();
        assert!(m.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let mut r = rng(4);
        for _ in 0..50 {
            let rho = random::density_matrix(4, &mut r);
            let m = partial_trace_first(&rho, 2).unwrap();
            assert!((m.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_rejects_non_divisor() {
        let rho = DensityMatrix::maximally_mixed(6);
        assert!(matches!(partial_trace_first(&rho, 4), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn expectation_basic_cases() {
        let mut r = rng(5);
        let rho = random::density_matrix(3, &mut r);
        assert!((expectation(&rho, &Observable::identity(3)).unwrap() - 1.0).abs() < 1e-12);
        let zero = DensityMatrix::from_pure(&PureState::basis(2, 0));
        let z = Observable::new(pauli_z()).unwrap();
        assert_eq!(expectation(&zero, &z).unwrap(), 1.0);
        assert!(matches!(expectation(&rho, &z), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn expectation_matches_double_loop() {
        let mut r = rng(6);
        for _ in 0..20 {
            let rho = random::density_matrix(4, &mut r);
            let obs = random::observable(4, &mut r);
            let mut naive = ZERO;
            for i in 0..4 {
                for j in 0..4 {
                    naive += rho.matrix().get(j, i) * obs.matrix().get(i, j);
                }
            }
            assert!((expectation(&rho, &obs).unwrap() - naive.re).abs() < 1e-12);
            assert!(naive.im.abs() < 1e-12);
        }
    }

    #[test]
    fn purify_pure_and_mixed_inputs() {
        let zero = DensityMatrix::from_pure(&PureState::basis(2, 0));
        let p = purify(&zero);
        assert_eq!(p.ancilla_dim, 1);
        assert!(p.marginal().matrix().max_abs_diff(zero.matrix()) < 1e-9);
        assert!((p.state.amplitudes()[0].norm() - 1.0).abs() < 1e-12);

        let mixed = DensityMatrix::maximally_mixed(2);
        let p = purify(&mixed);
        assert_eq!(p.ancilla_dim, 2);
        assert!(p.marginal().matrix().max_abs_diff(mixed.matrix()) < 1e-9);

        let mut r = rng(7);
        for _ in 0..10 {
            let rho = random::density_matrix(3, &mut r);
            let p = purify(&rho);
            assert!(p.marginal().matrix().max_abs_diff(rho.matrix()) < 1e-9);
        }
    }

    #[test]
    fn maximally_entangled_contracts_to_transpose_trace() {
        let phi1 = maximally_entangled(1).unwrap();
        let a = ComplexMatrix::from_row_major(1, 1, &[C64::new(0.3, 0.0)]).unwrap();
        let b = ComplexMatrix::from_row_major(1, 1, &[C64::new(-0.5, 0.0)]).unwrap();
        assert!((phi1.sandwich(&tensor(&a, &b)) - C64::new(-0.15, 0.0)).norm() < 1e-15);

        let phi2 = maximally_entangled(2).unwrap();
        let id = ComplexMatrix::identity(2);
        assert!((phi2.sandwich(&tensor(&id, &id)) - ONE).norm() < 1e-15);

        let mut r = rng(8);
        let phi = maximally_entangled(4).unwrap();
        for _ in 0..10 {
            let a = random::ginibre(4, 4, &mut r);
            let b = random::ginibre(4, 4, &mut r);
            let lhs = phi.sandwich(&tensor(&a, &b));
            let mut rhs = ZERO;
            for i in 0..4 {
                for j in 0..4 {
                    rhs += a.get(i, j) * b.get(i, j);
                }
            }
            assert!((lhs - rhs / 4.0).norm() < 1e-10);
        }
    }

    #[test]
    fn apply_local_matches_full_kronecker() {
        let mut r = rng(9);
        let op = random::ginibre(2, 2, &mut r);
        let psi: Vec<C64> = (0..12).map(|k| C64::new(k as f64, -(k as f64) / 2.0)).collect();
        let full = tensor(&tensor(&ComplexMatrix::identity(3), &op), &ComplexMatrix::identity(2));
        let a = apply_local(&op, &psi, 3, 2);
        let b = full.mul_vec(&psi);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn matrix_json_round_trip_is_row_major() {
        let m = ComplexMatrix::from_row_major(2, 3, &[ONE, ZERO, C64::new(0.0, 2.0), ZERO, ONE, ONE]).unwrap();
        let j = m.to_json();
        assert_eq!(j.re, vec![1.0, 0.0, 0.0, 0.0, 1.0, 1.0]);
        assert_eq!(j.im, vec![0.0, 0.0, 2.0, 0.0, 0.0, 0.0]);
        let back = ComplexMatrix::try_from(&j).unwrap();
        assert_eq!(back, m);
        let bad = MatrixJson { rows: 2, cols: 2, re: vec![1.0; 3], im: vec![0.0; 3] };
        assert!(ComplexMatrix::try_from(&bad).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn expectation_is_linear_in_observable(seed in any::<u64>(), alpha in -1.0f64..1.0, beta in -1.0f64..1.0) {
                let mut r = rng(seed);
                let rho = random::density_matrix(3, &mut r);
                let o1 = random::observable(3, &mut r);
                let o2 = random::observable(3, &mut r);
                let combo = &o1.matrix().scale_real(alpha) + &o2.matrix().scale_real(beta);
                let lhs = trace_of_product(rho.matrix(), &combo).re;
                let rhs = alpha * expectation(&rho, &o1).unwrap() + beta * expectation(&rho, &o2).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-10);
            }

            #[test]
            fn tensor_is_bilinear(seed in any::<u64>(), s in -2.0f64..2.0) {
                let mut r = rng(seed);
                let a1 = random::ginibre(2, 2, &mut r);
                let a2 = random::ginibre(2, 2, &mut r);
                let b = random::ginibre(2, 2, &mut r);
                let lhs = tensor(&(&a1 + &a2.scale_real(s)), &b);
                let rhs = &tensor(&a1, &b) + &tensor(&a2, &b).scale_real(s);
                prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
            }
        }
    }
}
