//! Converters between quantum strategies and real vector strategies that
//! reproduce the same correlation table `tr(Â_k ⊗ B̂_m ρ) = ⟨x_k, y_m⟩`.
//!
//! [`embed`] goes from vectors to a maximally entangled state with gamma-matrix
//! observables; [`extract`] goes from a state and observables to vectors
//! obtained by acting on a purification and splitting complex amplitudes into
//! real pairs `(…, re_j, im_j, …)`.

use serde::{Deserialize, Serialize};

use crate::clifford;
use crate::error::{Error, Result};
use crate::linalg;
use crate::qsim::{
    apply_local, expectation, maximally_entangled, purify, ComplexMatrix, DensityMatrix, MatrixJson, Observable, C64,
};
use crate::tolerance::{RANK_CUTOFF, STRUCTURAL};

/// Shared state plus local observable families for Alice and Bob.
///
/// Alice acts on the first tensor factor (`dim_a`) and Bob on the second
/// (`dim_b`), so their operators commute by construction.
#[derive(Clone, Debug)]
pub struct QuantumStrategy {
    rho: DensityMatrix,
    dim_a: usize,
    dim_b: usize,
    alice: Vec<Observable>,
    bob: Vec<Observable>,
}

impl QuantumStrategy {
    pub fn new(
        rho: DensityMatrix,
        dim_a: usize,
        dim_b: usize,
        alice: Vec<Observable>,
        bob: Vec<Observable>,
    ) -> Result<Self> {
        if dim_a * dim_b != rho.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state of dimension {} is not {dim_a} x {dim_b}",
                rho.dim()
            )));
        }
        if let Some(o) = alice.iter().find(|o| o.dim() != dim_a) {
            return Err(Error::DimensionMismatch(format!(
                "Alice observable of dimension {} on a factor of dimension {dim_a}",
                o.dim()
            )));
        }
        if let Some(o) = bob.iter().find(|o| o.dim() != dim_b) {
            return Err(Error::DimensionMismatch(format!(
                "Bob observable of dimension {} on a factor of dimension {dim_b}",
                o.dim()
            )));
        }
        Ok(Self { rho, dim_a, dim_b, alice, bob })
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn alice(&self) -> &[Observable] {
        &self.alice
    }

    pub fn bob(&self) -> &[Observable] {
        &self.bob
    }

    /// `tr(Â_k ⊗ B̂_m ρ)` evaluated on the full density matrix.
    pub fn correlation(&self, k: usize, m: usize) -> Result<f64> {
        let prod = Observable::local_product(&self.alice[k], &self.bob[m])?;
        expectation(&self.rho, &prod)
    }

    pub fn correlation_table(&self) -> Result<Vec<Vec<f64>>> {
        (0..self.alice.len())
            .map(|k| (0..self.bob.len()).map(|m| self.correlation(k, m)).collect())
            .collect()
    }

    pub fn to_json(&self) -> QuantumStrategyJson {
        QuantumStrategyJson {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            rho: self.rho.matrix().to_json(),
            alice: self.alice.iter().map(|o| o.matrix().to_json()).collect(),
            bob: self.bob.iter().map(|o| o.matrix().to_json()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuantumStrategyJson {
    pub dim_a: usize,
    pub dim_b: usize,
    pub rho: MatrixJson,
    pub alice: Vec<MatrixJson>,
    pub bob: Vec<MatrixJson>,
}

impl TryFrom<&QuantumStrategyJson> for QuantumStrategy {
    type Error = Error;
    fn try_from(j: &QuantumStrategyJson) -> Result<Self> {
        let rho = DensityMatrix::new(ComplexMatrix::try_from(&j.rho)?)?;
        let obs = |m: &MatrixJson| ComplexMatrix::try_from(m).and_then(Observable::new);
        let alice = j.alice.iter().map(obs).collect::<Result<_>>()?;
        let bob = j.bob.iter().map(obs).collect::<Result<_>>()?;
        QuantumStrategy::new(rho, j.dim_a, j.dim_b, alice, bob)
    }
}

/// Real vectors in the unit ball, padded to a common dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorStrategyJson", into = "VectorStrategyJson")]
pub struct VectorStrategy {
    xs: Vec<Vec<f64>>,
    ys: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VectorStrategyJson {
    pub xs: Vec<Vec<f64>>,
    pub ys: Vec<Vec<f64>>,
}

impl VectorStrategy {
    pub fn new(xs: Vec<Vec<f64>>, ys: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_tolerance(xs, ys, STRUCTURAL)
    }

    fn with_tolerance(xs: Vec<Vec<f64>>, ys: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        for v in xs.iter().chain(&ys) {
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Malformed("non-finite vector entry".into()));
            }
            let norm = linalg::norm(v);
            if norm > 1.0 + tol {
                return Err(Error::NormViolation { norm, expected: "|v| <= 1" });
            }
        }
        let dim = xs.iter().chain(&ys).map(Vec::len).max().unwrap_or(0).max(1);
        let pad = |vs: Vec<Vec<f64>>| vs.iter().map(|v| linalg::padded(v, dim)).collect();
        Ok(Self { xs: pad(xs), ys: pad(ys) })
    }

    pub fn xs(&self) -> &[Vec<f64>] {
        &self.xs
    }

    pub fn ys(&self) -> &[Vec<f64>] {
        &self.ys
    }

    pub fn dim(&self) -> usize {
        self.xs.first().or(self.ys.first()).map_or(1, Vec::len)
    }

    pub fn gram_table(&self) -> Vec<Vec<f64>> {
        self.xs
            .iter()
            .map(|x| self.ys.iter().map(|y| linalg::dot(x, y)).collect())
            .collect()
    }

    /// Re-expresses every vector in an orthonormal basis of their joint span.
    /// Inner products are unchanged and the dimension drops to the rank.
    pub fn reduce_to_span(&self) -> Self {
        let all: Vec<Vec<f64>> = self.xs.iter().chain(&self.ys).cloned().collect();
        let basis = linalg::orthonormal_span(&all, RANK_CUTOFF);
        if basis.is_empty() {
            let zero = |vs: &[Vec<f64>]| vs.iter().map(|_| vec![0.0]).collect();
            return Self { xs: zero(&self.xs), ys: zero(&self.ys) };
        }
        let map = |vs: &[Vec<f64>]| vs.iter().map(|v| linalg::coordinates(v, &basis)).collect();
        Self { xs: map(&self.xs), ys: map(&self.ys) }
    }
}

impl TryFrom<VectorStrategyJson> for VectorStrategy {
    type Error = Error;
    fn try_from(j: VectorStrategyJson) -> Result<Self> {
        Self::new(j.xs, j.ys)
    }
}

impl From<VectorStrategy> for VectorStrategyJson {
    fn from(v: VectorStrategy) -> Self {
        VectorStrategyJson { xs: v.xs, ys: v.ys }
    }
}

/// Vectors → quantum strategy on a maximally entangled state of dimension
/// `2^⌈d/2⌉`, with `Â_k = x_k·γ` and `B̂_m = (y_m·γ)ᵀ`.
pub fn embed(vs: &VectorStrategy) -> Result<QuantumStrategy> {
    let family = clifford::generate(vs.dim())?;
    let dim = family.dim();
    let rho = DensityMatrix::from_pure(&maximally_entangled(dim)?);
    let alice = vs.xs.iter().map(|x| family.embed_vector(x)).collect::<Result<_>>()?;
    let bob = vs
        .ys
        .iter()
        .map(|y| family.embed_vector(y).map(|o| o.transposed()))
        .collect::<Result<_>>()?;
    QuantumStrategy::new(rho, dim, dim, alice, bob)
}

fn realify(amps: &[C64]) -> Vec<f64> {
    amps.iter().flat_map(|a| [a.re, a.im]).collect()
}

/// Quantum strategy → vectors. Index 0 of both families holds the identity
/// vector `x_𝟙 = y_𝟙 = |ψ⟩`; index `k + 1` holds Alice's `k`-th (resp. Bob's
/// `m`-th) operator applied to the purification `|ψ⟩` of `ρ`.
pub fn extract(qs: &QuantumStrategy) -> VectorStrategy {
    let p = purify(&qs.rho);
    let psi = p.state.amplitudes();
    let anc = p.ancilla_dim;
    let identity = realify(psi);
    let mut xs = vec![identity.clone()];
    xs.extend(
        qs.alice
            .iter()
            .map(|a| realify(&apply_local(a.matrix(), psi, 1, qs.dim_b * anc))),
    );
    let mut ys = vec![identity];
    ys.extend(
        qs.bob
            .iter()
            .map(|b| realify(&apply_local(b.matrix(), psi, qs.dim_a, anc))),
    );
    VectorStrategy::with_tolerance(xs, ys, crate::tolerance::EQUIVALENCE)
        .expect("|O ψ| <= 1 for bounded O")
}
