//! Seeded random instance generators for tests and sweeps.
//!
//! Every generator takes the RNG explicitly; the CLI uses
//! [`rand_chacha::ChaCha8Rng`] so that a seed fixes every report byte for byte.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::hyperball::{HyperbitState, MeasurementVector};
use crate::protocols::{BobRule, EBitProtocol, HyperbitProtocol};
use crate::qsim::{ComplexMatrix, DensityMatrix, Observable, PureState, C64};

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let entries: Vec<C64> = (0..rows * cols)
        .map(|_| C64::new(normal(rng), normal(rng)))
        .collect();
    ComplexMatrix::from_row_major(rows, cols, &entries).expect("shape is consistent")
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, dim, rng).inner().clone();
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases: Vec<C64> = (0..dim)
        .map(|k| {
            let d = r[(k, k)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                C64::new(1.0, 0.0)
            }
        })
        .collect();
    ComplexMatrix::from_inner(DMatrix::from_fn(dim, dim, |i, j| q[(i, j)] * phases[j]))
}

/// Full-rank random mixed state `G G† / tr(G G†)`.
pub fn density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dim, dim, rng);
    let m = &g * &g.dagger();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part()).expect("Ginibre state is valid")
}

pub fn pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    let v: Vec<C64> = (0..dim).map(|_| C64::new(normal(rng), normal(rng))).collect();
    let n: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    PureState::new(v.into_iter().map(|a| a / n).collect()).expect("normalised")
}

fn with_spectrum<R: Rng + ?Sized>(spectrum: &[f64], rng: &mut R) -> Observable {
    let u = unitary(spectrum.len(), rng);
    let m = &(&u * &ComplexMatrix::diag(spectrum)) * &u.dagger();
    Observable::new(m.hermitian_part()).expect("spectrum lies in [-1, 1]")
}

/// Random bounded observable with eigenvalues uniform in `[-1, 1]`.
pub fn observable<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Observable {
    let spectrum: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
    with_spectrum(&spectrum, rng)
}

/// Random `±1`-valued observable with both outcomes present (dim ≥ 2).
pub fn projective_observable<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Observable {
    let plus = if dim >= 2 { rng.random_range(1..dim) } else { 1 };
    let spectrum: Vec<f64> = (0..dim).map(|k| if k < plus { 1.0 } else { -1.0 }).collect();
    with_spectrum(&spectrum, rng)
}

pub fn unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| normal(rng)).collect();
        let n = crate::linalg::norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Uniform point in the closed unit ball.
pub fn ball_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    let radius = rng.random::<f64>().powf(1.0 / dim as f64);
    unit_vector(dim, rng).into_iter().map(|x| x * radius).collect()
}

/// Flat-Dirichlet probability vector.
pub fn probability_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..len).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Random entanglement-plus-one-bit protocol: full-rank state on
/// `dim_a ⊗ dim_b`, projective Alice observables, bounded Bob observables.
pub fn ebit_protocol<R: Rng + ?Sized>(
    dim_a: usize,
    dim_b: usize,
    alice_inputs: usize,
    bob_inputs: usize,
    rng: &mut R,
) -> EBitProtocol {
    let rho = density_matrix(dim_a * dim_b, rng);
    let alice = (0..alice_inputs).map(|_| projective_observable(dim_a, rng)).collect();
    let bob = (0..bob_inputs)
        .map(|_| [observable(dim_b, rng), observable(dim_b, rng)])
        .collect();
    EBitProtocol::new(rho, dim_a, dim_b, alice, bob).expect("random protocol is valid")
}

/// Random hyperbit protocol with direct measurement (`c = 0`, `q = 0`).
pub fn direct_hyperbit_protocol<R: Rng + ?Sized>(
    dim: usize,
    alice_inputs: usize,
    bob_inputs: usize,
    rng: &mut R,
) -> HyperbitProtocol {
    let encode = (0..alice_inputs)
        .map(|_| HyperbitState::new(ball_vector(dim, rng)).expect("inside the ball"))
        .collect();
    let rule = |rng: &mut R| BobRule::direct(MeasurementVector::new(unit_vector(dim, rng)).expect("unit"));
    let bob = (0..bob_inputs).map(|_| [rule(rng), rule(rng)]).collect();
    HyperbitProtocol::new(encode, bob).expect("random protocol is valid")
}
