//! One-way protocols with a binary answer from Bob, in two forms:
//!
//! - [`EBitProtocol`]: shared state `ρ`, Alice measures the projective
//!   observable `Â_a` and sends the outcome `A = ±1`, Bob measures `B̂_{b,A}`.
//! - [`HyperbitProtocol`]: Alice sends the hyperbit `A·x_a` where `A` is a
//!   shared fair coin, Bob measures a unit vector chosen by `(b, A)` and
//!   post-processes the outcome (discard with probability `|c|` and output
//!   `sgn c`, otherwise flip with probability `q`).
//!
//! [`ebit_to_hyperbit`] and [`hyperbit_to_ebit`] convert between them; the
//! exact evaluators [`eval_ebit`] and [`eval_hyperbit`] certify each
//! conversion, and [`sample_ebit`] / [`sample_hyperbit`] simulate shots.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperball::{self, HyperbitState, MeasurementVector};
use crate::linalg;
use crate::qsim::{check_total_dim, tensor, trace_of_product, ComplexMatrix, DensityMatrix, MatrixJson, Observable};
use crate::tolerance::{EQUIVALENCE, RANK_CUTOFF};
use crate::tsirelson::{self, QuantumStrategy, VectorStrategy};

/// The two message values in storage order.
pub const MESSAGES: [i8; 2] = [1, -1];

fn slot(message: i8) -> usize {
    if message > 0 {
        0
    } else {
        1
    }
}

#[derive(Clone, Debug)]
pub struct EBitProtocol {
    rho: DensityMatrix,
    dim_a: usize,
    dim_b: usize,
    alice: Vec<Observable>,
    bob: Vec<[Observable; 2]>,
}

impl EBitProtocol {
    /// `bob[b][0]` is used on message `+1`, `bob[b][1]` on message `-1`.
    pub fn new(
        rho: DensityMatrix,
        dim_a: usize,
        dim_b: usize,
        alice: Vec<Observable>,
        bob: Vec<[Observable; 2]>,
    ) -> Result<Self> {
        if alice.is_empty() || bob.is_empty() {
            return Err(Error::Malformed("both parties need at least one input".into()));
        }
        // Dimension checks are shared with the strategy type.
        let flat: Vec<Observable> = bob.iter().flatten().cloned().collect();
        QuantumStrategy::new(rho.clone(), dim_a, dim_b, alice.clone(), flat)?;
        if let Some(k) = alice.iter().position(|o| !o.is_projective(EQUIVALENCE)) {
            return Err(Error::InvalidObservable(format!(
                "Alice's observable for input {k} is not projective (Â² != 𝟙)"
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

    pub fn bob(&self) -> &[[Observable; 2]] {
        &self.bob
    }

    pub fn alice_inputs(&self) -> usize {
        self.alice.len()
    }

    pub fn bob_inputs(&self) -> usize {
        self.bob.len()
    }

    fn check_inputs(&self, a: usize, b: usize) -> Result<()> {
        if a >= self.alice.len() {
            return Err(Error::UnknownInput { side: "Alice", index: a, len: self.alice.len() });
        }
        if b >= self.bob.len() {
            return Err(Error::UnknownInput { side: "Bob", index: b, len: self.bob.len() });
        }
        Ok(())
    }

    /// Expected message `⟨A⟩ = tr(Â_a ⊗ 𝟙 ρ)`.
    pub fn message_bias(&self, a: usize) -> Result<f64> {
        self.check_inputs(a, 0)?;
        let full = tensor(self.alice[a].matrix(), &ComplexMatrix::identity(self.dim_b));
        Ok(trace_of_product(self.rho.matrix(), &full).re)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.alice.len()).all(|a| self.message_bias(a).map(|m| m.abs() <= EQUIVALENCE).unwrap_or(false))
    }

    /// Adds a shared fair coin `C` (one qubit per party in `|00⟩` or `|11⟩`)
    /// and sends `A' = C·A`. Bob multiplies by his copy of `C` before choosing
    /// his observable, so every answer expectation is unchanged while every
    /// message expectation becomes zero.
    pub fn symmetrize(&self) -> Result<Self> {
        let (da, db) = (self.dim_a, self.dim_b);
        let n = 4 * da * db;
        check_total_dim(n)?;
        let index = |a: usize, ca: usize, b: usize, cb: usize| ((a * 2 + ca) * db + b) * 2 + cb;
        let mut m = ComplexMatrix::zeros(n, n).inner().clone();
        for c in 0..2 {
            for a in 0..da {
                for b in 0..db {
                    for a2 in 0..da {
                        for b2 in 0..db {
                            m[(index(a, c, b, c), index(a2, c, b2, c))] = self.rho.matrix().get(a * db + b, a2 * db + b2) * 0.5;
                        }
                    }
                }
            }
        }
        let rho = DensityMatrix::new(ComplexMatrix::from_inner(m))?;
        let z = crate::qsim::pauli_z();
        let coin0 = ComplexMatrix::diag(&[1.0, 0.0]);
        let coin1 = ComplexMatrix::diag(&[0.0, 1.0]);
        let alice = self
            .alice
            .iter()
            .map(|o| Observable::new(tensor(o.matrix(), &z)))
            .collect::<Result<_>>()?;
        let bob = self
            .bob
            .iter()
            .map(|pair| {
                let conditioned = |message: i8| {
                    // Coin +1 keeps the message, coin -1 flips it.
                    let keep = &pair[slot(message)];
                    let flip = &pair[slot(-message)];
                    Observable::new(&tensor(keep.matrix(), &coin0) + &tensor(flip.matrix(), &coin1))
                };
                Ok([conditioned(1)?, conditioned(-1)?])
            })
            .collect::<Result<_>>()?;
        Self::new(rho, 2 * da, 2 * db, alice, bob)
    }

    fn strategy(&self) -> QuantumStrategy {
        let flat = self.bob.iter().flatten().cloned().collect();
        QuantumStrategy::new(self.rho.clone(), self.dim_a, self.dim_b, self.alice.clone(), flat)
            .expect("validated at construction")
    }

    pub fn answer_table(&self) -> Result<Vec<Vec<f64>>> {
        (0..self.alice.len())
            .map(|a| (0..self.bob.len()).map(|b| eval_ebit(self, a, b)).collect())
            .collect()
    }

    pub fn to_json(&self) -> EBitJson {
        EBitJson {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            rho: self.rho.matrix().to_json(),
            alice: self.alice.iter().map(|o| o.matrix().to_json()).collect(),
            bob: self
                .bob
                .iter()
                .map(|[p, m]| MessagePair { plus: p.matrix().to_json(), minus: m.matrix().to_json() })
                .collect(),
        }
    }
}

/// `⟨B⟩ = Σ_A tr(P̂_{a,A} ⊗ B̂_{b,A} ρ)` with `P̂_{a,A} = (𝟙 + A Â_a) / 2`.
pub fn eval_ebit(p: &EBitProtocol, a: usize, b: usize) -> Result<f64> {
    p.check_inputs(a, b)?;
    let mut total = 0.0;
    for message in MESSAGES {
        let effect = p.alice[a].outcome_effect(message);
        let joint = tensor(&effect, p.bob[b][slot(message)].matrix());
        total += trace_of_product(p.rho.matrix(), &joint).re;
    }
    Ok(total)
}

/// Shot-by-shot simulation: Alice's outcome from the Born rule on her marginal,
/// then Bob's outcome from his conditional state `tr_A(P̂ ⊗ 𝟙 ρ) / P(A)`.
/// Returns the mean answer.
pub fn sample_ebit<R: Rng + ?Sized>(p: &EBitProtocol, a: usize, b: usize, shots: usize, rng: &mut R) -> Result<f64> {
    p.check_inputs(a, b)?;
    let marginal_a = p.rho.matrix().partial_trace_second(p.dim_b)?;
    let mut prob = [0.0; 2];
    let mut bob_mean = [0.0; 2];
    for message in MESSAGES {
        let effect = p.alice[a].outcome_effect(message);
        let pa = trace_of_product(&marginal_a, &effect).re.max(0.0);
        prob[slot(message)] = pa;
        if pa > RANK_CUTOFF {
            let lifted = &tensor(&effect, &ComplexMatrix::identity(p.dim_b)) * p.rho.matrix();
            let conditional = lifted.partial_trace_first(p.dim_a)?.scale_real(1.0 / pa).hermitian_part();
            bob_mean[slot(message)] = trace_of_product(&conditional, p.bob[b][slot(message)].matrix()).re;
        }
    }
    let p_plus = prob[0] / (prob[0] + prob[1]);
    let mut total: i64 = 0;
    for _ in 0..shots {
        let s = if rng.random::<f64>() < p_plus { 0 } else { 1 };
        total += i64::from(hyperball::sample_with_expectation(bob_mean[s], rng));
    }
    Ok(total as f64 / shots.max(1) as f64)
}

/// Bob's readout for one `(b, A)`: measure `meas`, then discard with
/// probability `|c|` (emitting `sgn c`) or keep and flip with probability `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct BobRule {
    meas: MeasurementVector,
    c: f64,
    q: f64,
}

impl BobRule {
    pub fn new(meas: MeasurementVector, c: f64, q: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&c) {
            return Err(Error::OutOfRange(format!("discard weight c = {c} not in [-1, 1]")));
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::OutOfRange(format!("flip probability q = {q} not in [0, 1]")));
        }
        Ok(Self { meas, c, q })
    }

    /// Plain measurement without post-processing.
    pub fn direct(meas: MeasurementVector) -> Self {
        Self { meas, c: 0.0, q: 0.0 }
    }

    pub fn meas(&self) -> &MeasurementVector {
        &self.meas
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn flip_prob(&self) -> f64 {
        self.q
    }

    pub fn discard_prob(&self) -> f64 {
        self.c.abs()
    }

    pub fn discard_output(&self) -> i8 {
        if self.c < 0.0 {
            -1
        } else {
            1
        }
    }

    pub fn is_direct(&self) -> bool {
        self.c.abs() <= RANK_CUTOFF && self.q <= RANK_CUTOFF
    }

    /// Coefficient `c' = (1 − |c|)(1 − 2q)` of the raw expectation.
    pub fn gain(&self) -> f64 {
        (1.0 - self.c.abs()) * (1.0 - 2.0 * self.q)
    }

    /// `c + c'·raw`.
    pub fn output_expectation(&self, raw: f64) -> f64 {
        self.c + self.gain() * raw
    }

    /// Expected output given a definite raw outcome, from the discard and flip
    /// probabilities directly.
    pub fn output_given_outcome(&self, raw: i8) -> f64 {
        let kept = 1.0 - self.discard_prob();
        let kept_sign = f64::from(raw) * ((1.0 - self.q) - self.q);
        self.discard_prob() * f64::from(self.discard_output()) + kept * kept_sign
    }

    pub fn apply<R: Rng + ?Sized>(&self, raw: i8, rng: &mut R) -> i8 {
        if rng.random::<f64>() < self.discard_prob() {
            return self.discard_output();
        }
        if rng.random::<f64>() < self.q {
            -raw
        } else {
            raw
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperbitProtocol {
    encode: Vec<HyperbitState>,
    bob: Vec<[BobRule; 2]>,
}

impl HyperbitProtocol {
    /// `bob[b][0]` applies when the shared coin is `+1`, `bob[b][1]` when `-1`.
    pub fn new(encode: Vec<HyperbitState>, bob: Vec<[BobRule; 2]>) -> Result<Self> {
        if encode.is_empty() || bob.is_empty() {
            return Err(Error::Malformed("both parties need at least one input".into()));
        }
        Ok(Self { encode, bob })
    }

    pub fn encode(&self) -> &[HyperbitState] {
        &self.encode
    }

    pub fn bob(&self) -> &[[BobRule; 2]] {
        &self.bob
    }

    pub fn alice_inputs(&self) -> usize {
        self.encode.len()
    }

    pub fn bob_inputs(&self) -> usize {
        self.bob.len()
    }

    pub fn is_direct(&self) -> bool {
        self.bob.iter().flatten().all(BobRule::is_direct)
    }

    fn check_inputs(&self, a: usize, b: usize) -> Result<()> {
        if a >= self.encode.len() {
            return Err(Error::UnknownInput { side: "Alice", index: a, len: self.encode.len() });
        }
        if b >= self.bob.len() {
            return Err(Error::UnknownInput { side: "Bob", index: b, len: self.bob.len() });
        }
        Ok(())
    }

    pub fn answer_table(&self) -> Result<Vec<Vec<f64>>> {
        (0..self.encode.len())
            .map(|a| (0..self.bob.len()).map(|b| eval_hyperbit(self, a, b)).collect())
            .collect()
    }

    pub fn to_json(&self) -> HyperbitJson {
        let rule = |r: &BobRule| RuleJson { meas: r.meas.coords().to_vec(), c: r.c, q: r.q };
        HyperbitJson {
            encode: self.encode.iter().map(|s| s.coords().to_vec()).collect(),
            bob: self
                .bob
                .iter()
                .map(|[p, m]| MessagePair { plus: rule(p), minus: rule(m) })
                .collect(),
        }
    }
}

/// Average over the coin `A` of `c_{b,A} + c'_{b,A}·⟨A·x_a, w_{b,A}⟩`.
pub fn eval_hyperbit(h: &HyperbitProtocol, a: usize, b: usize) -> Result<f64> {
    h.check_inputs(a, b)?;
    let x = &h.encode[a];
    Ok(MESSAGES
        .iter()
        .map(|&coin| {
            let rule = &h.bob[b][slot(coin)];
            let raw = f64::from(coin) * hyperball::expect(x, &rule.meas);
            0.5 * rule.output_expectation(raw)
        })
        .sum())
}

pub fn sample_hyperbit<R: Rng + ?Sized>(
    h: &HyperbitProtocol,
    a: usize,
    b: usize,
    shots: usize,
    rng: &mut R,
) -> Result<f64> {
    h.check_inputs(a, b)?;
    let states = [h.encode[a].clone(), h.encode[a].negated()];
    let mut total: i64 = 0;
    for _ in 0..shots {
        let s = if rng.random::<bool>() { 0 } else { 1 };
        let rule = &h.bob[b][s];
        let raw = hyperball::sample(&states[s], &rule.meas, rng);
        total += i64::from(rule.apply(raw, rng));
    }
    Ok(total as f64 / shots.max(1) as f64)
}

/// `y_{b,A} = c·y_𝟙 + c'·ŷ_⊥` with `ŷ_⊥` the normalised component orthogonal
/// to the identity vector.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineReadout {
    pub c: f64,
    pub gain: f64,
    pub direction: Vec<f64>,
}

impl AffineReadout {
    /// `|c| + |c'|`; post-processing is realisable iff this is at most 1.
    pub fn weight(&self) -> f64 {
        self.c.abs() + self.gain.abs()
    }
}

/// Vector form of a symmetrised e-bit protocol, before any feasibility check.
#[derive(Clone, Debug)]
pub struct HyperbitDecomposition {
    pub symmetrized: bool,
    pub identity: Vec<f64>,
    pub encode: Vec<Vec<f64>>,
    pub readouts: Vec<[AffineReadout; 2]>,
}

impl HyperbitDecomposition {
    /// Exact affine value `½ Σ_A [c + c'·⟨A x_a, ŷ_⊥⟩]`, defined whether or not
    /// the post-processing is realisable.
    pub fn target(&self, a: usize, b: usize) -> f64 {
        MESSAGES
            .iter()
            .map(|&coin| {
                let r = &self.readouts[b][slot(coin)];
                0.5 * (r.c + r.gain * f64::from(coin) * linalg::dot(&self.encode[a], &r.direction))
            })
            .sum()
    }

    pub fn max_weight(&self) -> f64 {
        self.readouts.iter().flatten().map(AffineReadout::weight).fold(0.0, f64::max)
    }

    /// `(b, A, |c| + |c'|)` for every readout whose weight exceeds `1 + EQUIVALENCE`.
    pub fn infeasible(&self) -> Vec<(usize, i8, f64)> {
        let mut out = Vec::new();
        for (b, pair) in self.readouts.iter().enumerate() {
            for (r, &message) in pair.iter().zip(&MESSAGES) {
                if r.weight() > 1.0 + EQUIVALENCE {
                    out.push((b, message, r.weight()));
                }
            }
        }
        out
    }

    pub fn is_feasible(&self) -> bool {
        self.infeasible().is_empty()
    }

    /// Turns each readout into discard/flip post-processing with
    /// `q = ½(1 − c'/(1 − |c|))`; `|c| = 1` means Bob never measures (`q = ½`).
    pub fn to_protocol(&self) -> Result<HyperbitProtocol> {
        if let Some(&(input, message, weight)) = self.infeasible().first() {
            return Err(Error::InfeasiblePostprocessing { input, message, weight });
        }
        let encode = self
            .encode
            .iter()
            .map(|x| HyperbitState::new(x.clone()))
            .collect::<Result<Vec<_>>>()?;
        let rule = |r: &AffineReadout| -> Result<BobRule> {
            let c = r.c.clamp(-1.0, 1.0);
            let slack = 1.0 - c.abs();
            let q = if slack <= RANK_CUTOFF {
                0.5
            } else {
                (0.5 * (1.0 - r.gain / slack)).clamp(0.0, 1.0)
            };
            BobRule::new(MeasurementVector::new(r.direction.clone())?, c, q)
        };
        let bob = self
            .readouts
            .iter()
            .map(|[p, m]| Ok([rule(p)?, rule(m)?]))
            .collect::<Result<_>>()?;
        HyperbitProtocol::new(encode, bob)
    }
}

/// Runs the vector construction: symmetrise if any message is biased, extract
/// Tsirelson vectors, and split each of Bob's vectors along the identity vector.
pub fn decompose(p: &EBitProtocol) -> Result<HyperbitDecomposition> {
    let symmetrized = !p.is_symmetric();
    let sym = if symmetrized { p.symmetrize()? } else { p.clone() };
    let vs = tsirelson::extract(&sym.strategy()).reduce_to_span();
    let identity = vs.xs()[0].clone();
    let id_sq = linalg::dot(&identity, &identity);
    let split = |y: &[f64]| {
        let c = linalg::dot(y, &identity) / id_sq;
        let perp = linalg::axpy(y, -c, &identity);
        let n = linalg::norm(&perp);
        if n > RANK_CUTOFF {
            AffineReadout { c, gain: n, direction: linalg::scaled(&perp, 1.0 / n) }
        } else {
            AffineReadout { c, gain: 0.0, direction: linalg::orthogonal_unit(&identity) }
        }
    };
    let ys = &vs.ys()[1..];
    let readouts = ys.chunks(2).map(|pair| [split(&pair[0]), split(&pair[1])]).collect();
    Ok(HyperbitDecomposition {
        symmetrized,
        encode: vs.xs()[1..].to_vec(),
        identity,
        readouts,
    })
}

/// One hyperbit simulating entanglement plus one bit. Fails with
/// [`Error::InfeasiblePostprocessing`] when some `|c| + |c'|` exceeds 1.
pub fn ebit_to_hyperbit(p: &EBitProtocol) -> Result<HyperbitProtocol> {
    decompose(p)?.to_protocol()
}

/// Entanglement plus one bit simulating a directly measured hyperbit.
///
/// Averaging over the coin gives `⟨x_a, m̄_b⟩` with `m̄_b = ½(w_{b,+} − w_{b,−})`.
/// Encodings are lifted to unit length with one extra coordinate so that
/// Alice's gamma-matrix observables are projective; Bob measures the
/// transposed embedding of `m̄_b` and answers `A·B`.
pub fn hyperbit_to_ebit(h: &HyperbitProtocol) -> Result<EBitProtocol> {
    if !h.is_direct() {
        return Err(Error::UnsupportedForm(
            "post-processing must be trivial (c = 0, q = 0); compose it classically first".into(),
        ));
    }
    let xs: Vec<Vec<f64>> = h.encode.iter().map(|s| s.coords().to_vec()).collect();
    let ys: Vec<Vec<f64>> = h
        .bob
        .iter()
        .map(|[p, m]| linalg::scaled(&linalg::axpy(p.meas.coords(), -1.0, m.meas.coords()), 0.5))
        .collect();
    let reduced = VectorStrategy::new(xs, ys)?.reduce_to_span();
    let needs_lift = reduced.xs().iter().any(|x| linalg::norm(x) < 1.0 - RANK_CUTOFF);
    let (xs, ys) = if needs_lift {
        let lift = |x: &Vec<f64>| {
            let mut v = x.clone();
            v.push((1.0 - linalg::dot(x, x)).max(0.0).sqrt());
            v
        };
        let pad = |y: &Vec<f64>| linalg::padded(y, y.len() + 1);
        (
            reduced.xs().iter().map(lift).collect(),
            reduced.ys().iter().map(pad).collect(),
        )
    } else {
        (reduced.xs().to_vec(), reduced.ys().to_vec())
    };
    let qs = tsirelson::embed(&VectorStrategy::new(xs, ys)?)?;
    let bob = qs.bob().iter().map(|o| [o.clone(), o.negated()]).collect();
    EBitProtocol::new(qs.rho().clone(), qs.dim_a(), qs.dim_b(), qs.alice().to_vec(), bob)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MessagePair<T> {
    pub plus: T,
    pub minus: T,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EBitJson {
    pub dim_a: usize,
    pub dim_b: usize,
    pub rho: MatrixJson,
    pub alice: Vec<MatrixJson>,
    pub bob: Vec<MessagePair<MatrixJson>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RuleJson {
    pub meas: Vec<f64>,
    pub c: f64,
    pub q: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HyperbitJson {
    pub encode: Vec<Vec<f64>>,
    pub bob: Vec<MessagePair<RuleJson>>,
}

/// Protocol file, discriminated by `"kind": "ebit" | "hyperbit"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProtocolFile {
    Ebit(EBitJson),
    Hyperbit(HyperbitJson),
}

#[derive(Clone, Debug)]
pub enum Protocol {
    Ebit(EBitProtocol),
    Hyperbit(HyperbitProtocol),
}

impl TryFrom<&EBitJson> for EBitProtocol {
    type Error = Error;
    fn try_from(j: &EBitJson) -> Result<Self> {
        let rho = DensityMatrix::new(ComplexMatrix::try_from(&j.rho)?)?;
        let obs = |m: &MatrixJson| ComplexMatrix::try_from(m).and_then(Observable::new);
        let alice = j.alice.iter().map(obs).collect::<Result<_>>()?;
        let bob = j
            .bob
            .iter()
            .map(|pair| Ok([obs(&pair.plus)?, obs(&pair.minus)?]))
            .collect::<Result<_>>()?;
        EBitProtocol::new(rho, j.dim_a, j.dim_b, alice, bob)
    }
}

impl TryFrom<&HyperbitJson> for HyperbitProtocol {
    type Error = Error;
    fn try_from(j: &HyperbitJson) -> Result<Self> {
        let encode = j
            .encode
            .iter()
            .map(|c| HyperbitState::new(c.clone()))
            .collect::<Result<_>>()?;
        let rule = |r: &RuleJson| BobRule::new(MeasurementVector::new(r.meas.clone())?, r.c, r.q);
        let bob = j
            .bob
            .iter()
            .map(|pair| Ok([rule(&pair.plus)?, rule(&pair.minus)?]))
            .collect::<Result<_>>()?;
        HyperbitProtocol::new(encode, bob)
    }
}

impl TryFrom<&ProtocolFile> for Protocol {
    type Error = Error;
    fn try_from(f: &ProtocolFile) -> Result<Self> {
        Ok(match f {
            ProtocolFile::Ebit(j) => Protocol::Ebit(j.try_into()?),
            ProtocolFile::Hyperbit(j) => Protocol::Hyperbit(j.try_into()?),
        })
    }
}

impl Protocol {
    pub fn to_file(&self) -> ProtocolFile {
        match self {
            Protocol::Ebit(p) => ProtocolFile::Ebit(p.to_json()),
            Protocol::Hyperbit(h) => ProtocolFile::Hyperbit(h.to_json()),
        }
    }
}
