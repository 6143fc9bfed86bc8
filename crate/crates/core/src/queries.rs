//! Pairwise unbiased queries on a hyperbit message and the bias identity
//! `Σᵢ Eᵢ² = 2ⁿ Σⱼ pⱼ² |hⱼ|²`.
//!
//! Alice holds input `j` with prior `pⱼ` and sends hyperbit `hⱼ`. Query `i`
//! has correct answer `f(i, j) = ±1`; Bob's best measurement for it is along
//! the signal vector `xᵢ = Σⱼ f(i, j) pⱼ hⱼ`, giving bias `Eᵢ = |xᵢ|`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperball::{HyperbitState, MeasurementVector};
use crate::linalg;
use crate::tolerance::{MAX_QUERY_EXPONENT, PATHOLOGY, PROBABILITY_SUM};

/// `2ⁿ × 2ⁿ` matrix of `±1` answers with orthogonal rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QueryMatrixJson", into = "QueryMatrixJson")]
pub struct QueryMatrix {
    n: usize,
    rows: Vec<Vec<i8>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QueryMatrixJson {
    pub n: usize,
    pub rows: Vec<Vec<i8>>,
}

fn row_dot(a: &[i8], b: &[i8]) -> i64 {
    a.iter().zip(b).map(|(&x, &y)| i64::from(x) * i64::from(y)).sum()
}

impl QueryMatrix {
    pub fn new(n: usize, rows: Vec<Vec<i8>>) -> Result<Self> {
        if n > MAX_QUERY_EXPONENT {
            return Err(Error::ResourceLimit(format!(
                "query exponent {n} exceeds {MAX_QUERY_EXPONENT}"
            )));
        }
        let size = 1usize << n;
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidQueryMatrix(format!("expected a {size}x{size} matrix")));
        }
        if rows.iter().flatten().any(|&f| f != 1 && f != -1) {
            return Err(Error::InvalidQueryMatrix("entries must be +1 or -1".into()));
        }
        for i in 0..size {
            for k in (i + 1)..size {
                if row_dot(&rows[i], &rows[k]) != 0 {
                    return Err(Error::InvalidQueryMatrix(format!(
                        "rows {i} and {k} are not orthogonal"
                    )));
                }
            }
        }
        Ok(Self { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.rows[i][j]
    }

    /// Checks `Σᵢ f(i,j) f(i,j') = 2ⁿ δ_{jj'}`.
    pub fn columns_orthogonal(&self) -> bool {
        let size = self.size() as i64;
        (0..self.size()).all(|j| {
            (0..self.size()).all(|k| {
                let s: i64 = self.rows.iter().map(|r| i64::from(r[j]) * i64::from(r[k])).sum();
                s == if j == k { size } else { 0 }
            })
        })
    }

    /// A row whose answer is the same for every input carries no information.
    pub fn constant_row(&self) -> Option<usize> {
        self.rows.iter().position(|r| r.iter().all(|&f| f == r[0]))
    }
}

impl TryFrom<QueryMatrixJson> for QueryMatrix {
    type Error = Error;
    fn try_from(j: QueryMatrixJson) -> Result<Self> {
        Self::new(j.n, j.rows)
    }
}

impl From<QueryMatrix> for QueryMatrixJson {
    fn from(q: QueryMatrix) -> Self {
        QueryMatrixJson { n: q.n, rows: q.rows }
    }
}

/// Sylvester–Hadamard matrix `H_{2ⁿ}`; row 0 is all ones.
pub fn hadamard(n: usize) -> Result<QueryMatrix> {
    if n > MAX_QUERY_EXPONENT {
        return Err(Error::ResourceLimit(format!(
            "query exponent {n} exceeds {MAX_QUERY_EXPONENT}"
        )));
    }
    let mut rows = vec![vec![1i8]];
    for _ in 0..n {
        let top = rows.iter().map(|r| [r.as_slice(), r.as_slice()].concat());
        let bottom = rows
            .iter()
            .map(|r| r.iter().copied().chain(r.iter().map(|&f| -f)).collect::<Vec<_>>());
        rows = top.chain(bottom).collect();
    }
    Ok(QueryMatrix { n, rows })
}

/// Priors and hyperbits for Alice's inputs, hyperbits padded to a common dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EncodingJson", into = "EncodingJson")]
pub struct EncodingScheme {
    priors: Vec<f64>,
    hyperbits: Vec<HyperbitState>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EncodingJson {
    pub priors: Vec<f64>,
    pub hyperbits: Vec<Vec<f64>>,
}

impl EncodingScheme {
    pub fn new(priors: Vec<f64>, hyperbits: Vec<HyperbitState>) -> Result<Self> {
        if priors.is_empty() || priors.len() != hyperbits.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} priors for {} hyperbits",
                priors.len(),
                hyperbits.len()
            )));
        }
        if priors.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidDistribution("priors must be nonnegative".into()));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_SUM {
            return Err(Error::InvalidDistribution(format!("priors sum to {total}")));
        }
        let dim = hyperbits.iter().map(HyperbitState::dim).max().unwrap_or(1);
        let hyperbits = hyperbits.iter().map(|h| h.padded(dim)).collect();
        Ok(Self { priors, hyperbits })
    }

    pub fn uniform(hyperbits: Vec<HyperbitState>) -> Result<Self> {
        let n = hyperbits.len().max(1);
        Self::new(vec![1.0 / n as f64; hyperbits.len()], hyperbits)
    }

    /// Adds zero-probability inputs (with zero hyperbits) up to the next power of two.
    pub fn padded_to_power_of_two(&self) -> Self {
        let target = self.priors.len().next_power_of_two();
        let mut out = self.clone();
        out.priors.resize(target, 0.0);
        out.hyperbits.resize(target, HyperbitState::zero(self.dim()));
        out
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn hyperbits(&self) -> &[HyperbitState] {
        &self.hyperbits
    }

    pub fn len(&self) -> usize {
        self.priors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.priors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.hyperbits[0].dim()
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.len() as f64;
        self.priors.iter().all(|&p| (p - u).abs() <= PROBABILITY_SUM)
    }

    /// `2ⁿ Σⱼ pⱼ² |hⱼ|²`, the right-hand side of the identity.
    pub fn weighted_norm_sum(&self) -> f64 {
        let size = self.len() as f64;
        size * self
            .priors
            .iter()
            .zip(&self.hyperbits)
            .map(|(p, h)| p * p * h.norm_sqr())
            .sum::<f64>()
    }

    /// Average hyperbit `Σⱼ pⱼ hⱼ`.
    pub fn average(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.dim()];
        for (p, h) in self.priors.iter().zip(&self.hyperbits) {
            acc = linalg::axpy(&acc, *p, h.coords());
        }
        acc
    }
}

impl TryFrom<EncodingJson> for EncodingScheme {
    type Error = Error;
    fn try_from(j: EncodingJson) -> Result<Self> {
        let hyperbits = j.hyperbits.into_iter().map(HyperbitState::new).collect::<Result<_>>()?;
        Self::new(j.priors, hyperbits)
    }
}

impl From<EncodingScheme> for EncodingJson {
    fn from(e: EncodingScheme) -> Self {
        EncodingJson {
            priors: e.priors,
            hyperbits: e.hyperbits.iter().map(|h| h.coords().to_vec()).collect(),
        }
    }
}

fn check_compatible(f: &QueryMatrix, enc: &EncodingScheme) -> Result<()> {
    if enc.len() != f.size() {
        return Err(Error::DimensionMismatch(format!(
            "encoding has {} inputs but the query matrix has {} columns",
            enc.len(),
            f.size()
        )));
    }
    Ok(())
}

/// Signal vector `xᵢ = Σⱼ f(i,j) pⱼ hⱼ` for every query.
pub fn signal_vectors(f: &QueryMatrix, enc: &EncodingScheme) -> Result<Vec<Vec<f64>>> {
    check_compatible(f, enc)?;
    Ok(f.rows()
        .iter()
        .map(|row| {
            let mut acc = vec![0.0; enc.dim()];
            for ((&fij, p), h) in row.iter().zip(enc.priors()).zip(enc.hyperbits()) {
                acc = linalg::axpy(&acc, f64::from(fij) * p, h.coords());
            }
            acc
        })
        .collect())
}

/// Biases under Bob's optimal measurements, with both sides of the identity.
#[derive(Clone, Debug, Serialize)]
pub struct BiasReport {
    pub signals: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
    pub average: Vec<f64>,
    /// `Σᵢ Eᵢ²`.
    pub lhs: f64,
    /// `2ⁿ Σⱼ pⱼ² |hⱼ|²`.
    pub rhs: f64,
    /// Index of a constant query, if `F` has one.
    pub constant_row: Option<usize>,
    /// `Σ_{i ≠ constant} Eᵢ² + |x_avg|²`, when a constant all-ones row exists.
    pub split_lhs: Option<f64>,
    /// Non-constant queries whose answer is almost fixed by the prior.
    pub pathological: Vec<usize>,
}

impl BiasReport {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    /// Bob's optimal measurement for each query: along `xᵢ`, or `e₀` when `xᵢ = 0`.
    pub fn optimal_measurements(&self) -> Vec<MeasurementVector> {
        self.signals
            .iter()
            .map(|x| MeasurementVector::along(x).unwrap_or_else(|_| MeasurementVector::basis(x.len(), 0)))
            .collect()
    }
}

pub fn biases(f: &QueryMatrix, enc: &EncodingScheme) -> Result<BiasReport> {
    let signals = signal_vectors(f, enc)?;
    let biases: Vec<f64> = signals.iter().map(|x| linalg::norm(x)).collect();
    let lhs = signals.iter().map(|x| linalg::dot(x, x)).sum();
    let rhs = enc.weighted_norm_sum();
    let average = enc.average();
    let constant_row = f.constant_row();
    let split_lhs = constant_row.filter(|&i| f.entry(i, 0) == 1).map(|c| {
        let rest: f64 = signals
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != c)
            .map(|(_, x)| linalg::dot(x, x))
            .sum();
        rest + linalg::dot(&average, &average)
    });
    let pathological = (0..f.size())
        .filter(|&i| Some(i) != constant_row)
        .filter(|&i| {
            let p_plus: f64 = f.rows()[i]
                .iter()
                .zip(enc.priors())
                .filter(|(&fij, _)| fij == 1)
                .map(|(_, p)| p)
                .sum();
            p_plus.max(1.0 - p_plus) > 1.0 - PATHOLOGY
        })
        .collect();
    Ok(BiasReport { signals, biases, average, lhs, rhs, constant_row, split_lhs, pathological })
}

/// `|Σᵢ Eᵢ² − 2ⁿ Σⱼ pⱼ² |hⱼ|²|` for the optimal Bob.
pub fn check_identity(f: &QueryMatrix, enc: &EncodingScheme) -> Result<f64> {
    Ok(biases(f, enc)?.residual())
}

/// Slack `2ⁿ Σⱼ pⱼ² |hⱼ|² − Σᵢ ⟨wᵢ, xᵢ⟩²` for an arbitrary measurement bank.
pub fn check_suboptimal(f: &QueryMatrix, enc: &EncodingScheme, meas: &[MeasurementVector]) -> Result<f64> {
    let signals = signal_vectors(f, enc)?;
    if meas.len() != signals.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} measurements for {} queries",
            meas.len(),
            signals.len()
        )));
    }
    let achieved: f64 = signals
        .iter()
        .zip(meas)
        .map(|(x, w)| linalg::dot(x, w.coords()).powi(2))
        .sum();
    Ok(enc.weighted_norm_sum() - achieved)
}

/// `(3/2)(1 + 1/√3)`, the single-bit/qubit bound on `P(a₀) + P(a₁) + P(a₀⊕a₁)`.
pub fn koenig_benchmark() -> f64 {
    1.5 * (1.0 + 1.0 / 3f64.sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct KoenigReport {
    /// Biases for `a₀`, `a₁`, `a₀⊕a₁`.
    pub biases: [f64; 3],
    pub success: [f64; 3],
    pub p_sum: f64,
    pub e_sq_sum: f64,
    pub benchmark: f64,
}

impl KoenigReport {
    pub fn within_identity(&self, tol: f64) -> bool {
        self.e_sq_sum <= 1.0 + tol
    }

    pub fn exceeds_benchmark(&self, tol: f64) -> bool {
        self.p_sum > self.benchmark + tol
    }
}

/// Compares the success-probability sum with the squared-bias sum for a two-bit
/// input `j = a₀ + 2a₁` under uniform priors. The queries `a₀`, `a₁`, `a₀⊕a₁`
/// are rows 1, 2, 3 of `H₄`.
pub fn koenig_compare(enc: &EncodingScheme) -> Result<KoenigReport> {
    if enc.len() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "two-bit comparison needs 4 inputs, got {}",
            enc.len()
        )));
    }
    if !enc.is_uniform() {
        return Err(Error::InvalidDistribution("two-bit comparison needs uniform priors".into()));
    }
    let report = biases(&hadamard(2)?, enc)?;
    let biases = [report.biases[1], report.biases[2], report.biases[3]];
    let success = biases.map(|e| 0.5 * (1.0 + e));
    Ok(KoenigReport {
        biases,
        success,
        p_sum: success.iter().sum(),
        e_sq_sum: biases.iter().map(|e| e * e).sum(),
        benchmark: koenig_benchmark(),
    })
}

/// Symmetric two-bit encoding `((-1)^{a₀}, (-1)^{a₁}, (-1)^{a₀⊕a₁}) / √3`.
pub fn symmetric_two_bit_encoding() -> EncodingScheme {
    let s = 1.0 / 3f64.sqrt();
    let hyperbits = (0..4usize)
        .map(|j| {
            let a0 = if j & 1 == 0 { 1.0 } else { -1.0 };
            let a1 = if j & 2 == 0 { 1.0 } else { -1.0 };
            HyperbitState::new(vec![a0 * s, a1 * s, a0 * a1 * s]).expect("unit vector")
        })
        .collect();
    EncodingScheme::uniform(hyperbits).expect("four uniform inputs")
}

#[derive(Clone, Debug, Serialize)]
pub struct RacOptimum {
    /// Angle `θ` of the encoding `((-1)^{a₀} cos θ, (-1)^{a₁} sin θ)`.
    pub angle: f64,
    pub min_bias: f64,
    pub success: f64,
}

/// Two-bits-into-one random access code: maximises `min(E(a₀), E(a₁))` over
/// unit encodings `((-1)^{a₀} cos θ, (-1)^{a₁} sin θ)` by golden-section search,
/// evaluating biases through [`biases`].
pub fn optimize_rac_2to1() -> Result<RacOptimum> {
    let f = hadamard(2)?;
    let objective = |theta: f64| -> Result<f64> {
        let hyperbits = (0..4usize)
            .map(|j| {
                let a0 = if j & 1 == 0 { 1.0 } else { -1.0 };
                let a1 = if j & 2 == 0 { 1.0 } else { -1.0 };
                HyperbitState::new(vec![a0 * theta.cos(), a1 * theta.sin()])
            })
            .collect::<Result<_>>()?;
        let r = biases(&f, &EncodingScheme::uniform(hyperbits)?)?;
        Ok(r.biases[1].min(r.biases[2]))
    };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, std::f64::consts::FRAC_PI_2);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (objective(x1)?, objective(x2)?);
    while hi - lo > 1e-12 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1)?;
        }
    }
    let angle = 0.5 * (lo + hi);
    let min_bias = objective(angle)?;
    Ok(RacOptimum { angle, min_bias, success: 0.5 * (1.0 + min_bias) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn random_encoding(n: usize, dim: usize, unit: bool, r: &mut ChaCha8Rng) -> EncodingScheme {
        let size = 1 << n;
        let hyperbits = (0..size)
            .map(|_| {
                let v = if unit { random::unit_vector(dim, r) } else { random::ball_vector(dim, r) };
                HyperbitState::new(v).unwrap()
            })
            .collect();
        EncodingScheme::new(random::probability_vector(size, r), hyperbits).unwrap()
    }

    /// Bias from the success-probability definition: Bob measuring `w` on the
    /// average hyperbit conditioned on each answer value.
    fn bias_from_probabilities(f: &QueryMatrix, enc: &EncodingScheme, i: usize, w: &MeasurementVector) -> f64 {
        let mut success = 0.0;
        for beta in [1i8, -1] {
            let mut p_beta = 0.0;
            let mut cond = vec![0.0; enc.dim()];
            for j in 0..enc.len() {
                if f.entry(i, j) == beta {
                    p_beta += enc.priors()[j];
                    cond = linalg::axpy(&cond, enc.priors()[j], enc.hyperbits()[j].coords());
                }
            }
            if p_beta > 0.0 {
                let p_bob_right = 0.5 * (1.0 + f64::from(beta) * linalg::dot(w.coords(), &cond) / p_beta);
                success += p_beta * p_bob_right;
            }
        }
        2.0 * success - 1.0
    }

    #[test]
    fn hadamard_small_cases() {
        assert_eq!(hadamard(0).unwrap().rows(), &[vec![1]]);
        assert_eq!(hadamard(1).unwrap().rows(), &[vec![1, 1], vec![1, -1]]);
        assert!(matches!(hadamard(11), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn hadamard_three_rows_pairwise_orthogonal() {
        let h = hadamard(3).unwrap();
        let mut pairs = 0;
        for i in 0..8 {
            for k in (i + 1)..8 {
                assert_eq!(row_dot(&h.rows()[i], &h.rows()[k]), 0);
                pairs += 1;
            }
        }
        assert_eq!(pairs, 28);
        assert!(h.columns_orthogonal());
        for i in 0..8 {
            for j in 0..8 {
                let expected = if (i & j as usize).count_ones() % 2 == 0 { 1 } else { -1 };
                assert_eq!(h.entry(i, j), expected);
            }
        }
    }

    #[test]
    fn query_matrix_rejects_duplicate_rows() {
        let rows = vec![vec![1, 1], vec![1, 1]];
        assert!(matches!(QueryMatrix::new(1, rows), Err(Error::InvalidQueryMatrix(_))));
        assert!(QueryMatrix::new(1, vec![vec![1, 0], vec![1, -1]]).is_err());
        assert!(QueryMatrix::new(1, vec![vec![1, 1]]).is_err());
    }

    #[test]
    fn non_hadamard_query_matrix_accepted() {
        // Negating a row and permuting columns keeps rows orthogonal.
        let rows = vec![vec![-1, 1, -1, 1], vec![1, 1, -1, -1], vec![1, -1, -1, 1], vec![1, 1, 1, 1]];
        let f = QueryMatrix::new(2, rows).unwrap();
        assert!(f.columns_orthogonal());
        let mut r = rng(40);
        let enc = random_encoding(2, 3, false, &mut r);
        assert!(check_identity(&f, &enc).unwrap() <= 1e-12);
    }

    #[test]
    fn one_bit_hand_computation() {
        let enc = EncodingScheme::uniform(vec![
            HyperbitState::new(vec![1.0]).unwrap(),
            HyperbitState::new(vec![-1.0]).unwrap(),
        ])
        .unwrap();
        let r = biases(&hadamard(1).unwrap(), &enc).unwrap();
        assert_eq!(r.biases, vec![0.0, 1.0]);
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
        assert_eq!(r.constant_row, Some(0));
    }

    #[test]
    fn zero_hyperbits_have_zero_bias() {
        let enc = EncodingScheme::uniform(vec![HyperbitState::zero(3); 4]).unwrap();
        let r = biases(&hadamard(2).unwrap(), &enc).unwrap();
        assert!(r.biases.iter().all(|&e| e == 0.0));
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    }

    #[test]
    fn uniform_unit_encodings_sum_to_one() {
        let mut r = rng(41);
        for n in 0..=4 {
            let size = 1 << n;
            let hyperbits = (0..size).map(|_| HyperbitState::new(random::unit_vector(5, &mut r)).unwrap()).collect();
            let enc = EncodingScheme::uniform(hyperbits).unwrap();
            let rep = biases(&hadamard(n).unwrap(), &enc).unwrap();
            assert!((rep.lhs - 1.0).abs() <= 1e-12, "n={n} lhs={}", rep.lhs);
        }
    }

    #[test]
    fn identity_holds_for_random_instances() {
        let mut r = rng(42);
        for _ in 0..50 {
            let n = r.random_range(0..=4);
            let dim = r.random_range(1..=8);
            let enc = random_encoding(n, dim, false, &mut r);
            let f = hadamard(n).unwrap();
            let rep = biases(&f, &enc).unwrap();
            // Independent evaluation of every bias from success probabilities.
            let ws = rep.optimal_measurements();
            let lhs: f64 = (0..f.size()).map(|i| bias_from_probabilities(&f, &enc, i, &ws[i]).powi(2)).sum();
            assert!((lhs - enc.weighted_norm_sum()).abs() <= 1e-9);
            assert!(rep.residual() <= 1e-9);
            assert!((rep.split_lhs.unwrap() - rep.rhs).abs() <= 1e-9);
        }
    }

    #[test]
    fn constant_row_signal_is_average() {
        let mut r = rng(43);
        let enc = random_encoding(3, 4, false, &mut r);
        let rep = biases(&hadamard(3).unwrap(), &enc).unwrap();
        let diff = linalg::axpy(&rep.signals[0], -1.0, &rep.average);
        assert!(linalg::norm(&diff) < 1e-15);
    }

    #[test]
    fn suboptimal_measurements() {
        let mut r = rng(44);
        let f = hadamard(2).unwrap();
        let enc = random_encoding(2, 3, false, &mut r);
        let rep = biases(&f, &enc).unwrap();
        let slack = check_suboptimal(&f, &enc, &rep.optimal_measurements()).unwrap();
        assert!(slack.abs() <= 1e-12);
        for _ in 0..100 {
            let meas: Vec<_> = (0..4).map(|_| MeasurementVector::new(random::unit_vector(3, &mut r)).unwrap()).collect();
            let slack = check_suboptimal(&f, &enc, &meas).unwrap();
            assert!(slack >= -1e-9);
            // Each term obeys Cauchy–Schwarz on its own.
            for (x, w) in rep.signals.iter().zip(&meas) {
                assert!(linalg::dot(x, w.coords()).powi(2) <= linalg::dot(x, x) + 1e-15);
            }
        }
        assert!(check_suboptimal(&f, &enc, &rep.optimal_measurements()[..3]).is_err());
    }

    #[test]
    fn orthogonal_measurements_leave_full_slack() {
        // All signals live in the first two coordinates; measure along the third.
        let hyperbits = (0..4)
            .map(|j| HyperbitState::new(vec![if j % 2 == 0 { 0.6 } else { -0.6 }, 0.3 * j as f64 / 3.0, 0.0]).unwrap())
            .collect();
        let enc = EncodingScheme::new(vec![0.1, 0.2, 0.3, 0.4], hyperbits).unwrap();
        let meas = vec![MeasurementVector::basis(3, 2); 4];
        let slack = check_suboptimal(&hadamard(2).unwrap(), &enc, &meas).unwrap();
        assert!((slack - enc.weighted_norm_sum()).abs() < 1e-15);
    }

    #[test]
    fn scaling_hyperbits_scales_biases() {
        let mut r = rng(45);
        let enc = random_encoding(3, 4, false, &mut r);
        let lambda = 0.37;
        let scaled = EncodingScheme::new(
            enc.priors().to_vec(),
            enc.hyperbits().iter().map(|h| h.scale(lambda).unwrap()).collect(),
        )
        .unwrap();
        let f = hadamard(3).unwrap();
        let (a, b) = (biases(&f, &enc).unwrap(), biases(&f, &scaled).unwrap());
        for (x, y) in a.biases.iter().zip(&b.biases) {
            assert!((lambda * x - y).abs() < 1e-14);
        }
        assert!((lambda * lambda * a.rhs - b.rhs).abs() < 1e-14);
    }

    #[test]
    fn padding_adds_zero_probability_inputs() {
        let enc = EncodingScheme::new(
            vec![0.5, 0.3, 0.2],
            vec![HyperbitState::new(vec![1.0]).unwrap(), HyperbitState::new(vec![0.0, -1.0]).unwrap(), HyperbitState::zero(1)],
        )
        .unwrap();
        let p = enc.padded_to_power_of_two();
        assert_eq!(p.len(), 4);
        assert_eq!(p.priors()[3], 0.0);
        assert_eq!(p.dim(), 2);
        assert!(check_identity(&hadamard(2).unwrap(), &p).unwrap() <= 1e-12);
    }

    #[test]
    fn pathological_priors_are_flagged() {
        let enc = EncodingScheme::new(
            vec![1.0 - 1e-8, 1e-8 / 3.0, 1e-8 / 3.0, 1e-8 / 3.0],
            vec![HyperbitState::new(vec![1.0]).unwrap(); 4],
        );
        let enc = enc.unwrap();
        let rep = biases(&hadamard(2).unwrap(), &enc).unwrap();
        assert_eq!(rep.pathological, vec![1, 2, 3]);
        let uniform = symmetric_two_bit_encoding();
        assert!(biases(&hadamard(2).unwrap(), &uniform).unwrap().pathological.is_empty());
    }

    #[test]
    fn encoding_validation() {
        let h = vec![HyperbitState::zero(1); 2];
        assert!(matches!(EncodingScheme::new(vec![0.5, 0.6], h.clone()), Err(Error::InvalidDistribution(_))));
        assert!(matches!(EncodingScheme::new(vec![1.5, -0.5], h.clone()), Err(Error::InvalidDistribution(_))));
        assert!(matches!(EncodingScheme::new(vec![1.0], h), Err(Error::DimensionMismatch(_))));
        let parsed: EncodingScheme = serde_json::from_str(r#"{"priors":[0.5,0.5],"hyperbits":[[1.0],[0.0,-1.0]]}"#).unwrap();
        assert_eq!(parsed.dim(), 2);
        assert!(serde_json::from_str::<EncodingScheme>(r#"{"priors":[1.0],"hyperbits":[[1.0,1.0]]}"#).is_err());
    }

    #[test]
    fn koenig_symmetric_strategy() {
        let rep = koenig_compare(&symmetric_two_bit_encoding()).unwrap();
        let s = 1.0 / 3f64.sqrt();
        for e in rep.biases {
            assert!((e - s).abs() < 1e-12);
        }
        assert!((rep.e_sq_sum - 1.0).abs() <= 1e-9);
        assert!((rep.p_sum - 2.366_025_403_784_438_6).abs() <= 1e-9);
        assert!((rep.p_sum - rep.benchmark).abs() <= 1e-12);
    }

    #[test]
    fn koenig_zero_strategy_and_arity() {
        let rep = koenig_compare(&EncodingScheme::uniform(vec![HyperbitState::zero(2); 4]).unwrap()).unwrap();
        assert_eq!((rep.p_sum, rep.e_sq_sum), (1.5, 0.0));
        let three = EncodingScheme::uniform(vec![HyperbitState::zero(2); 3]).unwrap();
        assert!(matches!(koenig_compare(&three), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn koenig_random_strategies_respect_identity() {
        let mut r = rng(46);
        for _ in 0..1000 {
            let dim = r.random_range(1..=6);
            let hb = (0..4).map(|_| HyperbitState::new(random::unit_vector(dim, &mut r)).unwrap()).collect();
            let rep = koenig_compare(&EncodingScheme::uniform(hb).unwrap()).unwrap();
            assert!(rep.within_identity(1e-9));
        }
    }

    #[test]
    fn rac_optimum_matches_constrained_grid() {
        // Oracle: maximise min(E₁, E₂) over E₁ = cos φ, E₂ = sin φ on a grid,
        // the boundary of E₁² + E₂² ≤ 1 with the other two rows at zero.
        let steps = 200_000;
        let grid_best = (0..=steps)
            .map(|k| {
                let phi = std::f64::consts::FRAC_PI_2 * k as f64 / steps as f64;
                phi.cos().min(phi.sin())
            })
            .fold(0.0, f64::max);
        let opt = optimize_rac_2to1().unwrap();
        assert!((opt.min_bias - grid_best).abs() <= 1e-6);
        assert!((opt.success - 0.853_553_390_593_273_7).abs() <= 1e-6);
    }
}
