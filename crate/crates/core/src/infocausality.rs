//! Mutual-information accounting for one-hyperbit protocols whose input bits
//! are only pairwise independent.
//!
//! Alice's input `j` is uniform over `2ⁿ` values; each audited bit `aᵢ` is a row
//! of a query matrix evaluated at `j`. Bob guesses `bᵢ` by measuring the
//! received hyperbit along `wᵢ`. The audit computes every joint distribution of
//! `(aᵢ, bᵢ)` exactly and checks the chain
//! `Σ I(aᵢ:bᵢ) ≤ Σ ⟨wᵢ,xᵢ⟩² / (1 − ⟨wᵢ,x_avg⟩²) ≤ 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperball::MeasurementVector;
use crate::linalg;
use crate::queries::{hadamard, signal_vectors, EncodingScheme, QueryMatrix};
use crate::tolerance::{EQUIVALENCE, PROBABILITY_SUM, STRUCTURAL};

/// Base-2 binary entropy; exactly 0 at both endpoints.
pub fn binary_entropy(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange(format!("entropy argument {t} not in [0, 1]")));
    }
    if t == 0.0 || t == 1.0 {
        return Ok(0.0);
    }
    Ok(-t * t.log2() - (1.0 - t) * (1.0 - t).log2())
}

/// Largest value of `(1 − h((1+x)/2)) − x²` over `resolution` evenly spaced
/// points of `[-1, 1]`. A resolution below 2 checks `x = 0` only.
pub fn taylor_bound_check(resolution: usize) -> f64 {
    let xs: Vec<f64> = if resolution < 2 {
        vec![0.0]
    } else {
        (0..resolution)
            .map(|k| -1.0 + 2.0 * k as f64 / (resolution - 1) as f64)
            .collect()
    };
    xs.into_iter()
        .map(|x| {
            let t = ((1.0 + x) / 2.0).clamp(0.0, 1.0);
            1.0 - binary_entropy(t).expect("clamped") - x * x
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Joint table indexed `[a][b]` with index 0 for `+1` and 1 for `-1`.
pub type JointTable = [[f64; 2]; 2];

fn check_table(joint: &JointTable) -> Result<()> {
    if joint.iter().flatten().any(|&p| !(p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidDistribution("joint probabilities must be nonnegative".into()));
    }
    let total: f64 = joint.iter().flatten().sum();
    if (total - 1.0).abs() > PROBABILITY_SUM {
        return Err(Error::InvalidDistribution(format!("joint table sums to {total}")));
    }
    Ok(())
}

/// Mutual information in bits of a 2×2 joint distribution.
pub fn mutual_information(joint: &JointTable) -> Result<f64> {
    check_table(joint)?;
    let row = [joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]];
    let col = [joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]];
    let mut info = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            let p = joint[a][b];
            if p > 0.0 {
                info += p * (p / (row[a] * col[b])).log2();
            }
        }
    }
    Ok(info.max(0.0))
}

/// Bits `aᵢ = f(i, j)` for the selected rows of a query matrix, over uniform `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleJson", into = "EnsembleJson")]
pub struct BitEnsemble {
    matrix: QueryMatrix,
    bits: Vec<usize>,
}

/// File form. `matrix` defaults to the Sylvester–Hadamard matrix of order `2ⁿ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleJson {
    pub n: usize,
    pub bits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<QueryMatrix>,
}

impl BitEnsemble {
    /// Validates that every selected bit is uniform and every pair independent,
    /// by counting over all `2ⁿ` inputs.
    pub fn new(matrix: QueryMatrix, bits: Vec<usize>) -> Result<Self> {
        let size = matrix.size();
        if bits.is_empty() {
            return Err(Error::NotPairwiseIndependent("ensemble has no bits".into()));
        }
        if bits.len() > size - 1 {
            return Err(Error::NotPairwiseIndependent(format!(
                "{} bits exceed the {} pairwise independent bits of a {size}-input register",
                bits.len(),
                size - 1
            )));
        }
        if let Some(&i) = bits.iter().find(|&&i| i >= size) {
            return Err(Error::OutOfRange(format!("row {i} not in a {size}-row query matrix")));
        }
        for &i in &bits {
            let plus = matrix.rows()[i].iter().filter(|&&f| f == 1).count();
            if 2 * plus != size {
                return Err(Error::NotPairwiseIndependent(format!("bit from row {i} is not uniform")));
            }
        }
        for (s, &i) in bits.iter().enumerate() {
            for &k in &bits[s + 1..] {
                let mut counts = [[0usize; 2]; 2];
                for j in 0..size {
                    let a = usize::from(matrix.entry(i, j) == -1);
                    let b = usize::from(matrix.entry(k, j) == -1);
                    counts[a][b] += 1;
                }
                if counts.iter().flatten().any(|&c| 4 * c != size) {
                    return Err(Error::NotPairwiseIndependent(format!(
                        "bits from rows {i} and {k} are dependent"
                    )));
                }
            }
        }
        Ok(Self { matrix, bits })
    }

    /// The ensemble `{a₀, a₁, a₀⊕a₁}` on two input bits.
    pub fn two_bit_parities() -> Self {
        Self::new(hadamard(2).expect("small"), vec![1, 2, 3]).expect("independent")
    }

    pub fn matrix(&self) -> &QueryMatrix {
        &self.matrix
    }

    pub fn bits(&self) -> &[usize] {
        &self.bits
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl TryFrom<EnsembleJson> for BitEnsemble {
    type Error = Error;
    fn try_from(j: EnsembleJson) -> Result<Self> {
        let matrix = match j.matrix {
            Some(m) if m.n() != j.n => {
                return Err(Error::DimensionMismatch(format!(
                    "ensemble declares n = {} but its matrix has n = {}",
                    j.n,
                    m.n()
                )))
            }
            Some(m) => m,
            None => hadamard(j.n)?,
        };
        Self::new(matrix, j.bits)
    }
}

impl From<BitEnsemble> for EnsembleJson {
    fn from(e: BitEnsemble) -> Self {
        let default = hadamard(e.matrix.n()).ok();
        let matrix = (default.as_ref() != Some(&e.matrix)).then_some(e.matrix.clone());
        EnsembleJson { n: e.matrix.n(), bits: e.bits, matrix }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BitAudit {
    pub row: usize,
    pub joint: JointTable,
    pub mutual_information: f64,
    /// `⟨w, x⟩² / (1 − ⟨w, x_avg⟩²)`, or 0 when Bob already knows the answer (the
    /// denominator vanishes only if every input reads `±1` along `w`).
    pub bound_term: f64,
    /// `⟨x, x⟩ − ⟨w, x⟩²`.
    pub cauchy_schwarz_gap: f64,
    /// Largest gap between `P(a|b)` from the joint table and from Bayes' rule.
    pub bayes_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ICReport {
    pub bits: Vec<BitAudit>,
    pub total_information: f64,
    pub bound_total: f64,
    /// `|Σ ⟨xᵢ,xᵢ⟩ − (1 − ⟨x_avg,x_avg⟩)|` over all non-constant rows, for unit encodings.
    pub bridge_residual: Option<f64>,
}

impl ICReport {
    pub fn information_within_bound(&self, tol: f64) -> bool {
        self.total_information <= self.bound_total + tol
    }

    pub fn bound_within_one(&self, tol: f64) -> bool {
        self.bound_total <= 1.0 + tol
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.total_information <= 1.0 + tol && self.information_within_bound(tol) && self.bound_within_one(tol)
    }

    pub fn min_cauchy_schwarz_gap(&self) -> f64 {
        self.bits.iter().map(|b| b.cauchy_schwarz_gap).fold(f64::INFINITY, f64::min)
    }

    pub fn max_bayes_residual(&self) -> f64 {
        self.bits.iter().map(|b| b.bayes_residual).fold(0.0, f64::max)
    }
}

/// Bob's best direction for each audited bit: along its signal vector.
pub fn optimal_measurements(ensemble: &BitEnsemble, enc: &EncodingScheme) -> Result<Vec<MeasurementVector>> {
    let signals = signal_vectors(ensemble.matrix(), enc)?;
    Ok(ensemble
        .bits()
        .iter()
        .map(|&i| {
            MeasurementVector::along(&signals[i]).unwrap_or_else(|_| MeasurementVector::basis(enc.dim(), 0))
        })
        .collect())
}

fn sign_index(v: i8) -> usize {
    usize::from(v == -1)
}

pub fn ic_audit(ensemble: &BitEnsemble, enc: &EncodingScheme, meas: &[MeasurementVector]) -> Result<ICReport> {
    let size = ensemble.matrix().size();
    if enc.len() != size {
        return Err(Error::DimensionMismatch(format!(
            "encoding has {} inputs, ensemble register has {size}",
            enc.len()
        )));
    }
    if !enc.is_uniform() {
        return Err(Error::InvalidDistribution("audit requires uniform priors".into()));
    }
    if meas.len() != ensemble.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} measurements for {} audited bits",
            meas.len(),
            ensemble.len()
        )));
    }
    let signals = signal_vectors(ensemble.matrix(), enc)?;
    let average = enc.average();
    let weight = 1.0 / size as f64;

    let mut bits = Vec::with_capacity(ensemble.len());
    for (&i, w) in ensemble.bits().iter().zip(meas) {
        let row = &ensemble.matrix().rows()[i];
        let readings: Vec<f64> = enc.hyperbits().iter().map(|h| linalg::dot(w.coords(), h.coords())).collect();

        let mut joint = [[0.0; 2]; 2];
        for (&f, r) in row.iter().zip(&readings) {
            for beta in [1i8, -1] {
                joint[sign_index(f)][sign_index(beta)] += weight * 0.5 * (1.0 + f64::from(beta) * r);
            }
        }
        for p in joint.iter_mut().flatten() {
            if *p < -STRUCTURAL || *p > 1.0 + STRUCTURAL {
                return Err(Error::InvalidDistribution(format!("joint probability {p} out of range")));
            }
            *p = p.clamp(0.0, 1.0);
        }
        let mutual_information = mutual_information(&joint)?;

        let along_avg = linalg::dot(w.coords(), &average);
        let along_signal = linalg::dot(w.coords(), &signals[i]);
        let denom = 1.0 - along_avg * along_avg;
        let bound_term = if denom <= STRUCTURAL {
            0.0
        } else {
            along_signal * along_signal / denom
        };
        let cauchy_schwarz_gap = linalg::dot(&signals[i], &signals[i]) - along_signal * along_signal;

        // Bayes' rule with P(b|a) from the conditional average hyperbit and P(b) from x_avg.
        let mut bayes_residual: f64 = 0.0;
        for alpha in [1i8, -1] {
            let members: Vec<usize> = (0..size).filter(|&j| row[j] == alpha).collect();
            let p_a = members.len() as f64 * weight;
            let mut cond = vec![0.0; enc.dim()];
            for &j in &members {
                cond = linalg::axpy(&cond, weight / p_a, enc.hyperbits()[j].coords());
            }
            for beta in [1i8, -1] {
                let b = f64::from(beta);
                let p_b_given_a = 0.5 * (1.0 + b * linalg::dot(w.coords(), &cond));
                let p_b = 0.5 * (1.0 + b * along_avg);
                if p_b <= 0.0 {
                    continue;
                }
                let via_bayes = p_b_given_a * p_a / p_b;
                let column = joint[0][sign_index(beta)] + joint[1][sign_index(beta)];
                let direct = joint[sign_index(alpha)][sign_index(beta)] / column;
                bayes_residual = bayes_residual.max((via_bayes - direct).abs());
            }
        }

        bits.push(BitAudit { row: i, joint, mutual_information, bound_term, cauchy_schwarz_gap, bayes_residual });
    }

    let unit = enc.hyperbits().iter().all(|h| (h.norm() - 1.0).abs() <= EQUIVALENCE);
    let bridge_residual = unit.then(|| {
        let constant = ensemble.matrix().constant_row();
        let lhs: f64 = signals
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != constant)
            .map(|(_, x)| linalg::dot(x, x))
            .sum();
        (lhs - (1.0 - linalg::dot(&average, &average))).abs()
    });

    Ok(ICReport {
        total_information: bits.iter().map(|b| b.mutual_information).sum(),
        bound_total: bits.iter().map(|b| b.bound_term).sum(),
        bits,
        bridge_residual,
    })
}
