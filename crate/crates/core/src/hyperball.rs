//! Hyperbit states and measurements.
//!
//! A state is a real vector in the unit ball of any finite dimension; a
//! two-outcome measurement is a unit vector `w`, and the outcome `X = ±1` has
//! expectation `⟨w, v⟩`. Vectors of different dimension are compared after
//! zero-padding the shorter one, which embeds the smaller ball isometrically.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerance::STRUCTURAL;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoordsJson", into = "CoordsJson")]
pub struct HyperbitState {
    coords: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoordsJson", into = "CoordsJson")]
pub struct MeasurementVector {
    coords: Vec<f64>,
}

/// File form shared by states and measurements: `{"coords": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoordsJson {
    pub coords: Vec<f64>,
}

fn check_coords(coords: &[f64]) -> Result<()> {
    if coords.is_empty() {
        return Err(Error::DimensionMismatch("hyperbit dimension must be at least 1".into()));
    }
    if coords.iter().any(|x| !x.is_finite()) {
        return Err(Error::Malformed("non-finite coordinate".into()));
    }
    Ok(())
}

impl HyperbitState {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_coords(&coords)?;
        let norm = linalg::norm(&coords);
        if norm > 1.0 + STRUCTURAL {
            return Err(Error::NormViolation { norm, expected: "|v| <= 1" });
        }
        Ok(Self { coords })
    }

    pub fn zero(dim: usize) -> Self {
        Self { coords: vec![0.0; dim.max(1)] }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.coords)
    }

    pub fn norm_sqr(&self) -> f64 {
        linalg::dot(&self.coords, &self.coords)
    }

    /// Shrinks the state towards the centre of the ball by `lambda ∈ [0, 1]`.
    pub fn scale(&self, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::OutOfRange(format!("scale factor {lambda} not in [0, 1]")));
        }
        Ok(Self { coords: linalg::scaled(&self.coords, lambda) })
    }

    /// The antipodal state `-v`.
    pub fn negated(&self) -> Self {
        Self { coords: linalg::scaled(&self.coords, -1.0) }
    }

    pub fn padded(&self, dim: usize) -> Self {
        Self { coords: linalg::padded(&self.coords, dim) }
    }
}

impl MeasurementVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_coords(&coords)?;
        let norm = linalg::norm(&coords);
        if (norm - 1.0).abs() > STRUCTURAL {
            return Err(Error::NormViolation { norm, expected: "|w| = 1" });
        }
        Ok(Self { coords })
    }

    /// Direction of a nonzero vector.
    pub fn along(v: &[f64]) -> Result<Self> {
        let n = linalg::norm(v);
        if n <= 0.0 || !n.is_finite() {
            return Err(Error::NormViolation { norm: n, expected: "nonzero direction" });
        }
        Self::new(linalg::scaled(v, 1.0 / n))
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut coords = vec![0.0; dim.max(k + 1)];
        coords[k] = 1.0;
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn negated(&self) -> Self {
        Self { coords: linalg::scaled(&self.coords, -1.0) }
    }
}

impl TryFrom<CoordsJson> for HyperbitState {
    type Error = Error;
    fn try_from(j: CoordsJson) -> Result<Self> {
        Self::new(j.coords)
    }
}

impl From<HyperbitState> for CoordsJson {
    fn from(s: HyperbitState) -> Self {
        CoordsJson { coords: s.coords }
    }
}

impl TryFrom<CoordsJson> for MeasurementVector {
    type Error = Error;
    fn try_from(j: CoordsJson) -> Result<Self> {
        Self::new(j.coords)
    }
}

impl From<MeasurementVector> for CoordsJson {
    fn from(m: MeasurementVector) -> Self {
        CoordsJson { coords: m.coords }
    }
}

/// Expected outcome `⟨w, v⟩`.
pub fn expect(state: &HyperbitState, meas: &MeasurementVector) -> f64 {
    linalg::dot(&state.coords, &meas.coords)
}

/// Draws `±1` with `P(+1) = (1 + ⟨w, v⟩) / 2`.
pub fn sample<R: Rng + ?Sized>(state: &HyperbitState, meas: &MeasurementVector, rng: &mut R) -> i8 {
    sample_with_expectation(expect(state, meas), rng)
}

pub(crate) fn sample_with_expectation<R: Rng + ?Sized>(expectation: f64, rng: &mut R) -> i8 {
    let p_plus = ((1.0 + expectation) / 2.0).clamp(0.0, 1.0);
    if rng.random::<f64>() < p_plus {
        1
    } else {
        -1
    }
}
