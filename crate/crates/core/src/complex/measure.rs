use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::SimplicialComplex;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, rational_strings};
use crate::subset::{Subset, MAX_VERTICES};

/// Additive weight distribution `μ(A) = Σ_{i∈A} α_i` on `[m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    weights: Vec<BigRational>,
    total: BigRational,
}

impl Measure {
    pub fn new(weights: Vec<BigRational>) -> Result<Self> {
        if weights.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                m: weights.len(),
                limit: MAX_VERTICES,
            });
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::InvalidMeasure(format!(
                "weight of vertex {} is negative: {w}",
                i + 1
            )));
        }
        let total: BigRational = weights.iter().sum();
        if !total.is_positive() {
            return Err(Error::ZeroTotal);
        }
        Ok(Measure { weights, total })
    }

    pub fn from_integers(weights: &[i64]) -> Result<Self> {
        Self::new(
            weights
                .iter()
                .map(|&w| BigRational::from_integer(w.into()))
                .collect(),
        )
    }

    /// Normalized counting measure on `[m]`.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroTotal);
        }
        let w = BigRational::new(1.into(), (m as i64).into());
        Self::new(vec![w; m])
    }

    /// Normalized counting measure on `[m]` supported by `support`.
    pub fn counting_on(m: usize, support: Subset) -> Result<Self> {
        if !support.is_subset_of(Subset::full(m)) || support.is_empty() {
            return Err(Error::InvalidMeasure(format!(
                "support {support} is empty or outside [{m}]"
            )));
        }
        let w = BigRational::new(1.into(), (support.len() as i64).into());
        Self::new(
            (1..=m)
                .map(|v| {
                    if support.contains(v) {
                        w.clone()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect(),
        )
    }

    pub fn ground_size(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn total(&self) -> &BigRational {
        &self.total
    }

    pub fn is_probability(&self) -> bool {
        self.total.is_one()
    }

    /// `μ(A)`; vertices outside `[m]` are ignored.
    pub fn eval(&self, a: Subset) -> BigRational {
        a.iter()
            .filter(|&v| v <= self.weights.len())
            .map(|v| &self.weights[v - 1])
            .sum()
    }

    /// Rescales to total mass one.
    pub fn normalized(&self) -> Measure {
        Measure {
            weights: self.weights.iter().map(|w| w / &self.total).collect(),
            total: BigRational::one(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MeasureFile {
    weights: Vec<String>,
}

impl Serialize for Measure {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        MeasureFile {
            weights: rational_strings(&self.weights),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Measure {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let file = MeasureFile::deserialize(deserializer)?;
        let weights = file
            .weights
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Measure::new(weights).map_err(serde::de::Error::custom)
    }
}

/// The sub-level complex `K_{μ≤β}` (or `K_{μ<β}` when `strict`).
///
/// Faces are generated depth-first by adding vertices in increasing order
/// while the running mass stays under the threshold; since weights are
/// non-negative the face family is downward closed and the search never
/// visits a non-face twice.
pub fn sublevel_complex(
    mu: &Measure,
    beta: &BigRational,
    strict: bool,
) -> Result<SimplicialComplex> {
    if beta.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "threshold {beta} is negative"
        )));
    }
    let m = mu.ground_size();
    let below = |x: &BigRational| if strict { x < beta } else { x <= beta };
    if !below(&BigRational::zero()) {
        return Err(Error::VoidComplex);
    }
    let mut facets = Vec::new();
    let mut stack = vec![(Subset::EMPTY, 1usize, BigRational::zero())];
    while let Some((face, next, mass)) = stack.pop() {
        let mut maximal = true;
        for v in 1..=m {
            if face.contains(v) {
                continue;
            }
            let grown = &mass + &mu.weights[v - 1];
            if below(&grown) {
                maximal = false;
                if v >= next {
                    stack.push((face.with(v), v + 1, grown));
                }
            }
        }
        if maximal {
            facets.push(face);
        }
    }
    SimplicialComplex::from_facets(m, facets)
}
