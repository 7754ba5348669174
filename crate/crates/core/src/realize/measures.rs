//! Superadditive set functions: weighted-hypergraph measures `ν_ω` and
//! geometric measures `min_t μ_t`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{Measure, SimplicialComplex, TABLE_SWEEP_LIMIT};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, rational_strings};
use crate::subset::{Subset, MAX_VERTICES};

/// Cap on the family size for table evaluation of `ν_ω`.
pub const MAX_FAMILY_SIZE: usize = 4096;

/// A family `F ⊆ 2^[m]` of nonempty sets with non-negative weights `ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedHypergraph {
    m: usize,
    members: Vec<Subset>,
    omega: Vec<BigRational>,
}

impl WeightedHypergraph {
    pub fn new(m: usize, members: Vec<Subset>, omega: Vec<BigRational>) -> Result<Self> {
        if m > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                m,
                limit: MAX_VERTICES,
            });
        }
        if members.len() != omega.len() {
            return Err(Error::InvalidHypergraph(format!(
                "{} members but {} weights",
                members.len(),
                omega.len()
            )));
        }
        let full = Subset::full(m);
        let mut seen = std::collections::HashSet::new();
        for (b, w) in members.iter().zip(&omega) {
            if b.is_empty() {
                return Err(Error::InvalidHypergraph("members must be nonempty".into()));
            }
            if !b.is_subset_of(full) {
                return Err(Error::VertexOutOfRange {
                    vertex: b.difference(full).min_vertex().unwrap(),
                    m,
                });
            }
            if !seen.insert(*b) {
                return Err(Error::InvalidHypergraph(format!("duplicate member {b}")));
            }
            if w.is_negative() {
                return Err(Error::InvalidHypergraph(format!(
                    "negative weight {w} on {b}"
                )));
            }
        }
        Ok(WeightedHypergraph { m, members, omega })
    }

    /// All singletons with the given weights; `ν_ω` is then additive.
    pub fn singletons(weights: &[BigRational]) -> Result<Self> {
        let m = weights.len();
        Self::new(
            m,
            (1..=m).map(Subset::singleton).collect(),
            weights.to_vec(),
        )
    }

    pub fn ground_size(&self) -> usize {
        self.m
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn omega(&self) -> &[BigRational] {
        &self.omega
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members grouped by their smallest vertex.
    fn by_min_vertex(&self) -> Vec<Vec<(Subset, &BigRational)>> {
        let mut through = vec![Vec::new(); self.m + 1];
        for (b, w) in self.members.iter().zip(&self.omega) {
            through[b.min_vertex().unwrap()].push((*b, w));
        }
        through
    }
}

#[derive(Serialize, Deserialize)]
struct HypergraphFile {
    m: usize,
    family: Vec<Vec<usize>>,
    omega: Vec<String>,
}

impl Serialize for WeightedHypergraph {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        HypergraphFile {
            m: self.m,
            family: self.members.iter().map(|b| b.to_vec()).collect(),
            omega: rational_strings(&self.omega),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WeightedHypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let file = HypergraphFile::deserialize(deserializer)?;
        if file.m > MAX_VERTICES {
            return Err(D::Error::custom(Error::TooManyVertices {
                m: file.m,
                limit: MAX_VERTICES,
            }));
        }
        let mut members = Vec::with_capacity(file.family.len());
        for set in &file.family {
            if let Some(&v) = set.iter().find(|&&v| v == 0 || v > file.m) {
                return Err(D::Error::custom(Error::VertexOutOfRange {
                    vertex: v,
                    m: file.m,
                }));
            }
            members.push(Subset::from_vertices(set.iter().copied()));
        }
        let omega = file
            .omega
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        WeightedHypergraph::new(file.m, members, omega).map_err(D::Error::custom)
    }
}

/// `ν_ω(A)`: the largest total weight of pairwise disjoint members inside
/// `A`, zero when none fits.
pub fn wh_measure(f: &WeightedHypergraph, a: Subset) -> BigRational {
    fn rec(
        a: Subset,
        through: &[Vec<(Subset, &BigRational)>],
        memo: &mut HashMap<Subset, BigRational>,
    ) -> BigRational {
        let Some(v) = a.min_vertex() else {
            return BigRational::zero();
        };
        if let Some(x) = memo.get(&a) {
            return x.clone();
        }
        // the lowest vertex is either unused or lies in a member whose lowest vertex it is
        let mut best = rec(a.without(v), through, memo);
        for (b, w) in &through[v] {
            if b.is_subset_of(a) {
                let cand = *w + rec(a.difference(*b), through, memo);
                if cand > best {
                    best = cand;
                }
            }
        }
        memo.insert(a, best.clone());
        best
    }
    let a = a.intersection(Subset::full(f.m));
    rec(a, &f.by_min_vertex(), &mut HashMap::new())
}

/// Geometric superadditive measure `ν(A) = min_t μ_t(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricMeasure {
    components: Vec<Measure>,
}

impl GeometricMeasure {
    pub fn new(components: Vec<Measure>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::InvalidMeasure("no components".into()));
        };
        let m = first.ground_size();
        if let Some(c) = components.iter().find(|c| c.ground_size() != m) {
            return Err(Error::GroundSetMismatch {
                expected: m,
                got: c.ground_size(),
            });
        }
        Ok(GeometricMeasure { components })
    }

    pub fn components(&self) -> &[Measure] {
        &self.components
    }
}

/// `min_t μ_t(A)`.
pub fn geometric_measure(g: &GeometricMeasure, a: Subset) -> BigRational {
    g.components
        .iter()
        .map(|mu| mu.eval(a))
        .min()
        .expect("nonempty by construction")
}

/// Values of a set function on all `2^m` subsets, indexed by bit pattern.
///
/// Values are stored as integers over a common denominator when they fit in
/// 128 bits, which keeps the `2^m` sweeps cheap; otherwise as rationals.
#[derive(Clone, Debug)]
pub struct SetFunctionTable {
    m: usize,
    values: TableValues,
}

#[derive(Clone, Debug)]
enum TableValues {
    Scaled { denom: BigInt, values: Vec<i128> },
    Exact(Vec<BigRational>),
}

impl SetFunctionTable {
    pub fn ground_size(&self) -> usize {
        self.m
    }

    pub fn get(&self, a: Subset) -> BigRational {
        let i = a.bits() as usize;
        match &self.values {
            TableValues::Scaled { denom, values } => {
                BigRational::new(values[i].into(), denom.clone())
            }
            TableValues::Exact(v) => v[i].clone(),
        }
    }

    pub fn total(&self) -> BigRational {
        self.get(Subset::full(self.m))
    }

    /// `{A : ν(A) ≤ β}` (or `< β`) as a boolean table.
    fn below(&self, beta: &BigRational, strict: bool) -> Vec<bool> {
        match &self.values {
            TableValues::Scaled { denom, values } => {
                let t = beta * BigRational::from_integer(denom.clone());
                // integer v: v ≤ t ⇔ v ≤ ⌊t⌋;  v < t ⇔ v ≤ ⌈t⌉ - 1
                let cut = if strict {
                    t.ceil().to_integer() - BigInt::one()
                } else {
                    t.floor().to_integer()
                };
                match cut.to_i128() {
                    Some(c) => values.iter().map(|&v| v <= c).collect(),
                    None => {
                        let all = cut.is_positive();
                        vec![all; values.len()]
                    }
                }
            }
            TableValues::Exact(v) => v
                .iter()
                .map(|x| if strict { x < beta } else { x <= beta })
                .collect(),
        }
    }

    /// The sub-level complex `K_{ν≤β}` (or `K_{ν<β}`).
    pub fn sublevel(&self, beta: &BigRational, strict: bool) -> Result<SimplicialComplex> {
        let below = self.below(beta, strict);
        SimplicialComplex::from_face_predicate(self.m, |a| below[a.bits() as usize])
    }
}

/// A monotone superadditive set function on `[m]` that can be tabulated.
pub trait SuperadditiveMeasure {
    fn ground_size(&self) -> usize;
    fn value(&self, a: Subset) -> BigRational;
    fn table(&self) -> Result<SetFunctionTable>;
}

fn check_table_size(m: usize) -> Result<()> {
    if m > TABLE_SWEEP_LIMIT {
        return Err(Error::TooManyVertices {
            m,
            limit: TABLE_SWEEP_LIMIT,
        });
    }
    Ok(())
}

/// Common denominator and the scaled numerators, if all fit in `i128`.
fn scale(values: &[&BigRational]) -> Option<(BigInt, Vec<i128>)> {
    let denom = values.iter().fold(BigInt::one(), |d, v| d.lcm(v.denom()));
    let scaled = values
        .iter()
        .map(|v| (v.numer() * (&denom / v.denom())).to_i128())
        .collect::<Option<Vec<_>>>()?;
    Some((denom, scaled))
}

impl SuperadditiveMeasure for WeightedHypergraph {
    fn ground_size(&self) -> usize {
        self.m
    }

    fn value(&self, a: Subset) -> BigRational {
        wh_measure(self, a)
    }

    fn table(&self) -> Result<SetFunctionTable> {
        check_table_size(self.m)?;
        if self.len() > MAX_FAMILY_SIZE {
            return Err(Error::BudgetExceeded {
                what: "hypergraph family size",
                needed: self.len() as u128,
                budget: MAX_FAMILY_SIZE as u128,
            });
        }
        let size = 1usize << self.m;
        let weights: Vec<&BigRational> = self.omega.iter().collect();
        let scaled = scale(&weights).filter(|(_, w)| {
            w.iter()
                .try_fold(0i128, |acc, &x| acc.checked_add(x))
                .is_some()
        });
        let mut through: Vec<Vec<(u64, usize)>> = vec![Vec::new(); self.m + 1];
        for (i, b) in self.members.iter().enumerate() {
            through[b.min_vertex().unwrap()].push((b.bits(), i));
        }
        let values = match scaled {
            Some((denom, w)) => {
                let mut t = vec![0i128; size];
                for a in 1..size as u64 {
                    let v = a.trailing_zeros() as usize + 1;
                    let mut best = t[(a & (a - 1)) as usize];
                    for &(b, i) in &through[v] {
                        if b & !a == 0 {
                            best = best.max(w[i] + t[(a & !b) as usize]);
                        }
                    }
                    t[a as usize] = best;
                }
                TableValues::Scaled { denom, values: t }
            }
            None => {
                let mut t = vec![BigRational::zero(); size];
                for a in 1..size as u64 {
                    let v = a.trailing_zeros() as usize + 1;
                    let mut best = t[(a & (a - 1)) as usize].clone();
                    for &(b, i) in &through[v] {
                        if b & !a == 0 {
                            let cand = &self.omega[i] + &t[(a & !b) as usize];
                            if cand > best {
                                best = cand;
                            }
                        }
                    }
                    t[a as usize] = best;
                }
                TableValues::Exact(t)
            }
        };
        Ok(SetFunctionTable { m: self.m, values })
    }
}

impl SuperadditiveMeasure for GeometricMeasure {
    fn ground_size(&self) -> usize {
        self.components[0].ground_size()
    }

    fn value(&self, a: Subset) -> BigRational {
        geometric_measure(self, a)
    }

    fn table(&self) -> Result<SetFunctionTable> {
        let m = self.ground_size();
        check_table_size(m)?;
        let size = 1usize << m;
        let all: Vec<&BigRational> = self.components.iter().flat_map(|c| c.weights()).collect();
        let fits = scale(&all).filter(|(_, w)| {
            w.chunks(m.max(1)).all(|c| {
                c.iter()
                    .try_fold(0i128, |acc, &x| acc.checked_add(x))
                    .is_some()
            })
        });
        let values = match fits {
            Some((denom, w)) => {
                let mut best = vec![i128::MAX; size];
                let mut cur = vec![0i128; size];
                for comp in w.chunks(m.max(1)).take(self.components.len()) {
                    for a in 1..size {
                        let low = a.trailing_zeros() as usize;
                        cur[a] = cur[a & (a - 1)] + comp[low];
                    }
                    for (b, c) in best.iter_mut().zip(&cur) {
                        *b = (*b).min(*c);
                    }
                }
                best[0] = 0;
                TableValues::Scaled {
                    denom,
                    values: best,
                }
            }
            None => TableValues::Exact(
                (0..size as u64)
                    .map(|a| geometric_measure(self, Subset::from_bits(a)))
                    .collect(),
            ),
        };
        Ok(SetFunctionTable { m, values })
    }
}

impl SuperadditiveMeasure for Measure {
    fn ground_size(&self) -> usize {
        Measure::ground_size(self)
    }

    fn value(&self, a: Subset) -> BigRational {
        self.eval(a)
    }

    fn table(&self) -> Result<SetFunctionTable> {
        GeometricMeasure::new(vec![self.clone()])?.table()
    }
}
