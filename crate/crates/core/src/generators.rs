//! Example families: skeletons, point sets, Ramsey complexes, weighted
//! majority (self-dual) complexes, and deleted-join face counts.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{sublevel_complex, Measure, SimplicialComplex, TABLE_SWEEP_LIMIT};
use crate::error::{Error, Result};
use crate::subset::{k_subsets, Subset, MAX_VERTICES};

pub const DEFAULT_COLORING_BUDGET: u128 = 1 << 26;
pub const DEFAULT_LABELING_BUDGET: u128 = 1 << 30;
const MAX_SKELETON_SETS: u128 = 1 << 22;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All subsets of `[m]` with at most `k + 1` elements.
pub fn skeleton(k: usize, m: usize) -> Result<SimplicialComplex> {
    if m == 0 || k >= m {
        return Err(Error::InvalidArgument(format!(
            "skeleton needs 0 <= k <= m - 1, got k = {k}, m = {m}"
        )));
    }
    if m > MAX_VERTICES {
        return Err(Error::TooManyVertices {
            m,
            limit: MAX_VERTICES,
        });
    }
    let needed = binomial(m, k + 1) + binomial(m, k + 2);
    if needed > MAX_SKELETON_SETS {
        return Err(Error::BudgetExceeded {
            what: "skeleton facets and non-faces",
            needed,
            budget: MAX_SKELETON_SETS,
        });
    }
    Ok(SimplicialComplex::from_parts(
        m,
        k_subsets(m, k + 1),
        k_subsets(m, k + 2),
    ))
}

/// The 0-dimensional complex on `[m]`.
pub fn points(m: usize) -> Result<SimplicialComplex> {
    skeleton(0, m)
}

/// Edges of `K_n`, indexed `1..=n(n-1)/2` lexicographically on `(i, j)`,
/// `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeTable {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl EdgeTable {
    pub fn new(n: usize) -> Result<Self> {
        let count = n * n.saturating_sub(1) / 2;
        if count > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                m: count,
                limit: MAX_VERTICES,
            });
        }
        let edges = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .collect();
        Ok(EdgeTable { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edge label of `{i, j}`.
    pub fn index(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        if i == 0 || i == j || j > self.n {
            return None;
        }
        // edges before row i: (n-1) + … + (n-i+1)
        Some((i - 1) * (2 * self.n - i) / 2 + (j - i))
    }

    pub fn edge(&self, label: usize) -> Option<(usize, usize)> {
        label
            .checked_sub(1)
            .and_then(|e| self.edges.get(e).copied())
    }

    /// Edge set of the complete graph on `vertices`.
    pub fn clique(&self, vertices: Subset) -> Subset {
        let vs = vertices.to_vec();
        let mut out = Subset::EMPTY;
        for (a, &i) in vs.iter().enumerate() {
            for &j in &vs[a + 1..] {
                out = out.with(self.index(i, j).expect("vertex within range"));
            }
        }
        out
    }

    pub fn all(&self) -> Subset {
        Subset::full(self.edges.len())
    }
}

/// A monotone property of spanning subgraphs of `K_n`, given by edge sets.
#[derive(Clone)]
pub enum GraphProperty {
    ContainsClique(usize),
    /// User predicate on `(n, edge set)`; must be monotone under adding
    /// edges.
    Custom {
        name: String,
        predicate: Arc<dyn Fn(usize, Subset) -> bool + Send + Sync>,
    },
}

impl fmt::Debug for GraphProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphProperty::ContainsClique(k) => write!(f, "ContainsClique({k})"),
            GraphProperty::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl GraphProperty {
    pub fn custom<F>(name: impl Into<String>, predicate: F) -> Self
    where
        F: Fn(usize, Subset) -> bool + Send + Sync + 'static,
    {
        GraphProperty::Custom {
            name: name.into(),
            predicate: Arc::new(predicate),
        }
    }

    pub fn name(&self) -> String {
        match self {
            GraphProperty::ContainsClique(k) => format!("contains_clique({k})"),
            GraphProperty::Custom { name, .. } => name.clone(),
        }
    }

    /// A predicate on edge sets of `K_n`, specialized to `n`.
    pub fn compile(&self, table: &EdgeTable) -> Box<dyn Fn(Subset) -> bool + Send + Sync> {
        match self {
            GraphProperty::ContainsClique(k) => {
                let cliques: Vec<Subset> = k_subsets(table.vertex_count(), *k)
                    .into_iter()
                    .map(|c| table.clique(c))
                    .collect();
                Box::new(move |g| cliques.iter().any(|c| c.is_subset_of(g)))
            }
            GraphProperty::Custom { predicate, .. } => {
                let predicate = Arc::clone(predicate);
                let n = table.vertex_count();
                Box::new(move |g| predicate(n, g))
            }
        }
    }

    /// Samples `trials` pairs `Γ ⊆ Γ'` on `K_n` and returns the first pair
    /// with `P(Γ)` but not `P(Γ')`.
    pub fn find_monotonicity_violation(
        &self,
        n: usize,
        trials: usize,
        seed: u64,
    ) -> Result<Option<(Subset, Subset)>> {
        let table = EdgeTable::new(n)?;
        let holds = self.compile(&table);
        let all = table.all().bits();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let g = Subset::from_bits(rng.gen::<u64>() & all);
            let bigger = g.union(Subset::from_bits(rng.gen::<u64>() & all));
            if holds(g) && !holds(bigger) {
                return Ok(Some((g, bigger)));
            }
        }
        Ok(None)
    }
}

/// A Ramsey complex with the labeling of its vertices by edges of `K_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamseyComplex {
    pub complex: SimplicialComplex,
    pub edges: EdgeTable,
}

/// The complex on the edge set `E` of `K_n` whose faces are the `S` with
/// `E∖S` having property `P`.
pub fn ramsey_complex(n: usize, property: &GraphProperty) -> Result<RamseyComplex> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "ramsey complex needs n >= 3, got {n}"
        )));
    }
    let edges = EdgeTable::new(n)?;
    let m = edges.len();
    let complex = match property {
        GraphProperty::ContainsClique(k) => {
            let all = edges.all();
            let facets = k_subsets(n, *k)
                .into_iter()
                .map(|c| all.difference(edges.clique(c)));
            SimplicialComplex::from_facets(m, facets)?
        }
        GraphProperty::Custom { .. } => {
            if m > TABLE_SWEEP_LIMIT {
                return Err(Error::TooManyVertices {
                    m,
                    limit: TABLE_SWEEP_LIMIT,
                });
            }
            let holds = property.compile(&edges);
            let all = edges.all();
            SimplicialComplex::from_face_predicate(m, |s| holds(all.difference(s)))?
        }
    };
    Ok(RamseyComplex { complex, edges })
}

/// Outcome of an admissibility scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    /// First coloring (color per edge label, `0..r`) with no color class whose
    /// complement has the property.
    pub counterexample: Option<Vec<usize>>,
    pub colorings: u128,
}

pub fn is_admissible(
    n: usize,
    property: &GraphProperty,
    r: usize,
    allow_empty_classes: bool,
) -> Result<bool> {
    Ok(admissibility(n, property, r, allow_empty_classes, DEFAULT_COLORING_BUDGET)?.admissible)
}

/// Scans all `r^|E|` colorings of the edges of `K_n`. A coloring passes when
/// some color `i` has `∪_{j≠i} A_j` in `P`.
pub fn admissibility(
    n: usize,
    property: &GraphProperty,
    r: usize,
    allow_empty_classes: bool,
    budget: u128,
) -> Result<Admissibility> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!(
            "r must be at least 2, got {r}"
        )));
    }
    let table = EdgeTable::new(n)?;
    let m = table.len();
    let colorings = (r as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if colorings > budget {
        return Err(Error::BudgetExceeded {
            what: "edge colorings",
            needed: colorings,
            budget,
        });
    }
    let holds = table_predicate(property, &table);
    let all = table.all();

    // low digits (edges 1..=low) vary inside a chunk, high digits pick the chunk
    let mut low = m;
    while low > 0 && (r as u128).pow(low as u32) > 1 << 12 {
        low -= 1;
    }
    let chunks = (r as u64).pow((m - low) as u32);
    let scan_chunk = |chunk: u64| -> Option<Vec<usize>> {
        let mut colors = vec![0usize; m];
        let mut rest = chunk;
        for c in colors.iter_mut().skip(low) {
            *c = (rest % r as u64) as usize;
            rest /= r as u64;
        }
        let mut classes = vec![Subset::EMPTY; r];
        for (e, &c) in colors.iter().enumerate() {
            classes[c] = classes[c].with(e + 1);
        }
        loop {
            let skip = !allow_empty_classes && classes.iter().any(|c| c.is_empty());
            if !skip && !classes.iter().any(|c| holds(all.difference(*c))) {
                return Some(colors);
            }
            // odometer over the low digits
            let mut e = 0;
            loop {
                if e == low {
                    return None;
                }
                let c = colors[e];
                classes[c] = classes[c].without(e + 1);
                let next = (c + 1) % r;
                colors[e] = next;
                classes[next] = classes[next].with(e + 1);
                if next != 0 {
                    break;
                }
                e += 1;
            }
        }
    };
    let counterexample = (0..chunks).into_par_iter().find_map_first(scan_chunk);
    Ok(Admissibility {
        admissible: counterexample.is_none(),
        counterexample,
        colorings,
    })
}

fn table_predicate(
    property: &GraphProperty,
    table: &EdgeTable,
) -> Box<dyn Fn(Subset) -> bool + Send + Sync> {
    let holds = property.compile(table);
    let m = table.len();
    if m > 20 {
        return holds;
    }
    let bits: Vec<u64> = (0..1u64 << m).collect();
    let memo: Vec<bool> = bits
        .par_iter()
        .map(|&b| holds(Subset::from_bits(b)))
        .collect();
    Box::new(move |g| memo[g.bits() as usize])
}

/// `{A : w(A) < W/2}` for positive integer weights with odd total `W`.
pub fn selfdual_from_weights(weights: &[u64]) -> Result<SimplicialComplex> {
    if weights.is_empty() {
        return Err(Error::InvalidArgument("weight list is empty".into()));
    }
    if weights.contains(&0) {
        return Err(Error::InvalidArgument("weights must be positive".into()));
    }
    let total = weights.iter().try_fold(0u64, |acc, &w| acc.checked_add(w));
    let total = total
        .filter(|&t| t <= i64::MAX as u64)
        .ok_or_else(|| Error::InvalidArgument("weights too large".into()))?;
    if total % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "total weight {total} must be odd"
        )));
    }
    let mu = Measure::from_integers(&weights.iter().map(|&w| w as i64).collect::<Vec<_>>())?;
    let half = num_rational::BigRational::new((total as i64).into(), 2.into());
    let k = sublevel_complex(&mu, &half, true)?;
    debug_assert!(k.is_self_dual());
    Ok(k)
}

/// Weights drawn for [`random_selfdual`].
pub fn random_selfdual_weights(m: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=2 * m as u64)).collect();
    if w.iter().sum::<u64>() % 2 == 0 {
        w[m - 1] += 1;
    }
    w
}

/// A weighted-majority complex on `[m]`, deterministic in `seed`.
pub fn random_selfdual(m: usize, seed: u64) -> Result<SimplicialComplex> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if m > MAX_VERTICES {
        return Err(Error::TooManyVertices {
            m,
            limit: MAX_VERTICES,
        });
    }
    selfdual_from_weights(&random_selfdual_weights(m, seed))
}

/// Random complex on `[m]` generated by `facets` random subsets; test and
/// benchmark fixture.
pub fn random_complex(m: usize, facets: usize, seed: u64) -> Result<SimplicialComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = Subset::full(m).bits();
    let chosen: Vec<Subset> = (0..facets.max(1))
        .map(|_| Subset::from_bits(rng.gen::<u64>() & all))
        .collect();
    SimplicialComplex::from_facets(m, chosen)
}

/// f-vector of the r-fold deleted join `K^{*r}_Δ`: entry `d` counts the faces
/// with `d + 1` labeled vertices, the empty face excluded.
///
/// Faces are labelings `[m] → {0, 1, …, r}` (0 meaning unused) whose classes
/// `1..=r` are faces of `K`.
pub fn deleted_join_faces(k: &SimplicialComplex, r: usize) -> Result<Vec<u64>> {
    deleted_join_faces_with_budget(k, r, DEFAULT_LABELING_BUDGET)
}

pub fn deleted_join_faces_with_budget(
    k: &SimplicialComplex,
    r: usize,
    budget: u128,
) -> Result<Vec<u64>> {
    if r < 1 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let m = k.ground_size();
    let labelings = ((r + 1) as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if labelings > budget {
        return Err(Error::BudgetExceeded {
            what: "label assignments",
            needed: labelings,
            budget,
        });
    }
    let mut by_max: Vec<Vec<Subset>> = vec![Vec::new(); m + 1];
    for n in k.min_nonfaces() {
        by_max[n.max_vertex().unwrap_or(0)].push(*n);
    }
    debug_assert!(by_max[0].is_empty());
    let ctx = DeletedJoin { m, r, by_max };

    let mut prefix = 0;
    while prefix < m && ((r + 1) as u128).pow(prefix as u32) < 256 {
        prefix += 1;
    }
    let mut starts = Vec::new();
    ctx.collect_prefixes(1, prefix, &mut vec![Subset::EMPTY; r + 1], 0, &mut starts);
    let counts = starts
        .into_par_iter()
        .map(|(classes, used)| {
            let mut counts = vec![0u64; m + 1];
            let mut classes = classes;
            ctx.count(prefix + 1, &mut classes, used, &mut counts);
            counts
        })
        .reduce(
            || vec![0u64; m + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(counts[1..].to_vec())
}

struct DeletedJoin {
    m: usize,
    r: usize,
    by_max: Vec<Vec<Subset>>,
}

impl DeletedJoin {
    /// `classes[i]` with `v` added is still a face, given `classes[i]` is.
    fn fits(&self, class: Subset, v: usize) -> bool {
        let grown = class.with(v);
        !self.by_max[v].iter().any(|n| n.is_subset_of(grown))
    }

    fn collect_prefixes(
        &self,
        v: usize,
        prefix: usize,
        classes: &mut Vec<Subset>,
        used: usize,
        out: &mut Vec<(Vec<Subset>, usize)>,
    ) {
        if v > prefix {
            out.push((classes.clone(), used));
            return;
        }
        self.collect_prefixes(v + 1, prefix, classes, used, out);
        for i in 1..=self.r {
            if self.fits(classes[i], v) {
                classes[i] = classes[i].with(v);
                self.collect_prefixes(v + 1, prefix, classes, used + 1, out);
                classes[i] = classes[i].without(v);
            }
        }
    }

    fn count(&self, v: usize, classes: &mut [Subset], used: usize, counts: &mut [u64]) {
        if v > self.m {
            counts[used] += 1;
            return;
        }
        self.count(v + 1, classes, used, counts);
        for i in 1..=self.r {
            if self.fits(classes[i], v) {
                classes[i] = classes[i].with(v);
                self.count(v + 1, classes, used + 1, counts);
                classes[i] = classes[i].without(v);
            }
        }
    }
}
