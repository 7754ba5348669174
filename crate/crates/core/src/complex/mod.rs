//! Simplicial complexes on a ground set `[m]`, stored by facets together with
//! their cached minimal non-faces.

mod measure;
pub mod scx;

use std::collections::HashSet;

use serde::Serialize;

pub use self::measure::{sublevel_complex, Measure};
use crate::error::{Error, Result};
use crate::subset::{Subset, MAX_VERTICES};

/// Ground sets up to this size compute minimal non-faces by a full sweep of
/// `2^m` subsets; larger ones go through a hypergraph-transversal routine.
pub const TABLE_SWEEP_LIMIT: usize = 22;

/// A non-void simplicial complex `K ⊆ 2^[m]`.
///
/// `Vert(K)` may be a strict subset of `[m]`: the ground-set size is part of
/// the value and every notion here (partitions, duals, measures) is relative
/// to it.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SimplicialComplex {
    m: usize,
    facets: Vec<Subset>,
    #[serde(skip)]
    min_nonfaces: Vec<Subset>,
}

/// Result of [`SimplicialComplex::alexander_dual`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlexanderDual {
    Complex(SimplicialComplex),
    /// The dual has no faces, which happens exactly for the full simplex.
    Void,
}

impl AlexanderDual {
    pub fn into_complex(self) -> Option<SimplicialComplex> {
        match self {
            AlexanderDual::Complex(k) => Some(k),
            AlexanderDual::Void => None,
        }
    }
}

impl SimplicialComplex {
    /// Builds a complex from a facet list.
    ///
    /// Duplicates and non-maximal members are dropped. The complex `{∅}` is
    /// given as the single facet `∅`; an empty list would be the void complex
    /// and is rejected.
    pub fn from_facets<I>(m: usize, facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = Subset>,
    {
        check_ground_set(m)?;
        let full = Subset::full(m);
        let mut given: Vec<Subset> = Vec::new();
        for f in facets {
            if !f.is_subset_of(full) {
                let vertex = f.difference(full).min_vertex().unwrap_or(0);
                return Err(Error::VertexOutOfRange { vertex, m });
            }
            given.push(f);
        }
        if given.is_empty() {
            return Err(Error::VoidComplex);
        }
        let n_given = given.len();
        let facets = maximal_elements(given);
        if facets.len() != n_given {
            log::warn!(
                "facet list reduced from {} to {} maximal faces",
                n_given,
                facets.len()
            );
        }
        let min_nonfaces = compute_min_nonfaces(m, &facets);
        Ok(SimplicialComplex {
            m,
            facets,
            min_nonfaces,
        })
    }

    /// Builds the complex whose faces are the subsets accepted by `is_face`,
    /// sweeping all `2^m` subsets. The predicate must be downward closed and
    /// accept `∅`.
    pub fn from_face_predicate<P>(m: usize, is_face: P) -> Result<Self>
    where
        P: Fn(Subset) -> bool,
    {
        check_ground_set(m)?;
        if m > TABLE_SWEEP_LIMIT {
            return Err(Error::TooManyVertices {
                m,
                limit: TABLE_SWEEP_LIMIT,
            });
        }
        let table = FaceTable::from_predicate(m, is_face);
        if !table.contains(Subset::EMPTY) {
            return Err(Error::VoidComplex);
        }
        Ok(Self::from_table(&table))
    }

    fn from_table(table: &FaceTable) -> Self {
        let m = table.m;
        let mut facets = Vec::new();
        let mut min_nonfaces = Vec::new();
        for bits in 0..(1u64 << m) {
            let a = Subset::from_bits(bits);
            if table.contains(a) {
                let extendable = (1..=m)
                    .filter(|&v| !a.contains(v))
                    .any(|v| table.contains(a.with(v)));
                if !extendable {
                    facets.push(a);
                }
            } else if a.iter().all(|v| table.contains(a.without(v))) {
                min_nonfaces.push(a);
            }
        }
        facets.sort();
        min_nonfaces.sort();
        SimplicialComplex {
            m,
            facets,
            min_nonfaces,
        }
    }

    /// Trusted constructor for callers that know both lists in closed form.
    pub(crate) fn from_parts(m: usize, facets: Vec<Subset>, min_nonfaces: Vec<Subset>) -> Self {
        debug_assert!(facets.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(min_nonfaces.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(m > TABLE_SWEEP_LIMIT || min_nonfaces == min_nonfaces_by_sweep(m, &facets));
        SimplicialComplex {
            m,
            facets,
            min_nonfaces,
        }
    }

    /// The full simplex `2^[m]`.
    pub fn full_simplex(m: usize) -> Result<Self> {
        Self::from_facets(m, [Subset::full(m)])
    }

    /// The complex `{∅}` on `[m]`.
    pub fn empty_face_only(m: usize) -> Result<Self> {
        Self::from_facets(m, [Subset::EMPTY])
    }

    #[inline]
    pub fn ground_size(&self) -> usize {
        self.m
    }

    /// Facets in canonical order.
    #[inline]
    pub fn facets(&self) -> &[Subset] {
        &self.facets
    }

    /// Inclusion-minimal non-faces in canonical order.
    #[inline]
    pub fn min_nonfaces(&self) -> &[Subset] {
        &self.min_nonfaces
    }

    pub fn ground_set(&self) -> Subset {
        Subset::full(self.m)
    }

    /// `Vert(K)`: vertices that appear in some face.
    pub fn vertex_set(&self) -> Subset {
        self.facets
            .iter()
            .fold(Subset::EMPTY, |acc, f| acc.union(*f))
    }

    pub fn is_full_simplex(&self) -> bool {
        self.min_nonfaces.is_empty()
    }

    pub fn dimension(&self) -> isize {
        self.facets
            .iter()
            .map(|f| f.len() as isize)
            .max()
            .unwrap_or(0)
            - 1
    }

    /// Face membership. Both characterizations are evaluated in debug builds.
    pub fn contains_face(&self, a: Subset) -> bool {
        let by_nonfaces = self.contains_face_via_nonfaces(a);
        debug_assert_eq!(by_nonfaces, self.contains_face_via_facets(a));
        by_nonfaces
    }

    /// `A ⊆ F` for some facet `F`.
    pub fn contains_face_via_facets(&self, a: Subset) -> bool {
        self.facets.iter().any(|f| a.is_subset_of(*f))
    }

    /// No minimal non-face lies inside `A`.
    pub fn contains_face_via_nonfaces(&self, a: Subset) -> bool {
        !self.min_nonfaces.iter().any(|n| n.is_subset_of(a))
    }

    /// Checked variant of [`contains_face`](Self::contains_face) for
    /// caller-supplied subsets.
    pub fn try_contains_face(&self, a: Subset) -> Result<bool> {
        self.check_subset(a)?;
        Ok(self.contains_face(a))
    }

    pub(crate) fn check_subset(&self, a: Subset) -> Result<()> {
        let outside = a.difference(self.ground_set());
        match outside.min_vertex() {
            Some(vertex) => Err(Error::VertexOutOfRange { vertex, m: self.m }),
            None => Ok(()),
        }
    }

    /// `K ⊆ L` on the same ground set.
    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.m == other.m && self.facets.iter().all(|f| other.contains_face(*f))
    }

    /// The Alexander dual `{A ⊆ [m] : [m]∖A ∉ K}`.
    ///
    /// Its facets are the complements of the minimal non-faces of `K`, and
    /// its minimal non-faces are the complements of the facets of `K`.
    pub fn alexander_dual(&self) -> AlexanderDual {
        if self.min_nonfaces.is_empty() {
            return AlexanderDual::Void;
        }
        let mut facets: Vec<Subset> = self
            .min_nonfaces
            .iter()
            .map(|n| n.complement(self.m))
            .collect();
        let mut min_nonfaces: Vec<Subset> =
            self.facets.iter().map(|f| f.complement(self.m)).collect();
        facets.sort();
        min_nonfaces.sort();
        AlexanderDual::Complex(SimplicialComplex {
            m: self.m,
            facets,
            min_nonfaces,
        })
    }

    /// Exactly one of `A`, `[m]∖A` is a face, for every `A ⊆ [m]`.
    pub fn is_self_dual(&self) -> bool {
        if self.facets.len() != self.min_nonfaces.len() {
            return false;
        }
        let mut complements: Vec<Subset> =
            self.facets.iter().map(|f| f.complement(self.m)).collect();
        complements.sort();
        complements == self.min_nonfaces
    }

    /// The join `K1 ∗ K2`, with the vertices of `other` relabeled to
    /// `m1+1, …, m1+m2`.
    pub fn join(&self, other: &SimplicialComplex) -> Result<SimplicialComplex> {
        let m = self.m + other.m;
        check_ground_set(m)?;
        let shift = self.m;
        let mut facets = Vec::with_capacity(self.facets.len() * other.facets.len());
        for f1 in &self.facets {
            for f2 in &other.facets {
                facets.push(f1.union(f2.shift(shift)));
            }
        }
        let mut min_nonfaces: Vec<Subset> = self
            .min_nonfaces
            .iter()
            .copied()
            .chain(other.min_nonfaces.iter().map(|n| n.shift(shift)))
            .collect();
        facets.sort();
        min_nonfaces.sort();
        Ok(SimplicialComplex {
            m,
            facets,
            min_nonfaces,
        })
    }

    /// Removes one facet, keeping all its proper faces. Returns `None` when
    /// the result would be void (only possible for `{∅}`).
    pub fn delete_facet(&self, facet: Subset) -> Option<SimplicialComplex> {
        assert!(self.facets.contains(&facet), "{facet} is not a facet");
        if facet.is_empty() {
            return None;
        }
        // F becomes a minimal non-face and replaces the old ones of the form
        // F + v, which were the only ones containing F.
        let rest: Vec<Subset> = self
            .facets
            .iter()
            .copied()
            .filter(|&f| f != facet)
            .chain(facet.iter().map(|v| facet.without(v)))
            .collect();
        let mut min_nonfaces: Vec<Subset> = self
            .min_nonfaces
            .iter()
            .copied()
            .filter(|n| !facet.is_subset_of(*n))
            .collect();
        let at = min_nonfaces.binary_search(&facet).unwrap_err();
        min_nonfaces.insert(at, facet);
        Some(SimplicialComplex::from_parts(
            self.m,
            maximal_elements(rest),
            min_nonfaces,
        ))
    }

    /// Calls `visit` on every face, the empty face included. Faces are
    /// generated by adding vertices in increasing order, so each is seen once.
    pub fn for_each_face<F: FnMut(Subset)>(&self, mut visit: F) {
        let mut by_max_vertex: Vec<Vec<Subset>> = vec![Vec::new(); self.m + 1];
        for n in &self.min_nonfaces {
            by_max_vertex[n.max_vertex().unwrap_or(0)].push(*n);
        }
        fn rec<F: FnMut(Subset)>(
            face: Subset,
            next: usize,
            m: usize,
            by_max_vertex: &[Vec<Subset>],
            visit: &mut F,
        ) {
            visit(face);
            for v in next..=m {
                let grown = face.with(v);
                // any new minimal non-face inside `grown` has `v` as its maximum
                if by_max_vertex[v].iter().all(|n| !n.is_subset_of(grown)) {
                    rec(grown, v + 1, m, by_max_vertex, visit);
                }
            }
        }
        rec(Subset::EMPTY, 1, self.m, &by_max_vertex, &mut visit);
    }

    /// All faces (including `∅`) in canonical order.
    pub fn faces(&self) -> Vec<Subset> {
        let mut out = Vec::new();
        self.for_each_face(|f| out.push(f));
        out.sort();
        out
    }

    /// Number of faces including the empty face.
    pub fn face_count(&self) -> u64 {
        let mut n = 0u64;
        self.for_each_face(|_| n += 1);
        n
    }

    /// `f[d]` = number of faces of dimension `d` (the empty face excluded).
    pub fn f_vector(&self) -> Vec<u64> {
        let mut f = vec![0u64; self.dimension().max(0) as usize + 1];
        self.for_each_face(|a| {
            if !a.is_empty() {
                f[a.len() - 1] += 1;
            }
        });
        if self.dimension() < 0 {
            f.clear();
        }
        f
    }
}

impl std::fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("m", &self.m)
            .field("facets", &self.facets)
            .finish()
    }
}

fn check_ground_set(m: usize) -> Result<()> {
    if m > MAX_VERTICES {
        return Err(Error::TooManyVertices {
            m,
            limit: MAX_VERTICES,
        });
    }
    Ok(())
}

/// Inclusion-maximal members of a family, deduplicated, canonical order.
pub(crate) fn maximal_elements(mut family: Vec<Subset>) -> Vec<Subset> {
    family.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    family.dedup();
    let mut kept: Vec<Subset> = Vec::with_capacity(family.len());
    for s in family {
        if !kept.iter().any(|k| s.is_subset_of(*k)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

/// Inclusion-minimal members of a family, deduplicated, canonical order.
pub(crate) fn minimal_elements(mut family: Vec<Subset>) -> Vec<Subset> {
    family.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    family.dedup();
    let mut kept: Vec<Subset> = Vec::with_capacity(family.len());
    for s in family {
        if !kept.iter().any(|k| k.is_subset_of(s)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

fn compute_min_nonfaces(m: usize, facets: &[Subset]) -> Vec<Subset> {
    if m <= TABLE_SWEEP_LIMIT {
        min_nonfaces_by_sweep(m, facets)
    } else {
        min_nonfaces_by_transversals(m, facets)
    }
}

/// Scans every subset in order of increasing cardinality and keeps the
/// non-faces all of whose one-vertex deletions are faces.
pub(crate) fn min_nonfaces_by_sweep(m: usize, facets: &[Subset]) -> Vec<Subset> {
    let table = FaceTable::from_facets(m, facets);
    let mut out = Vec::new();
    for size in 0..=m {
        for bits in 0..(1u64 << m) {
            if bits.count_ones() as usize != size {
                continue;
            }
            let a = Subset::from_bits(bits);
            if !table.contains(a) && a.iter().all(|v| table.contains(a.without(v))) {
                out.push(a);
            }
        }
    }
    out.sort();
    out
}

/// Minimal non-faces are the minimal transversals of the facet complements
/// (`A ⊄ F` for all `F` iff `A` meets every `[m]∖F`). Berge's incremental
/// algorithm.
pub(crate) fn min_nonfaces_by_transversals(m: usize, facets: &[Subset]) -> Vec<Subset> {
    let full = Subset::full(m);
    if facets.contains(&full) {
        return Vec::new();
    }
    let mut transversals = vec![Subset::EMPTY];
    for f in facets {
        let edge = f.complement(m);
        let mut next = Vec::with_capacity(transversals.len());
        for t in &transversals {
            if !t.is_disjoint(edge) {
                next.push(*t);
            } else {
                next.extend(edge.iter().map(|v| t.with(v)));
            }
        }
        transversals = minimal_elements(next);
    }
    transversals
}

/// Bit table of the faces of a complex on at most [`TABLE_SWEEP_LIMIT`]
/// vertices.
pub(crate) struct FaceTable {
    m: usize,
    words: Vec<u64>,
}

impl FaceTable {
    pub(crate) fn from_facets(m: usize, facets: &[Subset]) -> Self {
        let size = 1usize << m;
        let mut table = FaceTable {
            m,
            words: vec![0; size.div_ceil(64)],
        };
        for f in facets {
            table.set(f.bits());
        }
        // downward closure, visiting supersets before subsets
        for bits in (0..size as u64).rev() {
            if table.get(bits) {
                let mut rest = bits;
                while rest != 0 {
                    let low = rest & rest.wrapping_neg();
                    table.set(bits ^ low);
                    rest ^= low;
                }
            }
        }
        table
    }

    fn from_predicate<P: Fn(Subset) -> bool>(m: usize, is_face: P) -> Self {
        let size = 1usize << m;
        let mut table = FaceTable {
            m,
            words: vec![0; size.div_ceil(64)],
        };
        for bits in 0..size as u64 {
            if is_face(Subset::from_bits(bits)) {
                table.set(bits);
            }
        }
        table
    }

    #[inline]
    fn set(&mut self, bits: u64) {
        self.words[(bits >> 6) as usize] |= 1 << (bits & 63);
    }

    #[inline]
    fn get(&self, bits: u64) -> bool {
        self.words[(bits >> 6) as usize] >> (bits & 63) & 1 == 1
    }

    #[inline]
    pub(crate) fn contains(&self, a: Subset) -> bool {
        self.get(a.bits())
    }
}

/// Distinct faces of a complex, computed independently of the incremental
/// generator (used to cross-check counts).
#[allow(dead_code)]
pub(crate) fn faces_by_submasks(k: &SimplicialComplex) -> HashSet<Subset> {
    k.facets().iter().flat_map(|f| f.subsets()).collect()
}
