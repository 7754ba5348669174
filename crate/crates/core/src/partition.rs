//! Decision procedures for r-unavoidability and the partition number.
//!
//! Everything here rests on one reduction: `[m]` splits into `ν` blocks none
//! of which is a face iff the complex has `ν` pairwise disjoint minimal
//! non-faces. One direction shrinks each block to a minimal non-face inside
//! it; the other dumps the uncovered vertices into one of the packed sets,
//! which stays a non-face because non-faces are closed upwards. The partition
//! number is therefore one more than the largest such packing, which a
//! branch-and-bound over the minimal non-faces finds. The literal
//! partition-enumerating definition is kept as
//! [`partition_number_oracle`] to cross-check the reduction.

use std::collections::HashSet;

use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::subset::Subset;

/// Largest ground set the enumeration-based routines accept.
pub const ORACLE_MAX_VERTICES: usize = 12;

/// A partition of `[m]` with a per-block flag telling whether the block is a
/// non-face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionWitness {
    pub blocks: Vec<Subset>,
    pub offending: Vec<bool>,
}

impl PartitionWitness {
    pub fn new(k: &SimplicialComplex, blocks: Vec<Subset>) -> Self {
        let offending = blocks.iter().map(|b| !k.contains_face(*b)).collect();
        PartitionWitness { blocks, offending }
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Blocks are nonempty, pairwise disjoint, and cover `[m]`.
    pub fn is_partition_of(&self, m: usize) -> bool {
        let mut seen = Subset::EMPTY;
        for b in &self.blocks {
            if b.is_empty() || !b.is_disjoint(seen) {
                return false;
            }
            seen = seen.union(*b);
        }
        seen == Subset::full(m)
    }

    pub fn face_blocks(&self) -> usize {
        self.offending.iter().filter(|o| !**o).count()
    }
}

/// Pairwise disjoint minimal non-faces plus the vertices they leave uncovered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PackingWitness {
    pub nonfaces: Vec<Subset>,
    pub leftover: Subset,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Packing {
    pub size: usize,
    pub witness: PackingWitness,
}

/// Answer of an unavoidability test; a witness partition accompanies every
/// negative answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Unavoidability {
    pub unavoidable: bool,
    pub witness: Option<PartitionWitness>,
}

/// Depth-first search over index-increasing selections from a family sorted
/// in canonical order. Every search returns the lexicographically least
/// optimal selection: candidates are tried in order and the incumbent is only
/// replaced by a strictly better one.
struct Packer<'a> {
    sets: &'a [Subset],
    /// `min_len[i]` = smallest cardinality among `sets[i..]`.
    min_len: Vec<usize>,
}

impl<'a> Packer<'a> {
    fn new(sets: &'a [Subset]) -> Self {
        let mut min_len = vec![usize::MAX; sets.len() + 1];
        for i in (0..sets.len()).rev() {
            min_len[i] = min_len[i + 1].min(sets[i].len());
        }
        Packer { sets, min_len }
    }

    /// Room for at most this many more disjoint sets from `sets[start..]`.
    fn capacity(&self, start: usize, free: usize) -> usize {
        let per = self.min_len[start];
        if per == usize::MAX {
            return 0;
        }
        // sets are nonempty except in the degenerate void dual, never passed here
        (free / per.max(1)).min(self.sets.len() - start)
    }

    fn maximum(&self, m: usize) -> Vec<usize> {
        let mut best = Vec::new();
        let mut chosen = Vec::new();
        self.max_rec(0, Subset::EMPTY, m, &mut chosen, &mut best);
        best
    }

    fn max_rec(
        &self,
        start: usize,
        used: Subset,
        m: usize,
        chosen: &mut Vec<usize>,
        best: &mut Vec<usize>,
    ) {
        if chosen.len() > best.len() {
            best.clone_from(chosen);
        }
        for i in start..self.sets.len() {
            if chosen.len() + self.capacity(i, m - used.len()) <= best.len() {
                return;
            }
            let s = self.sets[i];
            if s.is_disjoint(used) {
                chosen.push(i);
                self.max_rec(i + 1, used.union(s), m, chosen, best);
                chosen.pop();
            }
        }
    }

    fn exactly(&self, k: usize, m: usize) -> Option<Vec<usize>> {
        let mut chosen = Vec::with_capacity(k);
        self.exact_rec(0, Subset::EMPTY, k, m, &mut chosen)
            .then_some(chosen)
    }

    fn exact_rec(
        &self,
        start: usize,
        used: Subset,
        k: usize,
        m: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == k {
            return true;
        }
        for i in start..self.sets.len() {
            if chosen.len() + self.capacity(i, m - used.len()) < k {
                return false;
            }
            let s = self.sets[i];
            if s.is_disjoint(used) {
                chosen.push(i);
                if self.exact_rec(i + 1, used.union(s), k, m, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    /// `k` disjoint sets of least total size, provided it is at most `limit`.
    fn min_total(&self, k: usize, limit: usize) -> Option<Vec<usize>> {
        let mut best: Option<(usize, Vec<usize>)> = None;
        let mut chosen = Vec::with_capacity(k);
        self.min_total_rec(0, Subset::EMPTY, k, limit, &mut chosen, &mut best);
        best.map(|(_, sel)| sel)
    }

    fn min_total_rec(
        &self,
        start: usize,
        used: Subset,
        k: usize,
        limit: usize,
        chosen: &mut Vec<usize>,
        best: &mut Option<(usize, Vec<usize>)>,
    ) {
        let total = used.len();
        let cap = best.as_ref().map_or(limit + 1, |(t, _)| *t);
        if chosen.len() == k {
            if total < cap {
                *best = Some((total, chosen.clone()));
            }
            return;
        }
        let need = k - chosen.len();
        for i in start..self.sets.len() {
            if self.sets.len() - i < need {
                return;
            }
            let lower = total + need * self.min_len[i];
            if lower >= cap {
                return;
            }
            let s = self.sets[i];
            if s.is_disjoint(used) {
                chosen.push(i);
                self.min_total_rec(i + 1, used.union(s), k, limit, chosen, best);
                chosen.pop();
            }
        }
    }

    fn witness(&self, selection: &[usize], m: usize) -> PackingWitness {
        let nonfaces: Vec<Subset> = selection.iter().map(|&i| self.sets[i]).collect();
        let covered = nonfaces.iter().fold(Subset::EMPTY, |a, s| a.union(*s));
        PackingWitness {
            nonfaces,
            leftover: covered.complement(m),
        }
    }
}

/// Largest family of pairwise disjoint minimal non-faces, with the
/// lexicographically least such family as witness.
pub fn max_disjoint_min_nonfaces(k: &SimplicialComplex) -> Packing {
    let packer = Packer::new(k.min_nonfaces());
    let sel = packer.maximum(k.ground_size());
    Packing {
        size: sel.len(),
        witness: packer.witness(&sel, k.ground_size()),
    }
}

/// The lexicographically least packing of exactly `count` disjoint minimal
/// non-faces, if one exists.
pub fn find_disjoint_min_nonfaces(k: &SimplicialComplex, count: usize) -> Option<PackingWitness> {
    let packer = Packer::new(k.min_nonfaces());
    packer
        .exactly(count, k.ground_size())
        .map(|sel| packer.witness(&sel, k.ground_size()))
}

/// The partition number `π(K)`: the least `ν` such that every partition of
/// `[m]` into `ν` nonempty blocks has a block in `K`.
///
/// Equals `m + 1` exactly when `K = {∅}`, meaning no `ν ≤ m` works.
pub fn partition_number(k: &SimplicialComplex) -> usize {
    max_disjoint_min_nonfaces(k).size + 1
}

/// Turns a packing into a partition of `[m]` by adding the leftover vertices
/// to the first packed set.
fn packing_to_partition(k: &SimplicialComplex, packing: PackingWitness) -> PartitionWitness {
    let mut blocks = packing.nonfaces;
    if let Some(first) = blocks.first_mut() {
        *first = first.union(packing.leftover);
    }
    PartitionWitness::new(k, blocks)
}

fn check_r(r: usize) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!(
            "r must be at least 2, got {r}"
        )));
    }
    Ok(())
}

/// Every partition of `[m]` into `r` nonempty blocks has a block in `K`.
pub fn is_r_unavoidable(k: &SimplicialComplex, r: usize) -> Result<Unavoidability> {
    check_r(r)?;
    Ok(match find_disjoint_min_nonfaces(k, r) {
        None => Unavoidability {
            unavoidable: true,
            witness: None,
        },
        Some(p) => Unavoidability {
            unavoidable: false,
            witness: Some(packing_to_partition(k, p)),
        },
    })
}

/// Every partition of `[m]` into `r` nonempty blocks has at least `s` blocks
/// in `K`.
///
/// A violating partition has `r - s + 1` non-face blocks and `s - 1` further
/// blocks, so it exists iff `r - s + 1` disjoint minimal non-faces fit into
/// `m - (s - 1)` vertices.
pub fn is_rs_unavoidable(k: &SimplicialComplex, r: usize, s: usize) -> Result<Unavoidability> {
    if !(r > s && s >= 1) {
        return Err(Error::InvalidArgument(format!(
            "need r > s >= 1, got r = {r}, s = {s}"
        )));
    }
    let m = k.ground_size();
    let packed = r - s + 1;
    let extra = s - 1;
    if packed + extra > m {
        return Ok(Unavoidability {
            unavoidable: true,
            witness: None,
        });
    }
    let packer = Packer::new(k.min_nonfaces());
    let Some(sel) = packer.min_total(packed, m - extra) else {
        return Ok(Unavoidability {
            unavoidable: true,
            witness: None,
        });
    };
    let packing = packer.witness(&sel, m);
    let witness = if extra == 0 {
        packing_to_partition(k, packing)
    } else {
        let mut blocks = packing.nonfaces;
        let leftover: Vec<usize> = packing.leftover.to_vec();
        debug_assert!(leftover.len() >= extra);
        for &v in &leftover[..extra - 1] {
            blocks.push(Subset::singleton(v));
        }
        blocks.push(Subset::from_vertices(leftover[extra - 1..].iter().copied()));
        PartitionWitness::new(k, blocks)
    };
    Ok(Unavoidability {
        unavoidable: false,
        witness: Some(witness),
    })
}

/// `K` is r-unavoidable and no proper subcomplex is.
///
/// It suffices to delete one facet at a time: any proper subcomplex sits
/// inside such a deletion, and unavoidability passes to supercomplexes. The
/// void complex is not a subcomplex, so `{∅}` has nothing to delete.
pub fn is_minimally_r_unavoidable(k: &SimplicialComplex, r: usize) -> Result<bool> {
    if !is_r_unavoidable(k, r)?.unavoidable {
        return Ok(false);
    }
    for &facet in k.facets() {
        if let Some(smaller) = k.delete_facet(facet) {
            if is_r_unavoidable(&smaller, r)?.unavoidable {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Calls `visit` with the blocks of every set partition of `[m]`, generated
/// as restricted growth strings (element `i` joins an existing block or opens
/// the next one).
pub fn for_each_set_partition<F: FnMut(&[Subset])>(m: usize, mut visit: F) {
    fn rec<F: FnMut(&[Subset])>(v: usize, m: usize, blocks: &mut Vec<Subset>, visit: &mut F) {
        if v > m {
            visit(blocks);
            return;
        }
        for i in 0..blocks.len() {
            blocks[i] = blocks[i].with(v);
            rec(v + 1, m, blocks, visit);
            blocks[i] = blocks[i].without(v);
        }
        blocks.push(Subset::singleton(v));
        rec(v + 1, m, blocks, visit);
        blocks.pop();
    }
    let mut blocks = Vec::with_capacity(m);
    rec(1, m, &mut blocks, &mut visit);
}

/// `π(K)` straight from the definition, by enumerating all set partitions.
pub fn partition_number_oracle(k: &SimplicialComplex) -> Result<usize> {
    let m = k.ground_size();
    if m > ORACLE_MAX_VERTICES {
        return Err(Error::TooManyVertices {
            m,
            limit: ORACLE_MAX_VERTICES,
        });
    }
    let mut violated = vec![false; m + 2];
    for_each_set_partition(m, |blocks| {
        if blocks.iter().all(|b| !k.contains_face_via_facets(*b)) {
            violated[blocks.len()] = true;
        }
    });
    Ok((1..=m).find(|&nu| !violated[nu]).unwrap_or(m + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelStatus {
    /// No partition into this many blocks from the hypergraph exists.
    Vacuous,
    /// Such partitions exist and each has a block in `K`.
    Holds,
    /// Some such partition has no block in `K`.
    Fails,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypergraphPartitionNumber {
    /// Least `ν` whose level is vacuous or holds.
    pub nu: usize,
    /// Least `ν` from which on no level fails.
    pub stable_nu: usize,
    pub vacuous_levels: Vec<usize>,
    /// Status of levels `1..=m+1`, in order.
    pub levels: Vec<LevelStatus>,
}

/// `π_H(K)`: partitions are restricted to blocks from `hypergraph`.
///
/// Levels with no admissible partition count as satisfied and are listed
/// separately, since they make the level-wise condition non-monotone.
pub fn hypergraph_partition_number(
    k: &SimplicialComplex,
    hypergraph: &[Subset],
) -> Result<HypergraphPartitionNumber> {
    let m = k.ground_size();
    if m > ORACLE_MAX_VERTICES {
        return Err(Error::TooManyVertices {
            m,
            limit: ORACLE_MAX_VERTICES,
        });
    }
    if hypergraph.is_empty() {
        return Err(Error::InvalidHypergraph("empty family".into()));
    }
    for h in hypergraph {
        if h.is_empty() {
            return Err(Error::InvalidHypergraph("members must be nonempty".into()));
        }
        k.check_subset(*h)?;
    }
    let members: HashSet<Subset> = hypergraph.iter().copied().collect();
    // blocks through the lowest unassigned vertex, drawn from the family
    let mut through: Vec<Vec<(Subset, bool)>> = vec![Vec::new(); m + 1];
    let mut sorted: Vec<Subset> = members.into_iter().collect();
    sorted.sort();
    for h in sorted {
        let v = h.min_vertex().unwrap();
        through[v].push((h, k.contains_face(h)));
    }
    let mut exists = vec![false; m + 2];
    let mut bad = vec![false; m + 2];
    fn rec(
        free: Subset,
        count: usize,
        any_face: bool,
        through: &[Vec<(Subset, bool)>],
        exists: &mut [bool],
        bad: &mut [bool],
    ) {
        let Some(v) = free.min_vertex() else {
            exists[count] = true;
            if !any_face {
                bad[count] = true;
            }
            return;
        };
        for &(h, is_face) in &through[v] {
            if h.is_subset_of(free) {
                rec(
                    free.difference(h),
                    count + 1,
                    any_face || is_face,
                    through,
                    exists,
                    bad,
                );
            }
        }
    }
    rec(Subset::full(m), 0, false, &through, &mut exists, &mut bad);

    let levels: Vec<LevelStatus> = (1..=m + 1)
        .map(|nu| match (exists[nu], bad[nu]) {
            (false, _) => LevelStatus::Vacuous,
            (true, false) => LevelStatus::Holds,
            (true, true) => LevelStatus::Fails,
        })
        .collect();
    let nu = levels
        .iter()
        .position(|s| *s != LevelStatus::Fails)
        .map(|i| i + 1)
        .unwrap_or(m + 2);
    let stable_nu = levels
        .iter()
        .rposition(|s| *s == LevelStatus::Fails)
        .map(|i| i + 2)
        .unwrap_or(1);
    let vacuous_levels = levels
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == LevelStatus::Vacuous)
        .map(|(i, _)| i + 1)
        .collect();
    Ok(HypergraphPartitionNumber {
        nu,
        stable_nu,
        vacuous_levels,
        levels,
    })
}
