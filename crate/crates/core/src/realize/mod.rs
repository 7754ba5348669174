//! Linear and weighted-hypergraph realizability of unavoidable complexes.
//!
//! A complex is linearly realizable for `r` when `K = K_{μ≤1/r}` for a
//! probability measure `μ`. That is a strict-inequality system (faces at most
//! `1/r`, non-faces above it), decided here by maximizing a uniform margin `ε`
//! on the non-face rows with an exact simplex: the system is solvable iff the
//! optimal margin is positive.

pub mod lp;
mod measures;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use self::lp::{LinearProgram, LpOutcome, Relation};
pub use self::measures::{
    geometric_measure, wh_measure, GeometricMeasure, SetFunctionTable, SuperadditiveMeasure,
    WeightedHypergraph, MAX_FAMILY_SIZE,
};
use crate::complex::{sublevel_complex, Measure, SimplicialComplex, TABLE_SWEEP_LIMIT};
use crate::error::{Error, Result};
use crate::partition::is_r_unavoidable;
use crate::subset::Subset;

/// Default cap on `#facets + #minimal non-faces` fed to the LP.
pub const DEFAULT_CONSTRAINT_CAP: usize = 100_000;

/// Outcome of a realizability LP.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LpVerdict {
    pub feasible: bool,
    /// Probability measure attaining the margin; present whenever the margin
    /// LP itself was feasible.
    pub witness: Option<Measure>,
    /// Optimal margin `ε*`; absent when even `ε = -∞` is infeasible (the
    /// face constraints alone cannot be met) or the LP was skipped.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub margin: Option<BigRational>,
    pub infeasibility_note: Option<String>,
}

fn serialize_opt_rational<S: serde::Serializer>(
    v: &Option<BigRational>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => serializer.serialize_str(&x.to_string()),
        None => serializer.serialize_none(),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LpOptions {
    pub constraint_cap: usize,
    /// Rows added per constraint-generation round, per family.
    pub batch: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            constraint_cap: DEFAULT_CONSTRAINT_CAP,
            batch: 64,
        }
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Which family a generated LP row came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Row {
    Total,
    MarginCap,
    Facet(Subset),
    Nonface(Subset),
}

struct MarginLp<'a> {
    m: usize,
    threshold: BigRational,
    facets: &'a [Subset],
    nonfaces: &'a [Subset],
}

enum MarginOutcome {
    Solved {
        alpha: Vec<BigRational>,
        margin: BigRational,
        rows: Vec<Row>,
        duals: Vec<BigRational>,
    },
    Infeasible {
        rows: Vec<Row>,
        farkas: Vec<BigRational>,
    },
}

impl MarginLp<'_> {
    /// Variables `α_1..α_m` and `e = ε + 1`, all non-negative:
    /// `Σα = 1`, `μ(F) ≤ 1/r`, `μ(N) - e ≥ 1/r - 1`, `e ≤ 2 - 1/r`.
    ///
    /// Rows are added lazily: solve on the active rows, add the most violated
    /// ones, repeat. A relaxation that is optimal and satisfies every row is
    /// optimal for the full problem, and an infeasible relaxation certifies
    /// infeasibility.
    fn solve(&self, batch: usize) -> MarginOutcome {
        let n = self.m + 1;
        let one = BigRational::one();
        let mut lp = LinearProgram::new(n);
        lp.objective[self.m] = one.clone();
        let mut rows = Vec::new();

        let mut total = vec![one.clone(); n];
        total[self.m] = BigRational::zero();
        lp.add(total, Relation::Eq, one.clone());
        rows.push(Row::Total);
        let mut cap = vec![BigRational::zero(); n];
        cap[self.m] = one.clone();
        lp.add(cap, Relation::Le, q(2, 1) - &self.threshold);
        rows.push(Row::MarginCap);

        let mut active_f = vec![false; self.facets.len()];
        let mut active_n = vec![false; self.nonfaces.len()];
        for (on, &f) in active_f.iter_mut().zip(self.facets.iter()).take(batch) {
            *on = true;
            self.push_facet(&mut lp, &mut rows, f);
        }
        for (on, &n) in active_n.iter_mut().zip(self.nonfaces.iter()).take(batch) {
            *on = true;
            self.push_nonface(&mut lp, &mut rows, n);
        }

        loop {
            let (x, duals) = match lp.solve() {
                LpOutcome::Optimal { x, duals, .. } => (x, duals),
                LpOutcome::Infeasible { farkas } => {
                    return MarginOutcome::Infeasible { rows, farkas }
                }
                LpOutcome::Unbounded => unreachable!("margin is capped and Σα = 1"),
            };
            let alpha = &x[..self.m];
            let margin = &x[self.m] - &one;
            let mass = |s: &Subset| -> BigRational { s.iter().map(|v| &alpha[v - 1]).sum() };

            let mut viol_f: Vec<(BigRational, usize)> = (0..self.facets.len())
                .filter(|&i| !active_f[i])
                .filter_map(|i| {
                    let excess = mass(&self.facets[i]) - &self.threshold;
                    excess.is_positive().then_some((excess, i))
                })
                .collect();
            let mut viol_n: Vec<(BigRational, usize)> = (0..self.nonfaces.len())
                .filter(|&i| !active_n[i])
                .filter_map(|i| {
                    let deficit = &self.threshold + &margin - mass(&self.nonfaces[i]);
                    deficit.is_positive().then_some((deficit, i))
                })
                .collect();
            if viol_f.is_empty() && viol_n.is_empty() {
                return MarginOutcome::Solved {
                    alpha: alpha.to_vec(),
                    margin,
                    rows,
                    duals,
                };
            }
            // most violated first, canonical order on ties
            viol_f.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            viol_n.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            for &(_, i) in viol_f.iter().take(batch) {
                active_f[i] = true;
                self.push_facet(&mut lp, &mut rows, self.facets[i]);
            }
            for &(_, i) in viol_n.iter().take(batch) {
                active_n[i] = true;
                self.push_nonface(&mut lp, &mut rows, self.nonfaces[i]);
            }
        }
    }

    fn indicator(&self, s: Subset) -> Vec<BigRational> {
        let mut row = vec![BigRational::zero(); self.m + 1];
        for v in s {
            row[v - 1] = BigRational::one();
        }
        row
    }

    fn push_facet(&self, lp: &mut LinearProgram, rows: &mut Vec<Row>, f: Subset) {
        lp.add(self.indicator(f), Relation::Le, self.threshold.clone());
        rows.push(Row::Facet(f));
    }

    fn push_nonface(&self, lp: &mut LinearProgram, rows: &mut Vec<Row>, nf: Subset) {
        let mut row = self.indicator(nf);
        row[self.m] = -BigRational::one();
        lp.add(row, Relation::Ge, &self.threshold - BigRational::one());
        rows.push(Row::Nonface(nf));
    }
}

fn describe_multipliers(rows: &[Row], mult: &[BigRational]) -> String {
    const SHOWN: usize = 24;
    let nonzero: Vec<String> = rows
        .iter()
        .zip(mult)
        .filter(|(_, y)| !y.is_zero())
        .map(|(row, y)| match row {
            Row::Total => format!("sum=1: {y}"),
            Row::MarginCap => format!("margin cap: {y}"),
            Row::Facet(f) => format!("facet {f}: {y}"),
            Row::Nonface(n) => format!("nonface {n}: {y}"),
        })
        .collect();
    let mut out = nonzero
        .iter()
        .take(SHOWN)
        .cloned()
        .collect::<Vec<_>>()
        .join("; ");
    if nonzero.len() > SHOWN {
        out.push_str(&format!("; … ({} more)", nonzero.len() - SHOWN));
    }
    out
}

fn check_r(r: usize) -> Result<BigRational> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!(
            "r must be at least 2, got {r}"
        )));
    }
    Ok(q(1, r as i64))
}

fn run_margin_lp(
    k: &SimplicialComplex,
    threshold: BigRational,
    facets: &[Subset],
    options: LpOptions,
) -> Result<LpVerdict> {
    let needed = facets.len() + k.min_nonfaces().len();
    if needed > options.constraint_cap {
        return Err(Error::BudgetExceeded {
            what: "LP constraint count",
            needed: needed as u128,
            budget: options.constraint_cap as u128,
        });
    }
    let lp = MarginLp {
        m: k.ground_size(),
        threshold: threshold.clone(),
        facets,
        nonfaces: k.min_nonfaces(),
    };
    Ok(match lp.solve(options.batch.max(1)) {
        MarginOutcome::Infeasible { rows, farkas } => LpVerdict {
            feasible: false,
            witness: None,
            margin: None,
            infeasibility_note: Some(format!(
                "face constraints mu(F) <= {threshold} cannot hold with total mass 1; Farkas multipliers: {}",
                describe_multipliers(&rows, &farkas)
            )),
        },
        MarginOutcome::Solved { alpha, margin, rows, duals } => {
            let witness = Measure::new(alpha).expect("LP solution is a probability vector");
            let feasible = margin.is_positive();
            if feasible {
                verify_witness(k, &witness, &threshold, facets)?;
            }
            let infeasibility_note = (!feasible).then(|| {
                format!(
                    "optimal margin {margin} <= 0, so no measure separates faces from non-faces; dual multipliers: {}",
                    describe_multipliers(&rows, &duals)
                )
            });
            LpVerdict { feasible, witness: Some(witness), margin: Some(margin), infeasibility_note }
        }
    })
}

/// Re-checks an LP witness by exact evaluation on every facet and minimal
/// non-face.
fn verify_witness(
    k: &SimplicialComplex,
    mu: &Measure,
    threshold: &BigRational,
    facets: &[Subset],
) -> Result<()> {
    let bad_facet = facets.iter().find(|f| mu.eval(**f) > *threshold);
    let bad_nonface = k.min_nonfaces().iter().find(|n| mu.eval(**n) <= *threshold);
    match (bad_facet, bad_nonface) {
        (None, None) => Ok(()),
        (f, n) => Err(Error::InvalidMeasure(format!(
            "LP witness failed re-verification (facet {f:?}, non-face {n:?})"
        ))),
    }
}

/// Decides whether `K = K_{μ≤1/r}` for some probability measure `μ`.
///
/// Complexes that are not r-unavoidable cannot be of this form and are
/// answered without solving anything.
pub fn is_linearly_realizable(k: &SimplicialComplex, r: usize) -> Result<LpVerdict> {
    is_linearly_realizable_with(k, r, LpOptions::default())
}

pub fn is_linearly_realizable_with(
    k: &SimplicialComplex,
    r: usize,
    options: LpOptions,
) -> Result<LpVerdict> {
    let threshold = check_r(r)?;
    let verdict = is_r_unavoidable(k, r)?;
    if !verdict.unavoidable {
        let blocks = verdict.witness.map(|w| w.blocks).unwrap_or_default();
        let shown: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
        return Ok(LpVerdict {
            feasible: false,
            witness: None,
            margin: None,
            infeasibility_note: Some(format!(
                "not {r}-unavoidable: partition {} has no face block",
                shown.join(" | ")
            )),
        });
    }
    run_margin_lp(k, threshold, k.facets(), options)
}

/// Looks for a probability measure with `μ(N) > 1/r` on every minimal
/// non-face, i.e. a linearly realizable r-unavoidable `K_{μ≤1/r} ⊆ K`.
pub fn linear_subcomplex_witness(k: &SimplicialComplex, r: usize) -> Result<LpVerdict> {
    linear_subcomplex_witness_with(k, r, LpOptions::default())
}

pub fn linear_subcomplex_witness_with(
    k: &SimplicialComplex,
    r: usize,
    options: LpOptions,
) -> Result<LpVerdict> {
    let threshold = check_r(r)?;
    run_margin_lp(k, threshold, &[], options)
}

/// The sub-level complex `K_{ν≤α/r}` with `α = ν([m])`; r-unavoidable for
/// every superadditive `ν`.
pub fn superadditive_sublevel<M: SuperadditiveMeasure + ?Sized>(
    nu: &M,
    r: usize,
) -> Result<SimplicialComplex> {
    let r_inv = check_r(r)?;
    let table = nu.table()?;
    let alpha = table.total();
    if !alpha.is_positive() {
        return Err(Error::ZeroTotal);
    }
    let k = table.sublevel(&(alpha * r_inv), false)?;
    debug_assert!(is_r_unavoidable(&k, r)?.unavoidable);
    Ok(k)
}

/// `⌈α/β⌉`, an upper bound for `π(K_{ν≤β})` when `ν([m]) = α`.
pub fn pi_upper_bound(alpha: &BigRational, beta: &BigRational) -> Result<u64> {
    if !beta.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "beta must be positive, got {beta}"
        )));
    }
    if beta > alpha {
        return Err(Error::InvalidArgument(format!(
            "beta = {beta} exceeds alpha = {alpha}"
        )));
    }
    let ratio = (alpha / beta).ceil().to_integer();
    u64::try_from(ratio).map_err(|_| Error::InvalidArgument("ratio too large".into()))
}

/// Tests `K = K_{ν_ω≤α/r}` with `α = ν_ω([m])` over all subsets.
pub fn wh_realization_check(
    k: &SimplicialComplex,
    r: usize,
    f: &WeightedHypergraph,
) -> Result<bool> {
    let r_inv = check_r(r)?;
    if f.ground_size() != k.ground_size() {
        return Err(Error::GroundSetMismatch {
            expected: k.ground_size(),
            got: f.ground_size(),
        });
    }
    let table = f.table()?;
    let alpha = table.total();
    if !alpha.is_positive() {
        return Err(Error::ZeroTotal);
    }
    Ok(table.sublevel(&(alpha * r_inv), false)? == *k)
}

/// The canonical realization of a self-dual complex: every nonempty subset,
/// weighted 1 when it is a non-face and 0 when it is a face.
pub fn selfdual_wh_realization(k: &SimplicialComplex) -> Result<WeightedHypergraph> {
    if !k.is_self_dual() {
        return Err(Error::NotSelfDual);
    }
    let m = k.ground_size();
    if m > TABLE_SWEEP_LIMIT || (1usize << m) - 1 > MAX_FAMILY_SIZE {
        return Err(Error::BudgetExceeded {
            what: "hypergraph family size",
            needed: (1u128 << m) - 1,
            budget: MAX_FAMILY_SIZE as u128,
        });
    }
    let mut members = Vec::with_capacity((1 << m) - 1);
    let mut omega = Vec::with_capacity((1 << m) - 1);
    for bits in 1..(1u64 << m) {
        let a = Subset::from_bits(bits);
        members.push(a);
        omega.push(if k.contains_face(a) {
            BigRational::zero()
        } else {
            BigRational::one()
        });
    }
    WeightedHypergraph::new(m, members, omega)
}

/// Drops zero-weight members; `ν_ω` is unchanged.
pub fn prune_zero_weights(f: &WeightedHypergraph) -> WeightedHypergraph {
    let (members, omega): (Vec<Subset>, Vec<BigRational>) = f
        .members()
        .iter()
        .zip(f.omega())
        .filter(|(_, w)| !w.is_zero())
        .map(|(b, w)| (*b, w.clone()))
        .unzip();
    WeightedHypergraph::new(f.ground_size(), members, omega).expect("subfamily of a valid family")
}

/// `K_{μ≤1/r}` for a witness measure.
pub fn witness_complex(mu: &Measure, r: usize) -> Result<SimplicialComplex> {
    let r_inv = check_r(r)?;
    sublevel_complex(&mu.normalized(), &r_inv, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::k_subsets;

    fn skeleton(k: usize, m: usize) -> SimplicialComplex {
        SimplicialComplex::from_facets(m, k_subsets(m, k + 1)).unwrap()
    }

    fn s(v: &[usize]) -> Subset {
        Subset::from_vertices(v.iter().copied())
    }

    #[test]
    fn points_five_is_linear_for_three() {
        let k = skeleton(0, 5);
        let v = is_linearly_realizable(&k, 3).unwrap();
        assert!(v.feasible);
        let mu = v.witness.unwrap();
        assert_eq!(witness_complex(&mu, 3).unwrap(), k);
        // uniform also works: pairs weigh 2/5 > 1/3
        assert_eq!(
            witness_complex(&Measure::uniform(5).unwrap(), 3).unwrap(),
            k
        );
    }

    #[test]
    fn vkf_family_is_linear() {
        for n in 1..=3 {
            let k = skeleton(n, 2 * n + 3);
            let v = is_linearly_realizable(&k, 2).unwrap();
            assert!(v.feasible, "n = {n}");
            assert_eq!(witness_complex(&v.witness.unwrap(), 2).unwrap(), k);
            assert_eq!(
                witness_complex(&Measure::uniform(2 * n + 3).unwrap(), 2).unwrap(),
                k
            );
        }
    }

    #[test]
    fn non_unavoidable_short_circuits() {
        let v = is_linearly_realizable(&skeleton(0, 6), 3).unwrap();
        assert!(!v.feasible);
        assert!(v.margin.is_none());
        assert!(v.infeasibility_note.unwrap().contains("not 3-unavoidable"));
    }

    #[test]
    fn full_simplex_face_rows_are_infeasible() {
        let v = is_linearly_realizable(&SimplicialComplex::full_simplex(3).unwrap(), 2).unwrap();
        assert!(!v.feasible);
        assert!(v.margin.is_none());
        assert!(v.infeasibility_note.unwrap().contains("Farkas"));
        let w = linear_subcomplex_witness(&SimplicialComplex::full_simplex(3).unwrap(), 2).unwrap();
        assert!(w.feasible);
    }

    #[test]
    fn small_batches_reach_the_same_optimum() {
        let k = skeleton(2, 7);
        let a = is_linearly_realizable(&k, 2).unwrap();
        let b = is_linearly_realizable_with(
            &k,
            2,
            LpOptions {
                batch: 1,
                ..LpOptions::default()
            },
        )
        .unwrap();
        assert_eq!(a.margin, b.margin);
        assert!(a.feasible && b.feasible);
    }

    #[test]
    fn constraint_cap() {
        let k = skeleton(1, 8);
        let err = is_linearly_realizable_with(
            &k,
            3,
            LpOptions {
                constraint_cap: 10,
                batch: 8,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn fano_plane_is_not_linear() {
        // faces are the sets containing no line; summing μ over the seven
        // line complements gives 4 ≤ 7/2
        let lines = [
            [1, 2, 3],
            [1, 4, 5],
            [1, 6, 7],
            [2, 4, 6],
            [2, 5, 7],
            [3, 4, 7],
            [3, 5, 6],
        ];
        let lines: Vec<Subset> = lines.iter().map(|l| s(l)).collect();
        let k =
            SimplicialComplex::from_face_predicate(7, |a| lines.iter().all(|l| !l.is_subset_of(a)))
                .unwrap();
        assert!(k.is_self_dual());
        let v = is_linearly_realizable(&k, 2).unwrap();
        assert!(!v.feasible);
        assert!(v.margin.is_none());
        assert!(v.infeasibility_note.unwrap().contains("Farkas"));
        let f = selfdual_wh_realization(&k).unwrap();
        assert!(wh_realization_check(&k, 2, &f).unwrap());
    }

    #[test]
    fn pi_bounds() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(pi_upper_bound(&q(1, 1), &q(1, 3)).unwrap(), 3);
        assert_eq!(pi_upper_bound(&q(1, 1), &q(1, 2)).unwrap(), 2);
        assert_eq!(pi_upper_bound(&q(5, 2), &q(3, 4)).unwrap(), 4);
        assert!(pi_upper_bound(&q(1, 1), &q(0, 1)).is_err());
        assert!(pi_upper_bound(&q(1, 1), &q(2, 1)).is_err());
    }

    #[test]
    fn selfdual_realization() {
        let k = skeleton(1, 5);
        let f = selfdual_wh_realization(&k).unwrap();
        assert_eq!(f.len(), 31);
        assert_eq!(wh_measure(&f, Subset::full(5)), BigRational::one());
        assert!(wh_realization_check(&k, 2, &f).unwrap());
        let pruned = prune_zero_weights(&f);
        assert_eq!(pruned.len(), 16);
        assert!(pruned.members().iter().all(|b| !k.contains_face(*b)));
        assert!(wh_realization_check(&k, 2, &pruned).unwrap());
        assert_eq!(
            selfdual_wh_realization(&skeleton(0, 5)),
            Err(Error::NotSelfDual)
        );
    }

    #[test]
    fn wh_check_examples() {
        let k = skeleton(0, 5);
        let v = is_linearly_realizable(&k, 3).unwrap();
        let f = WeightedHypergraph::singletons(v.witness.unwrap().weights()).unwrap();
        assert!(wh_realization_check(&k, 3, &f).unwrap());

        let top =
            WeightedHypergraph::new(5, vec![Subset::full(5)], vec![BigRational::one()]).unwrap();
        assert!(!wh_realization_check(&k, 3, &top).unwrap());

        let zero = WeightedHypergraph::new(5, vec![s(&[1])], vec![BigRational::zero()]).unwrap();
        assert_eq!(wh_realization_check(&k, 3, &zero), Err(Error::ZeroTotal));
    }

    #[test]
    fn prune_edge_cases() {
        let zero =
            WeightedHypergraph::new(3, vec![s(&[1]), s(&[2, 3])], vec![BigRational::zero(); 2])
                .unwrap();
        let p = prune_zero_weights(&zero);
        assert!(p.is_empty());
        for a in Subset::full(3).subsets() {
            assert!(wh_measure(&p, a).is_zero());
        }
        let pos =
            WeightedHypergraph::singletons(&[BigRational::one(), BigRational::one()]).unwrap();
        assert_eq!(prune_zero_weights(&pos), pos);
    }

    #[test]
    fn geometric_min_of_uniform_and_counting() {
        let mu1 = Measure::uniform(6).unwrap();
        let mu2 = Measure::counting_on(6, s(&[1, 2, 3])).unwrap();
        let g = GeometricMeasure::new(vec![mu1.clone(), mu2.clone()]).unwrap();
        let k = superadditive_sublevel(&g, 2).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        let k1 = sublevel_complex(&mu1, &half, false).unwrap();
        let k2 = sublevel_complex(&mu2, &half, false).unwrap();
        for a in Subset::full(6).subsets() {
            assert_eq!(
                k.contains_face(a),
                k1.contains_face(a) || k2.contains_face(a)
            );
        }
        let w = linear_subcomplex_witness(&k, 2).unwrap();
        assert!(w.feasible);
        assert!(witness_complex(&w.witness.unwrap(), 2)
            .unwrap()
            .is_subcomplex_of(&k));
    }

    #[test]
    fn singleton_hypergraph_matches_sublevel() {
        let m = 5;
        let uniform = vec![BigRational::new(1.into(), (m as i64).into()); m];
        let f = WeightedHypergraph::singletons(&uniform).unwrap();
        for r in 2..=4 {
            let k = superadditive_sublevel(&f, r).unwrap();
            let expected = sublevel_complex(
                &Measure::uniform(m).unwrap(),
                &BigRational::new(1.into(), (r as i64).into()),
                false,
            )
            .unwrap();
            assert_eq!(k, expected);
        }
    }

    #[test]
    fn selfdual_sublevel_recovers_complex() {
        let k = skeleton(1, 5);
        let f = selfdual_wh_realization(&k).unwrap();
        assert_eq!(superadditive_sublevel(&f, 2).unwrap(), k);
    }
}
