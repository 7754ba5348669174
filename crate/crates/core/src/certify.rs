//! Non-embeddability certificates for unavoidable complexes and their joins.
//!
//! The topological statements need `r` to be a prime power and every input
//! complex to be r-unavoidable; both are recomputed here rather than taken
//! on trust, after which only an integer inequality remains.

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::partition::{
    is_r_unavoidable, is_rs_unavoidable, max_disjoint_min_nonfaces, PartitionWitness,
};

/// `r = p^k` with `p` prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimePower {
    pub r: u64,
    pub p: u64,
    pub k: u32,
}

/// Largest `r` factored by trial division.
pub const PRIME_POWER_LIMIT: u64 = 1 << 32;

/// A certificate that could not be issued because a hypothesis of the
/// underlying theorem is unavailable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Abstention {
    pub reason: String,
}

impl std::fmt::Display for Abstention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.reason)
    }
}

impl std::error::Error for Abstention {}

fn abstain(reason: impl Into<String>) -> Abstention {
    Abstention {
        reason: reason.into(),
    }
}

pub fn prime_power(r: u64) -> Result<PrimePower, Abstention> {
    if r < 2 {
        return Err(abstain(format!(
            "r = {r} is not a prime power (r must be at least 2)"
        )));
    }
    if r > PRIME_POWER_LIMIT {
        return Err(abstain(format!(
            "r = {r} exceeds the factoring limit {PRIME_POWER_LIMIT}"
        )));
    }
    let mut p = 2;
    while p * p <= r && !r.is_multiple_of(p) {
        p += 1;
    }
    if !r.is_multiple_of(p) {
        p = r;
    }
    let (mut rest, mut k) = (r, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    if rest != 1 {
        return Err(abstain(format!(
            "r = {r} is not a prime power; the non-embeddability theorems need r = p^k and can fail otherwise"
        )));
    }
    Ok(PrimePower { r, p, k })
}

fn hypotheses(k: &SimplicialComplex, r: usize, s: Option<usize>) -> Result<(), Abstention> {
    prime_power(r as u64)?;
    let verdict = match s {
        None => is_r_unavoidable(k, r),
        Some(s) => is_rs_unavoidable(k, r, s),
    }
    .map_err(|e| abstain(e.to_string()))?;
    if !verdict.unavoidable {
        let what = match s {
            None => format!("{r}-unavoidable"),
            Some(s) => format!("({r},{s})-unavoidable"),
        };
        return Err(abstain(format!("complex is not {what}")));
    }
    Ok(())
}

/// Lower bound `m - r` (or `m - r + s - 1`) for the index of the r-fold
/// deleted join of an r-unavoidable (or (r,s)-unavoidable) complex.
pub fn index_bound_deleted_join(
    k: &SimplicialComplex,
    r: usize,
    s: Option<usize>,
) -> Result<i64, Abstention> {
    hypotheses(k, r, s)?;
    let (m, r) = (k.ground_size() as i64, r as i64);
    Ok(m - r + s.map_or(0, |s| s as i64 - 1))
}

/// Lower bound `m - 2r + 1` (or `m - 2r + s`) for the index of the r-fold
/// deleted product.
pub fn index_bound_deleted_product(
    k: &SimplicialComplex,
    r: usize,
    s: Option<usize>,
) -> Result<i64, Abstention> {
    hypotheses(k, r, s)?;
    let (m, r) = (k.ground_size() as i64, r as i64);
    Ok(m - 2 * r + s.map_or(1, |s| s as i64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    JoinNonembeddable,
    SingleNonembeddable,
    IndexJoinBound,
    IndexProductBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    NotCertified,
    Abstained,
}

/// Recomputed unavoidability data for one input complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorSummary {
    pub m: usize,
    pub pi: usize,
    pub max_disjoint_nonfaces: usize,
    pub unavoidable: bool,
    /// Partition with no face block, present when `unavoidable` is false.
    pub witness: Option<PartitionWitness>,
}

impl FactorSummary {
    fn new(k: &SimplicialComplex, r: usize) -> Self {
        let packing = max_disjoint_min_nonfaces(k);
        let verdict = is_r_unavoidable(k, r).expect("r checked by caller");
        FactorSummary {
            m: k.ground_size(),
            pi: packing.size + 1,
            max_disjoint_nonfaces: packing.size,
            unavoidable: verdict.unavoidable,
            witness: verdict.witness,
        }
    }
}

/// The equivalent two-colour form `d ≤ Σm_i - s - 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchildForm {
    pub d: i64,
    pub bound: i64,
    pub holds: bool,
}

/// `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
    pub schild: Option<SchildForm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub inputs: Vec<FactorSummary>,
    pub r: usize,
    pub prime_power: Option<PrimePower>,
    pub d: Option<usize>,
    pub s: Option<usize>,
    pub inequality: Option<Inequality>,
    pub bound: Option<i64>,
    pub verdict: Verdict,
    pub reasons: Vec<String>,
    pub conclusion: Option<String>,
}

impl Certificate {
    fn abstained(
        kind: CertificateKind,
        r: usize,
        d: Option<usize>,
        s: Option<usize>,
        reason: String,
    ) -> Self {
        Certificate {
            kind,
            inputs: Vec::new(),
            r,
            prime_power: None,
            d,
            s,
            inequality: None,
            bound: None,
            verdict: Verdict::Abstained,
            reasons: vec![reason],
            conclusion: None,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }
}

fn summarize(factors: &[SimplicialComplex], r: usize) -> (Vec<FactorSummary>, Vec<String>) {
    let inputs: Vec<FactorSummary> = factors
        .par_iter()
        .map(|k| FactorSummary::new(k, r))
        .collect();
    let reasons = inputs
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.unavoidable)
        .map(|(i, f)| {
            format!(
                "factor {} on {} vertices is not {r}-unavoidable: pi = {} > {r}",
                i + 1,
                f.m,
                f.pi
            )
        })
        .collect();
    (inputs, reasons)
}

/// The join `K_1 * … * K_s` has no map to `R^d` without a global r-fold
/// point when `r = p^k`, each `K_i` is r-unavoidable and
/// `(r-1)(d+s+1)+1 ≤ m_1 + … + m_s`.
pub fn certify_join_nonembeddable(
    factors: &[SimplicialComplex],
    r: usize,
    d: usize,
) -> Certificate {
    let kind = CertificateKind::JoinNonembeddable;
    let s = factors.len();
    if s == 0 {
        return Certificate::abstained(kind, r, Some(d), Some(0), "no factors given".into());
    }
    let pp = match prime_power(r as u64) {
        Ok(pp) => pp,
        Err(a) => return Certificate::abstained(kind, r, Some(d), Some(s), a.reason),
    };
    let (inputs, mut reasons) = summarize(factors, r);
    let total: i64 = inputs.iter().map(|f| f.m as i64).sum();
    let (ri, di, si) = (r as i64, d as i64, s as i64);
    let lhs = (ri - 1) * (di + si + 1) + 1;
    let holds = lhs <= total;
    let schild = (r == 2).then(|| {
        let bound = total - si - 2;
        let form = SchildForm {
            d: di,
            bound,
            holds: di <= bound,
        };
        assert_eq!(
            form.holds, holds,
            "two-colour form disagrees with the general inequality"
        );
        form
    });
    if !holds {
        reasons.push(format!(
            "inequality fails: (r-1)(d+s+1)+1 = {lhs} > {total} = sum of m_i"
        ));
    }
    let verdict = if reasons.is_empty() {
        Verdict::Certified
    } else {
        Verdict::NotCertified
    };
    let conclusion = (verdict == Verdict::Certified).then(|| {
        format!(
            "every continuous map of the join of the {s} factors to R^{d} has {r} pairwise vertex-disjoint faces whose images share a point"
        )
    });
    Certificate {
        kind,
        inputs,
        r,
        prime_power: Some(pp),
        d: Some(d),
        s: Some(s),
        inequality: Some(Inequality {
            lhs,
            rhs: total,
            holds,
            schild,
        }),
        bound: None,
        verdict,
        reasons,
        conclusion,
    }
}

/// An r-unavoidable `K` on `m ≥ (r-1)(d+2)+1` vertices has, for every
/// continuous map to `R^d`, `r` pairwise disjoint faces with a common image
/// point.
pub fn certify_single_nonembeddable(k: &SimplicialComplex, r: usize, d: usize) -> Certificate {
    let kind = CertificateKind::SingleNonembeddable;
    let pp = match prime_power(r as u64) {
        Ok(pp) => pp,
        Err(a) => return Certificate::abstained(kind, r, Some(d), None, a.reason),
    };
    let (inputs, mut reasons) = summarize(std::slice::from_ref(k), r);
    let m = k.ground_size() as i64;
    let lhs = (r as i64 - 1) * (d as i64 + 2) + 1;
    let holds = lhs <= m;
    if !holds {
        reasons.push(format!("inequality fails: (r-1)(d+2)+1 = {lhs} > {m} = m"));
    }
    let verdict = if reasons.is_empty() {
        Verdict::Certified
    } else {
        Verdict::NotCertified
    };
    let conclusion = (verdict == Verdict::Certified).then(|| {
        format!("every continuous map of the complex to R^{d} has {r} pairwise disjoint faces whose images share a point")
    });
    Certificate {
        kind,
        inputs,
        r,
        prime_power: Some(pp),
        d: Some(d),
        s: None,
        inequality: Some(Inequality {
            lhs,
            rhs: m,
            holds,
            schild: None,
        }),
        bound: None,
        verdict,
        reasons,
        conclusion,
    }
}

/// Wraps [`index_bound_deleted_join`] or [`index_bound_deleted_product`] in
/// a certificate.
pub fn certify_index_bound(
    k: &SimplicialComplex,
    r: usize,
    s: Option<usize>,
    product: bool,
) -> Certificate {
    let kind = if product {
        CertificateKind::IndexProductBound
    } else {
        CertificateKind::IndexJoinBound
    };
    let bound = if product {
        index_bound_deleted_product(k, r, s)
    } else {
        index_bound_deleted_join(k, r, s)
    };
    match bound {
        Err(a) => {
            let mut c = Certificate::abstained(kind, r, None, s, a.reason);
            if r >= 2 {
                c.prime_power = prime_power(r as u64).ok();
                c.inputs = summarize(std::slice::from_ref(k), r).0;
            }
            c
        }
        Ok(b) => Certificate {
            kind,
            inputs: summarize(std::slice::from_ref(k), r).0,
            r,
            prime_power: prime_power(r as u64).ok(),
            d: None,
            s,
            inequality: None,
            bound: Some(b),
            verdict: Verdict::Certified,
            reasons: Vec::new(),
            conclusion: Some(format!(
                "index of the {r}-fold deleted {} is at least {b}",
                if product { "product" } else { "join" }
            )),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{points, skeleton};
    use crate::partition::partition_number;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(4), Ok(PrimePower { r: 4, p: 2, k: 2 }));
        assert_eq!(prime_power(3), Ok(PrimePower { r: 3, p: 3, k: 1 }));
        assert_eq!(prime_power(2), Ok(PrimePower { r: 2, p: 2, k: 1 }));
        assert_eq!(prime_power(243), Ok(PrimePower { r: 243, p: 3, k: 5 }));
        assert_eq!(prime_power(4_294_967_291).unwrap().p, 4_294_967_291);
        assert!(prime_power(6).is_err());
        assert!(prime_power(1).is_err());
        assert!(prime_power(0).is_err());
        assert!(prime_power(PRIME_POWER_LIMIT + 1).is_err());
        let powers: Vec<u64> = (2..=32).filter(|&r| prime_power(r).is_ok()).collect();
        assert_eq!(
            powers,
            [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32]
        );
    }

    #[test]
    fn join_index_bounds() {
        for n in 1..=3 {
            assert_eq!(
                index_bound_deleted_join(&skeleton(n, 2 * n + 3).unwrap(), 2, None),
                Ok(2 * n as i64 + 1)
            );
        }
        assert_eq!(
            index_bound_deleted_join(&points(5).unwrap(), 3, None),
            Ok(2)
        );
        assert_eq!(
            index_bound_deleted_join(&points(4).unwrap(), 3, Some(2)),
            Ok(2)
        );
        assert!(index_bound_deleted_join(&points(6).unwrap(), 3, None).is_err());
        assert!(index_bound_deleted_join(&points(5).unwrap(), 6, None).is_err());
    }

    #[test]
    fn product_index_bounds() {
        assert_eq!(
            index_bound_deleted_product(&skeleton(1, 7).unwrap(), 3, None),
            Ok(2)
        );
        let r6 = index_bound_deleted_product(&skeleton(1, 7).unwrap(), 6, None).unwrap_err();
        assert!(r6.reason.contains("not a prime power"));
        // m = (r-1)(d+2)+1 gives (r-1)d
        for (r, d) in [(2, 2), (3, 1), (3, 2), (2, 4)] {
            let m = (r - 1) * (d + 2) + 1;
            let k = skeleton(m / r, m).unwrap();
            if is_r_unavoidable(&k, r).unwrap().unavoidable {
                assert_eq!(
                    index_bound_deleted_product(&k, r, None),
                    Ok(((r - 1) * d) as i64)
                );
            }
        }
    }

    #[test]
    fn index_bound_at_partition_number() {
        for m in 2..=8 {
            for seed in 0..10 {
                let k = crate::generators::random_complex(m, 3, seed).unwrap();
                let pi = partition_number(&k);
                if pi >= 2 && prime_power(pi as u64).is_ok() {
                    assert_eq!(
                        index_bound_deleted_join(&k, pi, None),
                        Ok(m as i64 - pi as i64)
                    );
                }
            }
        }
    }

    #[test]
    fn three_point_sets_in_three_space() {
        let p5 = points(5).unwrap();
        let c = certify_join_nonembeddable(&[p5.clone(), p5.clone(), p5], 3, 3);
        assert_eq!(c.verdict, Verdict::Certified);
        let ineq = c.inequality.unwrap();
        assert_eq!((ineq.lhs, ineq.rhs), (15, 15));
        assert!(c.inputs.iter().all(|f| f.unavoidable && f.pi == 3));
    }

    #[test]
    fn almost_embeddable_family_is_never_certified() {
        let p4 = points(4).unwrap();
        for n in 1..=8 {
            let pn = points(n).unwrap();
            let c = certify_join_nonembeddable(&[p4.clone(), pn.clone(), pn], 3, 3);
            assert_eq!(c.verdict, Verdict::NotCertified, "n = {n}");
            let ineq = c.inequality.as_ref().unwrap();
            if n <= 5 {
                assert!(!ineq.holds);
                assert_eq!(c.reasons.len(), 1);
                assert!(c.reasons[0].starts_with("inequality fails"));
            } else {
                assert!(ineq.holds);
                assert_eq!(c.reasons.len(), 2);
                assert!(c.reasons.iter().all(|r| r.contains("not 3-unavoidable")));
            }
        }
    }

    #[test]
    fn van_kampen_flores() {
        for n in 1..=3 {
            let c = certify_join_nonembeddable(&[skeleton(n, 2 * n + 3).unwrap()], 2, 2 * n);
            assert!(c.is_certified(), "n = {n}");
            assert!(c.inequality.unwrap().schild.unwrap().holds);
        }
    }

    #[test]
    fn two_colour_forms_agree() {
        let factors: Vec<SimplicialComplex> =
            (1..=4).map(|m| skeleton(m / 2, m).unwrap()).collect();
        for s in 1..=factors.len() {
            for d in 0..12 {
                let c = certify_join_nonembeddable(&factors[..s], 2, d);
                let ineq = c.inequality.unwrap();
                assert_eq!(ineq.schild.unwrap().holds, ineq.holds);
            }
        }
    }

    #[test]
    fn single_complex_certificates() {
        assert!(certify_single_nonembeddable(&skeleton(1, 7).unwrap(), 3, 1).is_certified());
        let c = certify_single_nonembeddable(&points(5).unwrap(), 3, 1);
        assert_eq!(c.verdict, Verdict::NotCertified);
        assert!(c.reasons[0].contains("7 > 5"));
        assert!(certify_single_nonembeddable(&skeleton(1, 5).unwrap(), 2, 2).is_certified());
        let a = certify_single_nonembeddable(&skeleton(1, 7).unwrap(), 6, 1);
        assert_eq!(a.verdict, Verdict::Abstained);
        assert!(a.inputs.is_empty());
    }

    #[test]
    fn certified_is_monotone_in_dimension() {
        let k = skeleton(2, 7).unwrap();
        for r in [2, 3] {
            let single: Vec<bool> = (0..10)
                .map(|d| certify_single_nonembeddable(&k, r, d).is_certified())
                .collect();
            let joined: Vec<bool> = (0..10)
                .map(|d| certify_join_nonembeddable(&[k.clone(), k.clone()], r, d).is_certified())
                .collect();
            for v in [single, joined] {
                assert!(v.windows(2).all(|w| w[0] || !w[1]), "r = {r}: {v:?}");
                assert!(v[0]);
            }
        }
    }

    #[test]
    fn index_certificates() {
        let c = certify_index_bound(&points(5).unwrap(), 3, None, false);
        assert_eq!(c.bound, Some(2));
        assert_eq!(c.kind, CertificateKind::IndexJoinBound);
        let p = certify_index_bound(&points(5).unwrap(), 3, None, true);
        assert_eq!(p.bound, Some(0));
        let a = certify_index_bound(&points(6).unwrap(), 3, None, false);
        assert_eq!(a.verdict, Verdict::Abstained);
        assert_eq!(a.inputs.len(), 1);
        let js = serde_json::to_value(&c).unwrap();
        assert_eq!(js["kind"], "index_join_bound");
        assert_eq!(js["verdict"], "certified");
    }
}
