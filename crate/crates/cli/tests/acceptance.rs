//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unavoidable::complex::scx::parse_scx;
use unavoidable::generators::{random_complex, selfdual_from_weights};
use unavoidable::partition::partition_number_oracle;
use unavoidable::realize::{
    geometric_measure, linear_subcomplex_witness, wh_measure, witness_complex, SuperadditiveMeasure,
};
use unavoidable::{
    certify_join_nonembeddable, deleted_join_faces, index_bound_deleted_join, is_admissible,
    is_linearly_realizable, is_minimally_r_unavoidable, is_r_unavoidable, partition_number,
    pi_upper_bound, points, prune_zero_weights, ramsey_complex, random_selfdual,
    selfdual_wh_realization, skeleton, sublevel_complex, superadditive_sublevel,
    wh_realization_check, GeometricMeasure, GraphProperty, Measure, SimplicialComplex, Subset,
    Verdict, WeightedHypergraph,
};

type Check = Result<(), String>;
type Criterion = (&'static str, Option<u64>, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn golden_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(repo_root().join("data"))
        .expect("data directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "scx"))
        .collect();
    files.sort();
    files
}

fn load(path: &Path) -> SimplicialComplex {
    parse_scx(&std::fs::read_to_string(path).unwrap())
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn random_hypergraph(rng: &mut ChaCha8Rng, m: usize, zeros: bool) -> WeightedHypergraph {
    let count = rng.gen_range(1..=8);
    let mut members = Vec::new();
    let mut omega = Vec::new();
    for _ in 0..count {
        let b = Subset::from_bits(rng.gen_range(1..(1u64 << m)));
        if members.contains(&b) {
            continue;
        }
        let lo = if zeros { 0 } else { 1 };
        members.push(b);
        omega.push(q(rng.gen_range(lo..7), rng.gen_range(1..5)));
    }
    if omega.iter().all(|w| w.is_zero()) {
        omega[0] = BigRational::one();
    }
    WeightedHypergraph::new(m, members, omega).unwrap()
}

fn random_measure(rng: &mut ChaCha8Rng, m: usize) -> Measure {
    let mut w: Vec<i64> = (0..m).map(|_| rng.gen_range(0..6)).collect();
    if w.iter().all(|&x| x == 0) {
        w[0] = 1;
    }
    Measure::from_integers(&w).unwrap()
}

fn random_disjoint_pair(rng: &mut ChaCha8Rng, m: usize) -> (Subset, Subset) {
    let (mut a, mut b) = (Subset::EMPTY, Subset::EMPTY);
    for v in 1..=m {
        match rng.gen_range(0..3) {
            0 => a = a.with(v),
            1 => b = b.with(v),
            _ => {}
        }
    }
    (a, b)
}

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for seed in 0..200 {
        let m = rng.gen_range(1..=8);
        let k = random_complex(m, rng.gen_range(1..=6), seed).unwrap();
        let (fast, slow) = (partition_number(&k), partition_number_oracle(&k).unwrap());
        ensure!(
            fast == slow,
            "random complex {seed}: packing {fast}, oracle {slow}"
        );
    }
    let mut named: Vec<(String, SimplicialComplex)> = Vec::new();
    for path in golden_files() {
        let k = load(&path);
        if k.ground_size() <= 12 {
            named.push((path.display().to_string(), k));
        }
    }
    for n in 1..=4 {
        named.push((
            format!("skeleton({n}, {})", 2 * n + 3),
            skeleton(n, 2 * n + 3).unwrap(),
        ));
    }
    for m in 1..=9 {
        named.push((format!("points({m})"), points(m).unwrap()));
    }
    named.push((
        "ramsey(5)".into(),
        ramsey_complex(5, &GraphProperty::ContainsClique(3))
            .unwrap()
            .complex,
    ));
    named.push((
        "full simplex".into(),
        SimplicialComplex::full_simplex(6).unwrap(),
    ));
    named.push((
        "majority(3,1,1)".into(),
        selfdual_from_weights(&[3, 1, 1]).unwrap(),
    ));
    for (name, k) in &named {
        let (fast, slow) = (partition_number(k), partition_number_oracle(k).unwrap());
        ensure!(fast == slow, "{name}: packing {fast}, oracle {slow}");
    }
    Ok(())
}

fn criterion_2() -> Check {
    for n in 1..=4 {
        let k = skeleton(n, 2 * n + 3).unwrap();
        ensure!(k.is_self_dual(), "skeleton({n}) not self-dual");
        ensure!(
            partition_number(&k) == 2,
            "skeleton({n}): pi = {}",
            partition_number(&k)
        );
        ensure!(
            is_minimally_r_unavoidable(&k, 2).unwrap(),
            "skeleton({n}) not minimal"
        );
        let bound = index_bound_deleted_join(&k, 2, None).map_err(|a| a.reason)?;
        ensure!(
            bound == 2 * n as i64 + 1,
            "skeleton({n}): index bound {bound}"
        );
    }
    Ok(())
}

fn criterion_3() -> Check {
    let p5 = points(5).unwrap();
    ensure!(
        partition_number(&p5) == 3,
        "pi(points(5)) = {}",
        partition_number(&p5)
    );
    let c = certify_join_nonembeddable(&[p5.clone(), p5.clone(), p5], 3, 3);
    let ineq = c.inequality.as_ref().ok_or("no inequality")?;
    ensure!(
        c.verdict == Verdict::Certified,
        "points(5)^3: {:?} {:?}",
        c.verdict,
        c.reasons
    );
    ensure!(
        (ineq.lhs, ineq.rhs, ineq.holds) == (15, 15, true),
        "inequality {} <= {}",
        ineq.lhs,
        ineq.rhs
    );
    for n in 1..=8usize {
        let pn = points(n).unwrap();
        let c = certify_join_nonembeddable(&[points(4).unwrap(), pn.clone(), pn], 3, 3);
        ensure!(
            c.verdict == Verdict::NotCertified,
            "[4],[{n}],[{n}]: {:?}",
            c.verdict
        );
        let expected: Vec<String> = if n <= 5 {
            vec![format!(
                "inequality fails: (r-1)(d+s+1)+1 = 15 > {} = sum of m_i",
                4 + 2 * n
            )]
        } else {
            let pi = n / 2 + 1;
            (2..=3)
                .map(|i| format!("factor {i} on {n} vertices is not 3-unavoidable: pi = {pi} > 3"))
                .collect()
        };
        ensure!(
            c.reasons == expected,
            "[4],[{n}],[{n}]: reasons {:?}",
            c.reasons
        );
    }
    Ok(())
}

fn criterion_4() -> Check {
    let clique = GraphProperty::ContainsClique(3);
    ensure!(
        is_admissible(6, &clique, 2, true).unwrap(),
        "K6 not admissible"
    );
    ensure!(
        !is_admissible(5, &clique, 2, true).unwrap(),
        "K5 admissible"
    );

    let l = ramsey_complex(6, &clique).unwrap().complex;
    ensure!(
        l.ground_size() == 15,
        "ramsey(6) on {} vertices",
        l.ground_size()
    );
    ensure!(
        is_r_unavoidable(&l, 2).unwrap().unavoidable,
        "ramsey(6) not 2-unavoidable by packing"
    );
    ensure!(
        partition_number(&l) == 2,
        "pi(ramsey(6)) = {}",
        partition_number(&l)
    );
    let l5 = ramsey_complex(5, &clique).unwrap().complex;
    ensure!(
        !is_r_unavoidable(&l5, 2).unwrap().unavoidable,
        "ramsey(5) 2-unavoidable"
    );

    let v = is_linearly_realizable(&l, 2).unwrap();
    ensure!(!v.feasible, "ramsey(6) reported linear");
    ensure!(
        v.margin.as_ref().is_none_or(|e| *e <= BigRational::zero()),
        "positive margin {:?}",
        v.margin
    );
    let sub = linear_subcomplex_witness(&l, 2).unwrap();
    ensure!(
        !sub.feasible,
        "ramsey(6) has a linear 2-unavoidable subcomplex"
    );
    // The lightest minimal non-faces have 6 of the 15 edges; the optimum is
    // the uniform measure's margin 6/15 - 1/2.
    let smallest = l.min_nonfaces().iter().map(|n| n.len()).min().unwrap();
    ensure!(
        smallest == 6,
        "smallest minimal non-face has {smallest} edges"
    );
    ensure!(
        sub.margin == Some(q(6, 15) - q(1, 2)),
        "subcomplex margin {:?}",
        sub.margin
    );
    Ok(())
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..1000 {
        let m = rng.gen_range(1..=10);
        let f = random_hypergraph(&mut rng, m, true);
        let (a, b) = random_disjoint_pair(&mut rng, m);
        let (na, nb, nab) = (
            wh_measure(&f, a),
            wh_measure(&f, b),
            wh_measure(&f, a.union(b)),
        );
        ensure!(
            nab >= na.clone() + nb.clone(),
            "trial {trial}: nu({a}+{b}) = {nab} < {na} + {nb}"
        );
        let g = GeometricMeasure::new(vec![
            random_measure(&mut rng, m),
            random_measure(&mut rng, m),
        ])
        .unwrap();
        let (ga, gb, gab) = (
            geometric_measure(&g, a),
            geometric_measure(&g, b),
            geometric_measure(&g, a.union(b)),
        );
        ensure!(
            gab >= ga.clone() + gb.clone(),
            "trial {trial}: geometric {gab} < {ga} + {gb}"
        );
    }

    for m in 1..=10 {
        let w: Vec<BigRational> = (0..m)
            .map(|_| q(rng.gen_range(0..9), rng.gen_range(1..4)))
            .collect();
        let f = WeightedHypergraph::singletons(&w).unwrap();
        let table = f.table().unwrap();
        for a in Subset::full(m).subsets() {
            let additive: BigRational = a.iter().map(|v| w[v - 1].clone()).sum();
            ensure!(
                table.get(a) == additive,
                "singletons on [{m}]: nu({a}) = {}",
                table.get(a)
            );
        }
    }

    for instance in 0..200 {
        let m = rng.gen_range(1..=9);
        let nu: Box<dyn SuperadditiveMeasure> = if instance % 2 == 0 {
            Box::new(random_hypergraph(&mut rng, m, false))
        } else {
            Box::new(
                GeometricMeasure::new(vec![
                    random_measure(&mut rng, m),
                    random_measure(&mut rng, m),
                ])
                .unwrap(),
            )
        };
        let table = nu.table().unwrap();
        let alpha = table.total();
        if alpha.is_zero() {
            continue;
        }
        for r in 2..=4 {
            let k = superadditive_sublevel(nu.as_ref(), r).unwrap();
            ensure!(
                is_r_unavoidable(&k, r).unwrap().unavoidable,
                "instance {instance}: sublevel not {r}-unavoidable"
            );
        }
        for _ in 0..4 {
            let beta = alpha.clone() * q(rng.gen_range(1..=12), 12);
            let k = table.sublevel(&beta, false).unwrap();
            let bound = pi_upper_bound(&alpha, &beta).unwrap();
            let pi = partition_number(&k) as u64;
            ensure!(
                pi <= bound,
                "instance {instance}: pi = {pi} > ceil({alpha}/{beta}) = {bound}"
            );
        }
    }

    for i in 0..50u64 {
        let m = 3 + (i as usize % 5);
        let k = random_selfdual(m, 1000 + i).unwrap();
        let f = selfdual_wh_realization(&k).unwrap();
        ensure!(
            wh_realization_check(&k, 2, &f).unwrap(),
            "self-dual #{i} on [{m}]: realization fails"
        );
        ensure!(
            superadditive_sublevel(&f, 2).unwrap() == k,
            "self-dual #{i}: sublevel differs"
        );
    }

    for trial in 0..60 {
        let m = 1 + trial % 10;
        let f = random_hypergraph(&mut rng, m, true);
        let pruned = prune_zero_weights(&f);
        ensure!(
            pruned.omega().iter().all(|w| !w.is_zero()),
            "trial {trial}: zero weight survives pruning"
        );
        let (before, after) = (f.table().unwrap(), pruned.table().unwrap());
        for a in Subset::full(m).subsets() {
            ensure!(
                before.get(a) == after.get(a),
                "trial {trial}: pruning changes nu({a})"
            );
        }
    }

    for qn in 2..=8usize {
        for p in 1..qn {
            let mu1 = Measure::uniform(qn).unwrap();
            let mu2 = Measure::counting_on(qn, Subset::full(p)).unwrap();
            let g = GeometricMeasure::new(vec![mu1.clone(), mu2.clone()]).unwrap();
            for r in 2..=3 {
                let k = superadditive_sublevel(&g, r).unwrap();
                let level = q(1, r as i64);
                let k1 = sublevel_complex(&mu1, &level, false).unwrap();
                let k2 = sublevel_complex(&mu2, &level, false).unwrap();
                for a in Subset::full(qn).subsets() {
                    let union = k1.contains_face(a) || k2.contains_face(a);
                    ensure!(
                        k.contains_face(a) == union,
                        "p={p} q={qn} r={r}: {a} disagrees"
                    );
                }
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    for m in 1..=10 {
        for r in 1..=3u64 {
            let f = deleted_join_faces(&SimplicialComplex::full_simplex(m).unwrap(), r as usize)
                .unwrap();
            let total: u64 = f.iter().sum();
            ensure!(
                total == (r + 1).pow(m as u32) - 1,
                "m={m} r={r}: {total} faces"
            );
        }
    }
    // With the empty face in slot 0, f-polynomials of joins multiply.
    let poly = |f: Vec<u64>| std::iter::once(1).chain(f).collect::<Vec<u64>>();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for pair in 0..40u64 {
        let m1 = rng.gen_range(1..=6);
        let m2 = rng.gen_range(1..=10 - m1);
        let a = random_complex(m1, rng.gen_range(1..=4), 2 * pair).unwrap();
        let b = random_complex(m2, rng.gen_range(1..=4), 2 * pair + 1).unwrap();
        let j = a.join(&b).unwrap();
        for r in 1..=3 {
            let (pa, pb) = (
                poly(deleted_join_faces(&a, r).unwrap()),
                poly(deleted_join_faces(&b, r).unwrap()),
            );
            let mut product = vec![0u64; pa.len() + pb.len() - 1];
            for (i, x) in pa.iter().enumerate() {
                for (k, y) in pb.iter().enumerate() {
                    product[i + k] += x * y;
                }
            }
            let pj = poly(deleted_join_faces(&j, r).unwrap());
            ensure!(pj == product, "pair {pair}, r={r}: {pj:?} != {product:?}");
        }
    }
    Ok(())
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for instance in 0..100 {
        let m = rng.gen_range(2..=8);
        let r = rng.gen_range(2..=4);
        let k = witness_complex(&random_measure(&mut rng, m), r).unwrap();
        let v = is_linearly_realizable(&k, r).unwrap();
        ensure!(
            v.feasible,
            "instance {instance}: realizable complex reported infeasible"
        );
        let w = v.witness.ok_or("feasible verdict without witness")?;
        ensure!(
            w.is_probability(),
            "instance {instance}: witness is not a probability measure"
        );
        let level = q(1, r as i64);
        for f in k.facets() {
            ensure!(
                w.eval(*f) <= level,
                "instance {instance}: facet {f} has weight {}",
                w.eval(*f)
            );
        }
        for n in k.min_nonfaces() {
            ensure!(
                w.eval(*n) > level,
                "instance {instance}: non-face {n} has weight {}",
                w.eval(*n)
            );
        }
        ensure!(
            witness_complex(&w, r).unwrap() == k,
            "instance {instance}: witness sublevel differs"
        );
    }
    Ok(())
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_unavoidable"))
        .args(args)
        .current_dir(repo_root())
        .env_remove("RUST_LOG")
        .output()
        .map_err(|e| e.to_string())?;
    if !matches!(out.status.code(), Some(0 | 3 | 4)) {
        return Err(format!(
            "{args:?} exited with {:?}: {}",
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let mut report: serde_json::Value =
        serde_json::from_slice(&out.stdout).map_err(|e| format!("{args:?}: {e}"))?;
    report
        .as_object_mut()
        .ok_or("report is not an object")?
        .remove("timings");
    Ok(serde_json::to_vec(&report).unwrap())
}

fn criterion_8() -> Check {
    let mut invocations: Vec<Vec<String>> = Vec::new();
    for path in golden_files() {
        let file = path
            .strip_prefix(repo_root())
            .unwrap()
            .display()
            .to_string();
        let m = load(&path).ground_size();
        let mut add =
            |args: &[&str]| invocations.push(args.iter().map(|s| s.to_string()).collect());
        add(&["analyze", &file, "--r", "2"]);
        add(&["analyze", &file, "--r", "3", "--s", "2"]);
        add(&["pi", &file]);
        add(&["dual", &file]);
        add(&["realize", &file, "--r", "2"]);
        add(&["realize", &file, "--r", "3", "--subcomplex"]);
        add(&["certify", &file, &file, "--r", "3", "--d", "3"]);
        add(&["certify", &file, "--r", "2", "--index", "join"]);
        if m <= 10 {
            add(&["deljoin", &file, "--r", "2"]);
        }
        if load(&path).is_self_dual() {
            add(&["wh", &file]);
        }
    }
    for extra in [
        vec!["gen", "skeleton", "--k", "2", "--m", "7"],
        vec!["gen", "ramsey", "--n", "5", "--check-admissible"],
        vec!["gen", "selfdual", "--m", "9", "--seed", "3"],
        vec!["join", "data/points4.scx", "data/vkf1.scx"],
        vec![
            "certify",
            "data/points5.scx",
            "data/points5.scx",
            "data/points5.scx",
            "--r",
            "3",
            "--d",
            "3",
        ],
    ] {
        invocations.push(extra.into_iter().map(String::from).collect());
    }
    for args in &invocations {
        let mut outputs = Vec::new();
        for threads in ["1", "8", "1", "8"] {
            let mut full: Vec<&str> = vec!["--json", "--threads", threads];
            full.extend(args.iter().map(String::as_str));
            outputs.push(run_cli(&full)?);
        }
        ensure!(
            outputs.windows(2).all(|w| w[0] == w[1]),
            "{args:?}: reports differ across runs"
        );
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", Some(30), criterion_1),
        ("van kampen-flores family", Some(5), criterion_2),
        ("points(5) join certificate", Some(5), criterion_3),
        ("ramsey complex", Some(60), criterion_4),
        ("realizability suite", Some(120), criterion_5),
        ("deleted-join counts", Some(60), criterion_6),
        ("lp soundness", Some(30), criterion_7),
        ("determinism", None, criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(()), Some(secs)) if elapsed > Duration::from_secs(secs) => {
                Err(format!("over the {secs} s limit"))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(()) => println!(
                "criterion {} {name}: PASS ({:.2} s)",
                i + 1,
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {} {name}: FAIL ({:.2} s): {why}",
                    i + 1,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
