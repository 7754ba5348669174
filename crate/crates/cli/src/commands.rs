use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};
use unavoidable::certify::{certify_index_bound, Certificate, Verdict};
use unavoidable::complex::scx::to_scx;
use unavoidable::generators::{
    admissibility, random_selfdual_weights, selfdual_from_weights, GraphProperty,
};
use unavoidable::partition::hypergraph_partition_number;
use unavoidable::realize::{
    is_linearly_realizable_with, linear_subcomplex_witness_with, prune_zero_weights, LpOptions,
    SuperadditiveMeasure, WeightedHypergraph,
};
use unavoidable::{
    certify_join_nonembeddable, certify_single_nonembeddable, is_minimally_r_unavoidable,
    is_r_unavoidable, is_rs_unavoidable, max_disjoint_min_nonfaces, ramsey_complex,
    selfdual_wh_realization, skeleton, wh_realization_check, AlexanderDual, SimplicialComplex,
    Subset,
};

use crate::report::Context;
use crate::{CliError, Outcome, Status};

type Out = Result<Outcome, CliError>;

fn done(results: Value, text: String) -> Out {
    Ok(Outcome {
        results,
        text,
        status: Status::Done,
    })
}

fn join_sets(sets: &[Subset], sep: &str) -> String {
    sets.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn complex_json(k: &SimplicialComplex) -> Value {
    json!({ "m": k.ground_size(), "facets": k.facets(), "min_nonfaces": k.min_nonfaces() })
}

pub fn analyze(ctx: &mut Context, file: &Path, r: Option<usize>, s: Option<usize>) -> Out {
    let k = ctx.load_complex(file)?;
    let (packing, self_dual, f_vector) = ctx.timed("compute", || {
        (
            max_disjoint_min_nonfaces(&k),
            k.is_self_dual(),
            k.f_vector(),
        )
    });
    let pi = packing.size + 1;
    let mut text = String::new();
    writeln!(text, "m = {}", k.ground_size()).unwrap();
    writeln!(text, "facets = {}", k.facets().len()).unwrap();
    writeln!(text, "min_nonfaces = {}", k.min_nonfaces().len()).unwrap();
    writeln!(text, "dimension = {}", k.dimension()).unwrap();
    writeln!(text, "f_vector = {f_vector:?}").unwrap();
    writeln!(text, "self_dual = {self_dual}").unwrap();
    writeln!(text, "pi = {pi}").unwrap();

    let mut checks = Vec::new();
    if let Some(r) = r {
        let (verdict, minimal) = ctx.timed("compute", || -> Result<_, CliError> {
            Ok(match s {
                None => (
                    is_r_unavoidable(&k, r)?,
                    Some(is_minimally_r_unavoidable(&k, r)?),
                ),
                Some(s) => (is_rs_unavoidable(&k, r, s)?, None),
            })
        })?;
        writeln!(text, "r = {r}").unwrap();
        if let Some(s) = s {
            writeln!(text, "s = {s}").unwrap();
        }
        writeln!(text, "unavoidable = {}", verdict.unavoidable).unwrap();
        if let Some(minimal) = minimal {
            writeln!(text, "minimally_unavoidable = {minimal}").unwrap();
        }
        if let Some(w) = &verdict.witness {
            writeln!(text, "witness = {}", join_sets(&w.blocks, " | ")).unwrap();
        }
        checks.push(json!({
            "r": r,
            "s": s,
            "unavoidable": verdict.unavoidable,
            "minimal": minimal,
            "witness": verdict.witness,
        }));
    }
    let results = json!({
        "complex": complex_json(&k),
        "dimension": k.dimension(),
        "f_vector": f_vector,
        "self_dual": self_dual,
        "pi": pi,
        "max_disjoint_nonfaces": packing.size,
        "packing": packing.witness,
        "checks": checks,
    });
    done(results, text)
}

fn load_blocks(ctx: &mut Context, path: &Path, m: usize) -> Result<Vec<Subset>, CliError> {
    let text = ctx.read(path)?;
    let lists: Vec<Vec<usize>> = serde_json::from_str(&text).map_err(|e| {
        CliError::Input(format!(
            "{}: expected a JSON array of vertex lists: {e}",
            path.display()
        ))
    })?;
    lists
        .into_iter()
        .map(|l| {
            if l.iter().any(|&v| v == 0 || v > m) {
                return Err(CliError::Input(format!(
                    "{}: block {l:?} is not inside [{m}]",
                    path.display()
                )));
            }
            Ok(Subset::from_vertices(l))
        })
        .collect()
}

pub fn pi(ctx: &mut Context, file: &Path, hypergraph: Option<&Path>) -> Out {
    let k = ctx.load_complex(file)?;
    let packing = ctx.timed("compute", || max_disjoint_min_nonfaces(&k));
    let pi = packing.size + 1;
    let mut text = format!("pi = {pi}\n");
    let mut restricted = Value::Null;
    if let Some(path) = hypergraph {
        let blocks = load_blocks(ctx, path, k.ground_size())?;
        let h = ctx.timed("compute", || hypergraph_partition_number(&k, &blocks))?;
        writeln!(text, "pi_h = {}", h.nu).unwrap();
        writeln!(text, "stable_pi_h = {}", h.stable_nu).unwrap();
        writeln!(text, "vacuous_levels = {:?}", h.vacuous_levels).unwrap();
        restricted = serde_json::to_value(&h).expect("serializable");
    }
    let results = json!({
        "pi": pi,
        "max_disjoint_nonfaces": packing.size,
        "packing": packing.witness,
        "hypergraph": restricted,
    });
    done(results, text)
}

pub fn dual(ctx: &mut Context, file: &Path) -> Out {
    let k = ctx.load_complex(file)?;
    let d = ctx.timed("compute", || k.alexander_dual());
    Ok(match d {
        AlexanderDual::Void => Outcome {
            results: json!({ "void": true, "complex": null, "self_dual": false }),
            text: "void\n".into(),
            status: Status::Done,
        },
        AlexanderDual::Complex(d) => Outcome {
            results: json!({ "void": false, "complex": complex_json(&d), "self_dual": d == k }),
            text: to_scx(&d),
            status: Status::Done,
        },
    })
}

pub fn realize(
    ctx: &mut Context,
    file: &Path,
    r: usize,
    subcomplex: bool,
    max_constraints: usize,
) -> Out {
    let k = ctx.load_complex(file)?;
    let options = LpOptions {
        constraint_cap: max_constraints,
        ..LpOptions::default()
    };
    let verdict = ctx.timed("compute", || {
        if subcomplex {
            linear_subcomplex_witness_with(&k, r, options)
        } else {
            is_linearly_realizable_with(&k, r, options)
        }
    })?;
    let mut text = String::new();
    writeln!(
        text,
        "{} = {}",
        if subcomplex {
            "subcomplex_witness"
        } else {
            "realizable"
        },
        verdict.feasible
    )
    .unwrap();
    if let Some(margin) = &verdict.margin {
        writeln!(text, "margin = {margin}").unwrap();
    }
    if let Some(w) = &verdict.witness {
        let weights: Vec<String> = w.weights().iter().map(|x| x.to_string()).collect();
        writeln!(text, "witness = {}", weights.join(" ")).unwrap();
    }
    if let Some(note) = &verdict.infeasibility_note {
        writeln!(text, "note = {note}").unwrap();
    }
    let results = json!({
        "r": r,
        "mode": if subcomplex { "subcomplex" } else { "exact" },
        "verdict": verdict,
    });
    done(results, text)
}

pub fn wh(ctx: &mut Context, file: &Path, r: usize, family: Option<&Path>) -> Out {
    let k = ctx.load_complex(file)?;
    let (f, canonical) = match family {
        Some(path) => {
            let text = ctx.read(path)?;
            let f: WeightedHypergraph = serde_json::from_str(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            (f, false)
        }
        None => {
            let f = ctx.timed("compute", || selfdual_wh_realization(&k))?;
            (prune_zero_weights(&f), true)
        }
    };
    let (realizes, alpha) = ctx.timed("compute", || -> Result<_, CliError> {
        Ok((wh_realization_check(&k, r, &f)?, f.table()?.total()))
    })?;
    let text = format!(
        "realizes = {realizes}\nalpha = {alpha}\nmembers = {}\n",
        f.len()
    );
    let results = json!({
        "r": r,
        "realizes": realizes,
        "alpha": alpha.to_string(),
        "canonical": canonical,
        "family": f,
    });
    done(results, text)
}

fn generated(k: &SimplicialComplex, header: String, extra: Value) -> Out {
    let mut results = json!({ "complex": complex_json(k) });
    if let (Value::Object(map), Value::Object(more)) = (&mut results, extra) {
        map.extend(more);
    }
    done(results, header + &to_scx(k))
}

pub fn gen_skeleton(ctx: &mut Context, k: usize, m: usize) -> Out {
    let c = ctx.timed("compute", || skeleton(k, m))?;
    generated(&c, String::new(), json!({}))
}

pub fn gen_points(ctx: &mut Context, m: usize) -> Out {
    gen_skeleton(ctx, 0, m)
}

pub fn gen_ramsey(
    ctx: &mut Context,
    n: usize,
    clique: usize,
    r: usize,
    scan: Option<(bool, u64)>,
) -> Out {
    let property = GraphProperty::ContainsClique(clique);
    let rc = ctx.timed("compute", || ramsey_complex(n, &property))?;
    let mut header = format!(
        "# faces: edge sets of K_{n} whose complement has {}\n",
        property.name()
    );
    for (e, (i, j)) in rc.edges.edges().iter().enumerate() {
        writeln!(header, "# vertex {} = edge {{{i},{j}}}", e + 1).unwrap();
    }
    let mut extra = json!({ "n": n, "property": property.name(), "edges": rc.edges.edges() });
    if let Some((allow_empty, budget)) = scan {
        let (adm, unav) = ctx.timed("compute", || -> Result<_, CliError> {
            Ok((
                admissibility(n, &property, r, allow_empty, budget as u128)?,
                is_r_unavoidable(&rc.complex, r)?,
            ))
        })?;
        writeln!(header, "# admissible (r = {r}) = {}", adm.admissible).unwrap();
        writeln!(header, "# unavoidable (r = {r}) = {}", unav.unavoidable).unwrap();
        extra["r"] = json!(r);
        extra["allow_empty_classes"] = json!(allow_empty);
        extra["admissibility"] = json!({
            "admissible": adm.admissible,
            "counterexample": adm.counterexample,
            "colorings": adm.colorings.to_string(),
        });
        extra["unavoidable"] = json!(unav.unavoidable);
    }
    generated(&rc.complex, header, extra)
}

pub fn gen_selfdual(ctx: &mut Context, m: usize, seed: u64) -> Out {
    if m == 0 {
        return Err(CliError::Usage("--m must be at least 1".into()));
    }
    let weights = random_selfdual_weights(m, seed);
    let k = ctx.timed("compute", || selfdual_from_weights(&weights))?;
    let shown: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
    let header = format!("# weights {} (seed {seed})\n", shown.join(" "));
    generated(&k, header, json!({ "weights": weights, "seed": seed }))
}

pub fn join(ctx: &mut Context, first: &Path, second: &Path) -> Out {
    let a = ctx.load_complex(first)?;
    let b = ctx.load_complex(second)?;
    let j = ctx.timed("compute", || a.join(&b))?;
    generated(&j, String::new(), json!({}))
}

pub fn deljoin(ctx: &mut Context, file: &Path, r: usize, budget: u64) -> Out {
    let k = ctx.load_complex(file)?;
    let f = ctx.timed("compute", || {
        unavoidable::generators::deleted_join_faces_with_budget(&k, r, budget as u128)
    })?;
    let total: u64 = f.iter().sum();
    let text = format!("f_vector = {f:?}\ntotal = {total}\n");
    done(json!({ "r": r, "f_vector": f, "total": total }), text)
}

fn certificate_outcome(cert: Certificate) -> Out {
    let mut text = format!(
        "verdict = {}\n",
        serde_json::to_value(cert.verdict)
            .unwrap()
            .as_str()
            .unwrap()
    );
    if let Some(ineq) = &cert.inequality {
        let rel = if ineq.holds { "<=" } else { ">" };
        writeln!(text, "inequality = {} {rel} {}", ineq.lhs, ineq.rhs).unwrap();
    }
    if let Some(b) = cert.bound {
        writeln!(text, "bound = {b}").unwrap();
    }
    for reason in &cert.reasons {
        writeln!(text, "reason = {reason}").unwrap();
    }
    if let Some(c) = &cert.conclusion {
        writeln!(text, "conclusion = {c}").unwrap();
    }
    let status = match cert.verdict {
        Verdict::Certified => Status::Done,
        Verdict::NotCertified => Status::NotCertified,
        Verdict::Abstained => Status::Abstained,
    };
    Ok(Outcome {
        results: serde_json::to_value(&cert).expect("serializable"),
        text,
        status,
    })
}

pub fn certify(
    ctx: &mut Context,
    files: &[std::path::PathBuf],
    r: usize,
    d: usize,
    single: bool,
) -> Out {
    if single && files.len() != 1 {
        return Err(CliError::Usage("--single takes exactly one file".into()));
    }
    let ks = files
        .iter()
        .map(|f| ctx.load_complex(f))
        .collect::<Result<Vec<_>, _>>()?;
    let cert = ctx.timed("compute", || {
        if single {
            certify_single_nonembeddable(&ks[0], r, d)
        } else {
            certify_join_nonembeddable(&ks, r, d)
        }
    });
    certificate_outcome(cert)
}

pub fn certify_index(
    ctx: &mut Context,
    files: &[std::path::PathBuf],
    r: usize,
    s: Option<usize>,
    product: bool,
) -> Out {
    if files.len() != 1 {
        return Err(CliError::Usage("--index takes exactly one file".into()));
    }
    let k = ctx.load_complex(&files[0])?;
    let cert = ctx.timed("compute", || certify_index_bound(&k, r, s, product));
    certificate_outcome(cert)
}
