use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use toriclass::classgroup::{
    class_group, class_group_with, kp_search, pairing_matrix, weight_identities_hold, weights, weights_equivalent,
    WeightAssignment,
};
use toriclass::families::{make_pi, make_pnk, order_polytope, predicted_facets_pnk, q1, q2};
use toriclass::gale::{classify_rank2, GaleType, Rank2Class};
use toriclass::lattice::{decompose, gorenstein_check, lattice_span, normality_check};
use toriclass::polytope::simplex_product_model;
use toriclass::random::{random_01_polytope, random_poset, seeded};
use toriclass::toric::{buchberger_verify, gbasis_pnk, gbasis_pnk_blocks, graded_min_gens, initial_ideal_squarefree, RevLexOrder};
use toriclass::{Error, Int, IntMatrix, Polytope};

use crate::input::load_file;
use crate::report::{version, Clock};
use crate::Failure;

struct Fixtures {
    q1: Polytope,
    q2: Polytope,
}

/// One compared quantity.
struct Check {
    what: &'static str,
    expected: Value,
    computed: Value,
}

fn check(what: &'static str, expected: impl Into<Value>, computed: impl Into<Value>) -> Check {
    Check {
        what,
        expected: expected.into(),
        computed: computed.into(),
    }
}

/// Items of a sweep that failed, as `"label: reason"`, in input order.
fn sweep<T: Sync>(items: &[T], label: impl Fn(&T) -> String + Sync, f: impl Fn(&T) -> Result<Option<String>, Error> + Sync) -> Vec<String> {
    items
        .par_iter()
        .map(|it| match f(it) {
            Ok(None) => None,
            Ok(Some(why)) => Some(format!("{}: {why}", label(it))),
            Err(e) => Some(format!("{}: {e}", label(it))),
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn none() -> Vec<String> {
    Vec::new()
}

type ClaimFn = fn(&Fixtures) -> Result<Vec<Check>, Error>;

const CLAIMS: [(&str, &[&str], &str, ClaimFn); 12] = [
    ("q1", &["polytope", "normality"], "Q1: dim 4, 8 facets, rank 3, non-normal with witness (1,1,1,0,2)", claim_q1),
    ("q2", &["normality", "classgroup"], "Q2: normal, printed pairing matrix, Cl = Z^3 + (Z/2)^3", claim_q2),
    ("q1-q2", &["polytope", "normality"], "Q1 and Q2 are combinatorially equivalent but differ in normality", claim_compare),
    ("pnk-facets", &["polytope", "family"], "facets of P_n match the predicted list (k <= 4, d <= 6)", claim_pnk_facets),
    ("pnk-invariants", &["normality", "gorenstein", "classgroup", "family"], "P_n is normal, Gorenstein iff all n_i agree, Cl = Z^(k-1), k_P = d+1", claim_pnk_invariants),
    ("weights", &["classgroup", "weights"], "weights of P_(n1,n2,n3) and the four rank-2 order polytopes", claim_weights),
    ("groebner", &["toric"], "the (b1)-(b3) binomials form a squarefree Gröbner basis up to 40 variables", claim_groebner),
    ("hibi", &["classgroup", "order"], "rank of an order polytope from the Hasse diagram", claim_hibi),
    ("rank2", &["gale"], "rank-2 diagram types of the named families", claim_rank2),
    ("rank01", &["classgroup", "polytope"], "rank 0 and rank 1 (0,1)-polytopes; simple ones are simplex products", claim_rank01),
    ("product", &["polytope"], "rank and facet count of products", claim_product),
    ("pyramid", &["classgroup"], "pyramids keep the class group of their base", claim_pyramid),
];

fn claim_q1(fx: &Fixtures) -> Result<Vec<Check>, Error> {
    let p = &fx.q1;
    let v = normality_check(p)?;
    let witness = v.witness.as_ref().map(|w| w.point.clone());
    let split = match &witness {
        Some(w) if w.len() == p.ambient_dim() + 1 => {
            let h = *w.last().unwrap() as usize;
            Value::from(decompose(p, &w[..w.len() - 1], h)?.is_some())
        }
        _ => Value::Null,
    };
    Ok(vec![
        check("dim", 4, p.dim()),
        check("facet_count", 8, p.facets()?.len()),
        check("rank", 3, p.rank()?),
        check("normal", false, v.normal),
        check("witness", json!([1, 1, 1, 0, 2]), json!(witness)),
        check("witness_decomposes", false, split),
    ])
}

fn equal_up_to_permutation(a: &IntMatrix, b: &IntMatrix) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return false;
    }
    let mut target = a.row_vecs();
    target.sort();
    let n = a.cols();
    let mut perm: Vec<usize> = (0..n).collect();
    // Heap's algorithm over column orders
    let mut c = vec![0; n];
    let test = |perm: &[usize]| {
        let mut rows: Vec<Vec<Int>> = b.row_vecs().into_iter().map(|r| perm.iter().map(|&j| r[j].clone()).collect()).collect();
        rows.sort();
        rows == target
    };
    if test(&perm) {
        return true;
    }
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if test(&perm) {
                return true;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    false
}

fn claim_q2(fx: &Fixtures) -> Result<Vec<Check>, Error> {
    let p = &fx.q2;
    let printed = IntMatrix::from_rows(
        &[
            vec![1i64, 0, 2, 0, 0, 0],
            vec![1, 0, 0, 2, 0, 0],
            vec![1, 0, 0, 0, 2, 0],
            vec![1, 0, 0, 0, 0, 2],
            vec![0, 1, 2, 0, 0, 0],
            vec![0, 1, 0, 2, 0, 0],
            vec![0, 1, 0, 0, 2, 0],
            vec![0, 1, 0, 0, 0, 2],
        ],
        6,
    );
    let normal = normality_check(p)?.normal;
    let cg = class_group_with(p, true)?;
    Ok(vec![
        check("normal", true, normal),
        check("pairing_matrix_matches_printed", true, equal_up_to_permutation(&pairing_matrix(p)?, &printed)),
        check("smith_diagonal", json!(["1", "1", "2", "2", "2", "0"]), json!(cg.snf.diag.iter().map(ToString::to_string).collect::<Vec<_>>())),
        check("class_group", "Z^3 + (Z/2)^3", cg.to_string()),
    ])
}

fn claim_compare(fx: &Fixtures) -> Result<Vec<Check>, Error> {
    let eq = fx.q1.combinatorially_equivalent(&fx.q2)?.is_some();
    let n1 = normality_check(&fx.q1)?.normal;
    let n2 = normality_check(&fx.q2)?.normal;
    Ok(vec![
        check("combinatorially_equivalent", true, eq),
        check("normality", json!([false, true]), json!([n1, n2])),
    ])
}

fn small_tuples() -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, left: usize, out: &mut Vec<Vec<usize>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() < 4 {
            for n in 1..=left {
                prefix.push(n);
                go(prefix, left - n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 6, &mut out);
    out
}

fn label(ns: &Vec<usize>) -> String {
    format!("{ns:?}")
}

fn claim_pnk_facets(_: &Fixtures) -> Result<Vec<Check>, Error> {
    let tuples = small_tuples();
    let bad = sweep(&tuples, label, |ns| {
        let p = make_pnk(ns)?;
        let mut computed: Vec<Vec<Int>> = p.facets()?.iter().map(|f| f.normal.clone()).collect();
        let fractional = p.facets()?.iter().any(|f| f.denominator != Int::from(1));
        let mut predicted = predicted_facets_pnk(ns)?;
        computed.sort();
        predicted.sort();
        Ok((fractional || computed != predicted).then(|| "facets differ from the predicted list".into()))
    });
    Ok(vec![check("tuples", 56, tuples.len()), check("mismatches", none(), bad)])
}

fn claim_pnk_invariants(_: &Fixtures) -> Result<Vec<Check>, Error> {
    let tuples = small_tuples();
    let bad = sweep(&tuples, label, |ns| {
        let p = make_pnk(ns)?;
        let d: usize = ns.iter().sum();
        let mut why = Vec::new();
        if !normality_check(&p)?.normal {
            why.push("not normal".to_string());
        }
        if !lattice_span(&p)?.span_is_full {
            why.push("span not full".into());
        }
        if gorenstein_check(&p)? != ns.iter().all(|&n| n == ns[0]) {
            why.push("Gorenstein verdict".into());
        }
        let cg = class_group(&p)?;
        if cg.free_rank != ns.len() - 1 || !cg.torsion.is_empty() {
            why.push(format!("class group {cg}"));
        }
        let k = kp_search(&p)?.k;
        if k != d + 1 {
            why.push(format!("k_P = {k}"));
        }
        Ok((!why.is_empty()).then(|| why.join(", ")))
    });
    Ok(vec![check("tuples", 56, tuples.len()), check("mismatches", none(), bad)])
}

fn table(pairs: &[([i64; 2], usize)]) -> WeightAssignment {
    WeightAssignment::from_weights(
        2,
        pairs
            .iter()
            .flat_map(|(w, m)| std::iter::repeat_n(w.iter().map(|&x| Int::from(x)).collect(), *m))
            .collect(),
    )
}

fn weights_match(p: &Polytope, expected: &WeightAssignment) -> Result<Option<String>, Error> {
    let w = weights(p)?;
    if !weights_equivalent(&w, expected)? {
        return Ok(Some("weights not GL2(Z)-equivalent to the table".into()));
    }
    Ok((!weight_identities_hold(p, &w)?).then(|| "facet relations fail".into()))
}

fn claim_weights(_: &Fixtures) -> Result<Vec<Check>, Error> {
    let mut cases: Vec<(String, Polytope, WeightAssignment)> = Vec::new();
    for n1 in 1..=3 {
        for n2 in 1..=3 {
            for n3 in 1..=3 {
                let t = table(&[([1, 0], 1), ([0, 1], 1), ([-1, -1], 1), ([-2, 0], n1), ([0, -2], n2), ([2, 2], n3)]);
                cases.push((format!("P{:?}", [n1, n2, n3]), make_pnk(&[n1, n2, n3])?, t));
            }
        }
    }
    let posets: [(u8, Vec<usize>, Vec<([i64; 2], usize)>); 4] = [
        (1, vec![2, 2, 2], vec![([1, 0], 2), ([0, 1], 2), ([-1, -1], 2)]),
        (2, vec![2, 2, 2, 2], vec![([1, 0], 2), ([-1, 0], 2), ([0, 1], 2), ([0, -1], 2)]),
        (3, vec![2, 2, 2, 1], vec![([1, 0], 2), ([-1, -1], 2), ([0, 1], 2), ([0, -1], 1)]),
        (4, vec![2, 1, 1, 1, 2], vec![([1, 0], 2), ([-1, 0], 1), ([-1, 1], 1), ([0, 1], 1), ([0, -1], 2)]),
    ];
    for (v, params, t) in posets {
        cases.push((format!("O_Pi{v}{params:?}"), order_polytope(&make_pi(v, &params)?)?, table(&t)));
    }
    let bad = sweep(&cases, |c| c.0.clone(), |(_, p, t)| weights_match(p, t));
    Ok(vec![check("cases", 31, cases.len()), check("mismatches", none(), bad)])
}

fn var_count(ns: &[usize]) -> usize {
    if ns.len() == 1 {
        1 + ns[0]
    } else {
        1 + ns.iter().sum::<usize>() + ns.iter().product::<usize>()
    }
}

fn tuples_up_to_vars(max: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        for n in 1.. {
            prefix.push(n);
            let fits = var_count(prefix) <= max;
            if fits {
                out.push(prefix.clone());
                go(prefix, max, out);
            }
            prefix.pop();
            if !fits {
                break;
            }
        }
    }
    let mut out: Vec<Vec<usize>> = (1..max).filter(|&n| var_count(&[n]) <= max).map(|n| vec![n]).collect();
    for n1 in 1..max {
        if var_count(&[n1, 1]) > max {
            break;
        }
        go(&mut vec![n1], max, &mut out);
    }
    out
}

fn claim_groebner(_: &Fixtures) -> Result<Vec<Check>, Error> {
    let tuples = tuples_up_to_vars(40);
    let bad = sweep(&tuples, label, |ns| {
        let p = make_pnk(ns)?;
        let order = RevLexOrder::for_polytope(&p)?;
        let g = gbasis_pnk(ns)?;
        if !buchberger_verify(&g, &order, &p)? {
            return Ok(Some("Buchberger criterion fails".into()));
        }
        Ok((!initial_ideal_squarefree(&g, &order)).then(|| "initial ideal not squarefree".into()))
    });
    let p = make_pnk(&[2, 2])?;
    let order = RevLexOrder::for_polytope(&p)?;
    let blocks = gbasis_pnk_blocks(&[2, 2])?;
    let without: Vec<_> = blocks.b1.iter().chain(&blocks.b3).cloned().collect();
    let mg = graded_min_gens(&make_pnk(&[1, 1, 1])?, 3)?;
    Ok(vec![
        check("failing_tuples", none(), bad),
        check("without_b2_is_groebner", false, buchberger_verify(&without, &order, &p)?),
        check(
            "minimal_generators_P111",
            json!({"2": 0, "3": 1}),
            json!(mg.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>()),
        ),
    ])
}

fn claim_hibi(_: &Fixtures) -> Result<Vec<Check>, Error> {
    let mut rng = seeded(8);
    let posets: Vec<_> = (0..50)
        .map(|_| {
            let size = rng.gen_range(1..=6);
            let density = rng.gen_range(0.1..0.7);
            random_poset(&mut rng, size, density)
        })
        .collect();
    let bad = sweep(&posets, |q| format!("{:?}", q.covers()), |q| {
        let p = order_polytope(q)?;
        let expected = q.hasse_edges_with_bounds() as i64 - q.size() as i64 - 1;
        let rank = p.rank()? as i64;
        let cg = class_group(&p)?;
        Ok((rank != expected || cg.free_rank as i64 != expected || !cg.torsion.is_empty())
            .then(|| format!("rank {rank}, Cl {cg}, formula {expected}")))
    });
    Ok(vec![check("mismatches", none(), bad)])
}

fn grid(ranges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    ranges.iter().fold(vec![vec![]], |acc, &(lo, hi)| {
        acc.into_iter()
            .flat_map(|t| {
                (lo..=hi).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect()
    })
}

fn claim_rank2(_: &Fixtures) -> Result<Vec<Check>, Error> {
    let mut cases: Vec<(String, Polytope, GaleType, Vec<usize>)> = Vec::new();
    let shapes: [(u8, GaleType, Vec<(usize, usize)>); 4] = [
        (1, GaleType::G1, vec![(2, 3); 3]),
        (2, GaleType::G2, vec![(2, 3); 4]),
        (3, GaleType::G3, vec![(2, 3), (2, 3), (2, 3), (1, 3)]),
        (4, GaleType::G4, vec![(2, 3), (1, 3), (1, 3), (1, 3), (2, 3)]),
    ];
    for (v, kind, ranges) in shapes {
        for params in grid(&ranges) {
            let p = order_polytope(&make_pi(v, &params)?)?;
            cases.push((format!("O_Pi{v}{params:?}"), p, kind, params));
        }
    }
    for ns in grid(&[(1, 3); 3]) {
        cases.push((format!("P{ns:?}"), make_pnk(&ns)?, GaleType::G5, ns));
    }
    let bad = sweep(&cases, |c| c.0.clone(), |(_, p, kind, expected)| {
        Ok(match classify_rank2(p)? {
            Rank2Class::Matched { kind: k, params } if k == *kind => {
                (!kind.same_diagram(&params, expected)?).then(|| format!("read {params:?}"))
            }
            other => Some(format!("classified as {other}")),
        })
    });
    Ok(vec![check("cases", 183, cases.len()), check("mismatches", none(), bad)])
}

fn claim_rank01(_: &Fixtures) -> Result<Vec<Check>, Error> {
    let mut rng = seeded(10);
    let samples = (0..200).map(|_| random_01_polytope(&mut rng, 4, 16)).collect::<Result<Vec<_>, _>>()?;
    let bad = sweep(&samples, |p| format!("{:?}", p.vertices()), |p| {
        let rank = p.rank()?;
        if rank == 0 {
            let mut cur = p.clone();
            while cur.vertices().len() > 1 {
                match cur.pyramid_decompose()? {
                    Some((_, base)) => cur = base,
                    None => return Ok(Some("rank 0 but not an iterated pyramid".into())),
                }
            }
        }
        if rank <= 1 {
            let cg = class_group(p)?;
            if cg.free_rank != rank || !cg.torsion.is_empty() {
                return Ok(Some(format!("rank {rank}, Cl {cg}")));
            }
        }
        if p.is_simple()? && p.combinatorially_equivalent(&simplex_product_model(p)?)?.is_none() {
            return Ok(Some("simple but not a product of simplices".into()));
        }
        Ok(None)
    });
    Ok(vec![check("mismatches", none(), bad)])
}

fn claim_product(_: &Fixtures) -> Result<Vec<Check>, Error> {
    let mut rng = seeded(11);
    let pairs = (0..20)
        .map(|_| Ok((random_01_polytope(&mut rng, 3, 8)?, random_01_polytope(&mut rng, 3, 8)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let bad = sweep(&pairs, |(p, q)| format!("{:?} x {:?}", p.vertices(), q.vertices()), |(p, q)| {
        let pq = p.product(q);
        let facets_add = pq.facets()?.len() == p.facets()?.len() + q.facets()?.len();
        let rank_adds = pq.rank()? == p.rank()? + q.rank()? + 1;
        Ok((!facets_add || !rank_adds).then(|| "identity fails".into()))
    });
    Ok(vec![check("mismatches", none(), bad)])
}

fn claim_pyramid(_: &Fixtures) -> Result<Vec<Check>, Error> {
    let mut rng = seeded(12);
    let bases = (0..20).map(|_| random_01_polytope(&mut rng, 4, 10)).collect::<Result<Vec<_>, _>>()?;
    let bad = sweep(&bases, |b| format!("{:?}", b.vertices()), |base| {
        let d = base.ambient_dim();
        let mut verts: Vec<Vec<i64>> = base.vertices().iter().map(|v| v.iter().copied().chain([0]).collect()).collect();
        let mut apex = vec![0; d + 1];
        apex[d] = 1;
        verts.push(apex);
        let pyr = Polytope::new(d + 1, verts)?;
        let nb = normality_check(base)?.normal;
        if nb != normality_check(&pyr)?.normal {
            return Ok(Some("normality differs".into()));
        }
        let (cb, cp) = (class_group_with(base, !nb)?, class_group_with(&pyr, !nb)?);
        Ok((cb.shape() != cp.shape()).then(|| format!("{cb} vs {cp}")))
    });
    Ok(vec![check("mismatches", none(), bad)])
}

fn fixtures(overrides: &[String]) -> Result<Fixtures, Failure> {
    let mut fx = Fixtures { q1: q1(), q2: q2() };
    for o in overrides {
        let (name, path) = o
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--fixture expects NAME=PATH, got {o:?}")))?;
        let p = load_file(Path::new(path))?.polytope;
        match name {
            "q1" => fx.q1 = p,
            "q2" => fx.q2 = p,
            other => return Err(Failure::Usage(format!("unknown fixture {other:?}; expected q1 or q2"))),
        }
    }
    Ok(fx)
}

pub fn run(only: &[String], overrides: &[String], timing: bool) -> Result<Value, Failure> {
    let fx = fixtures(overrides)?;
    let selected: Vec<_> = CLAIMS
        .iter()
        .filter(|(id, tags, _, _)| only.is_empty() || only.iter().any(|o| o == id || tags.contains(&o.as_str())))
        .collect();
    if selected.is_empty() {
        let known: Vec<&str> = CLAIMS.iter().map(|c| c.0).collect();
        return Err(Failure::Usage(format!("--only matches no claim; ids are {}", known.join(", "))));
    }
    let mut clock = Clock::new(timing);
    let mut claims = Vec::new();
    let mut failed = Vec::new();
    for (id, tags, title, f) in selected {
        let outcome = clock.time(id, || f(&fx));
        let entry = match outcome {
            Ok(checks) => {
                let pass = checks.iter().all(|c| c.expected == c.computed);
                let diff: Vec<Value> = checks
                    .iter()
                    .filter(|c| c.expected != c.computed)
                    .map(|c| json!({ "what": c.what, "expected": c.expected, "computed": c.computed }))
                    .collect();
                json!({
                    "id": id,
                    "tags": tags,
                    "title": title,
                    "status": if pass { "pass" } else { "fail" },
                    "checks": checks.iter().map(|c| json!({
                        "what": c.what,
                        "expected": c.expected,
                        "computed": c.computed,
                        "pass": c.expected == c.computed,
                    })).collect::<Vec<_>>(),
                    "diff": diff,
                })
            }
            Err(e) => json!({ "id": id, "tags": tags, "title": title, "status": "fail", "error": e.to_string() }),
        };
        if entry["status"] == "fail" {
            failed.push(id.to_string());
            eprintln!("mismatch in claim {id}: {}", entry.get("diff").or(entry.get("error")).unwrap_or(&Value::Null));
        }
        claims.push(entry);
    }
    let summary: BTreeMap<&str, usize> = [("passed", claims.len() - failed.len()), ("failed", failed.len())].into();
    let mut report = json!({
        "artifact": version(),
        "claims": claims,
        "summary": summary,
        "failed": failed,
    });
    clock.attach(&mut report);
    if failed.is_empty() {
        Ok(report)
    } else {
        Err(Failure::Report(report))
    }
}
