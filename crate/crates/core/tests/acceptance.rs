//! Acceptance suite: twelve checks of the headline results, one line each.
//!
//! Runs without the libtest harness so the report is always printed.
//! Exit status is nonzero if any check fails.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_traits::One;
use rand::Rng;

use toriclass::classgroup::{
    class_group, class_group_with, kp_search, pairing_matrix, weight_identities_hold, weights, weights_equivalent,
    WeightAssignment,
};
use toriclass::families::{make_pi, make_pnk, order_polytope, predicted_facets_pnk, q1, q2};
use toriclass::gale::{classify_rank2, GaleType, Rank2Class};
use toriclass::lattice::{decompose, gorenstein_check, lattice_span, normality_check};
use toriclass::polytope::simplex_product_model;
use toriclass::random::{random_01_polytope, random_poset, seeded};
use toriclass::toric::{
    buchberger_verify, gbasis_pnk, gbasis_pnk_blocks, graded_min_gens, initial_ideal_squarefree, RevLexOrder,
};
use toriclass::{Int, IntMatrix, Polytope};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

fn wa(pairs: &[([i64; 2], usize)]) -> WeightAssignment {
    let weights = pairs
        .iter()
        .flat_map(|(w, m)| std::iter::repeat_n(ints(w), *m))
        .collect();
    WeightAssignment::from_weights(2, weights)
}

/// Ordered tuples with `k <= 4` and entries summing to at most 6.
fn small_tuples() -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, left: usize, out: &mut Vec<Vec<usize>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() == 4 {
            return;
        }
        for n in 1..=left {
            prefix.push(n);
            go(prefix, left - n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 6, &mut out);
    out
}

/// Variables of the toric ideal of `P_{n⃗}`, that is, its lattice points.
fn pnk_var_count(ns: &[usize]) -> usize {
    if ns.len() == 1 {
        1 + ns[0]
    } else {
        1 + ns.iter().sum::<usize>() + ns.iter().product::<usize>()
    }
}

/// Ordered tuples whose toric ideal has at most `max` variables.
fn tuples_up_to_vars(max: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        for n in 1.. {
            prefix.push(n);
            let fits = pnk_var_count(prefix) <= max;
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
    let mut out: Vec<Vec<usize>> = (1..max).map(|n| vec![n]).filter(|t| pnk_var_count(t) <= max).collect();
    for n1 in 1..max {
        let mut prefix = vec![n1];
        if pnk_var_count(&[n1, 1]) > max {
            break;
        }
        go(&mut prefix, max, &mut out);
    }
    out
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs `check` on every item across all cores; returns the failures in input order.
fn par_failures<T: Sync>(items: &[T], check: impl Fn(&T) -> Result<(), String> + Sync) -> Vec<(usize, String)> {
    let next = AtomicUsize::new(0);
    let failures = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..workers() {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                if let Err(e) = check(&items[i]) {
                    failures.lock().unwrap().push((i, e));
                }
            });
        }
    });
    let mut f = failures.into_inner().unwrap();
    f.sort();
    f
}

fn summarize(failures: &[(usize, String)], items: &[Vec<usize>]) -> String {
    let shown: Vec<String> = failures
        .iter()
        .take(3)
        .map(|(i, e)| format!("{:?}: {e}", items[*i]))
        .collect();
    format!("{} of {} failed; {}", failures.len(), items.len(), shown.join("; "))
}

fn q1_facts() -> Outcome {
    let p = q1();
    ensure(p.dim() == 4, || format!("dim {}", p.dim()))?;
    let nf = p.facets().map_err(err)?.len();
    ensure(nf == 8, || format!("{nf} facets"))?;
    let rank = p.rank().map_err(err)?;
    ensure(rank == 3, || format!("rank {rank}"))?;
    let v = normality_check(&p).map_err(err)?;
    ensure(!v.normal && v.has_idp == Some(false), || format!("verdict {v:?}"))?;
    let w = v.witness.ok_or("no witness")?;
    ensure(w.point == vec![1, 1, 1, 0, 2] && w.height == 2, || format!("witness {w:?}"))?;
    let split = decompose(&p, &w.point[..4], 2).map_err(err)?;
    ensure(split.is_none(), || format!("witness splits as {split:?}"))?;
    Ok("dim 4, 8 facets, rank 3, witness (1,1,1,0,2) at height 2".into())
}

/// Equal after permuting rows and columns.
fn equal_up_to_permutation(a: &IntMatrix, b: &IntMatrix) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return false;
    }
    let mut rows_a = a.row_vecs();
    rows_a.sort();
    let n = a.cols();
    fn perms(k: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                let hit = perms(k, cur, used, f);
                cur.pop();
                used[i] = false;
                if hit {
                    return true;
                }
            }
        }
        false
    }
    perms(n, &mut Vec::new(), &mut vec![false; n], &mut |perm| {
        let mut rows_b: Vec<Vec<Int>> = b
            .row_vecs()
            .into_iter()
            .map(|r| perm.iter().map(|&j| r[j].clone()).collect())
            .collect();
        rows_b.sort();
        rows_b == rows_a
    })
}

fn q2_facts() -> Outcome {
    let p = q2();
    let v = normality_check(&p).map_err(err)?;
    ensure(v.normal, || "Q2 reported non-normal".into())?;
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
    let m = pairing_matrix(&p).map_err(err)?;
    ensure(equal_up_to_permutation(&m, &printed), || format!("pairing matrix {m:?}"))?;
    let cg = class_group(&p).map_err(err)?;
    ensure(cg.snf.diag == ints(&[1, 1, 2, 2, 2, 0]), || format!("SNF diagonal {:?}", cg.snf.diag))?;
    ensure(cg.free_rank == 3 && cg.torsion == ints(&[2, 2, 2]), || format!("class group {cg}"))?;
    Ok(format!("normal, M matches up to permutation, SNF (1,1,2,2,2,0), Cl = {cg}"))
}

fn q1_q2_comparison() -> Outcome {
    let (a, b) = (q1(), q2());
    let c = a
        .combinatorially_equivalent(&b)
        .map_err(err)?
        .ok_or("no combinatorial equivalence found")?;
    let fa = a.facets().map_err(err)?;
    let fb = b.facets().map_err(err)?;
    let mut vseen = c.vertex_map.clone();
    vseen.sort();
    let mut fseen = c.facet_map.clone();
    fseen.sort();
    ensure(
        vseen == (0..b.vertices().len()).collect::<Vec<_>>() && fseen == (0..fb.len()).collect::<Vec<_>>(),
        || "maps are not bijections".into(),
    )?;
    for (j, f) in fa.iter().enumerate() {
        let g = &fb[c.facet_map[j]];
        for i in 0..a.vertices().len() {
            ensure(
                f.incident_vertices.contains(&i) == g.incident_vertices.contains(&c.vertex_map[i]),
                || format!("incidence differs at vertex {i}, facet {j}"),
            )?;
        }
    }
    let na = normality_check(&a).map_err(err)?.normal;
    let nb = normality_check(&b).map_err(err)?.normal;
    ensure(na != nb, || "normality verdicts agree".into())?;
    Ok("incidence-preserving bijection found; normality differs (false vs true)".into())
}

fn pnk_facets() -> Outcome {
    let tuples = small_tuples();
    let failures = par_failures(&tuples, |ns| {
        let p = make_pnk(ns).map_err(err)?;
        let mut computed = Vec::new();
        for f in p.facets().map_err(err)? {
            ensure(f.denominator.is_one(), || format!("fractional support form {:?}", f.normal))?;
            computed.push(f.normal.clone());
        }
        let mut predicted = predicted_facets_pnk(ns).map_err(err)?;
        computed.sort();
        predicted.sort();
        ensure(computed == predicted, || format!("{} computed vs {} predicted", computed.len(), predicted.len()))
    });
    ensure(failures.is_empty(), || summarize(&failures, &tuples))?;
    Ok(format!("{} tuples, facets equal predicted sets", tuples.len()))
}

fn pnk_invariants() -> Outcome {
    let tuples = small_tuples();
    let failures = par_failures(&tuples, |ns| {
        let p = make_pnk(ns).map_err(err)?;
        let d: usize = ns.iter().sum();
        let v = normality_check(&p).map_err(err)?;
        ensure(v.normal, || "not normal".into())?;
        ensure(lattice_span(&p).map_err(err)?.span_is_full, || "span not full".into())?;
        let all_equal = ns.iter().all(|&n| n == ns[0]);
        let gor = gorenstein_check(&p).map_err(err)?;
        ensure(gor == all_equal, || format!("Gorenstein {gor}"))?;
        let cg = class_group(&p).map_err(err)?;
        ensure(cg.free_rank == ns.len() - 1 && cg.torsion.is_empty(), || format!("class group {cg}"))?;
        let kp = kp_search(&p).map_err(err)?;
        ensure(kp.k == d + 1, || format!("k_P = {}", kp.k))
    });
    ensure(failures.is_empty(), || summarize(&failures, &tuples))?;
    Ok(format!("{} tuples: normal, full span, Gorenstein iff equal, Cl free of rank k-1, k_P = d+1", tuples.len()))
}

fn weight_tables() -> Outcome {
    let mut checked = 0;
    for n1 in 1..=3 {
        for n2 in 1..=3 {
            for n3 in 1..=3 {
                let p = make_pnk(&[n1, n2, n3]).map_err(err)?;
                let w = weights(&p).map_err(err)?;
                let table = wa(&[
                    ([1, 0], 1),
                    ([0, 1], 1),
                    ([-1, -1], 1),
                    ([-2, 0], n1),
                    ([0, -2], n2),
                    ([2, 2], n3),
                ]);
                ensure(weights_equivalent(&w, &table).map_err(err)?, || {
                    format!("P_({n1},{n2},{n3}) weights {:?}", w.weights)
                })?;
                ensure(weight_identities_hold(&p, &w).map_err(err)?, || {
                    format!("P_({n1},{n2},{n3}) weight identities fail")
                })?;
                checked += 1;
            }
        }
    }
    let posets: [(u8, Vec<usize>, Vec<([i64; 2], usize)>); 4] = [
        (1, vec![2, 2, 2], vec![([1, 0], 2), ([0, 1], 2), ([-1, -1], 2)]),
        (2, vec![2, 2, 2, 2], vec![([1, 0], 2), ([-1, 0], 2), ([0, 1], 2), ([0, -1], 2)]),
        (3, vec![2, 2, 2, 1], vec![([1, 0], 2), ([-1, -1], 2), ([0, 1], 2), ([0, -1], 1)]),
        (
            4,
            vec![2, 1, 1, 1, 2],
            vec![([1, 0], 2), ([-1, 0], 1), ([-1, 1], 1), ([0, 1], 1), ([0, -1], 2)],
        ),
    ];
    for (variant, params, table) in posets {
        let p = order_polytope(&make_pi(variant, &params).map_err(err)?).map_err(err)?;
        let w = weights(&p).map_err(err)?;
        ensure(weights_equivalent(&w, &wa(&table)).map_err(err)?, || {
            format!("shape {variant} {params:?} weights {:?}", w.weights)
        })?;
        ensure(weight_identities_hold(&p, &w).map_err(err)?, || {
            format!("shape {variant} weight identities fail")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} polytopes GL2(Z)-equivalent to their tables; facet relations hold"))
}

fn groebner_suite() -> Outcome {
    let tuples = tuples_up_to_vars(40);
    let failures = par_failures(&tuples, |ns| {
        let p = make_pnk(ns).map_err(err)?;
        ensure(p.lattice_points().map_err(err)?.len() == pnk_var_count(ns), || "variable count".into())?;
        let order = RevLexOrder::for_polytope(&p).map_err(err)?;
        let g = gbasis_pnk(ns).map_err(err)?;
        ensure(buchberger_verify(&g, &order, &p).map_err(err)?, || "Buchberger criterion fails".into())?;
        ensure(initial_ideal_squarefree(&g, &order), || "initial ideal not squarefree".into())
    });
    ensure(failures.is_empty(), || summarize(&failures, &tuples))?;

    let p = make_pnk(&[2, 2]).map_err(err)?;
    let order = RevLexOrder::for_polytope(&p).map_err(err)?;
    let blocks = gbasis_pnk_blocks(&[2, 2]).map_err(err)?;
    ensure(!blocks.b2.is_empty(), || "(b2) block of (2,2) is empty".into())?;
    let without: Vec<_> = blocks.b1.iter().chain(&blocks.b3).cloned().collect();
    ensure(!buchberger_verify(&without, &order, &p).map_err(err)?, || {
        "(2,2) without (b2) still passes".into()
    })?;

    let mg = graded_min_gens(&make_pnk(&[1, 1, 1]).map_err(err)?, 3).map_err(err)?;
    ensure(mg == BTreeMap::from([(2, 0), (3, 1)]), || format!("minimal generators {mg:?}"))?;
    Ok(format!(
        "{} tuples up to 40 variables verified, squarefree initial ideals; (2,2) without (b2) fails; P_(1,1,1) generators {{2:0, 3:1}}",
        tuples.len()
    ))
}

fn hibi_formula() -> Outcome {
    let mut rng = seeded(8);
    for i in 0..50 {
        let size = rng.gen_range(1..=6);
        let density = rng.gen_range(0.1..0.7);
        let poset = random_poset(&mut rng, size, density);
        let p = order_polytope(&poset).map_err(err)?;
        let rank = p.rank().map_err(err)? as i64;
        let expected = poset.hasse_edges_with_bounds() as i64 - size as i64 - 1;
        ensure(rank == expected, || format!("sample {i} {:?}: rank {rank}, formula {expected}", poset.covers()))?;
        ensure(normality_check(&p).map_err(err)?.normal, || format!("sample {i} not normal"))?;
        let cg = class_group(&p).map_err(err)?;
        ensure(cg.torsion.is_empty() && cg.free_rank as i64 == expected, || format!("sample {i}: {cg}"))?;
    }
    Ok("50 random posets: rank matches Hasse edge count, normal, torsionfree".into())
}

fn rank2_classification() -> Outcome {
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
    let mut cases: Vec<(Polytope, GaleType, Vec<usize>, String)> = Vec::new();
    let shapes: [(u8, GaleType, Vec<(usize, usize)>); 4] = [
        (1, GaleType::G1, vec![(2, 3); 3]),
        (2, GaleType::G2, vec![(2, 3); 4]),
        (3, GaleType::G3, vec![(2, 3), (2, 3), (2, 3), (1, 3)]),
        (4, GaleType::G4, vec![(2, 3), (1, 3), (1, 3), (1, 3), (2, 3)]),
    ];
    for (variant, kind, ranges) in shapes {
        for params in grid(&ranges) {
            let poset = make_pi(variant, &params).map_err(err)?;
            cases.push((order_polytope(&poset).map_err(err)?, kind, params.clone(), format!("O_{variant}{params:?}")));
        }
    }
    for ns in grid(&[(1, 3); 3]) {
        cases.push((make_pnk(&ns).map_err(err)?, GaleType::G5, ns.clone(), format!("P{ns:?}")));
    }
    let mut counts = BTreeMap::new();
    for (p, kind, expected, label) in &cases {
        match classify_rank2(p).map_err(err)? {
            Rank2Class::Matched { kind: k, params } if k == *kind => {
                ensure(kind.same_diagram(&params, expected).map_err(err)?, || {
                    format!("{label}: read {params:?}, expected {expected:?}")
                })?;
            }
            other => return Err(format!("{label}: classified as {other}, expected {kind}")),
        }
        *counts.entry(kind.name()).or_insert(0) += 1;
    }
    Ok(format!("{} polytopes classified with parameters read back: {counts:?}", cases.len()))
}

fn rank01_structure() -> Outcome {
    let mut rng = seeded(10);
    let (mut rank0, mut rank1, mut simple) = (0, 0, 0);
    for i in 0..200 {
        let p = random_01_polytope(&mut rng, 4, 16).map_err(err)?;
        let rank = p.rank().map_err(err)?;
        if rank == 0 {
            rank0 += 1;
            let mut cur = p.clone();
            while cur.vertices().len() > 1 {
                cur = match cur.pyramid_decompose().map_err(err)? {
                    Some((_, base)) => base,
                    None => return Err(format!("sample {i}: rank 0 but not a pyramid at dim {}", cur.dim())),
                };
            }
            let cg = class_group(&p).map_err(err)?;
            ensure(cg.free_rank == 0 && cg.torsion.is_empty(), || format!("sample {i}: Cl = {cg}"))?;
        }
        if rank == 1 {
            rank1 += 1;
            ensure(normality_check(&p).map_err(err)?.normal, || format!("sample {i}: rank 1, not normal"))?;
            let cg = class_group(&p).map_err(err)?;
            ensure(cg.free_rank == 1 && cg.torsion.is_empty(), || format!("sample {i}: rank 1, Cl = {cg}"))?;
        }
        if p.is_simple().map_err(err)? {
            simple += 1;
            let model = simplex_product_model(&p).map_err(err)?;
            ensure(p.combinatorially_equivalent(&model).map_err(err)?.is_some(), || {
                format!("sample {i}: simple but not a product of simplices")
            })?;
        }
    }
    ensure(rank0 > 0 && rank1 > 0 && simple > 0, || format!("degenerate sample: {rank0}/{rank1}/{simple}"))?;
    Ok(format!("200 samples: {rank0} rank 0 (simplices), {rank1} rank 1 (normal, Cl = Z), {simple} simple (simplex products)"))
}

fn product_identity() -> Outcome {
    let mut rng = seeded(11);
    for i in 0..20 {
        let p = random_01_polytope(&mut rng, 3, 8).map_err(err)?;
        let q = random_01_polytope(&mut rng, 3, 8).map_err(err)?;
        let pq = p.product(&q);
        let (fp, fq, fpq) = (
            p.facets().map_err(err)?.len(),
            q.facets().map_err(err)?.len(),
            pq.facets().map_err(err)?.len(),
        );
        ensure(fpq == fp + fq, || format!("pair {i}: {fpq} facets vs {fp} + {fq}"))?;
        let (rp, rq, rpq) = (p.rank().map_err(err)?, q.rank().map_err(err)?, pq.rank().map_err(err)?);
        ensure(rpq == rp + rq + 1, || format!("pair {i}: rank {rpq} vs {rp} + {rq} + 1"))?;
    }
    Ok("20 random pairs: facets add, rank(PxQ) = rank P + rank Q + 1".into())
}

fn pyramid_invariance() -> Outcome {
    let mut rng = seeded(12);
    let mut normal = 0;
    for i in 0..20 {
        let base = random_01_polytope(&mut rng, 4, 10).map_err(err)?;
        let d = base.ambient_dim();
        let mut verts: Vec<Vec<i64>> = base
            .vertices()
            .iter()
            .map(|v| v.iter().copied().chain([0]).collect())
            .collect();
        let mut apex = vec![0; d + 1];
        apex[d] = 1;
        verts.push(apex);
        let pyr = Polytope::new(d + 1, verts).map_err(err)?;
        let nb = normality_check(&base).map_err(err)?.normal;
        let np = normality_check(&pyr).map_err(err)?.normal;
        ensure(nb == np, || format!("sample {i}: normality {nb} vs {np}"))?;
        let (cb, cp) = if nb {
            normal += 1;
            (class_group(&base).map_err(err)?, class_group(&pyr).map_err(err)?)
        } else {
            (class_group_with(&base, true).map_err(err)?, class_group_with(&pyr, true).map_err(err)?)
        };
        ensure(cb.shape() == cp.shape(), || format!("sample {i}: {cb} vs {cp}"))?;
    }
    Ok(format!("20 pyramids ({normal} over normal bases): class groups match their bases"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Q1 facts", q1_facts),
        ("Q2 facts", q2_facts),
        ("Q1 and Q2 equivalent but not isomorphic", q1_q2_comparison),
        ("P_n facets", pnk_facets),
        ("P_n invariants", pnk_invariants),
        ("weights", weight_tables),
        ("Groebner suite", groebner_suite),
        ("Hibi formula", hibi_formula),
        ("rank-2 classification", rank2_classification),
        ("rank 0 and 1 structure", rank01_structure),
        ("product identity", product_identity),
        ("pyramid invariance", pyramid_invariance),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| *f == id || name.to_lowercase().contains(&f.to_lowercase())) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
