use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};

use toriclass::classgroup::{class_group_with, kp_search, pairing_matrix, weights_from, ClassGroupPresentation};
use toriclass::families::make_pnk;
use toriclass::gale::{classify_rank2, dual_diagram, gale_transform, is_simplicial_dual, render_svg, Rank2Class};
use toriclass::lattice::{gorenstein_check, lattice_span, normality_check};
use toriclass::toric::{buchberger_verify, gbasis_pnk_blocks, graded_min_gens, initial_ideal_squarefree, RevLexOrder};
use toriclass::{Error, Int, IntMatrix, Polytope};

use crate::input::Loaded;
use crate::Failure;

pub fn version() -> Value {
    json!({ "name": "toriclass", "version": env!("CARGO_PKG_VERSION") })
}

pub fn ints(v: &[Int]) -> Value {
    Value::from(v.iter().map(ToString::to_string).collect::<Vec<_>>())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::from((0..m.rows()).map(|i| ints(m.row(i))).collect::<Vec<_>>())
}

pub fn skipped(reason: impl Into<String>) -> Value {
    json!({ "status": "skipped", "reason": reason.into() })
}

/// The value, or a skipped marker carrying the error text.
fn field(r: Result<Value, Error>) -> Value {
    r.unwrap_or_else(|e| skipped(e.to_string()))
}

/// Wall-clock timings, recorded only when asked for so that default
/// reports are byte-stable.
pub struct Clock {
    enabled: bool,
    laps: BTreeMap<String, f64>,
}

impl Clock {
    pub fn new(enabled: bool) -> Self {
        Clock {
            enabled,
            laps: BTreeMap::new(),
        }
    }

    pub fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.laps.insert(name.to_string(), start.elapsed().as_secs_f64() * 1000.0);
        }
        out
    }

    pub fn attach(self, report: &mut Value) {
        if self.enabled {
            report["timing_ms"] = json!(self.laps);
        }
    }
}

fn class_group_value(cg: &ClassGroupPresentation) -> Value {
    json!({
        "description": cg.to_string(),
        "free_rank": cg.free_rank,
        "torsion": ints(&cg.torsion),
        "smith_diagonal": ints(&cg.snf.diag),
        "formal": cg.formal,
    })
}

fn weights_value(cg: &ClassGroupPresentation) -> Value {
    field(weights_from(cg).map(|w| {
        json!({
            "rank": w.rank,
            "by_facet": w.weights.iter().map(|v| ints(v)).collect::<Vec<_>>(),
        })
    }))
}

fn kp_value(p: &Polytope) -> Value {
    field(kp_search(p).map(|kp| {
        json!({
            "k": kp.k,
            "steps": kp.steps.iter().map(|(v, f)| json!({ "point": v, "facet": f })).collect::<Vec<_>>(),
        })
    }))
}

fn class_value(c: &Rank2Class) -> Value {
    match c {
        Rank2Class::Matched { kind, params } => json!({
            "class": c.to_string(),
            "type": kind.name(),
            "parameters": kind.parameter_names().iter().zip(params).map(|(n, v)| (n.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
        }),
        Rank2Class::Other { diagram } => json!({
            "class": "other",
            "canonical": diagram.canonical_string(),
        }),
    }
}

pub fn analyze(l: &Loaded, force: bool, timing: bool) -> Result<Value, Failure> {
    let p = &l.polytope;
    let mut clock = Clock::new(timing);
    let facets = clock.time("facets", || p.facets().map(<[_]>::len));
    let normality = clock.time("normality", || normality_check(p));
    let normal = normality.as_ref().ok().map(|v| v.normal);
    let not_normal_reason = match &normality {
        Ok(_) => "polytope is not normal".to_string(),
        Err(e) => format!("normality unknown: {e}"),
    };
    let gorenstein = if normal == Some(true) {
        field(clock.time("gorenstein", || gorenstein_check(p)).map(Value::from))
    } else {
        skipped(not_normal_reason.clone())
    };
    let cg = if normal == Some(true) || force {
        Some(clock.time("class_group", || class_group_with(p, force)))
    } else {
        None
    };
    let (class_group, weights) = match &cg {
        Some(Ok(cg)) => (class_group_value(cg), weights_value(cg)),
        Some(Err(e)) => (skipped(e.to_string()), skipped(e.to_string())),
        None => {
            let reason = format!("{not_normal_reason}; rerun with --force for a formal result");
            (skipped(reason.clone()), skipped(reason))
        }
    };
    let rank = p.rank();
    let diagram = match (&rank, &cg) {
        (Ok(2), Some(Ok(cg))) if !cg.formal => field(clock.time("diagram", || classify_rank2(p)).map(|c| class_value(&c))),
        (Ok(2), _) => skipped(not_normal_reason),
        (Ok(r), _) => skipped(format!("rank {r}; diagrams are classified for rank 2")),
        (Err(e), _) => skipped(e.to_string()),
    };
    let mut report = json!({
        "artifact": version(),
        "input": l.echo,
        "dim": p.dim(),
        "vertex_count": p.vertices().len(),
        "lattice_point_count": field(p.lattice_points().map(|v| json!(v.len()))),
        "facet_count": field(facets.map(Value::from)),
        "rank": field(rank.map(Value::from)),
        "lattice_span_full": field(lattice_span(p).map(|s| json!(s.span_is_full))),
        "normality": field(normality.map(|v| serde_json::to_value(v).expect("verdict serializes"))),
        "gorenstein": gorenstein,
        "class_group": class_group,
        "weights": weights,
        "k_p": clock.time("k_p", || kp_value(p)),
        "diagram": diagram,
    });
    clock.attach(&mut report);
    Ok(report)
}

pub fn facets(l: &Loaded) -> Result<Value, Failure> {
    let p = &l.polytope;
    let d = p.ambient_dim();
    let list: Vec<Value> = p
        .facets()?
        .iter()
        .map(|f| {
            json!({
                "a": ints(&f.normal[..d]),
                "b": f.normal[d].to_string(),
                "denominator": f.denominator.to_string(),
                "incident_vertices": f.incident_vertices,
            })
        })
        .collect();
    Ok(json!({
        "artifact": version(),
        "input": l.echo,
        "dim": p.dim(),
        "facet_count": list.len(),
        "facets": list,
    }))
}

pub fn classgroup(l: &Loaded, force: bool) -> Result<Value, Failure> {
    let p = &l.polytope;
    let cg = class_group_with(p, force)?;
    Ok(json!({
        "artifact": version(),
        "input": l.echo,
        "pairing_matrix": matrix(&pairing_matrix(p)?),
        "class_group": class_group_value(&cg),
        "weights": weights_value(&cg),
        "k_p": kp_value(p),
    }))
}

pub fn gale(l: &Loaded, svg: Option<&Path>) -> Result<Value, Failure> {
    let p = &l.polytope;
    let rank = p.rank()?;
    if rank != 2 {
        return Err(Error::RankNotTwo(rank).into());
    }
    let class = classify_rank2(p)?;
    let diagram = dual_diagram(p)?;
    let g = gale_transform(p);
    let mut report = json!({
        "artifact": version(),
        "input": l.echo,
        "rank": rank,
        "gale_transform": {
            "dim": g.dim,
            "vectors": g.vectors.iter().map(|v| ints(v)).collect::<Vec<_>>(),
        },
        "dual_diagram": {
            "directions": diagram.directions.iter().map(|v| ints(v)).collect::<Vec<_>>(),
            "multiplicities": diagram.multiplicities,
            "slots": diagram.slots(),
            "zero_count": diagram.zero_count,
            "canonical": diagram.canonical_string(),
            "simplicial": is_simplicial_dual(&diagram),
        },
        "classification": class_value(&class),
    });
    if let Some(path) = svg {
        std::fs::write(path, render_svg(&diagram))
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
        report["svg"] = json!(path.display().to_string());
    }
    Ok(report)
}

/// Invariants compared by `compare`, each rendered so that skipped values
/// compare by their reason.
fn invariants(p: &Polytope) -> BTreeMap<&'static str, Value> {
    let normal = normality_check(p).map(|v| v.normal);
    let mut m = BTreeMap::new();
    m.insert("dim", json!(p.dim()));
    m.insert("facet_count", field(p.facets().map(|f| json!(f.len()))));
    m.insert("rank", field(p.rank().map(Value::from)));
    m.insert("normality", field(normal.clone().map(Value::from)));
    let gated = |f: &dyn Fn() -> Result<Value, Error>| match &normal {
        Ok(true) => field(f()),
        Ok(false) => skipped("polytope is not normal"),
        Err(e) => skipped(e.to_string()),
    };
    m.insert("gorenstein", gated(&|| gorenstein_check(p).map(Value::from)));
    m.insert(
        "class_group",
        gated(&|| class_group_with(p, false).map(|cg| json!(cg.to_string()))),
    );
    m
}

pub fn compare(a: &Loaded, b: &Loaded, timing: bool) -> Result<Value, Failure> {
    let mut clock = Clock::new(timing);
    let corr = clock.time("equivalence", || a.polytope.combinatorially_equivalent(&b.polytope))?;
    let (ia, ib) = clock.time("invariants", || (invariants(&a.polytope), invariants(&b.polytope)));
    let differences: Vec<&str> = ia.keys().filter(|k| ia[*k] != ib[*k]).copied().collect();
    let table: serde_json::Map<String, Value> = ia
        .keys()
        .map(|k| (k.to_string(), json!({ "first": ia[k], "second": ib[k] })))
        .collect();
    let mut report = json!({
        "artifact": version(),
        "first": a.echo,
        "second": b.echo,
        "combinatorially_equivalent": corr.is_some(),
        "correspondence": corr.map(|c| json!({ "vertex_map": c.vertex_map, "facet_map": c.facet_map })),
        "invariants": table,
        "differences": differences,
    });
    clock.attach(&mut report);
    Ok(report)
}

pub fn toric_gb(ns: &[usize], min_gens: Option<u32>) -> Result<Value, Failure> {
    let p = make_pnk(ns).map_err(|e| Failure::Usage(e.to_string()))?;
    let points = p.lattice_points()?;
    let order = RevLexOrder::for_polytope(&p)?;
    let blocks = gbasis_pnk_blocks(ns)?;
    let all = blocks.all();
    let show = |bs: &[toriclass::toric::Binomial]| -> Value {
        Value::from(bs.iter().map(|b| b.display_with(points)).collect::<Vec<_>>())
    };
    let verified = buchberger_verify(&all, &order, &p)?;
    let mut report = json!({
        "artifact": version(),
        "input": { "family": "pnk", "params": ns },
        "variables_ascending": order.ascending().iter().map(|&i| &points[i]).collect::<Vec<_>>(),
        "basis": { "b1": show(&blocks.b1), "b2": show(&blocks.b2), "b3": show(&blocks.b3) },
        "size": all.len(),
        "groebner_basis_verified": verified,
        "initial_ideal_squarefree": initial_ideal_squarefree(&all, &order),
    });
    if let Some(d) = min_gens {
        let counts = graded_min_gens(&p, d)?;
        report["minimal_generators_by_degree"] =
            json!(counts.into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>());
    }
    Ok(report)
}
