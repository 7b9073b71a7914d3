use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use toriclass::classgroup::class_group;
use toriclass::gale::{classify_rank2, GaleType, Rank2Class};
use toriclass::lattice::lattice_span;
use toriclass::random::{random_01_polytope, seeded};
use toriclass::{Error, Polytope};

use crate::report::version;
use crate::Failure;

const MAX_COUNT: usize = 100_000;
const MAX_DIM: usize = 8;
const MAX_VERTICES: usize = 16;

enum Outcome {
    NotRank2,
    Skipped(String),
    Class(Rank2Class),
}

fn examine(p: &Polytope) -> Result<Outcome, Error> {
    if p.dim() == 0 || p.rank()? != 2 {
        return Ok(Outcome::NotRank2);
    }
    if !lattice_span(p)?.span_is_full {
        return Ok(Outcome::Skipped("span not full".into()));
    }
    let cg = match class_group(p) {
        Ok(cg) => cg,
        Err(Error::NotNormal) => return Ok(Outcome::Skipped("not normal".into())),
        Err(e) => return Err(e),
    };
    if !cg.is_torsionfree() {
        return Ok(Outcome::Skipped(format!("torsion in {cg}")));
    }
    Ok(Outcome::Class(classify_rank2(p)?))
}

/// Samples are drawn sequentially from one seeded stream, examined in
/// parallel, and tallied in sampling order.
pub fn run(seed: u64, count: usize, dim_max: usize) -> Result<Value, Failure> {
    if count > MAX_COUNT || dim_max == 0 || dim_max > MAX_DIM {
        return Err(Failure::Usage(format!(
            "survey needs count <= {MAX_COUNT} and 1 <= dim-max <= {MAX_DIM}"
        )));
    }
    let mut rng = seeded(seed);
    let samples = (0..count)
        .map(|_| random_01_polytope(&mut rng, dim_max, MAX_VERTICES))
        .collect::<Result<Vec<_>, _>>()?;
    let outcomes: Vec<Result<Outcome, Error>> = samples.par_iter().map(examine).collect();

    let mut histogram: BTreeMap<String, usize> = GaleType::ALL.iter().map(|t| (t.name().to_string(), 0)).collect();
    histogram.insert("other".into(), 0);
    let (mut not_rank2, mut skipped, mut errors) = (0, Vec::new(), Vec::new());
    let mut others = Vec::new();
    for (i, (p, o)) in samples.iter().zip(outcomes).enumerate() {
        match o {
            Ok(Outcome::NotRank2) => not_rank2 += 1,
            Ok(Outcome::Skipped(why)) => skipped.push(json!({ "sample": i, "reason": why })),
            Ok(Outcome::Class(Rank2Class::Matched { kind, .. })) => *histogram.get_mut(kind.name()).unwrap() += 1,
            Ok(Outcome::Class(Rank2Class::Other { diagram })) => {
                *histogram.get_mut("other").unwrap() += 1;
                others.push(json!({
                    "sample": i,
                    "vertices": p.vertices(),
                    "canonical": diagram.canonical_string(),
                }));
            }
            Err(e) => errors.push(json!({ "sample": i, "error": e.to_string() })),
        }
    }
    Ok(json!({
        "artifact": version(),
        "parameters": { "seed": seed, "count": count, "dim_max": dim_max, "max_vertices": MAX_VERTICES, "generator": "ChaCha8" },
        "rank2": histogram.values().sum::<usize>(),
        "histogram": histogram,
        "not_rank2": not_rank2,
        "skipped": { "count": skipped.len(), "samples": skipped },
        "other_findings": others,
        "errors": errors,
    }))
}
