use std::path::{Path, PathBuf};

use clap::Args;
use serde_json::{json, Value};

use toriclass::families::{FamilySpec, Poset, PosetJson};
use toriclass::polytope::PolytopeJson;
use toriclass::{Error, Polytope};

use crate::Failure;

/// Where the polytope comes from; exactly one source is required.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Polytope JSON file (`{"ambient_dim": d, "vertices": [[...], ...]}`).
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
    /// Poset JSON file (`{"size": n, "covers": [[i, j], ...]}`); uses its order polytope.
    #[arg(long, value_name = "PATH")]
    pub poset: Option<PathBuf>,
    /// Named construction: `pnk 1 1 2`, `pi1 2 2 2`, `q1`, `cube 3`, `simplex 4`, ...
    #[arg(long, num_args = 1.., value_name = "TAG PARAMS")]
    pub family: Option<Vec<String>>,
}

/// A polytope together with a description of its source.
pub struct Loaded {
    pub polytope: Polytope,
    pub echo: Value,
}

/// Errors while building the input are usage errors, except guard trips.
fn bad_input(e: Error) -> Failure {
    match e {
        Error::TooLarge { .. } => Failure::Domain(e.to_string()),
        e => Failure::Usage(e.to_string()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())).into())
}

pub fn load_file(path: &Path) -> Result<Loaded, Failure> {
    let j: PolytopeJson = parse(path, &read(path)?)?;
    let polytope = Polytope::from_json(&j).map_err(bad_input)?;
    Ok(Loaded {
        echo: json!({
            "source": "file",
            "path": path.display().to_string(),
            "name": j.name,
            "ambient_dim": j.ambient_dim,
            "vertices": polytope.vertices(),
        }),
        polytope,
    })
}

impl InputArgs {
    pub fn load(&self) -> Result<Loaded, Failure> {
        if let Some(path) = &self.file {
            return load_file(path);
        }
        if let Some(path) = &self.poset {
            let j: PosetJson = parse(path, &read(path)?)?;
            let poset = Poset::from_json(&j).map_err(bad_input)?;
            let polytope = FamilySpec::Order(poset).build().map_err(bad_input)?;
            return Ok(Loaded {
                echo: json!({
                    "source": "poset",
                    "path": path.display().to_string(),
                    "poset": j,
                    "ambient_dim": polytope.ambient_dim(),
                    "vertices": polytope.vertices(),
                }),
                polytope,
            });
        }
        let words = self.family.as_deref().unwrap_or_default();
        let (tag, rest) = words
            .split_first()
            .ok_or_else(|| Failure::Usage("--family needs a tag".into()))?;
        let params = rest
            .iter()
            .map(|w| {
                w.parse::<usize>()
                    .map_err(|_| Failure::Usage(format!("family parameter {w:?} is not a nonnegative integer")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let spec = FamilySpec::parse(tag, &params).map_err(bad_input)?;
        let polytope = spec.build().map_err(bad_input)?;
        Ok(Loaded {
            echo: json!({
                "source": "family",
                "family": tag.to_ascii_lowercase(),
                "params": params,
                "label": spec.label(),
                "ambient_dim": polytope.ambient_dim(),
                "vertices": polytope.vertices(),
            }),
            polytope,
        })
    }
}
