//! Gale transforms, diagrams of dual polytopes from weights, and planar
//! standard diagrams with an exact canonical form.
//!
//! A planar diagram is stored as primitive integer directions, so angular
//! comparisons stay exact. Its standard form places the lines through the
//! occupied directions at equal angles; the circle then carries `2L` slots
//! for `L` lines, and the diagram is the cyclic sequence of slot
//! multiplicities, read up to rotation and reflection.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::classgroup::{class_group, weight_identities_hold, weights_from, WeightAssignment};
use crate::error::{Error, Result};
use crate::lattice::lattice_span;
use crate::linalg::{integer_kernel_basis, primitive, Int, IntMatrix, Rat};
use crate::polytope::{Point, Polytope};

/// Vectors `b̄_i ∈ Z^dim`, one per input point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaleConfiguration {
    pub dim: usize,
    pub vectors: Vec<Vec<Int>>,
}

impl GaleConfiguration {
    pub fn zero_flags(&self) -> Vec<bool> {
        self.vectors.iter().map(|v| v.iter().all(Zero::is_zero)).collect()
    }

    /// `Σ_i b̄_i ⊗ (v_i, 1) = 0`.
    pub fn is_dependency_of(&self, points: &[Point]) -> bool {
        if points.len() != self.vectors.len() {
            return false;
        }
        let d = points.first().map_or(0, Vec::len);
        (0..self.dim).all(|j| {
            (0..=d).all(|c| {
                points
                    .iter()
                    .zip(&self.vectors)
                    .map(|(p, b)| &b[j] * Int::from(if c < d { p[c] } else { 1 }))
                    .sum::<Int>()
                    .is_zero()
            })
        })
    }
}

/// Columns of a kernel basis of the matrix with columns `(v_i, 1)`.
pub fn gale_transform(p: &Polytope) -> GaleConfiguration {
    let d = p.ambient_dim();
    let cols: Vec<Vec<Int>> = p.vertices().iter().map(|v| Polytope::homogenize(v)).collect();
    let m = IntMatrix::from_columns(&cols, d + 1);
    let basis = integer_kernel_basis(&m);
    let vectors = (0..p.vertices().len())
        .map(|i| basis.iter().map(|b| b[i].clone()).collect())
        .collect();
    GaleConfiguration {
        dim: basis.len(),
        vectors,
    }
}

/// The weights as a configuration, one vector per facet, after checking
/// `Σ_F β_F^(j) (a_F, b_F) = 0` against `p`.
pub fn dual_gale_from_weights(p: &Polytope, w: &WeightAssignment) -> Result<GaleConfiguration> {
    if w.weights.len() != p.facets()?.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} weights for {} facets",
            w.weights.len(),
            p.facets()?.len()
        )));
    }
    if !weight_identities_hold(p, w)? {
        return Err(Error::ShapeMismatch("weights do not satisfy the facet relations".into()));
    }
    Ok(GaleConfiguration {
        dim: w.rank,
        vectors: w.weights.clone(),
    })
}

/// A polytope dual to a full-dimensional `p`: the polar of `p` translated by
/// minus its vertex centroid, scaled to integer coordinates.
pub fn polar_dual(p: &Polytope) -> Result<Polytope> {
    let d = p.ambient_dim();
    if p.dim() != d {
        return Err(Error::InvalidParameters("polar needs a full-dimensional polytope".into()));
    }
    let n = Int::from(p.vertices().len());
    let centroid: Vec<Rat> = (0..d)
        .map(|i| Rat::new(p.vertices().iter().map(|v| Int::from(v[i])).sum(), n.clone()))
        .collect();
    let mut verts: Vec<Vec<Rat>> = Vec::new();
    for f in p.facets()? {
        let a = f.a();
        let shift: Rat = a.iter().zip(&centroid).map(|(x, c)| x * c).sum::<Rat>() + f.b();
        verts.push(a.iter().map(|x| x / &shift).collect());
    }
    let lcm = verts
        .iter()
        .flatten()
        .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let points = verts
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| {
                    let y = (x * Rat::from_integer(lcm.clone())).to_integer();
                    i64::try_from(y).map_err(|_| Error::TooLarge {
                        what: "polar vertex coordinate".into(),
                        count: u128::MAX,
                        limit: i64::MAX as u128,
                    })
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Polytope::new(d, points)
}

fn half(v: &[Int; 2]) -> u8 {
    if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
        0
    } else {
        1
    }
}

/// Counterclockwise angle order starting at the positive x-axis.
fn angle_cmp(a: &[Int; 2], b: &[Int; 2]) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a[0] * &b[1] - &a[1] * &b[0];
        if cross.is_positive() {
            Ordering::Less
        } else if cross.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

fn neg(v: &[Int; 2]) -> [Int; 2] {
    [-&v[0], -&v[1]]
}

/// A planar diagram: distinct primitive directions in counterclockwise
/// order with multiplicities, antipodal pairs, and the number of zero vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardGaleDiagram {
    pub directions: Vec<[Int; 2]>,
    pub multiplicities: Vec<usize>,
    pub oppositions: Vec<(usize, usize)>,
    pub zero_count: usize,
}

impl StandardGaleDiagram {
    /// Multiplicities of the `2L` slots, counterclockwise from the first
    /// occupied or antipodal direction at or after the positive x-axis.
    pub fn slots(&self) -> Vec<usize> {
        let mut all: Vec<([Int; 2], usize)> = self
            .directions
            .iter()
            .cloned()
            .zip(self.multiplicities.iter().copied())
            .collect();
        for d in &self.directions {
            let o = neg(d);
            if !self.directions.contains(&o) {
                all.push((o, 0));
            }
        }
        all.sort_by(|a, b| angle_cmp(&a.0, &b.0));
        all.into_iter().map(|(_, m)| m).collect()
    }

    /// Number of lines through the origin carrying a point.
    pub fn line_count(&self) -> usize {
        self.slots().len() / 2
    }

    /// Lexicographically smallest slot sequence over all rotations and
    /// reflections.
    pub fn canonical(&self) -> Vec<usize> {
        dihedral_min(&self.slots())
    }

    pub fn canonical_string(&self) -> String {
        let body = self
            .canonical()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",");
        if self.zero_count > 0 {
            format!("[{body}]+0x{}", self.zero_count)
        } else {
            format!("[{body}]")
        }
    }
}

/// All rotations and reflections of a cyclic sequence.
fn dihedral_images(s: &[usize]) -> Vec<Vec<usize>> {
    let n = s.len();
    let mut out = Vec::with_capacity(2 * n);
    for r in 0..n.max(1) {
        let rot: Vec<usize> = (0..n).map(|i| s[(i + r) % n]).collect();
        let mut rev = rot.clone();
        rev.reverse();
        out.push(rot);
        out.push(rev);
    }
    out
}

fn dihedral_min(s: &[usize]) -> Vec<usize> {
    dihedral_images(s).into_iter().min().unwrap_or_default()
}

/// Groups the nonzero vectors of a planar configuration by direction.
pub fn standard_diagram(g: &GaleConfiguration) -> Result<StandardGaleDiagram> {
    if g.dim != 2 {
        return Err(Error::NotPlanar(g.dim));
    }
    let mut zero_count = 0;
    let mut dirs: Vec<([Int; 2], usize)> = Vec::new();
    for v in &g.vectors {
        if v.iter().all(Zero::is_zero) {
            zero_count += 1;
            continue;
        }
        let p = primitive(v);
        let d = [p[0].clone(), p[1].clone()];
        match dirs.iter_mut().find(|(e, _)| *e == d) {
            Some((_, m)) => *m += 1,
            None => dirs.push((d, 1)),
        }
    }
    dirs.sort_by(|a, b| angle_cmp(&a.0, &b.0));
    let (directions, multiplicities): (Vec<_>, Vec<_>) = dirs.into_iter().unzip();
    let mut oppositions = Vec::new();
    for i in 0..directions.len() {
        for j in i + 1..directions.len() {
            if directions[j] == neg(&directions[i]) {
                oppositions.push((i, j));
            }
        }
    }
    Ok(StandardGaleDiagram {
        directions,
        multiplicities,
        oppositions,
        zero_count,
    })
}

/// True iff no line carries points at both ends.
pub fn is_simplicial_dual(d: &StandardGaleDiagram) -> bool {
    d.oppositions.is_empty()
}

/// The five named planar diagrams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GaleType {
    G1,
    G2,
    G3,
    G4,
    G5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Empty,
    One,
    Param(usize),
}

impl GaleType {
    pub const ALL: [GaleType; 5] = [GaleType::G1, GaleType::G2, GaleType::G3, GaleType::G4, GaleType::G5];

    pub fn name(self) -> &'static str {
        match self {
            GaleType::G1 => "G1",
            GaleType::G2 => "G2",
            GaleType::G3 => "G3",
            GaleType::G4 => "G4",
            GaleType::G5 => "G5",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        GaleType::ALL.into_iter().find(|t| t.name().eq_ignore_ascii_case(s))
    }

    /// Parameter names in reading order.
    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            GaleType::G1 => &["n1", "n2", "n3"],
            GaleType::G2 => &["n1", "n2", "m1", "m2"],
            GaleType::G3 => &["n1", "n2", "n3", "m1"],
            GaleType::G4 => &["n1", "n2", "m1", "l1", "l2"],
            GaleType::G5 => &["n1", "n2", "n3"],
        }
    }

    /// Slots counterclockwise; lines are equally spaced.
    fn pattern(self) -> Vec<Slot> {
        use Slot::*;
        match self {
            GaleType::G1 => vec![Empty, Param(0), Empty, Param(1), Empty, Param(2)],
            GaleType::G2 => vec![Param(3), Param(0), Param(2), Param(1)],
            GaleType::G3 => vec![Empty, Param(0), Param(3), Param(1), Empty, Param(2)],
            GaleType::G4 => vec![Empty, Param(0), Param(3), Param(2), Param(1), Param(4)],
            GaleType::G5 => vec![One, Param(0), One, Param(1), One, Param(2)],
        }
    }

    /// Slot multiplicities of the diagram with these parameters.
    pub fn slots(self, params: &[usize]) -> Result<Vec<usize>> {
        let names = self.parameter_names();
        if params.len() != names.len() || params.contains(&0) {
            return Err(Error::InvalidParameters(format!(
                "{} takes {} positive parameters",
                self.name(),
                names.len()
            )));
        }
        Ok(self
            .pattern()
            .into_iter()
            .map(|s| match s {
                Slot::Empty => 0,
                Slot::One => 1,
                Slot::Param(i) => params[i],
            })
            .collect())
    }

    /// True iff both parameter tuples give the same diagram up to rotation
    /// and reflection.
    pub fn same_diagram(self, a: &[usize], b: &[usize]) -> Result<bool> {
        Ok(dihedral_min(&self.slots(a)?) == dihedral_min(&self.slots(b)?))
    }

    /// Every parameter tuple whose diagram is `slots` up to rotation and
    /// reflection, smallest first.
    fn read(self, slots: &[usize]) -> Vec<Vec<usize>> {
        let pattern = self.pattern();
        if pattern.len() != slots.len() {
            return vec![];
        }
        let arity = self.parameter_names().len();
        let mut found: Vec<Vec<usize>> = dihedral_images(slots)
            .into_iter()
            .filter_map(|img| {
                let mut params = vec![0; arity];
                for (s, &m) in pattern.iter().zip(&img) {
                    match *s {
                        Slot::Empty if m != 0 => return None,
                        Slot::One if m != 1 => return None,
                        Slot::Param(_) if m == 0 => return None,
                        Slot::Param(i) => params[i] = m,
                        _ => {}
                    }
                }
                Some(params)
            })
            .collect();
        found.sort();
        found.dedup();
        found
    }
}

impl fmt::Display for GaleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of [`classify_rank2`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rank2Class {
    Matched { kind: GaleType, params: Vec<usize> },
    Other { diagram: StandardGaleDiagram },
}

impl fmt::Display for Rank2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank2Class::Matched { kind, params } => write!(
                f,
                "{kind}({})",
                params.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            ),
            Rank2Class::Other { diagram } => write!(f, "other{}", diagram.canonical_string()),
        }
    }
}

/// Matches a planar diagram against the named templates. Parameters are the
/// lexicographically smallest reading; diagrams with zero vectors are
/// reported as `Other`.
pub fn match_diagram(d: &StandardGaleDiagram) -> Rank2Class {
    if d.zero_count == 0 {
        let slots = d.slots();
        for kind in GaleType::ALL {
            if let Some(params) = kind.read(&slots).into_iter().next() {
                return Rank2Class::Matched { kind, params };
            }
        }
    }
    Rank2Class::Other { diagram: d.clone() }
}

/// The diagram of the dual polytope of `p`, computed from the weights.
pub fn dual_diagram(p: &Polytope) -> Result<StandardGaleDiagram> {
    let cg = class_group(p)?;
    if cg.free_rank != 2 {
        return Err(Error::RankNotTwo(cg.free_rank));
    }
    let w = weights_from(&cg)?;
    standard_diagram(&dual_gale_from_weights(p, &w)?)
}

/// Classifies a rank-2 polytope by the diagram of its dual.
pub fn classify_rank2(p: &Polytope) -> Result<Rank2Class> {
    let rank = p.rank()?;
    if rank != 2 {
        return Err(Error::RankNotTwo(rank));
    }
    if !lattice_span(p)?.span_is_full {
        return Err(Error::SpanNotFull);
    }
    Ok(match_diagram(&dual_diagram(p)?))
}

/// SVG drawing: unit circle, equally spaced diameters, and the multiplicity
/// of every occupied endpoint.
pub fn render_svg(d: &StandardGaleDiagram) -> String {
    let slots = d.slots();
    let n = slots.len();
    let (c, r) = (120.0f64, 90.0f64);
    let at = |k: usize, rad: f64| {
        let t = std::f64::consts::PI * 2.0 * k as f64 / n.max(1) as f64;
        (c + rad * t.cos(), c - rad * t.sin())
    };
    let mut s = String::new();
    s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"240\" height=\"240\" viewBox=\"0 0 240 240\">\n");
    s.push_str(&format!(
        "  <circle cx=\"{c:.1}\" cy=\"{c:.1}\" r=\"{r:.1}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n"
    ));
    for k in 0..n / 2 {
        let (x1, y1) = at(k, r);
        let (x2, y2) = at(k + n / 2, r);
        s.push_str(&format!(
            "  <line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"black\" stroke-width=\"2\"/>\n"
        ));
    }
    for (k, &m) in slots.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let (x, y) = at(k, r);
        let (lx, ly) = at(k, r + 16.0);
        s.push_str(&format!(
            "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"6\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n"
        ));
        s.push_str(&format!(
            "  <text x=\"{lx:.2}\" y=\"{ly:.2}\" font-size=\"14\" text-anchor=\"middle\" dominant-baseline=\"middle\">{m}</text>\n"
        ));
    }
    if d.zero_count > 0 {
        s.push_str(&format!(
            "  <text x=\"{c:.1}\" y=\"{c:.1}\" font-size=\"12\" text-anchor=\"middle\">0 x{}</text>\n",
            d.zero_count
        ));
    }
    s.push_str("</svg>\n");
    s
}
