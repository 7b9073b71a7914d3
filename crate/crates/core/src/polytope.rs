//! Lattice polytopes given by their vertices.
//!
//! Facets are computed by an incremental double description in the
//! coordinates of the lattice spanned by the homogenized vertices `(v, 1)`,
//! so polytopes that are not full-dimensional need no special treatment.
//! Each facet is stored as a support form `d_F(x) = <x, a_F> + b_F` that is
//! nonnegative on the polytope, vanishes exactly on the facet, takes integer
//! values on lattice points of the polytope, and has gcd 1 over them.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::linalg::{
    content, dot, integer_kernel_basis, primitive, solve_rational, Int, IntMatrix, Rat,
};

/// Integer point with machine-size coordinates.
pub type Point = Vec<i64>;

const LATTICE_BOX_GUARD: u128 = 2_000_000;

/// Interchange format for polytopes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub ambient_dim: usize,
    pub vertices: Vec<Point>,
}

/// A normalized facet-defining inequality `d_F(x) = <x, a_F> + b_F >= 0`.
///
/// `(a_F, b_F)` is stored as an integer vector `normal` of length
/// `ambient_dim + 1` over a positive `denominator`, in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetInequality {
    pub normal: Vec<Int>,
    pub denominator: Int,
    /// `d_F(v)` for every lattice point `v`, in [`Polytope::lattice_points`] order.
    pub values: Vec<Int>,
    /// Indices into [`Polytope::vertices`] of the vertices on the facet.
    pub incident_vertices: Vec<usize>,
}

impl FacetInequality {
    pub fn a(&self) -> Vec<Rat> {
        let d = self.normal.len() - 1;
        self.normal[..d]
            .iter()
            .map(|x| Rat::new(x.clone(), self.denominator.clone()))
            .collect()
    }

    pub fn b(&self) -> Rat {
        Rat::new(self.normal.last().unwrap().clone(), self.denominator.clone())
    }

    /// Exact value of the support form at an arbitrary point.
    pub fn eval(&self, x: &[i64]) -> Rat {
        let y: Vec<Int> = x.iter().map(|&t| Int::from(t)).chain([Int::one()]).collect();
        Rat::new(dot(&self.normal, &y), self.denominator.clone())
    }

    /// `denominator * <(a_F, b_F), y>` for a homogeneous vector `y = (x, h)`;
    /// its sign is the sign of `h * d_F(x / h)`.
    pub fn eval_homogeneous(&self, y: &[Int]) -> Int {
        dot(&self.normal, y)
    }

    fn cmp_key(&self, other: &FacetInequality) -> Ordering {
        for (x, y) in self.normal.iter().zip(&other.normal) {
            let o = (x * &other.denominator).cmp(&(y * &self.denominator));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }
}

/// Affine hull of a polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineHull {
    pub dim: usize,
    pub point: Point,
    /// Saturated lattice basis of the direction space intersected with `Z^d`.
    pub directions: Vec<Vec<Int>>,
}

/// Vertex and facet bijection between combinatorially equivalent polytopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correspondence {
    /// `vertex_map[i]` is the vertex of the second polytope matched to vertex `i`.
    pub vertex_map: Vec<usize>,
    /// `facet_map[j]` is the facet of the second polytope matched to facet `j`.
    pub facet_map: Vec<usize>,
}

/// Linear data of the lattice spanned by the homogenized vertices.
#[derive(Clone, Debug)]
struct Hull {
    dim: usize,
    /// Integer vectors orthogonal to every `(v, 1)`; a basis of the complement.
    orth: Vec<Vec<Int>>,
    /// `None` when the polytope is full-dimensional, otherwise the map into
    /// lattice coordinates.
    coords: Option<LatticeCoords>,
}

#[derive(Clone, Debug)]
struct LatticeCoords {
    /// Rows of the lattice basis used to read off coordinates.
    rows: Vec<usize>,
    /// Inverse of the basis restricted to `rows`.
    inverse: Vec<Vec<Rat>>,
}

impl Hull {
    /// Coordinates of `y` (a vector of the spanned lattice) in the lattice basis.
    fn lattice_coords(&self, y: &[Int]) -> Vec<Int> {
        match &self.coords {
            None => y.to_vec(),
            Some(lc) => lc
                .inverse
                .iter()
                .map(|row| {
                    let s: Rat = row
                        .iter()
                        .zip(&lc.rows)
                        .map(|(r, &i)| r * Rat::from_integer(y[i].clone()))
                        .sum();
                    assert!(s.is_integer(), "point outside the spanned lattice");
                    s.to_integer()
                })
                .collect(),
        }
    }

    /// Ambient homogeneous functional equal to `c` on the spanned lattice.
    fn ambient_functional(&self, c: &[Int], ambient: usize) -> (Vec<Int>, Int) {
        match &self.coords {
            None => (c.to_vec(), Int::one()),
            Some(lc) => {
                let mut q = vec![Rat::zero(); ambient + 1];
                for (j, &row) in lc.rows.iter().enumerate() {
                    q[row] = c
                        .iter()
                        .zip(&lc.inverse)
                        .map(|(ci, inv)| Rat::from_integer(ci.clone()) * &inv[j])
                        .sum();
                }
                let den = q.iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
                let num = q
                    .iter()
                    .map(|x| (x * Rat::from_integer(den.clone())).to_integer())
                    .collect();
                (num, den)
            }
        }
    }

    fn contains_direction(&self, y: &[Int]) -> bool {
        self.orth.iter().all(|o| dot(o, y).is_zero())
    }
}

#[derive(Clone, Debug)]
struct RawFacet {
    /// Primitive normal in lattice coordinates.
    normal: Vec<Int>,
    /// Vertices on the facet.
    tight: BitSet,
}

#[derive(Clone, Debug)]
struct FacetData {
    facets: Vec<FacetInequality>,
}

/// A lattice polytope given by its vertices.
///
/// Derived data (affine hull, facets, lattice points) is computed on first
/// use and cached; clones share nothing but are cheap to recompute from.
#[derive(Clone, Debug)]
pub struct Polytope {
    ambient_dim: usize,
    vertices: Vec<Point>,
    zero_one: bool,
    hull: OnceLock<Hull>,
    raw: OnceLock<Vec<RawFacet>>,
    points: OnceLock<Result<Vec<Point>>>,
    data: OnceLock<Result<FacetData>>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl Polytope {
    /// Builds a polytope from its vertex list.
    ///
    /// Duplicate points are dropped (first occurrence wins). Every remaining
    /// point must be a vertex of the convex hull.
    pub fn new(ambient_dim: usize, points: Vec<Point>) -> Result<Self> {
        let p = Self::unchecked(ambient_dim, points)?;
        if !p.zero_one {
            // every (0,1)-point is a vertex of the unit cube, hence extreme
            let m = p.hull().dim + 1;
            if m > 1 {
                let raw = p.raw_facets();
                for (i, v) in p.vertices.iter().enumerate() {
                    let normals: Vec<Vec<Int>> = raw
                        .iter()
                        .filter(|f| f.tight.contains(i))
                        .map(|f| f.normal.clone())
                        .collect();
                    if IntMatrix::from_rows(&normals, m).rank() < m - 1 {
                        return Err(Error::NotExtreme(v.clone()));
                    }
                }
            }
        }
        Ok(p)
    }

    /// Convex hull of arbitrary points: non-extreme points are discarded.
    pub fn hull_of(ambient_dim: usize, points: Vec<Point>) -> Result<Self> {
        let p = Self::unchecked(ambient_dim, points)?;
        if p.zero_one {
            return Ok(p);
        }
        let m = p.hull().dim + 1;
        if m <= 1 {
            return Ok(p);
        }
        let raw = p.raw_facets();
        let keep: Vec<Point> = p
            .vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let normals: Vec<Vec<Int>> = raw
                    .iter()
                    .filter(|f| f.tight.contains(*i))
                    .map(|f| f.normal.clone())
                    .collect();
                IntMatrix::from_rows(&normals, m).rank() == m - 1
            })
            .map(|(_, v)| v.clone())
            .collect();
        Self::unchecked(ambient_dim, keep)
    }

    fn unchecked(ambient_dim: usize, points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::NoVertices);
        }
        let mut vertices: Vec<Point> = Vec::with_capacity(points.len());
        let mut seen = std::collections::HashSet::new();
        for (index, v) in points.into_iter().enumerate() {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    index,
                    found: v.len(),
                    expected: ambient_dim,
                });
            }
            if seen.insert(v.clone()) {
                vertices.push(v);
            }
        }
        let zero_one = vertices.iter().flatten().all(|&x| x == 0 || x == 1);
        Ok(Polytope {
            ambient_dim,
            vertices,
            zero_one,
            hull: OnceLock::new(),
            raw: OnceLock::new(),
            points: OnceLock::new(),
            data: OnceLock::new(),
        })
    }

    pub fn from_json(j: &PolytopeJson) -> Result<Self> {
        Self::new(j.ambient_dim, j.vertices.clone())
    }

    pub fn to_json(&self, name: Option<&str>) -> PolytopeJson {
        PolytopeJson {
            name: name.map(str::to_string),
            ambient_dim: self.ambient_dim,
            vertices: self.vertices.clone(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_zero_one(&self) -> bool {
        self.zero_one
    }

    /// `(v, 1)` as a big-integer vector.
    pub fn homogenize(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).chain([Int::one()]).collect()
    }

    fn hull(&self) -> &Hull {
        self.hull.get_or_init(|| {
            let d = self.ambient_dim;
            let gens: Vec<Vec<Int>> = self.vertices.iter().map(|v| Self::homogenize(v)).collect();
            let orth = integer_kernel_basis(&IntMatrix::from_rows(&gens, d + 1));
            let m = d + 1 - orth.len();
            if orth.is_empty() {
                return Hull {
                    dim: d,
                    orth,
                    coords: None,
                };
            }
            let basis = integer_kernel_basis(&IntMatrix::from_rows(&orth, d + 1));
            debug_assert_eq!(basis.len(), m);
            let b = IntMatrix::from_columns(&basis, d + 1);
            let mut rows = Vec::with_capacity(m);
            for i in 0..=d {
                let mut trial: Vec<Vec<Int>> = rows.iter().map(|&r| b.row(r).to_vec()).collect();
                trial.push(b.row(i).to_vec());
                if IntMatrix::from_rows(&trial, m).rank() == trial.len() {
                    rows.push(i);
                    if rows.len() == m {
                        break;
                    }
                }
            }
            let br = IntMatrix::from_rows(&rows.iter().map(|&r| b.row(r).to_vec()).collect::<Vec<_>>(), m);
            // columns of the inverse, one unit vector at a time
            let mut inverse = vec![vec![Rat::zero(); m]; m];
            for j in 0..m {
                let mut e = vec![Int::zero(); m];
                e[j] = Int::one();
                let col = solve_rational(&br, &e).expect("basis rows are independent");
                for i in 0..m {
                    inverse[i][j] = col[i].clone();
                }
            }
            Hull {
                dim: m - 1,
                orth,
                coords: Some(LatticeCoords { rows, inverse }),
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.hull().dim
    }

    pub fn affine_hull(&self) -> AffineHull {
        let h = self.hull();
        let d = self.ambient_dim;
        let constraints: Vec<Vec<Int>> = h.orth.iter().map(|o| o[..d].to_vec()).collect();
        let directions = integer_kernel_basis(&IntMatrix::from_rows(&constraints, d));
        AffineHull {
            dim: h.dim,
            point: self.vertices[0].clone(),
            directions,
        }
    }

    /// True if the homogeneous vector `y = (x, h)` lies in the linear span of
    /// the homogenized vertices.
    pub fn in_linear_span(&self, y: &[Int]) -> bool {
        self.hull().contains_direction(y)
    }

    fn raw_facets(&self) -> &[RawFacet] {
        self.raw.get_or_init(|| {
            let hull = self.hull();
            if hull.dim == 0 {
                return Vec::new();
            }
            let gens: Vec<Vec<Int>> = self
                .vertices
                .iter()
                .map(|v| hull.lattice_coords(&Self::homogenize(v)))
                .collect();
            let mut order: Vec<usize> = (0..self.vertices.len()).collect();
            order.sort_by(|&a, &b| self.vertices[a].cmp(&self.vertices[b]));
            double_description(&gens, &order, hull.dim + 1)
        })
    }

    fn facet_data(&self) -> Result<&FacetData> {
        self.data
            .get_or_init(|| self.compute_facet_data())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn compute_lattice_points(&self) -> Result<Vec<Point>> {
        let mut lattice_points = if self.zero_one || self.vertices.len() == 1 {
            self.vertices.clone()
        } else {
            let hull = self.hull();
            let ambient: Vec<(Vec<Int>, Int)> = self
                .raw_facets()
                .iter()
                .map(|f| hull.ambient_functional(&f.normal, self.ambient_dim))
                .collect();
            self.scan_box(1, |y| {
                hull.contains_direction(y) && ambient.iter().all(|(n, _)| !dot(n, y).is_negative())
            })?
        };
        lattice_points.sort();
        Ok(lattice_points)
    }

    fn compute_facet_data(&self) -> Result<FacetData> {
        let hull = self.hull();
        let d = self.ambient_dim;
        let raw = self.raw_facets();
        let ambient: Vec<(Vec<Int>, Int)> = raw
            .iter()
            .map(|f| hull.ambient_functional(&f.normal, d))
            .collect();
        let homs: Vec<Vec<Int>> = self.lattice_points()?.iter().map(|v| Self::homogenize(v)).collect();
        let mut facets: Vec<FacetInequality> = raw
            .iter()
            .zip(&ambient)
            .map(|(f, (num, den))| {
                let scaled: Vec<Int> = homs.iter().map(|y| dot(num, y)).collect();
                let mut values: Vec<Int> = scaled
                    .iter()
                    .map(|s| {
                        debug_assert!(s.is_multiple_of(den));
                        s / den
                    })
                    .collect();
                let g = content(&values);
                let mut den = den * &g;
                let mut normal = num.clone();
                if !g.is_one() {
                    for v in &mut values {
                        *v = &*v / &g;
                    }
                }
                let h = content(&normal).gcd(&den);
                if !h.is_one() {
                    normal.iter_mut().for_each(|x| *x = &*x / &h);
                    den /= &h;
                }
                FacetInequality {
                    normal,
                    denominator: den,
                    values,
                    incident_vertices: f.tight.iter().collect(),
                }
            })
            .collect();
        facets.sort_by(|a, b| a.cmp_key(b));
        Ok(FacetData {
            facets,
        })
    }

    /// Integer points `x` in the box `n * [min, max]` with `accept((x, n))`.
    pub(crate) fn scan_box(&self, n: i64, accept: impl Fn(&[Int]) -> bool) -> Result<Vec<Point>> {
        let d = self.ambient_dim;
        let lo: Vec<i64> = (0..d).map(|i| self.vertices.iter().map(|v| v[i]).min().unwrap() * n).collect();
        let hi: Vec<i64> = (0..d).map(|i| self.vertices.iter().map(|v| v[i]).max().unwrap() * n).collect();
        let count = lo
            .iter()
            .zip(&hi)
            .try_fold(1u128, |acc, (a, b)| acc.checked_mul((b - a + 1) as u128))
            .unwrap_or(u128::MAX);
        crate::check_guard("lattice-point box scan", count, LATTICE_BOX_GUARD)?;
        let mut out = Vec::new();
        let mut x = lo.clone();
        let mut y: Vec<Int> = x.iter().map(|&t| Int::from(t)).chain([Int::from(n)]).collect();
        loop {
            if accept(&y) {
                out.push(x.clone());
            }
            // odometer increment
            let mut i = 0;
            loop {
                if i == d {
                    return Ok(out);
                }
                if x[i] < hi[i] {
                    x[i] += 1;
                    y[i] = Int::from(x[i]);
                    break;
                }
                x[i] = lo[i];
                y[i] = Int::from(x[i]);
                i += 1;
            }
        }
    }

    /// Lattice points of the polytope, sorted lexicographically.
    /// Facets are only computed when the polytope is not a (0,1)-polytope.
    pub fn lattice_points(&self) -> Result<&[Point]> {
        self.points
            .get_or_init(|| self.compute_lattice_points())
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    /// Facets sorted lexicographically by `(a_F, b_F)`.
    pub fn facets(&self) -> Result<&[FacetInequality]> {
        if self.dim() == 0 {
            return Err(Error::Degenerate);
        }
        Ok(&self.facet_data()?.facets)
    }

    /// Number of facets minus `dim + 1`.
    pub fn rank(&self) -> Result<usize> {
        Ok(self.facets()?.len() - self.dim() - 1)
    }

    /// Cartesian product; vertices are concatenations `(p, q)`, `p` varying slowest.
    pub fn product(&self, other: &Polytope) -> Polytope {
        let vertices = self
            .vertices
            .iter()
            .flat_map(|p| other.vertices.iter().map(move |q| [p.clone(), q.clone()].concat()))
            .collect();
        Polytope::unchecked(self.ambient_dim + other.ambient_dim, vertices)
            .expect("product of valid polytopes")
    }

    /// Facet incidence as one vertex set per facet.
    fn incidence(&self) -> Result<Vec<BitSet>> {
        let n = self.vertices.len();
        Ok(self
            .facets()?
            .iter()
            .map(|f| {
                let mut s = BitSet::new(n);
                f.incident_vertices.iter().for_each(|&i| s.insert(i));
                s
            })
            .collect())
    }

    /// True iff every vertex lies on exactly `dim` facets.
    pub fn is_simple(&self) -> Result<bool> {
        let inc = self.incidence()?;
        let dim = self.dim();
        Ok((0..self.vertices.len()).all(|v| inc.iter().filter(|f| f.contains(v)).count() == dim))
    }

    /// Splits off an apex: a vertex on every facet but one, where that facet
    /// contains all the other vertices.
    pub fn pyramid_decompose(&self) -> Result<Option<(Point, Polytope)>> {
        let inc = self.incidence()?;
        let n = self.vertices.len();
        for apex in 0..n {
            let missing: Vec<&BitSet> = inc.iter().filter(|f| !f.contains(apex)).collect();
            if missing.len() == 1 && missing[0].len() == n - 1 {
                let base: Vec<Point> = (0..n)
                    .filter(|&i| i != apex)
                    .map(|i| self.vertices[i].clone())
                    .collect();
                let base = Polytope::unchecked(self.ambient_dim, base)?;
                return Ok(Some((self.vertices[apex].clone(), base)));
            }
        }
        Ok(None)
    }

    /// Searches for a vertex bijection carrying facets to facets.
    pub fn combinatorially_equivalent(&self, other: &Polytope) -> Result<Option<Correspondence>> {
        let a = self.incidence()?;
        let b = other.incidence()?;
        Ok(find_isomorphism(&a, self.vertices.len(), &b, other.vertices.len()))
    }
}

/// Incremental double description of the cone over `gens` (full-dimensional
/// in `Z^m`), inserting generators in `order`.
fn double_description(gens: &[Vec<Int>], order: &[usize], m: usize) -> Vec<RawFacet> {
    let n = gens.len();
    // initial simplex: first independent generators in processing order
    let mut simplex: Vec<usize> = Vec::with_capacity(m);
    for &i in order {
        let mut rows: Vec<Vec<Int>> = simplex.iter().map(|&s| gens[s].clone()).collect();
        rows.push(gens[i].clone());
        if IntMatrix::from_rows(&rows, m).rank() == rows.len() {
            simplex.push(i);
            if simplex.len() == m {
                break;
            }
        }
    }
    assert_eq!(simplex.len(), m, "generators do not span");
    let s = IntMatrix::from_rows(&simplex.iter().map(|&i| gens[i].clone()).collect::<Vec<_>>(), m);
    let mut facets: Vec<RawFacet> = (0..m)
        .map(|j| {
            let mut e = vec![Int::zero(); m];
            e[j] = Int::one();
            let c = solve_rational(&s, &e).expect("simplex is nonsingular");
            let den = c.iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
            let normal: Vec<Int> = c
                .iter()
                .map(|x| (x * Rat::from_integer(den.clone())).to_integer())
                .collect();
            let mut tight = BitSet::new(n);
            for (i, &g) in simplex.iter().enumerate() {
                if i != j {
                    tight.insert(g);
                }
            }
            RawFacet {
                normal: primitive(&normal),
                tight,
            }
        })
        .collect();

    for &t in order {
        if simplex.contains(&t) {
            continue;
        }
        let g = &gens[t];
        let signs: Vec<Int> = facets.iter().map(|f| dot(&f.normal, g)).collect();
        if signs.iter().all(|s| !s.is_negative()) {
            for (f, s) in facets.iter_mut().zip(&signs) {
                if s.is_zero() {
                    f.tight.insert(t);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..facets.len()).filter(|&i| signs[i].is_positive()).collect();
        let neg: Vec<usize> = (0..facets.len()).filter(|&i| signs[i].is_negative()).collect();
        let mut next: Vec<RawFacet> = Vec::with_capacity(facets.len());
        for &p in &pos {
            for &q in &neg {
                let z = facets[p].tight.intersection(&facets[q].tight);
                if z.len() + 2 < m {
                    continue;
                }
                let blocked = facets
                    .iter()
                    .enumerate()
                    .any(|(r, f)| r != p && r != q && z.is_subset(&f.tight));
                if blocked {
                    continue;
                }
                let normal: Vec<Int> = facets[q]
                    .normal
                    .iter()
                    .zip(&facets[p].normal)
                    .map(|(cq, cp)| &signs[p] * cq - &signs[q] * cp)
                    .collect();
                let mut tight = z;
                tight.insert(t);
                next.push(RawFacet {
                    normal: primitive(&normal),
                    tight,
                });
            }
        }
        for (i, mut f) in facets.into_iter().enumerate() {
            if signs[i].is_negative() {
                continue;
            }
            if signs[i].is_zero() {
                f.tight.insert(t);
            }
            next.push(f);
        }
        facets = next;
    }
    facets
}

/// Backtracking search for a bijection between two vertex–facet incidence
/// structures.
fn find_isomorphism(a: &[BitSet], na: usize, b: &[BitSet], nb: usize) -> Option<Correspondence> {
    if na != nb || a.len() != b.len() {
        return None;
    }
    let degree = |inc: &[BitSet], n: usize| -> Vec<usize> {
        (0..n).map(|v| inc.iter().filter(|f| f.contains(v)).count()).collect()
    };
    let da = degree(a, na);
    let db = degree(b, nb);
    let sorted = |mut v: Vec<usize>| {
        v.sort_unstable();
        v
    };
    if sorted(da.clone()) != sorted(db.clone()) {
        return None;
    }
    if sorted(a.iter().map(BitSet::len).collect()) != sorted(b.iter().map(BitSet::len).collect()) {
        return None;
    }
    let common = |inc: &[BitSet], n: usize| -> Vec<Vec<usize>> {
        (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| inc.iter().filter(|f| f.contains(u) && f.contains(v)).count())
                    .collect()
            })
            .collect()
    };
    let ca = common(a, na);
    let cb = common(b, nb);

    // assign vertices of `a` in an order where each new vertex shares facets
    // with already assigned ones
    let mut order: Vec<usize> = Vec::with_capacity(na);
    let mut placed = vec![false; na];
    while order.len() < na {
        let next = (0..na)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links: usize = order.iter().map(|&u| ca[u][v]).sum();
                (links, da[v], std::cmp::Reverse(v))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }

    let facet_index: HashMap<&BitSet, usize> = b.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut map = vec![usize::MAX; na];
    let mut used = vec![false; nb];

    fn search(
        depth: usize,
        order: &[usize],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ctx: &dyn Fn(&[usize]) -> Option<Vec<usize>>,
        ok: &dyn Fn(usize, usize, &[usize], &[usize]) -> bool,
    ) -> Option<Vec<usize>> {
        if depth == order.len() {
            return ctx(map);
        }
        let u = order[depth];
        for w in 0..used.len() {
            if used[w] || !ok(u, w, &order[..depth], map) {
                continue;
            }
            map[u] = w;
            used[w] = true;
            if let Some(fm) = search(depth + 1, order, map, used, ctx, ok) {
                return Some(fm);
            }
            used[w] = false;
            map[u] = usize::MAX;
        }
        None
    }

    let ok = |u: usize, w: usize, done: &[usize], map: &[usize]| -> bool {
        da[u] == db[w] && ca[u][u] == cb[w][w] && done.iter().all(|&x| ca[u][x] == cb[w][map[x]])
    };
    let finish = |map: &[usize]| -> Option<Vec<usize>> {
        a.iter()
            .map(|f| {
                let mut img = BitSet::new(nb);
                f.iter().for_each(|v| img.insert(map[v]));
                facet_index.get(&img).copied()
            })
            .collect()
    };
    let facet_map = search(0, &order, &mut map, &mut used, &finish, &ok)?;
    Some(Correspondence {
        vertex_map: map,
        facet_map,
    })
}

/// Product of standard simplices `conv(0, e_1, ..., e_s)`, one per entry of `dims`.
pub fn simplex_product(dims: &[usize]) -> Polytope {
    let mut p: Option<Polytope> = None;
    for &s in dims {
        let mut verts = vec![vec![0i64; s]];
        for i in 0..s {
            let mut e = vec![0; s];
            e[i] = 1;
            verts.push(e);
        }
        let q = Polytope::unchecked(s, verts).expect("simplex");
        p = Some(match p {
            None => q,
            Some(p) => p.product(&q),
        });
    }
    p.unwrap_or_else(|| Polytope::unchecked(0, vec![vec![]]).expect("point"))
}

/// The product of simplices a simple polytope would have to be: facets are
/// grouped into classes that no vertex misses together, and each class of
/// size `s` becomes a simplex of dimension `s - 1`.
pub fn simplex_product_model(p: &Polytope) -> Result<Polytope> {
    let facets = p.facets()?;
    let nf = facets.len();
    let n = p.vertices().len();
    let on: Vec<BitSet> = facets
        .iter()
        .map(|f| {
            let mut s = BitSet::new(n);
            f.incident_vertices.iter().for_each(|&i| s.insert(i));
            s
        })
        .collect();
    // union-find over "never missed by a common vertex"
    let mut parent: Vec<usize> = (0..nf).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for i in 0..nf {
        for j in i + 1..nf {
            let co_missed = (0..n).any(|v| !on[i].contains(v) && !on[j].contains(v));
            if !co_missed {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for i in 0..nf {
        *sizes.entry(find(&mut parent, i)).or_default() += 1;
    }
    let mut dims: Vec<usize> = sizes.values().map(|s| s.saturating_sub(1)).filter(|&s| s > 0).collect();
    dims.sort_unstable();
    Ok(simplex_product(&dims))
}
