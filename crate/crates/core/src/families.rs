//! Named polytopes: the family `P_{n_1,...,n_k}`, order polytopes of
//! posets, the four rank-2 poset shapes, and a few fixed examples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Int;
use crate::polytope::{Point, Polytope};

/// A finite poset on `0..size`, given by its cover relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    size: usize,
    covers: Vec<(usize, usize)>,
    /// `less[i][j]` iff `i < j` strictly.
    less: Vec<Vec<bool>>,
}

/// Interchange format for posets: `covers` lists pairs `[i, j]` with `i ⋖ j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub size: usize,
    pub covers: Vec<[usize; 2]>,
}

impl Poset {
    /// Validates the cover relations: indices in range, acyclic, and no
    /// pair implied by the others.
    pub fn new(size: usize, covers: Vec<(usize, usize)>) -> Result<Self> {
        let mut less = vec![vec![false; size]; size];
        for &(i, j) in &covers {
            if i >= size || j >= size {
                return Err(Error::InvalidPoset(format!("cover ({i}, {j}) out of range for size {size}")));
            }
            if i == j {
                return Err(Error::InvalidPoset(format!("element {i} covers itself")));
            }
            if less[i][j] {
                return Err(Error::InvalidPoset(format!("cover ({i}, {j}) listed twice")));
            }
            less[i][j] = true;
        }
        // transitive closure
        for k in 0..size {
            for i in 0..size {
                if less[i][k] {
                    for j in 0..size {
                        if less[k][j] {
                            less[i][j] = true;
                        }
                    }
                }
            }
        }
        if let Some(i) = (0..size).find(|&i| less[i][i]) {
            return Err(Error::InvalidPoset(format!("cycle through element {i}")));
        }
        for &(i, j) in &covers {
            if let Some(k) = (0..size).find(|&k| less[i][k] && less[k][j]) {
                return Err(Error::InvalidPoset(format!(
                    "cover ({i}, {j}) is implied by ({i}, {k}) and ({k}, {j})"
                )));
            }
        }
        let mut covers = covers;
        covers.sort_unstable();
        Ok(Poset { size, covers, less })
    }

    pub fn from_json(j: &PosetJson) -> Result<Self> {
        Self::new(j.size, j.covers.iter().map(|c| (c[0], c[1])).collect())
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            size: self.size,
            covers: self.covers.iter().map(|&(i, j)| [i, j]).collect(),
        }
    }

    /// Poset from an arbitrary (acyclic) relation: keeps its transitive reduction.
    pub fn from_relation(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut less = vec![vec![false; size]; size];
        for &(i, j) in pairs {
            if i >= size || j >= size || i == j {
                return Err(Error::InvalidPoset(format!("bad pair ({i}, {j})")));
            }
            less[i][j] = true;
        }
        for k in 0..size {
            for i in 0..size {
                if less[i][k] {
                    for j in 0..size {
                        if less[k][j] {
                            less[i][j] = true;
                        }
                    }
                }
            }
        }
        if (0..size).any(|i| less[i][i]) {
            return Err(Error::InvalidPoset("relation has a cycle".into()));
        }
        let covers = (0..size)
            .flat_map(|i| (0..size).map(move |j| (i, j)))
            .filter(|&(i, j)| less[i][j] && !(0..size).any(|k| less[i][k] && less[k][j]))
            .collect();
        Self::new(size, covers)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        self.less[i][j]
    }

    pub fn chain(len: usize) -> Self {
        Self::new(len, (1..len).map(|i| (i - 1, i)).collect()).expect("chain")
    }

    pub fn antichain(len: usize) -> Self {
        Self::new(len, vec![]).expect("antichain")
    }

    fn minimal(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(|&j| !(0..self.size).any(|i| self.less[i][j]))
    }

    fn maximal(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(|&i| !(0..self.size).any(|j| self.less[i][j]))
    }

    /// Edges of the Hasse diagram after adjoining a new bottom and top.
    pub fn hasse_edges_with_bounds(&self) -> usize {
        if self.size == 0 {
            return 1;
        }
        self.covers.len() + self.minimal().count() + self.maximal().count()
    }

    /// `P + Q`: elements of `other` are shifted by `self.size()`.
    pub fn disjoint_union(&self, other: &Poset) -> Poset {
        let s = self.size;
        let covers = self
            .covers
            .iter()
            .copied()
            .chain(other.covers.iter().map(|&(i, j)| (i + s, j + s)))
            .collect();
        Poset::new(s + other.size, covers).expect("disjoint union of posets")
    }

    /// `P ⊕ Q`: every element of `self` lies below a new element `z`, which
    /// lies below every element of `other`. Indices: `self`, then `z`, then
    /// `other` shifted by `self.size() + 1`.
    pub fn ordinal_sum(&self, other: &Poset) -> Poset {
        let z = self.size;
        let mut covers: Vec<(usize, usize)> = self.covers.clone();
        covers.extend(self.maximal().map(|i| (i, z)));
        covers.extend(other.minimal().map(|j| (z, j + z + 1)));
        covers.extend(other.covers.iter().map(|&(i, j)| (i + z + 1, j + z + 1)));
        Poset::new(self.size + 1 + other.size, covers).expect("ordinal sum of posets")
    }

    /// All poset ideals (down-closed subsets) as indicator vectors, sorted.
    pub fn ideals(&self) -> Vec<Point> {
        // a linear extension lets us decide each element after all smaller ones
        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&i| (0..self.size).filter(|&j| self.less[j][i]).count());
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.size];
        fn go(p: &Poset, order: &[usize], k: usize, cur: &mut Point, out: &mut Vec<Point>) {
            if k == order.len() {
                out.push(cur.clone());
                return;
            }
            let e = order[k];
            go(p, order, k + 1, cur, out);
            if (0..p.size).all(|j| !p.less[j][e] || cur[j] == 1) {
                cur[e] = 1;
                go(p, order, k + 1, cur, out);
                cur[e] = 0;
            }
        }
        go(self, &order, 0, &mut cur, &mut out);
        out.sort();
        out
    }
}

/// The order polytope: vertices are the indicator vectors of poset ideals.
pub fn order_polytope(p: &Poset) -> Result<Polytope> {
    if p.size() == 0 {
        return Err(Error::InvalidPoset("empty poset".into()));
    }
    Polytope::new(p.size(), p.ideals())
}

fn chain_of_edges(edges: usize) -> Poset {
    Poset::chain(edges - 1)
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameters(msg.to_string()))
    }
}

/// The rank-2 poset shapes. Parameters count Hasse edges of the poset with
/// bottom and top adjoined, so a chain with parameter `n` has `n - 1` elements.
///
/// * 1: `(n1, n2, n3)`, three chains side by side; all at least 2.
/// * 2: `(n1, n2, m1, m2)`, two chains below a middle element and two above; all at least 2.
/// * 3: `(n1, n2, n3, m1)`, a chain of `m1` edges up to a branch element with
///   two chains above it, next to a separate chain; `n_i ≥ 2`, `m1 ≥ 1`.
/// * 4: `(n1, n2, m1, l1, l2)`, two chains joined by a chain of `m1` edges
///   from the element at depth `l1` on the first to the element at depth
///   `l2` on the second, which have `n1` and `n2` edges above those elements;
///   `n1, l2 ≥ 2` and `n2, l1, m1 ≥ 1`.
pub fn make_pi(variant: u8, params: &[usize]) -> Result<Poset> {
    let arity = match variant {
        1 => 3,
        2 => 4,
        3 => 4,
        4 => 5,
        _ => return Err(Error::InvalidParameters(format!("no poset shape {variant}; expected 1 to 4"))),
    };
    need(params.len() == arity, &format!("shape {variant} takes {arity} parameters, got {}", params.len()))?;
    let poset = match variant {
        1 => {
            need(params.iter().all(|&n| n >= 2), "shape 1 needs every parameter at least 2")?;
            params
                .iter()
                .map(|&n| chain_of_edges(n))
                .reduce(|a, b| a.disjoint_union(&b))
                .unwrap()
        }
        2 => {
            need(params.iter().all(|&n| n >= 2), "shape 2 needs every parameter at least 2")?;
            let (n1, n2, m1, m2) = (params[0], params[1], params[2], params[3]);
            let below = chain_of_edges(m1).disjoint_union(&chain_of_edges(m2));
            let above = chain_of_edges(n1).disjoint_union(&chain_of_edges(n2));
            below.ordinal_sum(&above)
        }
        3 => {
            let (n1, n2, n3, m1) = (params[0], params[1], params[2], params[3]);
            need(n1 >= 2 && n2 >= 2 && n3 >= 2 && m1 >= 1, "shape 3 needs n1, n2, n3 at least 2 and m1 at least 1")?;
            let above = chain_of_edges(n1).disjoint_union(&chain_of_edges(n2));
            chain_of_edges(m1).ordinal_sum(&above).disjoint_union(&chain_of_edges(n3))
        }
        _ => {
            let (n1, n2, m1, l1, l2) = (params[0], params[1], params[2], params[3], params[4]);
            need(
                n1 >= 2 && l2 >= 2 && n2 >= 1 && l1 >= 1 && m1 >= 1,
                "shape 4 needs n1 and l2 at least 2 and n2, l1, m1 at least 1",
            )?;
            // first chain: l1 - 1 elements, a, n1 - 1 elements
            let mut covers = Vec::new();
            let first = l1 + n1 - 1;
            for i in 1..first {
                covers.push((i - 1, i));
            }
            let a = l1 - 1;
            // second chain: l2 - 1 elements, b, n2 - 1 elements
            let second = l2 + n2 - 1;
            for i in 1..second {
                covers.push((first + i - 1, first + i));
            }
            let b = first + l2 - 1;
            // connecting chain a < c_1 < ... < c_{m1-1} < b
            let mut prev = a;
            let base = first + second;
            for i in 0..m1 - 1 {
                covers.push((prev, base + i));
                prev = base + i;
            }
            covers.push((prev, b));
            Poset::new(base + m1 - 1, covers)?
        }
    };
    let rank = poset.hasse_edges_with_bounds() as i64 - poset.size() as i64 - 1;
    need(rank == 2, &format!("shape {variant} with {params:?} has rank {rank}, not 2"))?;
    Ok(poset)
}

/// `P_{n_1,...,n_k}`, the convex hull of `{0} ∪ {e_i} ∪ B_{n_1} × ... × B_{n_k}`,
/// where block `p` of a mixed vertex occupies coordinates
/// `n_1 + ... + n_{p-1}` onwards.
pub fn make_pnk(ns: &[usize]) -> Result<Polytope> {
    Polytope::new(ns.iter().sum(), pnk_vertices(ns)?)
}

fn check_pnk(ns: &[usize]) -> Result<()> {
    need(!ns.is_empty(), "the family needs at least one block")?;
    need(ns.iter().all(|&n| n >= 1), "block sizes must be positive")
}

/// Offsets of the blocks.
fn block_offsets(ns: &[usize]) -> Vec<usize> {
    ns.iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect()
}

/// Mixed points `(i_1, ..., i_k)`, as index tuples, in lexicographic order.
pub fn pnk_mixed_indices(ns: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &n in ns {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| (0..n).map(move |i| [t.clone(), vec![i]].concat()))
            .collect();
    }
    out
}

/// The mixed vertex with block indices `idx`.
pub fn pnk_mixed_point(ns: &[usize], idx: &[usize]) -> Point {
    let d: usize = ns.iter().sum();
    let mut v = vec![0i64; d];
    for (o, &i) in block_offsets(ns).iter().zip(idx) {
        v[o + i] = 1;
    }
    v
}

pub fn pnk_vertices(ns: &[usize]) -> Result<Vec<Point>> {
    check_pnk(ns)?;
    let d: usize = ns.iter().sum();
    let mut verts = vec![vec![0i64; d]];
    for i in 0..d {
        let mut e = vec![0; d];
        e[i] = 1;
        verts.push(e);
    }
    for idx in pnk_mixed_indices(ns) {
        let v = pnk_mixed_point(ns, &idx);
        if !verts.contains(&v) {
            verts.push(v);
        }
    }
    Ok(verts)
}

/// Expected facets `x_e ≥ 0` and `<f_p, x> + 1 ≥ 0`, as integer vectors
/// `(a, b)`, where `f_p` is `k - 2` on block `p` and `-1` elsewhere.
pub fn predicted_facets_pnk(ns: &[usize]) -> Result<Vec<Vec<Int>>> {
    check_pnk(ns)?;
    let d: usize = ns.iter().sum();
    let k = ns.len() as i64;
    let mut out = Vec::with_capacity(d + ns.len());
    for i in 0..d {
        let mut v = vec![Int::from(0); d + 1];
        v[i] = Int::from(1);
        out.push(v);
    }
    let offsets = block_offsets(ns);
    for p in 0..ns.len() {
        let mut v = vec![Int::from(-1); d + 1];
        for x in &mut v[offsets[p]..offsets[p] + ns[p]] {
            *x = Int::from(k - 2);
        }
        v[d] = Int::from(1);
        out.push(v);
    }
    Ok(out)
}

fn unit_vectors_with_origin(d: usize) -> Vec<Point> {
    let mut v = vec![vec![0i64; d]];
    for i in 0..d {
        let mut e = vec![0; d];
        e[i] = 1;
        v.push(e);
    }
    v
}

pub fn simplex(d: usize) -> Result<Polytope> {
    Polytope::new(d, unit_vectors_with_origin(d))
}

pub fn cube(d: usize) -> Result<Polytope> {
    need(d <= 20, "cube dimension at most 20")?;
    let verts = (0..1u64 << d)
        .map(|m| (0..d).map(|i| (m >> i & 1) as i64).collect())
        .collect();
    Polytope::new(d, verts)
}

pub fn q1() -> Polytope {
    Polytope::new(
        4,
        vec![
            vec![0, 0, 0, 0],
            vec![1, 1, 0, 0],
            vec![1, 0, 1, 0],
            vec![0, 1, 1, 0],
            vec![0, 0, 0, 1],
            vec![1, 1, 1, 1],
        ],
    )
    .expect("fixed vertex list")
}

pub fn q2() -> Polytope {
    Polytope::new(
        4,
        vec![
            vec![0, 0, 0, 0],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 1],
            vec![0, 0, 1, 1],
            vec![1, 1, 1, 0],
            vec![1, 1, 1, 1],
        ],
    )
    .expect("fixed vertex list")
}

/// Looks up `q1`, `q2`, `cube(d)`/`cube<d>` or `simplex(d)`/`simplex<d>`.
pub fn fixed_example(name: &str) -> Result<Polytope> {
    let unknown = || Error::UnknownExample(name.to_string());
    let lower = name.trim().to_ascii_lowercase();
    match lower.as_str() {
        "q1" => return Ok(q1()),
        "q2" => return Ok(q2()),
        _ => {}
    }
    for (prefix, build) in [("cube", cube as fn(usize) -> Result<Polytope>), ("simplex", simplex)] {
        if let Some(rest) = lower.strip_prefix(prefix) {
            let digits = rest.trim_start_matches('(').trim_end_matches(')');
            let d: usize = digits.parse().map_err(|_| unknown())?;
            return build(d);
        }
    }
    Err(unknown())
}

/// Construction vocabulary shared by the command line and the test suites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Pnk(Vec<usize>),
    Order(Poset),
    Pi(u8, Vec<usize>),
    Q1,
    Q2,
    Cube(usize),
    Simplex(usize),
}

impl FamilySpec {
    /// Parses a tag (`pnk`, `pi1`..`pi4`, `q1`, `q2`, `cube`, `simplex`) with
    /// its integer parameters.
    pub fn parse(tag: &str, params: &[usize]) -> Result<Self> {
        let one = |what: &str| -> Result<usize> {
            match params {
                [d] => Ok(*d),
                _ => Err(Error::InvalidParameters(format!("{what} takes exactly one parameter"))),
            }
        };
        let none = |what: &str| -> Result<()> {
            need(params.is_empty(), &format!("{what} takes no parameters"))
        };
        Ok(match tag.to_ascii_lowercase().as_str() {
            "pnk" => FamilySpec::Pnk(params.to_vec()),
            "pi1" => FamilySpec::Pi(1, params.to_vec()),
            "pi2" => FamilySpec::Pi(2, params.to_vec()),
            "pi3" => FamilySpec::Pi(3, params.to_vec()),
            "pi4" => FamilySpec::Pi(4, params.to_vec()),
            "q1" => {
                none("q1")?;
                FamilySpec::Q1
            }
            "q2" => {
                none("q2")?;
                FamilySpec::Q2
            }
            "cube" => FamilySpec::Cube(one("cube")?),
            "simplex" => FamilySpec::Simplex(one("simplex")?),
            other => return Err(Error::UnknownExample(other.to_string())),
        })
    }

    pub fn build(&self) -> Result<Polytope> {
        match self {
            FamilySpec::Pnk(ns) => make_pnk(ns),
            FamilySpec::Order(p) => order_polytope(p),
            FamilySpec::Pi(v, ps) => order_polytope(&make_pi(*v, ps)?),
            FamilySpec::Q1 => Ok(q1()),
            FamilySpec::Q2 => Ok(q2()),
            FamilySpec::Cube(d) => cube(*d),
            FamilySpec::Simplex(d) => simplex(*d),
        }
    }

    pub fn label(&self) -> String {
        let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match self {
            FamilySpec::Pnk(ns) => format!("P_{{{}}}", join(ns)),
            FamilySpec::Order(p) => format!("order polytope of a {}-element poset", p.size()),
            FamilySpec::Pi(v, ps) => format!("O(Pi{v}({}))", join(ps)),
            FamilySpec::Q1 => "Q1".into(),
            FamilySpec::Q2 => "Q2".into(),
            FamilySpec::Cube(d) => format!("cube({d})"),
            FamilySpec::Simplex(d) => format!("simplex({d})"),
        }
    }
}
