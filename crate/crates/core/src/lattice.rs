//! Lattice points, the lattice generated by them, normality and the
//! Gorenstein property of the associated toric ring.
//!
//! Throughout, a point `x` of the dilation `hP` is handled in homogeneous
//! form `(x, h)`; the generators of the semigroup are the lattice points of
//! `P` at height 1.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{canonical_lattice_basis, dot, solve_integer_linear, Int, IntMatrix};
use crate::polytope::{Point, Polytope};

/// Generators `(v, 1)` and the lattice they span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeData {
    pub generators: Vec<Vec<Int>>,
    /// HNF basis of the lattice spanned by the generators.
    pub span_basis: Vec<Vec<Int>>,
    /// The generators span all of `Z^{d+1}`.
    pub span_is_full: bool,
}

impl ConeData {
    /// Index of the spanned lattice in `Z^{d+1}`, or `None` if it has lower rank.
    pub fn index(&self) -> Option<Int> {
        let n = self.generators.first().map_or(0, Vec::len);
        if self.span_basis.len() != n {
            return None;
        }
        // HNF basis is lower triangular: the index is the product of pivots
        let mut det = Int::one();
        let mut row = 0;
        for b in &self.span_basis {
            while b[row].is_zero() {
                row += 1;
            }
            det *= &b[row];
            row += 1;
        }
        Some(det)
    }

    pub fn contains(&self, y: &[Int]) -> bool {
        if self.span_is_full {
            return true;
        }
        let n = y.len();
        solve_integer_linear(&IntMatrix::from_columns(&self.span_basis, n), y).is_some()
    }
}

/// How normality was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalityMethod {
    /// Every support form takes only the values 0 and 1 on lattice points, so
    /// every pulling triangulation is unimodular.
    WidthOne,
    /// Every lattice point of the cone up to the height bound was decomposed.
    Sumset,
}

/// A point of the cone and the lattice that is not a sum of generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Homogeneous coordinates `(x, h)`.
    pub point: Vec<i64>,
    pub height: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalityVerdict {
    pub normal: bool,
    /// Same as `normal` when the span is full; absent otherwise.
    pub has_idp: Option<bool>,
    pub witness: Option<Witness>,
    pub method: NormalityMethod,
    /// Largest height examined by the sumset search (0 if none).
    pub max_height: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NormalityOptions {
    /// Check heights up to this value instead of `max(1, dim - 1)`.
    pub max_height: Option<usize>,
    /// Skip the width-one shortcut and always run the sumset search.
    pub exhaustive: bool,
}

/// `nP ∩ Z^d`, sorted lexicographically.
pub fn lattice_points(p: &Polytope, n: usize) -> Result<Vec<Point>> {
    if n == 1 {
        return Ok(p.lattice_points()?.to_vec());
    }
    dilation_points(p, n)
}

/// Nodes the pruned dilation enumeration may visit before giving up.
const DILATION_NODE_GUARD: u128 = 50_000_000;

fn dilation_points(p: &Polytope, n: usize) -> Result<Vec<Point>> {
    let h = i64::try_from(n).map_err(|_| Error::InvalidParameters("dilation too large".into()))?;
    if p.dim() == 0 {
        return Ok(vec![p.vertices()[0].iter().map(|x| x * h).collect()]);
    }
    let facets = p.facets()?;
    let rows: Option<Vec<Vec<i64>>> = facets
        .iter()
        .map(|f| f.normal.iter().map(|c| i64::try_from(c).ok()).collect())
        .collect();
    let mut pts = match rows {
        Some(rows) => pruned_dilation(p, &rows, h)?,
        None => p.scan_box(h, |y| {
            p.in_linear_span(y) && facets.iter().all(|f| !f.eval_homogeneous(y).is_negative())
        })?,
    };
    pts.sort();
    Ok(pts)
}

/// Depth-first search over the bounding box of `hP`, one coordinate at a
/// time, cutting a branch as soon as some facet cannot be satisfied by any
/// completion inside the box.
fn pruned_dilation(p: &Polytope, rows: &[Vec<i64>], h: i64) -> Result<Vec<Point>> {
    let d = p.ambient_dim();
    let lo: Vec<i64> = (0..d).map(|i| p.vertices().iter().map(|v| v[i]).min().unwrap() * h).collect();
    let hi: Vec<i64> = (0..d).map(|i| p.vertices().iter().map(|v| v[i]).max().unwrap() * h).collect();
    // best[f][i]: the largest value coordinates i.. can add to facet f
    let best: Vec<Vec<i64>> = rows
        .iter()
        .map(|a| {
            let mut tail = vec![0; d + 1];
            for i in (0..d).rev() {
                tail[i] = tail[i + 1] + (a[i] * lo[i]).max(a[i] * hi[i]);
            }
            tail
        })
        .collect();
    struct Walk<'a> {
        rows: &'a [Vec<i64>],
        best: &'a [Vec<i64>],
        lo: &'a [i64],
        hi: &'a [i64],
        x: Vec<i64>,
        out: Vec<Point>,
        nodes: u128,
        limit: u128,
    }
    impl Walk<'_> {
        fn go(&mut self, i: usize, partial: &mut [i64]) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.limit {
                return Err(Error::TooLarge {
                    what: "dilation enumeration".into(),
                    count: self.nodes,
                    limit: self.limit,
                });
            }
            if i == self.x.len() {
                self.out.push(self.x.clone());
                return Ok(());
            }
            for t in self.lo[i]..=self.hi[i] {
                let mut ok = true;
                let mut next = partial.to_vec();
                for (f, a) in self.rows.iter().enumerate() {
                    next[f] += a[i] * t;
                    if next[f] + self.best[f][i + 1] < 0 {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    self.x[i] = t;
                    self.go(i + 1, &mut next)?;
                }
            }
            Ok(())
        }
    }
    let mut walk = Walk {
        rows,
        best: &best,
        lo: &lo,
        hi: &hi,
        x: vec![0; d],
        out: Vec::new(),
        nodes: 0,
        limit: crate::guard_limit(DILATION_NODE_GUARD),
    };
    let mut start: Vec<i64> = rows.iter().map(|a| a[d] * h).collect();
    walk.go(0, &mut start)?;
    Ok(walk
        .out
        .into_iter()
        .filter(|x| {
            let y: Vec<Int> = x.iter().map(|&t| Int::from(t)).chain([Int::from(h)]).collect();
            p.in_linear_span(&y)
        })
        .collect())
}

pub fn lattice_span(p: &Polytope) -> Result<ConeData> {
    let generators: Vec<Vec<Int>> = p
        .lattice_points()?
        .iter()
        .map(|v| Polytope::homogenize(v))
        .collect();
    let n = p.ambient_dim() + 1;
    let span_basis = canonical_lattice_basis(&generators, n);
    let mut data = ConeData {
        generators,
        span_basis,
        span_is_full: false,
    };
    data.span_is_full = data.index().is_some_and(|i| i.is_one());
    Ok(data)
}

/// True iff every support form takes values in `{0, 1}` on the lattice points.
pub fn has_width_one(p: &Polytope) -> Result<bool> {
    Ok(p
        .facets()?
        .iter()
        .all(|f| f.values.iter().all(|v| v.is_zero() || v.is_one())))
}

pub fn normality_check(p: &Polytope) -> Result<NormalityVerdict> {
    normality_check_with(p, NormalityOptions::default())
}

pub fn normality_check_with(p: &Polytope, opts: NormalityOptions) -> Result<NormalityVerdict> {
    let dim = p.dim();
    if dim == 0 {
        return Err(Error::Degenerate);
    }
    let span = lattice_span(p)?;
    let has_idp = |normal: bool| span.span_is_full.then_some(normal);
    if !opts.exhaustive && opts.max_height.is_none() && has_width_one(p)? {
        return Ok(NormalityVerdict {
            normal: true,
            has_idp: has_idp(true),
            witness: None,
            method: NormalityMethod::WidthOne,
            max_height: 0,
        });
    }
    let top = opts.max_height.unwrap_or_else(|| dim.saturating_sub(1).max(1));
    let search = SumsetSearch::new(p);
    let mut levels = vec![search.first_level()];
    for h in 2..=top {
        let next = search.next_level(levels.last().unwrap());
        levels.push(next);
        for x in dilation_points(p, h)? {
            let y: Vec<Int> = x.iter().map(|&t| Int::from(t)).chain([Int::from(h)]).collect();
            if !span.contains(&y) {
                continue;
            }
            if let Some(parts) = search.decomposition(&levels, &x) {
                // re-verify the stored decomposition by summation
                let sum: Point = (0..x.len()).map(|i| parts.iter().map(|q| q[i]).sum()).collect();
                assert_eq!(sum, x, "sumset bookkeeping is inconsistent");
                continue;
            }
            let mut point = x;
            point.push(h as i64);
            return Ok(NormalityVerdict {
                normal: false,
                has_idp: has_idp(false),
                witness: Some(Witness { point, height: h }),
                method: NormalityMethod::Sumset,
                max_height: h,
            });
        }
    }
    Ok(NormalityVerdict {
        normal: true,
        has_idp: has_idp(true),
        witness: None,
        method: NormalityMethod::Sumset,
        max_height: top,
    })
}

/// Level `h` of the sumset: every sum of `h` generators, each remembered
/// with one generator that can be split off.
type Level = HashMap<Point, usize>;

struct SumsetSearch {
    gens: Vec<Point>,
}

impl SumsetSearch {
    fn new(p: &Polytope) -> Self {
        SumsetSearch {
            gens: p.lattice_points().map(<[Point]>::to_vec).unwrap_or_default(),
        }
    }

    fn first_level(&self) -> Level {
        self.gens.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect()
    }

    fn next_level(&self, prev: &Level) -> Level {
        let mut next = Level::with_capacity(prev.len() * 2);
        for s in prev.keys() {
            for (i, g) in self.gens.iter().enumerate() {
                let sum: Point = s.iter().zip(g).map(|(a, b)| a + b).collect();
                next.entry(sum).or_insert(i);
            }
        }
        next
    }

    /// Reads a decomposition of `x` off the stored levels (`levels[h - 1]` is height `h`).
    fn decomposition(&self, levels: &[Level], x: &[i64]) -> Option<Vec<Point>> {
        let mut parts = Vec::with_capacity(levels.len());
        let mut rest = x.to_vec();
        for level in levels.iter().rev() {
            let g = &self.gens[*level.get(&rest)?];
            rest = rest.iter().zip(g).map(|(a, b)| a - b).collect();
            parts.push(g.clone());
        }
        rest.iter().all(|&t| t == 0).then_some(parts)
    }
}

/// Writes `x` (a point of `hP`) as a sum of `h` lattice points of `P`, if possible.
pub fn decompose(p: &Polytope, x: &[i64], h: usize) -> Result<Option<Vec<Point>>> {
    let gens = p.lattice_points()?;
    fn go(gens: &[Point], x: &[i64], h: usize, start: usize, out: &mut Vec<Point>) -> bool {
        if h == 0 {
            return x.iter().all(|&t| t == 0);
        }
        for (i, g) in gens.iter().enumerate().skip(start) {
            let rest: Point = x.iter().zip(g).map(|(a, b)| a - b).collect();
            out.push(g.clone());
            // generators are used in nondecreasing index order
            if go(gens, &rest, h - 1, i, out) {
                return true;
            }
            out.pop();
        }
        false
    }
    let mut out = Vec::with_capacity(h);
    Ok(go(gens, x, h, 0, &mut out).then_some(out))
}

/// Integral solution `y` of `d_F(y) = 1` for every facet, with `y` in the
/// lattice spanned by the lattice points; `None` if there is none.
///
/// For a normal polytope this decides whether the toric ring is Gorenstein.
pub fn gorenstein_point(p: &Polytope) -> Result<Option<Vec<Int>>> {
    if !normality_check(p)?.normal {
        return Err(Error::NotNormal);
    }
    let span = lattice_span(p)?;
    let facets = p.facets()?;
    let n = p.ambient_dim() + 1;
    let rows: Vec<Vec<Int>> = facets
        .iter()
        .map(|f| {
            span.span_basis
                .iter()
                .map(|b| {
                    let v = dot(&f.normal, b);
                    debug_assert!((&v % &f.denominator).is_zero());
                    v / &f.denominator
                })
                .collect()
        })
        .collect();
    let m = IntMatrix::from_rows(&rows, span.span_basis.len());
    let ones = vec![Int::one(); facets.len()];
    Ok(solve_integer_linear(&m, &ones).map(|z| IntMatrix::from_columns(&span.span_basis, n).mul_vec(&z)))
}

pub fn gorenstein_check(p: &Polytope) -> Result<bool> {
    Ok(gorenstein_point(p)?.is_some())
}
