//! Divisor class groups of normal toric rings of polytopes.
//!
//! The class group is the cokernel of the facet-by-lattice-point matrix of
//! support form values. Its Smith normal form gives the group, and the left
//! transform gives an explicit projection onto the free part, whose images
//! of the facet basis vectors are the weights.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::normality_check;
use crate::linalg::{smith_normal_form, Int, IntMatrix, Rat, SnfResult};
use crate::polytope::{Point, Polytope};

/// `Cl = Z^free_rank ⊕ ⊕ Z/t` for `t` in `torsion`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroupPresentation {
    /// Rows are facets, columns lattice points; entry `d_F(v)`.
    pub matrix: IntMatrix,
    pub snf: SnfResult,
    pub free_rank: usize,
    pub torsion: Vec<Int>,
    /// Computed for a polytope that is not normal; the group is then only the
    /// cokernel of the matrix, not a class group.
    pub formal: bool,
}

impl ClassGroupPresentation {
    pub fn is_torsionfree(&self) -> bool {
        self.torsion.is_empty()
    }

    /// `(free rank, invariant factors > 1)`, for comparing groups.
    pub fn shape(&self) -> (usize, Vec<Int>) {
        (self.free_rank, self.torsion.clone())
    }
}

impl fmt::Display for ClassGroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == t).count();
            parts.push(if run == 1 {
                format!("Z/{t}")
            } else {
                format!("(Z/{t})^{run}")
            });
            i += run;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Weights `β_F ∈ Z^r`, one per facet in facet order, with the projection
/// that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightAssignment {
    pub rank: usize,
    pub weights: Vec<Vec<Int>>,
    /// `r × #facets` matrix; column `F` is `β_F`.
    pub iota: IntMatrix,
}

impl WeightAssignment {
    /// Weights without the projection, e.g. a table of expected values.
    pub fn from_weights(rank: usize, weights: Vec<Vec<Int>>) -> Self {
        let iota = IntMatrix::from_columns(&weights, rank);
        WeightAssignment { rank, weights, iota }
    }

    /// Applies `t` (an `r × r` matrix) to every weight.
    pub fn transformed(&self, t: &IntMatrix) -> Self {
        let weights = self.weights.iter().map(|w| t.mul_vec(w)).collect();
        WeightAssignment {
            rank: self.rank,
            weights,
            iota: t.mul(&self.iota),
        }
    }
}

pub fn pairing_matrix(p: &Polytope) -> Result<IntMatrix> {
    let facets = p.facets()?;
    let n = p.lattice_points()?.len();
    let rows: Vec<Vec<Int>> = facets.iter().map(|f| f.values.clone()).collect();
    Ok(IntMatrix::from_rows(&rows, n))
}

pub fn class_group(p: &Polytope) -> Result<ClassGroupPresentation> {
    class_group_with(p, false)
}

/// Like [`class_group`]; with `force` a non-normal polytope yields a result
/// marked formal instead of an error.
pub fn class_group_with(p: &Polytope, force: bool) -> Result<ClassGroupPresentation> {
    let normal = normality_check(p)?.normal;
    if !normal && !force {
        return Err(Error::NotNormal);
    }
    let matrix = pairing_matrix(p)?;
    let snf = smith_normal_form(&matrix);
    let free_rank = matrix.rows() - snf.rank;
    let torsion = snf.torsion();
    Ok(ClassGroupPresentation {
        matrix,
        snf,
        free_rank,
        torsion,
        formal: !normal,
    })
}

/// Weights from the last `r` rows of the left Smith transform.
pub fn weights(p: &Polytope) -> Result<WeightAssignment> {
    weights_from(&class_group(p)?)
}

pub fn weights_from(cg: &ClassGroupPresentation) -> Result<WeightAssignment> {
    if !cg.is_torsionfree() {
        return Err(Error::Torsion(cg.torsion.iter().map(ToString::to_string).collect()));
    }
    let nf = cg.matrix.rows();
    let r = cg.free_rank;
    let rows: Vec<Vec<Int>> = (cg.snf.rank..nf).map(|i| cg.snf.left.row(i).to_vec()).collect();
    let iota = IntMatrix::from_rows(&rows, nf);
    let weights = (0..nf).map(|f| iota.column(f)).collect();
    Ok(WeightAssignment { rank: r, weights, iota })
}

/// Every column of the pairing matrix maps to zero under the projection.
pub fn columns_annihilated(p: &Polytope, w: &WeightAssignment) -> Result<bool> {
    let image = w.iota.mul(&pairing_matrix(p)?);
    Ok((0..image.rows()).all(|j| (0..image.cols()).all(|c| image[(j, c)].is_zero())))
}

/// `Σ_F β_F^(j) (a_F, b_F) = 0` for every `j`.
///
/// For a polytope that is not full-dimensional the support forms are only
/// determined up to the equations of the affine hull, so the sum is checked
/// to vanish on the hull instead.
pub fn weight_identities_hold(p: &Polytope, w: &WeightAssignment) -> Result<bool> {
    let facets = p.facets()?;
    let n = p.ambient_dim() + 1;
    let full = p.dim() == p.ambient_dim();
    for j in 0..w.rank {
        let mut sum = vec![Rat::zero(); n];
        for (f, beta) in facets.iter().zip(&w.weights) {
            if beta[j].is_zero() {
                continue;
            }
            for (s, c) in sum.iter_mut().zip(&f.normal) {
                *s += Rat::new(&beta[j] * c, f.denominator.clone());
            }
        }
        let ok = if full {
            sum.iter().all(Zero::is_zero)
        } else {
            p.vertices().iter().all(|v| {
                let y = Polytope::homogenize(v);
                sum.iter().zip(&y).map(|(s, t)| s * Rat::from_integer(t.clone())).sum::<Rat>().is_zero()
            })
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn count(ws: &[Vec<Int>]) -> HashMap<Vec<Int>, usize> {
    let mut m = HashMap::new();
    for w in ws {
        *m.entry(w.clone()).or_insert(0) += 1;
    }
    m
}

fn det2(a: &[Int], b: &[Int]) -> Int {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Whether some `T ∈ GL_r(Z)` carries the multiset of weights of `a` onto
/// that of `b`. Supported for `r ≤ 2`.
pub fn weights_equivalent(a: &WeightAssignment, b: &WeightAssignment) -> Result<bool> {
    if a.rank != b.rank || a.weights.len() != b.weights.len() {
        return Err(Error::ShapeMismatch(format!(
            "rank {} with {} weights vs rank {} with {} weights",
            a.rank,
            a.weights.len(),
            b.rank,
            b.weights.len()
        )));
    }
    Ok(find_transform(a, b)?.is_some())
}

/// The transform behind [`weights_equivalent`], if one exists.
pub fn find_transform(a: &WeightAssignment, b: &WeightAssignment) -> Result<Option<IntMatrix>> {
    let target = count(&b.weights);
    match a.rank {
        0 => Ok(Some(IntMatrix::identity(0))),
        1 => {
            for s in [1i64, -1] {
                let t = IntMatrix::from_vec(1, 1, vec![Int::from(s)]);
                if count(&a.transformed(&t).weights) == target {
                    return Ok(Some(t));
                }
            }
            Ok(None)
        }
        2 => {
            let source = count(&a.weights);
            let mut distinct_a: Vec<&Vec<Int>> = source.keys().collect();
            distinct_a.sort();
            let Some((a1, a2)) = distinct_a
                .iter()
                .enumerate()
                .flat_map(|(i, x)| distinct_a[i + 1..].iter().map(move |y| (*x, *y)))
                .find(|(x, y)| !det2(x, y).is_zero())
            else {
                // weights span a line at most; then they cannot generate Z^2
                return Ok(None);
            };
            let da = det2(a1, a2);
            let mut distinct_b: Vec<&Vec<Int>> = target.keys().collect();
            distinct_b.sort();
            for b1 in &distinct_b {
                for b2 in &distinct_b {
                    let db = det2(b1, b2);
                    if db.abs() != da.abs() {
                        continue;
                    }
                    // T = [b1 b2] [a1 a2]^{-1}; [a1 a2]^{-1} = adj / da
                    let bm = [[&b1[0], &b2[0]], [&b1[1], &b2[1]]];
                    let adj = [[a2[1].clone(), -a2[0].clone()], [-a1[1].clone(), a1[0].clone()]];
                    let mut t = Vec::with_capacity(4);
                    let mut integral = true;
                    for row in bm {
                        for col in 0..2 {
                            let v = row[0] * &adj[0][col] + row[1] * &adj[1][col];
                            if !(&v % &da).is_zero() {
                                integral = false;
                            }
                            t.push(v / &da);
                        }
                    }
                    if !integral {
                        continue;
                    }
                    let t = IntMatrix::from_vec(2, 2, t);
                    if count(&a.transformed(&t).weights) == target {
                        return Ok(Some(t));
                    }
                }
            }
            Ok(None)
        }
        r => Err(Error::UnsupportedRank(r)),
    }
}

/// A longest chain of lattice points and facets with `d_{F_i}(v_i) = 1` and
/// every `v_i` on all earlier facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KpSequence {
    pub k: usize,
    /// `(point, facet index)` pairs in order.
    pub steps: Vec<(Point, usize)>,
}

/// Exhaustive search for the longest such chain.
///
/// The state after some steps is the set of lattice points on every chosen
/// facet; the facets themselves need no tracking since a facet with value 1
/// at a point of the state cannot be among those already chosen.
pub fn kp_search(p: &Polytope) -> Result<KpSequence> {
    let facets = p.facets()?;
    let points = p.lattice_points()?;
    let n = points.len();
    let zero_sets: Vec<BitSet> = facets
        .iter()
        .map(|f| {
            let mut s = BitSet::new(n);
            for (i, v) in f.values.iter().enumerate() {
                if v.is_zero() {
                    s.insert(i);
                }
            }
            s
        })
        .collect();
    let ones: Vec<Vec<usize>> = (0..n)
        .map(|v| (0..facets.len()).filter(|&f| facets[f].values[v].is_one()).collect())
        .collect();
    let cap = p.dim() + 1;

    struct Ctx<'a> {
        zero_sets: &'a [BitSet],
        ones: &'a [Vec<usize>],
        cap: usize,
        memo: HashMap<BitSet, (usize, Option<(usize, usize)>)>,
    }
    fn best(ctx: &mut Ctx, state: &BitSet) -> usize {
        if let Some(&(k, _)) = ctx.memo.get(state) {
            return k;
        }
        let mut top = (0, None);
        'outer: for v in state.iter() {
            for &f in &ctx.ones[v] {
                let next = state.intersection(&ctx.zero_sets[f]);
                let k = 1 + best(ctx, &next);
                if k > top.0 {
                    top = (k, Some((v, f)));
                    if k >= ctx.cap {
                        break 'outer;
                    }
                }
            }
        }
        ctx.memo.insert(state.clone(), top);
        top.0
    }

    let mut ctx = Ctx {
        zero_sets: &zero_sets,
        ones: &ones,
        cap,
        memo: HashMap::new(),
    };
    let mut state = BitSet::new(n);
    (0..n).for_each(|i| state.insert(i));
    let k = best(&mut ctx, &state);
    let mut steps = Vec::with_capacity(k);
    while let Some(&(_, Some((v, f)))) = ctx.memo.get(&state) {
        steps.push((points[v].clone(), f));
        state = state.intersection(&zero_sets[f]);
    }
    debug_assert_eq!(steps.len(), k);
    Ok(KpSequence { k, steps })
}

/// Checks a chain against its definition.
pub fn kp_sequence_valid(p: &Polytope, seq: &KpSequence) -> Result<bool> {
    let facets = p.facets()?;
    let points = p.lattice_points()?;
    let idx = |v: &Point| points.iter().position(|w| w == v);
    for (i, (v, f)) in seq.steps.iter().enumerate() {
        let Some(vi) = idx(v) else { return Ok(false) };
        if !facets[*f].values[vi].is_one() {
            return Ok(false);
        }
        if seq.steps[..i].iter().any(|(_, g)| !facets[*g].values[vi].is_zero()) {
            return Ok(false);
        }
    }
    let mut fs: Vec<usize> = seq.steps.iter().map(|s| s.1).collect();
    fs.sort_unstable();
    fs.dedup();
    Ok(fs.len() == seq.steps.len() && seq.k == seq.steps.len())
}

/// `true` if the first `k` invariant factors are all one.
pub fn leading_ones(snf: &SnfResult, k: usize) -> bool {
    snf.diag.len() >= k && snf.diag[..k].iter().all(One::is_one)
}
