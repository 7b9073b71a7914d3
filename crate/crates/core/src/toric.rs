//! Binomials in toric ideals: membership, the graded reverse lexicographic
//! order with mixed variables on top, the binomials (b1)–(b3) of
//! `P_{n_1,...,n_k}`, Buchberger verification and minimal generators by degree.
//!
//! Variables are indexed by lattice points: variable `i` is the `i`-th entry
//! of [`Polytope::lattice_points`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::families::{pnk_mixed_indices, pnk_mixed_point, pnk_vertices};
use crate::polytope::{Point, Polytope};

/// Guard on the number of monomials enumerated by [`graded_min_gens`].
pub const MONOMIAL_GUARD: u128 = 200_000;

/// A monomial as a dense exponent vector without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial { exps }
    }

    /// Product of the listed variables, with repetition.
    pub fn from_vars(vars: &[usize]) -> Self {
        let mut exps = vec![0; vars.iter().map(|&v| v + 1).max().unwrap_or(0)];
        for &v in vars {
            exps[v] += 1;
        }
        Monomial { exps }
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps.get(var).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// `(variable, exponent)` for every variable that occurs.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps.iter().copied().enumerate().filter(|&(_, e)| e > 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.support().all(|(v, e)| other.exponent(v) >= e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        Monomial::from_exponents((0..n).map(|v| self.exponent(v) + other.exponent(v)).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        Monomial::from_exponents((0..n).map(|v| self.exponent(v).max(other.exponent(v))).collect())
    }

    /// `Σ e_v (v, 1)` over the given lattice points.
    fn image(&self, points: &[Point]) -> Result<Vec<i64>> {
        let d = points.first().map_or(0, Vec::len);
        let mut out = vec![0i64; d + 1];
        for (v, e) in self.support() {
            let p = points.get(v).ok_or(Error::UnknownVariable {
                index: v,
                count: points.len(),
            })?;
            for (o, &x) in out.iter_mut().zip(p) {
                *o += e as i64 * x;
            }
            out[d] += e as i64;
        }
        Ok(out)
    }

    /// Renders variables by their lattice points, e.g. `x[1,0,0]^2*x[0,1,1]`.
    pub fn display_with(&self, points: &[Point]) -> String {
        if self.exps.iter().all(|&e| e == 0) {
            return "1".into();
        }
        self.support()
            .map(|(v, e)| {
                let name = match points.get(v) {
                    Some(p) => format!(
                        "x[{}]",
                        p.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
                    ),
                    None => format!("x{v}"),
                };
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.iter().all(|&e| e == 0) {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .support()
            .map(|(v, e)| if e == 1 { format!("x{v}") } else { format!("x{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// `lhs - rhs`. By convention `lhs` is the leading term when a binomial
/// comes from [`gbasis_pnk`]; the verification routines do not rely on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binomial {
    pub lhs: Monomial,
    pub rhs: Monomial,
}

impl Binomial {
    pub fn new(lhs: Monomial, rhs: Monomial) -> Result<Self> {
        if lhs == rhs {
            return Err(Error::InvalidParameters(format!("binomial {lhs} - {rhs} is zero")));
        }
        Ok(Binomial { lhs, rhs })
    }

    pub fn display_with(&self, points: &[Point]) -> String {
        format!("{} - {}", self.lhs.display_with(points), self.rhs.display_with(points))
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - {}", self.lhs, self.rhs)
    }
}

/// Graded reverse lexicographic order for a ranking of the variables.
///
/// Monomials are compared by degree first; in equal degree, at the smallest
/// variable where the exponents differ, the smaller exponent wins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RevLexOrder {
    /// Variables from smallest to largest.
    ascending: Vec<usize>,
}

impl RevLexOrder {
    /// `ascending` lists every variable `0..n` once, smallest first.
    pub fn new(ascending: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; ascending.len()];
        for &v in &ascending {
            if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidParameters("variable ranking is not a permutation".into()));
            }
        }
        Ok(RevLexOrder { ascending })
    }

    /// Ranking for variables indexed by (0,1)-points: points with coordinate
    /// sum at least 2 lie above the others; within each group a point is
    /// larger when the first nonzero entry of the difference is positive.
    /// On `P_{n_1,...,n_k}` this puts `x_0` lowest and `x_{e_1}` highest
    /// among the non-mixed variables.
    pub fn mixed_above(points: &[Point]) -> Self {
        let mut ascending: Vec<usize> = (0..points.len()).collect();
        ascending.sort_by(|&a, &b| {
            let key = |p: &Point| p.iter().sum::<i64>() >= 2;
            key(&points[a]).cmp(&key(&points[b])).then_with(|| points[a].cmp(&points[b]))
        });
        RevLexOrder { ascending }
    }

    pub fn for_polytope(p: &Polytope) -> Result<Self> {
        Ok(Self::mixed_above(p.lattice_points()?))
    }

    pub fn num_vars(&self) -> usize {
        self.ascending.len()
    }

    /// Variables from smallest to largest.
    pub fn ascending(&self) -> &[usize] {
        &self.ascending
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        a.degree().cmp(&b.degree()).then_with(|| {
            for &v in &self.ascending {
                let (ea, eb) = (a.exponent(v), b.exponent(v));
                if ea != eb {
                    return eb.cmp(&ea);
                }
            }
            Ordering::Equal
        })
    }

    /// The larger of the two terms.
    pub fn leading<'a>(&self, b: &'a Binomial) -> &'a Monomial {
        if self.cmp(&b.lhs, &b.rhs) == Ordering::Less {
            &b.rhs
        } else {
            &b.lhs
        }
    }
}

/// True iff both terms of `b` have the same image `Σ e_v (v, 1)`.
pub fn binomial_in_ideal(p: &Polytope, b: &Binomial) -> Result<bool> {
    let points = p.lattice_points()?;
    Ok(b.lhs.image(points)? == b.rhs.image(points)?)
}

/// The lattice points of `P_{n_1,...,n_k}` in variable order, computed
/// without the facet machinery. Equal to `make_pnk(ns)?.lattice_points()`.
pub fn pnk_variables(ns: &[usize]) -> Result<Vec<Point>> {
    let mut v = pnk_vertices(ns)?;
    v.sort();
    Ok(v)
}

/// The binomials (b1), (b2) and (b3) of `P_{n_1,...,n_k}`, kept apart.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PnkBinomials {
    pub b1: Vec<Binomial>,
    pub b2: Vec<Binomial>,
    pub b3: Vec<Binomial>,
}

impl PnkBinomials {
    pub fn all(&self) -> Vec<Binomial> {
        self.b1.iter().chain(&self.b2).chain(&self.b3).cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.b1.len() + self.b2.len() + self.b3.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Builds (b1)–(b3) with the leading term on the left.
///
/// * (b1) `x_{i_1} ... x_{i_k} - x_0^{k-1} x_{(i_1,...,i_k)}`
/// * (b2) `x_{j_p} x_{(...,i_p,...)} - x_{i_p} x_{(...,j_p,...)}` whenever
///   `x_{i_p} < x_{j_p}`, i.e. `j_p` has the smaller coordinate index
/// * (b3) `x_I x_J - x_{I'} x_{J'}` where `I'` takes the smaller of `i_p, j_p`
///   in every block and `J'` the larger; pairs with `{I', J'} = {I, J}` are skipped.
///
/// For `k = 1` the toric ideal is zero and all three lists are empty.
pub fn gbasis_pnk_blocks(ns: &[usize]) -> Result<PnkBinomials> {
    let points = pnk_variables(ns)?;
    if ns.len() < 2 {
        return Ok(PnkBinomials::default());
    }
    let index: HashMap<&Point, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let d: usize = ns.iter().sum();
    let k = ns.len();
    let offsets: Vec<usize> = ns
        .iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let basis = |coord: usize| {
        let mut e = vec![0i64; d];
        e[coord] = 1;
        index[&e]
    };
    let singles: Vec<usize> = (0..d).map(basis).collect();
    let origin = index[&vec![0i64; d]];
    let tuples = pnk_mixed_indices(ns);
    // tuples are listed in mixed-radix order, so a tuple's position is its rank
    let mixed_vars: Vec<usize> = tuples.iter().map(|t| index[&pnk_mixed_point(ns, t)]).collect();
    let mixed = |idx: &[usize]| mixed_vars[idx.iter().zip(ns).fold(0, |acc, (&i, &n)| acc * n + i)];
    let basis = |coord: usize| singles[coord];
    let mono = |vars: &[usize]| Monomial::from_vars(vars);
    let mut out = PnkBinomials::default();

    for t in &tuples {
        let factors: Vec<usize> = (0..k).map(|p| basis(offsets[p] + t[p])).collect();
        let mut rhs = vec![origin; k - 1];
        rhs.push(mixed(t));
        out.b1.push(Binomial::new(mono(&factors), mono(&rhs))?);
    }
    for t in &tuples {
        for p in 0..k {
            // basis vectors with a smaller coordinate index rank higher
            for j in 0..t[p] {
                let mut u = t.clone();
                u[p] = j;
                let lhs = mono(&[basis(offsets[p] + j), mixed(t)]);
                let rhs = mono(&[basis(offsets[p] + t[p]), mixed(&u)]);
                out.b2.push(Binomial::new(lhs, rhs)?);
            }
        }
    }
    for (a, s) in tuples.iter().enumerate() {
        for t in &tuples[a + 1..] {
            let lo: Vec<usize> = s.iter().zip(t).map(|(&x, &y)| x.max(y)).collect();
            let hi: Vec<usize> = s.iter().zip(t).map(|(&x, &y)| x.min(y)).collect();
            if (&lo == s && &hi == t) || (&lo == t && &hi == s) {
                continue;
            }
            let lhs = mono(&[mixed(s), mixed(t)]);
            let rhs = mono(&[mixed(&lo), mixed(&hi)]);
            out.b3.push(Binomial::new(lhs, rhs)?);
        }
    }
    Ok(out)
}

/// All of (b1), (b2), (b3) in that order.
pub fn gbasis_pnk(ns: &[usize]) -> Result<Vec<Binomial>> {
    Ok(gbasis_pnk_blocks(ns)?.all())
}

/// Graded reverse lexicographic comparison of exponent vectors listed
/// from the smallest variable up.
fn cmp_ranked(a: &[u32], b: &[u32]) -> Ordering {
    let (mut da, mut db) = (0u32, 0u32);
    let mut first = None;
    for (i, (&x, &y)) in a.iter().zip(b).enumerate() {
        da += x;
        db += y;
        if first.is_none() && x != y {
            first = Some(i);
        }
    }
    da.cmp(&db)
        .then_with(|| first.map_or(Ordering::Equal, |i| b[i].cmp(&a[i])))
}

/// Top-reduction of binomials modulo a fixed set. Exponent vectors are
/// stored in rank order, smallest variable first.
struct Reducer {
    n: usize,
    lead: Vec<Vec<u32>>,
    tail: Vec<Vec<u32>>,
    /// Support of each leading term over the first 128 variables; a
    /// necessary condition for divisibility, exact when `n <= 128`.
    masks: Vec<u128>,
    /// Leading terms grouped by their first variable; constants go last.
    by_first: Vec<Vec<usize>>,
}

fn mask(m: &[u32]) -> u128 {
    m.iter()
        .take(128)
        .enumerate()
        .filter(|&(_, &e)| e > 0)
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl Reducer {
    fn new(g: &[Binomial], order: &RevLexOrder) -> Self {
        let n = order.num_vars();
        let (mut lead, mut tail) = (Vec::new(), Vec::new());
        for b in g {
            let (l, t) = if order.cmp(&b.lhs, &b.rhs) == Ordering::Less {
                (&b.rhs, &b.lhs)
            } else {
                (&b.lhs, &b.rhs)
            };
            let ranked = |m: &Monomial| order.ascending.iter().map(|&v| m.exponent(v)).collect::<Vec<_>>();
            lead.push(ranked(l));
            tail.push(ranked(t));
        }
        let masks = lead.iter().map(|m| mask(m)).collect();
        let mut by_first = vec![Vec::new(); n + 1];
        for (g, l) in lead.iter().enumerate() {
            by_first[l.iter().position(|&e| e > 0).unwrap_or(n)].push(g);
        }
        Reducer { n, lead, tail, masks, by_first }
    }

    /// Indices of leading terms dividing `u`, restricted to those whose
    /// first variable occurs in `u`.
    fn divisors<'s>(&'s self, u: &'s [u32]) -> impl Iterator<Item = usize> + 's {
        let mu = mask(u);
        (0..=self.n)
            .filter(move |&v| v == self.n || u[v] > 0)
            .flat_map(move |v| self.by_first[v].iter().copied())
            .filter(move |&g| self.masks[g] & !mu == 0 && divides(&self.lead[g], u))
    }

    fn find_divisor(&self, u: &[u32]) -> Option<usize> {
        self.divisors(u).next()
    }

    /// Whether `u - v` top-reduces to zero. Each step replaces the larger
    /// term by a strictly smaller one, so this terminates.
    fn reduces_to_zero(&self, u: &mut Vec<u32>, v: &mut Vec<u32>) -> bool {
        loop {
            match cmp_ranked(u, v) {
                Ordering::Equal => return true,
                Ordering::Less => std::mem::swap(u, v),
                Ordering::Greater => {}
            }
            let Some(g) = self.find_divisor(u) else {
                return false;
            };
            for i in 0..self.n {
                u[i] = u[i] - self.lead[g][i] + self.tail[g][i];
            }
        }
    }

    fn coprime(&self, g: usize, h: usize) -> bool {
        if self.n <= 128 {
            self.masks[g] & self.masks[h] == 0
        } else {
            self.lead[g].iter().zip(&self.lead[h]).all(|(&a, &b)| a == 0 || b == 0)
        }
    }

    fn lcm_into(&self, g: usize, h: usize, out: &mut Vec<u32>) {
        out.clear();
        out.extend(self.lead[g].iter().zip(&self.lead[h]).map(|(&a, &b)| a.max(b)));
    }

    /// Buchberger's chain criterion: some other leading term divides the
    /// lcm and both pairs through it are already settled.
    fn chain_skip(&self, g: usize, h: usize, lcm: &[u32], settled: &[bool]) -> bool {
        let m = self.lead.len();
        self.divisors(lcm)
            .any(|k| k != g && k != h && settled[g * m + k] && settled[h * m + k])
    }

    /// The S-binomial of `g` and `h` top-reduces to zero.
    fn s_reduces(&self, g: usize, h: usize, lcm: &[u32], u: &mut Vec<u32>, v: &mut Vec<u32>) -> bool {
        let side = |l: &[u32], t: &[u32], out: &mut Vec<u32>| {
            out.clear();
            out.extend((0..self.n).map(|i| lcm[i] - l[i] + t[i]));
        };
        side(&self.lead[g], &self.tail[g], u);
        side(&self.lead[h], &self.tail[h], v);
        self.reduces_to_zero(u, v)
    }
}

fn check_membership(g: &[Binomial], order: &RevLexOrder, p: &Polytope) -> Result<()> {
    if order.num_vars() != p.lattice_points()?.len() {
        return Err(Error::InvalidParameters(format!(
            "order ranks {} variables but the polytope has {} lattice points",
            order.num_vars(),
            p.lattice_points()?.len()
        )));
    }
    for b in g {
        if !binomial_in_ideal(p, b)? {
            return Err(Error::NotInIdeal(b.display_with(p.lattice_points()?)));
        }
    }
    Ok(())
}

/// Buchberger's criterion: true iff every S-binomial of `g` reduces to zero
/// modulo `g` under `order`. Pairs are processed in lexicographic order.
pub fn buchberger_verify(g: &[Binomial], order: &RevLexOrder, p: &Polytope) -> Result<bool> {
    let pairs: Vec<(usize, usize)> = (0..g.len())
        .flat_map(|i| (i + 1..g.len()).map(move |j| (i, j)))
        .collect();
    buchberger_verify_pairs(g, order, p, &pairs)
}

/// [`buchberger_verify`] with an explicit pair schedule; pairs not listed
/// are not checked.
pub fn buchberger_verify_pairs(
    g: &[Binomial],
    order: &RevLexOrder,
    p: &Polytope,
    pairs: &[(usize, usize)],
) -> Result<bool> {
    check_membership(g, order, p)?;
    Ok(first_failing_pair(g, order, pairs).is_none())
}

/// The first listed pair whose S-binomial does not reduce to zero.
///
/// Pairs with coprime leading terms are skipped (Buchberger's first
/// criterion), as are pairs covered by the chain criterion through pairs
/// handled earlier in the schedule. Either skip preserves the answer, so the
/// verdict does not depend on the schedule when all pairs are listed.
pub fn first_failing_pair(
    g: &[Binomial],
    order: &RevLexOrder,
    pairs: &[(usize, usize)],
) -> Option<(usize, usize)> {
    let r = Reducer::new(g, order);
    let m = g.len();
    let mut settled = vec![false; m * m];
    let (mut lcm, mut u, mut v) = (Vec::new(), Vec::new(), Vec::new());
    for &(i, j) in pairs {
        if i == j {
            continue;
        }
        if !r.coprime(i, j) {
            r.lcm_into(i, j, &mut lcm);
            if !r.chain_skip(i, j, &lcm, &settled) && !r.s_reduces(i, j, &lcm, &mut u, &mut v) {
                return Some((i, j));
            }
        }
        settled[i * m + j] = true;
        settled[j * m + i] = true;
    }
    None
}

/// True iff every leading term of `g` is squarefree (vacuous for empty `g`).
pub fn initial_ideal_squarefree(g: &[Binomial], order: &RevLexOrder) -> bool {
    g.iter().all(|b| order.leading(b).is_squarefree())
}

/// True iff no leading term of `g` divides `m`.
pub fn is_standard(m: &Monomial, g: &[Binomial], order: &RevLexOrder) -> bool {
    !g.iter().any(|b| order.leading(b).divides(m))
}

/// All monomials of degree `t` in `n` variables, in lexicographic order of
/// exponent vectors (largest first).
pub fn monomials_of_degree(n: usize, t: u32) -> Vec<Monomial> {
    fn go(n: usize, v: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if v + 1 == n {
            cur[v] = left;
            out.push(Monomial::from_exponents(cur.clone()));
            cur[v] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[v] = e;
            go(n, v + 1, left - e, cur, out);
        }
        cur[v] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        if t == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    go(n, 0, t, &mut vec![0; n], &mut out);
    out
}

fn binomial_coefficient(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of minimal generators of the toric ideal in each degree
/// `2..=max_degree`.
///
/// Monomials of degree `t` are grouped by image. Inside a fiber `F`, the
/// degree-`t` part of the ideal is spanned by the differences of its
/// monomials (dimension `|F| - 1`), and the part generated in lower degree is
/// spanned by differences of monomials sharing a variable, so its dimension
/// is `|F|` minus the number of connected components of that relation.
pub fn graded_min_gens(p: &Polytope, max_degree: u32) -> Result<BTreeMap<u32, usize>> {
    let points = p.lattice_points()?;
    let n = points.len();
    let total: u128 = (2..=max_degree)
        .map(|t| binomial_coefficient(n as u128 + t as u128 - 1, t as u128))
        .fold(0u128, u128::saturating_add);
    crate::check_guard("monomials to enumerate", total, MONOMIAL_GUARD)?;
    let mut out = BTreeMap::new();
    for t in 2..=max_degree {
        let mut fibers: HashMap<Vec<i64>, Vec<Monomial>> = HashMap::new();
        for m in monomials_of_degree(n, t) {
            fibers.entry(m.image(points)?).or_default().push(m);
        }
        let count = fibers.values().map(|f| fiber_components(f, n) - 1).sum();
        out.insert(t, count);
    }
    Ok(out)
}

fn fiber_components(fiber: &[Monomial], n: usize) -> usize {
    let mut parent: Vec<usize> = (0..fiber.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut first_with = vec![usize::MAX; n];
    let mut components = fiber.len();
    for (i, m) in fiber.iter().enumerate() {
        for (v, _) in m.support() {
            if first_with[v] == usize::MAX {
                first_with[v] = i;
            } else {
                let (a, b) = (find(&mut parent, i), find(&mut parent, first_with[v]));
                if a != b {
                    parent[a] = b;
                    components -= 1;
                }
            }
        }
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cube, make_pnk, order_polytope, simplex, Poset};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn var(points: &[Point], p: &[i64]) -> usize {
        points.iter().position(|q| q == p).unwrap()
    }

    #[test]
    fn variables_match_lattice_points() {
        for ns in [vec![1, 1, 1], vec![2, 1], vec![1, 1, 1, 2], vec![3]] {
            let p = make_pnk(&ns).unwrap();
            assert_eq!(pnk_variables(&ns).unwrap(), p.lattice_points().unwrap());
        }
    }

    #[test]
    fn order_on_pnk_variables() {
        let pts = pnk_variables(&[1, 1, 1, 2]).unwrap();
        let ord = RevLexOrder::mixed_above(&pts);
        let names: Vec<&Point> = ord.ascending().iter().map(|&v| &pts[v]).collect();
        assert_eq!(names[0], &vec![0, 0, 0, 0, 0]);
        assert_eq!(names[1], &vec![0, 0, 0, 0, 1]);
        assert_eq!(names[5], &vec![1, 0, 0, 0, 0]);
        assert_eq!(names[6], &vec![1, 1, 1, 0, 1]);
        assert_eq!(names[7], &vec![1, 1, 1, 1, 0]);
        // degree first, then the smallest variable decides
        let x = |p: &[i64]| var(&pts, p);
        let a = Monomial::from_vars(&[x(&[0, 0, 0, 1, 0]), x(&[1, 1, 1, 0, 1])]);
        let b = Monomial::from_vars(&[x(&[0, 0, 0, 0, 1]), x(&[1, 1, 1, 1, 0])]);
        assert_eq!(ord.cmp(&a, &b), Ordering::Greater);
        let c = Monomial::from_vars(&[x(&[0, 0, 0, 0, 0])]);
        assert_eq!(ord.cmp(&c, &a), Ordering::Less);
    }

    #[test]
    fn membership() {
        let p = make_pnk(&[1, 1, 1]).unwrap();
        let pts = p.lattice_points().unwrap().to_vec();
        let x = |q: &[i64]| var(&pts, q);
        let b = Binomial::new(
            Monomial::from_vars(&[x(&[1, 0, 0]), x(&[0, 1, 0]), x(&[0, 0, 1])]),
            Monomial::from_vars(&[x(&[0, 0, 0]), x(&[0, 0, 0]), x(&[1, 1, 1])]),
        )
        .unwrap();
        assert!(binomial_in_ideal(&p, &b).unwrap());
        let b = Binomial::new(Monomial::from_vars(&[x(&[1, 0, 0])]), Monomial::from_vars(&[x(&[0, 1, 0])]))
            .unwrap();
        assert!(!binomial_in_ideal(&p, &b).unwrap());
        let b = Binomial::new(Monomial::from_vars(&[9]), Monomial::from_vars(&[0])).unwrap();
        assert_eq!(
            binomial_in_ideal(&p, &b),
            Err(Error::UnknownVariable { index: 9, count: 5 })
        );
        assert!(Binomial::new(Monomial::from_vars(&[1]), Monomial::from_vars(&[1])).is_err());
    }

    #[test]
    fn pnk_binomials_examples() {
        let g = gbasis_pnk(&[1, 1, 1]).unwrap();
        assert_eq!(g.len(), 1);
        let pts = pnk_variables(&[1, 1, 1]).unwrap();
        assert_eq!(g[0].display_with(&pts), "x[0,0,1]*x[0,1,0]*x[1,0,0] - x[0,0,0]^2*x[1,1,1]");

        let blocks = gbasis_pnk_blocks(&[1, 1, 1, 2]).unwrap();
        assert_eq!((blocks.b1.len(), blocks.b2.len(), blocks.b3.len()), (2, 1, 0));
        let pts = pnk_variables(&[1, 1, 1, 2]).unwrap();
        assert_eq!(
            blocks.b2[0].display_with(&pts),
            "x[0,0,0,1,0]*x[1,1,1,0,1] - x[0,0,0,0,1]*x[1,1,1,1,0]"
        );

        let blocks = gbasis_pnk_blocks(&[2, 1]).unwrap();
        assert_eq!((blocks.b1.len(), blocks.b2.len(), blocks.b3.len()), (2, 1, 0));
        assert!(blocks.b1.iter().all(|b| b.lhs.degree() == 2));

        assert!(gbasis_pnk(&[4]).unwrap().is_empty());
        let b = gbasis_pnk_blocks(&[2, 2]).unwrap();
        assert_eq!((b.b1.len(), b.b2.len(), b.b3.len()), (4, 4, 1));
    }

    #[test]
    fn pnk_binomials_match_direct_enumeration() {
        // oracle: all pairs of degree-2 mixed/single products with equal image,
        // oriented by the order, restricted to the shapes (b2) and (b3)
        for ns in [vec![2, 2], vec![2, 3], vec![1, 2, 2]] {
            let p = make_pnk(&ns).unwrap();
            let pts = p.lattice_points().unwrap().to_vec();
            let ord = RevLexOrder::mixed_above(&pts);
            let blocks = gbasis_pnk_blocks(&ns).unwrap();
            let mixed: Vec<usize> = (0..pts.len()).filter(|&i| pts[i].iter().sum::<i64>() >= 2).collect();
            let singles: Vec<usize> = (0..pts.len()).filter(|&i| pts[i].iter().sum::<i64>() == 1).collect();
            let mut b3 = Vec::new();
            for (a, &m1) in mixed.iter().enumerate() {
                for &m2 in &mixed[a + 1..] {
                    let u = Monomial::from_vars(&[m1, m2]);
                    let smallest = mixed
                        .iter()
                        .flat_map(|&x| mixed.iter().map(move |&y| Monomial::from_vars(&[x, y])))
                        .filter(|w| w.image(&pts).unwrap() == u.image(&pts).unwrap())
                        .min_by(|a, b| ord.cmp(a, b))
                        .unwrap();
                    if smallest != u {
                        b3.push((u, smallest));
                    }
                }
            }
            let got: Vec<(Monomial, Monomial)> = blocks.b3.iter().map(|b| (b.lhs.clone(), b.rhs.clone())).collect();
            assert_eq!(got.len(), b3.len());
            for x in &b3 {
                assert!(got.contains(x), "{ns:?}");
            }
            let mut b2 = 0;
            for &s in &singles {
                for &m in &mixed {
                    let u = Monomial::from_vars(&[s, m]);
                    let smaller = singles.iter().flat_map(|&s2| mixed.iter().map(move |&m2| (s2, m2))).any(|(s2, m2)| {
                        let w = Monomial::from_vars(&[s2, m2]);
                        w.image(&pts).unwrap() == u.image(&pts).unwrap() && ord.cmp(&w, &u) == Ordering::Less
                    });
                    b2 += smaller as usize;
                }
            }
            assert_eq!(blocks.b2.len(), b2, "{ns:?}");
        }
    }

    #[test]
    fn leading_terms_on_the_left() {
        for ns in [vec![1, 1, 1], vec![2, 2], vec![2, 1, 3], vec![1, 1, 1, 2]] {
            let pts = pnk_variables(&ns).unwrap();
            let ord = RevLexOrder::mixed_above(&pts);
            for b in gbasis_pnk(&ns).unwrap() {
                assert_eq!(ord.cmp(&b.lhs, &b.rhs), Ordering::Greater, "{ns:?} {b}");
            }
        }
    }

    #[test]
    fn buchberger_on_examples() {
        for ns in [vec![1, 1, 1], vec![1, 1, 1, 2], vec![2, 2], vec![2, 3], vec![2, 2, 2], vec![1, 3]] {
            let p = make_pnk(&ns).unwrap();
            let ord = RevLexOrder::for_polytope(&p).unwrap();
            let g = gbasis_pnk(&ns).unwrap();
            assert!(buchberger_verify(&g, &ord, &p).unwrap(), "{ns:?}");
            assert!(initial_ideal_squarefree(&g, &ord));
        }
        let p = make_pnk(&[2, 2]).unwrap();
        let ord = RevLexOrder::for_polytope(&p).unwrap();
        let blocks = gbasis_pnk_blocks(&[2, 2]).unwrap();
        let without_b2: Vec<Binomial> = blocks.b1.iter().chain(&blocks.b3).cloned().collect();
        assert!(!buchberger_verify(&without_b2, &ord, &p).unwrap());
    }

    #[test]
    fn buchberger_independent_of_pair_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ns in [vec![1, 1, 1, 2], vec![2, 3]] {
            let p = make_pnk(&ns).unwrap();
            let ord = RevLexOrder::for_polytope(&p).unwrap();
            let blocks = gbasis_pnk_blocks(&ns).unwrap();
            let g = blocks.all();
            let broken: Vec<Binomial> = blocks.b1.iter().chain(&blocks.b3).cloned().collect();
            for set in [&g, &broken] {
                let mut pairs: Vec<(usize, usize)> =
                    (0..set.len()).flat_map(|i| (i + 1..set.len()).map(move |j| (i, j))).collect();
                let base = buchberger_verify(set, &ord, &p).unwrap();
                for _ in 0..2 {
                    pairs.shuffle(&mut rng);
                    assert_eq!(buchberger_verify_pairs(set, &ord, &p, &pairs).unwrap(), base);
                }
            }
        }
    }

    #[test]
    fn verification_rejects_foreign_binomials() {
        let p = make_pnk(&[1, 1, 1]).unwrap();
        let ord = RevLexOrder::for_polytope(&p).unwrap();
        let bad = Binomial::new(Monomial::from_vars(&[1]), Monomial::from_vars(&[2])).unwrap();
        assert!(matches!(buchberger_verify(&[bad], &ord, &p), Err(Error::NotInIdeal(_))));
    }

    #[test]
    fn squarefree_initial_ideal() {
        let pts = pnk_variables(&[1, 1, 1]).unwrap();
        let ord = RevLexOrder::mixed_above(&pts);
        assert!(initial_ideal_squarefree(&[], &ord));
        let g = gbasis_pnk(&[1, 1, 1]).unwrap();
        assert!(initial_ideal_squarefree(&g, &ord));
        // with x[0,0,1] ranked lowest, x_0^2 x_(1,1,1) becomes the leading term
        let low = var(&pts, &[0, 0, 1]);
        let mut rev = vec![low];
        rev.extend(ord.ascending().iter().copied().filter(|&v| v != low));
        let rev = RevLexOrder::new(rev).unwrap();
        assert_eq!(rev.leading(&g[0]).exponent(var(&pts, &[0, 0, 0])), 2);
        assert!(!initial_ideal_squarefree(&g, &rev));
    }

    #[test]
    fn min_gens_examples() {
        let p = make_pnk(&[1, 1, 1]).unwrap();
        assert_eq!(graded_min_gens(&p, 3).unwrap(), BTreeMap::from([(2, 0), (3, 1)]));
        let sq = cube(2).unwrap();
        assert_eq!(graded_min_gens(&sq, 2).unwrap(), BTreeMap::from([(2, 1)]));
        let s = simplex(3).unwrap();
        assert_eq!(graded_min_gens(&s, 3).unwrap(), BTreeMap::from([(2, 0), (3, 0)]));
        let p = make_pnk(&[1, 1, 1, 2]).unwrap();
        assert_eq!(graded_min_gens(&p, 4).unwrap(), BTreeMap::from([(2, 1), (3, 0), (4, 2)]));
    }

    #[test]
    fn min_gens_oracle_by_rank() {
        // independent check: dimension of the span of lower-degree multiples
        // by exact rank of difference vectors
        let p = make_pnk(&[2, 1]).unwrap();
        let pts = p.lattice_points().unwrap().to_vec();
        let n = pts.len();
        let got = graded_min_gens(&p, 3).unwrap();
        for t in 2..=3u32 {
            let mons = monomials_of_degree(n, t);
            let mut fibers: HashMap<Vec<i64>, Vec<Monomial>> = HashMap::new();
            for m in mons {
                fibers.entry(m.image(&pts).unwrap()).or_default().push(m);
            }
            let mut count = 0;
            for f in fibers.values() {
                let mut rows = Vec::new();
                for a in 0..f.len() {
                    for b in a + 1..f.len() {
                        let shares = (0..n).any(|v| f[a].exponent(v) > 0 && f[b].exponent(v) > 0);
                        if shares {
                            let mut r = vec![0i64; f.len()];
                            r[a] = 1;
                            r[b] = -1;
                            rows.push(r);
                        }
                    }
                }
                let rank = if rows.is_empty() {
                    0
                } else {
                    crate::linalg::IntMatrix::from_rows(&rows, f.len()).rank()
                };
                count += f.len() - 1 - rank;
            }
            assert_eq!(got[&t], count);
        }
    }

    #[test]
    fn quadratic_generation_of_order_polytopes() {
        for poset in [
            Poset::antichain(3),
            Poset::new(3, vec![(0, 1), (0, 2)]).unwrap(),
            Poset::new(4, vec![(0, 2), (1, 2), (1, 3)]).unwrap(),
        ] {
            let o = order_polytope(&poset).unwrap();
            let gens = graded_min_gens(&o, 3).unwrap();
            assert_eq!(gens[&3], 0);
        }
        let gens = graded_min_gens(&make_pnk(&[1, 1, 1]).unwrap(), 3).unwrap();
        assert!(gens[&3] > 0);
    }

    #[test]
    fn min_gens_guard() {
        let c = cube(5).unwrap();
        assert!(matches!(graded_min_gens(&c, 6), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn standard_monomials_have_distinct_images() {
        for ns in [vec![1, 1, 1], vec![2, 1], vec![1, 1, 2], vec![2, 2]] {
            let pts = pnk_variables(&ns).unwrap();
            let ord = RevLexOrder::mixed_above(&pts);
            let g = gbasis_pnk(&ns).unwrap();
            for t in 1..=4 {
                let mut seen = HashMap::new();
                for m in monomials_of_degree(pts.len(), t) {
                    if is_standard(&m, &g, &ord) {
                        let img = m.image(&pts).unwrap();
                        assert!(seen.insert(img, m.clone()).is_none(), "{ns:?} {m}");
                    }
                }
            }
        }
    }

    #[test]
    fn monomial_basics() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(0, 0), vec![Monomial::one()]);
        let a = Monomial::from_vars(&[0, 2, 2]);
        assert_eq!(a.to_string(), "x0*x2^2");
        assert_eq!(a.degree(), 3);
        assert!(!a.is_squarefree());
        assert!(Monomial::from_vars(&[2]).divides(&a));
        assert_eq!(a.lcm(&Monomial::from_vars(&[1])), Monomial::from_vars(&[0, 1, 2, 2]));
        assert_eq!(Monomial::from_exponents(vec![1, 0, 0]), Monomial::from_vars(&[0]));
        assert_eq!(binomial_coefficient(10, 3), 120);
    }
}
