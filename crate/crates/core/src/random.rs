//! Seeded samplers for (0,1)-polytopes, posets and unimodular matrices.
//!
//! Every sampler takes an explicit generator; callers seed a [`ChaCha8Rng`]
//! with [`seeded`] so runs are reproducible across platforms.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::families::Poset;
use crate::linalg::{Int, IntMatrix};
use crate::polytope::{Point, Polytope};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` distinct 0/1 vectors of length `d`, sorted. `count` is capped at `2^d`.
pub fn random_01_points<R: Rng>(rng: &mut R, d: usize, count: usize) -> Vec<Point> {
    let total = if d >= 63 { usize::MAX } else { 1usize << d };
    let count = count.min(total);
    let mut set = BTreeSet::new();
    if d < 16 && count * 2 > total {
        let mut all: Vec<usize> = (0..total).collect();
        all.shuffle(rng);
        set.extend(all.into_iter().take(count).map(|m| bits(m, d)));
    } else {
        while set.len() < count {
            set.insert((0..d).map(|_| rng.gen_range(0..=1)).collect::<Point>());
        }
    }
    set.into_iter().collect()
}

fn bits(mask: usize, d: usize) -> Point {
    (0..d).map(|i| ((mask >> i) & 1) as i64).collect()
}

/// A (0,1)-polytope with ambient dimension in `1..=dim_max` and between 2
/// and `max_vertices` vertices.
pub fn random_01_polytope<R: Rng>(rng: &mut R, dim_max: usize, max_vertices: usize) -> Result<Polytope> {
    let d = rng.gen_range(1..=dim_max.max(1));
    let cap = if d >= 20 { max_vertices } else { max_vertices.min(1 << d) };
    let count = rng.gen_range(2..=cap.max(2));
    Polytope::new(d, random_01_points(rng, d, count))
}

/// A full-dimensional (0,1)-polytope in `R^d` with at most `max_vertices`
/// vertices: the origin, the unit vectors, and random extra points.
pub fn random_full_01_polytope<R: Rng>(rng: &mut R, d: usize, max_vertices: usize) -> Result<Polytope> {
    let mut points: BTreeSet<Point> = BTreeSet::new();
    points.insert(vec![0; d]);
    for i in 0..d {
        let mut e = vec![0; d];
        e[i] = 1;
        points.insert(e);
    }
    let extra = rng.gen_range(0..=max_vertices.saturating_sub(d + 1));
    points.extend(random_01_points(rng, d, extra));
    Polytope::new(d, points.into_iter().collect())
}

/// A poset on `size` elements where each pair `i < j` is related with
/// probability `density`, reduced to its cover relations.
pub fn random_poset<R: Rng>(rng: &mut R, size: usize, density: f64) -> Poset {
    let mut labels: Vec<usize> = (0..size).collect();
    labels.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..size {
        for j in i + 1..size {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                pairs.push((labels[i], labels[j]));
            }
        }
    }
    Poset::from_relation(size, &pairs).expect("a relation along a linear extension is acyclic")
}

/// A product of `steps` random elementary moves in `GL_n(Z)`.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> IntMatrix {
    let mut t = IntMatrix::identity(n);
    if n == 0 {
        return t;
    }
    for _ in 0..steps {
        let mut e = IntMatrix::identity(n);
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        match rng.gen_range(0..3) {
            0 if i != j => e[(i, j)] = Int::from(rng.gen_range(-2i64..=2)),
            1 if i != j => e.swap_rows(i, j),
            _ => e[(i, i)] = Int::from(-1),
        }
        t = e.mul(&t);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn points_are_distinct_and_sized() {
        let mut rng = seeded(5);
        for d in 1..6 {
            for count in [1, 3, 40] {
                let pts = random_01_points(&mut rng, d, count);
                assert_eq!(pts.len(), count.min(1 << d));
                assert!(pts.windows(2).all(|w| w[0] < w[1]));
                assert!(pts.iter().all(|p| p.len() == d && p.iter().all(|&x| x == 0 || x == 1)));
            }
        }
    }

    #[test]
    fn same_seed_same_samples() {
        let a: Vec<_> = (0..5)
            .map(|_| ())
            .scan(seeded(9), |r, _| Some(random_01_polytope(r, 4, 10).unwrap().vertices().to_vec()))
            .collect();
        let b: Vec<_> = (0..5)
            .map(|_| ())
            .scan(seeded(9), |r, _| Some(random_01_polytope(r, 4, 10).unwrap().vertices().to_vec()))
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn full_polytopes_are_full() {
        let mut rng = seeded(1);
        for d in 1..5 {
            assert_eq!(random_full_01_polytope(&mut rng, d, 9).unwrap().dim(), d);
        }
    }

    #[test]
    fn posets_and_matrices() {
        let mut rng = seeded(2);
        for size in 0..7 {
            let p = random_poset(&mut rng, size, 0.4);
            assert_eq!(p.size(), size);
        }
        assert_eq!(random_poset(&mut rng, 4, 1.0).covers().len(), 3);
        assert!(random_poset(&mut rng, 4, 0.0).covers().is_empty());
        for n in 1..4 {
            let t = random_unimodular(&mut rng, n, 8);
            assert!(t.determinant().abs() == Int::from(1));
        }
    }
}
