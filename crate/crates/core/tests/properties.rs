use proptest::prelude::*;

use toriclass::classgroup::{class_group, columns_annihilated, kp_search, leading_ones, weights_from};
use toriclass::families::{cube, make_pi, make_pnk, order_polytope, q1, simplex};
use toriclass::gale::{dual_diagram, is_simplicial_dual};
use toriclass::lattice::{decompose, lattice_points, lattice_span, normality_check, normality_check_with, NormalityOptions};
use toriclass::random::{random_01_polytope, random_full_01_polytope, random_poset, seeded};
use toriclass::{Int, Polytope};

fn homogeneous(point: &[i64]) -> Vec<Int> {
    point.iter().map(|&t| Int::from(t)).collect()
}

fn check_witness(p: &Polytope) {
    let v = normality_check(p).unwrap();
    let Some(w) = v.witness else {
        assert!(v.normal);
        return;
    };
    assert!(!v.normal);
    let y = homogeneous(&w.point);
    assert!(lattice_span(p).unwrap().contains(&y), "witness {:?} outside the lattice", w.point);
    for f in p.facets().unwrap() {
        assert!(f.eval_homogeneous(&y) >= Int::from(0), "witness {:?} outside the cone", w.point);
    }
    let x = &w.point[..w.point.len() - 1];
    assert_eq!(decompose(p, x, w.height).unwrap(), None, "witness {:?} decomposes", w.point);
}

#[test]
fn q1_witness_is_sound() {
    check_witness(&q1());
}

#[test]
fn rank2_duals_are_simplicial_iff_simple() {
    let mut fixtures = vec![cube(3).unwrap(), make_pnk(&[1, 1, 1]).unwrap(), make_pnk(&[2, 1, 1]).unwrap()];
    for (variant, params) in [
        (1u8, vec![2, 2, 2]),
        (1, vec![2, 3, 2]),
        (2, vec![2, 2, 2, 2]),
        (2, vec![2, 3, 2, 2]),
        (3, vec![2, 2, 2, 1]),
        (3, vec![2, 3, 2, 2]),
        (4, vec![2, 1, 1, 1, 2]),
    ] {
        fixtures.push(order_polytope(&make_pi(variant, &params).unwrap()).unwrap());
    }
    fixtures.push(simplex(1).unwrap().product(&simplex(2).unwrap()).product(&simplex(2).unwrap()));
    let mut seen = [false; 2];
    for p in &fixtures {
        assert_eq!(p.rank().unwrap(), 2, "{:?}", p.vertices());
        let simple = p.is_simple().unwrap();
        seen[simple as usize] = true;
        assert_eq!(is_simplicial_dual(&dual_diagram(p).unwrap()), simple, "{:?}", p.vertices());
    }
    assert_eq!(seen, [true, true], "fixtures should cover both cases");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn witnesses_are_sound(seed in any::<u64>()) {
        let p = random_full_01_polytope(&mut seeded(seed), 4, 8).unwrap();
        check_witness(&p);
    }

    #[test]
    fn higher_heights_do_not_change_the_verdict(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let p = random_01_polytope(&mut rng, 5, 9).unwrap();
        prop_assume!(p.dim() >= 1);
        let base = normality_check_with(&p, NormalityOptions { exhaustive: true, ..Default::default() }).unwrap();
        let wide = normality_check_with(&p, NormalityOptions { max_height: Some(p.dim() + 1), exhaustive: true }).unwrap();
        prop_assert_eq!(base.normal, wide.normal);
    }

    #[test]
    fn normal_polytopes_decompose_every_dilation_point(seed in any::<u64>()) {
        let p = random_full_01_polytope(&mut seeded(seed), 4, 8).unwrap();
        prop_assume!(normality_check(&p).unwrap().normal);
        let span = lattice_span(&p).unwrap();
        for n in 1..p.dim() {
            for x in lattice_points(&p, n).unwrap() {
                let mut y = homogeneous(&x);
                y.push(Int::from(n));
                if span.contains(&y) {
                    prop_assert!(decompose(&p, &x, n).unwrap().is_some(), "{:?} at height {}", x, n);
                }
            }
        }
    }

    #[test]
    fn class_group_invariants(seed in any::<u64>()) {
        let p = random_full_01_polytope(&mut seeded(seed), 4, 9).unwrap();
        prop_assume!(normality_check(&p).unwrap().normal);
        let cg = class_group(&p).unwrap();
        prop_assert_eq!(cg.free_rank, p.facets().unwrap().len() - p.dim() - 1);
        prop_assert_eq!(cg.free_rank, p.rank().unwrap());
        let w = weights_from(&cg).unwrap();
        prop_assert!(columns_annihilated(&p, &w).unwrap());
        prop_assert!(toriclass::classgroup::weight_identities_hold(&p, &w).unwrap());
        let kp = kp_search(&p).unwrap();
        prop_assert!(leading_ones(&cg.snf, kp.k), "k = {} but diagonal {:?}", kp.k, cg.snf.diag);
    }

    #[test]
    fn order_polytopes_of_random_posets(seed in any::<u64>(), size in 1usize..=6, density in 0.0f64..0.7) {
        let poset = random_poset(&mut seeded(seed), size, density);
        let o = order_polytope(&poset).unwrap();
        prop_assert_eq!(o.rank().unwrap(), poset.hasse_edges_with_bounds() - size - 1);
        let cg = class_group(&o).unwrap();
        prop_assert!(cg.is_torsionfree(), "{}", cg);
        prop_assert_eq!(cg.free_rank, poset.hasse_edges_with_bounds() - size - 1);
    }

    #[test]
    fn pnk_vertex_count(ns in proptest::collection::vec(1usize..=3, 2..=4)) {
        let p = make_pnk(&ns).unwrap();
        let d: usize = ns.iter().sum();
        let product: usize = ns.iter().product();
        prop_assert_eq!(p.vertices().len(), 1 + d + product);
    }
}
