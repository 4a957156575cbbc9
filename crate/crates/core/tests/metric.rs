mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ranloop::ran::{hausdorff, union};
use ranloop::space::Space;

fn spaces() -> Vec<Space> {
    vec![circle(), five_edge_graph(), theta(), Space::interval(2.0).unwrap()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hausdorff_matches_exhaustive_search(seed in any::<u64>(), k in 0usize..4) {
        let space = &spaces()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let a = random_config(space, 5, &mut rng);
            let b = random_config(space, 5, &mut rng);
            prop_assert_eq!(hausdorff(space, &a, &b).unwrap(), brute_hausdorff(space, a.points(), b.points()));
        }
    }

    #[test]
    fn graph_distance_matches_bellman_ford(seed in any::<u64>()) {
        let g = five_edge_graph();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let p = g.random_point(&mut rng);
            let q = g.random_point(&mut rng);
            prop_assert!((g.distance(&p, &q) - graph_distance(&g, &p, &q)).abs() <= 1e-12);
        }
    }

    #[test]
    fn hausdorff_is_a_metric(seed in any::<u64>(), k in 0usize..4) {
        let space = &spaces()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_config(space, 4, &mut rng);
        let b = random_config(space, 4, &mut rng);
        let c = random_config(space, 4, &mut rng);
        let ab = hausdorff(space, &a, &b).unwrap();
        prop_assert_eq!(ab, hausdorff(space, &b, &a).unwrap());
        prop_assert_eq!(hausdorff(space, &a, &a).unwrap(), 0.0);
        let ac = hausdorff(space, &a, &c).unwrap();
        let cb = hausdorff(space, &c, &b).unwrap();
        prop_assert!(ac + cb - ab >= -1e-12);
    }

    #[test]
    fn geodesics_are_uniform(seed in any::<u64>(), k in 0usize..4, s in 0.0f64..=1.0, s2 in 0.0f64..=1.0) {
        let space = &spaces()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = space.random_point(&mut rng);
        let q = space.random_point(&mut rng);
        let d = space.distance(&space.geodesic(&p, &q, s), &space.geodesic(&p, &q, s2));
        prop_assert!((d - (s - s2).abs() * space.distance(&p, &q)).abs() <= 1e-9);
    }

    #[test]
    fn union_laws(seed in any::<u64>(), k in 0usize..4) {
        let space = &spaces()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_config(space, 3, &mut rng);
        let b = random_config(space, 3, &mut rng);
        let c = random_config(space, 3, &mut rng);
        let big = 9;
        let ab = union(space, &a, &b, big).unwrap();
        prop_assert_eq!(&ab, &union(space, &b, &a, big).unwrap());
        prop_assert_eq!(
            union(space, &ab, &c, big).unwrap(),
            union(space, &a, &union(space, &b, &c, big).unwrap(), big).unwrap()
        );
        let aa = union(space, &a, &a, big).unwrap();
        prop_assert_eq!(aa.points(), a.points());
        prop_assert!(hausdorff(space, &a, &ab).unwrap() <= hausdorff(space, &a, &b).unwrap());
    }
}

#[test]
fn union_respects_the_cap() {
    let c = circle();
    let a = ranloop::ran::Configuration::new(&c, vec![c.coord(0.1).unwrap(), c.coord(0.2).unwrap()], 2).unwrap();
    let b = ranloop::ran::Configuration::new(&c, vec![c.coord(0.3).unwrap()], 1).unwrap();
    assert!(union(&c, &a, &b, 2).is_err());
    assert_eq!(union(&c, &a, &b, 3).unwrap().len(), 3);
}
