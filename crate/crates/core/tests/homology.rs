mod common;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ranloop::homology::*;

fn scale_for(cloud: &MetricCloud, frac: f64) -> f64 {
    let mut max: f64 = 0.0;
    for i in 0..cloud.len() {
        for j in 0..cloud.len() {
            max = max.max(cloud.d(i, j));
        }
    }
    (frac * max).max(1e-6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_matches_naive_oracle(seed in any::<u64>(), frac in 0.05f64..1.2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cloud = random_cloud(12, &mut rng);
        let scale = scale_for(&cloud, frac);
        prop_assert_eq!(rips_persistence_with_budget(&cloud, scale, usize::MAX).unwrap(), naive_persistence(&cloud, scale));
    }

    #[test]
    fn relabeling_does_not_change_pairs(seed in any::<u64>(), frac in 0.05f64..1.2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cloud = random_cloud(20, &mut rng);
        let scale = scale_for(&cloud, frac);
        let mut order: Vec<usize> = (0..cloud.len()).collect();
        order.shuffle(&mut rng);
        let shuffled = cloud.subset(&order);
        prop_assert_eq!(
            rips_persistence_with_budget(&cloud, scale, usize::MAX).unwrap(),
            rips_persistence_with_budget(&shuffled, scale, usize::MAX).unwrap()
        );
    }

    #[test]
    fn components_at_small_and_large_scales(seed in any::<u64>()) {
        let cloud = sample_ran(&circle(), 2, 30, seed).unwrap();
        let essential = |scale: f64| {
            rips_persistence_with_budget(&cloud, scale, usize::MAX)
                .unwrap()
                .iter()
                .filter(|p| p.dimension == 0 && p.is_essential())
                .count()
        };
        prop_assert_eq!(essential(1e-300), 30);
        prop_assert_eq!(essential(1.0), 1);
    }
}

#[test]
fn pair_exports() {
    let cloud = sample_ran(&circle(), 1, 16, 4).unwrap();
    let pairs = rips_persistence_h1(&cloud, 0.2).unwrap();
    let json: Vec<PersistencePair> = serde_json::from_str(&pairs_to_json(&pairs)).unwrap();
    assert_eq!(json, pairs);
    let table = persistence_table(&pairs);
    assert_eq!(table.lines().count(), pairs.len() + 1);
    assert!(table.contains("inf"));
    let csv = cloud.to_csv();
    assert_eq!(csv.lines().count(), 16);
    let first: Vec<f64> = csv.lines().next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first, cloud.row(0));
}

#[test]
fn budget_can_come_from_the_environment() {
    std::env::set_var(BUDGET_ENV, "10");
    let cloud = sample_ran(&circle(), 1, 20, 1).unwrap();
    let res = rips_persistence_h1(&cloud, 1.0);
    std::env::remove_var(BUDGET_ENV);
    assert!(matches!(res, Err(ranloop::Error::SizeLimit { budget: 10, .. })));
}
