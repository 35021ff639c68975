use frogsel::fuzzy_rough::{feature_similarity, subset_similarity};
use frogsel::synth::{random_mixed, random_nominal};
use frogsel::{crisp_regions, frdd, pos_dissimilarity, FeatureMask};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mask_strategy(len: usize) -> impl Strategy<Value = FeatureMask> {
    proptest::collection::vec(any::<bool>(), len).prop_map(|b| FeatureMask::from_bools(&b))
}

#[test]
fn crisp_tables_degenerate_to_rough_dependency() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for seed in 0..200u64 {
        let objects = rng.random_range(2..=30);
        let features = rng.random_range(1..=6);
        let t = random_nominal(objects, features, rng.random_range(2..=4), rng.random_range(2..=3), seed);
        for _ in 0..5 {
            let mask = FeatureMask::random_feasible(features, &mut rng);
            let fuzzy = frdd(&t, &mask).unwrap();
            let crisp = crisp_regions(&t, &mask).unwrap();
            assert!((fuzzy.gamma_prime - crisp.gamma).abs() < 1e-10, "table {seed} mask {mask}");
            for (x, &p) in fuzzy.per_object_pos.iter().enumerate() {
                assert_eq!(p == 1.0, crisp.pos.contains(&x));
            }
        }
    }
}

#[test]
fn crisp_regions_partition_objects() {
    for seed in 0..20 {
        let t = random_nominal(25, 4, 3, 3, seed);
        let r = crisp_regions(&t, &FeatureMask::from_indices(4, &[0, 2])).unwrap();
        let mut all: Vec<usize> = r.pos.iter().chain(&r.neg).chain(&r.bnd).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..25).collect::<Vec<_>>());
        assert!(r.neg.is_empty());
    }
}

proptest! {
    #[test]
    fn similarity_is_bounded_reflexive_and_symmetric(seed in 0u64..5000, x in 0usize..10, y in 0usize..10) {
        let t = random_mixed(10, 3, 1, 2, seed);
        for f in 0..4 {
            let s = feature_similarity(&t, f, x, y);
            prop_assert!((0.0..=1.0).contains(&s));
            prop_assert_eq!(s, feature_similarity(&t, f, y, x));
            prop_assert_eq!(feature_similarity(&t, f, x, x), 1.0);
        }
    }

    #[test]
    fn adding_features_never_increases_similarity(seed in 0u64..5000, a in mask_strategy(4), b in mask_strategy(4)) {
        prop_assume!(!a.is_empty());
        let t = random_mixed(8, 3, 1, 2, seed);
        let mut union = a.clone();
        for i in b.ones() {
            union.set(i, true);
        }
        for x in 0..8 {
            for y in 0..8 {
                let small = subset_similarity(&t, &a, x, y).unwrap();
                let large = subset_similarity(&t, &union, x, y).unwrap();
                prop_assert!(large <= small + 1e-12);
            }
        }
        let ga = frdd(&t, &a).unwrap().gamma_prime;
        let gu = frdd(&t, &union).unwrap().gamma_prime;
        prop_assert!(gu + 1e-12 >= ga);
        prop_assert!((0.0..=1.0).contains(&gu));
    }

    #[test]
    fn pos_dissimilarity_is_a_metric(a in mask_strategy(12), b in mask_strategy(12), c in mask_strategy(12)) {
        let d = |p: &FeatureMask, q: &FeatureMask| pos_dissimilarity(p, q).unwrap();
        prop_assert_eq!(d(&a, &a), 0);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &b), a.hamming(&b));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
    }
}
