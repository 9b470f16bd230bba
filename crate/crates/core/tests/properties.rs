use proptest::prelude::*;

use submin::decomp::decompose_exhaustive;
use submin::noise::{mean_estimator, wrap_noisy, NoiseSpec};
use submin::prelude::*;
use submin::zoo::RandomTable;

fn point(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..=1.0f64, d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lovasz_matches_on_vertices(d in 1usize..8, seed in any::<u64>(), mask in any::<u64>()) {
        let h = Counted::new(RandomTable::new(d, 1.0, seed).unwrap());
        let s = Subset::from_mask(d, mask & ((1u64 << d) - 1)).unwrap();
        let v = lovasz_value(&h, &FractionalPoint::indicator(s)).unwrap();
        prop_assert!((v - h.evaluate(s).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn lovasz_is_positively_homogeneous((d, x) in (1usize..8).prop_flat_map(|d| (Just(d), point(d))),
                                        c in 0.0..=1.0f64, seed in any::<u64>()) {
        let h = Counted::new(RandomTable::new(d, 1.0, seed).unwrap());
        let base = lovasz_value(&h, &FractionalPoint::new(x.clone()).unwrap()).unwrap();
        let scaled: Vec<f64> = x.iter().map(|v| v * c).collect();
        let v = lovasz_value(&h, &FractionalPoint::new(scaled).unwrap()).unwrap();
        prop_assert!((v - c * base).abs() <= 1e-9);
    }

    #[test]
    fn greedy_vector_telescopes((d, x) in (1usize..8).prop_flat_map(|d| (Just(d), point(d))), seed in any::<u64>()) {
        let h = Counted::new(RandomTable::new(d, 1.0, seed).unwrap());
        let g = greedy_subgradient(&h, &FractionalPoint::new(x).unwrap()).unwrap();
        let total: f64 = g.kappa.iter().sum();
        prop_assert!((total - h.evaluate(Subset::full(d)).unwrap()).abs() <= 1e-12);
        for k in 0..=d {
            let prefix = g.ordering.prefix(k);
            let partial: f64 = prefix.iter().map(|i| g.kappa[i]).sum();
            prop_assert!((partial - h.evaluate(prefix).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn projection_lands_in_box(x in prop::collection::vec(-3.0..3.0f64, 1..10)) {
        let p = project_box(&x);
        prop_assert!(p.coords().iter().all(|v| (0.0..=1.0).contains(v)));
        let again = project_box(p.coords());
        prop_assert_eq!(again.coords(), p.coords());
    }

    #[test]
    fn pgm_never_beats_brute_force(d in 1usize..8, seed in any::<u64>()) {
        let h = Counted::new(RandomTable::new(d, 1.0, seed).unwrap());
        let r = minimize(&h, &PgmConfig::new(50)).unwrap();
        let (_, opt) = brute_force_min(&h).unwrap();
        let v = h.evaluate(r.rounded_set).unwrap();
        prop_assert!(v >= opt);
        prop_assert!(v <= 0.0);
        prop_assert!(r.best_lovasz >= opt - 1e-12);
    }

    #[test]
    fn decomposition_reassembles(d in 2usize..7, seed in any::<u64>(), alpha in prop::sample::select(vec![0.5, 1.0])) {
        let h = Counted::new(RandomTable::new(d, 1.0, seed).unwrap());
        let dec = decompose_exhaustive(&h, alpha, 0.5).unwrap();
        for s in GroundSet::new(d).unwrap().subsets() {
            let diff = dec.f_value(s).unwrap() - dec.spec().g_value(s) - h.evaluate(s).unwrap();
            prop_assert!(diff.abs() <= 1e-12);
            for i in (0..d).filter(|&i| !s.contains(i)) {
                prop_assert!(dec.spec().g_value(s.with(i)) >= dec.spec().g_value(s) - 1e-12);
            }
        }
    }

    #[test]
    fn subset_algebra(d in 1usize..64, a in any::<u64>(), b in any::<u64>()) {
        let mask = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
        let (a, b) = (Subset::from_mask(d, a & mask).unwrap(), Subset::from_mask(d, b & mask).unwrap());
        prop_assert_eq!(a.union(b).complement(), a.complement().intersection(b.complement()));
        prop_assert_eq!(a.difference(b).len() + a.intersection(b).len(), a.len());
        prop_assert!(a.intersection(b).is_subset_of(&a));
        prop_assert_eq!(a.hamming(&b), a.difference(b).len() + b.difference(a).len());
    }

    #[test]
    fn noisy_streams_replay(seed in any::<u64>(), mask in 0u64..64) {
        let s = Subset::from_mask(6, mask).unwrap();
        let run = || {
            let noisy = wrap_noisy(Counted::new(RandomTable::new(6, 1.0, 3).unwrap()),
                                   NoiseSpec::multiplicative_gaussian(1.0, 0.1, seed)).unwrap();
            let mean = mean_estimator(noisy, 5).unwrap();
            (0..4).map(|_| mean.evaluate(s).unwrap()).collect::<Vec<_>>()
        };
        prop_assert_eq!(run(), run());
    }
}
