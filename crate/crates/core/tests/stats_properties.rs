use proptest::prelude::*;
use pysmell::stats::{descriptive, mann_whitney_u, plot_data};

fn sample() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0i32..50).prop_map(|v| v as f64 / 2.0), 1..30)
}

proptest! {
    #[test]
    fn mann_whitney_bounds_and_symmetry(a in sample(), b in sample()) {
        let ab = mann_whitney_u(&a, &b).unwrap();
        let ba = mann_whitney_u(&b, &a).unwrap();
        let n = (a.len() * b.len()) as f64;
        prop_assert!((0.0..=1.0).contains(&ab.p_value));
        prop_assert!((-1.0..=1.0).contains(&ab.rank_biserial));
        prop_assert_eq!(ab.u + ba.u, n);
        prop_assert!((ab.p_value - ba.p_value).abs() < 1e-12);
        prop_assert!((ab.rank_biserial + ba.rank_biserial).abs() < 1e-12);
    }

    #[test]
    fn histogram_counts_every_observation(a in sample(), b in sample(), bins in 1usize..12) {
        let p = plot_data(&a, &b, bins).unwrap();
        prop_assert_eq!(p.histogram.counts_a.iter().sum::<usize>(), a.len());
        prop_assert_eq!(p.histogram.counts_b.iter().sum::<usize>(), b.len());
        prop_assert_eq!(p.histogram.edges.len(), bins + 1);
    }

    #[test]
    fn quartiles_are_ordered(a in sample()) {
        let d = descriptive(&a).unwrap();
        prop_assert!(d.min <= d.q1 && d.q1 <= d.median && d.median <= d.q3 && d.q3 <= d.max);
    }
}
