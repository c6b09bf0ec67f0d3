use nccoarse::metric::{bump_partition, grid_cover, lipschitz_const, r_multiplicity, GridBox, GridNorm, MetricSpace};
use nccoarse::rng::CounterRng;
use nccoarse::verify::oracles::random_integer_metric;
use nccoarse::Tolerances;
use proptest::prelude::*;

fn norm_of(k: u8) -> GridNorm {
    if k == 0 {
        GridNorm::L1
    } else {
        GridNorm::LInf
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_metrics_validate(seed in any::<u64>(), n in 2usize..12) {
        let m = random_integer_metric(&mut CounterRng::new(seed), n);
        let rebuilt = MetricSpace::new(m.matrix().to_vec(), None, &Tolerances::default());
        prop_assert!(rebuilt.is_ok());
    }

    #[test]
    fn grid_cover_colour_classes_are_separated(dim in 1usize..3, side in 2i64..9, r in 0.5f64..4.0, k in 0u8..2) {
        let bx = GridBox::cube(dim, side, norm_of(k)).unwrap();
        let m = bx.metric_space();
        let cover = grid_cover(&bx, r).unwrap();
        prop_assert!(cover.validate(&m, r).is_ok());
        prop_assert!(cover.color_count() <= 1 << dim);
        for c in 0..cover.color_count() {
            let class = cover.color_class(c);
            for (i, &a) in class.iter().enumerate() {
                for &b in &class[i + 1..] {
                    prop_assert!(m.set_distance(&cover.sets[a], &cover.sets[b]) > r);
                }
            }
        }
        let mult = r_multiplicity(&cover, &m, r).unwrap();
        prop_assert!(mult <= 1 << dim, "multiplicity {} in dimension {}", mult, dim);
    }

    #[test]
    fn bump_partition_is_a_partition(dim in 1usize..3, side in 2i64..8, r in 0.5f64..3.0) {
        let bx = GridBox::cube(dim, side, GridNorm::LInf).unwrap();
        let m = bx.metric_space();
        let cover = grid_cover(&bx, r).unwrap();
        let p = bump_partition(&m, &cover, r).unwrap();
        for x in 0..m.len() {
            let s: f64 = p.normalized.iter().map(|f| f[x]).sum();
            prop_assert!((s - 1.0).abs() <= 1e-12, "sum {} at {}", s, x);
        }
        for f in &p.normalized {
            prop_assert!(f.iter().all(|v| (-1e-15..=1.0 + 1e-15).contains(v)));
            prop_assert!(lipschitz_const(f, &m).is_finite());
        }
    }
}
