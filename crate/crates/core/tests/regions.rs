use proptest::prelude::*;

use cograte::bounds::OuterBounds;
use cograte::gaussian::{g1_region, g2_region, g3p_region, g_region, g3_region_swept};
use cograte::geometry::{directed_gap, hull_of_union, pentagon_support, subset_within};
use cograte::model::{ChannelParams, Grids, Pentagon};

fn small() -> Grids {
    Grids {
        points: 11,
        directions: 91,
        cov_points: 7,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hull_dominates_members(
        ps in prop::collection::vec((0.0..3.0f64, 0.0..3.0f64, 0.0..5.0f64), 1..20)
    ) {
        let family: Vec<Pentagon> = ps.iter().map(|&(a, b, s)| Pentagon::new(a, b, s)).collect();
        let r = hull_of_union(family.clone(), 91, "t").unwrap();
        for p in &family {
            for (d, h) in r.directions.iter().zip(&r.support) {
                prop_assert!(pentagon_support(p, *d).unwrap() <= h + 1e-12);
            }
        }
        for q in &r.boundary {
            prop_assert!(r.contains(*q, 1e-9));
            prop_assert!(q.r1 >= -1e-12 && q.r2 >= -1e-12);
        }
    }

    #[test]
    fn inner_bounds_nest(p1 in 0.0..10.0f64, p2 in 0.0..10.0f64, b in 0.0..4.0f64) {
        let ch = ChannelParams::new(p1, p2, b).unwrap();
        let g = small();
        let full = g_region(&ch, &g).unwrap();
        let g1 = g1_region(&ch, &g).unwrap();
        prop_assert!(subset_within(&g1, &full, 1e-12).unwrap().is_subset);
        for r in [&full, &g1] {
            for q in &r.boundary {
                prop_assert!(r.contains(*q, 1e-9));
            }
        }
        // the optimum coefficient is one of the swept ones
        let g3 = g3_region_swept(&ch, &g).unwrap();
        let g3p = g3p_region(&ch, &g).unwrap();
        prop_assert!(directed_gap(&g3p, &g3).unwrap() <= 1e-9);
        let _ = g2_region(&ch, &g).unwrap();
    }

    #[test]
    fn co2_within_both_parents(p1 in 0.0..8.0f64, p2 in 0.0..8.0f64, b in 0.0..3.0f64) {
        let ch = ChannelParams::new(p1, p2, b).unwrap();
        let o = OuterBounds::compute(&ch, &small()).unwrap();
        prop_assert!(subset_within(&o.co2, &o.co1, 1e-9).unwrap().is_subset);
        prop_assert!(subset_within(&o.co2, &o.bcdms, 1e-9).unwrap().is_subset);
        for q in &o.co2.boundary {
            prop_assert!(o.co2_contains(*q, 1e-9));
        }
    }
}
