use proptest::prelude::*;

use uvh_core::complex::{cover_vietoris_pair, entourage_complex, vietoris_pair, SimplicialComplex};
use uvh_core::connect::{chain_components, connectivity_profile, hu_bound, min_chain_length};
use uvh_core::generate::GeneratorSpec;
use uvh_core::homology::{betti_numbers, check_simplicial, contiguity_check, induced_map_fresh, Ring};
use uvh_core::io;
use uvh_core::space::{
    ball_cover, entourage_from_metric, full_set, point_set, star, strong_containment, EntourageLadder, MetricCloud,
    PointSet,
};

fn cloud_strategy(min: usize, max: usize) -> impl Strategy<Value = MetricCloud> {
    (min..=max)
        .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), n))
        .prop_map(|pts| MetricCloud::from_coordinates(pts).expect("finite"))
}

fn mask_set(mask: &[bool]) -> PointSet {
    point_set(mask.len(), mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)).expect("in range")
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ball_cover_complex_equals_entourage_complex(c in cloud_strategy(3, 9), eps in 0.1f64..0.8, mask in prop::collection::vec(any::<bool>(), 9)) {
        let u = entourage_from_metric(&c, eps).unwrap();
        let a = mask_set(&mask[..c.len()]);
        let via_cover = cover_vietoris_pair(&a, &ball_cover(&u), 3);
        let direct = vietoris_pair(&a, &u, 3).unwrap();
        prop_assert_eq!(via_cover, direct);
    }

    #[test]
    fn degree_zero_counts_chain_components(c in cloud_strategy(2, 10), eps in 0.05f64..0.6) {
        let u = entourage_from_metric(&c, eps).unwrap();
        let b = betti_numbers(&entourage_complex(&u, 2), Ring::Z2, 0).unwrap();
        prop_assert_eq!(b[0], chain_components(&u).len());
    }

    #[test]
    fn chain_lengths_are_symmetric_and_subadditive(c in cloud_strategy(2, 9), eps in 0.1f64..0.6) {
        let u = entourage_from_metric(&c, eps).unwrap();
        let n = c.len();
        let comps = chain_components(&u);
        let comp_of = |x: usize| comps.iter().position(|k| k.contains(&x)).unwrap();
        for x in 0..n {
            prop_assert_eq!(min_chain_length(&u, x, x).unwrap(), Some(1));
            for y in 0..n {
                let l = min_chain_length(&u, x, y).unwrap();
                prop_assert_eq!(l, min_chain_length(&u, y, x).unwrap());
                prop_assert_eq!(l.is_some(), comp_of(x) == comp_of(y));
                for z in 0..n {
                    if let (Some(a), Some(b)) = (l, min_chain_length(&u, y, z).unwrap()) {
                        let direct = min_chain_length(&u, x, z).unwrap().unwrap();
                        prop_assert!(direct < a + b);
                    }
                }
            }
        }
    }

    #[test]
    fn hu_bound_is_monotone(c in cloud_strategy(2, 10), a in 0.2f64..0.8, r in 0.3f64..0.95, mask in prop::collection::vec(any::<bool>(), 10)) {
        let n = c.len();
        let coarse = entourage_from_metric(&c, a).unwrap();
        let fine = entourage_from_metric(&c, a * r).unwrap();
        let whole = full_set(n);
        let mut part = mask_set(&mask[..n]);
        part.insert(0);
        let le = |x: Option<usize>, y: Option<usize>| match (x, y) { (_, None) => true, (None, Some(_)) => false, (Some(p), Some(q)) => p <= q };
        prop_assert!(le(hu_bound(&whole, &coarse).unwrap(), hu_bound(&whole, &fine).unwrap()));
        prop_assert!(le(hu_bound(&part, &coarse).unwrap(), hu_bound(&whole, &coarse).unwrap()));
        let ladder = EntourageLadder::from_metric(&c, &[a, a * r]).unwrap();
        let p = connectivity_profile(&ladder, false);
        prop_assert_eq!(p.rungs[1].hu_bound, hu_bound(&whole, &fine).unwrap());
    }

    #[test]
    fn strong_containment_certificate_is_sound(c in cloud_strategy(3, 10), mask_a in prop::collection::vec(any::<bool>(), 10), mask_b in prop::collection::vec(any::<bool>(), 10)) {
        let n = c.len();
        let a = mask_set(&mask_a[..n]);
        let mut b = mask_set(&mask_b[..n]);
        b.union_with(&a);
        let ladder = EntourageLadder::from_metric(&c, &[0.6, 0.3, 0.1]).unwrap();
        if let Some(cert) = strong_containment(&a, &b, &ladder) {
            let st = star(&a, &ball_cover(ladder.entourage(cert.rung)));
            prop_assert!(st.is_subset(&b));
        }
    }

    #[test]
    fn contiguous_constant_maps_agree(c in cloud_strategy(3, 8), eps in 0.2f64..0.7, target in 0usize..8) {
        let n = c.len();
        let t = target % n;
        let u = entourage_from_metric(&c, eps).unwrap();
        let pair = uvh_core::complex::SimplicialComplexPair::absolute(entourage_complex(&u, 3));
        let id: Vec<usize> = (0..n).collect();
        let constant = vec![t; n];
        let f = check_simplicial(&id, &pair, &pair).unwrap();
        let g = check_simplicial(&constant, &pair, &pair).unwrap();
        if contiguity_check(&f, &g).unwrap().contiguous {
            for d in 0..=2 {
                prop_assert_eq!(induced_map_fresh(&f, d, Ring::Z).unwrap(), induced_map_fresh(&g, d, Ring::Z).unwrap());
            }
        }
    }

    #[test]
    fn complex_text_round_trips(c in cloud_strategy(2, 8), eps in 0.1f64..0.8) {
        let cx = entourage_complex(&entourage_from_metric(&c, eps).unwrap(), 3);
        let text = io::export_complex(&cx);
        let back: SimplicialComplex = io::parse_complex(&text, Some(c.len()), 3).unwrap();
        prop_assert_eq!(back, cx);
    }

    #[test]
    fn point_csv_round_trips(pts in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 3), 1..20)) {
        let text: String = pts.iter().map(|p| p.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(",") + "\n").collect();
        let c = io::parse_points_csv(&text).unwrap();
        prop_assert_eq!(c.coordinates().unwrap(), &pts[..]);
    }

    #[test]
    fn degree_and_ladder_specs_round_trip(mut ds in prop::collection::vec(0usize..10, 1..6), start in 0.5f64..10.0, ratio in 0.1f64..0.95, count in 1usize..20) {
        let text = ds.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let parsed = io::parse_degrees(&text).unwrap();
        ds.sort_unstable();
        ds.dedup();
        prop_assert_eq!(parsed, ds);
        let scales = io::parse_ladder_spec(&format!("{start}:{ratio}:{count}")).unwrap();
        prop_assert_eq!(scales.len(), count);
        prop_assert!(scales.windows(2).all(|w| w[1] < w[0]));
        let joined = scales.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>().join(",");
        prop_assert_eq!(io::parse_scales(&joined).unwrap(), scales);
    }

    #[test]
    fn generator_specs_round_trip(kind in 0usize..8, a in 1usize..40, b in 1usize..40) {
        let text = match kind {
            0 => format!("circle:{a}"),
            1 => format!("rational_circle:{a}"),
            2 => format!("interval:{a}"),
            3 => format!("rational_interval:{a}"),
            4 => format!("discrete:{a}"),
            5 => format!("torus:{a}:{b}"),
            6 => format!("line:{a}:{b}"),
            _ => format!("random_circle:{a}"),
        };
        let spec: GeneratorSpec = text.parse().unwrap();
        prop_assert_eq!(spec.to_string(), text);
        prop_assert_eq!(!spec.generate(3).unwrap().is_empty(), true);
    }

    #[test]
    fn parsers_never_panic(text in "\\PC{0,200}") {
        let _ = io::parse_points_csv(&text);
        let _ = io::parse_distance_matrix(&text);
        let _ = io::parse_relation(&text, None);
        let _ = io::parse_subset(&text, 8);
        let _ = io::parse_complex(&text, None, 3);
        let _ = io::parse_vertex_map(&text, 4, 4);
        let _ = io::parse_ladder_spec(&text);
        let _ = io::parse_scales(&text);
        let _ = io::parse_degrees(&text);
        let _ = text.parse::<GeneratorSpec>();
        let _ = text.parse::<Ring>();
    }
}
