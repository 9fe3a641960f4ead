use uvh_core::homology::Ring;
use uvh_core::homotopy::UniformPair;
use uvh_core::space::{EntourageLadder, MetricCloud};
use uvh_core::tower::{build_tower, plateau_estimate, PLATEAU_MIN_SPAN};

/// Two 30-point unit circles with centres 5 apart.
fn two_circles() -> MetricCloud {
    let pts = (0..60)
        .map(|k| {
            let t = std::f64::consts::TAU * (k % 30) as f64 / 30.0;
            let dx = if k < 30 { 0.0 } else { 5.0 };
            vec![dx + t.cos(), t.sin()]
        })
        .collect();
    MetricCloud::from_coordinates(pts).unwrap()
}

#[test]
fn disjoint_circles_hold_two_components_between_gap_and_separation() {
    let c = two_circles();
    let gap = c.nearest_neighbour_gap();
    // Coarsest scale bridges the circles (closest points are 3 apart).
    let scales = [3.5, 2.5, 1.8, 1.2, 0.8, 0.5, 0.3, 0.5 * gap];
    let t = build_tower(&UniformPair::absolute(EntourageLadder::from_metric(&c, &scales).unwrap()), 2, Ring::Z2).unwrap();
    let b0 = t.betti_sequence(0).unwrap();
    assert_eq!(b0[0], 1);
    assert_eq!(&b0[1..7], &[2; 6]);
    assert_eq!(b0[7], 60);
    let w = plateau_estimate(&t, 0, PLATEAU_MIN_SPAN).unwrap();
    let two: Vec<_> = w.iter().filter(|w| w.rank == 2).collect();
    assert_eq!(two.len(), 1);
    assert_eq!((two[0].coarse_rung, two[0].fine_rung), (1, 6));
    assert!(two[0].fine_scale > gap && two[0].coarse_scale < 3.0);
}

#[test]
fn degree_one_sees_both_circles() {
    let c = two_circles();
    let t = build_tower(&UniformPair::absolute(EntourageLadder::from_metric(&c, &[1.2, 0.8, 0.5]).unwrap()), 2, Ring::Z).unwrap();
    assert_eq!(t.betti_sequence(1).unwrap(), vec![2, 2, 2]);
    let w = plateau_estimate(&t, 1, PLATEAU_MIN_SPAN).unwrap();
    assert_eq!(w.len(), 1);
    assert_eq!((w[0].coarse_rung, w[0].fine_rung, w[0].rank), (0, 2, 2));
}
