use corona_core::{convex_hull, Hull, Location, Polygon, QuarticScalar as Q, Vec2};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Vec2> {
    (-6i64..=6, -6i64..=6, -6i64..=6, -6i64..=6).prop_map(|(a, b, c, d)| {
        Vec2::new(Q::from_ints(a, 0, b, 0).div_int(2), Q::from_ints(c, d, 0, 0).div_int(3))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn hull_is_idempotent_and_contains_inputs(pts in prop::collection::vec(point(), 3..25)) {
        let h = convex_hull(&pts);
        let again = convex_hull(&h.vertices());
        prop_assert_eq!(&again, &h);
        if let Hull::Polygon(p) = &h {
            prop_assert!(p.is_convex());
            prop_assert!(p.area().sign() > 0);
            for q in &pts {
                prop_assert!(p.locate(q) != Location::Outside);
            }
            let first = &p.vertices()[0];
            prop_assert!(p.vertices().iter().all(|v| v >= first));
        }
    }

    #[test]
    fn hull_of_symmetric_set_is_symmetric(pts in prop::collection::vec(point(), 2..15)) {
        let mut all = pts.clone();
        all.extend(pts.iter().map(|p| -p));
        let h = convex_hull(&all);
        let vs = h.vertices();
        for v in &vs {
            prop_assert!(vs.contains(&-v));
        }
    }

    #[test]
    fn translation_preserves_area_and_location(pts in prop::collection::vec(point(), 3..12), t in point()) {
        if let Hull::Polygon(p) = convex_hull(&pts) {
            let moved = p.translate(&t);
            prop_assert_eq!(moved.area(), p.area());
            let inner = p.interior_point();
            prop_assert_eq!(p.locate(&inner), Location::Inside);
            prop_assert_eq!(moved.locate(&(&inner + &t)), Location::Inside);
            prop_assert_eq!(moved.locate(&(&p.vertices()[0] + &t)), Location::Boundary);
        }
    }
}

#[test]
fn clockwise_input_is_reoriented() {
    let cw = Polygon::new(vec![
        Vec2::from_ints(0, 0),
        Vec2::from_ints(0, 1),
        Vec2::from_ints(1, 1),
        Vec2::from_ints(1, 0),
    ])
    .unwrap();
    assert_eq!(cw.area(), Q::one());
}
