mod common;

use proptest::prelude::*;
use uav_tdma::sca::build_bound;
use uav_tdma::scenario::{PhysicalParams, Point2, Scenario, Trajectory};

fn scenario(users: Vec<(f64, f64)>, h: f64) -> Scenario {
    let mut p = PhysicalParams::reference(10.0, 4);
    p.altitude_m = h;
    Scenario::new(users.into_iter().map(|(x, y)| Point2::new(x, y)).collect(), p).unwrap()
}

fn coord() -> impl Strategy<Value = f64> {
    -1500.0f64..1500.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn bound_never_exceeds_rate(
        w in (coord(), coord()),
        anchor in (coord(), coord()),
        q in (coord(), coord()),
        h in 20.0f64..300.0,
    ) {
        let s = scenario(vec![w], h);
        let b = build_bound(&s, &Trajectory::hover(Point2::new(anchor.0, anchor.1), 4)).unwrap();
        let q = Point2::new(q.0, q.1);
        let lb = b.lower_bound_rate(q, 0, 2).unwrap();
        let exact = common::rate(s.gamma0(), h, q.dist2(Point2::new(w.0, w.1)));
        prop_assert!(lb <= exact + 1e-12, "lb {} rate {}", lb, exact);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn tangent_at_anchor(w in (coord(), coord()), anchor in (coord(), coord())) {
        let s = scenario(vec![w], 100.0);
        let a = Point2::new(anchor.0, anchor.1);
        let b = build_bound(&s, &Trajectory::hover(a, 4)).unwrap();
        let exact = common::rate(s.gamma0(), 100.0, a.dist2(Point2::new(w.0, w.1)));
        prop_assert!((b.lower_bound_rate(a, 0, 1).unwrap() - exact).abs() <= 1e-12);
    }

    #[test]
    fn gradient_matches_central_differences(
        w in (coord(), coord()),
        anchor in (coord(), coord()),
        q in (coord(), coord()),
    ) {
        let s = scenario(vec![w], 100.0);
        let b = build_bound(&s, &Trajectory::hover(Point2::new(anchor.0, anchor.1), 4)).unwrap();
        let q = Point2::new(q.0, q.1);
        let g = b.gradient(q, 0, 0).unwrap();
        let step = 1e-4;
        let f = |p: Point2| b.lower_bound_rate(p, 0, 0).unwrap();
        let gx = (f(q + Point2::new(step, 0.0)) - f(q - Point2::new(step, 0.0))) / (2.0 * step);
        let gy = (f(q + Point2::new(0.0, step)) - f(q - Point2::new(0.0, step))) / (2.0 * step);
        let err = ((gx - g.x).powi(2) + (gy - g.y).powi(2)).sqrt();
        prop_assert!(err <= 1e-6 * g.norm().max(1e-9) + 1e-12, "err {} |g| {}", err, g.norm());
    }
}
