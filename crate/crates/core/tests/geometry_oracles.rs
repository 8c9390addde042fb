//! Flattening and disk-sampling checks against oracles that do not share
//! code with the library's evaluation or subdivision paths.

use bodymap_synth::geometry::{derive_stream, sample_in_disk, BezierCurve, Point, Polyline};
use proptest::prelude::*;

/// Power-basis evaluation with explicit binomial coefficients.
fn bernstein(ctrl: &[(f64, f64)], t: f64) -> (f64, f64) {
    let n = ctrl.len() - 1;
    let binom = |k: usize| -> f64 { (1..=k).map(|i| (n + 1 - i) as f64 / i as f64).product() };
    ctrl.iter()
        .enumerate()
        .fold((0.0, 0.0), |(x, y), (k, &(px, py))| {
            let w = binom(k) * t.powi(k as i32) * (1.0 - t).powi((n - k) as i32);
            (x + w * px, y + w * py)
        })
}

fn seg_dist(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    (qx * qx + qy * qy).sqrt()
}

/// Largest distance from 1000 evenly spaced curve samples to the polyline.
fn max_deviation(ctrl: &[(f64, f64)], poly: &Polyline) -> f64 {
    let verts: Vec<(f64, f64)> = poly.vertices().iter().map(|p| (p.x, p.y)).collect();
    (0..1000)
        .map(|i| {
            let q = bernstein(ctrl, i as f64 / 999.0);
            verts
                .windows(2)
                .map(|w| seg_dist(q, w[0], w[1]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn curve_of(ctrl: &[(f64, f64)]) -> BezierCurve {
    BezierCurve::new(ctrl.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
}

#[test]
fn quadratic_example_within_tolerance() {
    let ctrl = [(0.0, 0.0), (2.0, 0.0), (2.0, 2.0)];
    let poly = curve_of(&ctrl).flatten(0.25);
    assert!(max_deviation(&ctrl, &poly) <= 0.25);
    assert_eq!(poly.vertices()[0], Point::new(0.0, 0.0));
    assert_eq!(*poly.vertices().last().unwrap(), Point::new(2.0, 2.0));
}

#[test]
fn eval_matches_oracle() {
    let ctrl = [(0.0, 0.0), (2.0, 0.0), (2.0, 2.0)];
    assert_eq!(bernstein(&ctrl, 0.5), (1.5, 0.5));
    let c = curve_of(&[(3.0, 1.0), (-7.0, 4.5), (12.0, 9.0), (0.5, -2.0)]);
    let ctrl: Vec<_> = c.control_points().iter().map(|p| (p.x, p.y)).collect();
    for i in 0..=20 {
        let t = i as f64 / 20.0;
        let (x, y) = bernstein(&ctrl, t);
        let p = c.eval(t).unwrap();
        assert!((p.x - x).abs() < 1e-12 && (p.y - y).abs() < 1e-12, "t={t}");
    }
}

#[test]
fn vertex_count_grows_as_tolerance_shrinks() {
    let c = curve_of(&[(0.0, 0.0), (300.0, 500.0), (-100.0, 200.0), (400.0, 10.0)]);
    let counts: Vec<usize> = [1.0, 0.5, 0.25, 0.1]
        .iter()
        .map(|&tol| c.flatten(tol).vertices().len())
        .collect();
    assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
}

fn coord() -> impl Strategy<Value = f64> {
    -500.0..1500.0f64
}

fn control_polygon() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((coord(), coord()), 3..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn endpoints_exact(ctrl in control_polygon(), tol in 0.05..2.0f64) {
        let c = curve_of(&ctrl);
        prop_assert_eq!(c.eval(0.0).unwrap(), c.start());
        prop_assert_eq!(c.eval(1.0).unwrap(), c.end());
        let poly = c.flatten(tol);
        prop_assert_eq!(poly.vertices()[0], c.start());
        prop_assert_eq!(*poly.vertices().last().unwrap(), c.end());
    }

    #[test]
    fn flattening_bound_holds(ctrl in control_polygon(), tol in 0.05..2.0f64) {
        let poly = curve_of(&ctrl).flatten(tol);
        let dev = max_deviation(&ctrl, &poly);
        prop_assert!(dev <= tol, "deviation {} > {}", dev, tol);
    }

    #[test]
    fn monotone_refinement(ctrl in control_polygon()) {
        let c = curve_of(&ctrl);
        prop_assert!(c.flatten(1.0).vertices().len() <= c.flatten(0.1).vertices().len());
    }

    #[test]
    fn disk_samples_contained(seed in any::<u64>(), r in 0.0..500.0f64, cx in coord(), cy in coord()) {
        let mut s = derive_stream(seed, "prop-disk");
        let c = Point::new(cx, cy);
        for _ in 0..50 {
            prop_assert!(sample_in_disk(&mut s, c, r).distance(c) <= r);
        }
    }
}

#[test]
fn streams_are_reproducible_across_instances() {
    let mut a = derive_stream(42, "img/0");
    let mut b = derive_stream(42, "img/0");
    let xs: Vec<u64> = (0..100).map(|_| a.next_u64()).collect();
    let ys: Vec<u64> = (0..100).map(|_| b.next_u64()).collect();
    assert_eq!(xs, ys);
}
