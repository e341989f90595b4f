use num_rational::BigRational;
use proptest::prelude::*;
use theta6::hexgeom::{cone_of, euclid_bounds, hex_norm, in_cone, thex_norm, triangle_of, Point};
use theta6::{ConeIndex, PointSet, Scalar};

fn scalar(a: i64, b: i64) -> Scalar {
    Scalar::new(BigRational::new(a.into(), 64.into()), BigRational::new(b.into(), 256.into()))
}

fn point(c: (i64, i64, i64, i64)) -> Point {
    Point::new(scalar(c.0, c.1), scalar(c.2, c.3))
}

fn coords() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (-500i64..500, -40i64..40, -500i64..500, -40i64..40)
}

fn cross(o: &Point, a: &Point, b: &Point) -> Scalar {
    let (ax, ay) = (a.x() - o.x(), a.y() - o.y());
    let (bx, by) = (b.x() - o.x(), b.y() - o.y());
    &ax * &by - &ay * &bx
}

/// `p` lies on the boundary of the counter-clockwise convex polygon.
fn on_boundary(poly: &[Point], p: &Point) -> bool {
    let c: Vec<Scalar> = (0..poly.len()).map(|i| cross(&poly[i], &poly[(i + 1) % poly.len()], p)).collect();
    c.iter().all(|v| !v.is_negative()) && c.iter().any(|v| v.is_zero())
}

fn hexagon(tipped: bool) -> Vec<Point> {
    let r3 = Scalar::sqrt3();
    let h = r3.half();
    let third = Scalar::new(BigRational::from_integer(0.into()), BigRational::new(1.into(), 3.into()));
    let one = Scalar::one();
    let z = Scalar::zero();
    if tipped {
        let top = &third * &Scalar::from_int(2);
        vec![
            Point::new(one.clone(), third.clone()),
            Point::new(z.clone(), top.clone()),
            Point::new(-&one, third.clone()),
            Point::new(-&one, -&third),
            Point::new(z, -&top),
            Point::new(one, -&third),
        ]
    } else {
        let half = Scalar::from_ratio(1, 2);
        vec![
            Point::new(one.clone(), z.clone()),
            Point::new(half.clone(), h.clone()),
            Point::new(-&half, h.clone()),
            Point::new(-&one, z),
            Point::new(-&half, -&h),
            Point::new(half, -&h),
        ]
    }
}

fn scaled(p: &Point, n: &Scalar) -> Point {
    p.scale(&n.recip().expect("nonzero"))
}

/// Cone from the direction angle, away from boundaries.
fn angle_cone(d: (f64, f64)) -> Option<usize> {
    let deg = d.1.atan2(d.0).to_degrees().rem_euclid(360.0);
    let within = (deg - 240.0).rem_euclid(360.0);
    let frac = within / 60.0;
    if (frac - frac.round()).abs() < 1e-6 {
        return None;
    }
    Some(frac.floor() as usize % 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn norms_meet_their_unit_polygons(c in coords()) {
        let v = point(c);
        prop_assume!(!v.is_origin());
        prop_assert!(on_boundary(&hexagon(false), &scaled(&v, &hex_norm(&v))));
        prop_assert!(on_boundary(&hexagon(true), &scaled(&v, &thex_norm(&v))));
    }

    #[test]
    fn norm_chain(c in coords()) {
        let v = point(c);
        let e = euclid_bounds(&Point::origin(), &v);
        prop_assert!(thex_norm(&v).approx().lo() <= e.hi + 1e-12);
        prop_assert!(e.lo <= hex_norm(&v).approx().hi() + 1e-12);
    }

    #[test]
    fn cones_match_direction_angle(a in coords(), b in coords()) {
        let (p, q) = (point(a), point(b));
        let d = (&q - &p).to_f64();
        if let Some(i) = angle_cone(d) {
            prop_assert_eq!(cone_of(&p, &q).unwrap().value(), i);
            prop_assert!(in_cone(&p, ConeIndex::new(i as i64), &q));
            prop_assert!(!in_cone(&p, ConeIndex::new(i as i64 + 1), &q));
        }
    }

    #[test]
    fn cones_are_antipodal(a in coords(), b in coords()) {
        let (p, q) = (point(a), point(b));
        if let (Ok(i), Ok(j)) = (cone_of(&p, &q), cone_of(&q, &p)) {
            prop_assert_eq!(j, i.opposite());
        }
    }

    #[test]
    fn triangle_side_is_hex_length(a in coords(), b in coords()) {
        let (p, q) = (point(a), point(b));
        if let Ok(tri) = triangle_of(&p, &q) {
            let corners = tri.corners();
            prop_assert!(tri.contains(&q));
            prop_assert_eq!(hex_norm(&(&corners[1] - &corners[2])), hex_norm(&(&q - &p)));
        }
    }
}

#[test]
fn rejects_shared_slope_lines() {
    let flat = vec![Point::from_ratios((0, 1), (0, 1)), Point::from_ratios((3, 1), (0, 1))];
    assert!(PointSet::new(flat).is_err());
    let r3 = Scalar::sqrt3();
    let steep = vec![Point::origin(), Point::new(Scalar::one(), r3)];
    assert!(PointSet::new(steep).is_err());
    let fine = vec![Point::origin(), Point::from_ratios((1, 1), (1, 1))];
    assert!(PointSet::new(fine).is_ok());
}
