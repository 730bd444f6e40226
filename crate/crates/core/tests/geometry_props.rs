mod oracles;

use lidarfill::geometry::{
    box_frame, convex_hull, polygon_area, rasterize_convex, roi_hull_from_box, roi_mask_from_box,
    square_crop_for_mask, BBox3D, Camera, RigidTransform,
};
use lidarfill::raster::ObjectMask;
use nalgebra::Vector3;
use proptest::prelude::*;

fn cam() -> Camera {
    Camera::new(
        300.0,
        300.0,
        160.0,
        120.0,
        320,
        240,
        RigidTransform::identity(),
    )
    .unwrap()
}

fn arb_box() -> impl Strategy<Value = BBox3D> {
    (
        -3.0..3.0f64,
        -2.0..2.0f64,
        6.0..30.0f64,
        0.5..4.0f64,
        0.5..3.0f64,
        0.5..3.0f64,
        -3.1..3.1f64,
        -0.6..0.6f64,
    )
        .prop_map(|(x, y, z, l, w, h, yaw, pitch)| {
            BBox3D::new(Vector3::new(x, y, z), Vector3::new(l, w, h), yaw, pitch).unwrap()
        })
}

fn arb_points() -> impl Strategy<Value = Vec<[f64; 2]>> {
    prop::collection::vec(
        (-10.0..70.0f64, -10.0..50.0f64).prop_map(|(x, y)| [x, y]),
        3..12,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn raster_matches_separating_axis_oracle(pts in arb_points()) {
        let hull = convex_hull(&pts);
        prop_assume!(hull.len() >= 3 && polygon_area(&hull) > 1e-3);
        let got = rasterize_convex(&hull, 60, 40);
        let want = oracles::sat_raster(&hull, 60, 40);
        prop_assert_eq!(got, want);
    }

    #[test]
    fn roi_mask_covers_every_projected_corner(b in arb_box()) {
        let c = cam();
        let Ok(mask) = roi_mask_from_box(&c, &b, 0.0) else { return Ok(()); };
        for p in b.corners() {
            let q = c.project_point(&p).unwrap();
            if let Some((i, j)) = q.pixel(c.width(), c.height()) {
                prop_assert!(mask.get(i, j));
            }
        }
    }

    #[test]
    fn enlarging_never_shrinks_the_mask(b in arb_box(), e in 0.0..0.5f64) {
        let c = cam();
        let (Ok(small), Ok(big)) = (roi_mask_from_box(&c, &b, 0.0), roi_mask_from_box(&c, &b, e)) else {
            return Ok(());
        };
        prop_assert!(small.minus(&big).is_empty());
    }

    #[test]
    fn hull_is_convex_and_contains_inputs(pts in arb_points()) {
        let hull = convex_hull(&pts);
        prop_assume!(hull.len() >= 3);
        let n = hull.len();
        for k in 0..n {
            let (a, b) = (hull[k], hull[(k + 1) % n]);
            for p in &pts {
                let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
                prop_assert!(cross >= -1e-9);
            }
        }
    }

    #[test]
    fn projection_round_trip(x in -5.0..5.0f64, y in -4.0..4.0f64, z in 1.0..50.0f64) {
        let c = cam();
        let p = Vector3::new(x, y, z);
        let q = c.project_point(&p).unwrap();
        let back = c.lift(q.u, q.v, q.depth);
        prop_assert!((back - p).norm() < 1e-9 * z);
    }

    #[test]
    fn box_frame_agrees_with_box_containment(b in arb_box(), q in prop::array::uniform3(-1.2..1.2f64)) {
        let c = Camera::new(300.0, 300.0, 160.0, 120.0, 320, 240,
            RigidTransform::from_yaw_pitch(0.3, -0.1, Vector3::new(0.5, 0.0, 1.0))).unwrap();
        let f = box_frame(&b, &c);
        let local = Vector3::new(q[0], q[1], q[2]).component_mul(&b.half_extent());
        let world = b.placement().apply(&local);
        let cam_pt = c.to_camera(&world);
        let margin = q.iter().map(|v| (v.abs() - 1.0).abs()).fold(f64::INFINITY, f64::min);
        prop_assume!(margin > 1e-6);
        prop_assert_eq!(f.contains(&cam_pt, 0.0), b.contains(&world));
        // the same frame hosted in the world
        prop_assert_eq!(f.rehost(c.pose()).contains(&world, 0.0), b.contains(&world));
    }

    #[test]
    fn crop_contains_mask_and_fits(x0 in 0usize..300, y0 in 0usize..200, w in 1usize..120, h in 1usize..120) {
        let m = ObjectMask::from_fn(320, 240, |i, j| i >= x0 && i < x0 + w && j >= y0 && j < y0 + h);
        prop_assume!(!m.is_empty());
        let (bx0, by0, bx1, by1) = m.bounding_box().unwrap();
        let crop = square_crop_for_mask(&m, 256).unwrap();
        prop_assert_eq!(crop.side, (bx1 - bx0 + 1).max(by1 - by0 + 1));
        prop_assert!(crop.x0 + crop.side <= 320 && crop.y0 + crop.side <= 240);
        prop_assert!(crop.x0 <= bx0 && bx1 < crop.x0 + crop.side);
        prop_assert!(crop.y0 <= by0 && by1 < crop.y0 + crop.side);
    }
}

#[test]
fn symmetric_box_gives_symmetric_mask() {
    let c = Camera::new(
        100.0,
        100.0,
        64.0,
        64.0,
        128,
        128,
        RigidTransform::identity(),
    )
    .unwrap();
    let b = BBox3D::new(
        Vector3::new(0.0, 0.0, 10.0),
        Vector3::new(2.0, 2.0, 2.0),
        0.0,
        0.0,
    )
    .unwrap();
    let (_, m) = roi_hull_from_box(&c, &b, 0.1).unwrap();
    for j in 0..128 {
        for i in 0..128 {
            assert_eq!(m.get(i, j), m.get(127 - i, j));
            assert_eq!(m.get(i, j), m.get(i, 127 - j));
        }
    }
}
