use dessin_core::dessins::VertexClass;
use dessin_core::lattice::{classify_division_points, grid_coordinates, EisensteinPoint};
use num_rational::Rational64;
use proptest::prelude::*;

/// Class of `z` read off from the rotation center congruent to `n z`,
/// independently of the grid: centers 0, 1, 2 carry zero, pole, one, and the
/// labels are cycled `zero -> one -> pole` once for each step of `n - 1 mod 3`.
fn oracle_class(n: u32, z: EisensteinPoint) -> Option<VertexClass> {
    let w = z.scale(Rational64::from_integer(n as i64)).reduce_mod_lattice();
    if w.a != w.b {
        return None;
    }
    let three = w.a * 3;
    if !three.is_integer() {
        return None;
    }
    let base = [VertexClass::Zero, VertexClass::Pole, VertexClass::One][three.to_integer() as usize];
    let cycle = |c: VertexClass| match c {
        VertexClass::Zero => VertexClass::One,
        VertexClass::One => VertexClass::Pole,
        VertexClass::Pole => VertexClass::Zero,
    };
    Some((0..(n + 2) % 3).fold(base, |c, _| cycle(c)))
}

/// All `3n`-division points of the torus.
fn torus(n: u32) -> impl Iterator<Item = EisensteinPoint> {
    let m = 3 * n as i64;
    (0..m).flat_map(move |a| (0..m).map(move |b| EisensteinPoint::ratio(a, m, b, m)))
}

const CLASSES: [VertexClass; 3] = [VertexClass::Zero, VertexClass::One, VertexClass::Pole];

#[test]
fn torus_counts_match_weighted_counts() {
    for n in 1..=12u32 {
        let classes = classify_division_points(n);
        for c in CLASSES {
            let brute = torus(n).filter(|&z| oracle_class(n, z) == Some(c)).count() as u32;
            assert_eq!(brute, n * n, "n={n} {c:?}");
            assert_eq!(classes.weighted_count(c), n * n, "n={n} {c:?}");
        }
    }
}

#[test]
fn classified_points_agree_with_oracle() {
    for n in 1..=15u32 {
        let classes = classify_division_points(n);
        for c in CLASSES {
            for p in classes.points(c) {
                assert_eq!(oracle_class(n, p.point), Some(c), "n={n} {:?}", p.point);
                assert_eq!(grid_coordinates(p.point, n), Some((p.s, p.t)));
            }
        }
        assert_eq!(oracle_class(n, classes.top), Some(classes.top_class));
        assert_eq!(oracle_class(n, classes.bottom), Some(classes.bottom_class));
        assert_eq!(oracle_class(n, classes.p0), Some(VertexClass::Pole));
    }
}

#[test]
fn every_torus_vertex_is_represented() {
    for n in 1..=9u32 {
        let classes = classify_division_points(n);
        let mut reps: Vec<EisensteinPoint> = vec![classes.top, classes.bottom, classes.p0];
        for c in CLASSES {
            for p in classes.points(c) {
                reps.push(p.point);
                reps.push(p.point.mirror());
            }
        }
        for z in torus(n).filter(|&z| oracle_class(n, z).is_some()) {
            assert!(reps.iter().any(|r| r.equivalent_mod_rotation(z)), "n={n} {z:?}");
        }
    }
}

#[test]
fn multiples_land_on_three_centers() {
    for n in 1..=10u32 {
        let classes = classify_division_points(n);
        let mut centers: Vec<u32> = CLASSES
            .iter()
            .flat_map(|&c| classes.points(c).iter())
            .map(|p| p.point.scale(Rational64::from_integer(n as i64)).rotation_center().unwrap())
            .collect();
        centers.sort_unstable();
        centers.dedup();
        assert!(centers.len() <= 3 && centers.iter().all(|&c| c < 3));
    }
}

proptest! {
    #[test]
    fn class_is_stable_under_reflection(n in 1u32..=30, pick in any::<prop::sample::Index>()) {
        let classes = classify_division_points(n);
        let all: Vec<_> = CLASSES.iter().flat_map(|&c| classes.points(c).to_vec()).collect();
        prop_assume!(!all.is_empty());
        let p = &all[pick.index(all.len())];
        prop_assert_eq!(oracle_class(n, p.point.mirror()), Some(p.class));
    }

    #[test]
    fn reduction_is_idempotent(a in -50i64..50, b in -50i64..50, d in 1i64..30) {
        let z = EisensteinPoint::ratio(a, d, b, d);
        let r = z.reduce_mod_lattice();
        prop_assert_eq!(r.reduce_mod_lattice(), r);
        prop_assert!((z - r).is_lattice_point());
        prop_assert!(z.rotate_third().rotate_third().rotate_third() == z);
        prop_assert_eq!(z.norm_squared(), z.conjugate().norm_squared());
    }
}
