use dessin_core::dessins::{build_family_dessin, Dessin, DessinError, ExportFormat, Permutation};
use proptest::prelude::*;

#[test]
fn family_structure_up_to_twenty() {
    for n in 1..=20u32 {
        let d = build_family_dessin(n).unwrap();
        let edges = (n * n) as usize;
        assert_eq!(d.edge_count(), edges, "n={n}");
        assert_eq!(d.genus().unwrap(), 0, "n={n}");
        assert!(d.verify_333_epimorphism(), "n={n}");
        let p = d.passport();
        for cycles in [&p.white_cycles, &p.black_cycles, &p.face_cycles] {
            assert_eq!(cycles.iter().sum::<usize>(), edges, "n={n}");
            assert!(cycles.iter().all(|c| 3 % c == 0), "n={n}: {cycles:?}");
        }
        assert_eq!(d.mirror().passport(), p, "n={n}");
    }
}

#[test]
fn euler_characteristic_matches_genus() {
    for n in 1..=12u32 {
        let d = build_family_dessin(n).unwrap();
        let p = d.passport();
        let v = (p.white_cycles.len() + p.black_cycles.len()) as i64;
        let f = p.face_cycles.len() as i64;
        let e = d.edge_count() as i64;
        assert_eq!(v - e + f, 2 - 2 * d.genus().unwrap() as i64);
    }
}

#[test]
fn exports_are_deterministic() {
    let d = build_family_dessin(4).unwrap();
    for fmt in ["dot", "svg", "json"] {
        let f: ExportFormat = fmt.parse().unwrap();
        assert_eq!(d.export_graph(f), build_family_dessin(4).unwrap().export_graph(f));
    }
    assert!(matches!("png".parse::<ExportFormat>(), Err(DessinError::UnsupportedFormat(_))));
}

#[test]
fn rejects_bad_input() {
    assert!(matches!(build_family_dessin(0), Err(DessinError::ZeroIndex)));
    assert!(Dessin::from_images(vec![0, 0], vec![0, 1]).is_err());
    // two fixed points on two edges: not transitive
    assert!(matches!(Dessin::from_images(vec![0, 1], vec![0, 1]), Err(DessinError::NotTransitive)));
}

fn permutation(max: usize) -> impl Strategy<Value = Vec<usize>> {
    (1..=max).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
}

proptest! {
    #[test]
    fn inverse_composes_to_identity(p in permutation(30)) {
        let p = Permutation::from_images(p).unwrap();
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert_eq!(p.cycle_type().iter().sum::<usize>(), p.len());
        prop_assert_eq!(p.pow(0), Permutation::identity(p.len()));
    }

    #[test]
    fn json_round_trip(n in 1u32..=10) {
        let d = build_family_dessin(n).unwrap();
        let back = Dessin::from_json(&d.to_json()).unwrap();
        prop_assert_eq!(back.sigma(), d.sigma());
        prop_assert_eq!(back.tau(), d.tau());
    }

    #[test]
    fn mirror_is_involution(n in 1u32..=15) {
        let d = build_family_dessin(n).unwrap();
        let m = d.mirror().mirror();
        prop_assert_eq!(m.sigma(), d.sigma());
        prop_assert_eq!(m.tau(), d.tau());
    }
}
