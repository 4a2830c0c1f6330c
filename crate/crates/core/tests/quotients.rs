use dessin_core::quotients::{
    is_prime, quotient_ramification, signature_for_genus, verify_composition_cover, QuotientError,
};
use proptest::prelude::*;

#[test]
fn sweep_primes_to_101() {
    let primes: Vec<u64> = (5..=101).filter(|&p| is_prime(p)).collect();
    assert_eq!(primes.len(), 24);
    for p in primes {
        let r = quotient_ramification(p).unwrap();
        assert_eq!((r.g, r.g_quotient, r.m), ((p - 1) / 2, 0, 3), "p={p}");
        let (p, g) = (p as i64, r.g as i64);
        assert_eq!(2 * g - 2, -2 * p + 3 * (p - 1));
        assert!(r.riemann_hurwitz_holds());
    }
}

#[test]
fn eleven() {
    let r = quotient_ramification(11).unwrap();
    assert_eq!((r.g, r.g_quotient, r.m), (5, 0, 3));
}

#[test]
fn rejects_invalid_primes() {
    for p in [0, 1, 2, 3, 4] {
        assert_eq!(quotient_ramification(p), Err(QuotientError::TooSmall(p)));
    }
    for p in [9, 15, 21, 25, 91] {
        assert_eq!(quotient_ramification(p), Err(QuotientError::NotPrime(p)));
    }
}

#[test]
fn composition_cover() {
    let c = verify_composition_cover(100).unwrap();
    assert!(c.passes(), "{c:?}");
    assert_eq!(c.composition_degree, 6);
    assert_eq!(c.beta_degree, 3);
    assert!(c.max_critical_residual < 1e-8);
    assert_eq!(c.pi_branch_locus, ["0", "inf"]);
    assert_eq!(c.composition_branch_locus, ["0", "1", "inf"]);
    assert_eq!(c.beta_branch_locus, ["0", "1", "inf"]);
    assert!(c.branch_union_matches && c.riemann_hurwitz_holds);
    assert_eq!((c.composition_patterns.zero.clone(), c.composition_patterns.one.clone()), (vec![3, 3], vec![6]));
}

#[test]
fn more_samples_same_certificate() {
    let a = verify_composition_cover(100).unwrap();
    let b = verify_composition_cover(1000).unwrap();
    assert_eq!(a.critical_points, b.critical_points);
    assert_eq!(a.composition_branch_locus, b.composition_branch_locus);
}

proptest! {
    #[test]
    fn signature_iff_prime(g in 2u64..2000) {
        match signature_for_genus(g).unwrap() {
            Some((p, q, r)) => {
                prop_assert!(p == q && q == r && p == 2 * g + 1 && is_prime(p));
                prop_assert_eq!(quotient_ramification(p).unwrap().g, g);
            }
            None => prop_assert!(!is_prime(2 * g + 1)),
        }
    }

    #[test]
    fn riemann_hurwitz_exact(p in prop::sample::select((5u64..5000).filter(|&p| is_prime(p)).collect::<Vec<_>>())) {
        let r = quotient_ramification(p).unwrap();
        prop_assert!(r.riemann_hurwitz_holds());
        prop_assert_eq!(r.m, 3);
    }
}
