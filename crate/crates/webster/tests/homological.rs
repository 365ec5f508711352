mod common;

use common::ctx;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use webster::bimodule::maps::BimoduleMap;
use webster::bimodule::BimoduleSpec;
use webster::homological::*;
use webster::verify::*;

#[test]
fn sigma_complexes() {
    let c = ctx(2, 3);
    let s = build_sigma(&c, 1).unwrap();
    assert_eq!((s.lo, s.hi()), (-1, 0));
    assert_eq!(s.term(-1)[0].spec(), &BimoduleSpec::wi(1));
    assert_eq!(s.term(0)[0].spec(), &BimoduleSpec::w());
    let sp = build_sigma_prime(&c, 1).unwrap();
    assert_eq!((sp.lo, sp.hi()), (0, 1));
    assert_eq!(sp.term(1)[0].spec(), &BimoduleSpec::wi(1).twisted(-1).shifted(-2));
    for cx in [&s, &sp] {
        cx.check_nilpotent().unwrap();
        cx.check_dg().unwrap();
    }
}

#[test]
fn p_extension_matches_displayed_complexes() {
    let c = ctx(3, 3);
    for p in [3, 5] {
        for i in 1..=2 {
            let t = p_extend(&build_sigma(&c, i).unwrap(), p);
            assert!(same_complex(&t, &build_t(&c, i, p).unwrap()));
            assert_eq!(t.terms.len() as u32, p);
            t.check_nilpotent().unwrap();
            let tp = p_extend(&build_sigma_prime(&c, i).unwrap(), p);
            assert!(same_complex(&tp, &build_t_prime(&c, i, p).unwrap()));
            // Repeated terms are joined by identities.
            assert_eq!(tp.d(1).entry(0, 0), BimoduleMap::identity(tp.term(1)[0].clone()));
        }
    }
    let s = Arc::new(build_sigma(&c, 1).unwrap());
    let t = Arc::new(p_extend(&s, 3));
    let id = p_extend_map(&GradedMap::identity(&s), &t, &t, 3);
    assert!(id.first_difference(&GradedMap::identity(&t)).is_none());
}

#[test]
fn composite_sigma_sigma_prime() {
    let c = ctx(2, 3);
    let cx = braid_word(&c, &[1, -1]).unwrap();
    assert_eq!(cx.lo, -1);
    assert_eq!(cx.terms.iter().map(|t| t.len()).collect::<Vec<_>>(), vec![1, 2, 1]);
    cx.check_nilpotent().unwrap();
    cx.check_dg().unwrap();
    let names = cx.describe();
    assert_eq!(names[&0].len(), 2);
    // Tensoring with the identity complex changes nothing.
    let s = build_sigma(&c, 1).unwrap();
    let id = identity_complex(&c).unwrap();
    assert!(same_complex(&tensor_complexes(&c, &s, &id).unwrap(), &s));
    assert!(same_complex(&tensor_complexes(&c, &id, &s).unwrap(), &s));
}

#[test]
fn far_tensor_dimensions_symmetric() {
    let c = ctx(4, 3);
    let a = braid_word(&c, &[1, 3]).unwrap();
    let b = braid_word(&c, &[3, 1]).unwrap();
    for d in -2..=6 {
        assert_eq!(a.dims(d), b.dims(d), "degree {d}");
    }
}

#[test]
fn homotopy_edge_cases() {
    let c = ctx(2, 3);
    let s = Arc::new(build_sigma(&c, 1).unwrap());
    let z = GradedMap::zero(s.clone(), s.clone(), 0);
    let h = find_homotopy(&c, &z).unwrap();
    assert!(h.is_zero());
    let w = c.model(&BimoduleSpec::wi(1)).unwrap();
    let cone = Arc::new(Complex::new(
        Regime::Ordinary,
        0,
        vec![vec![w.clone()], vec![w.clone()]],
        vec![SumMap::identity(vec![w.clone()])],
    ));
    let id = GradedMap::identity(&cone);
    let h = find_homotopy(&c, &id).unwrap();
    assert!(h.homotopy_image().first_difference(&id).is_none());
    let eq = reduce(&c, &cone);
    eq.verify().unwrap();
    assert!(eq.tgt.terms.iter().all(|t| t.is_empty()));
    // The identity of a non-contractible complex is not null-homotopic.
    assert!(find_homotopy(&c, &GradedMap::identity(&s)).is_none());
}

#[test]
fn simplification_preserves_euler_characteristic() {
    let c = ctx(2, 3);
    let cx = Arc::new(braid_word(&c, &[1, -1]).unwrap());
    let eq = simplify(&c, &cx, false);
    eq.verify().unwrap();
    let id = identity_complex(&c).unwrap();
    for d in -4..=8 {
        assert_eq!(eq.src.euler(d), eq.tgt.euler(d), "degree {d}");
        assert_eq!(eq.tgt.euler(d), id.euler(d), "degree {d}");
    }
}

#[test]
fn bb_decomposition_n2() {
    let c = ctx(2, 3);
    let r = verify_bb(&c, 1, 8).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.dims.iter().find(|x| x.degree == 0).map(|x| (x.lhs, x.rhs)), Some((2, 2)));
}

#[test]
fn inverse_certificates() {
    for n in [2, 3] {
        let c = ctx(n, 3);
        for i in 1..n {
            for pf in [false, true] {
                let r = verify_inverse(&c, i, pf, 8);
                assert!(r.pass, "{r:?}");
                assert!(r.euler.iter().all(|e| e.lhs == e.rhs));
            }
        }
    }
}

#[test]
fn far_commutation_on_the_nose() {
    let c = ctx(4, 3);
    let r = verify_far_comm(&c, 1, 3, 6);
    assert!(r.pass, "{r:?}");
}

#[test]
fn braid_relation_certificate() {
    let c = ctx(3, 3);
    let r = verify_braid_relation(&c, 1, 6);
    assert!(r.pass, "{r:?}");
    assert_eq!(r.certificate_kind.as_deref(), Some("roof"));
}

#[test]
fn p_certificate_for_inverse() {
    let c = ctx(2, 3);
    let (_, eq) = inverse_equivalence(&c, 1, false).unwrap();
    let r = p_extend_certificate(&c, "T1 T1' ~ Id", &eq, 3, 6);
    assert!(r.pass, "{r:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn braid_words_are_complexes(w in prop::collection::vec(prop::sample::select(vec![1i32, 2, -1, -2]), 1..3)) {
        let c = ctx(3, 3);
        let cx = braid_word(&c, &w).unwrap();
        prop_assert!(cx.check_nilpotent().is_ok());
        prop_assert!(cx.check_dg().is_ok());
        let px = p_extend(&cx, 3);
        prop_assert!(px.check_nilpotent().is_ok());
    }

    #[test]
    fn p_extension_is_functorial_and_keeps_null_homotopies(seed in any::<u64>()) {
        let c = ctx(2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cx = Arc::new(braid_word(&c, &[1, -1]).unwrap());
        let px = Arc::new(p_extend(&cx, 3));
        let f = random_null_homotopic(&c, &cx, &mut rng);
        let g = random_null_homotopic(&c, &cx, &mut rng);
        let lhs = p_extend_map(&f.compose(&g), &px, &px, 3);
        let rhs = p_extend_map(&f, &px, &px, 3).compose(&p_extend_map(&g, &px, &px, 3));
        prop_assert!(lhs.first_difference(&rhs).is_none());
        let pf = p_extend_map(&f, &px, &px, 3);
        prop_assert!(pf.check_chain().is_ok());
        let h = find_homotopy(&c, &pf);
        prop_assert!(h.is_some());
        prop_assert!(h.unwrap().homotopy_image().first_difference(&pf).is_none());
    }
}
