mod common;

use common::{algebra, ctx, Dense};
use proptest::prelude::*;
use webster::algebra::GeneratorToken::*;
use webster::bimodule::maps::BimoduleMap;
use webster::bimodule::{basis_element, coordinates, enumerate_bimodule_basis, standard, BimoduleElement, BimoduleModel, BimoduleSpec};
use webster::poly::{Polynomial, Var};
use webster::rep::{bimodule_act, fingerprint_fn, phi_apply, VnElement};

fn x(m: &BimoduleModel, j: usize) -> Polynomial {
    Polynomial::var(m.n(), m.field(), Var::X(j))
}

/// The element with the pure tensor `slots` in the given diagonal blocks.
fn pure(m: &BimoduleModel, blocks: &[(usize, usize)], slots: &[Polynomial]) -> BimoduleElement {
    let mut r = m.zero();
    for &ts in blocks {
        r.add_block(ts, &m.ambient().pure_tensor(slots));
    }
    r
}

#[test]
fn idempotents_and_central_dots() {
    let c = ctx(3, 5);
    let a = c.algebra().clone();
    let m = c.model(&BimoduleSpec::wi(1)).unwrap();
    let g = m.generator();
    for k in 0..=3 {
        for l in 0..=3 {
            let r = m.left_act(&a.e(k), &m.right_act(&g, &a.e(l)));
            assert_eq!(r.is_zero(), k != l || !g.blocks().contains_key(&(k, k)), "k={k} l={l}");
        }
    }
    // The black strand may not sit between the two merged strands.
    assert!(m.left_act(&a.e(1), &g).is_zero());
    let y = a.reduce(&[Y]);
    assert_eq!(m.left_act(&y, &g), m.right_act(&g, &y));
    let x3 = a.reduce(&[X(3)]);
    assert_eq!(m.left_act(&x3, &g), m.right_act(&g, &x3));
    let e1 = a.poly(&x(&m, 1).add(&x(&m, 2)));
    assert_eq!(m.left_act(&e1, &g), m.right_act(&g, &e1));
    let x1 = a.reduce(&[X(1)]);
    assert_ne!(m.left_act(&x1, &g), m.right_act(&g, &x1));
}

#[test]
fn dotted_generator_acts_through_phi() {
    // x_1 (x) 1 acts as v -> x_1 D_1(v); 1 (x) x_1 as v -> D_1(x_1 v).
    let c = ctx(3, 5);
    let m = c.model(&BimoduleSpec::wi(1)).unwrap();
    let a = c.algebra();
    let g = m.generator();
    let left = m.left_act(&a.reduce(&[X(1)]), &g);
    let right = m.right_act(&g, &a.reduce(&[X(1)]));
    let n = 3;
    let f = m.field();
    let op = |pre: bool| {
        let g = g.clone();
        move |v: &VnElement| {
            let mut r = VnElement::zero(n, f);
            for &(k, _) in g.blocks().keys() {
                let s = v.sector(k);
                let xs = Polynomial::var(n, f, Var::X(1));
                let img = if pre { xs.mul(&s.divided_difference(1)) } else { xs.mul(&s).divided_difference(1) };
                r = r.add(&VnElement::from_sector(n, k, img));
            }
            r
        }
    };
    assert_eq!(phi_apply(&m, &left, 6), fingerprint_fn(n, f, 6, op(true)));
    assert_eq!(phi_apply(&m, &right, 6), fingerprint_fn(n, f, 6, op(false)));
    // x_1 (x) 1 + 1 (x) x_2 ... are expressible in the family basis.
    assert!(coordinates(&m, &left).is_some());
}

#[test]
fn twisted_differential_on_generator() {
    let c = ctx(2, 3);
    let a = c.algebra().clone();
    let plain = c.model(&BimoduleSpec::wi(1)).unwrap();
    assert!(plain.differential(&plain.generator()).is_zero());
    let tw = c.model(&BimoduleSpec::wi(1).twisted(-1).shifted(-2)).unwrap();
    let g = tw.generator();
    let e1 = a.poly(&x(&tw, 1).add(&x(&tw, 2)));
    assert_eq!(tw.differential(&g), tw.left_act(&e1, &g).scale(a.field().p() - 1));
}

#[test]
fn epsilon_values() {
    let c = ctx(2, 5);
    let e = standard::epsilon(&c, 1).unwrap();
    let a = c.algebra().clone();
    let w = e.tgt().clone();
    let g = e.src().generator();
    let img = e.apply(&g);
    let mut want = w.zero();
    for &ts in g.blocks().keys() {
        want.add_block(ts, &w.ambient().one());
    }
    assert_eq!(img, want);
    let x1 = a.reduce(&[X(1)]);
    assert_eq!(e.apply(&e.src().left_act(&x1, &g)), w.left_act(&x1, &img));
}

#[test]
fn iota_image_acts_as_identity() {
    // theta = x_i (x) 1 - 1 (x) x_{i+1} acts as x_i D_i - D_i x_{i+1} = id.
    let c = ctx(3, 5);
    for i in 1..=2 {
        let io = standard::iota(&c, i).unwrap();
        io.check_dg().unwrap();
        let th = io.apply(&io.src().generator());
        let tgt = io.tgt().clone();
        assert_eq!(phi_apply(&tgt, &th, 6), fingerprint_fn(3, tgt.field(), 6, |v| v.clone()));
    }
}

#[test]
fn epsilon_after_iota_is_multiplication() {
    // epsilon(theta) = (x_i - x_{i+1}) on the allowed idempotents; it is not zero.
    let c = ctx(2, 3);
    let e = standard::epsilon(&c, 1).unwrap();
    let io = standard::iota(&c, 1).unwrap();
    let e2 = e.retarget(io.tgt().clone(), e.tgt().clone());
    let th = io.apply(&io.src().generator());
    let got = e2.apply(&th);
    assert!(!got.is_zero());
    let w = e.tgt().clone();
    let diff = x(&w, 1).sub(&x(&w, 2));
    let mut want = w.zero();
    for &ts in th.blocks().keys() {
        want.add_block(ts, &w.ambient().pure_tensor(std::slice::from_ref(&diff)));
    }
    assert_eq!(got, want);
}

#[test]
fn ses_map_values() {
    let c = ctx(3, 5);
    for of in [true, false] {
        let a = if of { 1 } else { 2 };
        let al = standard::alpha(&c, 1, of).unwrap();
        let pi = standard::pi(&c, 1, of).unwrap();
        let sg = standard::sigma(&c, 1, of).unwrap();
        let ta = standard::tau(&c, 1, of).unwrap();
        let tri = pi.src().clone();
        let one = Polynomial::one(3, c.field());
        assert!(pi.apply(&tri.generator()).is_zero());
        let blocks: Vec<_> = tri.generator().blocks().keys().copied().collect();
        let dotted = pure(&tri, &blocks, &[one.clone(), x(&tri, a), one.clone(), one.clone()]);
        assert_eq!(pi.apply(&dotted), pure(pi.tgt(), &blocks, &[one.clone(), one.clone()]));
        let gg = al.src().generator();
        assert_eq!(sg.apply(&al.apply(&gg)), gg);
        let q = ta.src().generator();
        assert_eq!(pi.apply(&ta.apply(&q)), q);
        assert!(sg.apply(&ta.apply(&q)).is_zero());
        // gamma of the generator agrees with the triple action of alpha(gen).
        assert_eq!(phi_apply(&tri, &al.apply(&gg), 6), phi_apply(al.src(), &gg, 6));
        assert!(sg.check_dg().is_err() || ta.check_dg().is_err());
        for m in [&al, &pi] {
            m.check_bimodule_map().unwrap();
            m.check_dg().unwrap();
        }
    }
}

#[test]
fn alpha_is_linear_in_far_dots() {
    let c = ctx(4, 3);
    let al = standard::alpha(&c, 1, true).unwrap();
    let a = c.algebra().clone();
    let g = al.src().generator();
    let x4 = a.reduce(&[X(4)]);
    assert_eq!(al.apply(&al.src().left_act(&x4, &g)), al.tgt().left_act(&x4, &al.apply(&g)));
}

#[test]
fn frozen_dimensions() {
    // Closure dimensions in degrees 0..=8; the explicit families must match.
    let table: Vec<(usize, BimoduleSpec, [usize; 9])> = vec![
        (2, BimoduleSpec::wi(1), [2, 4, 12, 16, 32, 36, 62, 64, 102]),
        (3, BimoduleSpec::wi(1), [3, 6, 21, 32, 70, 94, 166, 208, 325]),
        (3, BimoduleSpec::wi(2), [3, 6, 21, 32, 70, 94, 166, 208, 325]),
        (3, BimoduleSpec::wii1(1), [2, 4, 18, 30, 78, 114, 226, 302, 510]),
        (3, standard::triple_spec(1, true), [2, 4, 21, 36, 99, 146, 296, 396, 676]),
    ];
    for (n, spec, dims) in table {
        let c = ctx(n, 3);
        let m = c.model(&spec).unwrap();
        assert!(m.dim(-1) == 0 && enumerate_bimodule_basis(&m, -1).is_empty());
        for d in 0..=8 {
            assert_eq!(m.dim(d), dims[d as usize], "{spec} d={d}");
            assert_eq!(enumerate_bimodule_basis(&m, d).len(), dims[d as usize], "{spec} d={d}");
        }
    }
    // Exactness of 0 -> W_{1,2} -> W_1 W_2 W_1 -> W_1{2} -> 0 on dimensions.
    let w1 = [3, 6, 21, 32, 70, 94, 166];
    let w12 = [2, 4, 18, 30, 78, 114, 226, 302, 510];
    let tri = [2, 4, 21, 36, 99, 146, 296, 396, 676];
    for d in 0..=8 {
        let q = if d >= 2 { w1[d - 2] } else { 0 };
        assert_eq!(tri[d], w12[d] + q);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn family_elements_are_nilpotent_under_d(d in 0i64..7, k in any::<prop::sample::Index>(), which in 0usize..3) {
        let c = ctx(3, 3);
        let spec = [BimoduleSpec::wi(1), BimoduleSpec::wii1(1), standard::triple_spec(1, true)][which].clone();
        let m = c.model(&spec).unwrap();
        let fam = enumerate_bimodule_basis(&m, d);
        prop_assume!(!fam.is_empty());
        let mut e = basis_element(&m, &fam[k.index(fam.len())]);
        for _ in 0..3 {
            e = m.differential(&e);
        }
        prop_assert!(e.is_zero());
    }

    #[test]
    fn bimodule_action_matches_oracle(s in 0usize..4, ex in prop::collection::vec(0u32..3, 4)) {
        let c = ctx(3, 5);
        let m = c.model(&BimoduleSpec::wi(2)).unwrap();
        let g = m.generator();
        let f = Dense::mono(3, 5, ex.clone(), 1);
        let v = VnElement::from_sector(3, s, webster::poly::Polynomial::monomial(3, m.field(), webster::poly::Monomial::from_exponents(&ex[..3], ex[3]), 1));
        let got = bimodule_act(&m, &g, &v);
        if g.blocks().contains_key(&(s, s)) {
            prop_assert_eq!(Dense::from_poly(&got.sector(s)), f.divided_difference(2));
        } else {
            prop_assert!(got.is_zero());
        }
    }

    #[test]
    fn maps_commute_with_actions(seed in any::<u64>()) {
        use rand::SeedableRng;
        let c = ctx(3, 3);
        let alg = algebra(3, 3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = webster::suites::random_element(&alg, &mut rng, 2, 1);
        let b = webster::suites::random_element(&alg, &mut rng, 2, 1);
        let maps: Vec<BimoduleMap> = vec![standard::alpha(&c, 1, true).unwrap(), standard::pi(&c, 1, false).unwrap(), standard::epsilon(&c, 2).unwrap()];
        for f in maps {
            let src = f.src().clone();
            let g = src.generator();
            let lhs = f.apply(&src.left_act(&a, &src.right_act(&g, &b)));
            let tgt = f.tgt().clone();
            let rhs = tgt.left_act(&a, &tgt.right_act(&f.apply(&g), &b));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
