mod common;

use common::{field, Dense};
use proptest::prelude::*;
use webster::parse::parse_polynomial;
use webster::poly::{Monomial, Polynomial, Var};

fn poly(s: &str, n: usize, p: u64) -> Polynomial {
    parse_polynomial(s, n, field(p)).unwrap()
}

#[test]
fn additive_inverse_cancels() {
    let f = field(7);
    let x1 = Polynomial::var(2, f, Var::X(1));
    assert!(x1.add(&x1.scale(6)).is_zero());
    assert_eq!(x1.add(&poly("x2", 2, 7)), poly("x1 + x2", 2, 7));
    let sq = poly("x1^2", 2, 3);
    assert_eq!(sq.add(&sq), poly("2*x1^2", 2, 3));
}

#[test]
fn products() {
    let f = field(5);
    let one = Polynomial::one(2, f);
    let g = poly("3*x1*y + x2^2 + 4", 2, 5);
    assert_eq!(one.mul(&g), g);
    assert_eq!(poly("x1", 2, 5).mul(&poly("x2", 2, 5)), poly("x1*x2", 2, 5));
    let lhs = poly("x1 + y", 2, 5).mul(&poly("x1 - y", 2, 5));
    let want = Dense::from_poly(&poly("x1 + y", 2, 5)).mul(&Dense::from_poly(&poly("x1 - y", 2, 5)));
    assert_eq!(Dense::from_poly(&lhs), want);
    assert_eq!(lhs, poly("x1^2 - y^2", 2, 5));
}

#[test]
fn derivation_values() {
    assert_eq!(poly("x1", 2, 3).derivation(), poly("x1^2", 2, 3));
    assert!(Polynomial::one(2, field(3)).derivation().is_zero());
    // d^k(x) = k! x^{k+1}, which vanishes at k = p.
    let mut f = poly("x1", 2, 5);
    let mut fact = 1i64;
    for k in 1..=4 {
        f = f.derivation();
        fact *= k;
        assert_eq!(f, poly(&format!("{fact}*x1^{}", k + 1), 2, 5));
    }
    assert!(f.derivation().is_zero());
    let f3 = poly("x1", 2, 3).derivation().derivation().derivation();
    assert!(f3.is_zero());
}

#[test]
fn divided_difference_values() {
    assert_eq!(poly("x1", 2, 3).divided_difference(1), Polynomial::one(2, field(3)));
    assert!(poly("5", 2, 7).divided_difference(1).is_zero());
    assert!(poly("x1*x2", 2, 3).divided_difference(1).is_zero());
    let f = poly("x1^3*x2 + 2*x2^4*y + x3", 3, 5);
    assert_eq!(Dense::from_poly(&f.divided_difference(1)), Dense::from_poly(&f).divided_difference(1));
    assert_eq!(Dense::from_poly(&f.divided_difference(2)), Dense::from_poly(&f).divided_difference(2));
}

fn arb_poly(n: usize, p: u64) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..4, n + 1), 1u32..p as u32), 0..6).prop_map(move |ts| {
        let mut f = Polynomial::zero(n, field(p));
        for (e, c) in ts {
            f.add_term(Monomial::from_exponents(&e[..n], e[n]), c);
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws_match_dense_oracle(f in arb_poly(3, 5), g in arb_poly(3, 5), h in arb_poly(3, 5)) {
        prop_assert_eq!(Dense::from_poly(&f.add(&g)), Dense::from_poly(&f).add(&Dense::from_poly(&g)));
        prop_assert_eq!(Dense::from_poly(&f.mul(&g)), Dense::from_poly(&f).mul(&Dense::from_poly(&g)));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn derivation_is_leibniz_and_nilpotent(f in arb_poly(2, 3), g in arb_poly(2, 3)) {
        prop_assert_eq!(f.mul(&g).derivation(), f.derivation().mul(&g).add(&f.mul(&g.derivation())));
        prop_assert_eq!(Dense::from_poly(&f.derivation()), Dense::from_poly(&f).derive());
        prop_assert!(f.derivation().derivation().derivation().is_zero());
    }

    #[test]
    fn divided_differences(f in arb_poly(3, 7), g in arb_poly(3, 7)) {
        for i in 1..=2 {
            prop_assert_eq!(Dense::from_poly(&f.divided_difference(i)), Dense::from_poly(&f).divided_difference(i));
            prop_assert!(f.divided_difference(i).divided_difference(i).is_zero());
            // Twisted Leibniz rule: D(fg) = D(f) g + s(f) D(g).
            let lhs = f.mul(&g).divided_difference(i);
            let rhs = f.divided_difference(i).mul(&g).add(&f.s(i).mul(&g.divided_difference(i)));
            prop_assert_eq!(lhs, rhs);
        }
        let a = f.divided_difference(1).divided_difference(2).divided_difference(1);
        let b = f.divided_difference(2).divided_difference(1).divided_difference(2);
        prop_assert_eq!(a, b);
    }
}
