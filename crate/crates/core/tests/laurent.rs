use std::sync::Arc;

use knotpoly::laurent::{GaussRational, MultiLaurent, Rat, VarContext};
use proptest::prelude::*;

fn ctx() -> Arc<VarContext> {
    VarContext::sqrt(&[("u0", "t0"), ("u1", "t1")])
}

fn p(c: &Arc<VarContext>, s: &str) -> MultiLaurent {
    MultiLaurent::parse(c, s).unwrap()
}

#[test]
fn addition() {
    let c = VarContext::sqrt(&[("u", "t")]);
    assert!(p(&c, "t^(1/2)").add_ref(&p(&c, "-t^(1/2)")).is_zero());
    assert_eq!(p(&c, "1 + t").add_ref(&p(&c, "t")), p(&c, "1 + 2*t"));
    let c = ctx();
    assert_eq!(p(&c, "t0 - 1").add_ref(&p(&c, "1")), p(&c, "t0"));
}

#[test]
fn multiplication() {
    let c = VarContext::sqrt(&[("u", "t")]);
    assert!(p(&c, "t^(-1/2)").mul_ref(&p(&c, "t^(1/2)")).is_one());
    assert_eq!(p(&c, "1 - t^(1/2)").mul_ref(&p(&c, "1 + t^(1/2)")), p(&c, "1 - t"));
    let z = MultiLaurent::zeta(&c);
    assert_eq!(z.mul_ref(&z), MultiLaurent::from_int(&c, -1));
}

#[test]
fn substitution() {
    let src = VarContext::plain(&["t"]);
    let dst = VarContext::plain(&["s"]);
    let got = p(&src, "t - 1").substitute(&dst, &[p(&dst, "s^-2")]).unwrap();
    assert_eq!(got, p(&dst, "s^-2 - 1"));
    let src = VarContext::sqrt(&[("u", "t")]);
    let dst = VarContext::plain(&["t1", "t2"]);
    let got = p(&src, "t^(1/2)").substitute(&dst, &[p(&dst, "t1^-1")]).unwrap();
    assert_eq!(got, p(&dst, "t1^-1"));
    let seven = MultiLaurent::from_int(&src, 7).substitute(&dst, &[p(&dst, "t2^3")]).unwrap();
    assert_eq!(seven, MultiLaurent::from_int(&dst, 7));
}

#[test]
fn evaluation() {
    let c = VarContext::plain(&["t"]);
    assert_eq!(p(&c, "t - 1").eval(&[GaussRational::from_int(3)]).unwrap(), GaussRational::from_int(2));
    let c = VarContext::sqrt(&[("u", "t")]);
    assert_eq!(p(&c, "t^(-1/2)").eval(&[GaussRational::from_int(2)]).unwrap(), GaussRational::real(Rat::new(1, 2)));
    let c = VarContext::plain(&["t"]);
    let zt = MultiLaurent::zeta(&c).mul_ref(&p(&c, "t"));
    assert_eq!(zt.eval(&[GaussRational::from_int(2)]).unwrap(), GaussRational::zeta().mul(&GaussRational::from_int(2)));
}

#[test]
fn display_uses_half_powers() {
    let c = VarContext::sqrt(&[("u", "t")]);
    assert_eq!(p(&c, "t^(3/2)").to_string(), "t^(3/2)");
    assert_eq!(p(&c, "t").to_string(), "t");
}

#[test]
fn gauss_rationals_are_reduced() {
    let a = GaussRational::new(Rat::new(2, -4), Rat::new(3, 9));
    assert_eq!(a, GaussRational::new(Rat::new(-1, 2), Rat::new(1, 3)));
    assert_eq!(a.mul(&a.inv()), GaussRational::one());
}

#[test]
fn json_round_trip() {
    let c = ctx();
    let x = p(&c, "3/2*t0^(1/2)*t1^-1 - i*t1 + 7");
    let j = serde_json::to_string(&x.to_json()).unwrap();
    let back = MultiLaurent::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    assert_eq!(back, x);
}

#[test]
fn exact_division() {
    let c = ctx();
    let a = p(&c, "t0 - 1");
    let b = p(&c, "t1^(1/2) + t0^2");
    assert_eq!(a.mul_ref(&b).div_exact(&a).unwrap(), b);
    assert!(b.div_exact(&a).is_none());
}

fn poly() -> impl Strategy<Value = MultiLaurent> {
    prop::collection::vec(((-3i32..=3, -3i32..=3), -4i64..=4, -2i64..=2), 0..5).prop_map(|terms| {
        let c = ctx();
        let terms = terms.into_iter().map(|((a, b), re, im)| (vec![a, b], GaussRational::new(Rat::from_int(re), Rat::from_int(im)))).collect();
        MultiLaurent::from_terms(&c, terms).unwrap()
    })
}

fn point() -> impl Strategy<Value = Vec<GaussRational>> {
    prop::collection::vec((1i64..=5, 1i64..=3).prop_map(|(n, d)| GaussRational::real(Rat::new(n, d))), 2)
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.add_ref(&b), b.add_ref(&a));
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        prop_assert_eq!(a.add_ref(&b).add_ref(&c), a.add_ref(&b.add_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
    }

    #[test]
    fn substitution_is_a_morphism(a in poly(), b in poly(), e in (-2i32..=2, -2i32..=2, -2i32..=2, -2i32..=2)) {
        let dst = VarContext::plain(&["x", "y"]);
        let vals = [MultiLaurent::monomial(&dst, GaussRational::one(), &[e.0, e.1]), MultiLaurent::monomial(&dst, GaussRational::from_int(-1), &[e.2, e.3])];
        let s = |q: &MultiLaurent| q.substitute(&dst, &vals).unwrap();
        prop_assert_eq!(s(&a.mul_ref(&b)), s(&a).mul_ref(&s(&b)));
        prop_assert_eq!(s(&a.add_ref(&b)), s(&a).add_ref(&s(&b)));
    }

    #[test]
    fn eval_after_substitution(a in poly(), pt in point(), e in (-2i32..=2, -2i32..=2)) {
        let dst = VarContext::plain(&["x", "y"]);
        let vals = [MultiLaurent::monomial(&dst, GaussRational::one(), &[e.0, 0]), MultiLaurent::monomial(&dst, GaussRational::one(), &[0, e.1])];
        let pushed = [pt[0].pow(e.0), pt[1].pow(e.1)];
        prop_assert_eq!(a.substitute(&dst, &vals).unwrap().eval(&pt).unwrap(), a.eval(&pushed).unwrap());
    }

    #[test]
    fn parse_round_trip(a in poly()) {
        prop_assert_eq!(MultiLaurent::parse(&ctx(), &a.to_string()).unwrap(), a);
    }
}
