use std::sync::Arc;

use knotpoly::laurent::{GaussRational, MultiLaurent, Rat, VarContext};
use knotpoly::rmatrices::{build_alexander, build_lambda1, build_lambda_minus1, build_sl3, build_v1, rotation_composite};
use knotpoly::tensorops::SparseOp;
use proptest::prelude::*;

fn p(c: &Arc<VarContext>, s: &str) -> MultiLaurent {
    MultiLaurent::parse(c, s).unwrap()
}

fn diag(c: &Arc<VarContext>, xs: &[&str]) -> SparseOp {
    let d: Vec<MultiLaurent> = xs.iter().map(|s| p(c, s)).collect();
    SparseOp::diagonal(c, xs.len(), 1, &d)
}

#[test]
fn composition() {
    let e = build_alexander();
    let id = SparseOp::identity(&e.ctx, 2, 2);
    assert_eq!(id.compose(&e.r).unwrap(), e.r);
    assert!(e.r.compose(&e.r_inv).unwrap().is_identity());
    assert_eq!(e.h.compose(&e.h).unwrap().as_scalar_multiple_of_identity().unwrap(), p(&e.ctx, "t"));
}

#[test]
fn tensor_products() {
    let c = VarContext::plain(&["a", "b", "c", "d"]);
    let id = SparseOp::identity(&c, 2, 1);
    assert_eq!(id.tensor(&id).unwrap(), SparseOp::identity(&c, 2, 2));
    let got = diag(&c, &["a", "b"]).tensor(&diag(&c, &["c", "d"])).unwrap();
    let want: Vec<MultiLaurent> = ["a*c", "a*d", "b*c", "b*d"].iter().map(|s| p(&c, s)).collect();
    assert_eq!(got.diagonal_entries().unwrap(), want);
    let e = build_alexander();
    let hh = e.h.tensor(&e.h).unwrap().diagonal_entries().unwrap();
    let want: Vec<MultiLaurent> = ["t", "-t", "-t", "t"].iter().map(|s| p(&e.ctx, s)).collect();
    assert_eq!(hh, want);
}

fn swap(c: &Arc<VarContext>, d: usize) -> SparseOp {
    let entries = (0..d).flat_map(|i| (0..d).map(move |j| (j * d + i, i * d + j, MultiLaurent::one(c)))).collect();
    SparseOp::from_flat(c, d, 2, entries).unwrap()
}

#[test]
fn two_site_embeddings() {
    let c = VarContext::plain(&["t"]);
    let id2 = SparseOp::identity(&c, 3, 2);
    assert_eq!(SparseOp::embed_two_site(&id2, 1, 2, 3).unwrap(), SparseOp::identity(&c, 3, 3));
    let s = swap(&c, 3);
    assert_eq!(SparseOp::embed_two_site(&s, 1, 2, 2).unwrap(), s);
    let big = SparseOp::embed_two_site(&s, 1, 3, 3).unwrap();
    assert!(big.get(&[3, 2, 1], &[1, 2, 3]).unwrap().is_one());
    assert_eq!(big.nnz(), 27);
}

#[test]
fn partial_traces() {
    let c = VarContext::plain(&["t"]);
    let id = SparseOp::identity(&c, 3, 2);
    assert_eq!(id.partial_trace(2).unwrap().as_scalar_multiple_of_identity().unwrap(), MultiLaurent::from_int(&c, 3));
    let a = SparseOp::from_flat(&c, 2, 1, vec![(0, 1, p(&c, "t")), (1, 1, p(&c, "2"))]).unwrap();
    let b = diag(&c, &["t", "1 - t"]);
    assert_eq!(a.tensor(&b).unwrap().partial_trace(2).unwrap(), a.scale(&b.trace()));
    let e = build_alexander();
    let id1 = SparseOp::identity(&e.ctx, 2, 1);
    assert!(id1.tensor(&e.h).unwrap().compose(&e.r).unwrap().partial_trace(2).unwrap().is_identity());
}

#[test]
fn rotations() {
    let c = VarContext::plain(&["t"]);
    let r = SparseOp::identity(&c, 2, 2).rot_left().unwrap();
    for i in 1..=2 {
        for j in 1..=2 {
            assert!(r.get(&[j, j], &[i, i]).unwrap().is_one());
        }
    }
    assert_eq!(r.nnz(), 4);
    let e = build_alexander();
    assert!(rotation_composite(&e.r, &e.r_inv, &e.h).is_identity());
}

#[test]
fn scalar_detection_and_inverses() {
    let c = VarContext::plain(&["t"]);
    let three = SparseOp::scalar(&MultiLaurent::from_int(&c, 3), 2, 1);
    assert_eq!(three.as_scalar_multiple_of_identity().unwrap(), MultiLaurent::from_int(&c, 3));
    assert!(diag(&c, &["1", "2"]).as_scalar_multiple_of_identity().is_none());
    assert!(SparseOp::identity(&c, 2, 2).invert().unwrap().is_identity());
    let e = build_alexander();
    assert_eq!(e.h.invert().unwrap(), diag(&e.ctx, &["t^(-1/2)", "-t^(-1/2)"]));
    let z = e.r.sub(&e.r_inv).unwrap().as_scalar_multiple_of_identity().unwrap();
    assert_eq!(z, p(&e.ctx, "t^(-1/2) - t^(1/2)"));
}

#[test]
fn catalog_inverses() {
    for e in [build_alexander(), build_v1(&GaussRational::one()), build_lambda1(), build_lambda_minus1(1).unwrap(), build_sl3()] {
        let r_inv = e.r.invert().unwrap();
        assert!(r_inv.compose(&e.r).unwrap().is_identity(), "{}", e.name);
        assert!(e.r.compose(&r_inv).unwrap().is_identity(), "{}", e.name);
        let h_inv = e.h.invert().unwrap();
        assert!(h_inv.compose(&e.h).unwrap().is_identity(), "{}", e.name);
    }
}

#[test]
fn json_round_trip() {
    let e = build_sl3();
    let j = serde_json::to_string(&e.r.to_json()).unwrap();
    assert_eq!(SparseOp::from_json(&serde_json::from_str(&j).unwrap(), None).unwrap(), e.r);
}

fn ctx() -> Arc<VarContext> {
    VarContext::plain(&["x", "y"])
}

fn op(arity: usize) -> impl Strategy<Value = SparseOp> {
    let size = 2usize.pow(arity as u32);
    prop::collection::vec((0..size, 0..size, -3i64..=3, -1i32..=1), 0..6).prop_map(move |es| {
        let c = ctx();
        let entries = es.into_iter().map(|(r, col, k, e)| (r, col, MultiLaurent::monomial(&c, GaussRational::real(Rat::from_int(k)), &[e, 1 - e]))).collect();
        SparseOp::from_flat(&c, 2, arity, entries).unwrap()
    })
}

proptest! {
    #[test]
    fn composition_laws(a in op(1), b in op(1), c in op(1), d in op(1)) {
        prop_assert_eq!(a.compose(&b).unwrap().compose(&c).unwrap(), a.compose(&b.compose(&c).unwrap()).unwrap());
        prop_assert_eq!(a.tensor(&b).unwrap().tensor(&c).unwrap(), a.tensor(&b.tensor(&c).unwrap()).unwrap());
        let lhs = a.tensor(&b).unwrap().compose(&c.tensor(&d).unwrap()).unwrap();
        let rhs = a.compose(&c).unwrap().tensor(&b.compose(&d).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn trace_laws(f in op(2), g in op(1)) {
        prop_assert_eq!(f.tensor(&g).unwrap().partial_trace(3).unwrap(), f.scale(&g.trace()));
        for i in 1..=2 {
            prop_assert_eq!(f.partial_trace(i).unwrap().trace(), f.trace());
        }
    }

    #[test]
    fn rotations_are_invertible(f in op(2)) {
        prop_assert_eq!(f.rot_left().unwrap().rot_left_inverse().unwrap(), f.clone());
        prop_assert_eq!(f.rot_right().unwrap().rot_right_inverse().unwrap(), f.clone());
        prop_assert_eq!(f.rot_left().unwrap().nnz(), f.nnz());
    }
}
