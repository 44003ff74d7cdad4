use knotpoly::laurent::{GaussRational, MultiLaurent};
use knotpoly::rmatrices::*;
use knotpoly::tensorops::SparseOp;

fn assert_all_pass(e: &EnhancedRMatrix) {
    let rep = check_axioms(e);
    assert!(rep.all_pass(), "{rep}");
}

#[test]
fn alexander_axioms() {
    assert_all_pass(&build_alexander());
}

#[test]
fn alexander_entries() {
    let e = build_alexander();
    let ctx = e.ctx.clone();
    assert_eq!(e.r.get(&[2, 1], &[1, 2]).unwrap(), MultiLaurent::parse(&ctx, "t^(1/2)").unwrap());
    assert_eq!(e.r.get(&[1, 1], &[1, 1]).unwrap(), MultiLaurent::parse(&ctx, "t^(-1/2)").unwrap());
}

#[test]
fn alexander_characteristic_identity() {
    let e = build_alexander();
    let diff = e.r.sub(&e.r_inv).unwrap();
    let lambda = diff.as_scalar_multiple_of_identity().unwrap();
    assert_eq!(lambda, MultiLaurent::parse(&e.ctx, "t^(-1/2) - t^(1/2)").unwrap());
}

#[test]
fn v1_axioms_unit_r() {
    assert_all_pass(&build_v1(&GaussRational::one()));
    assert_all_pass(&build_v1(&GaussRational::from_int(-1)));
}

#[test]
fn v1_full_and_block_forms_agree() {
    for r in [GaussRational::one(), GaussRational::from_int(-1), rational(2, 1), rational(5, 3)] {
        assert_eq!(v1_matrix(&r, false), v1_matrix(&r, true));
    }
}

#[test]
fn v1_block_entries() {
    let m = v1_matrix(&GaussRational::one(), false);
    let ctx = m.ctx().clone();
    assert_eq!(m.get(&[2, 1], &[1, 2]).unwrap(), MultiLaurent::parse(&ctx, "-t0").unwrap());
    assert_eq!(m.get(&[2, 1], &[2, 1]).unwrap(), MultiLaurent::parse(&ctx, "t0 - 1").unwrap());
}

#[test]
fn v1_identity_h_fails_trace_axiom() {
    let e = build_v1(&GaussRational::one());
    let id = SparseOp::identity(&e.ctx, 4, 1);
    let rep = check_axioms_with("v1,h=id", &e.r, &e.r_inv, &id);
    assert!(!rep.get("1b+").unwrap().pass);
}

#[test]
fn lambda1_axioms() {
    let e = build_lambda1();
    assert_all_pass(&e);
    let h2 = e.h.compose(&e.h).unwrap();
    assert_eq!(h2.as_scalar_multiple_of_identity().unwrap(), MultiLaurent::parse(&e.ctx, "t0*t1").unwrap());
    assert_eq!(e.r.get(&[1, 1], &[1, 1]).unwrap(), MultiLaurent::parse(&e.ctx, "t0^(-1/2)*t1^(-1/2)").unwrap());
}

#[test]
fn lambda_minus1_axioms() {
    assert_all_pass(&build_lambda_minus1(1).unwrap());
    assert_all_pass(&build_lambda_minus1(-1).unwrap());
    assert!(build_lambda_minus1(2).is_err());
}

#[test]
fn lambda_minus1_blocks() {
    let e = build_lambda_minus1(1).unwrap();
    let p = |s: &str| MultiLaurent::parse(&e.ctx, s).unwrap();
    assert_eq!(e.r.get(&[2, 2], &[2, 2]).unwrap(), p("-t^-1"));
    let raw = lambda_minus1_matrix(1);
    assert_eq!(raw.get(&[1, 2], &[1, 2]).unwrap(), p("0"));
    assert_eq!(raw.get(&[1, 2], &[2, 1]).unwrap(), p("1"));
    assert_eq!(raw.get(&[2, 1], &[1, 2]).unwrap(), p("s"));
    assert_eq!(raw.get(&[2, 1], &[2, 1]).unwrap(), p("1 - s"));
}

#[test]
fn sl3_axioms() {
    assert_all_pass(&build_sl3());
}

#[test]
fn sl3_as_printed_fails() {
    let rep = check_axioms(&build_sl3_printed());
    assert!(!rep.get("1d").unwrap().pass);
    assert!(!rep.get("1b+").unwrap().pass);
    assert!(rep.get("1a").unwrap().pass);
}

#[test]
fn sl3_blocks() {
    let e = build_sl3();
    let p = |s: &str| MultiLaurent::parse(&e.ctx, s).unwrap();
    assert_eq!(e.r.get(&[1, 1], &[1, 1]).unwrap(), p("t1^2*t2^2"));
    assert_eq!(e.r.get(&[2, 6], &[6, 2]).unwrap(), p("-t1^-1*t2*i"));
    assert_eq!(e.r.get(&[6, 2], &[6, 2]).unwrap(), p("-t1^-1*t2*(t1*t2 + t1^-1*t2^-1)"));
}

#[test]
fn gradings_preserved() {
    for e in [build_alexander(), build_v1(&GaussRational::one()), build_lambda1(), build_lambda_minus1(1).unwrap(), build_sl3()] {
        for g in &e.gradings {
            assert!(check_grading_preserved(&e, g), "{} {}", e.name, g.label);
        }
    }
}

#[test]
fn sl3_and_lambda_minus1_share_support() {
    assert!(same_support(&build_sl3().r, &build_lambda_minus1(1).unwrap().r));
}

#[test]
fn inverses_are_two_sided() {
    for e in [build_alexander(), build_v1(&GaussRational::one()), build_lambda1(), build_lambda_minus1(1).unwrap(), build_sl3()] {
        let id = SparseOp::identity(&e.ctx, e.dim, 2);
        assert_eq!(e.r.compose(&e.r_inv).unwrap(), id);
        assert_eq!(e.r_inv.compose(&e.r).unwrap(), id);
        let hi = e.h.invert().unwrap();
        assert!(e.h.compose(&hi).unwrap().is_identity());
    }
}

#[test]
fn enhancement_solve_v1() {
    for r in [GaussRational::one(), GaussRational::from_int(-1)] {
        let e = build_v1(&r);
        let s = solve_diagonal_enhancement(&e.r, &e.r_inv);
        let acc = s.accepted();
        assert_eq!(acc.len(), 1);
        let want: Vec<MultiLaurent> = [-1, 1, 1, -1].iter().map(|&x| MultiLaurent::from_int(&e.ctx, x)).collect();
        assert_eq!(acc[0], &want);
    }
}

#[test]
fn enhancement_solve_alexander() {
    let e = build_alexander();
    let s = solve_diagonal_enhancement(&e.r, &e.r_inv);
    assert_eq!(s.solution.nullity(), 0);
    let acc = s.accepted();
    assert_eq!(acc.len(), 1);
    assert_eq!(acc[0], &e.h.diagonal_entries().unwrap());
}

#[test]
fn json_round_trip() {
    let e = build_lambda1();
    let j = serde_json::to_string(&e.to_json()).unwrap();
    let back = EnhancedRMatrix::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    assert_eq!(back.r, e.r);
    assert_eq!(back.h, e.h);
}
