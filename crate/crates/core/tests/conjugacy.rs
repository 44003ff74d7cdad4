use knotpoly::braidrep::BraidWord;
use knotpoly::conjugacy::*;
use knotpoly::invariants::{pairs, Lam1Substitution};
use knotpoly::laurent::{GaussRational, MultiLaurent};
use knotpoly::rmatrices::{build_alexander, build_lambda_minus1, build_sl3};
use knotpoly::tensorops::SparseOp;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn conjugate_trivial_and_scalar() {
    let e = build_alexander();
    let (same, rep) = conjugate(&e, &SparseOp::identity(&e.ctx, 2, 1)).unwrap();
    assert_eq!(same.r, e.r);
    assert_eq!(same.h, e.h);
    assert!(rep.all_pass());
    let three = MultiLaurent::from_int(&e.ctx, 3);
    let (scaled, _) = conjugate(&e, &SparseOp::scalar(&three, 2, 1)).unwrap();
    assert_eq!(scaled.r, e.r);
}

#[test]
fn conjugate_preserves_axioms() {
    let e = build_alexander();
    let u = MultiLaurent::var(&e.ctx, 0);
    let d = SparseOp::diagonal(&e.ctx, 2, 1, &[MultiLaurent::one(&e.ctx), u.clone()]);
    let (c, rep) = conjugate(&e, &d).unwrap();
    assert!(rep.all_pass());
    // R preserves weight, so a diagonal map leaves it unchanged
    assert_eq!(c.r, e.r);
    let one = MultiLaurent::one(&e.ctx);
    let upper = SparseOp::from_flat(&e.ctx, 2, 1, vec![(0, 0, one.clone()), (0, 1, u), (1, 1, one)]).unwrap();
    let (c, rep) = conjugate(&e, &upper).unwrap();
    assert!(rep.all_pass());
    assert_ne!(c.r, e.r);
    let one = MultiLaurent::one(&e.ctx);
    let swap = SparseOp::from_flat(&e.ctx, 2, 1, vec![(0, 1, one.clone()), (1, 0, one)]).unwrap();
    assert!(conjugate(&e, &swap).unwrap().1.all_pass());
    assert!(conjugate(&e, &SparseOp::zero(&e.ctx, 2, 1)).is_err());
}

#[test]
fn lemma_rr_holds() {
    let rep = check_lemma_rr().unwrap();
    assert!(rep.h.pass(), "{:?}", rep.h);
    assert!(rep.r.pass(), "{:?}", rep.r);
}

#[test]
fn lemma_rr_perturbed_theta_fails() {
    let rep = check_lemma_rr_with(&[0, 2, 1, 3]).unwrap();
    assert!(!rep.r.pass());
    assert!(rep.r.first.is_some());
}

#[test]
fn phi_small_cases() {
    let d = WeakConjugacyData::standard(1);
    let p1 = build_phi_n(&d, 1).unwrap();
    assert_eq!(p1.phi, d.sigma);
    let p2 = build_phi_n(&d, 2).unwrap();
    let id = SparseOp::identity(&d.ctx, 8, 1);
    let direct = d.sigma.tensor(&d.sigma).unwrap().compose(&d.nu.tensor(&id).unwrap()).unwrap().compose(&d.gamma).unwrap();
    assert_eq!(p2.phi, direct);
    for n in 2..=4 {
        assert!(build_phi_n(&d, n).unwrap().factorization.unwrap().pass(), "n={n}");
    }
}

#[test]
fn lemma_r2_with_both_phase_readings() {
    let sl3 = build_sl3();
    let lam1 = build_lambda_minus1(1).unwrap();
    let lamm1 = build_lambda_minus1(-1).unwrap();
    assert!(check_lemma_r2(&WeakConjugacyData::standard(1), &sl3, &lam1, Lam1Substitution::Matched).unwrap().pass());
    assert!(check_lemma_r2(&WeakConjugacyData::standard(-1), &sl3, &lamm1, Lam1Substitution::Matched).unwrap().pass());
    for r in [1, -1] {
        let lam = if r == 1 { &lam1 } else { &lamm1 };
        assert!(!check_lemma_r2(&WeakConjugacyData::literal(r), &sl3, lam, Lam1Substitution::Matched).unwrap().pass());
    }
    let stated = check_lemma_r2(&WeakConjugacyData::standard(1), &sl3, &lam1, Lam1Substitution::Stated).unwrap();
    assert!(!stated.pass());
}

#[test]
fn lemma_r2_needs_sigma_phase() {
    let sl3 = build_sl3();
    let lam = build_lambda_minus1(1).unwrap();
    let g = GaussRational::zeta().inv();
    let d = WeakConjugacyData::new(GaussRational::one(), g);
    assert!(!check_lemma_r2(&d, &sl3, &lam, Lam1Substitution::Matched).unwrap().pass());
}

#[test]
fn one_dim_block_entry() {
    let sl3 = build_sl3();
    let lam = build_lambda_minus1(1).unwrap();
    let x = knotpoly::invariants::substitute_lambda_minus1(&lam.r.get_flat(0, 0), Lam1Substitution::Matched);
    assert_eq!(x, MultiLaurent::parse(&sl3.ctx, "t1^2*t2^2").unwrap());
    assert_eq!(sl3.r.get_flat(0, 0), x);
}

#[test]
fn lemma_rn_n3() {
    let d = WeakConjugacyData::standard(1);
    let (sl3, lam) = (pairs::sl3(), pairs::lambda_minus1());
    for k in 1..=2 {
        assert!(check_lemma_rn(&d, sl3, lam, Lam1Substitution::Matched, 3, k).unwrap().pass(), "k={k}");
    }
    assert!(check_lemma_rn(&d, sl3, lam, Lam1Substitution::Matched, 3, 3).is_err());
}

#[test]
fn bc2_on_samples() {
    let d = WeakConjugacyData::standard(1);
    let (sl3, lam) = (pairs::sl3(), pairs::lambda_minus1());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 2..=3 {
        let tangles = sample_tangles(sl3, &mut rng, n, 10).unwrap();
        let rep = check_bc2(&d, sl3, lam, Lam1Substitution::Matched, n, &tangles).unwrap();
        assert!(rep.pass(), "{rep:?}");
        assert_eq!(rep.gn.total, 10);
    }
}

#[test]
fn second_line_commutes_with_r() {
    // (γ)_{1,3}(γ)_{2,3} and ν⊗ν commute with (R)_{1,2}
    let d = WeakConjugacyData::standard(1);
    let sl3 = pairs::sl3();
    let r12 = SparseOp::embed_two_site(&sl3.r, 1, 2, 3).unwrap();
    let g = SparseOp::embed_two_site(&d.gamma, 1, 3, 3).unwrap().compose(&SparseOp::embed_two_site(&d.gamma, 2, 3, 3).unwrap()).unwrap();
    assert_eq!(g.compose(&r12).unwrap(), r12.compose(&g).unwrap());
    let nn = d.nu.tensor(&d.nu).unwrap();
    assert_eq!(nn.compose(&sl3.r).unwrap(), sl3.r.compose(&nn).unwrap());
    // γ alone does not commute with R
    assert_ne!(d.gamma.compose(&sl3.r).unwrap(), sl3.r.compose(&d.gamma).unwrap());
}

#[test]
fn weak_conjugacy_transfer() {
    for s in ["strands=1;", "strands=2; 1 1", "strands=3; 1 2 1 2", "strands=3; 1 -2 1 -2"] {
        assert!(check_lemma_weak_conjugacy_transfer(&BraidWord::parse(s).unwrap()).unwrap().pass(), "{s}");
    }
}
