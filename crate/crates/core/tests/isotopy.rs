use std::collections::HashMap;

use knotpoly::braidrep::{rho, BraidWord};
use knotpoly::isotopy_solver::*;
use knotpoly::laurent::{GaussRational, MultiLaurent};
use knotpoly::linalg::RationalFn;
use knotpoly::rmatrices::*;
use knotpoly::tensorops::SparseOp;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0)
}

/// Nonzero pattern of the displayed 16×16 operator, one string per row.
const V1_PATTERN: [&str; 16] = [
    "a...............",
    ".b..j...........",
    "..d.....s.......",
    "...f..m..u..B...",
    ".c..k...........",
    ".....l..........",
    "...g..n..v..C...",
    ".......q.....F..",
    "..e.....t.......",
    "...h..o..w..D...",
    "..........y.....",
    "...........z..H.",
    "...i..p..x..E...",
    ".......r.....G..",
    "...........A..I.",
    "...............J",
];

#[test]
fn alexander_ansatz_shapes() {
    let e = build_alexander();
    let a2 = graded_ansatz(&e, 2, AnsatzOrder::RowMajor);
    assert_eq!(a2.positions, vec![(0, 0), (1, 1), (1, 2), (2, 1), (2, 2), (3, 3)]);
    assert_eq!(a2.names, ["a", "b", "c", "d", "e", "f"]);
    let a1 = graded_ansatz(&e, 1, AnsatzOrder::RowMajor);
    assert_eq!(a1.positions, vec![(0, 0), (1, 1)]);
    assert_eq!(a1.names, ["alpha", "beta"]);
}

#[test]
fn v1_ansatz_matches_display() {
    let e = build_v1(&GaussRational::one());
    let a = graded_ansatz(&e, 2, AnsatzOrder::ColumnMajor);
    assert_eq!(a.len(), 36);
    let mut shown = HashMap::new();
    for (r, line) in V1_PATTERN.iter().enumerate() {
        for (c, ch) in line.chars().enumerate() {
            if ch != '.' {
                shown.insert(ch.to_string(), (r, c));
            }
        }
    }
    assert_eq!(shown.len(), 36);
    for (name, pos) in a.names.iter().zip(&a.positions) {
        assert_eq!(shown[name], *pos, "{name}");
    }
}

#[test]
fn p1_forces_scalars() {
    for e in [build_alexander(), build_v1(&GaussRational::one()), build_v1(&GaussRational::from_int(-1)), build_sl3()] {
        let (a, s) = solve_p1(&e).unwrap();
        assert_eq!(s.nullity(), 1, "{}", e.name);
        for p in 0..a.len() {
            let (r, c) = a.positions[p];
            let want = if r == c { RationalFn::one(&e.ctx) } else { RationalFn::zero(&e.ctx) };
            assert_eq!(s.basis[0][p], want, "{} {}", e.name, a.names[p]);
        }
    }
}

#[test]
fn zero_system_has_rank_zero() {
    let e = build_alexander();
    let sys = knotpoly::linalg::LinearSystem::new(&e.ctx, vec!["x".into(), "y".into()]);
    let s = sys.solve(&[]);
    assert_eq!(s.rank, 0);
    assert_eq!(rank(&sys, &s, &mut rng()).sampled, vec![0, 0, 0]);
}

#[test]
fn alexander_p2() {
    let e = build_alexander();
    let res = solve_and_verify(&e, AnsatzOrder::RowMajor, &["b", "c"], &mut rng()).unwrap();
    assert_eq!(res.rank.symbolic, 4);
    assert_eq!(res.rank.nullity(), 2);
    assert!(res.rank.agree());
    assert_eq!(res.free, ["b", "c"]);
    let (n, bad) = compare_solution(&res, &alexander_printed_solution(&e.ctx));
    assert_eq!((n, bad.len()), (4, 0));
    assert!(res.closures_agree());
    // both closures are c t^{1/2} id
    let root = RationalFn::from_poly(MultiLaurent::parse(&e.ctx, "t^(1/2)").unwrap());
    let zero = RationalFn::zero(&e.ctx);
    assert_eq!(res.left[0], vec![vec![zero.clone(), zero.clone()], vec![zero.clone(), zero.clone()]]);
    assert_eq!(res.left[1], vec![vec![root.clone(), zero.clone()], vec![zero, root]]);
}

/// Clear denominators of a coefficient list and build the operator.
fn printed_operator(e: &EnhancedRMatrix, a: &GradedAnsatz, values: &HashMap<String, RationalFn>, common: &MultiLaurent) -> SparseOp {
    let entries = a
        .names
        .iter()
        .zip(&a.positions)
        .map(|(n, &(r, c))| (r, c, values[n].scale(common).as_laurent().expect("denominator cleared").clone()))
        .collect();
    SparseOp::from_flat(&e.ctx, e.dim, 2, entries).unwrap()
}

fn satisfies_p2(e: &EnhancedRMatrix, f: &SparseOp) -> bool {
    let id = SparseOp::identity(&e.ctx, e.dim, 1);
    let r2 = e.r.compose(&e.r).unwrap();
    let first = r2.compose(f).unwrap() == f.compose(&r2).unwrap();
    let r12 = SparseOp::embed_two_site(&e.r, 1, 2, 3).unwrap();
    let r23 = SparseOp::embed_two_site(&e.r, 2, 3, 3).unwrap();
    let lhs = r12.compose(&r23).unwrap().compose(&f.tensor(&id).unwrap()).unwrap();
    let rhs = id.tensor(f).unwrap().compose(&r12).unwrap().compose(&r23).unwrap();
    first && lhs == rhs
}

#[test]
fn v1_p2_at_r1() {
    let e = build_v1(&GaussRational::one());
    let res = solve_and_verify(&e, AnsatzOrder::ColumnMajor, &["E", "i", "p"], &mut rng()).unwrap();
    assert_eq!(res.rank.symbolic, 33);
    assert_eq!(res.rank.nullity(), 3);
    assert!(res.rank.agree());
    assert_eq!(res.free, ["E", "i", "p"]);
    assert!(res.closures_agree());
    let printed = v1_printed_solution(&e.ctx);
    let (n, bad) = compare_solution(&res, &printed);
    assert_eq!(n, 33);
    let names: Vec<&str> = bad.iter().map(|b| b.name.as_str()).collect();
    assert_eq!(names, ["h", "w"]);
    let c = check_v1_closures(&res, &printed).unwrap();
    assert!(c.left_matches && c.right_matches && c.printed_x1_eq_x4);
}

#[test]
fn v1_printed_solution_checked_directly() {
    // substitute the printed expressions into both operator equations,
    // independently of the elimination
    let e = build_v1(&GaussRational::one());
    let a = graded_ansatz(&e, 2, AnsatzOrder::ColumnMajor);
    let printed = v1_printed_solution(&e.ctx);
    let common = MultiLaurent::parse(&e.ctx, "t0*t1^2*(t0-1)").unwrap();
    let fixes = [("h", 1, "1-t1"), ("w", 2, "-(-2+t1+t0) // t1*(-1+t0)")];
    for k in 0..3 {
        let mut values: HashMap<String, RationalFn> = printed.iter().map(|p| (p.name.clone(), p.coefficients[k].clone())).collect();
        for (j, free) in ["E", "i", "p"].iter().enumerate() {
            values.insert(free.to_string(), if j == k { RationalFn::one(&e.ctx) } else { RationalFn::zero(&e.ctx) });
        }
        let as_printed = printed_operator(&e, &a, &values, &common);
        // only the i column (h) and the p column (w) carry the discrepancies
        assert_eq!(satisfies_p2(&e, &as_printed), k == 0, "free parameter {k}");
        for (name, slot, fixed) in fixes {
            if slot == k {
                values.insert(name.to_string(), parse_rational(&e.ctx, fixed).unwrap());
            }
        }
        assert!(satisfies_p2(&e, &printed_operator(&e, &a, &values, &common)), "corrected, free parameter {k}");
    }
}

#[test]
fn v1_p2_at_r_minus1() {
    let e = build_v1(&GaussRational::from_int(-1));
    let res = solve_and_verify(&e, AnsatzOrder::ColumnMajor, &["E", "i", "p"], &mut rng()).unwrap();
    assert_eq!(res.rank.nullity(), 3);
    assert!(res.closures_agree());
}

#[test]
fn braids_lie_in_solution_space() {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    for (e, order) in [(build_alexander(), AnsatzOrder::RowMajor), (build_v1(&GaussRational::one()), AnsatzOrder::ColumnMajor)] {
        let a = graded_ansatz(&e, 2, order);
        let sys = build_p2_system(&e, &a).unwrap();
        for _ in 0..5 {
            let b = BraidWord::random(&mut r, 2, 5);
            let x = a.coordinates(&rho(&e, &b).unwrap()).expect("weight preserving");
            for (coeffs, _) in &sys.rows {
                let mut acc = MultiLaurent::zero(&e.ctx);
                for (j, c) in coeffs {
                    acc.add_mul_assign(c, &x[*j]);
                }
                assert!(acc.is_zero(), "{} {b}", e.name);
            }
        }
    }
}

#[test]
fn tangle_certificate_matches_symbolic_rank() {
    let e = build_v1(&GaussRational::one());
    let res = solve_and_verify(&e, AnsatzOrder::ColumnMajor, &["E", "i", "p"], &mut rng()).unwrap();
    let c = certify_p2(&e, AnsatzOrder::ColumnMajor, 6, &mut rng()).unwrap();
    assert!(c.basis_solves && c.closures_agree);
    assert_eq!(c.rank(), Some(res.rank.symbolic));
}

#[test]
fn restricted_solutions_extend_tangle_span() {
    let e = build_alexander();
    let a = graded_ansatz(&e, 2, AnsatzOrder::RowMajor);
    let sys = build_p2_system(&e, &a).unwrap();
    let id = a.coordinates(&SparseOp::identity(&e.ctx, e.dim, 2)).unwrap();
    let point = knotpoly::linalg::random_point(&mut rng(), e.ctx.len());
    let supports = sys.kernel_supports_extending(&point, &[id], 1, 20, &mut rng()).unwrap();
    let sol = sys.restrict(&supports[0]).solve(&[]);
    assert!(sol.nullity() >= 1);
    assert!(knotpoly::linalg::clear_denominators(&sol.basis[0]).is_some());
}

#[test]
fn lambda_minus1_rank_certified() {
    let e = build_lambda_minus1(1).unwrap();
    let c = certify_lambda_minus1(&e, 10, &mut rng()).unwrap();
    assert!(c.basis_solves && c.closures_agree);
    assert_eq!(c.rank(), Some(336));
    assert_eq!(c.independent, 10);
}
